#ifndef CURVLAB_ERRORS_HPP
#define CURVLAB_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace curvlab {

/// Thrown when two objects live in incompatible dimensions.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an input violates a structural precondition (asymmetry,
/// non-monotone grid, closure failure, ...).
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Scalar curvature too close to zero for a division by s.
struct ScalarFloorError : std::domain_error {
  std::vector<int> offending_points;
  ScalarFloorError(const std::string& what, std::vector<int> pts)
      : std::domain_error(what), offending_points(std::move(pts)) {}
};

/// Operation requires a different profile topology.
struct TopologyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Shooting / root finding did not converge.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace curvlab

#endif
