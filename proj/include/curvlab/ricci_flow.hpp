#ifndef CURVLAB_RICCI_FLOW_HPP
#define CURVLAB_RICCI_FLOW_HPP

#include <optional>
#include <vector>

#include "curvlab/curvature_operator.hpp"

namespace curvlab {

/// One factor of a product metric alpha(t) g_unit, where the unit metric is
/// Einstein with tensor Ricci constant rho (= (p-1) kappa for a round p-sphere
/// of curvature kappa; 0 for flat). Under the flow alpha' = -2 rho, so the
/// scale factors are linear in t.
struct FlowFactor {
  int dim = 0;
  double rho = 0.0;
  double alpha = 1.0;

  static FlowFactor sphere(int p, double alpha0) {
    return {p, static_cast<double>(p - 1), alpha0};
  }
  static FlowFactor flat(int p, double alpha0) { return {p, 0.0, alpha0}; }
  static FlowFactor einstein(double lambda, double alpha0, int dim = 0) {
    return {dim, lambda, alpha0};
  }

  /// sectional curvature of the factor at scale alpha (rho/((p-1) alpha)).
  double kappa() const { return dim >= 2 ? rho / ((dim - 1) * alpha) : 0.0; }
};

struct FlowState {
  double t = 0.0;
  std::vector<FlowFactor> factors;
  bool alive() const {
    for (const auto& f : factors)
      if (f.alpha <= 0) return false;
    return true;
  }
};

struct FlowTrace {
  std::vector<FlowState> states;
  std::optional<double> blowup_time;
  bool truncated = false;

  double dt() const {
    return states.size() > 1 ? states[1].t - states[0].t : 0.0;
  }
};

/// Curvature operator of a product-of-space-forms state in the evolving
/// orthonormal frame: block eigenvalues 2 kappa_i(t), mixed planes flat.
/// Requires every factor dim >= 2.
CurvatureOperator operator_of_state(const FlowState& state);

/// Single Einstein factor: alpha(t) = alpha0 - 2 lambda t (closed form
/// g(t) = (1 - 2 lambda t) g). Integrated with fixed-step RK4 and checked
/// against the line; blow-up at alpha = 0 is detected and the trace
/// truncated there.
FlowTrace flow_einstein(double lambda, double T, double dt = 1e-3, double alpha0 = 1.0);

/// Product of round spheres S^p(alpha0) x S^q(beta0):
/// alpha = alpha0 - 2(p-1) t, beta = beta0 - 2(q-1) t.
FlowTrace flow_product_spheres(int p, double alpha0, int q, double beta0, double T,
                               double dt);

/// General product flow.
FlowTrace flow_product(const std::vector<FlowFactor>& factors, double T, double dt);

/// max_t |dR/dt - Q(R(t))| / max(1, |R(t)|^2) with dR/dt by centered
/// differences in the evolving frame; Delta R = 0 along these flows, so the
/// evolution equation reduces to dR/dt = Q(R).
struct EvolutionResidual {
  double max_relative = 0.0;
  std::vector<double> per_step;  // aligned with interior trace indices
};
EvolutionResidual curvature_evolution_residual(const FlowTrace& trace);

/// max relative deviation of the integrated scale factors from the exact
/// linear solution.
double linear_solution_error(const FlowTrace& trace);

}  // namespace curvlab

#endif
