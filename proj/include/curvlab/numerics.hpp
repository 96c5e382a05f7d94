#ifndef CURVLAB_NUMERICS_HPP
#define CURVLAB_NUMERICS_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace curvlab {

/// Finite-difference weights for the m-th derivative at point z from the
/// nodes xs (Fornberg's recursion). Row k of the result holds the weights
/// for derivative order k, k = 0..max_order.
Eigen::MatrixXd fornberg_weights(double z, const Eigen::VectorXd& xs, int max_order);

/// Composite Simpson rule on a uniform grid with spacing h. Falls back to a
/// 3/8 block at the right end when the interval count is odd.
double simpson(const Eigen::VectorXd& y, double h);

/// Least-squares slope of log(err) against log(h): the observed convergence
/// order of a residual sequence under grid refinement.
double estimate_order(const std::vector<double>& hs, const std::vector<double>& errs);

/// Order from a single refinement step h -> h/ratio.
double estimate_order(double err_coarse, double err_fine, double ratio = 2.0);

/// Dense-output adaptive Runge-Kutta 4(5) (Dormand-Prince) integrator.
///
/// Integrates y' = f(t, y) from t0 to t1, invoking `observer` (if set) at
/// every accepted step. `step_to` integrates exactly to the requested time.
class AdaptiveRK45 {
 public:
  using Rhs = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

  AdaptiveRK45(Rhs rhs, double rtol = 1e-10, double atol = 1e-12)
      : rhs_(std::move(rhs)), rtol_(rtol), atol_(atol) {}

  /// Integrate from (t, y) to t_end; y is updated in place.
  /// Returns false if the step size underflowed.
  bool integrate(double& t, Eigen::VectorXd& y, double t_end);

  /// Called after each accepted step with (t, y).
  std::function<void(double, const Eigen::VectorXd&)> observer;

  /// Optional stop condition checked after every accepted step; integration
  /// halts (returning true) once it fires.
  std::function<bool(double, const Eigen::VectorXd&)> stop;

  double initial_step = 1e-4;
  double max_step = 0.0;  // 0 = unbounded

 private:
  Rhs rhs_;
  double rtol_, atol_;
};

/// Root of f by damped secant iteration with bisection fallback.
/// Starts from (x0, x1); widens into a bracket when possible.
struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

RootResult find_root_secant(const std::function<double(double)>& f, double x0, double x1,
                            double xtol, double ftol, int max_iter = 80);

}  // namespace curvlab

#endif
