#ifndef CURVLAB_QUASI_EINSTEIN_HPP
#define CURVLAB_QUASI_EINSTEIN_HPP

#include <functional>
#include <optional>

#include "curvlab/profile_geometry.hpp"

namespace curvlab {

/// The quasi-Einstein parameter m: a positive integer or infinity. Infinity
/// is a distinguished value (the gradient-Ricci-soliton case): every 1/m
/// term is exactly zero, not a large-m approximation.
struct MParam {
  bool is_finite = false;
  int value = 0;

  static MParam finite(int m) {
    if (m <= 0) throw ContractError("m must be a positive integer");
    return {true, m};
  }
  static MParam infinity() { return {false, 0}; }

  double inv() const { return is_finite ? 1.0 / value : 0.0; }
  double as_double() const;  // throws for infinity
};

/// (geometry, f, m, lambda): Ric + Hess f - (1/m) df x df = lambda g.
struct QEStructure {
  ProfileGeometry geom;
  MParam m;
  double lambda = 0.0;
};

/// Pointwise residual of the quasi-Einstein equation, component by component.
SymField qe_residual(const QEStructure& q);

/// Pointwise residual of the traced equation s + Delta f - (1/m)|grad f|^2 = lambda n.
/// Computed from the same cached fields as qe_residual, so it coincides with
/// the trace of qe_residual to rounding.
Eigen::VectorXd trace_residual(const QEStructure& q);

double max_qe_residual(const QEStructure& q);

/// Characteristic constant of a finite-m structure, from
/// Delta f - |grad f|^2 - m lambda = -m mu0 e^{2f/m} (drift Laplacian
/// reading). Constant on exact quasi-Einstein structures; the deviation is
/// the consistency check.
struct Mu0Result {
  double mean = 0.0;
  double max_deviation = 0.0;
  Eigen::VectorXd field;
};
Mu0Result mu0_of(const QEStructure& q);

/// The unique h for which the traced curvature identity
/// Delta s + 2|Ric|^2 = h s holds by construction (tensor normalization).
/// Refuses when |s| < s_floor anywhere, listing the offending points.
Eigen::VectorXd induced_h(const ProfileGeometry& g, double s_floor = 1e-6);

/// Pointwise |(h - 2 lambda) s - (4/m) r(grad f, grad f)
///            - (2/m)(|Hess f|^2 - (Delta f)^2) - <grad f, grad s>|.
Eigen::VectorXd traced_identity_residual(const QEStructure& q, const Eigen::VectorXd& h);

/// Pointwise residual of the quasi-Einstein gradient identity
/// 1/2 Delta |grad f|^2 = |Hess f|^2 - Ric(grad f, grad f) + (2/m)|grad f|^2 Delta f,
/// which holds on quasi-Einstein structures.
Eigen::VectorXd qe_gradient_identity_residual(const QEStructure& q);

/// LHS of the pointwise divergence identity behind the constant-mu rigidity
/// argument:
///   Delta s + lambda(2 lambda - mu) n + (mu - 4 lambda) Delta f
///   + (1/m)(4 lambda - mu)|grad f|^2 + 2 |Hess f - (1/m) df x df|^2.
/// Integrates to 2 int |Hess f - (1/m) df x df|^2 + (2 lambda/m) int |grad f|^2
/// on closed profiles (the divergence theorem kills Delta s and Delta f).
Eigen::VectorXd rigidity_integrand(const QEStructure& q, double mu);

enum class Verdict { Rigid, NonRigid, Inconclusive };
const char* to_string(Verdict v);

/// Integral identity report: LHS = int (h - 2 lambda) s dV against the four
/// nonnegative terms
///   2 int |Ric - (s/n) g|^2 + (2/(m^2 n)) int |grad f|^4
///   + (2 lambda/m) int |grad f|^2 + (4/n) int |Hess f|^2.
struct RigidityReport {
  double lhs = 0.0;
  double term_traceless_ricci = 0.0;
  double term_grad4 = 0.0;
  double term_grad2 = 0.0;
  double term_hess = 0.0;
  double rhs_sum() const {
    return term_traceless_ricci + term_grad4 + term_grad2 + term_hess;
  }
  Verdict verdict = Verdict::Inconclusive;
  bool lhs_nonnegative_ok = true;   // LHS >= -tol_integral
  double h_compat_residual = 0.0;   // max |h s - Delta s - 2|Ric|^2|
  double f_deviation = 0.0;         // max |f - mean f|
  double tol_integral = 1e-8;
  double tol_compat = 1e-8;
  int grid_points = 0;
};

/// Requires closed topology (divergence theorem) and an h satisfying the
/// traced identity; a user h failing it yields verdict Inconclusive since
/// the identity chain does not apply.
RigidityReport rigidity_report(const QEStructure& q, const Eigen::VectorXd& h,
                               double tol_integral = 1e-8, double tol_compat = 1e-4);

/// Coincidence test: does a global maximum of h sit at a discrete local
/// extremum of f? If so the structure is rigid and h_max <= 2 lambda.
struct CfResult {
  bool applicable = false;  // coincidence found
  bool rigid = false;
  double h_max = 0.0;
  double bound = 0.0;  // 2 lambda
  bool bound_ok = false;
  int argmax_index = -1;
};
CfResult cf_check(const QEStructure& q, const Eigen::VectorXd& h, double h_band = 1e-9,
                  double f_tol = 1e-11);

/// h-families from monotone compositions of f (each satisfies the
/// coincidence hypothesis wherever defined).
Eigen::VectorXd h_family_power(const Eigen::VectorXd& f, double a, double k);
Eigen::VectorXd h_family_exp(const Eigen::VectorXd& f, double a, double k);
Eigen::VectorXd h_family_log(const Eigen::VectorXd& f, double a, double k);
Eigen::VectorXd h_family_trig(const Eigen::VectorXd& f, double a, double b, double k);

/// Shooting solver for the radial quasi-Einstein system
///   phi'' = (n-2)(1 - phi'^2)/phi + phi' f' - lambda phi
///   f''   = lambda + (n-1) phi''/phi + (1/m) f'^2
/// from a smooth pole (phi = 0, phi' = 1, f = 0, f' = 0) with free
/// parameter f''(0). Closed targets shoot on the closure mismatch
/// phi'(r_zero) + 1; interval targets run to r_max with f''(0) given
/// (default lambda, the flat-at-pole seed).
struct SolveOptions {
  int n = 3;
  MParam m = MParam::infinity();
  double lambda = 1.0;
  enum class Target { Closed, Interval } target = Target::Closed;
  int grid_points = 400;
  double r_max = 1.0;           // interval target
  std::optional<double> f2;     // f''(0); interval default lambda, closed initial guess
  double r_cap = 40.0;          // closed-target search cap
  double shoot_xtol = 1e-13;
  double shoot_ftol = 1e-11;
  double ode_rtol = 1e-12;
  double ode_atol = 1e-14;
};

struct SolveInfo {
  bool converged = false;
  int iterations = 0;
  double closure_mismatch = 0.0;
  double f2 = 0.0;
  double r_end = 0.0;
};

QEStructure solve_qe_profile(const SolveOptions& opts, SolveInfo* info = nullptr);

/// Refinement certificate: max qe_residual on the finest grid plus the
/// observed order across the supplied grids. Certified when the residual is
/// within `threshold` and the order is at least `min_order`.
struct Certificate {
  double max_residual = 0.0;  // finest grid
  double order = 0.0;
  bool certified = false;
  std::vector<double> residuals;
};
Certificate certify(const std::function<QEStructure(int)>& builder,
                    const std::vector<int>& grids, double threshold = 1e-6,
                    double min_order = 1.8);

}  // namespace curvlab

#endif
