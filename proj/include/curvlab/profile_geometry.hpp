#ifndef CURVLAB_PROFILE_GEOMETRY_HPP
#define CURVLAB_PROFILE_GEOMETRY_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "curvlab/curvature_operator.hpp"

namespace curvlab {

using ScalarField = Eigen::VectorXd;

/// Rotationally symmetric symmetric 2-tensor: radial-radial component and
/// the common spherical component, sampled on the grid.
struct SymField {
  Eigen::VectorXd rad;
  Eigen::VectorXd sph;

  /// |T|^2 = rad^2 + (n-1) sph^2 pointwise (diagonal form of this symmetry class).
  Eigen::VectorXd squared_norm(int n) const {
    return rad.array().square().matrix() + (n - 1) * sph.array().square().matrix();
  }
  Eigen::VectorXd trace(int n) const { return rad + (n - 1) * sph; }
  Eigen::VectorXd max_abs() const {
    return rad.cwiseAbs().cwiseMax(sph.cwiseAbs());
  }
};

enum class Topology { ClosedSphere, Interval };

/// Parity of a sampled function under odd/even reflection through a pole.
enum class Parity { Even, Odd };

/// Optional closed forms for a profile; any derivative left empty is
/// reconstructed by finite differences. Supplying exact derivatives removes
/// the pole-amplified sampling noise of the pure FD path.
struct AnalyticProfile {
  std::function<double(double)> phi, dphi, d2phi;
  std::function<double(double)> f, df, d2f;
};

/// Discretized rotationally symmetric metric g = dr^2 + phi(r)^2 ghat on a
/// uniform grid, with a potential f and every derived curvature/potential
/// field cached at build time.
///
/// Derivatives use centered stencils with parity ghosts through poles
/// (phi odd, scalar fields even) and biased stencils at plain interval ends.
/// phi' uses a 6th-order stencil; everything else 4th-order. The spherical
/// sectional curvature (1 - phi'^2)/phi^2 amplifies phi' errors by 1/phi^2,
/// so near a pole a p-th order phi' leaves an h^p/r^2 error shape whose
/// Laplacian only vanishes for p > 4; p = 6 keeps Delta s second order.
struct ProfileGeometry {
  int n = 0;                     // manifold dimension
  Topology topology = Topology::Interval;
  double h = 0.0;                // grid spacing
  bool left_pole = false, right_pole = false;

  Eigen::VectorXd r, phi, f;
  Eigen::VectorXd dphi, d2phi, df, d2f;
  Eigen::VectorXd sec_rad;       // -phi''/phi
  Eigen::VectorXd sec_sph;       // (1 - phi'^2)/phi^2
  Eigen::VectorXd ric_rad, ric_sph, scal;
  Eigen::VectorXd hess_rad, hess_sph, lap_f, grad_f_sq;
  Eigen::VectorXd vol_weight;    // omega_{n-1} phi^{n-1}

  int points() const { return static_cast<int>(r.size()); }

  /// 4th-order first derivative of a grid field.
  Eigen::VectorXd derivative(const Eigen::VectorXd& u, Parity parity = Parity::Even) const;
  /// 4th-order second derivative.
  Eigen::VectorXd second_derivative(const Eigen::VectorXd& u, Parity parity = Parity::Even) const;
  /// Rotationally symmetric Laplacian u'' + (n-1)(phi'/phi) u', with the
  /// smooth limit n u'' at poles.
  Eigen::VectorXd laplacian(const Eigen::VectorXd& u, Parity parity = Parity::Even) const;
  /// integral against dV = omega_{n-1} phi^{n-1} dr (composite Simpson).
  double integrate(const Eigen::VectorXd& u) const;
  double volume() const;

  SymField ricci() const { return {ric_rad, ric_sph}; }
};

/// Build from samples. Validates: uniform strictly increasing grid with at
/// least 16 points, phi > 0 in the interior, and for closed_sphere the
/// closure conditions phi = 0, |phi'| = 1 at both ends (within 10 h^2).
/// Interval ends with phi ~ 0 are treated as smooth poles too.
ProfileGeometry build_profile(int n, const Eigen::VectorXd& r, const Eigen::VectorXd& phi,
                              const Eigen::VectorXd& f, Topology topology);

/// Build from closed forms on [r0, r1] with `points` samples.
ProfileGeometry build_profile(int n, double r0, double r1, int points,
                              const AnalyticProfile& p, Topology topology);

/// Pointwise curvature operator: radial planes carry 2 sec_rad, spherical
/// planes 2 sec_sph (operator normalization), diagonal in the adapted
/// lexicographic basis with index 0 radial.
CurvatureOperator curvature_operator_at(const ProfileGeometry& g, int i);

/// Rough Laplacian of the curvature operator in the parallel adapted frame,
/// as the pair of sectional functions (tensor normalization):
///   (DR)_rad = A'' + (n-1)u A' - 2(n-2) u^2 (A - B)
///   (DR)_sph = B'' + (n-1)u B' + 4 u^2 (A - B),   u = phi'/phi.
/// The correction terms are fixed by the symmetry class; their trace
/// reproduces Delta s exactly and they vanish on space forms. Poles are
/// excluded (reported in `excluded`, values zeroed there).
struct LaplacianRField {
  Eigen::VectorXd rad, sph;
  std::vector<int> excluded;
};
LaplacianRField laplacian_R(const ProfileGeometry& g);

/// Pointwise operator norm of Delta R + Q(R) - h R (operator normalization;
/// h is the tensor-convention function, = 2 lambda at Einstein points).
struct MaskedField {
  Eigen::VectorXd value;
  std::vector<int> excluded;
};
MaskedField ci_residual(const ProfileGeometry& g, const Eigen::VectorXd& h_field);

/// Pointwise |LHS - RHS| of the Bochner formula
///   1/2 Delta |grad f|^2 = |Hess f|^2 + Ric(grad f, grad f) + <grad f, grad Delta f>.
Eigen::VectorXd bochner_residual(const ProfileGeometry& g);

/// Round sphere of curvature kappa in dimension n (phi = sin(sqrt(k) r)/sqrt(k)),
/// with f supplied or zero; analytic derivatives.
ProfileGeometry round_sphere_profile(int n, double kappa, int points,
                                     const AnalyticProfile& f_part = {});

/// Flat disk phi = r on [r_eps, r_max] (left end is a smooth pole at 0 when
/// r_eps = 0); f analytic optional.
ProfileGeometry flat_disk_profile(int n, double r_max, int points,
                                  const AnalyticProfile& f_part = {});

}  // namespace curvlab

#endif
