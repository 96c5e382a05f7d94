#include "curvlab/profile_geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "curvlab/numerics.hpp"

namespace curvlab {

namespace {

double unit_sphere_volume(int nm1) {
  // vol(S^{n-1}(1)) = 2 pi^{n/2} / Gamma(n/2)
  const double half_n = 0.5 * (nm1 + 1);
  return 2.0 * std::pow(std::numbers::pi, half_n) / std::tgamma(half_n);
}

// Apply a derivative stencil to u with pole-parity ghosts / biased end rows.
Eigen::VectorXd apply_stencil(const ProfileGeometry& g, const Eigen::VectorXd& u,
                              Parity parity, int deriv, int order) {
  const int M = static_cast<int>(u.size());
  const double h = g.h;
  const int width = (deriv == 1 ? order + 1 : 5 + (order > 4 ? 2 : 0));  // nodes, centered
  const int hw = width / 2;
  const double psign = (parity == Parity::Odd) ? -1.0 : 1.0;

  // centered weights at offsets -hw..hw
  Eigen::VectorXd offs(width);
  for (int k = 0; k < width; ++k) offs[k] = (k - hw) * h;
  const Eigen::VectorXd wc = fornberg_weights(0.0, offs, deriv).row(deriv);

  auto sample = [&](int idx, bool left_is_pole, bool right_is_pole) -> double {
    if (idx >= 0 && idx < M) return u[idx];
    if (idx < 0 && left_is_pole) return psign * u[-idx];
    if (idx >= M && right_is_pole) return psign * u[2 * (M - 1) - idx];
    return std::numeric_limits<double>::quiet_NaN();  // unreachable by construction
  };

  Eigen::VectorXd out(M);
  for (int i = 0; i < M; ++i) {
    const bool needs_left = i < hw, needs_right = i > M - 1 - hw;
    if ((!needs_left || g.left_pole) && (!needs_right || g.right_pole)) {
      double acc = 0.0;
      for (int k = 0; k < width; ++k)
        acc += wc[k] * sample(i - hw + k, g.left_pole, g.right_pole);
      out[i] = acc;
    } else {
      // biased stencil at a plain boundary; one extra node keeps d2 at order 4
      const int bw = (deriv == 2) ? width + 1 : width;
      const int start = std::clamp(i - hw, 0, M - bw);
      Eigen::VectorXd xs(bw);
      for (int k = 0; k < bw; ++k) xs[k] = (start + k - i) * h;
      const Eigen::VectorXd wb = fornberg_weights(0.0, xs, deriv).row(deriv);
      double acc = 0.0;
      for (int k = 0; k < bw; ++k) acc += wb[k] * u[start + k];
      out[i] = acc;
    }
  }
  return out;
}

// Pole value of an even smooth field from its first three interior samples:
// exact for even polynomials through r^4.
double pole_extrapolate(const Eigen::VectorXd& w, bool left) {
  const int M = static_cast<int>(w.size());
  return left ? (15.0 * w[1] - 6.0 * w[2] + w[3]) / 10.0
              : (15.0 * w[M - 2] - 6.0 * w[M - 3] + w[M - 4]) / 10.0;
}

}  // namespace

Eigen::VectorXd ProfileGeometry::derivative(const Eigen::VectorXd& u, Parity parity) const {
  return apply_stencil(*this, u, parity, 1, 4);
}

Eigen::VectorXd ProfileGeometry::second_derivative(const Eigen::VectorXd& u,
                                                   Parity parity) const {
  return apply_stencil(*this, u, parity, 2, 4);
}

Eigen::VectorXd ProfileGeometry::laplacian(const Eigen::VectorXd& u, Parity parity) const {
  if (u.size() != r.size()) throw DimensionError("laplacian: field length mismatch");
  const Eigen::VectorXd du = derivative(u, parity);
  const Eigen::VectorXd d2u = second_derivative(u, parity);
  const int M = points();
  Eigen::VectorXd out(M);
  for (int i = 0; i < M; ++i) {
    const bool pole = (i == 0 && left_pole) || (i == M - 1 && right_pole);
    if (pole)
      out[i] = n * d2u[i];
    else
      out[i] = d2u[i] + (n - 1) * (dphi[i] / phi[i]) * du[i];
  }
  return out;
}

double ProfileGeometry::integrate(const Eigen::VectorXd& u) const {
  if (u.size() != r.size()) throw DimensionError("integrate: field length mismatch");
  return simpson(u.cwiseProduct(vol_weight), h);
}

double ProfileGeometry::volume() const {
  return integrate(Eigen::VectorXd::Ones(points()));
}

ProfileGeometry build_profile(int n, const Eigen::VectorXd& r, const Eigen::VectorXd& phi,
                              const Eigen::VectorXd& f, Topology topology) {
  const int M = static_cast<int>(r.size());
  if (n < 2) throw DimensionError("build_profile: n must be >= 2");
  if (M < 16) throw ContractError("build_profile: grid needs at least 16 points");
  if (phi.size() != M || f.size() != M)
    throw DimensionError("build_profile: phi/f sample counts must match the grid");

  const double h = r[1] - r[0];
  if (h <= 0) throw ContractError("build_profile: grid must be strictly increasing");
  for (int i = 1; i < M; ++i) {
    const double step = r[i] - r[i - 1];
    if (step <= 0) throw ContractError("build_profile: grid must be strictly increasing");
    if (std::abs(step - h) > 1e-9 * h)
      throw ContractError("build_profile: grid must be uniform");
  }
  for (int i = 1; i + 1 < M; ++i)
    if (phi[i] <= 0)
      throw ContractError("build_profile: phi must be positive in the interior (index " +
                          std::to_string(i) + ")");

  ProfileGeometry g;
  g.n = n;
  g.topology = topology;
  g.h = h;
  g.r = r;
  g.phi = phi;
  g.f = f;

  const double closure_tol = 10.0 * h * h;
  auto classify_end = [&](int idx) {
    return std::abs(phi[idx]) <= std::max(closure_tol, 1e-12);
  };
  g.left_pole = classify_end(0);
  g.right_pole = classify_end(M - 1);
  if (topology == Topology::ClosedSphere && !(g.left_pole && g.right_pole))
    throw ContractError("build_profile: closed_sphere requires phi = 0 at both ends");

  g.dphi = apply_stencil(g, phi, Parity::Odd, 1, 6);
  g.d2phi = apply_stencil(g, phi, Parity::Odd, 2, 4);
  g.df = apply_stencil(g, f, Parity::Even, 1, 4);
  g.d2f = apply_stencil(g, f, Parity::Even, 2, 4);

  if (g.left_pole && std::abs(std::abs(g.dphi[0]) - 1.0) > closure_tol)
    throw ContractError("build_profile: |phi'| != 1 at the left pole");
  if (g.right_pole && std::abs(std::abs(g.dphi[M - 1]) - 1.0) > closure_tol)
    throw ContractError("build_profile: |phi'| != 1 at the right pole");

  g.sec_rad.resize(M);
  g.sec_sph.resize(M);
  g.hess_sph.resize(M);
  for (int i = 0; i < M; ++i) {
    const bool pole = (i == 0 && g.left_pole) || (i == M - 1 && g.right_pole);
    if (pole) continue;  // filled below
    g.sec_rad[i] = -g.d2phi[i] / phi[i];
    g.sec_sph[i] = (1.0 - g.dphi[i] * g.dphi[i]) / (phi[i] * phi[i]);
    g.hess_sph[i] = (g.dphi[i] / phi[i]) * g.df[i];
  }
  if (g.left_pole) {
    g.sec_rad[0] = pole_extrapolate(g.sec_rad, true);
    g.sec_sph[0] = pole_extrapolate(g.sec_sph, true);
    g.hess_sph[0] = g.d2f[0];
    g.df[0] = 0.0;
  }
  if (g.right_pole) {
    g.sec_rad[M - 1] = pole_extrapolate(g.sec_rad, false);
    g.sec_sph[M - 1] = pole_extrapolate(g.sec_sph, false);
    g.hess_sph[M - 1] = g.d2f[M - 1];
    g.df[M - 1] = 0.0;
  }

  g.ric_rad = (n - 1) * g.sec_rad;
  g.ric_sph = g.sec_rad + (n - 2) * g.sec_sph;
  g.scal = g.ric_rad + (n - 1) * g.ric_sph;
  g.hess_rad = g.d2f;
  g.grad_f_sq = g.df.array().square().matrix();

  g.lap_f.resize(M);
  for (int i = 0; i < M; ++i) {
    const bool pole = (i == 0 && g.left_pole) || (i == M - 1 && g.right_pole);
    g.lap_f[i] = pole ? n * g.d2f[i] : g.d2f[i] + (n - 1) * g.hess_sph[i];
  }

  const double om = unit_sphere_volume(n - 1);
  g.vol_weight = (om * phi.array().pow(n - 1)).matrix();
  return g;
}

ProfileGeometry build_profile(int n, double r0, double r1, int points,
                              const AnalyticProfile& p, Topology topology) {
  if (!p.phi) throw ContractError("build_profile: analytic profile needs phi");
  Eigen::VectorXd r = Eigen::VectorXd::LinSpaced(points, r0, r1);
  Eigen::VectorXd phi(points), f(points);
  for (int i = 0; i < points; ++i) {
    phi[i] = p.phi(r[i]);
    f[i] = p.f ? p.f(r[i]) : 0.0;
  }
  ProfileGeometry g = build_profile(n, r, phi, f, topology);
  // overwrite FD derivatives with exact ones where supplied, then refresh
  // the derived fields that depend on them
  const int M = points;
  auto fill = [&](const std::function<double(double)>& fn, Eigen::VectorXd& dst) {
    if (!fn) return false;
    for (int i = 0; i < M; ++i) dst[i] = fn(r[i]);
    return true;
  };
  const bool any = fill(p.dphi, g.dphi) | fill(p.d2phi, g.d2phi) | fill(p.df, g.df) |
                   fill(p.d2f, g.d2f);
  if (!any) return g;

  for (int i = 0; i < M; ++i) {
    const bool pole = (i == 0 && g.left_pole) || (i == M - 1 && g.right_pole);
    if (pole) continue;
    g.sec_rad[i] = -g.d2phi[i] / g.phi[i];
    g.sec_sph[i] = (1.0 - g.dphi[i] * g.dphi[i]) / (g.phi[i] * g.phi[i]);
    g.hess_sph[i] = (g.dphi[i] / g.phi[i]) * g.df[i];
  }
  if (g.left_pole) {
    g.sec_rad[0] = pole_extrapolate(g.sec_rad, true);
    g.sec_sph[0] = pole_extrapolate(g.sec_sph, true);
    g.hess_sph[0] = g.d2f[0];
    g.df[0] = 0.0;
  }
  if (g.right_pole) {
    g.sec_rad[M - 1] = pole_extrapolate(g.sec_rad, false);
    g.sec_sph[M - 1] = pole_extrapolate(g.sec_sph, false);
    g.hess_sph[M - 1] = g.d2f[M - 1];
    g.df[M - 1] = 0.0;
  }
  g.ric_rad = (n - 1) * g.sec_rad;
  g.ric_sph = g.sec_rad + (n - 2) * g.sec_sph;
  g.scal = g.ric_rad + (n - 1) * g.ric_sph;
  g.hess_rad = g.d2f;
  g.grad_f_sq = g.df.array().square().matrix();
  for (int i = 0; i < M; ++i) {
    const bool pole = (i == 0 && g.left_pole) || (i == M - 1 && g.right_pole);
    g.lap_f[i] = pole ? n * g.d2f[i] : g.d2f[i] + (n - 1) * g.hess_sph[i];
  }
  return g;
}

CurvatureOperator curvature_operator_at(const ProfileGeometry& g, int i) {
  const int n = g.n;
  const int N = lambda2_dim(n);
  Eigen::VectorXd diag(N);
  for (int a = 0; a < N; ++a) {
    auto [p, q] = index_pair(n, a);
    diag[a] = (p == 0 || q == 0) ? 2.0 * g.sec_rad[i] : 2.0 * g.sec_sph[i];
  }
  return CurvatureOperator(n, diag.asDiagonal());
}

LaplacianRField laplacian_R(const ProfileGeometry& g) {
  const int M = g.points();
  const int n = g.n;
  const Eigen::VectorXd dA = g.derivative(g.sec_rad);
  const Eigen::VectorXd d2A = g.second_derivative(g.sec_rad);
  const Eigen::VectorXd dB = g.derivative(g.sec_sph);
  const Eigen::VectorXd d2B = g.second_derivative(g.sec_sph);

  LaplacianRField out;
  out.rad = Eigen::VectorXd::Zero(M);
  out.sph = Eigen::VectorXd::Zero(M);
  for (int i = 0; i < M; ++i) {
    const bool pole = (i == 0 && g.left_pole) || (i == M - 1 && g.right_pole);
    if (pole) {
      out.excluded.push_back(i);
      continue;
    }
    const double u = g.dphi[i] / g.phi[i];
    const double gap = g.sec_rad[i] - g.sec_sph[i];
    out.rad[i] = d2A[i] + (n - 1) * u * dA[i] - 2.0 * (n - 2) * u * u * gap;
    out.sph[i] = d2B[i] + (n - 1) * u * dB[i] + 4.0 * u * u * gap;
  }
  return out;
}

MaskedField ci_residual(const ProfileGeometry& g, const Eigen::VectorXd& h_field) {
  if (h_field.size() != g.r.size()) throw DimensionError("ci_residual: h length mismatch");
  const int M = g.points();
  const LaplacianRField lr = laplacian_R(g);
  MaskedField out;
  out.value = Eigen::VectorXd::Zero(M);
  out.excluded = lr.excluded;
  std::vector<bool> skip(M, false);
  for (int i : lr.excluded) skip[i] = true;
  for (int i = 0; i < M; ++i) {
    if (skip[i]) continue;
    const CurvatureOperator R = curvature_operator_at(g, i);
    const CurvatureOperator Q = q_of(R);
    // operator-normalized Delta R: twice the tensor sectional pair
    const int n = g.n;
    const int N = lambda2_dim(n);
    Eigen::VectorXd ddiag(N);
    for (int a = 0; a < N; ++a) {
      auto [p, q] = index_pair(n, a);
      ddiag[a] = (p == 0 || q == 0) ? 2.0 * lr.rad[i] : 2.0 * lr.sph[i];
    }
    const CurvatureOperator DR(n, ddiag.asDiagonal());
    out.value[i] = (DR + Q - R * h_field[i]).norm();
  }
  return out;
}

Eigen::VectorXd bochner_residual(const ProfileGeometry& g) {
  const Eigen::VectorXd lhs = 0.5 * g.laplacian(g.grad_f_sq);
  const Eigen::VectorXd dlapf = g.derivative(g.lap_f);
  const Eigen::VectorXd hess2 = SymField{g.hess_rad, g.hess_sph}.squared_norm(g.n);
  const Eigen::VectorXd rhs =
      (hess2.array() + g.ric_rad.array() * g.grad_f_sq.array() +
       g.df.array() * dlapf.array())
          .matrix();
  return (lhs - rhs).cwiseAbs();
}

ProfileGeometry round_sphere_profile(int n, double kappa, int points,
                                     const AnalyticProfile& f_part) {
  if (kappa <= 0) throw ContractError("round_sphere_profile: kappa must be positive");
  const double sk = std::sqrt(kappa);
  AnalyticProfile p;
  p.phi = [sk](double r) { return std::sin(sk * r) / sk; };
  p.dphi = [sk](double r) { return std::cos(sk * r); };
  p.d2phi = [sk](double r) { return -sk * std::sin(sk * r); };
  p.f = f_part.f;
  p.df = f_part.df;
  p.d2f = f_part.d2f;
  return build_profile(n, 0.0, std::numbers::pi / sk, points, p, Topology::ClosedSphere);
}

ProfileGeometry flat_disk_profile(int n, double r_max, int points,
                                  const AnalyticProfile& f_part) {
  AnalyticProfile p;
  p.phi = [](double r) { return r; };
  p.dphi = [](double) { return 1.0; };
  p.d2phi = [](double) { return 0.0; };
  p.f = f_part.f;
  p.df = f_part.df;
  p.d2f = f_part.d2f;
  return build_profile(n, 0.0, r_max, points, p, Topology::Interval);
}

}  // namespace curvlab
