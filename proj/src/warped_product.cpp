#include "curvlab/warped_product.hpp"

#include <array>
#include <cmath>

namespace curvlab {

namespace {

inline double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

// R(i,j,k,l) for the diagonal profile class: kappa(i,j) (d_ik d_jl - d_il d_jk)
struct DiagCurv {
  double rad, sph;
  double kappa(int i, int j) const { return (i == 0 || j == 0) ? rad : sph; }
  double operator()(int i, int j, int k, int l) const {
    const double pattern = delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k);
    return pattern == 0.0 ? 0.0 : kappa(i, j) * pattern;
  }
};

std::string tuple_class(int i, int j, int k, int l) {
  std::array<int, 4> idx{i, j, k, l};
  std::string out;
  std::array<int, 4> seen{};
  int next = 0;
  for (int v : idx) {
    if (v == 0) {
      out += 'r';
      continue;
    }
    int code = -1;
    for (int s = 0; s < next; ++s)
      if (seen[s] == v) code = s;
    if (code < 0) {
      seen[next] = v;
      code = next++;
    }
    out += static_cast<char>('a' + code);
  }
  return out;
}

}  // namespace

WarpedSpec WarpedSpec::from_base(const QEStructure& base) {
  if (!base.m.is_finite)
    throw ContractError("WarpedSpec: base must have finite m");
  WarpedSpec spec;
  spec.base = base;
  spec.fiber_dim = base.m.value;
  spec.fiber_einstein_constant = mu0_of(base).mean;
  return spec;
}

WarpedRicciResidual warped_ricci_residual(const WarpedSpec& spec) {
  const QEStructure& q = spec.base;
  if (!q.m.is_finite) throw ContractError("warped_ricci_residual: finite m required");
  if (spec.fiber_dim != q.m.value)
    throw ContractError("warped_ricci_residual: fiber dimension must equal base m");
  const auto& g = q.geom;
  const double m = q.m.as_double();
  const double mu0 = spec.fiber_einstein_constant;
  const int M = g.points();

  Eigen::VectorXd u(M);
  for (int i = 0; i < M; ++i) u[i] = std::exp(-g.f[i] / m);
  const Eigen::VectorXd du = g.derivative(u);
  const Eigen::VectorXd d2u = g.second_derivative(u);

  WarpedRicciResidual out;
  out.horizontal.rad.resize(M);
  out.horizontal.sph.resize(M);
  out.vertical.resize(M);
  for (int i = 0; i < M; ++i) {
    const bool pole = (i == 0 && g.left_pole) || (i == M - 1 && g.right_pole);
    const double hess_u_rad = d2u[i];
    const double hess_u_sph = pole ? d2u[i] : (g.dphi[i] / g.phi[i]) * du[i];
    const double lap_u = pole ? g.n * d2u[i] : d2u[i] + (g.n - 1) * hess_u_sph;
    out.horizontal.rad[i] = g.ric_rad[i] - (m / u[i]) * hess_u_rad - q.lambda;
    out.horizontal.sph[i] = g.ric_sph[i] - (m / u[i]) * hess_u_sph - q.lambda;
    const double ui2 = u[i] * u[i];
    out.vertical[i] =
        (mu0 - u[i] * lap_u - (m - 1.0) * du[i] * du[i]) / ui2 - q.lambda;
  }
  out.max_residual =
      std::max(out.horizontal.max_abs().maxCoeff(), out.vertical.cwiseAbs().maxCoeff());
  return out;
}

HorizontalIdentityResidual horizontal_identity_residual(const QEStructure& q, double mu) {
  const auto& g = q.geom;
  const int n = g.n;
  const int M = g.points();
  const double im = q.m.inv();
  const double lam = q.lambda;
  const Eigen::VectorXd drad = g.derivative(g.sec_rad);
  const Eigen::VectorXd dsph = g.derivative(g.sec_sph);

  HorizontalIdentityResidual out;
  out.field = Eigen::VectorXd::Zero(M);
  for (int p = 0; p < M; ++p) {
    const DiagCurv R{g.sec_rad[p], g.sec_sph[p]};
    const DiagCurv dR{drad[p], dsph[p]};  // covariant radial derivative pattern
    const double fp = g.df[p];
    const double fp2 = fp * fp;
    auto H = [&](int i, int j) {
      if (i != j) return 0.0;
      return i == 0 ? g.hess_rad[p] : g.hess_sph[p];
    };
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double lhs = (2.0 * lam - mu) * R(i, j, k, l);
            // grad f is radial: X(f) = f' delta_{X,e0}
            double rhs = -im * fp2 * (delta(i, 0) * R(0, j, k, l) + delta(j, 0) * R(i, 0, k, l) +
                                      delta(k, 0) * R(i, j, 0, l) + delta(l, 0) * R(i, j, k, 0));
            rhs += 2.0 * im * (H(i, k) * H(j, l) - H(i, l) * H(j, k));
            rhs -= fp * dR(i, j, k, l);
            const double res = std::abs(lhs - rhs);
            out.field[p] = std::max(out.field[p], res);
            auto& cls = out.per_class[tuple_class(i, j, k, l)];
            cls = std::max(cls, res);
          }
  }
  return out;
}

double trace_transfer_consistency(const FrameTensorInput& in) {
  const int n = in.r_op.n();
  if (in.dr_op.n() != n || in.hess.rows() != n || in.grad.size() != n)
    throw DimensionError("trace_transfer_consistency: dimension mismatch");
  const double im = in.m_inv;

  auto R4 = [&](int i, int j, int k, int l) { return in.r_op.tensor(i, j, k, l); };
  auto DR4 = [&](int i, int j, int k, int l) { return in.dr_op.tensor(i, j, k, l); };
  auto Rg = [&](int slot, int i, int j, int k, int l) {
    // R with grad f substituted into `slot`
    double tot = 0.0;
    for (int pp = 0; pp < n; ++pp) {
      switch (slot) {
        case 0: tot += in.grad[pp] * R4(pp, j, k, l); break;
        case 1: tot += in.grad[pp] * R4(i, pp, k, l); break;
        case 2: tot += in.grad[pp] * R4(i, j, pp, l); break;
        default: tot += in.grad[pp] * R4(i, j, k, pp); break;
      }
    }
    return tot;
  };

  // route 1: trace the 4-tensor right side over slots (2,4)
  auto rhs4 = [&](int i, int j, int k, int l) {
    double rhs = -im * (in.grad[i] * Rg(0, i, j, k, l) + in.grad[j] * Rg(1, i, j, k, l) +
                        in.grad[k] * Rg(2, i, j, k, l) + in.grad[l] * Rg(3, i, j, k, l));
    rhs += 2.0 * im *
           (in.hess(i, k) * in.hess(j, l) - in.hess(i, l) * in.hess(j, k));
    rhs -= DR4(i, j, k, l);
    return rhs;
  };

  // route 2: the Ricci-level right side, written from its own formula
  const double trH = in.hess.trace();
  const Eigen::MatrixXd H2 = in.hess * in.hess;
  Eigen::VectorXd rgrad(n);  // r(grad f, e_k)
  for (int k = 0; k < n; ++k) {
    double tot = 0.0;
    for (int pp = 0; pp < n; ++pp)
      for (int j = 0; j < n; ++j) tot += in.grad[pp] * R4(pp, j, k, j);
    rgrad[k] = tot;
  }

  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double traced = 0.0;
      for (int j = 0; j < n; ++j) traced += rhs4(i, j, k, j);

      double rf2 = 0.0;  // R(e_i, grad f, e_k, grad f)
      for (int pp = 0; pp < n; ++pp)
        for (int qq = 0; qq < n; ++qq)
          rf2 += in.grad[pp] * in.grad[qq] * R4(i, pp, k, qq);
      double dr_tr = 0.0;
      for (int j = 0; j < n; ++j) dr_tr += DR4(i, j, k, j);

      const double rhs35 = -im * in.grad[i] * rgrad[k] - 2.0 * im * rf2 -
                           im * in.grad[k] * rgrad[i] +
                           2.0 * im * (in.hess(i, k) * trH - H2(i, k)) - dr_tr;
      worst = std::max(worst, std::abs(traced - rhs35));
    }
  return worst;
}

TermGroupReport term_group_report(const QEStructure& q, double mu) {
  const auto& g = q.geom;
  const int n = g.n;
  const int M = g.points();
  const double im = q.m.inv();
  const double im2 = im * im;
  const double lam = q.lambda;
  const LaplacianRField lr = laplacian_R(g);
  const Eigen::VectorXd drad = g.derivative(g.sec_rad);
  const Eigen::VectorXd dsph = g.derivative(g.sec_sph);

  TermGroupReport rep;
  rep.excluded = lr.excluded;
  std::vector<bool> skip(M, false);
  for (int i : lr.excluded) skip[i] = true;

  for (int p = 0; p < M; ++p) {
    if (skip[p]) continue;
    const DiagCurv R{g.sec_rad[p], g.sec_sph[p]};
    const DiagCurv DR{lr.rad[p], lr.sph[p]};
    const DiagCurv dR{drad[p], dsph[p]};
    const CurvatureOperator Q = q_of(curvature_operator_at(g, p));
    const double fp = g.df[p];
    const double fp2 = fp * fp;
    auto H = [&](int i, int j) {
      if (i != j) return 0.0;
      return i == 0 ? g.hess_rad[p] : g.hess_sph[p];
    };
    auto Xf = [&](int i) { return i == 0 ? fp : 0.0; };

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double g1 = DR(i, j, k, l);
            const double g2 =
                -im * fp * (Xf(i) * R(0, j, k, l) + Xf(j) * R(i, 0, k, l) +
                            Xf(k) * R(i, j, 0, l) + Xf(l) * R(i, j, k, 0));
            const double cross = Xf(i) * Xf(k) * H(j, l) + Xf(j) * Xf(l) * H(i, k) -
                                 Xf(j) * Xf(k) * H(i, l) - Xf(i) * Xf(l) * H(j, k);
            const double g3 = 2.0 * im2 * cross;
            const double g4 = -fp * dR(i, j, k, l);
            const double h1 = Q.tensor(i, j, k, l);
            const double h2 = 2.0 * im * (H(i, k) * H(j, l) - H(i, l) * H(j, k));
            const double h3 = -2.0 * im2 * cross;

            rep.norm_laplacian_pullback = std::max(rep.norm_laplacian_pullback, std::abs(g1));
            rep.norm_directional = std::max(rep.norm_directional, std::abs(g2));
            rep.norm_cross_laplacian = std::max(rep.norm_cross_laplacian, std::abs(g3));
            rep.norm_radial_transport = std::max(rep.norm_radial_transport, std::abs(g4));
            rep.norm_q_pullback = std::max(rep.norm_q_pullback, std::abs(h1));
            rep.norm_hess_product = std::max(rep.norm_hess_product, std::abs(h2));
            rep.norm_cross_quadratic = std::max(rep.norm_cross_quadratic, std::abs(h3));
            rep.cross_cancellation = std::max(rep.cross_cancellation, std::abs(g3 + h3));

            const double r4 = R(i, j, k, l);
            const double total = g1 + g2 + g3 + g4 + h1 + h2 + h3 - 2.0 * lam * r4;
            const double base_ci = g1 + h1 - mu * r4;
            const double transfer = (2.0 * lam - mu) * r4 - (g2 + g4 + h2);
            rep.base_ci_residual = std::max(rep.base_ci_residual, std::abs(base_ci));
            rep.transfer_residual = std::max(rep.transfer_residual, std::abs(transfer));
            // regrouping bookkeeping: total = base_ci - transfer + (g3 + h3)
            rep.regroup_residual = std::max(
                rep.regroup_residual, std::abs(total - base_ci + transfer - (g3 + h3)));
          }
  }
  return rep;
}

}  // namespace curvlab
