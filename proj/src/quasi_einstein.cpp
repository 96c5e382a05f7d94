#include "curvlab/quasi_einstein.hpp"

#include <cmath>
#include <string>

#include "curvlab/numerics.hpp"

namespace curvlab {

double MParam::as_double() const {
  if (!is_finite) throw ContractError("m is infinite");
  return static_cast<double>(value);
}

SymField qe_residual(const QEStructure& q) {
  const auto& g = q.geom;
  const double im = q.m.inv();
  SymField res;
  res.rad = g.ric_rad + g.hess_rad - im * g.grad_f_sq -
            q.lambda * Eigen::VectorXd::Ones(g.points());
  res.sph = g.ric_sph + g.hess_sph - q.lambda * Eigen::VectorXd::Ones(g.points());
  return res;
}

Eigen::VectorXd trace_residual(const QEStructure& q) {
  const auto& g = q.geom;
  const double im = q.m.inv();
  return g.scal + g.lap_f - im * g.grad_f_sq -
         (q.lambda * g.n) * Eigen::VectorXd::Ones(g.points());
}

double max_qe_residual(const QEStructure& q) {
  return qe_residual(q).max_abs().maxCoeff();
}

Mu0Result mu0_of(const QEStructure& q) {
  if (!q.m.is_finite) throw ContractError("mu0_of: requires finite m");
  const auto& g = q.geom;
  const double m = q.m.as_double();
  Mu0Result out;
  out.field.resize(g.points());
  for (int i = 0; i < g.points(); ++i) {
    const double drift = g.lap_f[i] - g.grad_f_sq[i];  // Delta_f f
    out.field[i] = -(drift - m * q.lambda) * std::exp(-2.0 * g.f[i] / m) / m;
  }
  out.mean = out.field.mean();
  out.max_deviation = (out.field.array() - out.mean).abs().maxCoeff();
  return out;
}

Eigen::VectorXd induced_h(const ProfileGeometry& g, double s_floor) {
  std::vector<int> bad;
  for (int i = 0; i < g.points(); ++i)
    if (std::abs(g.scal[i]) < s_floor) bad.push_back(i);
  if (!bad.empty())
    throw ScalarFloorError("induced_h: |s| below s_floor at " +
                               std::to_string(bad.size()) + " points",
                           std::move(bad));
  const Eigen::VectorXd laps = g.laplacian(g.scal);
  const Eigen::VectorXd ric2 = g.ricci().squared_norm(g.n);
  return ((laps + 2.0 * ric2).array() / g.scal.array()).matrix();
}

Eigen::VectorXd traced_identity_residual(const QEStructure& q, const Eigen::VectorXd& h) {
  const auto& g = q.geom;
  if (h.size() != g.r.size())
    throw DimensionError("traced_identity_residual: h length mismatch");
  const double im = q.m.inv();
  const Eigen::VectorXd ds = g.derivative(g.scal);
  const Eigen::VectorXd hess2 = SymField{g.hess_rad, g.hess_sph}.squared_norm(g.n);
  Eigen::VectorXd out(g.points());
  for (int i = 0; i < g.points(); ++i) {
    const double lhs = (h[i] - 2.0 * q.lambda) * g.scal[i];
    const double rhs = 4.0 * im * g.ric_rad[i] * g.grad_f_sq[i] +
                       2.0 * im * (hess2[i] - g.lap_f[i] * g.lap_f[i]) +
                       g.df[i] * ds[i];
    out[i] = std::abs(lhs - rhs);
  }
  return out;
}

Eigen::VectorXd qe_gradient_identity_residual(const QEStructure& q) {
  const auto& g = q.geom;
  const double im = q.m.inv();
  const Eigen::VectorXd lhs = 0.5 * g.laplacian(g.grad_f_sq);
  const Eigen::VectorXd hess2 = SymField{g.hess_rad, g.hess_sph}.squared_norm(g.n);
  Eigen::VectorXd out(g.points());
  for (int i = 0; i < g.points(); ++i) {
    const double rhs = hess2[i] - g.ric_rad[i] * g.grad_f_sq[i] +
                       2.0 * im * g.grad_f_sq[i] * g.lap_f[i];
    out[i] = std::abs(lhs[i] - rhs);
  }
  return out;
}

Eigen::VectorXd rigidity_integrand(const QEStructure& q, double mu) {
  const auto& g = q.geom;
  const double im = q.m.inv();
  const double lam = q.lambda;
  const Eigen::VectorXd laps = g.laplacian(g.scal);
  Eigen::VectorXd out(g.points());
  for (int i = 0; i < g.points(); ++i) {
    const double hr = g.hess_rad[i] - im * g.grad_f_sq[i];
    const double hs = g.hess_sph[i];
    const double norm2 = hr * hr + (g.n - 1) * hs * hs;
    out[i] = laps[i] + lam * (2.0 * lam - mu) * g.n + (mu - 4.0 * lam) * g.lap_f[i] +
             im * (4.0 * lam - mu) * g.grad_f_sq[i] + 2.0 * norm2;
  }
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Rigid: return "rigid";
    case Verdict::NonRigid: return "non_rigid";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

RigidityReport rigidity_report(const QEStructure& q, const Eigen::VectorXd& h,
                               double tol_integral, double tol_compat) {
  const auto& g = q.geom;
  if (g.topology != Topology::ClosedSphere)
    throw TopologyError("rigidity_report: requires closed_sphere topology "
                        "(divergence theorem)");
  if (h.size() != g.r.size()) throw DimensionError("rigidity_report: h length mismatch");

  RigidityReport rep;
  rep.tol_integral = tol_integral;
  rep.tol_compat = tol_compat;
  rep.grid_points = g.points();

  const double im = q.m.inv();
  const double lam = q.lambda;
  const int n = g.n;

  const Eigen::VectorXd laps = g.laplacian(g.scal);
  const Eigen::VectorXd ric2 = g.ricci().squared_norm(n);
  double compat = 0.0;
  for (int i = 0; i < g.points(); ++i)
    compat = std::max(compat, std::abs(h[i] * g.scal[i] - laps[i] - 2.0 * ric2[i]));
  rep.h_compat_residual = compat;

  rep.lhs = g.integrate(((h.array() - 2.0 * lam) * g.scal.array()).matrix());

  Eigen::VectorXd tr(g.points());
  for (int i = 0; i < g.points(); ++i) {
    const double rr = g.ric_rad[i] - g.scal[i] / n;
    const double rs = g.ric_sph[i] - g.scal[i] / n;
    tr[i] = rr * rr + (n - 1) * rs * rs;
  }
  rep.term_traceless_ricci = 2.0 * g.integrate(tr);
  rep.term_grad4 =
      (q.m.is_finite ? 2.0 * im * im / n : 0.0) * g.integrate(g.grad_f_sq.cwiseProduct(g.grad_f_sq));
  rep.term_grad2 = 2.0 * lam * im * g.integrate(g.grad_f_sq);
  const Eigen::VectorXd hess2 = SymField{g.hess_rad, g.hess_sph}.squared_norm(n);
  rep.term_hess = (4.0 / n) * g.integrate(hess2);

  const double fmean = g.integrate(g.f) / g.volume();
  rep.f_deviation = (g.f.array() - fmean).abs().maxCoeff();

  rep.lhs_nonnegative_ok = rep.lhs >= -tol_integral;

  if (compat > tol_compat) {
    rep.verdict = Verdict::Inconclusive;
  } else if (std::abs(rep.lhs) <= tol_integral && rep.term_traceless_ricci <= tol_integral &&
             std::abs(rep.term_grad4) <= tol_integral &&
             std::abs(rep.term_grad2) <= tol_integral && rep.term_hess <= tol_integral) {
    rep.verdict = Verdict::Rigid;
  } else {
    rep.verdict = Verdict::NonRigid;
  }
  return rep;
}

CfResult cf_check(const QEStructure& q, const Eigen::VectorXd& h, double h_band,
                  double f_tol) {
  const auto& g = q.geom;
  if (h.size() != g.r.size()) throw DimensionError("cf_check: h length mismatch");
  CfResult res;
  res.h_max = h.maxCoeff();
  res.bound = 2.0 * q.lambda;
  const int M = g.points();
  const double band = h_band * std::max(1.0, std::abs(res.h_max));
  const double fscale = f_tol * std::max(1.0, g.f.cwiseAbs().maxCoeff());
  auto local_extremum = [&](int i) {
    const double fi = g.f[i];
    const double left = (i > 0) ? g.f[i - 1] : fi;
    const double right = (i < M - 1) ? g.f[i + 1] : fi;
    const bool loc_max = fi >= left - fscale && fi >= right - fscale;
    const bool loc_min = fi <= left + fscale && fi <= right + fscale;
    return loc_max || loc_min;
  };
  for (int i = 0; i < M; ++i) {
    if (h[i] < res.h_max - band) continue;
    if (local_extremum(i)) {
      res.applicable = true;
      res.argmax_index = i;
      break;
    }
  }
  if (res.applicable) {
    res.rigid = true;
    res.bound_ok = res.h_max <= res.bound + band;
  }
  return res;
}

namespace {

Eigen::VectorXd power_field(const Eigen::VectorXd& f, double k) {
  Eigen::VectorXd out(f.size());
  const bool integral_k = std::abs(k - std::round(k)) < 1e-12;
  for (int i = 0; i < f.size(); ++i) {
    if (f[i] <= 0.0 && !integral_k)
      throw std::domain_error("h family: f^k needs f > 0 for non-integer k");
    if (f[i] == 0.0 && k < 0.0)
      throw std::domain_error("h family: f^k needs f != 0 for negative k");
    out[i] = std::pow(f[i], k);
  }
  return out;
}

}  // namespace

Eigen::VectorXd h_family_power(const Eigen::VectorXd& f, double a, double k) {
  return a * power_field(f, k);
}

Eigen::VectorXd h_family_exp(const Eigen::VectorXd& f, double a, double k) {
  return a * power_field(f, k).array().exp().matrix();
}

Eigen::VectorXd h_family_log(const Eigen::VectorXd& f, double a, double k) {
  Eigen::VectorXd fk = power_field(f, k);
  for (int i = 0; i < fk.size(); ++i)
    if (fk[i] <= 0.0) throw std::domain_error("h family: log(f^k) needs f^k > 0");
  return a * fk.array().log().matrix();
}

Eigen::VectorXd h_family_trig(const Eigen::VectorXd& f, double a, double b, double k) {
  Eigen::VectorXd fk = power_field(f, k);
  return (a * fk.array().sin() + b * fk.array().cos()).matrix();
}

namespace {

struct QERhs {
  int n;
  double lambda;
  double im;

  void operator()(double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
    const double phi = y[0], dphi = y[1], f2 = y[3];
    const double phipp =
        (n - 2) * (1.0 - dphi * dphi) / phi + dphi * f2 - lambda * phi;
    dy.resize(4);
    dy[0] = dphi;
    dy[1] = phipp;
    dy[2] = f2;
    dy[3] = lambda + (n - 1) * phipp / phi + im * f2 * f2;
  }
};

// series coefficients at the smooth pole: phi = r + p3 r^3 + p5 r^5,
// f = a r^2/2 + f4 r^4/24
struct PoleSeries {
  double p3, p5, f4;
  int n;
  double a;

  PoleSeries(int n_, double lambda, double im, double a_) : n(n_), a(a_) {
    p3 = (a - lambda) / (6.0 * (n - 1));
    const double rhs = -(5.0 * n - 8.0) * p3 * p3 + im * a * a / 3.0 + p3 * (3.0 * a - lambda);
    p5 = rhs / ((10.0 * n + 20.0) / 3.0);
    f4 = 40.0 * (n - 1) * p5 - 12.0 * (n - 1) * p3 * p3 + 2.0 * im * a * a;
  }

  Eigen::VectorXd state(double r) const {
    Eigen::VectorXd y(4);
    const double r2 = r * r;
    y[0] = r * (1.0 + p3 * r2 + p5 * r2 * r2);
    y[1] = 1.0 + 3.0 * p3 * r2 + 5.0 * p5 * r2 * r2;
    y[2] = 0.5 * a * r2 + f4 * r2 * r2 / 24.0;
    y[3] = a * r + f4 * r2 * r / 6.0;
    return y;
  }
};

struct ShotOutcome {
  bool closed = false;
  double r_zero = 0.0;
  double dphi_at_zero = 0.0;
  double min_phi = 0.0;
};

// integrate one shot, detecting the first return of phi to zero
ShotOutcome shoot(const SolveOptions& o, double a) {
  const QERhs rhs{o.n, o.lambda, o.m.inv()};
  AdaptiveRK45 integ([rhs](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    rhs(t, y, dy);
  }, o.ode_rtol, o.ode_atol);
  const PoleSeries series(o.n, o.lambda, o.m.inv(), a);
  const double r0 = 1e-3;
  double t = r0;
  Eigen::VectorXd y = series.state(r0);

  ShotOutcome out;
  double t_prev = t;
  Eigen::VectorXd y_prev = y;
  out.min_phi = y[0];
  integ.observer = [&](double tt, const Eigen::VectorXd& yy) {
    out.min_phi = std::min(out.min_phi, yy[0]);
    if (yy[0] > 0) {
      t_prev = tt;
      y_prev = yy;
    }
  };
  integ.stop = [](double, const Eigen::VectorXd& yy) { return yy[0] <= 0.0; };
  integ.max_step = 0.05;
  if (!integ.integrate(t, y, o.r_cap))
    throw SolverError("solve_qe_profile: integration step size underflow");
  if (y[0] > 0.0) return out;  // never closed before the cap

  // bisect the crossing between (t_prev, y_prev) and (t, y)
  double lo = t_prev, hi = t;
  Eigen::VectorXd ylo = y_prev;
  for (int it = 0; it < 80 && (hi - lo) > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    Eigen::VectorXd ym = ylo;
    double tm = lo;
    AdaptiveRK45 fine([rhs](double tt, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) {
      rhs(tt, yy, dy);
    }, o.ode_rtol, o.ode_atol);
    if (!fine.integrate(tm, ym, mid))
      throw SolverError("solve_qe_profile: bisection integration failed");
    if (ym[0] > 0.0) {
      lo = mid;
      ylo = ym;
    } else {
      hi = mid;
    }
  }
  out.closed = true;
  out.r_zero = lo;
  out.dphi_at_zero = ylo[1];
  return out;
}

QEStructure sample_solution(const SolveOptions& o, double a, double r_end) {
  const QERhs rhs{o.n, o.lambda, o.m.inv()};
  const PoleSeries series(o.n, o.lambda, o.m.inv(), a);
  const int M = o.grid_points;
  Eigen::VectorXd r = Eigen::VectorXd::LinSpaced(M, 0.0, r_end);
  Eigen::VectorXd phi(M), f(M);
  phi[0] = 0.0;
  f[0] = 0.0;

  const double h = r[1] - r[0];
  const double r_series = std::min(1e-3, 0.5 * h);
  AdaptiveRK45 integ([rhs](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    rhs(t, y, dy);
  }, o.ode_rtol, o.ode_atol);
  integ.max_step = 0.05;

  double t;
  Eigen::VectorXd y;
  if (r_series < h) {
    t = r_series;
    y = series.state(r_series);
  } else {
    t = h;
    y = series.state(h);
  }
  for (int i = 1; i < M; ++i) {
    if (r[i] > t) {
      if (!integ.integrate(t, y, r[i]))
        throw SolverError("solve_qe_profile: resampling integration failed");
      t = r[i];
    }
    phi[i] = y[0];
    f[i] = y[2];
  }
  // a closed profile ends at a pole; clamp the terminal sample
  Topology topo = o.target == SolveOptions::Target::Closed ? Topology::ClosedSphere
                                                           : Topology::Interval;
  if (topo == Topology::ClosedSphere) phi[M - 1] = 0.0;

  QEStructure q;
  q.geom = build_profile(o.n, r, phi, f, topo);
  q.m = o.m;
  q.lambda = o.lambda;
  return q;
}

}  // namespace

QEStructure solve_qe_profile(const SolveOptions& opts, SolveInfo* info) {
  SolveInfo local;
  if (opts.target == SolveOptions::Target::Interval) {
    const double a = opts.f2.value_or(opts.lambda);  // flat-at-pole seed
    QEStructure q = sample_solution(opts, a, opts.r_max);
    local.converged = true;
    local.f2 = a;
    local.r_end = opts.r_max;
    if (info) *info = local;
    return q;
  }

  // closed target: shoot on f''(0)
  auto mismatch = [&](double a) -> double {
    const ShotOutcome s = shoot(opts, a);
    if (!s.closed) return s.min_phi + 1.0;  // no return to zero: positive penalty
    return s.dphi_at_zero + 1.0;
  };
  const double a0 = opts.f2.value_or(0.1);
  const double a1 = a0 - 0.05;
  const RootResult root =
      find_root_secant(mismatch, a0, a1, opts.shoot_xtol, opts.shoot_ftol);
  if (!root.converged)
    throw SolverError("solve_qe_profile: shooting did not converge (mismatch " +
                      std::to_string(root.fx) + " after " +
                      std::to_string(root.iterations) + " iterations)");
  const ShotOutcome fin = shoot(opts, root.x);
  if (!fin.closed) throw SolverError("solve_qe_profile: converged shot does not close");
  QEStructure q = sample_solution(opts, root.x, fin.r_zero);
  local.converged = true;
  local.iterations = root.iterations;
  local.closure_mismatch = root.fx;
  local.f2 = root.x;
  local.r_end = fin.r_zero;
  if (info) *info = local;
  return q;
}

Certificate certify(const std::function<QEStructure(int)>& builder,
                    const std::vector<int>& grids, double threshold, double min_order) {
  if (grids.size() < 2) throw ContractError("certify: need at least two grids");
  Certificate cert;
  std::vector<double> hs;
  for (int gpts : grids) {
    const QEStructure q = builder(gpts);
    cert.residuals.push_back(max_qe_residual(q));
    hs.push_back(1.0 / (gpts - 1));
  }
  cert.max_residual = cert.residuals.back();
  // below the fp noise floor the slope is meaningless; accept directly
  const double floor = 1e-11;
  if (cert.residuals.front() < floor) {
    cert.order = 0.0;
    cert.certified = cert.max_residual <= threshold;
    return cert;
  }
  cert.order = estimate_order(hs, cert.residuals);
  cert.certified = cert.max_residual <= threshold && cert.order >= min_order;
  return cert;
}

}  // namespace curvlab
