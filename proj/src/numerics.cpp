#include "curvlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curvlab {

Eigen::MatrixXd fornberg_weights(double z, const Eigen::VectorXd& xs, int max_order) {
  const int n = static_cast<int>(xs.size());
  if (n <= max_order)
    throw std::invalid_argument("fornberg_weights: need more nodes than derivative order");
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, max_order + 1);
  double c1 = 1.0;
  double c4 = xs[0] - z;
  C(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    double c5 = c4;
    c4 = xs[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
        C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k)
        C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
      C(j, 0) = c4 * C(j, 0) / c3;
    }
    c1 = c2;
  }
  return C.transpose();
}

double simpson(const Eigen::VectorXd& y, double h) {
  const int m = static_cast<int>(y.size()) - 1;  // interval count
  if (m < 1) return 0.0;
  if (m == 1) return 0.5 * h * (y[0] + y[1]);
  if (m == 2) return h / 3.0 * (y[0] + 4.0 * y[1] + y[2]);
  double total = 0.0;
  int even_end = m;
  if (m % 2 != 0) even_end = m - 3;  // reserve a 3/8 block for the tail
  for (int i = 0; i + 2 <= even_end; i += 2)
    total += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  if (m % 2 != 0) {
    const int i = even_end;
    total += 3.0 * h / 8.0 * (y[i] + 3.0 * y[i + 1] + 3.0 * y[i + 2] + y[i + 3]);
  }
  return total;
}

double estimate_order(const std::vector<double>& hs, const std::vector<double>& errs) {
  if (hs.size() != errs.size() || hs.size() < 2)
    throw std::invalid_argument("estimate_order: need matching sequences of length >= 2");
  const int n = static_cast<int>(hs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(hs[i]);
    const double y = std::log(std::max(errs[i], 1e-300));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double estimate_order(double err_coarse, double err_fine, double ratio) {
  return std::log(err_coarse / err_fine) / std::log(ratio);
}

namespace {
// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace

bool AdaptiveRK45::integrate(double& t, Eigen::VectorXd& y, double t_end) {
  const double dir = (t_end >= t) ? 1.0 : -1.0;
  double h = std::min(std::abs(initial_step), std::abs(t_end - t)) * dir;
  if (h == 0.0) return true;
  const int dim = static_cast<int>(y.size());
  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  Eigen::VectorXd ytmp(dim), ynew(dim), yerr(dim);
  rhs_(t, y, k1);
  int rejected_in_row = 0;
  while (dir * (t_end - t) > 1e-15 * std::max(1.0, std::abs(t))) {
    if (dir * (t + h) > dir * t_end) h = t_end - t;
    if (max_step > 0.0 && std::abs(h) > max_step) h = max_step * dir;

    ytmp = y + h * a21 * k1;
    rhs_(t + h / 5.0, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs_(t + 3.0 * h / 10.0, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs_(t + 4.0 * h / 5.0, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs_(t + 8.0 * h / 9.0, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs_(t + h, ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs_(t + h, ynew, k7);
    yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(yerr[i]) / sc);
    }
    if (err <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      rejected_in_row = 0;
      if (observer) observer(t, y);
      if (stop && stop(t, y)) return true;
    } else {
      ++rejected_in_row;
      if (rejected_in_row > 60) return false;
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-12), -0.2), 0.2, 5.0);
    h *= fac;
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t))) return false;
  }
  return true;
}

RootResult find_root_secant(const std::function<double(double)>& f, double x0, double x1,
                            double xtol, double ftol, int max_iter) {
  RootResult res;
  double f0 = f(x0), f1 = f(x1);
  double lo = 0, hi = 0, flo = 0, fhi = 0;
  bool bracketed = false;
  auto note = [&](double x, double fx) {
    if (!bracketed) return;
    if ((fx < 0) == (flo < 0)) { lo = x; flo = fx; }
    else { hi = x; fhi = fx; }
  };
  if ((f0 < 0) != (f1 < 0)) {
    bracketed = true;
    lo = x0; flo = f0; hi = x1; fhi = f1;
  }
  for (int it = 0; it < max_iter; ++it) {
    res.iterations = it + 1;
    if (std::abs(f1) <= ftol) {
      res.x = x1; res.fx = f1; res.converged = true;
      return res;
    }
    double x2;
    if (std::abs(f1 - f0) < 1e-300) {
      x2 = bracketed ? 0.5 * (lo + hi) : x1 + (x1 - x0);
    } else {
      x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
      // damp wild steps; fall back to bisection inside a bracket
      if (bracketed && (x2 <= std::min(lo, hi) || x2 >= std::max(lo, hi)))
        x2 = 0.5 * (lo + hi);
      if (!bracketed) {
        const double max_jump = 4.0 * std::max(std::abs(x1 - x0), 1e-3);
        x2 = std::clamp(x2, x1 - max_jump, x1 + max_jump);
      }
    }
    const double f2 = f(x2);
    if (!bracketed && (f2 < 0) != (f1 < 0)) {
      bracketed = true;
      lo = x1; flo = f1; hi = x2; fhi = f2;
    } else {
      note(x2, f2);
    }
    x0 = x1; f0 = f1;
    x1 = x2; f1 = f2;
    if (std::abs(x1 - x0) <= xtol && std::abs(f1) <= std::sqrt(ftol)) {
      res.x = x1; res.fx = f1; res.converged = std::abs(f1) <= ftol * 1e3;
      if (res.converged) return res;
    }
  }
  res.x = x1;
  res.fx = f1;
  res.converged = std::abs(f1) <= ftol;
  return res;
}

}  // namespace curvlab
