#include "curvlab/ricci_flow.hpp"

#include <cmath>

#include "curvlab/model_spaces.hpp"

namespace curvlab {

CurvatureOperator operator_of_state(const FlowState& state) {
  if (state.factors.empty()) throw ContractError("operator_of_state: no factors");
  for (const auto& f : state.factors)
    if (f.dim < 2)
      throw ContractError("operator_of_state: factor dims must be >= 2 to carry planes");
  CurvatureOperator op = space_form_operator(state.factors[0].dim, state.factors[0].kappa());
  for (size_t i = 1; i < state.factors.size(); ++i)
    op = product_operator(op,
                          space_form_operator(state.factors[i].dim, state.factors[i].kappa()));
  return op;
}

namespace {

// d alpha_i / dt = -2 rho_i, integrated with classical fixed-step RK4. The
// system is linear so RK4 reproduces the line to rounding; the integrator is
// deliberately more general than the system needs.
FlowTrace integrate_flow(std::vector<FlowFactor> factors, double T, double dt) {
  if (dt <= 0) throw ContractError("flow: dt must be positive");
  for (const auto& f : factors)
    if (f.alpha <= 0) throw ContractError("flow: initial alpha must be positive");

  const int nf = static_cast<int>(factors.size());
  auto rhs = [&](const Eigen::VectorXd&, Eigen::VectorXd& dy) {
    for (int i = 0; i < nf; ++i) dy[i] = -2.0 * factors[i].rho;
  };

  FlowTrace trace;
  Eigen::VectorXd y(nf), k1(nf), k2(nf), k3(nf), k4(nf), tmp(nf);
  for (int i = 0; i < nf; ++i) y[i] = factors[i].alpha;
  double t = 0.0;

  auto snapshot = [&]() {
    FlowState s;
    s.t = t;
    s.factors = factors;
    for (int i = 0; i < nf; ++i) s.factors[i].alpha = y[i];
    trace.states.push_back(std::move(s));
  };
  auto earliest_blowup = [&]() {
    double tb = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nf; ++i)
      if (factors[i].rho > 0) tb = std::min(tb, t + y[i] / (2.0 * factors[i].rho));
    return tb;
  };

  snapshot();
  while (t < T - 1e-14) {
    const double tb = earliest_blowup();
    if (tb <= t + dt) {
      trace.blowup_time = tb;
      trace.truncated = tb < T;
      break;
    }
    const double step = std::min(dt, T - t);
    rhs(y, k1);
    tmp = y + 0.5 * step * k1;
    rhs(tmp, k2);
    tmp = y + 0.5 * step * k2;
    rhs(tmp, k3);
    tmp = y + step * k3;
    rhs(tmp, k4);
    y += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += step;
    snapshot();
  }
  if (!trace.blowup_time) {
    const double tb = earliest_blowup();
    if (std::isfinite(tb)) trace.blowup_time = tb;
  }
  return trace;
}

}  // namespace

FlowTrace flow_einstein(double lambda, double T, double dt, double alpha0) {
  return integrate_flow({FlowFactor::einstein(lambda, alpha0)}, T, dt);
}

FlowTrace flow_product_spheres(int p, double alpha0, int q, double beta0, double T,
                               double dt) {
  if (p < 2 || q < 2) throw ContractError("flow_product_spheres: dims must be >= 2");
  return integrate_flow({FlowFactor::sphere(p, alpha0), FlowFactor::sphere(q, beta0)}, T, dt);
}

FlowTrace flow_product(const std::vector<FlowFactor>& factors, double T, double dt) {
  return integrate_flow(factors, T, dt);
}

EvolutionResidual curvature_evolution_residual(const FlowTrace& trace) {
  const int steps = static_cast<int>(trace.states.size());
  if (steps < 3)
    throw ContractError("curvature_evolution_residual: trace too short for centered "
                        "differences");
  EvolutionResidual out;
  for (int k = 1; k + 1 < steps; ++k) {
    const CurvatureOperator rm = operator_of_state(trace.states[k - 1]);
    const CurvatureOperator r0 = operator_of_state(trace.states[k]);
    const CurvatureOperator rp = operator_of_state(trace.states[k + 1]);
    const double span = trace.states[k + 1].t - trace.states[k - 1].t;
    const Eigen::MatrixXd drdt = (rp.matrix() - rm.matrix()) / span;
    const CurvatureOperator q = q_of(r0);
    const double scale = std::max(1.0, r0.matrix().squaredNorm());
    const double res = (drdt - q.matrix()).norm() / scale;
    out.per_step.push_back(res);
    out.max_relative = std::max(out.max_relative, res);
  }
  return out;
}

double linear_solution_error(const FlowTrace& trace) {
  if (trace.states.empty()) return 0.0;
  const FlowState& init = trace.states.front();
  double worst = 0.0;
  for (const auto& s : trace.states)
    for (size_t i = 0; i < s.factors.size(); ++i) {
      const double exact = init.factors[i].alpha - 2.0 * s.factors[i].rho * s.t;
      const double rel = std::abs(s.factors[i].alpha - exact) / std::max(1.0, std::abs(exact));
      worst = std::max(worst, rel);
    }
  return worst;
}

}  // namespace curvlab
