#include "curvlab/serialization.hpp"

#include <fstream>

namespace curvlab {

namespace {

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  int i = 0;
  for (const auto& x : j) v[i++] = x.get<double>();
  return v;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

}  // namespace

nlohmann::json operator_to_json(const CurvatureOperator& r, Normalization norm) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = r.n();
  j["normalization"] = (norm == Normalization::Operator) ? "operator" : "tensor";
  const double scale = (norm == Normalization::Operator) ? 1.0 : 0.5;
  nlohmann::json m = nlohmann::json::array();
  const int N = r.lambda2();
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) m.push_back(scale * r.matrix()(a, b));
  j["matrix"] = std::move(m);
  return j;
}

CurvatureOperator operator_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const int N = lambda2_dim(n);
  const auto& m = j.at("matrix");
  if (static_cast<int>(m.size()) != N * N)
    throw ContractError("operator_from_json: matrix must have N^2 entries");
  const std::string norm = j.value("normalization", "operator");
  const double scale = (norm == "tensor") ? 2.0 : 1.0;
  Eigen::MatrixXd mat(N, N);
  int idx = 0;
  for (const auto& x : m) {
    mat(idx / N, idx % N) = scale * x.get<double>();
    ++idx;
  }
  return CurvatureOperator(n, std::move(mat));
}

nlohmann::json profile_to_json(const ProfileSamples& p) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = p.n;
  j["topology"] = (p.topology == Topology::ClosedSphere) ? "closed_sphere" : "interval";
  j["r"] = vector_to_json(p.r);
  j["phi"] = vector_to_json(p.phi);
  j["f"] = vector_to_json(p.f);
  return j;
}

nlohmann::json profile_to_json(const ProfileGeometry& g) {
  return profile_to_json(ProfileSamples{g.n, g.topology, g.r, g.phi, g.f});
}

ProfileSamples profile_from_json(const nlohmann::json& j) {
  ProfileSamples p;
  p.n = j.at("n").get<int>();
  const std::string topo = j.at("topology").get<std::string>();
  if (topo == "closed_sphere") p.topology = Topology::ClosedSphere;
  else if (topo == "interval") p.topology = Topology::Interval;
  else throw ContractError("profile_from_json: unknown topology " + topo);
  p.r = vector_from_json(j.at("r"));
  p.phi = vector_from_json(j.at("phi"));
  p.f = vector_from_json(j.at("f"));
  return p;
}

nlohmann::json qe_to_json(const QEStructure& q) {
  nlohmann::json j = profile_to_json(q.geom);
  if (q.m.is_finite) j["m"] = q.m.value;
  else j["m"] = "inf";
  j["lambda"] = q.lambda;
  return j;
}

QEStructure qe_from_json(const nlohmann::json& j) {
  const ProfileSamples p = profile_from_json(j);
  QEStructure q;
  q.geom = build_profile(p.n, p.r, p.phi, p.f, p.topology);
  const auto& mj = j.at("m");
  if (mj.is_string()) {
    if (mj.get<std::string>() != "inf")
      throw ContractError("qe_from_json: m must be a positive integer or \"inf\"");
    q.m = MParam::infinity();
  } else {
    q.m = MParam::finite(mj.get<int>());
  }
  q.lambda = j.at("lambda").get<double>();
  return q;
}

nlohmann::json rigidity_report_to_json(const RigidityReport& rep) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["lhs"] = rep.lhs;
  j["terms"] = {{"traceless_ricci", rep.term_traceless_ricci},
                {"grad4", rep.term_grad4},
                {"grad2", rep.term_grad2},
                {"hess", rep.term_hess}};
  j["rhs_sum"] = rep.rhs_sum();
  j["verdict"] = to_string(rep.verdict);
  j["lhs_nonnegative_ok"] = rep.lhs_nonnegative_ok;
  j["h_compat_residual"] = rep.h_compat_residual;
  j["f_deviation"] = rep.f_deviation;
  j["tolerances"] = {{"integral", rep.tol_integral}, {"compat", rep.tol_compat}};
  j["grid_points"] = rep.grid_points;
  return j;
}

nlohmann::json term_group_report_to_json(const TermGroupReport& rep) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["groups"] = {{"laplacian_pullback", rep.norm_laplacian_pullback},
                 {"directional", rep.norm_directional},
                 {"cross_laplacian", rep.norm_cross_laplacian},
                 {"radial_transport", rep.norm_radial_transport},
                 {"q_pullback", rep.norm_q_pullback},
                 {"hess_product", rep.norm_hess_product},
                 {"cross_quadratic", rep.norm_cross_quadratic}};
  j["cross_cancellation"] = rep.cross_cancellation;
  j["regroup_residual"] = rep.regroup_residual;
  j["base_ci_residual"] = rep.base_ci_residual;
  j["transfer_residual"] = rep.transfer_residual;
  j["excluded_points"] = rep.excluded;
  return j;
}

void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<Eigen::VectorXd>& columns) {
  if (headers.size() != columns.size())
    throw ContractError("write_csv: header/column count mismatch");
  const Eigen::Index rows = columns.empty() ? 0 : columns[0].size();
  for (const auto& c : columns)
    if (c.size() != rows) throw ContractError("write_csv: ragged columns");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out.precision(17);
  for (size_t i = 0; i < headers.size(); ++i)
    out << headers[i] << (i + 1 < headers.size() ? ',' : '\n');
  for (Eigen::Index r = 0; r < rows; ++r)
    for (size_t c = 0; c < columns.size(); ++c)
      out << columns[c][r] << (c + 1 < columns.size() ? ',' : '\n');
}

void write_flow_csv(const std::string& path, const FlowTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_flow_csv: cannot open " + path);
  out.precision(17);
  out << "t";
  if (!trace.states.empty())
    for (size_t i = 0; i < trace.states[0].factors.size(); ++i) out << ",alpha_" << i;
  out << ",blowup\n";
  for (const auto& s : trace.states) {
    out << s.t;
    for (const auto& f : s.factors) out << ',' << f.alpha;
    out << ",0\n";
  }
  if (trace.blowup_time) {
    out << *trace.blowup_time;
    if (!trace.states.empty())
      for (size_t i = 0; i < trace.states[0].factors.size(); ++i) out << ",0";
    out << ",1\n";
  }
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void save_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << '\n';
}

}  // namespace curvlab
