#ifndef CURVLAB_SERIALIZATION_HPP
#define CURVLAB_SERIALIZATION_HPP

#include <json.hpp>
#include <string>
#include <vector>

#include "curvlab/quasi_einstein.hpp"
#include "curvlab/ricci_flow.hpp"
#include "curvlab/warped_product.hpp"

namespace curvlab {

inline constexpr int kSchemaVersion = 1;

/// {schema_version, n, normalization, matrix: row-major N^2 array}
nlohmann::json operator_to_json(const CurvatureOperator& r,
                                Normalization norm = Normalization::Operator);
CurvatureOperator operator_from_json(const nlohmann::json& j);

/// Raw profile samples: {schema_version, n, topology, r, phi, f}.
struct ProfileSamples {
  int n = 0;
  Topology topology = Topology::Interval;
  Eigen::VectorXd r, phi, f;
};
nlohmann::json profile_to_json(const ProfileSamples& p);
nlohmann::json profile_to_json(const ProfileGeometry& g);
ProfileSamples profile_from_json(const nlohmann::json& j);

/// Profile plus {m: positive integer | "inf", lambda}.
nlohmann::json qe_to_json(const QEStructure& q);
QEStructure qe_from_json(const nlohmann::json& j);

nlohmann::json rigidity_report_to_json(const RigidityReport& rep);
nlohmann::json term_group_report_to_json(const TermGroupReport& rep);

/// CSV with a header row; columns must share a length.
void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<Eigen::VectorXd>& columns);

/// Flow trace CSV: t, alpha_0.., blowup flag row handling per the header.
void write_flow_csv(const std::string& path, const FlowTrace& trace);

nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

}  // namespace curvlab

#endif
