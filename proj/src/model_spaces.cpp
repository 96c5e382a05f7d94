#include "curvlab/model_spaces.hpp"

#include <cmath>
#include <sstream>

namespace curvlab {

int ModelSpaceSpec::total_dim() const {
  int n = 0;
  for (const auto& f : factors) n += f.dim;
  return n;
}

ModelSpaceSpec ModelSpaceSpec::space_form(int n, double kappa) {
  if (n < 2) throw DimensionError("space_form: n must be >= 2");
  ModelSpaceSpec s;
  s.kind = Kind::SpaceForm;
  s.factors = {{n, kappa}};
  s.symmetric = true;
  s.lambda = (n - 1) * kappa;
  std::ostringstream os;
  os << "sphere:n=" << n << ",k=" << kappa;
  s.name = os.str();
  return s;
}

ModelSpaceSpec ModelSpaceSpec::product(const std::vector<Factor>& factors) {
  if (factors.size() < 2) throw ContractError("product: needs at least two factors");
  ModelSpaceSpec s;
  s.kind = Kind::Product;
  s.factors = factors;
  s.symmetric = true;
  // Einstein iff the factor tensor Ricci constants agree
  const double first = (factors[0].dim - 1) * factors[0].kappa;
  bool einstein = true;
  for (const auto& f : factors) {
    if (f.dim < 2) throw DimensionError("product: factor dims must be >= 2");
    if (std::abs((f.dim - 1) * f.kappa - first) > 1e-14 * std::max(1.0, std::abs(first)))
      einstein = false;
  }
  if (einstein) s.lambda = first;
  std::ostringstream os;
  os << "product:";
  for (size_t i = 0; i < factors.size(); ++i) {
    if (i) os << "x";
    os << "sphere(" << factors[i].dim << "," << factors[i].kappa << ")";
  }
  s.name = os.str();
  return s;
}

namespace {

double parse_number(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ContractError("cannot parse " + what + " from '" + s + "'");
  }
}

}  // namespace

ModelSpaceSpec ModelSpaceSpec::parse(const std::string& name) {
  const auto colon = name.find(':');
  if (colon == std::string::npos)
    throw ContractError("model space name must look like 'sphere:n=3,k=1' or "
                        "'product:sphere(2,1)xsphere(2,1)': " + name);
  const std::string kind = name.substr(0, colon);
  const std::string rest = name.substr(colon + 1);
  if (kind == "sphere") {
    int n = 0;
    double k = 0.0;
    bool have_n = false, have_k = false;
    std::istringstream is(rest);
    std::string item;
    while (std::getline(is, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ContractError("bad sphere parameter: " + item);
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      if (key == "n") { n = static_cast<int>(parse_number(val, "n")); have_n = true; }
      else if (key == "k") { k = parse_number(val, "k"); have_k = true; }
      else throw ContractError("unknown sphere parameter: " + key);
    }
    if (!have_n || !have_k) throw ContractError("sphere needs n= and k=: " + name);
    return space_form(n, k);
  }
  if (kind == "product") {
    std::vector<Factor> factors;
    size_t pos = 0;
    while (pos < rest.size()) {
      if (rest.compare(pos, 7, "sphere(") != 0)
        throw ContractError("product factors must be sphere(dim,kappa): " + rest);
      const auto close = rest.find(')', pos);
      if (close == std::string::npos) throw ContractError("unbalanced factor: " + rest);
      const std::string args = rest.substr(pos + 7, close - pos - 7);
      const auto comma = args.find(',');
      if (comma == std::string::npos) throw ContractError("factor needs dim,kappa: " + args);
      Factor f;
      f.dim = static_cast<int>(parse_number(args.substr(0, comma), "factor dim"));
      f.kappa = parse_number(args.substr(comma + 1), "factor kappa");
      factors.push_back(f);
      pos = close + 1;
      if (pos < rest.size()) {
        if (rest[pos] != 'x') throw ContractError("factors must be joined by 'x': " + rest);
        ++pos;
      }
    }
    return product(factors);
  }
  throw ContractError("unknown model space kind: " + kind);
}

CurvatureOperator space_form_operator(int n, double kappa) {
  if (n < 2) throw DimensionError("space_form_operator: n must be >= 2");
  return CurvatureOperator::identity(n) * (2.0 * kappa);
}

CurvatureOperator product_operator(const CurvatureOperator& r1, const CurvatureOperator& r2) {
  const int n1 = r1.n(), n2 = r2.n();
  const int n = n1 + n2;
  const int N = lambda2_dim(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
  // factor-1 planes
  for (int i = 0; i < n1; ++i)
    for (int j = i + 1; j < n1; ++j)
      for (int k = 0; k < n1; ++k)
        for (int l = k + 1; l < n1; ++l)
          m(pair_index(n, i, j), pair_index(n, k, l)) = r1.entry(i, j, k, l);
  // factor-2 planes, shifted by n1
  for (int i = 0; i < n2; ++i)
    for (int j = i + 1; j < n2; ++j)
      for (int k = 0; k < n2; ++k)
        for (int l = k + 1; l < n2; ++l)
          m(pair_index(n, i + n1, j + n1), pair_index(n, k + n1, l + n1)) =
              r2.entry(i, j, k, l);
  return CurvatureOperator(n, std::move(m));
}

CurvatureOperator operator_of(const ModelSpaceSpec& spec) {
  CurvatureOperator op = space_form_operator(spec.factors[0].dim, spec.factors[0].kappa);
  for (size_t i = 1; i < spec.factors.size(); ++i)
    op = product_operator(op, space_form_operator(spec.factors[i].dim, spec.factors[i].kappa));
  return op;
}

double einstein_identity_residual(const ModelSpaceSpec& spec) {
  if (!spec.einstein())
    throw ContractError("einstein_identity_residual: spec is not Einstein");
  if (!spec.symmetric)
    throw ContractError("einstein_identity_residual: spec is not symmetric; "
                        "Delta R cannot be dropped");
  const CurvatureOperator r = operator_of(spec);
  const CurvatureOperator q = q_of(r);
  const double nr = r.norm();
  const double diff = (q - r * (2.0 * *spec.lambda)).norm();
  return nr > 0 ? diff / nr : diff;
}

ProportionalityFit fit_q_proportionality(const CurvatureOperator& r) {
  const CurvatureOperator q = q_of(r);
  const double rr = r.matrix().squaredNorm();
  ProportionalityFit fit;
  if (rr == 0.0) {
    fit.relative_residual = q.norm();
    return fit;
  }
  fit.c = (q.matrix().cwiseProduct(r.matrix())).sum() / rr;
  fit.relative_residual = (q - r * fit.c).norm() / std::sqrt(rr);
  return fit;
}

std::vector<ModelSpaceSpec> standard_catalog() {
  std::vector<ModelSpaceSpec> cat;
  for (int n = 2; n <= 8; ++n) {
    cat.push_back(ModelSpaceSpec::space_form(n, 1.0));
    cat.push_back(ModelSpaceSpec::space_form(n, -1.0));
  }
  cat.push_back(ModelSpaceSpec::product({{2, 1.0}, {2, 1.0}}));
  cat.push_back(ModelSpaceSpec::product({{3, 1.0}, {2, 2.0}}));
  cat.push_back(ModelSpaceSpec::product({{2, 1.0}, {2, 1.0}, {2, 1.0}}));
  cat.push_back(ModelSpaceSpec::product({{4, 1.0}, {3, 1.5}}));
  return cat;
}

}  // namespace curvlab
