#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "curvlab/curvature_operator.hpp"
#include "curvlab/model_spaces.hpp"

using namespace curvlab;

namespace {

std::mt19937& rng() {
  static std::mt19937 gen(911);
  return gen;
}

Eigen::MatrixXd random_symmetric(int N) {
  std::normal_distribution<double> d;
  Eigen::MatrixXd m(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) m(i, j) = d(rng());
  return 0.5 * (m + m.transpose().eval());
}

CurvatureOperator random_operator(int n) {
  return CurvatureOperator(n, random_symmetric(lambda2_dim(n)));
}

CurvatureOperator random_bianchi_operator(int n) {
  return bianchi_project(random_operator(n));
}

// Brute-force orthogonal projection onto the Bianchi subspace: build the
// cyclic-sum constraint matrix over all basis quadruples and project with a
// least-squares solve. Independent of the four-form construction used by the
// library.
CurvatureOperator bianchi_project_oracle(const CurvatureOperator& s) {
  const int n = s.n();
  const int N = lambda2_dim(n);
  const int D = N * (N + 1) / 2;  // symmetric matrices, packed
  auto pack = [&](const Eigen::MatrixXd& m) {
    Eigen::VectorXd v(D);
    int idx = 0;
    for (int a = 0; a < N; ++a)
      for (int b = a; b < N; ++b) v[idx++] = (a == b) ? m(a, b) : std::sqrt(2.0) * m(a, b);
    return v;
  };
  auto unpack = [&](const Eigen::VectorXd& v) {
    Eigen::MatrixXd m(N, N);
    int idx = 0;
    for (int a = 0; a < N; ++a)
      for (int b = a; b < N; ++b) {
        m(a, b) = (a == b) ? v[idx] : v[idx] / std::sqrt(2.0);
        m(b, a) = m(a, b);
        ++idx;
      }
    return m;
  };
  // constraint rows: for each quadruple, the cyclic sum as a functional
  std::vector<Eigen::VectorXd> rows;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      for (int w = y + 1; w < n; ++w)
        for (int z = w + 1; z < n; ++z) {
          Eigen::MatrixXd functional = Eigen::MatrixXd::Zero(N, N);
          auto add = [&](int i, int j, int k, int l, double c) {
            double sign = 1.0;
            if (i > j) { std::swap(i, j); sign = -sign; }
            if (k > l) { std::swap(k, l); sign = -sign; }
            const int a = pair_index(n, i, j), b = pair_index(n, k, l);
            functional(a, b) += 0.5 * sign * c;
            functional(b, a) += 0.5 * sign * c;
          };
          add(x, y, w, z, 1.0);
          add(y, w, x, z, 1.0);
          add(w, x, y, z, 1.0);
          rows.push_back(pack(functional));
        }
  if (rows.empty()) return s;
  Eigen::MatrixXd C(static_cast<int>(rows.size()), D);
  for (size_t i = 0; i < rows.size(); ++i) C.row(static_cast<int>(i)) = rows[i];
  const Eigen::VectorXd v = pack(s.matrix());
  // project v onto ker C:  v - C^T (C C^T)^+ C v
  const Eigen::VectorXd cv = C * v;
  const Eigen::VectorXd corr =
      C.transpose() * (C * C.transpose()).ldlt().solve(cv);
  return CurvatureOperator(n, unpack(v - corr));
}

}  // namespace

TEST_SUITE_BEGIN("curvature-operators");

TEST_CASE("ricci and scal of the identity operator") {
  for (int n : {3, 4, 5, 6}) {
    const RicciMatrix ric = ricci_of(CurvatureOperator::identity(n));
    CHECK((ric.mat - (n - 1.0) * Eigen::MatrixXd::Identity(n, n)).norm() ==
          doctest::Approx(0.0).epsilon(1e-13));
    CHECK(scal_of(CurvatureOperator::identity(n)) == doctest::Approx(n * (n - 1.0)));
  }
  CHECK(scal_of(CurvatureOperator::zero(4)) == doctest::Approx(0.0));
}

TEST_CASE("space form n=4 kappa=1: tensor r = 3g, s = 12") {
  const CurvatureOperator r = space_form_operator(4, 1.0);
  const RicciMatrix rt = ricci_of(r).to_tensor();
  CHECK((rt.mat - 3.0 * Eigen::MatrixXd::Identity(4, 4)).norm() ==
        doctest::Approx(0.0).epsilon(1e-13));
  CHECK(rt.trace() == doctest::Approx(12.0));
  // tag conversion round trip is an exact doubling
  CHECK((rt.to_operator().mat - ricci_of(r).mat).norm() == doctest::Approx(0.0));
}

TEST_CASE("ricci_of is linear") {
  const int n = 4;
  const CurvatureOperator a = random_operator(n), b = random_operator(n);
  const Eigen::MatrixXd lhs = ricci_of(a + b * 2.5).mat;
  const Eigen::MatrixXd rhs = ricci_of(a).mat + 2.5 * ricci_of(b).mat;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * (1 + rhs.norm()));
}

TEST_CASE("bianchi projection: n=3 identity map, idempotent") {
  const CurvatureOperator s = random_operator(3);
  const CurvatureOperator p = bianchi_project(s);
  CHECK((p.matrix() - s.matrix()).cwiseAbs().maxCoeff() < 1e-13);  // Lambda^4 R^3 = 0
  const CurvatureOperator q4 = random_operator(5);
  const CurvatureOperator p4 = bianchi_project(q4);
  const CurvatureOperator pp4 = bianchi_project(p4);
  CHECK((pp4.matrix() - p4.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(bianchi_residual(p4) < 1e-12 * std::max(1.0, p4.norm()));
}

TEST_CASE("bianchi projection: identity operator is fixed") {
  for (int n : {4, 5}) {
    const CurvatureOperator id = CurvatureOperator::identity(n);
    CHECK((bianchi_project(id).matrix() - id.matrix()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("bianchi projection kills the n=4 Hodge star") {
  // star swaps complementary planes: entries ((12),(34)) = 1, ((13),(24)) = -1,
  // ((14),(23)) = 1, symmetric
  const int n = 4;
  Eigen::MatrixXd star = Eigen::MatrixXd::Zero(6, 6);
  star(pair_index(n, 0, 1), pair_index(n, 2, 3)) = 1.0;
  star(pair_index(n, 0, 2), pair_index(n, 1, 3)) = -1.0;
  star(pair_index(n, 0, 3), pair_index(n, 1, 2)) = 1.0;
  star = (star + star.transpose()).eval();
  const CurvatureOperator s(n, star);
  CHECK(bianchi_project(s).norm() == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("bianchi projection agrees with the least-squares oracle") {
  for (int n : {4, 5}) {
    for (int rep = 0; rep < 5; ++rep) {
      const CurvatureOperator s = random_operator(n);
      const CurvatureOperator lib = bianchi_project(s);
      const CurvatureOperator orc = bianchi_project_oracle(s);
      CHECK((lib.matrix() - orc.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("Id # Id = (n-2) Id") {
  for (int n = 3; n <= 8; ++n) {
    const CurvatureOperator id = CurvatureOperator::identity(n);
    const CurvatureOperator s = sharp_reference(id, id);
    const Eigen::MatrixXd expect =
        (n - 2.0) * Eigen::MatrixXd::Identity(lambda2_dim(n), lambda2_dim(n));
    CHECK((s.matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((sharp(id, id).matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sharp vanishes identically in n=2") {
  const CurvatureOperator a = random_operator(2), b = random_operator(2);
  CHECK(sharp(a, b).norm() == doctest::Approx(0.0));
  CHECK(sharp_reference(a, b).norm() == doctest::Approx(0.0));
}

TEST_CASE("sharp: optimized kernel agrees with the quadruple-sum oracle") {
  for (int n : {3, 4, 5, 6}) {
    for (int rep = 0; rep < 8; ++rep) {
      const CurvatureOperator a = random_operator(n), b = random_operator(n);
      const CurvatureOperator s1 = sharp(a, b);
      const CurvatureOperator s2 = sharp_reference(a, b);
      const double scale = std::max(1.0, a.norm() * b.norm());
      CHECK((s1.matrix() - s2.matrix()).cwiseAbs().maxCoeff() < 1e-12 * scale);
    }
  }
}

TEST_CASE("sharp is symmetric in its arguments and in the operator sense") {
  const int n = 5;
  const CurvatureOperator a = random_operator(n), b = random_operator(n);
  const CurvatureOperator ab = sharp(a, b), ba = sharp(b, a);
  CHECK((ab.matrix() - ba.matrix()).cwiseAbs().maxCoeff() < 1e-12 * (1 + ab.norm()));
  CHECK((ab.matrix() - ab.matrix().transpose().eval()).cwiseAbs().maxCoeff() <
        1e-12 * (1 + ab.norm()));
}

TEST_CASE("Q on multiples of the identity: Q(2k Id) = 4 k^2 (n-1) Id") {
  for (int n : {3, 5}) {
    for (double k : {1.0, -0.7}) {
      const CurvatureOperator r = space_form_operator(n, k);
      const Eigen::MatrixXd expect =
          4.0 * k * k * (n - 1.0) * Eigen::MatrixXd::Identity(lambda2_dim(n), lambda2_dim(n));
      CHECK((q_of(r).matrix() - expect).cwiseAbs().maxCoeff() < 1e-12 * (1 + k * k));
    }
  }
  CHECK(q_of(CurvatureOperator::zero(4)).norm() == doctest::Approx(0.0));
}

TEST_CASE("Q is quadratically homogeneous") {
  const CurvatureOperator r = random_operator(4);
  const double c = 1.7;
  const Eigen::MatrixXd lhs = q_of(r * c).matrix();
  const Eigen::MatrixXd rhs = c * c * q_of(r).matrix();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-11 * (1 + rhs.norm()));
}

TEST_CASE("trace identities: space form n=3 gives Scal(Q) = 48") {
  const CurvatureOperator r = space_form_operator(3, 1.0);
  CHECK(scal_of(q_of(r)) == doctest::Approx(48.0));
  const auto res = trace_identity_residuals(r);
  CHECK(res.scal_residual < 1e-10);
  CHECK(res.ricci_residual < 1e-10);
  const auto zero = trace_identity_residuals(CurvatureOperator::zero(4));
  CHECK(zero.scal_residual == doctest::Approx(0.0));
  CHECK(zero.ricci_residual == doctest::Approx(0.0));
}

TEST_CASE("trace identities hold on random Bianchi-projected operators") {
  for (int n : {3, 4, 5}) {
    for (int rep = 0; rep < 20; ++rep) {
      const CurvatureOperator r = random_bianchi_operator(n);
      const double scale = std::max(1.0, r.norm() * r.norm());
      const auto res = trace_identity_residuals(r);
      CHECK(res.scal_residual < 1e-10 * scale);
      CHECK(res.ricci_residual < 1e-10 * scale);
    }
  }
}

TEST_CASE("trace identities reject non-Bianchi input") {
  const int n = 4;
  Eigen::MatrixXd star = Eigen::MatrixXd::Zero(6, 6);
  star(pair_index(n, 0, 1), pair_index(n, 2, 3)) = 1.0;
  star(pair_index(n, 0, 2), pair_index(n, 1, 3)) = -1.0;
  star(pair_index(n, 0, 3), pair_index(n, 1, 2)) = 1.0;
  star = (star + star.transpose()).eval();
  CHECK_THROWS_AS(trace_identity_residuals(CurvatureOperator(n, star)), ContractError);
}

TEST_CASE("scal(Q) is nonnegative on Bianchi operators (sum of squares)") {
  for (int rep = 0; rep < 10; ++rep) {
    const CurvatureOperator r = random_bianchi_operator(4);
    CHECK(scal_of(q_of(r)) >= -1e-12);
  }
}

TEST_CASE("normalization audit: Scal(Q) = |Ric_op|^2 = 4 |Ric_tensor|^2") {
  const CurvatureOperator r = random_bianchi_operator(4);
  const double scal_q = scal_of(q_of(r));
  const double ric_op2 = ricci_of(r).mat.squaredNorm();
  const double ric_t2 = ricci_of(r).to_tensor().mat.squaredNorm();
  CHECK(scal_q == doctest::Approx(ric_op2).epsilon(1e-10));
  CHECK(scal_q == doctest::Approx(4.0 * ric_t2).epsilon(1e-10));
}

TEST_CASE("weyl split: space forms have no Weyl or traceless-Ricci part") {
  const CurvatureOperator r = space_form_operator(5, 2.0);
  const WeylSplit w = weyl_split(r);
  CHECK(w.weyl_part.norm() < 1e-12);
  CHECK(w.traceless_ricci_part.norm() < 1e-12);
  CHECK((w.scalar_part.matrix() - r.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("weyl split: S2 x S2 has Ricci-free nonzero Weyl part") {
  const CurvatureOperator r =
      product_operator(space_form_operator(2, 1.0), space_form_operator(2, 1.0));
  const WeylSplit w = weyl_split(r);
  CHECK(w.weyl_part.norm() > 0.5);
  CHECK(ricci_of(w.weyl_part).mat.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(ricci_of(w.traceless_ricci_part).mat.cwiseAbs().maxCoeff() < 1e-12);  // Einstein
}

TEST_CASE("weyl split: parts sum to the input and are orthogonal") {
  for (int n : {3, 4, 5}) {
    const CurvatureOperator r = random_bianchi_operator(n);
    const WeylSplit w = weyl_split(r);
    const Eigen::MatrixXd sum =
        w.scalar_part.matrix() + w.traceless_ricci_part.matrix() + w.weyl_part.matrix();
    CHECK((sum - r.matrix()).cwiseAbs().maxCoeff() < 1e-12 * (1 + r.norm()));
    CHECK(ricci_of(w.weyl_part).mat.cwiseAbs().maxCoeff() < 1e-10 * (1 + r.norm()));
    const double s12 =
        (w.scalar_part.matrix().cwiseProduct(w.traceless_ricci_part.matrix())).sum();
    const double s13 = (w.scalar_part.matrix().cwiseProduct(w.weyl_part.matrix())).sum();
    const double s23 =
        (w.traceless_ricci_part.matrix().cwiseProduct(w.weyl_part.matrix())).sum();
    CHECK(std::abs(s12) < 1e-10 * (1 + r.norm() * r.norm()));
    CHECK(std::abs(s13) < 1e-10 * (1 + r.norm() * r.norm()));
    CHECK(std::abs(s23) < 1e-10 * (1 + r.norm() * r.norm()));
  }
  CHECK_THROWS_AS(weyl_split(random_operator(2)), DimensionError);
}

TEST_CASE("asymmetric input is rejected") {
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(3, 3);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(CurvatureOperator(3, bad), ContractError);
}

TEST_SUITE_END();
