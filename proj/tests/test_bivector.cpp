#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "curvlab/bivector.hpp"

using namespace curvlab;

namespace {

Eigen::VectorXd unit(int n, int i) { return Eigen::VectorXd::Unit(n, i); }

std::mt19937& rng() {
  static std::mt19937 gen(20240817);
  return gen;
}

Eigen::VectorXd random_vector(int n) {
  std::normal_distribution<double> d;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng());
  return v;
}

Bivector random_bivector(int n) {
  return Bivector(n, random_vector(lambda2_dim(n)));
}

}  // namespace

TEST_SUITE_BEGIN("bivector");

TEST_CASE("lexicographic pair indexing round-trips") {
  for (int n = 2; n <= 8; ++n) {
    int a = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        CHECK(pair_index(n, i, j) == a);
        CHECK(pair_index(n, j, i) == a);
        auto [pi, pj] = index_pair(n, a);
        CHECK(pi == i);
        CHECK(pj == j);
        ++a;
      }
    CHECK(a == lambda2_dim(n));
  }
}

TEST_CASE("wedge of basis vectors acts as <y,z>x - <x,z>y") {
  const int n = 3;
  const Bivector w = Bivector::wedge(unit(n, 0), unit(n, 1));
  CHECK((w.apply(unit(n, 0)) + unit(n, 1)).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((w.apply(unit(n, 1)) - unit(n, 0)).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w.apply(unit(n, 2)).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("wedge is antisymmetric and bilinear") {
  const int n = 3;
  const Eigen::VectorXd x = random_vector(n);
  CHECK(Bivector::wedge(x, x).coords().norm() == doctest::Approx(0.0));
  // (e1 + e2) ^ e2 = e1 ^ e2
  const Bivector w = Bivector::wedge(unit(n, 0) + unit(n, 1), unit(n, 1));
  CHECK(w.coords()[0] == doctest::Approx(1.0));
  CHECK(w.coords()[1] == doctest::Approx(0.0));
  CHECK(w.coords()[2] == doctest::Approx(0.0));
}

TEST_CASE("wedge action property on random vectors") {
  for (int n : {2, 3, 5, 7}) {
    for (int rep = 0; rep < 25; ++rep) {
      const Eigen::VectorXd x = random_vector(n), y = random_vector(n), z = random_vector(n);
      const Eigen::VectorXd lhs = Bivector::wedge(x, y).apply(z);
      const Eigen::VectorXd rhs = y.dot(z) * x - x.dot(z) * y;
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * (1 + rhs.norm()));
    }
  }
}

TEST_CASE("inner product: determinant formula vs -1/2 tr(AB)") {
  // <e1^e2, e1^e2> = 1 (trace of the squared skew matrix is -2)
  const Bivector b12 = Bivector::basis(3, 0, 1);
  CHECK(inner(b12, b12) == doctest::Approx(1.0));
  const Eigen::MatrixXd m = b12.to_skew();
  CHECK(-0.5 * (m * m).trace() == doctest::Approx(1.0));

  CHECK(inner(b12, Bivector::basis(3, 0, 2)) == doctest::Approx(0.0));

  // u = (1,1,0)/sqrt(2), v = e3, w = e1, z = e3 -> det = 1/sqrt(2)
  Eigen::VectorXd u(3); u << 1, 1, 0; u /= std::sqrt(2.0);
  const Bivector uv = Bivector::wedge(u, unit(3, 2));
  const Bivector wz = Bivector::wedge(unit(3, 0), unit(3, 2));
  CHECK(inner(uv, wz) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("determinant formula equals skew trace form on random decomposables") {
  for (int n : {3, 4, 6}) {
    for (int rep = 0; rep < 25; ++rep) {
      const Eigen::VectorXd u = random_vector(n), v = random_vector(n);
      const Eigen::VectorXd w = random_vector(n), z = random_vector(n);
      const double det = u.dot(w) * v.dot(z) - u.dot(z) * v.dot(w);
      const Bivector a = Bivector::wedge(u, v), b = Bivector::wedge(w, z);
      const double tr = -0.5 * (a.to_skew() * b.to_skew()).trace();
      CHECK(std::abs(inner(a, b) - det) < 1e-12 * (1 + std::abs(det)));
      CHECK(std::abs(inner(a, b) - tr) < 1e-12 * (1 + std::abs(tr)));
    }
  }
}

TEST_CASE("basis is orthonormal (Gram matrix is the identity)") {
  for (int n : {3, 5}) {
    const int N = lambda2_dim(n);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        auto [i, j] = index_pair(n, a);
        auto [k, l] = index_pair(n, b);
        const double g = inner(Bivector::basis(n, i, j), Bivector::basis(n, k, l));
        CHECK(g == doctest::Approx(a == b ? 1.0 : 0.0));
      }
  }
}

TEST_CASE("bracket of overlapping basis elements") {
  // [e1^e2, e2^e3] = e1^e3
  const Bivector br = bracket(Bivector::basis(3, 0, 1), Bivector::basis(3, 1, 2));
  CHECK((br.coords() - Bivector::basis(3, 0, 2).coords()).norm() ==
        doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("bracket is antisymmetric; so(2) is abelian") {
  const Bivector a = random_bivector(4);
  CHECK((bracket(a, a).coords()).norm() == doctest::Approx(0.0));
  const Bivector x = random_bivector(2), y = random_bivector(2);
  CHECK(bracket(x, y).coords().norm() == doctest::Approx(0.0));
}

TEST_CASE("Jacobi identity on random triples") {
  for (int n : {3, 4, 6}) {
    for (int rep = 0; rep < 20; ++rep) {
      const Bivector a = random_bivector(n), b = random_bivector(n), c = random_bivector(n);
      const Eigen::VectorXd jac = bracket(a, bracket(b, c)).coords() +
                                  bracket(b, bracket(c, a)).coords() +
                                  bracket(c, bracket(a, b)).coords();
      CHECK(jac.cwiseAbs().maxCoeff() < 1e-12 * (1 + a.coords().norm() * b.coords().norm() *
                                                         c.coords().norm()));
    }
  }
}

TEST_CASE("skew round trip is the identity") {
  for (int n : {2, 4, 7}) {
    const Bivector a = random_bivector(n);
    const Bivector back = Bivector::from_skew(a.to_skew());
    CHECK((a.coords() - back.coords()).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  }
}

TEST_CASE("dimension mismatches are rejected") {
  CHECK_THROWS_AS(Bivector::wedge(random_vector(3), random_vector(4)), DimensionError);
  CHECK_THROWS_AS(inner(random_bivector(3), random_bivector(4)), DimensionError);
  CHECK_THROWS_AS(bracket(random_bivector(3), random_bivector(4)), DimensionError);
  Eigen::MatrixXd notskew = Eigen::MatrixXd::Ones(3, 3);
  CHECK_THROWS_AS(Bivector::from_skew(notskew), ContractError);
}

TEST_SUITE_END();
