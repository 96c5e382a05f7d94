#include "curvlab/curvature_operator.hpp"

#include <map>
#include <mutex>
#include <string>

namespace curvlab {

RicciMatrix RicciMatrix::to_operator() const {
  if (tag == Normalization::Operator) return *this;
  return {n, 2.0 * mat, Normalization::Operator};
}

RicciMatrix RicciMatrix::to_tensor() const {
  if (tag == Normalization::Tensor) return *this;
  return {n, 0.5 * mat, Normalization::Tensor};
}

CurvatureOperator::CurvatureOperator(int n, Eigen::MatrixXd matrix, double sym_tol)
    : n_(n), matrix_(std::move(matrix)) {
  if (n_ < 2) throw DimensionError("CurvatureOperator: n must be >= 2");
  const int N = lambda2_dim(n_);
  if (matrix_.rows() != N || matrix_.cols() != N)
    throw DimensionError("CurvatureOperator: matrix must be N x N with N = n(n-1)/2");
  const double asym = (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  if (asym > sym_tol * scale)
    throw ContractError("CurvatureOperator: matrix not symmetric (residual " +
                        std::to_string(asym) + ")");
  matrix_ = 0.5 * (matrix_ + matrix_.transpose().eval());
}

CurvatureOperator CurvatureOperator::zero(int n) {
  return CurvatureOperator(n, Eigen::MatrixXd::Zero(lambda2_dim(n), lambda2_dim(n)));
}

CurvatureOperator CurvatureOperator::identity(int n) {
  return CurvatureOperator(n, Eigen::MatrixXd::Identity(lambda2_dim(n), lambda2_dim(n)));
}

double CurvatureOperator::entry(int i, int j, int k, int l) const {
  if (i == j || k == l) return 0.0;
  double sign = 1.0;
  if (i > j) { std::swap(i, j); sign = -sign; }
  if (k > l) { std::swap(k, l); sign = -sign; }
  return sign * matrix_(pair_index(n_, i, j), pair_index(n_, k, l));
}

CurvatureOperator CurvatureOperator::operator+(const CurvatureOperator& o) const {
  if (n_ != o.n_) throw DimensionError("CurvatureOperator: dimension mismatch");
  return CurvatureOperator(n_, matrix_ + o.matrix_);
}

CurvatureOperator CurvatureOperator::operator-(const CurvatureOperator& o) const {
  if (n_ != o.n_) throw DimensionError("CurvatureOperator: dimension mismatch");
  return CurvatureOperator(n_, matrix_ - o.matrix_);
}

CurvatureOperator CurvatureOperator::operator*(double c) const {
  return CurvatureOperator(n_, matrix_ * c);
}

double bianchi_residual(const CurvatureOperator& r) {
  const int n = r.n();
  double worst = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      for (int w = y + 1; w < n; ++w)
        for (int z = w + 1; z < n; ++z) {
          // cyclic sum over the first three slots
          const double cyc =
              r.entry(x, y, w, z) + r.entry(y, w, x, z) + r.entry(w, x, y, z);
          worst = std::max(worst, std::abs(cyc));
        }
  return worst;
}

CurvatureOperator bianchi_project(const CurvatureOperator& s) {
  const int n = s.n();
  Eigen::MatrixXd m = s.matrix();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          const int ij = pair_index(n, i, j), kl = pair_index(n, k, l);
          const int ik = pair_index(n, i, k), jl = pair_index(n, j, l);
          const int il = pair_index(n, i, l), jk = pair_index(n, j, k);
          // <S, B>_F with B the four-form operator of e_i^e_j^e_k^e_l
          const double coeff = 2.0 * (m(ij, kl) - m(ik, jl) + m(il, jk)) / 6.0;
          m(ij, kl) -= coeff; m(kl, ij) -= coeff;
          m(ik, jl) += coeff; m(jl, ik) += coeff;
          m(il, jk) -= coeff; m(jk, il) -= coeff;
        }
  return CurvatureOperator(n, std::move(m));
}

RicciMatrix ricci_of(const CurvatureOperator& r) {
  const int n = r.n();
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double tot = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        tot += r.entry(i, k, j, k);
      }
      ric(i, j) = tot;
      ric(j, i) = tot;
    }
  return {n, std::move(ric), Normalization::Operator};
}

double scal_of(const CurvatureOperator& r) { return ricci_of(r).trace(); }

const StructureConstants& structure_constants(int n) {
  static std::mutex mtx;
  static std::map<int, StructureConstants> cache;
  std::scoped_lock lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  StructureConstants sc;
  sc.n = n;
  const int N = lambda2_dim(n);
  // [e_i^e_j, e_k^e_l] = d_jk e_i^e_l + d_il e_j^e_k - d_jl e_i^e_k - d_ik e_j^e_l;
  // nonzero only when the pairs share exactly one leg, and then a single term.
  auto push = [&](int a, int b, int p, int q, double c) {
    if (p == q) return;
    if (p > q) { std::swap(p, q); c = -c; }
    sc.entries.push_back({a, b, pair_index(n, p, q), c});
  };
  for (int a = 0; a < N; ++a) {
    auto [i, j] = index_pair(n, a);
    for (int b = 0; b < N; ++b) {
      auto [k, l] = index_pair(n, b);
      if (j == k) push(a, b, i, l, 1.0);
      if (i == l) push(a, b, j, k, 1.0);
      if (j == l) push(a, b, i, k, -1.0);
      if (i == k) push(a, b, j, l, -1.0);
    }
  }
  return cache.emplace(n, std::move(sc)).first->second;
}

CurvatureOperator sharp_reference(const CurvatureOperator& a, const CurvatureOperator& b) {
  if (a.n() != b.n()) throw DimensionError("sharp: dimension mismatch");
  const int n = a.n();
  const int N = lambda2_dim(n);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N, N);
  for (int al = 0; al < N; ++al) {
    const Bivector wa(n, Eigen::VectorXd::Unit(N, al));
    const Bivector Aa(n, a.matrix().col(al));
    for (int be = 0; be < N; ++be) {
      const Bivector wb(n, Eigen::VectorXd::Unit(N, be));
      const Bivector Bb(n, b.matrix().col(be));
      const Eigen::VectorXd L = bracket(Aa, Bb).coords();
      const Eigen::VectorXd M = bracket(wa, wb).coords();
      out.noalias() += 0.5 * L * M.transpose();
    }
  }
  return CurvatureOperator(n, std::move(out), 1e-9);
}

CurvatureOperator sharp(const CurvatureOperator& a, const CurvatureOperator& b) {
  if (a.n() != b.n()) throw DimensionError("sharp: dimension mismatch");
  const int n = a.n();
  const int N = lambda2_dim(n);
  const auto& sc = structure_constants(n);
  const Eigen::MatrixXd& A = a.matrix();
  const Eigen::MatrixXd& B = b.matrix();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N, N);
  // (A#B)_{pq} = 1/2 sum c_{gdp} c_{abq} A_{ga} B_{db}
  for (const auto& e1 : sc.entries) {
    const auto* arow = A.col(e1.a).data();
    const auto* brow = B.col(e1.b).data();
    auto* orow = out.col(e1.p).data();  // column-major; out is symmetric in the end
    for (const auto& e2 : sc.entries) {
      orow[e2.p] += 0.5 * e1.c * e2.c * arow[e2.a] * brow[e2.b];
    }
  }
  // accumulated transposed (p as column); symmetry of the result makes the
  // orientation immaterial, but symmetrize to wash roundoff
  Eigen::MatrixXd sym = 0.5 * (out + out.transpose());
  return CurvatureOperator(n, std::move(sym), 1e-9);
}

CurvatureOperator q_of(const CurvatureOperator& r) {
  Eigen::MatrixXd sq = r.matrix() * r.matrix();
  const CurvatureOperator rsq(r.n(), 0.5 * (sq + sq.transpose().eval()));
  return rsq + sharp(r, r);
}

TraceIdentityResiduals trace_identity_residuals(const CurvatureOperator& r,
                                                double bianchi_tol) {
  const double scale = std::max(1.0, r.norm());
  if (bianchi_residual(r) > bianchi_tol * scale)
    throw ContractError("trace_identity_residuals: input violates the Bianchi identity");
  const int n = r.n();
  const CurvatureOperator q = q_of(r);
  const Eigen::MatrixXd ric = ricci_of(r).mat;
  const Eigen::MatrixXd ricq = ricci_of(q).mat;

  TraceIdentityResiduals res;
  res.scal_residual = std::abs(ricq.trace() - ric.squaredNorm());

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double tot = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        for (int l = 0; l < n; ++l) {
          if (l == j) continue;
          tot += ric(k, l) * r.entry(i, k, j, l);
        }
      }
      rhs(i, j) = tot;
    }
  res.ricci_residual = (ricq - rhs).cwiseAbs().maxCoeff();
  return res;
}

CurvatureOperator kulkarni_nomizu_with_metric(const Eigen::MatrixXd& h) {
  const int n = static_cast<int>(h.rows());
  const int N = lambda2_dim(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
  for (int a = 0; a < N; ++a) {
    auto [i, j] = index_pair(n, a);
    for (int b = a; b < N; ++b) {
      auto [k, l] = index_pair(n, b);
      const double t = h(i, k) * (j == l ? 1.0 : 0.0) + h(j, l) * (i == k ? 1.0 : 0.0) -
                       h(i, l) * (j == k ? 1.0 : 0.0) - h(j, k) * (i == l ? 1.0 : 0.0);
      m(a, b) = 2.0 * t;
      m(b, a) = m(a, b);
    }
  }
  return CurvatureOperator(n, std::move(m));
}

WeylSplit weyl_split(const CurvatureOperator& r) {
  const int n = r.n();
  if (n < 3) throw DimensionError("weyl_split: requires n >= 3");
  const Eigen::MatrixXd ric_t = ricci_of(r).to_tensor().mat;
  const double s = ric_t.trace();
  const Eigen::MatrixXd ric0 = ric_t - (s / n) * Eigen::MatrixXd::Identity(n, n);

  CurvatureOperator scalar_part =
      CurvatureOperator::identity(n) * (2.0 * s / (n * (n - 1)));
  CurvatureOperator ricci_part = kulkarni_nomizu_with_metric(ric0) * (1.0 / (n - 2));
  CurvatureOperator weyl = r - scalar_part - ricci_part;
  return {std::move(scalar_part), std::move(ricci_part), std::move(weyl)};
}

}  // namespace curvlab
