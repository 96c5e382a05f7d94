#include "curvlab/bivector.hpp"

#include <cmath>
#include <string>

namespace curvlab {

int pair_index(int n, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= n || j >= n)
    throw DimensionError("pair_index: bad index pair (" + std::to_string(i) + "," +
                         std::to_string(j) + ") for n=" + std::to_string(n));
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<int, int> index_pair(int n, int a) {
  int i = 0;
  int block = n - 1;
  while (a >= block) {
    a -= block;
    ++i;
    --block;
  }
  return {i, i + 1 + a};
}

Bivector::Bivector(int dim, Eigen::VectorXd coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim_ < 2) throw DimensionError("Bivector: dimension must be >= 2");
  if (coords_.size() != lambda2_dim(dim_))
    throw DimensionError("Bivector: coordinate length != n(n-1)/2");
}

Bivector Bivector::zero(int dim) {
  return Bivector(dim, Eigen::VectorXd::Zero(lambda2_dim(dim)));
}

Bivector Bivector::basis(int dim, int i, int j) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(lambda2_dim(dim));
  const double sign = (i < j) ? 1.0 : -1.0;
  c[pair_index(dim, i, j)] = sign;
  return Bivector(dim, std::move(c));
}

Bivector Bivector::wedge(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) throw DimensionError("wedge: mismatched vector dimensions");
  const int n = static_cast<int>(x.size());
  if (n < 2) throw DimensionError("wedge: dimension must be >= 2");
  Eigen::VectorXd c(lambda2_dim(n));
  int a = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c[a++] = x[i] * y[j] - x[j] * y[i];
  return Bivector(n, std::move(c));
}

Bivector Bivector::from_skew(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionError("from_skew: matrix not square");
  if (skew_residual(m) > tol) throw ContractError("from_skew: matrix not antisymmetric");
  const int n = static_cast<int>(m.rows());
  Eigen::VectorXd c(lambda2_dim(n));
  int a = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c[a++] = m(i, j);
  return Bivector(n, std::move(c));
}

Eigen::MatrixXd Bivector::to_skew() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  int a = 0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) {
      m(i, j) = coords_[a];
      m(j, i) = -coords_[a];
      ++a;
    }
  return m;
}

Eigen::VectorXd Bivector::apply(const Eigen::VectorXd& z) const {
  if (z.size() != dim_) throw DimensionError("Bivector::apply: dimension mismatch");
  return to_skew() * z;
}

Bivector Bivector::operator+(const Bivector& o) const {
  if (dim_ != o.dim_) throw DimensionError("Bivector: dimension mismatch");
  return Bivector(dim_, coords_ + o.coords_);
}

Bivector Bivector::operator-(const Bivector& o) const {
  if (dim_ != o.dim_) throw DimensionError("Bivector: dimension mismatch");
  return Bivector(dim_, coords_ - o.coords_);
}

Bivector Bivector::operator*(double c) const { return Bivector(dim_, coords_ * c); }

double inner(const Bivector& a, const Bivector& b) {
  if (a.dim() != b.dim()) throw DimensionError("inner: dimension mismatch");
  return a.coords().dot(b.coords());
}

Bivector bracket(const Bivector& a, const Bivector& b) {
  if (a.dim() != b.dim()) throw DimensionError("bracket: dimension mismatch");
  const Eigen::MatrixXd ma = a.to_skew();
  const Eigen::MatrixXd mb = b.to_skew();
  Eigen::MatrixXd c = ma * mb - mb * ma;
  const int n = a.dim();
  Eigen::VectorXd coords(lambda2_dim(n));
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) coords[k++] = c(i, j);
  return Bivector(n, std::move(coords));
}

double skew_residual(const Eigen::MatrixXd& m) {
  return (m + m.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace curvlab
