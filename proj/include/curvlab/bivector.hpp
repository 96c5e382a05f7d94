#ifndef CURVLAB_BIVECTOR_HPP
#define CURVLAB_BIVECTOR_HPP

#include <Eigen/Dense>

#include "curvlab/errors.hpp"

namespace curvlab {

/// Dimension of Lambda^2 R^n.
constexpr int lambda2_dim(int n) { return n * (n - 1) / 2; }

/// Index of e_i ^ e_j (i < j, 0-based) in the lexicographic basis
/// (0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1).
int pair_index(int n, int i, int j);

/// Inverse of pair_index.
std::pair<int, int> index_pair(int n, int a);

/// Default tolerance for exact-algebra checks.
inline constexpr double kAlgebraTol = 1e-12;

/// Element of Lambda^2 R^n in lexicographic coordinates, identified with
/// so(n) through (x ^ y) z = <y,z> x - <x,z> y. The basis {e_i ^ e_j}_{i<j}
/// is orthonormal for <A,B> = -1/2 tr(AB), so the coordinate vector is an
/// orthonormal-frame representation and no scale factor appears anywhere in
/// this module.
class Bivector {
 public:
  Bivector(int dim, Eigen::VectorXd coords);

  /// Zero bivector.
  static Bivector zero(int dim);

  /// Basis element e_i ^ e_j; i != j, any order (sign handled).
  static Bivector basis(int dim, int i, int j);

  /// x ^ y for vectors of the same dimension n >= 2.
  static Bivector wedge(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

  /// Reconstruct from a skew-symmetric matrix (checked to tolerance).
  static Bivector from_skew(const Eigen::MatrixXd& m, double tol = kAlgebraTol);

  int dim() const { return dim_; }
  const Eigen::VectorXd& coords() const { return coords_; }

  /// The skew matrix M with M z = <y,z>x - <x,z>y on decomposables.
  Eigen::MatrixXd to_skew() const;

  /// Action on a vector through the skew representation.
  Eigen::VectorXd apply(const Eigen::VectorXd& z) const;

  Bivector operator+(const Bivector& o) const;
  Bivector operator-(const Bivector& o) const;
  Bivector operator*(double c) const;

 private:
  int dim_;
  Eigen::VectorXd coords_;
};

/// <a, b> = -1/2 tr(AB) = dot product of lexicographic coordinates.
double inner(const Bivector& a, const Bivector& b);

/// so(n) commutator [A,B] = AB - BA, returned as a bivector.
Bivector bracket(const Bivector& a, const Bivector& b);

/// max |M + M^T| entry: deviation from skewness.
double skew_residual(const Eigen::MatrixXd& m);

}  // namespace curvlab

#endif
