#ifndef CURVLAB_CURVATURE_OPERATOR_HPP
#define CURVLAB_CURVATURE_OPERATOR_HPP

#include <Eigen/Dense>

#include "curvlab/bivector.hpp"

namespace curvlab {

/// Normalization of a curvature-type quantity.
///
/// The operator acting on Lambda^2 is twice the (0,4) tensor:
///   <Rop(x^y), z^w> = 2 R(x,y,z,w),
/// hence Ric(operator) = 2 r and Scal(operator) = 2 s where r, s are the
/// usual Ricci tensor and scalar curvature. All conversions in the library
/// are explicit multiplications by 2 through this tag.
enum class Normalization { Operator, Tensor };

/// Symmetric n x n matrix tagged with its normalization.
struct RicciMatrix {
  int n = 0;
  Eigen::MatrixXd mat;
  Normalization tag = Normalization::Operator;

  RicciMatrix to_operator() const;
  RicciMatrix to_tensor() const;
  double trace() const { return mat.trace(); }
};

/// Symmetric bilinear form on Lambda^2 R^n in the lexicographic basis,
/// stored operator-normalized (N x N, N = n(n-1)/2).
class CurvatureOperator {
 public:
  CurvatureOperator(int n, Eigen::MatrixXd matrix, double sym_tol = kAlgebraTol);

  static CurvatureOperator zero(int n);
  static CurvatureOperator identity(int n);

  int n() const { return n_; }
  int lambda2() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  /// <R(x^y), z^w> for index quadruples; signs handled for any index order.
  double entry(int i, int j, int k, int l) const;

  /// (0,4) tensor value R(e_i,e_j,e_k,e_l) = entry / 2.
  double tensor(int i, int j, int k, int l) const { return 0.5 * entry(i, j, k, l); }

  Eigen::VectorXd apply(const Eigen::VectorXd& omega) const { return matrix_ * omega; }

  CurvatureOperator operator+(const CurvatureOperator& o) const;
  CurvatureOperator operator-(const CurvatureOperator& o) const;
  CurvatureOperator operator*(double c) const;

  double norm() const { return matrix_.norm(); }

 private:
  int n_;
  Eigen::MatrixXd matrix_;
};

/// max over basis quadruples of the first-Bianchi cyclic sum.
double bianchi_residual(const CurvatureOperator& r);

/// Orthogonal projection onto operators satisfying the algebraic Bianchi
/// identity. The complement is spanned by the C(n,4) four-form operators
/// <B(x^y), z^w> = <omega, x^y^z^w>, pairwise orthogonal with |B|^2 = 6.
CurvatureOperator bianchi_project(const CurvatureOperator& s);

/// Ric(R)(x,y) = sum_k <R(x^e_k), y^e_k>, operator-normalized.
RicciMatrix ricci_of(const CurvatureOperator& r);

/// trace of ricci_of, operator-normalized (= 2s).
double scal_of(const CurvatureOperator& r);

/// Sharp operator over the orthonormal basis {w_a} of Lambda^2 = so(n):
///   <(A#B) phi, psi> = 1/2 sum_{a,b} <[A w_a, B w_b], phi> <[w_a, w_b], psi>.
///
/// The 1/2 normalizes Id#Id = (n-2) Id, which is the scaling under which
/// Q(R) = R^2 + R#R satisfies Q(R) = 2 lambda R on Einstein spaces and the
/// Ricci/scalar trace identities hold; the bare double sum is twice this.
/// `sharp` uses precomputed so(n) structure constants; `sharp_reference`
/// is the direct quadruple sum kept as an independent oracle.
CurvatureOperator sharp(const CurvatureOperator& a, const CurvatureOperator& b);
CurvatureOperator sharp_reference(const CurvatureOperator& a, const CurvatureOperator& b);

/// Q(R) = R o R + R # R.
CurvatureOperator q_of(const CurvatureOperator& r);

/// Residuals of the two trace identities satisfied by algebraic curvature
/// operators (operator normalization):
///   Scal(Q(R))      = sum_{k,l} Ric(R)_{kl}^2
///   Ric(Q(R))_{ij}  = sum_{k,l} Ric(R)_{kl} <R(e_i ^ e_k), e_j ^ e_l>.
struct TraceIdentityResiduals {
  double scal_residual = 0.0;
  double ricci_residual = 0.0;
};
TraceIdentityResiduals trace_identity_residuals(const CurvatureOperator& r,
                                                double bianchi_tol = 1e-8);

/// Orthogonal decomposition R = scalar part + traceless-Ricci part + Weyl
/// part (n >= 3, Bianchi inputs). The first two parts reproduce ricci_of(R);
/// the Weyl part is Ricci-free.
struct WeylSplit {
  CurvatureOperator scalar_part;
  CurvatureOperator traceless_ricci_part;
  CurvatureOperator weyl_part;
};
WeylSplit weyl_split(const CurvatureOperator& r);

/// Operator form of the Kulkarni-Nomizu product h ^ g for symmetric h
/// (operator normalization, i.e. 2x the (0,4) tensor values).
CurvatureOperator kulkarni_nomizu_with_metric(const Eigen::MatrixXd& h);

/// Sparse so(n) structure constants c_{abp} = <[w_a, w_b], w_p>, cached per
/// dimension; immutable after construction and safe for concurrent reads.
struct StructureConstants {
  struct Entry {
    int a, b, p;
    double c;
  };
  int n = 0;
  std::vector<Entry> entries;
};
const StructureConstants& structure_constants(int n);

}  // namespace curvlab

#endif
