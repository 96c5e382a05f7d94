#ifndef CURVLAB_MODEL_SPACES_HPP
#define CURVLAB_MODEL_SPACES_HPP

#include <optional>
#include <string>
#include <vector>

#include "curvlab/curvature_operator.hpp"

namespace curvlab {

/// Catalog entry for a symmetric model space: a space form or a product of
/// space forms. `symmetric` records nabla R = 0 structurally (true for every
/// entry assembled here); it gates the identities that may be checked purely
/// algebraically, since Delta R = 0 can then be dropped.
struct ModelSpaceSpec {
  enum class Kind { SpaceForm, Product };

  struct Factor {
    int dim = 0;
    double kappa = 0.0;  // sectional curvature (length^-2)
  };

  Kind kind = Kind::SpaceForm;
  std::vector<Factor> factors;
  bool symmetric = true;
  std::optional<double> lambda;  // tensor Einstein constant, when Einstein
  std::string name;

  int total_dim() const;
  bool einstein() const { return lambda.has_value(); }

  static ModelSpaceSpec space_form(int n, double kappa);
  static ModelSpaceSpec product(const std::vector<Factor>& factors);

  /// Parse catalog names like "sphere:n=5,k=1" and
  /// "product:sphere(2,1)xsphere(3,2)".
  static ModelSpaceSpec parse(const std::string& name);
};

/// Constant-curvature operator 2 kappa Id on Lambda^2 R^n
/// (tensor Ricci = (n-1) kappa g).
CurvatureOperator space_form_operator(int n, double kappa);

/// Block operator of a Riemannian product: factor blocks embedded, mixed
/// planes flat. Ricci is block diagonal with the factor Riccis.
CurvatureOperator product_operator(const CurvatureOperator& r1, const CurvatureOperator& r2);

/// Curvature operator of a catalog entry.
CurvatureOperator operator_of(const ModelSpaceSpec& spec);

/// |Q(R) - 2 lambda R| / |R| for an Einstein symmetric entry, where the
/// curvature identity reduces to Q(R) = 2 lambda R. Rejects non-Einstein or
/// non-symmetric specs.
double einstein_identity_residual(const ModelSpaceSpec& spec);

/// Least-squares best c for Q(R) ~ c R and the relative residual at that c;
/// the negative control for non-Einstein products.
struct ProportionalityFit {
  double c = 0.0;
  double relative_residual = 0.0;
};
ProportionalityFit fit_q_proportionality(const CurvatureOperator& r);

/// Spheres n = 2..8 (kappa = +-1) and a few Einstein products.
std::vector<ModelSpaceSpec> standard_catalog();

}  // namespace curvlab

#endif
