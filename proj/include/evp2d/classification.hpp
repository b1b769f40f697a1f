#pragma once

#include <optional>
#include <string_view>
#include <variant>

#include "evp2d/model.hpp"

namespace evp2d {

enum class TripletKind { NonsingularSimple, NonsingularMultiple, Singular };

std::string_view to_string(TripletKind kind);

struct ClassifyTolerances {
  double tol_mult = 0.0;
  double tol_sing = 0.0;

  /// tol_mult = max(1e-8, 1e-12 (||A|| + |mu| ||C||)), tol_sing = 1e-8 (1 + ||C||).
  static ClassifyTolerances defaults(const HermitianPair& pair, double mu);
};

struct Classification {
  TripletKind kind = TripletKind::Singular;
  Eigen::Index multiplicity = 0;
  std::optional<double> lambda_double_prime;  // multiplicity 1
  RealVector c_eigenvalues;                   // eig of V~^H C V~, descending; multiplicity >= 2
  double sigma_min_j = 0.0;
  ComplexVector representative;               // an isotropic unit eigenvector used for sigma_min_j
};

/// Eigenvalues of A - mu C within tol_mult of lambda and an orthonormal
/// basis of their eigenspace (n x k). k == 0 means no eigenvalue is close.
struct Multiplicity {
  Eigen::Index k = 0;
  ComplexMatrix basis;
  RealVector values;
};

Multiplicity multiplicity(const HermitianPair& pair, double mu, double lambda, double tol_mult);

Classification classify(const HermitianPair& pair, double mu, double lambda, const ClassifyTolerances& tol);
Classification classify(const HermitianPair& pair, double mu, double lambda);

/// The set of unit 2D-eigenvectors at a nonsingular 2D-eigenvalue.
struct SimpleSet {
  ComplexVector x;  // largest-magnitude entry real positive
};

/// {g1 t v1 + g2 s v2 : |g1| = |g2| = 1} with V^H C V = diag(c1, c2), c1 > 0 > c2.
struct MultipleSet {
  ComplexMatrix v;  // n x 2
  double c1 = 0.0;
  double c2 = 0.0;
  double t = 0.0;
  double s = 0.0;

  ComplexVector representative() const { return t * v.col(0) + s * v.col(1); }
};

struct EigvecSet {
  std::variant<SimpleSet, MultipleSet> kind;

  bool is_simple() const { return std::holds_alternative<SimpleSet>(kind); }
  const SimpleSet& simple() const { return std::get<SimpleSet>(kind); }
  const MultipleSet& multiple() const { return std::get<MultipleSet>(kind); }

  /// Unit isotropic member with all phases equal to one.
  ComplexVector representative() const;
};

/// Rotates an orthonormal 2-column basis so that V^H C V = diag(c1, c2) with c1 >= c2.
MultipleSet diagonalize_on(const ComplexMatrix& c, const ComplexMatrix& basis);

EigvecSet eigvec_set(const HermitianPair& pair, double mu, double lambda, const ClassifyTolerances& tol);
EigvecSet eigvec_set(const HermitianPair& pair, double mu, double lambda);

}  // namespace evp2d
