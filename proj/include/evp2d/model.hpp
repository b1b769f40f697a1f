#pragma once

#include <filesystem>

#include "json.hpp"

#include "evp2d/dense.hpp"

namespace evp2d {

/// The problem instance (A, C): both Hermitian, C indefinite.
///
/// Inputs are checked for Hermiticity and replaced by (M + M^H) / 2, so the
/// stored matrices are exactly Hermitian. Spectral norms are cached.
class HermitianPair {
 public:
  HermitianPair(const ComplexMatrix& a, const ComplexMatrix& c);

  const ComplexMatrix& a() const noexcept { return a_; }
  const ComplexMatrix& c() const noexcept { return c_; }
  Eigen::Index n() const noexcept { return a_.rows(); }
  double norm_a() const noexcept { return norm_a_; }
  double norm_c() const noexcept { return norm_c_; }

  /// A - mu C, exactly Hermitian.
  ComplexMatrix pencil(double mu) const;

  /// ||A|| + |mu| ||C|| + |lambda|; the scale used for relative tolerances.
  double scale(double mu, double lambda = 0.0) const;

  bool operator==(const HermitianPair& other) const;

 private:
  ComplexMatrix a_;
  ComplexMatrix c_;
  double norm_a_ = 0.0;
  double norm_c_ = 0.0;
};

/// Candidate solution (mu, lambda, x). mu and lambda are always real.
struct Triplet {
  double mu = 0.0;
  double lambda = 0.0;
  ComplexVector x;

  /// Builds a triplet with x scaled to unit norm.
  static Triplet normalized(double mu, double lambda, const ComplexVector& x);
};

/// F(mu, lambda, x) = [(A - mu C - lambda I) x; -x^H C x / 2; -x^H x / 2 + 1/2].
struct ResidualReport {
  ComplexVector f;  // length n + 2, last two entries real
  double norm = 0.0;
  double eig_norm = 0.0;       // ||(A - mu C - lambda I) x||
  double isotropy = 0.0;       // |x^H C x| / 2
  double normalization = 0.0;  // |1 - x^H x| / 2
};

ResidualReport residual(const HermitianPair& pair, const Triplet& t);

/// Full (n+2) x (n+2) Jacobian of F; Hermitian by construction.
ComplexMatrix jacobian(const HermitianPair& pair, const Triplet& t);

/// Leading n rows of the Jacobian: [A - mu C - lambda I, -Cx, -x].
ComplexMatrix jacobian_hat(const HermitianPair& pair, const Triplet& t);

// Serialization. Complex scalars are [re, im]; matrices are row-major lists of rows.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, const char* field);
nlohmann::json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const nlohmann::json& j, const char* field);

nlohmann::json pair_to_json(const HermitianPair& pair);
HermitianPair pair_from_json(const nlohmann::json& j);
HermitianPair load_pair(const std::filesystem::path& path);
void save_pair(const HermitianPair& pair, const std::filesystem::path& path);

nlohmann::json triplet_to_json(const Triplet& t);
Triplet triplet_from_json(const nlohmann::json& j);
Triplet load_triplet(const std::filesystem::path& path);
void save_triplet(const Triplet& t, const std::filesystem::path& path);

}  // namespace evp2d
