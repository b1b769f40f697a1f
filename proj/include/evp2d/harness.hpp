#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "evp2d/classification.hpp"
#include "evp2d/model.hpp"
#include "evp2d/rqi.hpp"

namespace evp2d {

// ---------------------------------------------------------------------------
// Problem generators

/// A = (G + G^H) / 2 with standard complex Gaussian G; C = Q^H D Q with
/// D = diag(+1 x plus, -1 x minus) and Q Haar-distributed unitary.
HermitianPair random_pair(Eigen::Index n, Eigen::Index plus, Eigen::Index minus, std::uint64_t seed);

/// Random pair (as above for C) with a nonsingular double 2D-eigenvalue
/// planted at (mu_star, lambda_star): A - mu_star C has lambda_star as a
/// double eigenvalue on a random 2-dimensional subspace on which C is
/// indefinite.
HermitianPair planted_crossing_pair(Eigen::Index n, Eigen::Index plus, Eigen::Index minus, double mu_star,
                                    double lambda_star, std::uint64_t seed);

/// Random pair with a simple 2D-eigentriplet planted at (mu_star, lambda_star, x_star).
struct PlantedTriplet {
  HermitianPair pair;
  Triplet triplet;
};
PlantedTriplet planted_simple_pair(Eigen::Index n, Eigen::Index plus, Eigen::Index minus, double mu_star,
                                   double lambda_star, std::uint64_t seed);

/// A = [[0,1],[1,0]], C = diag(1,-1); 2D-eigenvalues (0, 1) and (0, -1).
HermitianPair reference_simple_pair();
/// A = C = diag(1,-1); nonsingular double 2D-eigenvalue (1, 0).
HermitianPair reference_multiple_pair();

/// n >= 3 extensions of the reference pairs, coupled to extra coordinates
/// so that (0, 1, (e1 + e2)/sqrt2) resp. (1, 0) stay 2D-eigenvalues. At
/// n = 2 one 2DRQI step solves the problem exactly, so rate studies need these.
HermitianPair embedded_simple_pair(Eigen::Index n);
HermitianPair embedded_multiple_pair(Eigen::Index n);

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial);

// ---------------------------------------------------------------------------
// Convergence-order estimate

struct OrderEstimate {
  std::vector<double> orders;       // p_k = log(e_{k+1}/e_k) / log(e_k/e_{k-1})
  std::vector<std::size_t> indices; // k for each entry of `orders`
};

/// Uses only windows where e_{k-1} > e_k > e_{k+1} > noise_floor.
OrderEstimate convergence_order(const std::vector<double>& errors, double noise_floor);

// ---------------------------------------------------------------------------
// Studies

enum class Regime { Simple, Multiple };

std::string_view to_string(Regime regime);

/// A known nonsingular 2D-eigenvalue and its eigenvector set.
struct Target {
  double mu = 0.0;
  double lambda = 0.0;
  EigvecSet set;

  Regime regime() const { return set.is_simple() ? Regime::Simple : Regime::Multiple; }
  Reference reference() const { return Reference{mu, lambda, set}; }
};

Target make_target(const HermitianPair& pair, double mu, double lambda);

/// Simple targets: (mu*, lambda*) shifted by eps u and x* by eps w.
/// Multiple targets: scalars shifted by eps^2 u, the representative by eps w.
/// u is uniform in [-1, 1]^2 and w a random unit vector orthogonal to the
/// representative. eps == 0 returns the target itself.
Triplet perturbed_start(const Target& target, double eps, std::mt19937_64& rng);
Triplet perturbed_start(const Target& target, double eps, std::uint64_t seed);

struct Verdict {
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
};

struct ScalingStudy {
  std::string kind;                // "scaling" or "ritz"
  Regime regime = Regime::Simple;
  std::vector<double> epsilons;    // strictly decreasing
  std::vector<std::string> error_names;
  std::vector<std::vector<double>> medians;  // medians[e][eps index]
  std::vector<double> slopes;      // least-squares log-log slope per error
  double noise_floor = 0.0;        // medians at or below this are left out of the fits
  std::vector<int> attempted;
  std::vector<int> failed;         // per eps: breakdowns / excluded trials
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<Verdict> verdicts;
  bool failed_study = false;       // more than 20% of trials failed

  bool pass() const;
};

struct StudyOptions {
  int trials = 50;
  std::uint64_t seed = 1;
  double noise_floor_rel = 1e-13;  // times ||A|| + |mu*| ||C|| + |lambda*|
};

/// Validates an eps list for the slope studies: >= 2 values, strictly
/// decreasing, all in (0, 0.1], spanning at least one decade.
void check_eps_list(const std::vector<double>& eps);

/// One 2DRQI step per trial from perturbed_start; per-eps medians of the
/// mu, lambda and x errors and their log-log slopes.
ScalingStudy scaling_study(const HermitianPair& pair, const Target& target, const std::vector<double>& eps,
                           const StudyOptions& opts);

/// 2D Ritz triplets from an eps-perturbation of the ideal basis span{x*, x'*}.
ScalingStudy ritz_approx_study(const HermitianPair& pair, const Target& target, const std::vector<double>& eps,
                               const StudyOptions& opts);

struct ConditioningRow {
  double eps = 0.0;
  int trials = 0;
  int failures = 0;
  int sigma_violations = 0;
  int c_violations = 0;
  double min_sigma_ratio = 0.0;  // min over trials of sigma_n(J^_k) / sigma_n(J^_*)
};

struct ConditioningStudy {
  Regime regime = Regime::Simple;
  double sigma_n_star = 0.0;
  double c1_star = 0.0;
  double c2_star = 0.0;
  std::vector<ConditioningRow> rows;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<Verdict> verdicts;  // zero violations required for eps <= 1e-3

  bool pass() const;
};

ConditioningStudy conditioning_study(const HermitianPair& pair, const Target& target, const std::vector<double>& eps,
                                     const StudyOptions& opts);

/// Least-squares slope of log(y) against log(x) over entries with y > floor.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double floor = 0.0);

}  // namespace evp2d
