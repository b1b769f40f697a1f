#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "evp2d/classification.hpp"
#include "evp2d/model.hpp"

namespace evp2d {

/// Orthonormal n x 2 projection basis with V^H C V = diag(c1, c2), c1 >= c2.
struct ProjectionBasis {
  ComplexMatrix v;
  double c1 = 0.0;
  double c2 = 0.0;
  double sigma_n = 0.0;        // smallest singular value of J^_k
  double sigma_n_minus_1 = 0.0;
  double norm_jhat = 0.0;      // largest singular value of J^_k
  bool near_singular = false;  // sigma_n < 1e-12 ||J^_k||
};

/// Entries of the projected pair (V^H A V, V^H C V).
struct ProjectedPair {
  double a11 = 0.0;
  Complex a12;
  double a22 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

enum class RitzBranch { Simple, Multiple };

std::string_view to_string(RitzBranch branch);

/// A 2D-eigentriplet (nu, theta, z) of the projected 2 x 2 problem.
struct RitzCandidate {
  double nu = 0.0;
  double theta = 0.0;
  Eigen::Vector2cd z;
  RitzBranch branch = RitzBranch::Simple;
  Complex alpha{1.0, 0.0};
};

ProjectionBasis projection_basis(const HermitianPair& pair, const Triplet& t);

ProjectedPair form_rq(const HermitianPair& pair, const ProjectionBasis& basis);

inline constexpr double kDefaultTauMult = 1e-10;

/// Two candidates (alpha = +conj(a12)/|a12| first, then its negative) when
/// |a12| > tau_mult (|a11| + |a22| + |a12| + 1); otherwise the single
/// candidate of the a12 == 0 case with alpha = 1. Throws NotIndefinite if
/// c1 c2 >= 0.
std::vector<RitzCandidate> solve_2x2(const ProjectedPair& rq, double tau_mult = kDefaultTauMult);

/// Candidate closest to (mu_prev, lambda_prev) in |dmu| + |dlambda|, ties to
/// the first; returns its lift (nu, theta, V z).
Triplet select_ritz(const Triplet& prev, const std::vector<RitzCandidate>& candidates,
                    const ProjectionBasis& basis, std::size_t* chosen = nullptr);

struct StepDiagnostics {
  double sigma_n_jhat = 0.0;
  bool near_singular = false;
  double c1 = 0.0;
  double c2 = 0.0;
  double abs_a12 = 0.0;
  RitzBranch branch = RitzBranch::Simple;
};

struct StepResult {
  Triplet next;
  StepDiagnostics diag;
};

struct StepOptions {
  double tau_mult = kDefaultTauMult;
};

/// One 2DRQI update. Throws IndefinitenessLost when V^H C V is not
/// indefinite and RankCollapse when the nullspace basis degenerates.
StepResult step(const HermitianPair& pair, const Triplet& t, const StepOptions& opts = {});

struct SolveOptions {
  double tol_abs = 1e-12;
  double tol_rel = 1e-14;
  int max_iter = 50;
  double tau_mult = kDefaultTauMult;
};

/// Known solution used to report per-iterate errors.
struct Reference {
  double mu = 0.0;
  double lambda = 0.0;
  EigvecSet set;
};

enum class SolveStatus { Converged, MaxIterations, IndefinitenessLost, RankCollapse, JacobianNearSingular };

std::string_view to_string(SolveStatus status);

struct IterateRecord {
  int k = 0;
  Triplet t;
  double res_norm = 0.0;
  std::optional<StepDiagnostics> diag;  // diagnostics of the step taken from this iterate
  std::optional<double> err_mu;
  std::optional<double> err_lambda;
  std::optional<double> err_x;
};

struct RqiTrace {
  std::vector<IterateRecord> iterates;
  SolveStatus status = SolveStatus::MaxIterations;

  const Triplet& last() const { return iterates.back().t; }
};

/// Iterates until ||F|| <= tol_abs + tol_rel (||A|| + |mu| ||C|| + |lambda|)
/// or max_iter steps. Breakdowns end the run with a failure status.
RqiTrace solve(const HermitianPair& pair, const Triplet& t0, const SolveOptions& opts = {},
               const std::optional<Reference>& reference = std::nullopt);

}  // namespace evp2d
