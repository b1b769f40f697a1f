#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "evp2d/eigencurves.hpp"
#include "evp2d/model.hpp"

namespace evp2d {

// Brute-force 2D-eigenvalue finder. Since lambda'(mu) = -x^H C x along an
// eigencurve, simple 2D-eigenvalues are critical points of a curve and
// nonsingular double ones are crossings of two curves with slopes of
// opposite sign. Both are located by sign changes on a traced grid and then
// refined by bisection.

enum class HitKind { CriticalPoint, Crossing };

std::string_view to_string(HitKind kind);

struct Bracket {
  HitKind kind = HitKind::CriticalPoint;
  Eigen::Index curve_i = 0;
  Eigen::Index curve_j = -1;  // second curve for crossings
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  ComplexVector x_i;  // curve eigenvectors at mu_lo, used for tracking
  ComplexVector x_j;
};

/// Grid point where |lambda'| < 1e-8 without a sign change; possibly a
/// singular (double-root) critical point. Flagged, never refined.
struct Suspect {
  double mu = 0.0;
  Eigen::Index curve = 0;
  double slope = 0.0;
};

struct ScanResult {
  std::vector<Bracket> brackets;
  std::vector<Suspect> suspects;
};

ScanResult scan(const HermitianPair& pair, double mu_lo, double mu_hi, int n_grid);

/// Bisects on the sign of lambda' along the tracked curve.
Triplet refine_critical(const HermitianPair& pair, const Bracket& bracket, double* width = nullptr);

/// Bisects on the slope order of the two tracked curves and returns the
/// isotropic representative t v1 + s v2 of the double eigenspace.
Triplet refine_crossing(const HermitianPair& pair, const Bracket& bracket, double* width = nullptr);

struct OracleHit {
  Triplet triplet;
  HitKind kind = HitKind::CriticalPoint;
  Eigen::Index curve_i = 0;
  Eigen::Index curve_j = -1;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  double refined_to = 0.0;
  double residual = 0.0;
};

struct RejectedBracket {
  Bracket bracket;
  std::string reason;
};

struct OracleReport {
  std::vector<OracleHit> hits;
  std::vector<RejectedBracket> rejected;
  std::vector<Suspect> suspects;
};

/// scan + refine; hits are sorted by (mu, lambda).
OracleReport find_all(const HermitianPair& pair, double mu_lo, double mu_hi, int n_grid);

}  // namespace evp2d
