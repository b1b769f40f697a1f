#pragma once

#include <iosfwd>
#include <vector>

#include "evp2d/model.hpp"

namespace evp2d {

/// Eigen-decomposition of A - mu C at one parameter value. After matching,
/// `values(i)` and `vectors.col(i)` belong to curve i (not sorted).
struct CurvePoint {
  double mu = 0.0;
  RealVector values;
  ComplexMatrix vectors;
};

struct EigencurveGrid {
  std::vector<CurvePoint> points;  // strictly increasing mu
  bool matched = false;
  double min_overlap = 1.0;
};

struct TraceOptions {
  double overlap_floor = 0.9;
  int refine_depth = 20;           // step floor = (mu_hi - mu_lo) * 2^-refine_depth
  double ambiguity_tol = 1e-8;
};

/// Eigenpairs of A - mu C sorted descending.
CurvePoint eig_at(const HermitianPair& pair, double mu);

/// Samples eigencurves on a uniform grid and relabels them by eigenvector
/// continuation. Intervals whose best assignment has an overlap below the
/// floor are bisected; eigenvector phases are fixed so consecutive overlaps
/// on every curve are real and nonnegative.
EigencurveGrid trace_curves(const HermitianPair& pair, double mu_lo, double mu_hi, int n_grid,
                            const TraceOptions& opts = {});

/// Greedy maximal-overlap assignment: result[i] is the column of `next`
/// continuing column i of `prev`. Reports the smallest accepted overlap and
/// whether any choice was decided by a margin below `ambiguity_tol`.
struct Assignment {
  std::vector<Eigen::Index> perm;
  double min_overlap = 1.0;
  bool ambiguous = false;
};
Assignment match_columns(const ComplexMatrix& prev, const ComplexMatrix& next, double ambiguity_tol = 1e-8);

/// d lambda / d mu = -x^H C x for a unit eigenvector x of A - mu C.
double lambda_prime(const HermitianPair& pair, const ComplexVector& x);

/// x'(mu) = (A - mu C - lambda I)^+ C x, orthogonal to x.
ComplexVector eigvec_derivative(const HermitianPair& pair, double mu, double lambda, const ComplexVector& x);

/// lambda''(mu) = -2 Re(x^H C x').
double lambda_double_prime(const HermitianPair& pair, double mu, double lambda, const ComplexVector& x);

/// CSV with columns mu, curve_index, lambda and optionally the eigenvector
/// entries as re_k, im_k pairs.
void write_grid_csv(const EigencurveGrid& grid, std::ostream& out, bool with_vectors = false);

}  // namespace evp2d
