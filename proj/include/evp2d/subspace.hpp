#pragma once

#include "evp2d/classification.hpp"
#include "evp2d/dense.hpp"

namespace evp2d {

/// Canonical angles between range(X) and range(Y), ascending, in [0, pi/2].
struct AngleSet {
  RealVector angles;
};

/// Both inputs must have orthonormal columns (within 1e-10) and equal shape.
/// Angles below pi/4 are taken from sines, the rest from cosines, so small
/// angles keep full relative accuracy.
AngleSet canonical_angles(const ComplexMatrix& x, const ComplexMatrix& y);

/// Spectral norm of sin Theta(X, Y), i.e. the sine of the largest angle.
double sin_theta_norm(const ComplexMatrix& x, const ComplexMatrix& y);

/// Distance from a unit vector to an eigenvector set:
/// simple:   min_|g|=1 ||x - g x*||              = sqrt(2 - 2 |x*^H x|)
/// multiple: min_|g1|=|g2|=1 ||x - (g1 t v1 + g2 s v2)|| = sqrt(2 - 2 (t |v1^H x| + s |v2^H x|))
/// Evaluated at the optimal phases as a vector norm, which avoids the
/// cancellation of the closed forms for nearby vectors.
double dist_to_set(const ComplexVector& x, const EigvecSet& set);

}  // namespace evp2d
