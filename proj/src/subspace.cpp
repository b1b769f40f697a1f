#include "evp2d/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evp2d/error.hpp"

namespace evp2d {

namespace {

void require_orthonormal(const ComplexMatrix& m, const char* what) {
  const ComplexMatrix gram = m.adjoint() * m;
  if ((gram - ComplexMatrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw Error(ErrorKind::NotOrthonormal, std::string(what) + " does not have orthonormal columns");
}

void check_pair(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols() || x.cols() == 0 || x.cols() > x.rows())
    throw Error(ErrorKind::DimensionMismatch, "subspace bases must share an n x k shape with 1 <= k <= n");
  require_orthonormal(x, "X");
  require_orthonormal(y, "Y");
}

Complex unit_phase(Complex z) { return std::abs(z) > 0.0 ? z / std::abs(z) : Complex(1.0, 0.0); }

}  // namespace

AngleSet canonical_angles(const ComplexMatrix& x, const ComplexMatrix& y) {
  check_pair(x, y);
  const Eigen::Index k = x.cols();
  RealVector cosines = singular_values(y.adjoint() * x);  // descending -> ascending angles
  const ComplexMatrix residual = y - x * (x.adjoint() * y);
  RealVector sines = singular_values(residual);  // descending
  sines.reverseInPlace();                        // ascending -> ascending angles

  AngleSet out;
  out.angles.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double c = std::clamp(cosines(j), 0.0, 1.0);
    const double s = std::clamp(sines(j), 0.0, 1.0);
    out.angles(j) = c * c > 0.5 ? std::asin(s) : std::acos(c);
  }
  std::sort(out.angles.begin(), out.angles.end());
  out.angles = out.angles.cwiseMax(0.0).cwiseMin(std::numbers::pi / 2);
  return out;
}

double sin_theta_norm(const ComplexMatrix& x, const ComplexMatrix& y) {
  check_pair(x, y);
  return std::min(1.0, spectral_norm(y - x * (x.adjoint() * y)));
}

double dist_to_set(const ComplexVector& x, const EigvecSet& set) {
  if (std::abs(x.norm() - 1.0) > 1e-8) throw Error(ErrorKind::NotNormalized, "dist_to_set expects a unit vector");
  if (set.is_simple()) {
    const ComplexVector& xs = set.simple().x;
    if (xs.size() != x.size()) throw Error(ErrorKind::DimensionMismatch, "vector length does not match set");
    return (x - unit_phase(xs.dot(x)) * xs).norm();
  }
  const MultipleSet& m = set.multiple();
  if (m.v.rows() != x.size()) throw Error(ErrorKind::DimensionMismatch, "vector length does not match set");
  const Complex g1 = unit_phase(m.v.col(0).dot(x));
  const Complex g2 = unit_phase(m.v.col(1).dot(x));
  return (x - (g1 * m.t) * m.v.col(0) - (g2 * m.s) * m.v.col(1)).norm();
}

}  // namespace evp2d
