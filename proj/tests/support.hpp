#pragma once

#include <cmath>
#include <random>

#include "evp2d/dense.hpp"

namespace testing {

using evp2d::Complex;
using evp2d::ComplexMatrix;
using evp2d::ComplexVector;

inline ComplexMatrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = nd(rng);
      g(i, j) = Complex(re, nd(rng));
    }
  return g;
}

inline ComplexMatrix hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const ComplexMatrix g = gaussian(n, n, rng);
  return (g + g.adjoint()) * 0.5;
}

inline ComplexVector unit_vector(Eigen::Index n, std::mt19937_64& rng) {
  ComplexVector v = gaussian(n, 1, rng).col(0);
  return v / v.norm();
}

// Orthonormal columns via Gram-Schmidt, independent of the library kernels.
inline ComplexMatrix gram_schmidt(ComplexMatrix m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < j; ++i) m.col(j) -= m.col(i) * m.col(i).dot(m.col(j));
    m.col(j) /= m.col(j).norm();
  }
  return m;
}

inline ComplexMatrix diag(std::initializer_list<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

inline ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline ComplexVector vec2(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  return v;
}

// min over |g| = 1 of ||v - g u|| for unit vectors, evaluated at the optimal phase.
inline double phase_dist(const ComplexVector& u, const ComplexVector& v) {
  const Complex ov = u.dot(v);
  const Complex g = std::abs(ov) > 0.0 ? ov / std::abs(ov) : Complex(1.0);
  return (v - g * u).norm();
}

}  // namespace testing
