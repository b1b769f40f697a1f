#include "doctest.h"

#include <numbers>

#include "evp2d/error.hpp"
#include "evp2d/harness.hpp"
#include "evp2d/subspace.hpp"
#include "support.hpp"

using namespace evp2d;
using namespace testing;

namespace {

ComplexVector unit(Eigen::Index n, Eigen::Index i) { return ComplexVector::Unit(n, i); }

// Random isotropic unit vector in span{x, w} for a random w, via the C-diagonal lifting.
ComplexVector isotropic_near(const ComplexMatrix& c, const ComplexVector& x, double eps, std::mt19937_64& rng) {
  ComplexVector w = gaussian(x.size(), 1, rng).col(0);
  w -= x * x.dot(w);
  ComplexMatrix basis(x.size(), 2);
  basis.col(0) = x;
  basis.col(1) = x + eps * w / w.norm();
  const MultipleSet d = diagonalize_on(c, gram_schmidt(basis));
  if (!(d.c1 > 0 && d.c2 < 0)) return ComplexVector();
  const double t = std::sqrt(-d.c2 / (d.c1 - d.c2)), s = std::sqrt(d.c1 / (d.c1 - d.c2));
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  return t * d.v.col(0) + std::polar(1.0, phase(rng)) * s * d.v.col(1);
}

}  // namespace

TEST_SUITE("subspace") {

TEST_CASE("canonical_angles examples") {
  const ComplexMatrix e1 = unit(2, 0), e2 = unit(2, 1);
  CHECK(canonical_angles(e1, e1).angles(0) == 0.0);
  CHECK(canonical_angles(e1, e2).angles(0) == doctest::Approx(std::numbers::pi / 2));
  const ComplexMatrix d = (unit(2, 0) + unit(2, 1)) / std::sqrt(2.0);
  CHECK(canonical_angles(e1, d).angles(0) == doctest::Approx(std::numbers::pi / 4));

  std::mt19937_64 rng(61);
  const ComplexMatrix x = gram_schmidt(gaussian(7, 3, rng));
  const RealVector a = canonical_angles(x, gram_schmidt(gaussian(7, 3, rng))).angles;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    CHECK(a(i) >= 0.0);
    CHECK(a(i) <= std::numbers::pi / 2);
    if (i > 0) CHECK(a(i - 1) <= a(i));
  }
}

TEST_CASE("canonical_angles rejects non-orthonormal input") {
  ComplexMatrix bad = unit(3, 0);
  bad *= 2.0;
  try {
    canonical_angles(bad, unit(3, 1));
    FAIL("expected NotOrthonormal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotOrthonormal);
  }
}

TEST_CASE("sin_theta_norm examples") {
  std::mt19937_64 rng(62);
  const ComplexVector u = unit_vector(5, rng);
  CHECK(sin_theta_norm(u, u * std::polar(1.0, 0.8)) < 1e-7);
  CHECK(sin_theta_norm(unit(2, 0), (unit(2, 0) + unit(2, 1)) / std::sqrt(2.0)) ==
        doctest::Approx(1 / std::sqrt(2.0)));
  const ComplexMatrix x = gram_schmidt(gaussian(9, 2, rng));
  const ComplexMatrix q = gram_schmidt(gaussian(2, 2, rng));
  CHECK(sin_theta_norm(x, x * q) < 1e-12);
}

TEST_CASE("sin_theta_norm of vectors matches the overlap formula") {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 20;
    const ComplexVector u = unit_vector(n, rng);
    ComplexVector v = u + std::pow(10.0, -(trial % 8)) * unit_vector(n, rng);
    v /= v.norm();
    // The closed form loses digits to cancellation at small angles; ||v - u u^H v|| does not.
    const double closed = std::sqrt(std::max(0.0, 1 - std::norm(u.dot(v))));
    const double stable = (v - u * u.dot(v)).norm();
    const double got = sin_theta_norm(u, v);
    CHECK(std::abs(got - stable) <= 1e-14 + 1e-12 * stable);
    CHECK(std::abs(got - closed) <= 1e-15 / std::max(closed, 1e-8) + 1e-12);
  }
}

TEST_CASE("sin Theta(U, V) <= 2 ||U - V|| over 500 trials") {
  std::mt19937_64 rng(64);
  std::uniform_int_distribution<int> dim(2, 32);
  std::uniform_real_distribution<double> size(-6.0, -0.5);
  int trials = 0, violations = 0;
  while (trials < 500) {
    const Eigen::Index n = dim(rng);
    const Eigen::Index k = std::uniform_int_distribution<Eigen::Index>(1, std::min<Eigen::Index>(4, n - 1))(rng);
    const ComplexMatrix u = gram_schmidt(gaussian(n, k, rng));
    const ComplexMatrix v = gram_schmidt(u + std::pow(10.0, size(rng)) * gaussian(n, k, rng));
    const double diff = spectral_norm(u - v);
    if (diff > 0.5) continue;
    ++trials;
    violations += sin_theta_norm(u, v) > 2 * diff;
  }
  CHECK(violations == 0);
}

TEST_CASE("nullspace perturbation bound") {
  std::mt19937_64 rng(65);
  int trials = 0, violations = 0;
  while (trials < 200) {
    const Eigen::Index n = 4 + trials % 10, k = n - 2;
    const ComplexMatrix j = gaussian(k, n, rng);
    const RealVector s = thin_svd(j).sigma;
    const double smin = s(s.size() - 1), norm = s(0);
    ComplexMatrix e = gaussian(k, n, rng);
    e *= std::pow(10.0, -1.0 - (trials % 6)) * smin / spectral_norm(e);
    if (spectral_norm(e) > 0.5 * smin) continue;
    ++trials;
    const double bound = 8 * norm * spectral_norm(e) / (smin * smin);
    violations += sin_theta_norm(null_space(j), null_space(j + e)) > bound;
  }
  CHECK(violations == 0);
}

TEST_CASE("dist_to_set examples") {
  const HermitianPair simple = reference_simple_pair();
  const EigvecSet s = eigvec_set(simple, 0, 1);
  const ComplexVector xs = s.simple().x;
  CHECK(dist_to_set(xs, s) < 1e-15);
  CHECK(dist_to_set(std::polar(1.0, 2.0) * xs, s) < 1e-15);
  CHECK(dist_to_set(vec2(1, -1) / std::sqrt(2.0), s) == doctest::Approx(std::sqrt(2.0)));

  const HermitianPair multiple(diag({1, -1, 3}), diag({1, -1, 1}));
  const EigvecSet m = eigvec_set(multiple, 1, 0);
  CHECK(dist_to_set(unit(3, 2), m) == doctest::Approx(std::sqrt(2.0)));
  for (double phi : {0.0, 0.7, 2.5, -1.9}) {
    ComplexVector x = ComplexVector::Zero(3);
    x(0) = std::polar(1.0, phi) / std::sqrt(2.0);
    x(1) = 1 / std::sqrt(2.0);
    CHECK(dist_to_set(x, m) < 1e-14);
  }
}

TEST_CASE("dist_to_set matches phase grid search") {
  std::mt19937_64 rng(66);
  const PlantedTriplet pt = planted_simple_pair(6, 3, 3, 0.1, 0.4, 3);
  const EigvecSet s = eigvec_set(pt.pair, 0.1, 0.4);
  const HermitianPair crossing = planted_crossing_pair(6, 3, 3, 0.1, 0.4, 4);
  const EigvecSet m = eigvec_set(crossing, 0.1, 0.4);
  for (int trial = 0; trial < 10; ++trial) {
    ComplexVector x = s.simple().x + 0.3 * unit_vector(6, rng);
    x /= x.norm();
    double best = 1e9;
    for (double g = 0; g < 2 * std::numbers::pi; g += 1e-4)
      best = std::min(best, (x - std::polar(1.0, g) * s.simple().x).norm());
    CHECK(std::abs(dist_to_set(x, s) - best) <= 1e-7);

    const MultipleSet& ms = m.multiple();
    ComplexVector y = ms.representative() + 0.3 * unit_vector(6, rng);
    y /= y.norm();
    double best2 = 1e9;
    for (double g1 = 0; g1 < 2 * std::numbers::pi; g1 += 1e-2)
      for (double g2 = 0; g2 < 2 * std::numbers::pi; g2 += 1e-2)
        best2 = std::min(best2, (y - std::polar(ms.t, g1) * ms.v.col(0) - std::polar(ms.s, g2) * ms.v.col(1)).norm());
    // The closed form is a lower bound for every grid value; a 1e-2 grid misses the optimum by O(1e-4).
    const double d = dist_to_set(y, m);
    CHECK(d <= best2 + 1e-12);
    CHECK(best2 - d <= 1e-4);
  }
}

TEST_CASE("isotropic vectors near a 2D-eigenvector give quadratic lambda error") {
  std::mt19937_64 rng(67);
  int checked = 0, violations = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PlantedTriplet pt = planted_simple_pair(10, 5, 5, -0.3, 0.7, seed);
    const HermitianPair crossing = planted_crossing_pair(10, 5, 5, -0.3, 0.7, seed);
    for (const HermitianPair* p : {&pt.pair, &crossing}) {
      const EigvecSet set = eigvec_set(*p, -0.3, 0.7);
      const ComplexMatrix m = p->pencil(-0.3) - 0.7 * ComplexMatrix::Identity(10, 10);
      const double norm_m = spectral_norm(m);
      for (int trial = 0; trial < 40; ++trial) {
        const double eps = std::pow(10.0, -1.0 - (trial % 5));
        const ComplexVector xs = set.representative();
        const ComplexVector xt = isotropic_near(p->c(), xs, eps, rng);
        if (xt.size() == 0) continue;
        ++checked;
        const double lhs = std::abs(xt.dot(p->a() * xt).real() - 0.7);
        // Any member of the set works; the closest one gives the sharpest bound.
        const double d = dist_to_set(xt, set);
        violations += lhs > norm_m * d * d * (1 + 1e-8) + 1e-13;
      }
    }
  }
  CHECK(checked > 300);
  CHECK(violations == 0);
}

}  // TEST_SUITE
