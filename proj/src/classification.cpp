#include "evp2d/classification.hpp"

#include <algorithm>
#include <cmath>

#include "evp2d/eigencurves.hpp"
#include "evp2d/error.hpp"

namespace evp2d {

namespace {

void phase_normalize(Eigen::Ref<ComplexVector> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex p = v(imax);
  if (std::abs(p) > 0.0) v *= std::conj(p) / std::abs(p);
}

double sigma_min(const ComplexMatrix& m) {
  const RealVector s = singular_values(m);
  return s(s.size() - 1);
}

}  // namespace

std::string_view to_string(TripletKind kind) {
  switch (kind) {
    case TripletKind::NonsingularSimple: return "NonsingularSimple";
    case TripletKind::NonsingularMultiple: return "NonsingularMultiple";
    case TripletKind::Singular: return "Singular";
  }
  return "Unknown";
}

ClassifyTolerances ClassifyTolerances::defaults(const HermitianPair& pair, double mu) {
  return {std::max(1e-8, 1e-12 * (pair.norm_a() + std::abs(mu) * pair.norm_c())), 1e-8 * (1.0 + pair.norm_c())};
}

Multiplicity multiplicity(const HermitianPair& pair, double mu, double lambda, double tol_mult) {
  if (!std::isfinite(mu) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidArgument, "mu and lambda must be finite");
  const HermitianEig eig = hermitian_eig(pair.pencil(mu), EigOrder::Descending);
  std::vector<Eigen::Index> hits;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (std::abs(eig.values(i) - lambda) <= tol_mult) hits.push_back(i);
  Multiplicity out;
  out.k = static_cast<Eigen::Index>(hits.size());
  out.basis.resize(pair.n(), out.k);
  out.values.resize(out.k);
  for (Eigen::Index j = 0; j < out.k; ++j) {
    out.basis.col(j) = eig.vectors.col(hits[static_cast<std::size_t>(j)]);
    out.values(j) = eig.values(hits[static_cast<std::size_t>(j)]);
  }
  return out;
}

MultipleSet diagonalize_on(const ComplexMatrix& c, const ComplexMatrix& basis) {
  if (basis.cols() != 2) throw Error(ErrorKind::DimensionMismatch, "diagonalize_on needs a 2-column basis");
  const ComplexMatrix m = basis.adjoint() * c * basis;
  const HermitianEig eig = hermitian_eig((m + m.adjoint()) * 0.5, EigOrder::Descending);
  MultipleSet out;
  out.v = basis * eig.vectors;
  phase_normalize(out.v.col(0));
  phase_normalize(out.v.col(1));
  out.c1 = eig.values(0);
  out.c2 = eig.values(1);
  if (out.c1 > 0.0 && out.c2 < 0.0) {
    out.t = std::sqrt(-out.c2 / (out.c1 - out.c2));
    out.s = std::sqrt(out.c1 / (out.c1 - out.c2));
  }
  return out;
}

Classification classify(const HermitianPair& pair, double mu, double lambda, const ClassifyTolerances& tol) {
  const Multiplicity m = multiplicity(pair, mu, lambda, tol.tol_mult);
  if (m.k == 0) throw Error(ErrorKind::NotAnEigenvalue, "lambda is not an eigenvalue of A - mu C");

  Classification out;
  out.multiplicity = m.k;
  if (m.k == 1) {
    ComplexVector x = m.basis.col(0);
    if (std::abs(x.dot(pair.c() * x)) > tol.tol_sing)
      throw Error(ErrorKind::NoIsotropicVector, "the eigenvector is not C-isotropic; not a 2D-eigenvalue");
    const double ddl = lambda_double_prime(pair, mu, m.values(0), x);
    out.lambda_double_prime = ddl;
    out.kind = std::abs(ddl) > tol.tol_sing ? TripletKind::NonsingularSimple : TripletKind::Singular;
    out.representative = x;
  } else {
    const ComplexMatrix restricted = m.basis.adjoint() * pair.c() * m.basis;
    const HermitianEig ce = hermitian_eig((restricted + restricted.adjoint()) * 0.5, EigOrder::Descending);
    out.c_eigenvalues = ce.values;
    const double top = ce.values(0);
    const double bottom = ce.values(m.k - 1);
    const bool straddles = top > tol.tol_sing && bottom < -tol.tol_sing;
    out.kind = (m.k == 2 && straddles) ? TripletKind::NonsingularMultiple : TripletKind::Singular;

    if (straddles) {
      const double t = std::sqrt(-bottom / (top - bottom));
      const double s = std::sqrt(top / (top - bottom));
      out.representative = m.basis * (t * ce.vectors.col(0) + s * ce.vectors.col(m.k - 1));
    } else {
      Eigen::Index iz = 0;
      ce.values.cwiseAbs().minCoeff(&iz);
      if (std::abs(ce.values(iz)) > tol.tol_sing)
        throw Error(ErrorKind::NoIsotropicVector, "C is definite on the eigenspace; not a 2D-eigenvalue");
      out.representative = m.basis * ce.vectors.col(iz);
    }
  }
  out.representative.normalize();
  out.sigma_min_j = sigma_min(jacobian(pair, Triplet{mu, lambda, out.representative}));
  return out;
}

Classification classify(const HermitianPair& pair, double mu, double lambda) {
  return classify(pair, mu, lambda, ClassifyTolerances::defaults(pair, mu));
}

ComplexVector EigvecSet::representative() const {
  if (is_simple()) return simple().x;
  return multiple().representative();
}

EigvecSet eigvec_set(const HermitianPair& pair, double mu, double lambda, const ClassifyTolerances& tol) {
  const Classification cls = classify(pair, mu, lambda, tol);
  if (cls.kind == TripletKind::Singular)
    throw Error(ErrorKind::Singular, "eigenvector sets are only built at nonsingular 2D-eigenvalues");
  const Multiplicity m = multiplicity(pair, mu, lambda, tol.tol_mult);
  if (cls.kind == TripletKind::NonsingularSimple) {
    ComplexVector x = m.basis.col(0);
    phase_normalize(x);
    return EigvecSet{SimpleSet{x}};
  }
  return EigvecSet{diagonalize_on(pair.c(), m.basis)};
}

EigvecSet eigvec_set(const HermitianPair& pair, double mu, double lambda) {
  return eigvec_set(pair, mu, lambda, ClassifyTolerances::defaults(pair, mu));
}

}  // namespace evp2d
