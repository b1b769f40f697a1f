#include "evp2d/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "evp2d/error.hpp"

namespace evp2d {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotIndefinite: return "NotIndefinite";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NotSimple: return "NotSimple";
    case ErrorKind::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorKind::NoIsotropicVector: return "NoIsotropicVector";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::ContinuationAmbiguous: return "ContinuationAmbiguous";
    case ErrorKind::BracketInvalid: return "BracketInvalid";
    case ErrorKind::NotIndefiniteOnCluster: return "NotIndefiniteOnCluster";
    case ErrorKind::RankCollapse: return "RankCollapse";
    case ErrorKind::IndefinitenessLost: return "IndefinitenessLost";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) throw Error(ErrorKind::NonFinite, std::string(what) + " has NaN or Inf entries");
}

double hermitian_tolerance(const ComplexMatrix& m) {
  const double max_abs = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  return 1e-12 * (1.0 + max_abs);
}

bool is_hermitian(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return false;
  const double tol = hermitian_tolerance(m);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

ComplexMatrix symmetrized(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " is not square");
  require_finite(m, what);
  if (!is_hermitian(m)) throw Error(ErrorKind::NotHermitian, std::string(what) + " is not Hermitian");
  ComplexMatrix out = (m + m.adjoint()) * 0.5;
  return out;
}

HermitianEig hermitian_eig(const ComplexMatrix& m, EigOrder order) {
  const ComplexMatrix h = symmetrized(m, "matrix");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::NoConvergence, "Hermitian eigensolver did not converge");
  HermitianEig out{solver.eigenvalues(), solver.eigenvectors()};
  if (order == EigOrder::Descending) {
    out.values.reverseInPlace();
    out.vectors.rowwise().reverseInPlace();
  }
  return out;
}

Svd thin_svd(const ComplexMatrix& m) {
  require_finite(m, "matrix");
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return Svd{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

RealVector singular_values(const ComplexMatrix& m) {
  require_finite(m, "matrix");
  if (m.size() == 0) return RealVector{};
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

ComplexMatrix orthonormalize(const ComplexMatrix& m) {
  require_finite(m, "matrix");
  if (m.cols() == 0 || m.cols() > m.rows())
    throw Error(ErrorKind::RankDeficient, "need 1 <= cols <= rows to orthonormalize");
  const RealVector sigma = singular_values(m);
  if (!(sigma(sigma.size() - 1) > 1e-10 * sigma(0)))
    throw Error(ErrorKind::RankDeficient, "columns are numerically dependent");

  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m.rows(), m.cols());
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

ComplexMatrix null_space(const ComplexMatrix& m) {
  require_finite(m, "matrix");
  const Eigen::Index rank = std::min(m.rows(), m.cols());
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(m.cols() - rank);
}

double default_rank_tol(Eigen::Index n) {
  return static_cast<double>(n) * std::numeric_limits<double>::epsilon();
}

ComplexVector pinv_apply(const ComplexMatrix& m, const ComplexVector& b, double rank_tol) {
  if (m.rows() != b.size()) throw Error(ErrorKind::DimensionMismatch, "pinv_apply: rhs length");
  if (!(rank_tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "rank_tol must be nonnegative");
  const HermitianEig eig = hermitian_eig(m, EigOrder::Ascending);
  const double scale = eig.values.size() == 0 ? 0.0 : eig.values.cwiseAbs().maxCoeff();
  ComplexVector out = ComplexVector::Zero(b.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double ev = eig.values(i);
    if (std::abs(ev) <= rank_tol * scale || ev == 0.0) continue;
    const auto q = eig.vectors.col(i);
    out += q * (q.dot(b) / ev);
  }
  return out;
}

ComplexVector pinv_apply(const ComplexMatrix& m, const ComplexVector& b) {
  return pinv_apply(m, b, default_rank_tol(m.rows()));
}

}  // namespace evp2d
