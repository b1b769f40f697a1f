#pragma once

#include <complex>

#include <Eigen/Dense>

namespace evp2d {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class EigOrder { Descending, Ascending };

struct HermitianEig {
  RealVector values;
  ComplexMatrix vectors;  // column i pairs with values(i)
};

struct Svd {
  ComplexMatrix u;
  RealVector sigma;  // descending
  ComplexMatrix v;
};

bool all_finite(const ComplexMatrix& m);

/// Throws NonFinite if any entry is NaN or Inf.
void require_finite(const ComplexMatrix& m, const char* what);

/// Hermiticity tolerance used throughout: 1e-12 * (1 + max |m_ij|).
double hermitian_tolerance(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m);

/// Checks square + Hermitian and returns (m + m^H) / 2.
ComplexMatrix symmetrized(const ComplexMatrix& m, const char* what);

HermitianEig hermitian_eig(const ComplexMatrix& m, EigOrder order = EigOrder::Descending);

/// Thin SVD: u is rows x p, v is cols x p with p = min(rows, cols).
Svd thin_svd(const ComplexMatrix& m);

/// Singular values only, descending.
RealVector singular_values(const ComplexMatrix& m);

double spectral_norm(const ComplexMatrix& m);

/// Orthonormal basis of range(m), obtained by Householder QR with the
/// diagonal of R made real positive so column order and orientation of
/// the input are preserved. Throws RankDeficient if sigma_min <= 1e-10 * ||m||.
ComplexMatrix orthonormalize(const ComplexMatrix& m);

/// Orthonormal basis (n x (n - rank)) of the nullspace of a full-row-rank
/// wide matrix, taken from the trailing columns of a full right singular basis.
ComplexMatrix null_space(const ComplexMatrix& m);

/// Default relative rank tolerance for pinv_apply: n * machine epsilon.
double default_rank_tol(Eigen::Index n);

/// Minimum-norm least-squares solution of m y = b for Hermitian m.
/// Eigencomponents with |eigenvalue| <= rank_tol * max |eigenvalue| are dropped.
ComplexVector pinv_apply(const ComplexMatrix& m, const ComplexVector& b, double rank_tol);
ComplexVector pinv_apply(const ComplexMatrix& m, const ComplexVector& b);

}  // namespace evp2d
