#include "evp2d/eigencurves.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "evp2d/error.hpp"

namespace evp2d {

namespace {

double default_tol_mult(const HermitianPair& pair, double mu) {
  return std::max(1e-8, 1e-12 * (pair.norm_a() + std::abs(mu) * pair.norm_c()));
}

void require_unit(const ComplexVector& x, const char* what) {
  if (std::abs(x.norm() - 1.0) > 1e-8) throw Error(ErrorKind::NotNormalized, std::string(what) + " must have unit norm");
}

// Exactly degenerate eigenvalues leave the eigenbasis of the cluster
// arbitrary; rotate it onto the previous point's vectors (polar factor).
void align_clusters(CurvePoint& next, const ComplexMatrix& prev, double cluster_tol) {
  const Eigen::Index n = next.values.size();
  Eigen::Index begin = 0;
  while (begin < n) {
    Eigen::Index end = begin + 1;
    while (end < n && std::abs(next.values(end - 1) - next.values(end)) <= cluster_tol) ++end;
    const Eigen::Index m = end - begin;
    if (m >= 2) {
      const ComplexMatrix s = next.vectors.middleCols(begin, m);
      const ComplexMatrix proj = s.adjoint() * prev;  // m x n
      std::vector<Eigen::Index> order(static_cast<std::size_t>(prev.cols()));
      for (Eigen::Index j = 0; j < prev.cols(); ++j) order[static_cast<std::size_t>(j)] = j;
      std::stable_sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
        return proj.col(l).squaredNorm() > proj.col(r).squaredNorm();
      });
      ComplexMatrix sel(m, m);
      for (Eigen::Index j = 0; j < m; ++j) sel.col(j) = proj.col(order[static_cast<std::size_t>(j)]);
      Eigen::JacobiSVD<ComplexMatrix> svd(sel, Eigen::ComputeFullU | Eigen::ComputeFullV);
      next.vectors.middleCols(begin, m) = s * (svd.matrixU() * svd.matrixV().adjoint());
    }
    begin = end;
  }
}

}  // namespace

CurvePoint eig_at(const HermitianPair& pair, double mu) {
  if (!std::isfinite(mu)) throw Error(ErrorKind::InvalidArgument, "mu must be finite");
  HermitianEig eig = hermitian_eig(pair.pencil(mu), EigOrder::Descending);
  return CurvePoint{mu, std::move(eig.values), std::move(eig.vectors)};
}

Assignment match_columns(const ComplexMatrix& prev, const ComplexMatrix& next, double ambiguity_tol) {
  const Eigen::Index n = prev.cols();
  const Eigen::MatrixXd overlap = (prev.adjoint() * next).cwiseAbs();
  std::vector<bool> row_used(static_cast<std::size_t>(n), false), col_used(static_cast<std::size_t>(n), false);
  Assignment out;
  out.perm.assign(static_cast<std::size_t>(n), -1);
  for (Eigen::Index step = 0; step < n; ++step) {
    double best = -1.0;
    Eigen::Index bi = -1, bj = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (row_used[static_cast<std::size_t>(i)]) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (col_used[static_cast<std::size_t>(j)]) continue;
        if (overlap(i, j) > best) {
          best = overlap(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != bj && !col_used[static_cast<std::size_t>(k)] && overlap(bi, k) >= best - ambiguity_tol) out.ambiguous = true;
      if (k != bi && !row_used[static_cast<std::size_t>(k)] && overlap(k, bj) >= best - ambiguity_tol) out.ambiguous = true;
    }
    row_used[static_cast<std::size_t>(bi)] = true;
    col_used[static_cast<std::size_t>(bj)] = true;
    out.perm[static_cast<std::size_t>(bi)] = bj;
    out.min_overlap = std::min(out.min_overlap, best);
  }
  return out;
}

EigencurveGrid trace_curves(const HermitianPair& pair, double mu_lo, double mu_hi, int n_grid,
                            const TraceOptions& opts) {
  if (!(mu_lo < mu_hi) || !std::isfinite(mu_lo) || !std::isfinite(mu_hi))
    throw Error(ErrorKind::InvalidArgument, "trace_curves needs finite mu_lo < mu_hi");
  if (n_grid < 2) throw Error(ErrorKind::InvalidArgument, "trace_curves needs n_grid >= 2");

  const double step_floor = (mu_hi - mu_lo) * std::ldexp(1.0, -opts.refine_depth);
  const double cluster_tol = 1e-12 * (pair.norm_a() + std::max(std::abs(mu_lo), std::abs(mu_hi)) * pair.norm_c());

  EigencurveGrid grid;
  grid.matched = true;
  grid.points.push_back(eig_at(pair, mu_lo));

  for (int g = 1; g < n_grid; ++g) {
    const double target = g == n_grid - 1 ? mu_hi : mu_lo + (mu_hi - mu_lo) * g / (n_grid - 1);
    std::vector<double> pending{target};
    while (!pending.empty()) {
      const CurvePoint& prev = grid.points.back();
      const double mu = pending.back();
      CurvePoint cand = eig_at(pair, mu);
      align_clusters(cand, prev.vectors, cluster_tol);
      const Assignment asg = match_columns(prev.vectors, cand.vectors, opts.ambiguity_tol);
      if (asg.min_overlap < opts.overlap_floor) {
        if (mu - prev.mu > step_floor) {
          pending.push_back(0.5 * (prev.mu + mu));
          continue;
        }
        if (asg.ambiguous)
          throw Error(ErrorKind::ContinuationAmbiguous,
                      "eigenvector matching is ambiguous near mu = " + std::to_string(mu));
      }

      CurvePoint matched{mu, RealVector(cand.values.size()), ComplexMatrix(cand.vectors.rows(), cand.vectors.cols())};
      for (Eigen::Index i = 0; i < cand.values.size(); ++i) {
        const Eigen::Index j = asg.perm[static_cast<std::size_t>(i)];
        matched.values(i) = cand.values(j);
        const Complex ov = prev.vectors.col(i).dot(cand.vectors.col(j));
        const Complex phase = std::abs(ov) > 0.0 ? std::conj(ov) / std::abs(ov) : Complex(1.0, 0.0);
        matched.vectors.col(i) = cand.vectors.col(j) * phase;
      }
      grid.min_overlap = std::min(grid.min_overlap, asg.min_overlap);
      grid.points.push_back(std::move(matched));
      pending.pop_back();
    }
  }
  return grid;
}

double lambda_prime(const HermitianPair& pair, const ComplexVector& x) {
  if (x.size() != pair.n()) throw Error(ErrorKind::DimensionMismatch, "vector length does not match pair");
  require_unit(x, "x");
  const Complex xcx = x.dot(pair.c() * x);
  if (std::abs(xcx.imag()) > 1e-12 * (1.0 + pair.norm_c()))
    throw Error(ErrorKind::NotHermitian, "x^H C x has a non-negligible imaginary part");
  return -xcx.real();
}

ComplexVector eigvec_derivative(const HermitianPair& pair, double mu, double lambda, const ComplexVector& x) {
  if (x.size() != pair.n()) throw Error(ErrorKind::DimensionMismatch, "vector length does not match pair");
  require_unit(x, "x");
  ComplexMatrix shifted = pair.pencil(mu);
  shifted.diagonal().array() -= lambda;
  const double scale = pair.scale(mu, lambda);
  if ((shifted * x).norm() > 1e-8 * (1.0 + scale))
    throw Error(ErrorKind::NotAnEigenvalue, "(mu, lambda, x) is not an eigenpair of A - mu C");

  const double tol_mult = default_tol_mult(pair, mu);
  const HermitianEig eig = hermitian_eig(shifted, EigOrder::Ascending);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (std::abs(eig.values(i)) <= tol_mult) ++k;
  if (k >= 2) throw Error(ErrorKind::NotSimple, "lambda is a multiple eigenvalue of A - mu C");

  const double max_abs = eig.values.cwiseAbs().maxCoeff();
  return pinv_apply(shifted, pair.c() * x, tol_mult / max_abs);
}

double lambda_double_prime(const HermitianPair& pair, double mu, double lambda, const ComplexVector& x) {
  const ComplexVector dx = eigvec_derivative(pair, mu, lambda, x);
  const Complex v = x.dot(pair.c() * dx);
  if (std::abs(v.imag()) > 1e-10 * (1.0 + pair.norm_c() * (1.0 + dx.norm())))
    throw Error(ErrorKind::NotHermitian, "x^H C x' has a non-negligible imaginary part");
  return -2.0 * v.real();
}

void write_grid_csv(const EigencurveGrid& grid, std::ostream& out, bool with_vectors) {
  out << "mu,curve_index,lambda";
  const Eigen::Index n = grid.points.empty() ? 0 : grid.points.front().values.size();
  if (with_vectors)
    for (Eigen::Index k = 0; k < n; ++k) out << ",re_" << k << ",im_" << k;
  out << '\n';
  out << std::setprecision(17);
  for (const CurvePoint& p : grid.points) {
    for (Eigen::Index i = 0; i < p.values.size(); ++i) {
      out << p.mu << ',' << i << ',' << p.values(i);
      if (with_vectors)
        for (Eigen::Index k = 0; k < n; ++k) out << ',' << p.vectors(k, i).real() << ',' << p.vectors(k, i).imag();
      out << '\n';
    }
  }
}

}  // namespace evp2d
