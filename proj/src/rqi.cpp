#include "evp2d/rqi.hpp"

#include <cmath>
#include <limits>

#include "evp2d/error.hpp"
#include "evp2d/subspace.hpp"

namespace evp2d {

std::string_view to_string(RitzBranch branch) {
  return branch == RitzBranch::Simple ? "simple" : "multiple";
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::IndefinitenessLost: return "IndefinitenessLost";
    case SolveStatus::RankCollapse: return "RankCollapse";
    case SolveStatus::JacobianNearSingular: return "JacobianNearSingular";
  }
  return "Unknown";
}

ProjectionBasis projection_basis(const HermitianPair& pair, const Triplet& t) {
  if (!std::isfinite(t.mu) || !std::isfinite(t.lambda)) throw Error(ErrorKind::NonFinite, "iterate has non-finite scalars");
  require_finite(t.x, "iterate vector");
  const Eigen::Index n = pair.n();
  const ComplexMatrix jhat = jacobian_hat(pair, t);

  Eigen::JacobiSVD<ComplexMatrix> svd(jhat, Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();
  const ComplexMatrix tilde = svd.matrixV().rightCols(2).topRows(n);

  const RealVector tilde_sigma = singular_values(tilde);
  if (!(tilde_sigma(1) > 1e-10))
    throw Error(ErrorKind::RankCollapse, "leading block of the nullspace basis has rank < 2");

  const MultipleSet diag = diagonalize_on(pair.c(), orthonormalize(tilde));
  ProjectionBasis out;
  out.v = diag.v;
  out.c1 = diag.c1;
  out.c2 = diag.c2;
  out.sigma_n = sigma(n - 1);
  out.sigma_n_minus_1 = sigma(n - 2);
  out.norm_jhat = sigma(0);
  out.near_singular = out.sigma_n < 1e-12 * out.norm_jhat;
  return out;
}

ProjectedPair form_rq(const HermitianPair& pair, const ProjectionBasis& basis) {
  const ComplexMatrix ak = basis.v.adjoint() * pair.a() * basis.v;
  ProjectedPair rq;
  rq.a11 = ak(0, 0).real();
  rq.a22 = ak(1, 1).real();
  rq.a12 = 0.5 * (ak(0, 1) + std::conj(ak(1, 0)));
  rq.c1 = basis.c1;
  rq.c2 = basis.c2;
  return rq;
}

std::vector<RitzCandidate> solve_2x2(const ProjectedPair& rq, double tau_mult) {
  const double c1 = rq.c1, c2 = rq.c2;
  if (!(c1 * c2 < 0.0)) throw Error(ErrorKind::NotIndefinite, "projected C is not indefinite");
  if (c1 < c2) throw Error(ErrorKind::InvalidArgument, "projected C must be ordered with c1 >= c2");

  const double t = std::sqrt(-c2 / (c1 - c2));
  const double s = std::sqrt(c1 / (c1 - c2));
  const double abs_a12 = std::abs(rq.a12);

  std::vector<RitzCandidate> out;
  if (abs_a12 > tau_mult * (std::abs(rq.a11) + std::abs(rq.a22) + abs_a12 + 1.0)) {
    Eigen::Matrix2cd ak;
    ak << rq.a11, rq.a12, std::conj(rq.a12), rq.a22;
    const Eigen::Vector2d cdiag(c1, c2);
    const Complex base = std::conj(rq.a12) / abs_a12;
    for (const Complex alpha : {base, -base}) {
      RitzCandidate cand;
      cand.branch = RitzBranch::Simple;
      cand.alpha = alpha;
      cand.z << t, alpha * s;
      const Eigen::Vector2cd az = ak * cand.z;
      const Eigen::Vector2cd cz = cdiag.cast<Complex>().cwiseProduct(cand.z);
      cand.theta = cand.z.dot(az).real();
      cand.nu = cz.dot(az).real() / cz.squaredNorm();
      out.push_back(cand);
    }
  } else {
    RitzCandidate cand;
    cand.branch = RitzBranch::Multiple;
    cand.z << t, s;
    cand.nu = (rq.a11 - rq.a22) / (c1 - c2);
    cand.theta = (rq.a22 * c1 - rq.a11 * c2) / (c1 - c2);
    out.push_back(cand);
  }
  return out;
}

Triplet select_ritz(const Triplet& prev, const std::vector<RitzCandidate>& candidates,
                    const ProjectionBasis& basis, std::size_t* chosen) {
  if (candidates.empty()) throw Error(ErrorKind::InvalidArgument, "select_ritz needs at least one candidate");
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    const double d = std::abs(prev.mu - candidates[j].nu) + std::abs(prev.lambda - candidates[j].theta);
    if (d < best_dist) {
      best_dist = d;
      best = j;
    }
  }
  if (chosen != nullptr) *chosen = best;
  const RitzCandidate& c = candidates[best];
  ComplexVector x = basis.v * c.z;
  x.normalize();
  return Triplet{c.nu, c.theta, std::move(x)};
}

StepResult step(const HermitianPair& pair, const Triplet& t, const StepOptions& opts) {
  const ProjectionBasis basis = projection_basis(pair, t);
  if (!(basis.c1 * basis.c2 < 0.0))
    throw Error(ErrorKind::IndefinitenessLost, "V^H C V is not indefinite at this iterate");
  const ProjectedPair rq = form_rq(pair, basis);
  const std::vector<RitzCandidate> candidates = solve_2x2(rq, opts.tau_mult);

  std::size_t chosen = 0;
  StepResult out{select_ritz(t, candidates, basis, &chosen), {}};
  out.diag.sigma_n_jhat = basis.sigma_n;
  out.diag.near_singular = basis.near_singular;
  out.diag.c1 = basis.c1;
  out.diag.c2 = basis.c2;
  out.diag.abs_a12 = std::abs(rq.a12);
  out.diag.branch = candidates[chosen].branch;
  return out;
}

RqiTrace solve(const HermitianPair& pair, const Triplet& t0, const SolveOptions& opts,
               const std::optional<Reference>& reference) {
  if (t0.x.size() != pair.n()) throw Error(ErrorKind::DimensionMismatch, "initial vector length does not match pair");
  if (opts.max_iter < 0) throw Error(ErrorKind::InvalidArgument, "max_iter must be nonnegative");

  RqiTrace trace;
  Triplet t = t0;
  bool saw_near_singular = false;
  for (int k = 0;; ++k) {
    IterateRecord rec;
    rec.k = k;
    rec.t = t;
    rec.res_norm = residual(pair, t).norm;
    if (reference) {
      rec.err_mu = std::abs(t.mu - reference->mu);
      rec.err_lambda = std::abs(t.lambda - reference->lambda);
      rec.err_x = dist_to_set(t.x.normalized(), reference->set);
    }
    trace.iterates.push_back(rec);
    IterateRecord& cur = trace.iterates.back();

    if (cur.res_norm <= opts.tol_abs + opts.tol_rel * pair.scale(t.mu, t.lambda)) {
      trace.status = SolveStatus::Converged;
      break;
    }
    if (k >= opts.max_iter) {
      trace.status = saw_near_singular ? SolveStatus::JacobianNearSingular : SolveStatus::MaxIterations;
      break;
    }
    try {
      StepResult r = step(pair, t, StepOptions{opts.tau_mult});
      saw_near_singular = saw_near_singular || r.diag.near_singular;
      cur.diag = r.diag;
      t = std::move(r.next);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::IndefinitenessLost) {
        trace.status = SolveStatus::IndefinitenessLost;
        break;
      }
      if (e.kind() == ErrorKind::RankCollapse) {
        trace.status = SolveStatus::RankCollapse;
        break;
      }
      throw;
    }
  }
  return trace;
}

}  // namespace evp2d
