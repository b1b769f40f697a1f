#include "evp2d/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "evp2d/classification.hpp"
#include "evp2d/error.hpp"

namespace evp2d {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Index pairs (a, b) with opposite nonzero signs and only exact zeros in between.
std::vector<std::pair<std::size_t, std::size_t>> sign_changes(const std::vector<double>& v) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a + 1 < v.size(); ++a) {
    if (v[a] == 0.0) continue;
    std::size_t b = a + 1;
    while (b < v.size() && v[b] == 0.0) ++b;
    if (b == v.size()) break;
    if (sign_of(v[a]) != sign_of(v[b])) out.emplace_back(a, b);
  }
  return out;
}

double slope_of(const HermitianPair& pair, const ComplexVector& x) { return -x.dot(pair.c() * x).real(); }

struct Tracked {
  double lambda = 0.0;
  ComplexVector x;
};

Tracked follow(const HermitianPair& pair, double mu, const ComplexVector& prev) {
  const CurvePoint p = eig_at(pair, mu);
  Eigen::Index best = 0;
  (prev.adjoint() * p.vectors).cwiseAbs().maxCoeff(&best);
  ComplexVector x = p.vectors.col(best);
  const Complex ov = prev.dot(x);
  if (std::abs(ov) > 0.0) x *= std::conj(ov) / std::abs(ov);
  return {p.values(best), std::move(x)};
}

struct ClusterPair {
  double upper_lambda = 0.0;
  double lower_lambda = 0.0;
  ComplexMatrix vectors;  // col 0 upper, col 1 lower
  double slope_gap = 0.0; // slope(upper) - slope(lower)
};

// The two eigenvectors of A - mu C closest to span(prev).
ClusterPair follow_pair(const HermitianPair& pair, double mu, const ComplexMatrix& prev) {
  const CurvePoint p = eig_at(pair, mu);
  const RealVector weight = (prev.adjoint() * p.vectors).colwise().squaredNorm().transpose();
  Eigen::Index first = 0;
  weight.maxCoeff(&first);
  Eigen::Index second = first == 0 ? 1 : 0;
  for (Eigen::Index k = 0; k < weight.size(); ++k)
    if (k != first && weight(k) > weight(second)) second = k;
  const Eigen::Index up = std::min(first, second);
  const Eigen::Index lo = std::max(first, second);
  ClusterPair out;
  out.upper_lambda = p.values(up);
  out.lower_lambda = p.values(lo);
  out.vectors.resize(pair.n(), 2);
  out.vectors.col(0) = p.vectors.col(up);
  out.vectors.col(1) = p.vectors.col(lo);
  out.slope_gap = slope_of(pair, out.vectors.col(0)) - slope_of(pair, out.vectors.col(1));
  return out;
}

bool converged(double lo, double hi) { return hi - lo <= 1e-13 * (1.0 + std::max(std::abs(lo), std::abs(hi))); }

void phase_normalize(ComplexVector& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex p = v(imax);
  if (std::abs(p) > 0.0) v *= std::conj(p) / std::abs(p);
}

}  // namespace

std::string_view to_string(HitKind kind) { return kind == HitKind::CriticalPoint ? "CriticalPoint" : "Crossing"; }

ScanResult scan(const HermitianPair& pair, double mu_lo, double mu_hi, int n_grid) {
  if (n_grid < 8) throw Error(ErrorKind::InvalidArgument, "scan needs n_grid >= 8");
  const EigencurveGrid grid = trace_curves(pair, mu_lo, mu_hi, n_grid);
  const std::size_t m = grid.points.size();
  const Eigen::Index n = pair.n();

  std::vector<std::vector<double>> slopes(static_cast<std::size_t>(n), std::vector<double>(m));
  for (std::size_t p = 0; p < m; ++p)
    for (Eigen::Index i = 0; i < n; ++i)
      slopes[static_cast<std::size_t>(i)][p] = slope_of(pair, grid.points[p].vectors.col(i));

  ScanResult out;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = slopes[static_cast<std::size_t>(i)];
    const auto changes = sign_changes(s);
    for (const auto& [a, b] : changes)
      out.brackets.push_back(Bracket{HitKind::CriticalPoint, i, -1, grid.points[a].mu, grid.points[b].mu,
                                     grid.points[a].vectors.col(i), ComplexVector{}});
    for (std::size_t p = 0; p < m; ++p) {
      if (std::abs(s[p]) >= 1e-8) continue;
      const bool bracketed = std::any_of(changes.begin(), changes.end(),
                                         [&](const auto& ab) { return ab.first <= p && p <= ab.second; });
      if (!bracketed) out.suspects.push_back(Suspect{grid.points[p].mu, i, s[p]});
    }
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      std::vector<double> gap(m);
      for (std::size_t p = 0; p < m; ++p) gap[p] = grid.points[p].values(i) - grid.points[p].values(j);
      for (const auto& [a, b] : sign_changes(gap)) {
        const double si = 0.5 * (slopes[static_cast<std::size_t>(i)][a] + slopes[static_cast<std::size_t>(i)][b]);
        const double sj = 0.5 * (slopes[static_cast<std::size_t>(j)][a] + slopes[static_cast<std::size_t>(j)][b]);
        if (!(si * sj < 0.0)) continue;
        out.brackets.push_back(Bracket{HitKind::Crossing, i, j, grid.points[a].mu, grid.points[b].mu,
                                       grid.points[a].vectors.col(i), grid.points[a].vectors.col(j)});
      }
    }
  }
  std::stable_sort(out.brackets.begin(), out.brackets.end(),
                   [](const Bracket& l, const Bracket& r) { return l.mu_lo < r.mu_lo; });
  return out;
}

Triplet refine_critical(const HermitianPair& pair, const Bracket& bracket, double* width) {
  if (!(bracket.mu_lo < bracket.mu_hi) || bracket.x_i.size() != pair.n())
    throw Error(ErrorKind::BracketInvalid, "critical-point bracket is malformed");
  double lo = bracket.mu_lo, hi = bracket.mu_hi;
  Tracked at_lo = follow(pair, lo, bracket.x_i);
  const Tracked at_hi = follow(pair, hi, at_lo.x);
  const double s_lo = slope_of(pair, at_lo.x);
  const double s_hi = slope_of(pair, at_hi.x);
  if (sign_of(s_lo) * sign_of(s_hi) > 0)
    throw Error(ErrorKind::BracketInvalid, "lambda' does not change sign over the bracket");

  if (s_lo == 0.0) hi = lo;
  if (s_hi == 0.0) lo = hi;
  while (!converged(lo, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    Tracked at_mid = follow(pair, mid, at_lo.x);
    const double s_mid = slope_of(pair, at_mid.x);
    if (s_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if (sign_of(s_mid) == sign_of(s_lo)) {
      lo = mid;
      at_lo = std::move(at_mid);
    } else {
      hi = mid;
    }
  }
  if (width != nullptr) *width = hi - lo;
  const double mu = 0.5 * (lo + hi);
  Tracked fin = follow(pair, mu, at_lo.x);
  phase_normalize(fin.x);
  return Triplet{mu, fin.lambda, std::move(fin.x)};
}

Triplet refine_crossing(const HermitianPair& pair, const Bracket& bracket, double* width) {
  if (!(bracket.mu_lo < bracket.mu_hi) || bracket.x_i.size() != pair.n() || bracket.x_j.size() != pair.n())
    throw Error(ErrorKind::BracketInvalid, "crossing bracket is malformed");
  ComplexMatrix tracked(pair.n(), 2);
  tracked << bracket.x_i, bracket.x_j;
  double lo = bracket.mu_lo, hi = bracket.mu_hi;
  ClusterPair at_lo = follow_pair(pair, lo, tracked);
  const ClusterPair at_hi = follow_pair(pair, hi, at_lo.vectors);
  // Left of a crossing the upper curve has the smaller slope.
  if (!(at_lo.slope_gap < 0.0 && at_hi.slope_gap > 0.0))
    throw Error(ErrorKind::BracketInvalid, "the tracked curves do not cross inside the bracket");

  while (!converged(lo, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ClusterPair at_mid = follow_pair(pair, mid, at_lo.vectors);
    if (at_mid.slope_gap < 0.0) {
      lo = mid;
      at_lo = std::move(at_mid);
    } else {
      hi = mid;
    }
  }
  if (width != nullptr) *width = hi - lo;
  const double mu = 0.5 * (lo + hi);
  const ClusterPair fin = follow_pair(pair, mu, at_lo.vectors);
  const MultipleSet set = diagonalize_on(pair.c(), fin.vectors);
  const double tol = 1e-8 * (1.0 + pair.norm_c());
  if (!(set.c1 > tol && set.c2 < -tol))
    throw Error(ErrorKind::NotIndefiniteOnCluster, "C restricted to the double eigenspace is not indefinite");
  ComplexVector x = set.representative();
  x.normalize();
  return Triplet{mu, 0.5 * (fin.upper_lambda + fin.lower_lambda), std::move(x)};
}

OracleReport find_all(const HermitianPair& pair, double mu_lo, double mu_hi, int n_grid) {
  ScanResult sr = scan(pair, mu_lo, mu_hi, n_grid);
  OracleReport out;
  out.suspects = std::move(sr.suspects);
  for (const Bracket& b : sr.brackets) {
    try {
      double width = 0.0;
      Triplet t = b.kind == HitKind::CriticalPoint ? refine_critical(pair, b, &width) : refine_crossing(pair, b, &width);
      const double res = residual(pair, t).norm;
      if (res > 1e-9 * (1.0 + pair.scale(t.mu, t.lambda))) {
        out.rejected.push_back({b, "residual " + std::to_string(res) + " above 1e-9 scale"});
        continue;
      }
      out.hits.push_back(OracleHit{std::move(t), b.kind, b.curve_i, b.curve_j, b.mu_lo, b.mu_hi, width, res});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BracketInvalid && e.kind() != ErrorKind::NotIndefiniteOnCluster) throw;
      out.rejected.push_back({b, e.what()});
    }
  }
  std::stable_sort(out.hits.begin(), out.hits.end(), [](const OracleHit& l, const OracleHit& r) {
    return l.triplet.mu != r.triplet.mu ? l.triplet.mu < r.triplet.mu : l.triplet.lambda > r.triplet.lambda;
  });
  return out;
}

}  // namespace evp2d
