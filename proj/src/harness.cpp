#include "evp2d/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evp2d/eigencurves.hpp"
#include "evp2d/error.hpp"
#include "evp2d/subspace.hpp"

namespace evp2d {

namespace {

ComplexMatrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

ComplexMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const ComplexMatrix g = gaussian(n, n, rng);
  return (g + g.adjoint()) * 0.5;
}

ComplexMatrix random_signature_c(Eigen::Index plus, Eigen::Index minus, std::mt19937_64& rng) {
  const Eigen::Index n = plus + minus;
  const ComplexMatrix q = orthonormalize(gaussian(n, n, rng));
  RealVector d(n);
  d.head(plus).setOnes();
  d.tail(minus).setConstant(-1.0);
  const ComplexMatrix c = q.adjoint() * d.cast<Complex>().asDiagonal() * q;
  return (c + c.adjoint()) * 0.5;
}

void check_signature(Eigen::Index n, Eigen::Index plus, Eigen::Index minus) {
  if (plus < 1 || minus < 1 || plus + minus != n)
    throw Error(ErrorKind::InvalidArgument, "signature must have plus, minus >= 1 and plus + minus = n");
}

// Random orthonormal n x 2 basis on which C is clearly indefinite. Random
// planes rarely qualify for large n; then one vector is drawn from each of
// the positive and negative eigenspaces of C.
MultipleSet indefinite_plane(const ComplexMatrix& c, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const MultipleSet set = diagonalize_on(c, orthonormalize(gaussian(c.rows(), 2, rng)));
    if (set.c1 > 0.2 && set.c2 < -0.2) return set;
  }
  const HermitianEig e = hermitian_eig(c);
  const Eigen::Index plus = (e.values.array() > 0.0).count();
  const Eigen::Index minus = c.rows() - plus;
  if (plus < 1 || minus < 1) throw Error(ErrorKind::NotIndefinite, "C has no indefinite plane");
  ComplexMatrix basis(c.rows(), 2);
  basis.col(0) = e.vectors.leftCols(plus) * gaussian(plus, 1, rng);
  basis.col(1) = e.vectors.rightCols(minus) * gaussian(minus, 1, rng);
  return diagonalize_on(c, orthonormalize(basis));
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Verdict window(std::string name, double value, double lo, double hi) {
  return Verdict{std::move(name), value, lo, hi, std::isfinite(value) && value >= lo && value <= hi};
}

void finish_slopes(ScalingStudy& study, const std::vector<std::pair<double, double>>& windows) {
  study.slopes.clear();
  for (std::size_t e = 0; e < study.error_names.size(); ++e) {
    const auto slope = loglog_slope(study.epsilons, study.medians[e], study.noise_floor);
    const double value = slope.value_or(std::numeric_limits<double>::quiet_NaN());
    study.slopes.push_back(value);
    if (e < windows.size() && windows[e].first <= windows[e].second)
      study.verdicts.push_back(window("slope_" + study.error_names[e], value, windows[e].first, windows[e].second));
  }
  int attempted = 0, failed = 0;
  for (std::size_t i = 0; i < study.attempted.size(); ++i) {
    attempted += study.attempted[i];
    failed += study.failed[i];
  }
  study.failed_study = failed * 5 > attempted;
  study.verdicts.push_back(Verdict{"failed_fraction", attempted ? double(failed) / attempted : 1.0, 0.0, 0.2,
                                   !study.failed_study});
}

ComplexVector unit_derivative(const HermitianPair& pair, const Target& target) {
  const ComplexVector& x = target.set.simple().x;
  ComplexVector dx = eigvec_derivative(pair, target.mu, target.lambda, x);
  return dx / dx.norm();
}

}  // namespace

std::string_view to_string(Regime regime) { return regime == Regime::Simple ? "simple" : "multiple"; }

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

HermitianPair random_pair(Eigen::Index n, Eigen::Index plus, Eigen::Index minus, std::uint64_t seed) {
  check_signature(n, plus, minus);
  std::mt19937_64 rng = trial_rng(seed, 0x7061697200ULL, 0);
  const ComplexMatrix a = random_hermitian(n, rng);
  const ComplexMatrix c = random_signature_c(plus, minus, rng);
  return HermitianPair(a, c);
}

HermitianPair planted_crossing_pair(Eigen::Index n, Eigen::Index plus, Eigen::Index minus, double mu_star,
                                    double lambda_star, std::uint64_t seed) {
  check_signature(n, plus, minus);
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "planted crossings need n >= 3");
  std::mt19937_64 rng = trial_rng(seed, 0x63726f7373ULL, 0);
  const ComplexMatrix c = random_signature_c(plus, minus, rng);
  const MultipleSet plane = indefinite_plane(c, rng);
  const ComplexMatrix proj = ComplexMatrix::Identity(n, n) - plane.v * plane.v.adjoint();
  const ComplexMatrix h = proj * random_hermitian(n, rng) * proj + lambda_star * plane.v * plane.v.adjoint();
  return HermitianPair(h + mu_star * c, c);
}

PlantedTriplet planted_simple_pair(Eigen::Index n, Eigen::Index plus, Eigen::Index minus, double mu_star,
                                   double lambda_star, std::uint64_t seed) {
  check_signature(n, plus, minus);
  std::mt19937_64 rng = trial_rng(seed, 0x73696d706cULL, 0);
  const ComplexMatrix c = random_signature_c(plus, minus, rng);
  const MultipleSet plane = indefinite_plane(c, rng);
  const ComplexVector x = plane.representative().normalized();
  const ComplexMatrix proj = ComplexMatrix::Identity(n, n) - x * x.adjoint();
  const ComplexMatrix h = proj * random_hermitian(n, rng) * proj + lambda_star * x * x.adjoint();
  return PlantedTriplet{HermitianPair(h + mu_star * c, c), Triplet{mu_star, lambda_star, x}};
}

HermitianPair reference_simple_pair() {
  ComplexMatrix a(2, 2), c(2, 2);
  a << 0, 1, 1, 0;
  c << 1, 0, 0, -1;
  return HermitianPair(a, c);
}

HermitianPair reference_multiple_pair() {
  ComplexMatrix a(2, 2);
  a << 1, 0, 0, -1;
  return HermitianPair(a, a);
}

HermitianPair embedded_simple_pair(Eigen::Index n) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "embedded pairs need n >= 3");
  std::mt19937_64 rng = trial_rng(2024, 0x656d62ULL, static_cast<std::uint64_t>(n));
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  ComplexMatrix c = ComplexMatrix::Zero(n, n);
  a(0, 1) = a(1, 0) = 1.0;
  c(0, 0) = 1.0;
  c(1, 1) = -1.0;
  const Eigen::Index m = n - 2;
  // (A - I)(e1 + e2) = 0 holds as long as row k couples to e1 and e2 with opposite signs.
  const ComplexMatrix coupling = 0.3 * gaussian(m, 1, rng);
  a.block(2, 0, m, 1) = coupling;
  a.block(2, 1, m, 1) = -coupling;
  ComplexMatrix pad = 0.2 * random_hermitian(m, rng);
  for (Eigen::Index k = 0; k < m; ++k) pad(k, k) += (k % 2 == 0 ? 2.5 : -2.5) * (1.0 + 0.25 * double(k / 2));
  a.block(2, 2, m, m) = pad;
  c.block(2, 0, m, 2) = 0.2 * gaussian(m, 2, rng);
  ComplexMatrix cpad = 0.2 * random_hermitian(m, rng);
  for (Eigen::Index k = 0; k < m; ++k) cpad(k, k) += k % 2 == 0 ? -1.0 : 1.0;
  c.block(2, 2, m, m) = cpad;
  a.block(0, 2, 2, m) = a.block(2, 0, m, 2).adjoint();
  c.block(0, 2, 2, m) = c.block(2, 0, m, 2).adjoint();
  return HermitianPair(a, c);
}

HermitianPair embedded_multiple_pair(Eigen::Index n) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "embedded pairs need n >= 3");
  std::mt19937_64 rng = trial_rng(2024, 0x6d756cULL, static_cast<std::uint64_t>(n));
  const Eigen::Index m = n - 2;
  ComplexMatrix c = ComplexMatrix::Zero(n, n);
  c(0, 0) = 1.0;
  c(1, 1) = -1.0;
  // Identical couplings in A and C cancel in A - C, keeping span{e1, e2} as
  // the eigenspace of eigenvalue 0 at mu = 1.
  c.block(2, 0, m, 2) = 0.3 * gaussian(m, 2, rng);
  c.block(0, 2, 2, m) = c.block(2, 0, m, 2).adjoint();
  ComplexMatrix cpad = 0.2 * random_hermitian(m, rng);
  for (Eigen::Index k = 0; k < m; ++k) cpad(k, k) += k % 2 == 0 ? 0.7 : -0.7;
  c.block(2, 2, m, m) = cpad;

  ComplexMatrix a = c;
  ComplexMatrix gap = 0.2 * random_hermitian(m, rng);
  for (Eigen::Index k = 0; k < m; ++k) gap(k, k) += (k % 2 == 0 ? 2.5 : -2.5) * (1.0 + 0.25 * double(k / 2));
  a.block(2, 2, m, m) += gap;
  return HermitianPair(a, c);
}

OrderEstimate convergence_order(const std::vector<double>& errors, double noise_floor) {
  if (errors.size() < 3) throw Error(ErrorKind::TooShort, "convergence_order needs at least 3 errors");
  OrderEstimate out;
  for (std::size_t k = 1; k + 1 < errors.size(); ++k) {
    const double a = errors[k - 1], b = errors[k], c = errors[k + 1];
    if (!(a > b && b > c && c > noise_floor)) continue;
    out.orders.push_back(std::log(c / b) / std::log(b / a));
    out.indices.push_back(k);
  }
  return out;
}

Target make_target(const HermitianPair& pair, double mu, double lambda) {
  return Target{mu, lambda, eigvec_set(pair, mu, lambda)};
}

Triplet perturbed_start(const Target& target, double eps, std::mt19937_64& rng) {
  if (!(eps >= 0.0 && eps <= 0.3)) throw Error(ErrorKind::InvalidArgument, "eps must lie in [0, 0.3]");
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  const double u1 = uniform(rng);
  const double u2 = uniform(rng);
  const ComplexVector rep = target.set.representative().normalized();
  ComplexVector w = gaussian(rep.size(), 1, rng).col(0);
  w -= rep * rep.dot(w);
  w.normalize();
  const double shift = target.regime() == Regime::Simple ? eps : eps * eps;
  return Triplet::normalized(target.mu + shift * u1, target.lambda + shift * u2, rep + eps * w);
}

Triplet perturbed_start(const Target& target, double eps, std::uint64_t seed) {
  std::mt19937_64 rng = trial_rng(seed, 0, 0);
  return perturbed_start(target, eps, rng);
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > floor) || !(y[i] > 0.0) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return std::nullopt;
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (m * sxy - sx * sy) / denom;
}

void check_eps_list(const std::vector<double>& eps) {
  if (eps.size() < 2) throw Error(ErrorKind::InvalidArgument, "eps list needs at least two values");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0 && eps[i] <= 0.1)) throw Error(ErrorKind::InvalidArgument, "eps values must lie in (0, 0.1]");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw Error(ErrorKind::InvalidArgument, "eps list must be strictly decreasing");
  }
  if (eps.front() / eps.back() < 10.0 * (1.0 - 1e-12))
    throw Error(ErrorKind::InvalidArgument, "eps list must span at least one decade");
}

bool ScalingStudy::pass() const {
  return !failed_study && std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

ScalingStudy scaling_study(const HermitianPair& pair, const Target& target, const std::vector<double>& eps,
                           const StudyOptions& opts) {
  check_eps_list(eps);
  if (opts.trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be positive");
  ScalingStudy study;
  study.kind = "scaling";
  study.regime = target.regime();
  study.epsilons = eps;
  study.error_names = {"err_mu", "err_lambda", "err_x"};
  study.medians.assign(3, std::vector<double>(eps.size(), 0.0));
  study.trials = opts.trials;
  study.seed = opts.seed;
  study.noise_floor = opts.noise_floor_rel * pair.scale(target.mu, target.lambda);

  for (std::size_t e = 0; e < eps.size(); ++e) {
    std::vector<double> emu, elam, ex;
    int failed = 0;
    for (int t = 0; t < opts.trials; ++t) {
      std::mt19937_64 rng = trial_rng(opts.seed, e, static_cast<std::uint64_t>(t));
      const Triplet start = perturbed_start(target, eps[e], rng);
      try {
        const StepResult r = step(pair, start);
        emu.push_back(std::abs(r.next.mu - target.mu));
        elam.push_back(std::abs(r.next.lambda - target.lambda));
        ex.push_back(dist_to_set(r.next.x, target.set));
      } catch (const Error&) {
        ++failed;
      }
    }
    study.attempted.push_back(opts.trials);
    study.failed.push_back(failed);
    study.medians[0][e] = median(emu);
    study.medians[1][e] = median(elam);
    study.medians[2][e] = median(ex);
  }

  if (study.regime == Regime::Simple)
    finish_slopes(study, {{1.6, 2.4}, {3.3, 4.7}, {1.6, 2.4}});
  else
    finish_slopes(study, {{3.3, 4.7}, {3.3, 4.7}, {1.6, 2.4}});
  return study;
}

ScalingStudy ritz_approx_study(const HermitianPair& pair, const Target& target, const std::vector<double>& eps,
                               const StudyOptions& opts) {
  check_eps_list(eps);
  if (target.regime() != Regime::Simple)
    throw Error(ErrorKind::InvalidArgument, "the Ritz approximation study needs a simple target");
  if (opts.trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be positive");

  ComplexMatrix ideal(pair.n(), 2);
  ideal << target.set.simple().x, unit_derivative(pair, target);

  ScalingStudy study;
  study.kind = "ritz";
  study.regime = Regime::Simple;
  study.epsilons = eps;
  study.error_names = {"err_nu", "err_theta", "err_x"};
  study.medians.assign(3, std::vector<double>(eps.size(), 0.0));
  study.trials = opts.trials;
  study.seed = opts.seed;
  study.noise_floor = opts.noise_floor_rel * pair.scale(target.mu, target.lambda);

  for (std::size_t e = 0; e < eps.size(); ++e) {
    std::vector<double> enu, eth, ex;
    int excluded = 0;
    for (int t = 0; t < opts.trials; ++t) {
      std::mt19937_64 rng = trial_rng(opts.seed, e, static_cast<std::uint64_t>(t));
      ComplexMatrix w = gaussian(pair.n(), 2, rng);
      w /= spectral_norm(w);
      try {
        const MultipleSet diag = diagonalize_on(pair.c(), orthonormalize(ideal + eps[e] * w));
        if (!(diag.c1 > 0.0 && diag.c2 < 0.0)) {
          ++excluded;
          continue;
        }
        ProjectionBasis basis;
        basis.v = diag.v;
        basis.c1 = diag.c1;
        basis.c2 = diag.c2;
        const auto candidates = solve_2x2(form_rq(pair, basis));
        const Triplet anchor{target.mu, target.lambda, target.set.simple().x};
        const Triplet ritz = select_ritz(anchor, candidates, basis);
        enu.push_back(std::abs(ritz.mu - target.mu));
        eth.push_back(std::abs(ritz.lambda - target.lambda));
        ex.push_back(dist_to_set(ritz.x, target.set));
      } catch (const Error&) {
        ++excluded;
      }
    }
    study.attempted.push_back(opts.trials);
    study.failed.push_back(excluded);
    study.medians[0][e] = median(enu);
    study.medians[1][e] = median(eth);
    study.medians[2][e] = median(ex);
  }
  // The x error carries no acceptance window; it is reported only.
  finish_slopes(study, {{0.8, 1.4}, {1.6, 2.4}, {1.0, 0.0}});
  return study;
}

bool ConditioningStudy::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

ConditioningStudy conditioning_study(const HermitianPair& pair, const Target& target, const std::vector<double>& eps,
                                     const StudyOptions& opts) {
  if (eps.empty()) throw Error(ErrorKind::InvalidArgument, "eps list is empty");
  for (double e : eps)
    if (!(e > 0.0 && e <= 0.3)) throw Error(ErrorKind::InvalidArgument, "conditioning eps must lie in (0, 0.3]");
  if (opts.trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be positive");

  ConditioningStudy study;
  study.regime = target.regime();
  study.trials = opts.trials;
  study.seed = opts.seed;
  const auto sigma_n_at = [&](const ComplexVector& x) {
    const RealVector s = singular_values(jacobian_hat(pair, Triplet{target.mu, target.lambda, x}));
    return s(s.size() - 1);
  };
  if (study.regime == Regime::Simple) {
    const ComplexVector& x = target.set.simple().x;
    study.sigma_n_star = sigma_n_at(x);
    ComplexMatrix ideal(pair.n(), 2);
    ideal << x, unit_derivative(pair, target);
    const MultipleSet star = diagonalize_on(pair.c(), ideal);
    study.c1_star = star.c1;
    study.c2_star = star.c2;
  } else {
    // sigma_n(J^) depends only on the relative phase of the two components.
    const MultipleSet& m = target.set.multiple();
    double inf = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 720; ++k) {
      const Complex g = std::polar(1.0, 2.0 * std::numbers::pi * k / 720.0);
      inf = std::min(inf, sigma_n_at(m.t * m.v.col(0) + g * m.s * m.v.col(1)));
    }
    study.sigma_n_star = inf;
    study.c1_star = m.c1;
    study.c2_star = m.c2;
  }

  for (std::size_t e = 0; e < eps.size(); ++e) {
    ConditioningRow row;
    row.eps = eps[e];
    row.trials = opts.trials;
    row.min_sigma_ratio = std::numeric_limits<double>::infinity();
    for (int t = 0; t < opts.trials; ++t) {
      std::mt19937_64 rng = trial_rng(opts.seed, e, static_cast<std::uint64_t>(t));
      const Triplet start = perturbed_start(target, eps[e], rng);
      try {
        const ProjectionBasis b = projection_basis(pair, start);
        row.min_sigma_ratio = std::min(row.min_sigma_ratio, b.sigma_n / study.sigma_n_star);
        if (b.sigma_n < 0.5 * study.sigma_n_star) ++row.sigma_violations;
        bool c_ok;
        if (study.regime == Regime::Simple)
          c_ok = b.c1 >= 0.5 * study.c1_star && b.c1 <= 1.5 * study.c1_star && b.c2 >= 1.5 * study.c2_star &&
                 b.c2 <= 0.5 * study.c2_star;
        else
          c_ok = b.c1 >= 0.5 * study.c1_star && b.c2 <= 0.5 * study.c2_star;
        if (!c_ok) ++row.c_violations;
      } catch (const Error&) {
        ++row.failures;
      }
    }
    if (row.eps <= 1e-3) {
      const std::string tag = "eps=" + std::to_string(row.eps);
      study.verdicts.push_back(Verdict{"sigma_violations@" + tag, double(row.sigma_violations), 0, 0, row.sigma_violations == 0});
      study.verdicts.push_back(Verdict{"c_violations@" + tag, double(row.c_violations), 0, 0, row.c_violations == 0});
      study.verdicts.push_back(Verdict{"failures@" + tag, double(row.failures), 0, 0, row.failures == 0});
    }
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace evp2d
