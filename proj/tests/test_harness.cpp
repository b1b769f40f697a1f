#include "doctest.h"

#include "evp2d/error.hpp"
#include "evp2d/harness.hpp"
#include "evp2d/subspace.hpp"
#include "support.hpp"

using namespace evp2d;
using namespace testing;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("convergence_order examples") {
  OrderEstimate o = convergence_order({1e-1, 1e-2, 1e-4, 1e-8}, 1e-13);
  REQUIRE(o.orders.size() == 2);
  CHECK(o.orders[0] == doctest::Approx(2.0));
  CHECK(o.orders[1] == doctest::Approx(2.0));
  CHECK(o.indices == std::vector<std::size_t>{1, 2});

  o = convergence_order({1e-1, 1e-2, 1e-3}, 1e-13);
  REQUIRE(o.orders.size() == 1);
  CHECK(o.orders[0] == doctest::Approx(1.0));

  o = convergence_order({1e-1, 1e-2, 1e-4, 1e-16}, 1e-13);
  REQUIRE(o.orders.size() == 1);
  CHECK(o.indices[0] == 1);

  CHECK(kind_of([] { convergence_order({1.0, 0.1}, 0); }) == ErrorKind::TooShort);
}

TEST_CASE("random_pair") {
  const HermitianPair p = random_pair(2, 1, 1, 7);
  const RealVector ev = hermitian_eig(p.c()).values;
  CHECK(ev(0) == doctest::Approx(1.0));
  CHECK(ev(1) == doctest::Approx(-1.0));
  const HermitianPair q = random_pair(9, 4, 5, 11), r = random_pair(9, 4, 5, 11);
  CHECK((q.a() - r.a()).norm() == 0.0);
  CHECK((q.c() - r.c()).norm() == 0.0);
  const RealVector cv = hermitian_eig(q.c()).values;
  CHECK((cv.head(4).array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK((cv.tail(5).array() + 1.0).abs().maxCoeff() < 1e-12);
  CHECK((random_pair(9, 4, 5, 12).a() - q.a()).norm() > 0.0);
  CHECK_THROWS_AS(random_pair(3, 3, 0, 1), Error);
  CHECK_THROWS_AS(random_pair(3, 1, 1, 1), Error);
}

TEST_CASE("planted generators") {
  const PlantedTriplet pt = planted_simple_pair(9, 4, 5, 0.4, -0.7, 2);
  CHECK(residual(pt.pair, pt.triplet).norm < 1e-12);
  const Classification c = classify(pt.pair, 0.4, -0.7);
  CHECK(c.kind == TripletKind::NonsingularSimple);
  const HermitianPair cp = planted_crossing_pair(9, 4, 5, 0.4, -0.7, 2);
  CHECK(classify(cp, 0.4, -0.7).kind == TripletKind::NonsingularMultiple);
}

TEST_CASE("embedded reference pairs keep their 2D-eigenvalues") {
  for (Eigen::Index n : {3, 6, 12}) {
    const HermitianPair s = embedded_simple_pair(n);
    ComplexVector x = ComplexVector::Zero(n);
    x(0) = x(1) = 1 / std::sqrt(2.0);
    CHECK(residual(s, Triplet{0, 1, x}).norm < 1e-14);
    CHECK(classify(s, 0, 1).kind == TripletKind::NonsingularSimple);
    const HermitianPair m = embedded_multiple_pair(n);
    CHECK(classify(m, 1, 0).kind == TripletKind::NonsingularMultiple);
    CHECK(multiplicity(m, 1, 0, 1e-8).k == 2);
  }
}

TEST_CASE("perturbed_start") {
  const HermitianPair p = embedded_simple_pair(6);
  const Target t = make_target(p, 0, 1);
  const Triplet exact = perturbed_start(t, 0.0, 3);
  CHECK(exact.mu == 0.0);
  CHECK(exact.lambda == 1.0);
  CHECK(dist_to_set(exact.x, t.set) < 1e-15);

  const Triplet a = perturbed_start(t, 1e-2, 3), b = perturbed_start(t, 1e-2, 3);
  CHECK(a.mu == b.mu);
  CHECK(a.lambda == b.lambda);
  CHECK((a.x - b.x).norm() == 0.0);

  std::mt19937_64 rng(91);
  for (double eps : {0.3, 0.1, 1e-2, 1e-4}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Triplet s = perturbed_start(t, eps, rng);
      const double dist = dist_to_set(s.x, t.set);
      CHECK(std::abs(s.mu) <= eps);
      CHECK(std::abs(s.lambda - 1) <= eps);
      const double e = std::max({std::abs(s.mu), std::abs(s.lambda - 1), dist});
      CHECK(e >= 0.5 * eps);
      CHECK(e <= 1.5 * eps);
    }
  }

  const HermitianPair m = embedded_multiple_pair(6);
  const Target tm = make_target(m, 1, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Triplet s = perturbed_start(tm, 1e-2, rng);
    CHECK(std::abs(s.mu - 1) <= 1e-4);
    CHECK(std::abs(s.lambda) <= 1e-4);
    CHECK(dist_to_set(s.x, tm.set) <= 1.5e-2);
  }
  CHECK_THROWS_AS(perturbed_start(t, 0.5, 1), Error);
}

TEST_CASE("eps list checks") {
  CHECK_THROWS_AS(check_eps_list({1e-2}), Error);
  CHECK_THROWS_AS(check_eps_list({1e-3, 1e-2}), Error);
  CHECK_THROWS_AS(check_eps_list({0.2, 1e-2}), Error);
  CHECK_THROWS_AS(check_eps_list({1e-2, 3e-3}), Error);
  CHECK_NOTHROW(check_eps_list({1e-2, 3e-3, 1e-3}));
  const HermitianPair p = embedded_simple_pair(6);
  CHECK_THROWS_AS(scaling_study(p, make_target(p, 0, 1), {1e-2}, {}), Error);
}

TEST_CASE("loglog_slope") {
  CHECK(*loglog_slope({1e-1, 1e-2, 1e-3}, {1e-2, 1e-4, 1e-6}) == doctest::Approx(2.0));
  CHECK(*loglog_slope({1e-1, 1e-2, 1e-3}, {1e-2, 1e-4, 1e-20}, 1e-13) == doctest::Approx(2.0));
  CHECK_FALSE(loglog_slope({1e-1, 1e-2}, {1e-2, 0.0}));
}

TEST_CASE("scaling study is reproducible and reports its verdicts") {
  const HermitianPair p = embedded_simple_pair(8);
  const Target t = make_target(p, 0, 1);
  StudyOptions opts;
  opts.trials = 10;
  const ScalingStudy a = scaling_study(p, t, {1e-2, 3e-3, 1e-3}, opts);
  const ScalingStudy b = scaling_study(p, t, {1e-2, 3e-3, 1e-3}, opts);
  CHECK(a.medians == b.medians);
  CHECK(a.failed == std::vector<int>{0, 0, 0});
  REQUIRE(a.slopes.size() == 3);
  // lambda error is fourth order; x error second order.
  CHECK(a.slopes[1] >= 3.3);
  CHECK(a.slopes[2] >= 1.6);
  CHECK(a.slopes[2] <= 2.4);
  CHECK_FALSE(a.verdicts.empty());
}

TEST_CASE("ritz study at eps -> 0 is exact") {
  const HermitianPair p = embedded_simple_pair(8);
  const Target t = make_target(p, 0, 1);
  StudyOptions opts;
  opts.trials = 5;
  const ScalingStudy s = ritz_approx_study(p, t, {1e-2, 1e-3, 1e-6}, opts);
  CHECK(s.medians[1][2] < 1e-10);
  CHECK(s.medians[0][2] < 1e-10);
  CHECK_THROWS_AS(ritz_approx_study(embedded_multiple_pair(6), make_target(embedded_multiple_pair(6), 1, 0),
                                    {1e-2, 1e-3}, opts),
                  Error);
}

TEST_CASE("conditioning study counts but permits large-eps violations") {
  const HermitianPair p = embedded_simple_pair(8);
  const Target t = make_target(p, 0, 1);
  StudyOptions opts;
  opts.trials = 20;
  const ConditioningStudy s = conditioning_study(p, t, {0.3, 1e-3}, opts);
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[1].sigma_violations == 0);
  CHECK(s.rows[1].c_violations == 0);
  for (const Verdict& v : s.verdicts) CHECK(v.name.find("0.3") == std::string::npos);
  CHECK(s.pass());
}

TEST_CASE("solver traces on the reference simple pair converge quadratically") {
  const HermitianPair p = embedded_simple_pair(8);
  const Target t = make_target(p, 0, 1);
  double min_order = 1e9;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RqiTrace tr = solve(p, perturbed_start(t, 0.05, seed), {}, t.reference());
    std::vector<double> e;
    for (const IterateRecord& r : tr.iterates) e.push_back(*r.err_mu + *r.err_lambda + *r.err_x);
    if (e.size() < 3) continue;
    for (double q : convergence_order(e, 1e-13).orders) min_order = std::min(min_order, q);
  }
  CHECK(min_order >= 1.7);
}

}  // TEST_SUITE
