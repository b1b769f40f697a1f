#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "evp2d/error.hpp"
#include "evp2d/harness.hpp"
#include "evp2d/model.hpp"
#include "support.hpp"

using namespace evp2d;
using namespace testing;

namespace {

HermitianPair simple_pair() { return HermitianPair(mat2(0, 1, 1, 0), diag({1, -1})); }
HermitianPair multiple_pair() { return HermitianPair(diag({1, -1}), diag({1, -1})); }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("evp2d_model_" + name);
}

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

TEST_SUITE("model") {

TEST_CASE("construction checks") {
  CHECK(kind_of([] { HermitianPair(diag({1, 2}), diag({1, 1})); }) == ErrorKind::NotIndefinite);
  CHECK(kind_of([] { HermitianPair(mat2(0, 1, 2, 0), diag({1, -1})); }) == ErrorKind::NotHermitian);
  CHECK(kind_of([] { HermitianPair(diag({1, 2, 3}), diag({1, -1})); }) == ErrorKind::DimensionMismatch);
  const HermitianPair p = simple_pair();
  CHECK(p.n() == 2);
  CHECK(p.norm_a() == doctest::Approx(1.0));
  CHECK(p.norm_c() == doctest::Approx(1.0));
}

TEST_CASE("residual at closed-form triplets") {
  const ComplexVector x = vec2(1, 1) / std::sqrt(2.0);
  CHECK(residual(simple_pair(), Triplet{0, 1, x}).norm <= 1e-15);
  CHECK(residual(multiple_pair(), Triplet{1, 0, x}).norm <= 1e-15);

  const ResidualReport r = residual(simple_pair(), Triplet{0.3, -0.2, 2.0 * vec2(0.6, 0.8)});
  CHECK(r.f.size() == 4);
  CHECK(r.f(3).real() == doctest::Approx(-1.5));
  CHECK(r.f(2).imag() == 0.0);
  CHECK(r.f(3).imag() == 0.0);

  CHECK(kind_of([] { residual(simple_pair(), Triplet{0, 0, ComplexVector::Ones(3)}); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("residual is phase invariant") {
  std::mt19937_64 rng(21);
  const HermitianPair p = random_pair(7, 3, 4, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexVector x = unit_vector(7, rng);
    const Complex g = std::polar(1.0, 0.37 * trial);
    const ResidualReport a = residual(p, Triplet{0.4, -0.1, x});
    const ResidualReport b = residual(p, Triplet{0.4, -0.1, g * x});
    CHECK(a.f.head(7).norm() == doctest::Approx(b.f.head(7).norm()).epsilon(1e-13));
    CHECK(std::abs(a.f(7) - b.f(7)) <= 1e-15);
    CHECK(std::abs(a.f(8) - b.f(8)) <= 1e-15);
  }
}

TEST_CASE("jacobian structure") {
  std::mt19937_64 rng(22);
  const HermitianPair p = random_pair(6, 3, 3, 9);
  const Triplet t{0.2, 0.5, unit_vector(6, rng)};
  const ComplexMatrix j = jacobian(p, t);
  CHECK(j.rows() == 8);
  CHECK((j - j.adjoint()).norm() == 0.0);
  const ComplexMatrix jh = jacobian_hat(p, t);
  CHECK(jh.rows() == 6);
  CHECK(jh.cols() == 8);
  CHECK((jh - j.topRows(6)).norm() == 0.0);

  // J^(gamma x) = J^(x) diag(I, gamma I2)
  const Complex g = std::polar(1.0, 1.1);
  ComplexMatrix d = ComplexMatrix::Identity(8, 8);
  d(6, 6) = d(7, 7) = g;
  CHECK((jacobian_hat(p, Triplet{t.mu, t.lambda, g * t.x}) - jh * d).norm() < 1e-14);
}

TEST_CASE("jacobian singular values at closed-form triplets") {
  const ComplexVector x = vec2(1, 1) / std::sqrt(2.0);
  const RealVector s = singular_values(jacobian(simple_pair(), Triplet{0, 1, x}));
  CHECK(s(s.size() - 1) > 0.1);
  const RealVector sh = singular_values(jacobian_hat(simple_pair(), Triplet{0, 1, x}));
  CHECK(sh(1) > 0.1);

  // C x = 0 makes the column for mu vanish.
  ComplexMatrix c = diag({1, -1, 0});
  ComplexMatrix a = diag({2, 3, 4});
  ComplexVector e3 = ComplexVector::Zero(3);
  e3(2) = 1;
  const ComplexMatrix j = jacobian(HermitianPair(a, c), Triplet{0, 4, e3});
  CHECK(j.col(3).norm() == 0.0);
  CHECK(singular_values(j).minCoeff() < 1e-15);
}

TEST_CASE("pair file round trip") {
  const HermitianPair p = random_pair(8, 4, 4, 31);
  const auto path = temp_file("rt.json");
  save_pair(p, path);
  const HermitianPair q = load_pair(path);
  CHECK(p == q);
  CHECK((p.a() - q.a()).norm() == 0.0);
  CHECK((p.c() - q.c()).norm() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("minimal pair document") {
  const auto path = temp_file("min.json");
  {
    std::ofstream f(path);
    f << R"({"n": 2, "a": [[[0,0],[1,0]],[[1,0],[0,0]]], "c": [[[1,0],[0,0]],[[0,0],[-1,0]]]})";
  }
  const HermitianPair p = load_pair(path);
  CHECK(p == simple_pair());
  std::filesystem::remove(path);
}

TEST_CASE("pair document errors") {
  const auto path = temp_file("bad.json");
  auto write = [&](const std::string& text) {
    std::ofstream f(path);
    f << text;
  };
  write(R"({"n": 2, "a": [[[1,0],[0,0]],[[0,0],[1,0]]], "c": [[[1,0],[0,0]],[[0,0],[2,0]]]})");
  CHECK(kind_of([&] { load_pair(path); }) == ErrorKind::NotIndefinite);
  write(R"({"n": 2, "a": [[[1,0],[0,0]],[[0,0],[1,0]]]})");
  CHECK(kind_of([&] { load_pair(path); }) == ErrorKind::ParseError);
  write(R"({"n": 2, "a": [[[1,0],[0,0]],[[0,0]]], "c": [[[1,0],[0,0]],[[0,0],[-1,0]]]})");
  CHECK(kind_of([&] { load_pair(path); }) == ErrorKind::ParseError);
  write("{ not json");
  CHECK(kind_of([&] { load_pair(path); }) == ErrorKind::ParseError);
  write(R"({"n": 2, "a": [[[0,0],[1,0]],[[3,0],[0,0]]], "c": [[[1,0],[0,0]],[[0,0],[-1,0]]]})");
  CHECK(kind_of([&] { load_pair(path); }) == ErrorKind::NotHermitian);
  std::filesystem::remove(path);
}

TEST_CASE("triplet file round trip") {
  const Triplet t{0.25, -1.5, vec2(Complex(0.6, 0.1), Complex(-0.2, 0.3))};
  const auto path = temp_file("t.json");
  save_triplet(t, path);
  const Triplet u = load_triplet(path);
  CHECK(u.mu == t.mu);
  CHECK(u.lambda == t.lambda);
  CHECK((u.x - t.x).norm() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("Triplet::normalized") {
  const Triplet t = Triplet::normalized(1, 2, vec2(3, 4));
  CHECK(t.x.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kind_of([] { Triplet::normalized(0, 0, ComplexVector::Zero(2)); }) == ErrorKind::NotNormalized);
}

}  // TEST_SUITE
