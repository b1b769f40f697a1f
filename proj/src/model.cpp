#include "evp2d/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "evp2d/error.hpp"

namespace evp2d {

namespace {

double hermitian_spectral_norm(const ComplexMatrix& m) {
  const HermitianEig eig = hermitian_eig(m, EigOrder::Ascending);
  return std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
}

std::string field_path(const char* field, std::size_t i) {
  return std::string(field) + "[" + std::to_string(i) + "]";
}

Complex complex_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorKind::ParseError, where + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

void write_file(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

HermitianPair::HermitianPair(const ComplexMatrix& a, const ComplexMatrix& c) {
  if (a.rows() != a.cols() || c.rows() != c.cols() || a.rows() != c.rows())
    throw Error(ErrorKind::DimensionMismatch, "A and C must be square and of equal size");
  if (a.rows() < 2) throw Error(ErrorKind::DimensionMismatch, "pair dimension must be at least 2");
  a_ = symmetrized(a, "A");
  c_ = symmetrized(c, "C");

  const HermitianEig c_eig = hermitian_eig(c_, EigOrder::Descending);
  norm_c_ = std::max(std::abs(c_eig.values(0)), std::abs(c_eig.values(c_eig.values.size() - 1)));
  const double tol = 1e-12 * norm_c_;
  if (!(c_eig.values(0) > tol && c_eig.values(c_eig.values.size() - 1) < -tol))
    throw Error(ErrorKind::NotIndefinite, "C must have eigenvalues of both signs");
  norm_a_ = hermitian_spectral_norm(a_);
}

ComplexMatrix HermitianPair::pencil(double mu) const { return a_ - mu * c_; }

double HermitianPair::scale(double mu, double lambda) const {
  return norm_a_ + std::abs(mu) * norm_c_ + std::abs(lambda);
}

bool HermitianPair::operator==(const HermitianPair& other) const {
  return a_.rows() == other.a_.rows() && a_ == other.a_ && c_ == other.c_;
}

Triplet Triplet::normalized(double mu, double lambda, const ComplexVector& x) {
  const double nrm = x.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm))
    throw Error(ErrorKind::NotNormalized, "cannot normalize a zero or non-finite vector");
  return Triplet{mu, lambda, x / nrm};
}

namespace {

void check_dims(const HermitianPair& pair, const Triplet& t) {
  if (t.x.size() != pair.n())
    throw Error(ErrorKind::DimensionMismatch,
                "triplet vector has length " + std::to_string(t.x.size()) + ", pair has n = " +
                    std::to_string(pair.n()));
}

}  // namespace

ResidualReport residual(const HermitianPair& pair, const Triplet& t) {
  check_dims(pair, t);
  const Eigen::Index n = pair.n();
  const ComplexVector cx = pair.c() * t.x;
  ComplexVector top = pair.a() * t.x - t.mu * cx - t.lambda * t.x;
  const double xcx = t.x.dot(cx).real();
  const double xx = t.x.squaredNorm();

  ResidualReport r;
  r.f.resize(n + 2);
  r.f.head(n) = top;
  r.f(n) = Complex(-0.5 * xcx, 0.0);
  r.f(n + 1) = Complex(0.5 - 0.5 * xx, 0.0);
  r.eig_norm = top.norm();
  r.isotropy = 0.5 * std::abs(xcx);
  r.normalization = 0.5 * std::abs(1.0 - xx);
  r.norm = r.f.norm();
  return r;
}

ComplexMatrix jacobian_hat(const HermitianPair& pair, const Triplet& t) {
  check_dims(pair, t);
  const Eigen::Index n = pair.n();
  ComplexMatrix j(n, n + 2);
  j.leftCols(n) = pair.pencil(t.mu);
  j.leftCols(n).diagonal().array() -= t.lambda;
  j.col(n) = -(pair.c() * t.x);
  j.col(n + 1) = -t.x;
  return j;
}

ComplexMatrix jacobian(const HermitianPair& pair, const Triplet& t) {
  const Eigen::Index n = pair.n();
  ComplexMatrix j = ComplexMatrix::Zero(n + 2, n + 2);
  const ComplexMatrix top = jacobian_hat(pair, t);
  j.topRows(n) = top;
  // Bottom rows are the adjoints of the last two columns, so J == J^H exactly.
  j.bottomLeftCorner(2, n) = top.rightCols(2).adjoint();
  return j;
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j, const char* field) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::ParseError, std::string(field) + ": expected array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != cols)
      throw Error(ErrorKind::ParseError, field_path(field, r) + ": expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from_json(row[c], field_path(field, r) + "[" + std::to_string(c) + "]");
  }
  return m;
}

nlohmann::json vector_to_json(const ComplexVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

ComplexVector vector_from_json(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, std::string(field) + ": expected array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], field_path(field, i));
  return v;
}

nlohmann::json pair_to_json(const HermitianPair& pair) {
  return {{"n", pair.n()}, {"a", matrix_to_json(pair.a())}, {"c", matrix_to_json(pair.c())}};
}

HermitianPair pair_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "pair document must be an object");
  for (const char* key : {"n", "a", "c"})
    if (!j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field '") + key + "'");
  if (!j["n"].is_number_integer()) throw Error(ErrorKind::ParseError, "n: expected integer");
  const auto n = j["n"].get<long long>();
  ComplexMatrix a = matrix_from_json(j["a"], "a");
  ComplexMatrix c = matrix_from_json(j["c"], "c");
  if (a.rows() != n || a.cols() != n || c.rows() != n || c.cols() != n)
    throw Error(ErrorKind::ParseError, "a and c must be n x n with n = " + std::to_string(n));
  return HermitianPair(a, c);
}

HermitianPair load_pair(const std::filesystem::path& path) {
  const nlohmann::json j = parse_file(path);
  try {
    return pair_from_json(j);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    throw;
  }
}

void save_pair(const HermitianPair& pair, const std::filesystem::path& path) {
  write_file(pair_to_json(pair), path);
}

nlohmann::json triplet_to_json(const Triplet& t) {
  return {{"mu", t.mu}, {"lambda", t.lambda}, {"x", vector_to_json(t.x)}};
}

Triplet triplet_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "triplet document must be an object");
  for (const char* key : {"mu", "lambda", "x"})
    if (!j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field '") + key + "'");
  if (!j["mu"].is_number() || !j["lambda"].is_number())
    throw Error(ErrorKind::ParseError, "mu and lambda must be numbers");
  return Triplet{j["mu"].get<double>(), j["lambda"].get<double>(), vector_from_json(j["x"], "x")};
}

Triplet load_triplet(const std::filesystem::path& path) {
  const nlohmann::json j = parse_file(path);
  try {
    return triplet_from_json(j);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    throw;
  }
}

void save_triplet(const Triplet& t, const std::filesystem::path& path) { write_file(triplet_to_json(t), path); }

}  // namespace evp2d
