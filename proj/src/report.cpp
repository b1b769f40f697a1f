#include "evp2d/report.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace evp2d {

namespace {

using nlohmann::json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json opt(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

json real_vector(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v(i)));
  return out;
}

json num_list(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

std::ostream& csv(std::ostream& out) { return out << std::setprecision(17); }

void put(std::ostream& out, double v) {
  if (std::isfinite(v))
    out << v;
  else
    out << "nan";
}

void put(std::ostream& out, const std::optional<double>& v) { put(out, v.value_or(std::nan(""))); }

}  // namespace

json verdicts_to_json(const std::vector<Verdict>& verdicts) {
  json out = json::array();
  for (const Verdict& v : verdicts)
    out.push_back({{"name", v.name}, {"value", num(v.value)}, {"lo", num(v.lo)}, {"hi", num(v.hi)}, {"pass", v.pass}});
  return out;
}

json trace_to_json(const RqiTrace& trace, const SolveOptions& opts) {
  json iterates = json::array();
  for (const IterateRecord& r : trace.iterates) {
    json row = {{"k", r.k}, {"mu", num(r.t.mu)}, {"lambda", num(r.t.lambda)}, {"res_norm", num(r.res_norm)}};
    if (r.diag) {
      row["sigma_n_jhat"] = num(r.diag->sigma_n_jhat);
      row["c1"] = num(r.diag->c1);
      row["c2"] = num(r.diag->c2);
      row["abs_a12"] = num(r.diag->abs_a12);
      row["branch"] = std::string(to_string(r.diag->branch));
    } else {
      for (const char* k : {"sigma_n_jhat", "c1", "c2", "abs_a12", "branch"}) row[k] = nullptr;
    }
    row["err_mu"] = opt(r.err_mu);
    row["err_lambda"] = opt(r.err_lambda);
    row["err_x"] = opt(r.err_x);
    iterates.push_back(std::move(row));
  }
  const bool converged = trace.status == SolveStatus::Converged;
  return {{"status", std::string(to_string(trace.status))},
          {"tolerances",
           {{"tol_abs", opts.tol_abs}, {"tol_rel", opts.tol_rel}, {"max_iter", opts.max_iter}, {"tau_mult", opts.tau_mult}}},
          {"iterations", static_cast<int>(trace.iterates.size()) - 1},
          {"solution", triplet_to_json(trace.last())},
          {"iterates", std::move(iterates)},
          {"verdicts", json::array({{{"name", "converged"}, {"value", converged ? 1 : 0}, {"lo", 1}, {"hi", 1},
                                     {"pass", converged}}})}};
}

void write_trace_csv(const RqiTrace& trace, std::ostream& out) {
  csv(out) << "k,mu,lambda,res_norm,sigma_n_jhat,c1,c2,abs_a12,branch,err_mu,err_lambda,err_x\n";
  for (const IterateRecord& r : trace.iterates) {
    out << r.k << ',';
    put(out, r.t.mu);
    out << ',';
    put(out, r.t.lambda);
    out << ',';
    put(out, r.res_norm);
    out << ',';
    if (r.diag) {
      put(out, r.diag->sigma_n_jhat);
      out << ',';
      put(out, r.diag->c1);
      out << ',';
      put(out, r.diag->c2);
      out << ',';
      put(out, r.diag->abs_a12);
      out << ',' << to_string(r.diag->branch) << ',';
    } else {
      out << "nan,nan,nan,nan,,";
    }
    put(out, r.err_mu);
    out << ',';
    put(out, r.err_lambda);
    out << ',';
    put(out, r.err_x);
    out << '\n';
  }
}

json classification_to_json(const Classification& c) {
  return {{"kind", std::string(to_string(c.kind))},
          {"multiplicity", c.multiplicity},
          {"lambda_double_prime", opt(c.lambda_double_prime)},
          {"c_eigenvalues", real_vector(c.c_eigenvalues)},
          {"sigma_min_j", num(c.sigma_min_j)},
          {"representative", c.representative.size() ? vector_to_json(c.representative) : json(nullptr)}};
}

json oracle_to_json(const OracleReport& report, double mu_lo, double mu_hi, int n_grid) {
  json hits = json::array();
  for (const OracleHit& h : report.hits) {
    json row = triplet_to_json(h.triplet);
    row["kind"] = std::string(to_string(h.kind));
    row["curve_i"] = h.curve_i;
    row["curve_j"] = h.curve_j < 0 ? json(nullptr) : json(h.curve_j);
    row["mu_lo"] = num(h.mu_lo);
    row["mu_hi"] = num(h.mu_hi);
    row["refined_to"] = num(h.refined_to);
    row["residual"] = num(h.residual);
    hits.push_back(std::move(row));
  }
  json rejected = json::array();
  for (const RejectedBracket& r : report.rejected)
    rejected.push_back({{"kind", std::string(to_string(r.bracket.kind))},
                        {"curve_i", r.bracket.curve_i},
                        {"curve_j", r.bracket.curve_j < 0 ? json(nullptr) : json(r.bracket.curve_j)},
                        {"mu_lo", num(r.bracket.mu_lo)},
                        {"mu_hi", num(r.bracket.mu_hi)},
                        {"reason", r.reason}});
  json suspects = json::array();
  for (const Suspect& s : report.suspects)
    suspects.push_back({{"mu", num(s.mu)}, {"curve", s.curve}, {"slope", num(s.slope)}});
  return {{"window", {{"mu_lo", mu_lo}, {"mu_hi", mu_hi}, {"grid", n_grid}}},
          {"tolerances", {{"suspect_slope", 1e-8}, {"residual_rel", 1e-9}, {"bisection_rel", 1e-13}}},
          {"hits", std::move(hits)},
          {"rejected", std::move(rejected)},
          {"suspects", std::move(suspects)},
          {"verdicts", json::array()}};
}

void write_oracle_csv(const OracleReport& report, std::ostream& out) {
  csv(out) << "mu,lambda,kind,curve_i,curve_j,residual\n";
  for (const OracleHit& h : report.hits) {
    put(out, h.triplet.mu);
    out << ',';
    put(out, h.triplet.lambda);
    out << ',' << to_string(h.kind) << ',' << h.curve_i << ',';
    if (h.curve_j >= 0) out << h.curve_j;
    out << ',';
    put(out, h.residual);
    out << '\n';
  }
}

json study_to_json(const ScalingStudy& study) {
  json medians = json::object();
  for (std::size_t e = 0; e < study.error_names.size(); ++e) medians[study.error_names[e]] = num_list(study.medians[e]);
  json slopes = json::object();
  for (std::size_t e = 0; e < study.error_names.size(); ++e) slopes[study.error_names[e]] = num(study.slopes[e]);
  return {{"study", study.kind},
          {"regime", std::string(to_string(study.regime))},
          {"seed", study.seed},
          {"trials", study.trials},
          {"epsilons", num_list(study.epsilons)},
          {"attempted", study.attempted},
          {"failed", study.failed},
          {"medians", std::move(medians)},
          {"slopes", std::move(slopes)},
          {"noise_floor", num(study.noise_floor)},
          {"max_failed_fraction", 0.2},
          {"verdicts", verdicts_to_json(study.verdicts)},
          {"pass", study.pass()}};
}

void write_study_csv(const ScalingStudy& study, std::ostream& out) {
  csv(out) << "eps";
  for (const std::string& name : study.error_names) out << ',' << name;
  out << ",attempted,failed\n";
  for (std::size_t i = 0; i < study.epsilons.size(); ++i) {
    put(out, study.epsilons[i]);
    for (const auto& m : study.medians) {
      out << ',';
      put(out, m[i]);
    }
    out << ',' << study.attempted[i] << ',' << study.failed[i] << '\n';
  }
}

json study_to_json(const ConditioningStudy& study) {
  json rows = json::array();
  for (const ConditioningRow& r : study.rows)
    rows.push_back({{"eps", num(r.eps)},
                    {"trials", r.trials},
                    {"failures", r.failures},
                    {"sigma_violations", r.sigma_violations},
                    {"c_violations", r.c_violations},
                    {"min_sigma_ratio", num(r.min_sigma_ratio)}});
  return {{"study", "conditioning"},
          {"regime", std::string(to_string(study.regime))},
          {"seed", study.seed},
          {"trials", study.trials},
          {"sigma_n_star", num(study.sigma_n_star)},
          {"c1_star", num(study.c1_star)},
          {"c2_star", num(study.c2_star)},
          {"sigma_ratio_bound", 0.5},
          {"strict_eps_max", 1e-3},
          {"rows", std::move(rows)},
          {"verdicts", verdicts_to_json(study.verdicts)},
          {"pass", study.pass()}};
}

void write_study_csv(const ConditioningStudy& study, std::ostream& out) {
  csv(out) << "eps,trials,failures,sigma_violations,c_violations,min_sigma_ratio\n";
  for (const ConditioningRow& r : study.rows) {
    put(out, r.eps);
    out << ',' << r.trials << ',' << r.failures << ',' << r.sigma_violations << ',' << r.c_violations << ',';
    put(out, r.min_sigma_ratio);
    out << '\n';
  }
}

}  // namespace evp2d
