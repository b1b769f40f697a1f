// evp2d: command-line driver for the 2D eigenvalue problem library.
//
// Exit codes: 0 success, 1 a study or solve did not pass, 2 bad input.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "evp2d/classification.hpp"
#include "evp2d/eigencurves.hpp"
#include "evp2d/error.hpp"
#include "evp2d/harness.hpp"
#include "evp2d/oracle.hpp"
#include "evp2d/report.hpp"
#include "evp2d/rqi.hpp"

using namespace evp2d;
using nlohmann::json;

namespace {

struct Common {
  std::string pair;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* app, Common& c, bool needs_pair = true) {
  auto* opt = app->add_option("--pair", c.pair, "pair file (JSON)");
  if (needs_pair) opt->required()->check(CLI::ExistingFile);
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--out", c.out, "output file (default: stdout)");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

// Writes whatever `emit` produces to --out or stdout.
template <typename F>
void emit_to(const Common& c, F&& emit) {
  if (c.out.empty()) {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open output file " + c.out);
  emit(f);
}

void emit_json(const Common& c, const json& j) {
  emit_to(c, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

std::vector<double> default_eps(const std::string& study) {
  if (study == "conditioning") return {1e-3};
  if (study == "ritz") return {1e-2, 3e-3, 1e-3};
  return {1e-2, 3e-3, 1e-3, 3e-4};
}

ComplexVector auto_start(const HermitianPair& pair, double mu, double lambda) {
  const CurvePoint p = eig_at(pair, mu);
  Eigen::Index best = 0;
  (p.values.array() - lambda).abs().minCoeff(&best);
  return p.vectors.col(best);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver and experiment driver for the 2D eigenvalue problem"};
  app.require_subcommand(1);

  // gen-pair
  Common gen_c;
  std::string gen_kind = "random";
  Eigen::Index gen_n = 12, gen_plus = -1, gen_minus = -1;
  double gen_mu = 0.5, gen_lambda = 0.25;
  auto* gen = app.add_subcommand("gen-pair", "write a test pair");
  add_common(gen, gen_c, false);
  gen->add_option("--kind", gen_kind, "pair family")
      ->check(CLI::IsMember({"random", "planted-crossing", "planted-simple", "reference-simple", "reference-multiple",
                             "embedded-simple", "embedded-multiple"}));
  gen->add_option("--n", gen_n, "dimension");
  gen->add_option("--plus", gen_plus, "number of positive eigenvalues of C (default n/2)");
  gen->add_option("--minus", gen_minus, "number of negative eigenvalues of C (default n - plus)");
  gen->add_option("--mu-star", gen_mu, "planted mu");
  gen->add_option("--lambda-star", gen_lambda, "planted lambda");

  // solve
  Common solve_c;
  double mu0 = 0.0, lambda0 = 0.0;
  std::string x0_file, reference_file;
  bool x0_auto = false;
  SolveOptions solve_opts;
  auto* solve_cmd = app.add_subcommand("solve", "run 2DRQI from an initial triplet");
  add_common(solve_cmd, solve_c);
  solve_cmd->add_option("--mu0", mu0, "initial mu")->required();
  solve_cmd->add_option("--lambda0", lambda0, "initial lambda")->required();
  auto* x0_opt = solve_cmd->add_option("--x0", x0_file, "initial vector (triplet JSON or vector JSON)")
                     ->check(CLI::ExistingFile);
  auto* x0_auto_opt = solve_cmd->add_flag("--x0-auto", x0_auto, "eigenvector of A - mu0 C closest to lambda0");
  x0_opt->excludes(x0_auto_opt);
  solve_cmd->add_option("--tol-abs", solve_opts.tol_abs, "absolute residual tolerance");
  solve_cmd->add_option("--tol-rel", solve_opts.tol_rel, "relative residual tolerance");
  solve_cmd->add_option("--max-iter", solve_opts.max_iter, "iteration limit");
  solve_cmd->add_option("--reference", reference_file, "known (mu, lambda) as triplet JSON, for error columns")
      ->check(CLI::ExistingFile);

  // classify
  Common cls_c;
  double cls_mu = 0.0, cls_lambda = 0.0;
  auto* cls = app.add_subcommand("classify", "classify a 2D-eigenvalue");
  add_common(cls, cls_c);
  cls->add_option("--mu", cls_mu)->required();
  cls->add_option("--lambda", cls_lambda)->required();

  // curves
  Common cur_c;
  double cur_lo = -2.0, cur_hi = 2.0;
  int cur_grid = 200;
  bool cur_vectors = false;
  auto* cur = app.add_subcommand("curves", "trace the eigencurves of A - mu C");
  add_common(cur, cur_c);
  cur->add_option("--mu-lo", cur_lo);
  cur->add_option("--mu-hi", cur_hi);
  cur->add_option("--grid", cur_grid);
  cur->add_flag("--vectors", cur_vectors, "include eigenvector components in CSV output");

  // oracle
  Common ora_c;
  double ora_lo = -2.0, ora_hi = 2.0;
  int ora_grid = 400;
  auto* ora = app.add_subcommand("oracle", "locate 2D-eigenvalues by eigencurve scanning");
  add_common(ora, ora_c);
  ora->add_option("--mu-lo", ora_lo);
  ora->add_option("--mu-hi", ora_hi);
  ora->add_option("--grid", ora_grid);

  // study
  Common st_c;
  std::string st_kind;
  double st_mu = 0.0, st_lambda = 0.0;
  std::vector<double> st_eps;
  int st_trials = 50;
  auto* st = app.add_subcommand("study", "convergence and conditioning studies");
  add_common(st, st_c);
  st->add_option("kind", st_kind, "scaling, ritz or conditioning")
      ->required()
      ->check(CLI::IsMember({"scaling", "ritz", "conditioning"}));
  st->add_option("--mu", st_mu, "target mu")->required();
  st->add_option("--lambda", st_lambda, "target lambda")->required();
  st->add_option("--eps", st_eps, "perturbation sizes, decreasing");
  st->add_option("--trials", st_trials, "trials per eps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      if (gen_plus < 0) gen_plus = gen_n / 2;
      if (gen_minus < 0) gen_minus = gen_n - gen_plus;
      json j;
      if (gen_kind == "random") {
        j = pair_to_json(random_pair(gen_n, gen_plus, gen_minus, gen_c.seed));
      } else if (gen_kind == "planted-crossing") {
        j = pair_to_json(planted_crossing_pair(gen_n, gen_plus, gen_minus, gen_mu, gen_lambda, gen_c.seed));
      } else if (gen_kind == "planted-simple") {
        const PlantedTriplet p = planted_simple_pair(gen_n, gen_plus, gen_minus, gen_mu, gen_lambda, gen_c.seed);
        j = pair_to_json(p.pair);
        j["planted"] = triplet_to_json(p.triplet);
      } else if (gen_kind == "reference-simple") {
        j = pair_to_json(reference_simple_pair());
      } else if (gen_kind == "reference-multiple") {
        j = pair_to_json(reference_multiple_pair());
      } else if (gen_kind == "embedded-simple") {
        j = pair_to_json(embedded_simple_pair(gen_n));
      } else {
        j = pair_to_json(embedded_multiple_pair(gen_n));
      }
      emit_json(gen_c, j);
      return 0;
    }

    if (*solve_cmd) {
      const HermitianPair pair = load_pair(solve_c.pair);
      ComplexVector x0;
      if (!x0_file.empty()) {
        std::ifstream f(x0_file);
        json j;
        try {
          j = json::parse(f);
        } catch (const json::exception& e) {
          throw Error(ErrorKind::ParseError, x0_file + ": " + e.what());
        }
        x0 = j.is_object() ? vector_from_json(j.at("x"), "x") : vector_from_json(j, "x0");
      } else if (x0_auto) {
        x0 = auto_start(pair, mu0, lambda0);
      } else {
        throw Error(ErrorKind::InvalidArgument, "one of --x0 or --x0-auto is required");
      }
      std::optional<Reference> ref;
      if (!reference_file.empty()) {
        const Triplet r = load_triplet(reference_file);
        ref = Reference{r.mu, r.lambda, eigvec_set(pair, r.mu, r.lambda)};
      }
      const RqiTrace trace = solve(pair, Triplet::normalized(mu0, lambda0, x0), solve_opts, ref);
      if (solve_c.format == "csv")
        emit_to(solve_c, [&](std::ostream& out) { write_trace_csv(trace, out); });
      else
        emit_json(solve_c, trace_to_json(trace, solve_opts));
      return trace.status == SolveStatus::Converged ? 0 : 1;
    }

    if (*cls) {
      const HermitianPair pair = load_pair(cls_c.pair);
      emit_json(cls_c, classification_to_json(classify(pair, cls_mu, cls_lambda)));
      return 0;
    }

    if (*cur) {
      const HermitianPair pair = load_pair(cur_c.pair);
      const EigencurveGrid grid = trace_curves(pair, cur_lo, cur_hi, cur_grid);
      if (cur_c.format == "csv") {
        emit_to(cur_c, [&](std::ostream& out) { write_grid_csv(grid, out, cur_vectors); });
      } else {
        json mus = json::array(), curves = json::array();
        for (Eigen::Index i = 0; i < pair.n(); ++i) curves.push_back(json::array());
        for (const CurvePoint& p : grid.points) {
          mus.push_back(p.mu);
          for (Eigen::Index i = 0; i < pair.n(); ++i) curves[static_cast<std::size_t>(i)].push_back(p.values(i));
        }
        emit_json(cur_c, {{"matched", grid.matched},
                          {"min_overlap", grid.min_overlap},
                          {"mu", std::move(mus)},
                          {"curves", std::move(curves)}});
      }
      return 0;
    }

    if (*ora) {
      const HermitianPair pair = load_pair(ora_c.pair);
      const OracleReport report = find_all(pair, ora_lo, ora_hi, ora_grid);
      if (ora_c.format == "csv")
        emit_to(ora_c, [&](std::ostream& out) { write_oracle_csv(report, out); });
      else
        emit_json(ora_c, oracle_to_json(report, ora_lo, ora_hi, ora_grid));
      return 0;
    }

    if (*st) {
      const HermitianPair pair = load_pair(st_c.pair);
      const Target target = make_target(pair, st_mu, st_lambda);
      if (st_eps.empty()) st_eps = default_eps(st_kind);
      const StudyOptions opts{st_trials, st_c.seed};
      bool pass = false;
      if (st_kind == "conditioning") {
        const ConditioningStudy s = conditioning_study(pair, target, st_eps, opts);
        pass = s.pass();
        if (st_c.format == "csv")
          emit_to(st_c, [&](std::ostream& out) { write_study_csv(s, out); });
        else
          emit_json(st_c, study_to_json(s));
      } else {
        const ScalingStudy s = st_kind == "ritz" ? ritz_approx_study(pair, target, st_eps, opts)
                                                 : scaling_study(pair, target, st_eps, opts);
        pass = s.pass();
        if (st_c.format == "csv")
          emit_to(st_c, [&](std::ostream& out) { write_study_csv(s, out); });
        else
          emit_json(st_c, study_to_json(s));
      }
      return pass ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
