#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "evp2d_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(EVP2D_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string path_arg(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen-pair, oracle and classify") {
  const fs::path dir = scratch();
  const fs::path pair = dir / "simple.json", hits = dir / "hits.json", cls = dir / "cls.json";
  REQUIRE(run("gen-pair --kind reference-simple --out " + path_arg(pair)) == 0);
  REQUIRE(run("oracle --pair " + path_arg(pair) + " --mu-lo -1 --mu-hi 1 --grid 64 --out " + path_arg(hits)) == 0);
  const json h = json::parse(slurp(hits));
  REQUIRE(h["hits"].size() == 2);
  for (const json& hit : h["hits"]) CHECK(std::abs(hit["mu"].get<double>()) < 1e-10);
  CHECK(h.contains("verdicts"));

  REQUIRE(run("classify --pair " + path_arg(pair) + " --mu 0 --lambda 1 --out " + path_arg(cls)) == 0);
  CHECK(json::parse(slurp(cls))["kind"] == "NonsingularSimple");
}

TEST_CASE("solve writes a trace and signals convergence") {
  const fs::path dir = scratch();
  const fs::path pair = dir / "emb.json", trace = dir / "trace.json", csv = dir / "trace.csv";
  REQUIRE(run("gen-pair --kind embedded-simple --n 6 --out " + path_arg(pair)) == 0);
  CHECK(run("solve --pair " + path_arg(pair) + " --mu0 0.01 --lambda0 0.99 --x0-auto --out " + path_arg(trace)) == 0);
  const json t = json::parse(slurp(trace));
  CHECK(t["status"] == "Converged");
  CHECK(t["iterates"].size() >= 2);
  CHECK(t["verdicts"][0]["pass"] == true);
  CHECK(run("solve --pair " + path_arg(pair) + " --mu0 0.01 --lambda0 0.99 --x0-auto --format csv --out " +
            path_arg(csv)) == 0);
  CHECK(slurp(csv).rfind("k,mu,lambda,res_norm", 0) == 0);
  CHECK(run("solve --pair " + path_arg(pair) + " --mu0 0.01 --lambda0 0.99 --x0-auto --max-iter 0 --out " +
            path_arg(trace)) == 1);
}

TEST_CASE("input errors exit with 2") {
  const fs::path dir = scratch();
  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << "{ not json";
  CHECK(run("classify --pair " + path_arg(bad) + " --mu 0 --lambda 1") == 2);
  CHECK(run("classify --pair " + path_arg(dir / "missing.json") + " --mu 0 --lambda 1") == 2);
  CHECK(run("no-such-command") == 2);
  const fs::path pair = dir / "simple2.json";
  REQUIRE(run("gen-pair --kind reference-simple --out " + path_arg(pair)) == 0);
  CHECK(run("study scaling --pair " + path_arg(pair) + " --mu 0 --lambda 1 --eps 0.01") == 2);
  CHECK(run("classify --pair " + path_arg(pair) + " --mu 0 --lambda 7") == 2);
}

TEST_CASE("identical invocations give identical reports") {
  const fs::path dir = scratch();
  const fs::path pair = dir / "rand.json", a = dir / "a.json", b = dir / "b.json";
  REQUIRE(run("gen-pair --kind embedded-simple --n 8 --out " + path_arg(pair)) == 0);
  const std::string args =
      "study scaling --pair " + path_arg(pair) + " --mu 0 --lambda 1 --eps 1e-2 3e-3 1e-3 --trials 5 --seed 9 --out ";
  run(args + path_arg(a));
  run(args + path_arg(b));
  REQUIRE(fs::exists(a));
  CHECK(slurp(a) == slurp(b));
  const json r = json::parse(slurp(a));
  CHECK(r["seed"] == 9);
  CHECK(r.contains("verdicts"));

  const fs::path g1 = dir / "g1.json", g2 = dir / "g2.json";
  run("gen-pair --kind random --n 10 --seed 4 --out " + path_arg(g1));
  run("gen-pair --kind random --n 10 --seed 4 --out " + path_arg(g2));
  CHECK(slurp(g1) == slurp(g2));
}

}  // TEST_SUITE
