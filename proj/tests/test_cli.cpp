#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "moment_spectra/measure.hpp"
#include "moment_spectra/operators.hpp"
#include "moment_spectra/spectral.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace moment_spectra;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("cli_test_out") / name;
  fs::remove_all(dir);
  return dir;
}

int run_cli(std::vector<std::string> args, const fs::path& out) {
  args.push_back("--out");
  args.push_back(out.string());
  return cli::run(args);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

void manifest_complete(const fs::path& dir, const std::string& command) {
  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m["command"] == command);
  CHECK(m["tool_version"] == cli::kToolVersion);
  CHECK(m["wall_time_ms"].is_number_integer());
  CHECK(m.contains("inputs"));
  CHECK(m.contains("tolerances"));
  std::vector<std::string> listed = m["outputs"];
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name == "manifest.json") continue;
    CHECK_MESSAGE(std::find(listed.begin(), listed.end(), name) != listed.end(), name);
  }
  for (const std::string& name : listed) CHECK(fs::exists(dir / name));
}

}  // namespace

TEST_CASE("moments writes 1/(n+1) for Lebesgue measure") {
  const fs::path out = fresh_dir("moments");
  REQUIRE(run_cli({"moments", "--measure", "lebesgue", "--n", "8"}, out) == cli::kExitOk);
  const std::vector<std::string> rows = lines(slurp(out / "moments.csv"));
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == "n,mu_n,s_n,provenance");
  for (int n = 0; n < 8; ++n) {
    std::stringstream row(rows[n + 1]);
    std::string idx, mu;
    std::getline(row, idx, ',');
    std::getline(row, mu, ',');
    CHECK(std::stoi(idx) == n);
    CHECK(std::stod(mu) == 1.0 / (n + 1));
  }
  manifest_complete(out, "moments");
  const json m = json::parse(slurp(out / "manifest.json"));
  CHECK(m["inputs"]["measure"] == "lebesgue");
  CHECK(m["inputs"]["n"] == 8);
  CHECK(m["tolerances"]["quad-tol"] == 1e-13);
}

TEST_CASE("classify reports InL2 for every Dirac eigenvalue") {
  const fs::path out = fresh_dir("classify");
  REQUIRE(run_cli({"classify", "--measure", "dirac(0.5)", "--k", "0..5", "--n", "4096"}, out) ==
          cli::kExitOk);
  const json doc = json::parse(slurp(out / "classify.json"));
  REQUIRE(doc["verdicts"].size() == 6);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(doc["verdicts"][k]["k"] == k);
    CHECK(doc["verdicts"][k]["verdict"] == "InL2");
  }
  CHECK(doc["growth"]["bounded"] == true);
  manifest_complete(out, "classify");
}

TEST_CASE("pseudo writes a full grid that matches the library") {
  const fs::path out = fresh_dir("pseudo");
  REQUIRE(run_cli({"pseudo", "--measure", "lebesgue", "--window", "-0.5,2.5,-1.5,1.5", "--res",
                   "64", "--dim", "24"},
                  out) == cli::kExitOk);
  const std::vector<std::string> rows = lines(slurp(out / "pseudo.csv"));
  REQUIRE(rows.size() == 64 * 64 + 1);
  CHECK(rows[0] == "re,im,sigma_min");
  const DenseMatrix a = dense(TerracedOperator(
      WeightSequence::from_moments(moments(parse_measure("lebesgue"), 64)), 24));
  const PseudospectrumGrid oracle = pseudospectrum_grid(a, {-0.5, 2.5, -1.5, 1.5}, 64);
  CHECK(slurp(out / "pseudo.csv") == pseudospectrum_csv(oracle));
  const std::string svg = slurp(out / "pseudo.svg");
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  manifest_complete(out, "pseudo");
}

TEST_CASE("every subcommand produces its artifacts") {
  const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> cases = {
      {{"eigencheck", "--measure", "dirac(0.5)", "--k", "0..2", "--dim", "100"}, {"eigencheck.json"}},
      {{"adjoint-disc", "--measure", "lebesgue"}, {"adjoint_disc.json", "adjoint_disc.svg"}},
      {{"region", "--operator", "cesaro"}, {"region.json", "region.svg"}},
      {{"fov", "--operator", "hilbert", "--dim", "32", "--angles", "16"}, {"fov.csv", "fov.json", "fov.svg"}},
      {{"contraction", "--operator", "power:2", "--dim", "16"}, {"contraction.json"}},
      {{"invariance", "--operator", "cesaro", "--dim", "16", "--k", "1..3"}, {"invariance.json"}},
      {{"hilbert", "--columns", "0..4", "--dim", "5", "--dims", "16,32"}, {"hilbert.json"}},
      {{"bench", "--dims", "64,128", "--min-seconds", "0.001"}, {"bench.json"}},
  };
  for (const auto& [args, files] : cases) {
    CAPTURE(args[0]);
    const fs::path out = fresh_dir(args[0]);
    CHECK(run_cli(args, out) == cli::kExitOk);
    for (const std::string& f : files) CHECK(fs::exists(out / f));
    manifest_complete(out, args[0]);
  }
}

TEST_CASE("adjoint-disc JSON") {
  const fs::path out = fresh_dir("disc_none");
  REQUIRE(run_cli({"adjoint-disc", "--measure", "lebesgue(0.5)"}, out) == cli::kExitOk);
  CHECK(json::parse(slurp(out / "adjoint_disc.json"))["disc"].is_null());
  CHECK_FALSE(fs::exists(out / "adjoint_disc.svg"));
}

TEST_CASE("bench JSON schema") {
  const fs::path out = fresh_dir("bench_schema");
  REQUIRE(run_cli({"bench", "--dims", "32", "--min-seconds", "0.001"}, out) == cli::kExitOk);
  const json rows = json::parse(slurp(out / "bench.json"));
  REQUIRE(rows.size() == 4);
  for (const json& r : rows) {
    CHECK(r["dim"] == 32);
    CHECK(r["kernel"].is_string());
    CHECK(r["ns_per_apply"].is_number_integer());
  }
}

TEST_CASE("failed checks exit with 2 and still write the report") {
  const fs::path out = fresh_dir("failed");
  CHECK(run_cli({"eigencheck", "--measure", "lebesgue", "--k", "0", "--dim", "64"}, out) ==
        cli::kExitCheckFailed);
  const json doc = json::parse(slurp(out / "eigencheck.json"));
  CHECK(doc["reports"][0]["pass"] == false);
  manifest_complete(out, "eigencheck");

  const fs::path shifted = fresh_dir("failed_tol");
  CHECK(run_cli({"fov", "--operator", "cesaro", "--dim", "8", "--psd-tol", "-1"}, shifted) ==
        cli::kExitCheckFailed);
}

TEST_CASE("usage and input errors exit with 1") {
  const fs::path out = fresh_dir("errors");
  CHECK(run_cli({"frobnicate"}, out) == cli::kExitInputError);
  CHECK(cli::run(std::vector<std::string>{}) == cli::kExitInputError);
  CHECK(run_cli({"moments", "--measure", "dirac("}, out) == cli::kExitInputError);
  CHECK(run_cli({"moments", "--measure", "dirac(2)"}, out) == cli::kExitInputError);
  CHECK(run_cli({"moments", "--no-such-flag", "1"}, out) == cli::kExitInputError);
  CHECK(run_cli({"classify", "--k", "5..2"}, out) == cli::kExitInputError);
  CHECK(run_cli({"pseudo", "--window", "1,0,0,1", "--dim", "4"}, out) == cli::kExitInputError);
  CHECK(run_cli({"fov", "--operator", "nonsense"}, out) == cli::kExitInputError);
  CHECK(run_cli({"region", "--operator", "leibowitz"}, out) == cli::kExitInputError);
  CHECK_FALSE(fs::exists(out / "manifest.json"));
  CHECK(cli::run(std::vector<std::string>{"--help"}) == cli::kExitOk);
}

TEST_CASE("config file supplies defaults and flags override it") {
  const fs::path dir = fresh_dir("config");
  fs::create_directories(dir);
  const fs::path config = dir / "run.conf";
  {
    std::ofstream f(config);
    f << "# defaults\nmeasure = dirac(0.5)\nn = 3\n\nquad-tol = 1e-12\n";
  }
  const fs::path out = dir / "out";
  REQUIRE(run_cli({"moments", "--config", config.string(), "--n", "5"}, out) == cli::kExitOk);
  const json m = json::parse(slurp(out / "manifest.json"));
  CHECK(m["inputs"]["measure"] == "dirac(0.5)");
  CHECK(m["inputs"]["n"] == 5);
  CHECK(m["inputs"]["config"] == config.string());
  CHECK(m["tolerances"]["quad-tol"] == 1e-12);
  CHECK(lines(slurp(out / "moments.csv")).size() == 6);

  {
    std::ofstream f(config);
    f << "this line has no equals sign\n";
  }
  CHECK(run_cli({"moments", "--config", config.string()}, dir / "bad") == cli::kExitInputError);
  CHECK(run_cli({"moments", "--config", (dir / "missing.conf").string()}, dir / "bad") ==
        cli::kExitInputError);
}

TEST_CASE("repeated runs produce identical artifacts") {
  const std::vector<std::string> args = {"classify", "--measure", "dirac(0)+0.5*lebesgue", "--k", "0..3"};
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  REQUIRE(run_cli(args, a) == cli::kExitOk);
  REQUIRE(run_cli(args, b) == cli::kExitOk);
  CHECK(slurp(a / "classify.json") == slurp(b / "classify.json"));
}
