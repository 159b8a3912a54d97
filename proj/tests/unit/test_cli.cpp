#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "puretone/cli.hpp"
#include "puretone/errors.hpp"
#include "puretone/io.hpp"
#include "puretone/numerics.hpp"

using namespace puretone;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "puretone");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("profile parsing") {
  const json doc = json::parse(R"({"kind": "pwc", "ell": 1.0, "pbar": 2.0, "eos": {"gamma": 1.67},
      "levels": [{"L": 0.25, "sigma": 1.0}, {"L": 0.75, "sigma": 2.0}]})");
  const QuietState st = parse_profile(doc);
  CHECK(st.p_bar == 2.0);
  CHECK(st.eos.gamma == 1.67);
  CHECK(st.profile.sigma(0.5) == 2.0);
  // A given instead of σ maps back to the same σ.
  const double A = st.coefficient(0.5);
  json alt = doc;
  alt["levels"][1].erase("sigma");
  alt["levels"][1]["A"] = A;
  CHECK(parse_profile(alt).profile.sigma(0.5) == doctest::Approx(2.0).epsilon(1e-14));
  // Round trip through JSON and a stable hash.
  const QuietState again = parse_profile(profile_to_json(st));
  CHECK(profile_hash(again) == profile_hash(st));
  CHECK(profile_hash(st).size() == 64);
  json bad = doc;
  bad["ell"] = 2.0;
  CHECK_THROWS_AS(parse_profile(bad), IoError);
  bad = doc;
  bad["levels"][0]["sigma"] = -1;
  CHECK_THROWS_AS(parse_profile(bad), IoError);
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {kPi, 1e-300, -2.5e17, 0.1})
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("eigen on the constant profile and CSV parse-back") {
  TempDir d("puretone_cli_eigen");
  const Result r = run({"eigen", "--profile", "builtin:constant", "--k", "1:10", "--out-dir", d.str()});
  REQUIRE(r.code == 0);
  const CsvTable t = read_csv(d.path / "eigen.csv");
  CHECK(t.header == std::vector<std::string>{"k", "omega", "T", "kappa_residual"});
  REQUIRE(t.rows.size() == 10);
  for (int k = 1; k <= 10; ++k) {
    CHECK(std::stod(t.rows[k - 1][1]) == doctest::Approx(k * kPi / 2).epsilon(1e-12));
    CHECK(std::stod(t.rows[k - 1][2]) == doctest::Approx(4.0).epsilon(1e-12));
  }
  const json m = json::parse(slurp(d.path / "eigen.manifest.json"));
  CHECK(m["command"] == "eigen");
  CHECK(m["config"]["eos"]["gamma"] == 1.4);
  CHECK(m["profile_hash"].get<std::string>().size() == 64);
}

TEST_CASE("missing profile file exits 2 and names the path") {
  const Result r = run({"eigen", "--profile", "/nonexistent/profile.json"});
  CHECK(r.code == 2);
  const json e = json::parse(r.err);
  CHECK(e["exit_code"] == 2);
  CHECK(e["error"].get<std::string>().find("/nonexistent/profile.json") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"eigen", "--chi", "sideways", "--profile", "builtin:constant"}).code == 2);
  CHECK(run({"eigen"}).code == 2);
  CHECK(run({"perturb", "--profile", "builtin:two-level", "--k", "1:3"}).code == 2);
}

TEST_CASE("perturb on the constant profile is a resonance gate failure") {
  TempDir d("puretone_cli_perturb");
  const Result r = run({"perturb", "--profile", "builtin:constant", "--out-dir", d.str()});
  CHECK(r.code == 3);
  const json e = json::parse(r.err);
  CHECK(e["kind"] == "resonance");
  CHECK(e["error"].get<std::string>().find("resonant profile") != std::string::npos);
}

TEST_CASE("quiet tile is a constant field") {
  TempDir d("puretone_cli_tile");
  const Result r = run({"tile", "--profile", "builtin:two-level", "--alpha", "0", "--nx", "8",
                        "--nt", "16", "--out-dir", d.str()});
  REQUIRE(r.code == 0);
  const TileField t = read_tile_binary(d.path / "tile.bin");
  for (double p : t.p) CHECK(p == 1.0);
  for (double u : t.u) CHECK(u == 0.0);
  CHECK(t.period_x == doctest::Approx(4.0));
}

TEST_CASE("verify exits 0") {
  TempDir d("puretone_cli_verify");
  CHECK(run({"verify", "--out-dir", d.str()}).code == 0);
  CHECK(run({"verify", "--chi", "acoustic", "--out-dir", d.str()}).code == 0);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  TempDir a("puretone_cli_det_a"), b("puretone_cli_det_b");
  for (const auto* dir : {&a, &b}) {
    const std::string threads = dir == &a ? "1" : "2";
    REQUIRE(run({"genericity", "--samples", "200", "--seed", "7", "--threads", threads,
                 "--out-dir", dir->str()}).code == 0);
    REQUIRE(run({"resonance", "--profile", "builtin:two-level", "--out-dir", dir->str()}).code == 0);
    REQUIRE(run({"perturb", "--profile", "builtin:two-level", "--alpha-schedule", "1e-4,2e-4",
                 "--modes", "16", "--out-dir", dir->str()}).code == 0);
  }
  for (const char* f : {"genericity_samples.csv", "genericity_histogram.csv",
                        "genericity_stats.json", "resonance.json", "divisors.csv", "branch.json"})
    CHECK_MESSAGE(slurp(a.path / f) == slurp(b.path / f), f);
}

TEST_CASE("resonance and mode outputs") {
  TempDir d("puretone_cli_res");
  REQUIRE(run({"resonance", "--profile", "builtin:two-level", "--jmax", "64", "--out-dir", d.str()}).code == 0);
  const json r = json::parse(slurp(d.path / "resonance.json"));
  CHECK(r["verdict"] == "nonresonant");
  CHECK(r["argmin_j"] == 23);
  REQUIRE(run({"mode", "--profile", "builtin:two-level", "--nx", "32", "--out-dir", d.str()}).code == 0);
  const CsvTable m = read_csv(d.path / "mode.csv");
  CHECK(m.rows.size() == 33);
  REQUIRE(run({"divisors", "--profile", "builtin:constant", "--jmax", "8", "--out-dir", d.str()}).code == 0);
  for (const auto& row : read_csv(d.path / "divisors.csv").rows) CHECK(std::abs(std::stod(row[1])) < 1e-12);
}
