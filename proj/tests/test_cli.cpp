#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ee/config.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = EE_CONFIG_DIR;

fs::path workdir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ee_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string("\"") + EE_BINARY + "\" " + args + " > \"" +
                          (dir / "stdout.txt").string() + "\" 2> \"" + (dir / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(dir / "stdout.txt");
  r.err = slurp(dir / "stderr.txt");
  return r;
}

fs::path write_config(const fs::path& dir, const json& j, const std::string& name = "config.json") {
  const fs::path p = dir / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

json read(const fs::path& p) { return json::parse(slurp(p)); }

// Compares two reports number by number, ignoring timings.
double max_relative_difference(const json& a, const json& b, const std::string& path = "") {
  if (path == "/timings") return 0.0;
  if (a.type() != b.type() && !(a.is_number() && b.is_number())) return INFINITY;
  if (a.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
    return x == y ? 0.0 : std::abs(x - y) / scale;
  }
  if (a.is_object()) {
    if (a.size() != b.size()) return INFINITY;
    double d = 0.0;
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) return INFINITY;
      d = std::max(d, max_relative_difference(it.value(), b.at(it.key()), path + "/" + it.key()));
    }
    return d;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return INFINITY;
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, max_relative_difference(a[i], b[i], path));
    return d;
  }
  return a == b ? 0.0 : INFINITY;
}

}  // namespace

TEST_CASE("solve: manufactured thermistor") {
  const fs::path dir = workdir("manufactured");
  const Run r = cli("solve --config \"" + (kConfigs / "thermistor_manufactured.json").string() + "\" --out \"" +
                       (dir / "out").string() + "\"",
                   dir);
  REQUIRE(r.code == 0);
  const json report = read(dir / "out" / "report.json");
  const double min_u = report["convergence"]["min_u"];
  CHECK(min_u >= -1e-6);
  CHECK(min_u <= 0.125 + 2e-3);
  CHECK(report["convergence"]["status"] == "converged");
  CHECK(report["schema_version"] == 1);
  CHECK(report["errors"]["u"]["max_nodal"].get<double>() <= 2e-3);
  for (const char* f : {"field_phi.csv", "field_u.csv", "field_phi.svg", "field_u.svg"})
    CHECK(fs::exists(dir / "out" / f));
  CHECK(slurp(dir / "out" / "field_u.csv").rfind("node_id,x,y,value\n", 0) == 0);
}

TEST_CASE("solve: equilibrium has no dissipation") {
  const fs::path dir = workdir("equilibrium");
  const Run r = cli("solve --config \"" + (kConfigs / "np_equilibrium.json").string() + "\" --out \"" +
                       (dir / "out").string() + "\"",
                   dir);
  REQUIRE(r.code == 0);
  const json report = read(dir / "out" / "report.json");
  CHECK(report["dissipation_mass"].get<double>() <= 1e-10);
  CHECK(report["entropy"]["residual"].get<double>() <= 1e-10);
}

TEST_CASE("solve: reports are deterministic and carry the config hash") {
  const fs::path dir = workdir("determinism");
  const fs::path cfg = kConfigs / "thermistor_small_data.json";
  REQUIRE(cli("solve --config \"" + cfg.string() + "\" --out \"" + (dir / "a").string() + "\"", dir).code == 0);
  REQUIRE(cli("solve --config \"" + cfg.string() + "\" --out \"" + (dir / "b").string() + "\"", dir).code == 0);
  const json a = read(dir / "a" / "report.json");
  const json b = read(dir / "b" / "report.json");
  CHECK(max_relative_difference(a, b) <= 1e-12);
  CHECK(a["config_hash"] == ee::config_hash(ee::read_json_file(cfg)));
  CHECK(a["config"] == ee::read_json_file(cfg));
}

TEST_CASE("solve: unknown coefficient name is a usage error naming the field") {
  const fs::path dir = workdir("unknown_coefficient");
  json j = ee::read_json_file(kConfigs / "thermistor_small_data.json");
  j["coefficients"]["sigma"]["name"] = "quartic";
  const Run r = cli("solve --config \"" + write_config(dir, j).string() + "\" --out \"" + (dir / "out").string() + "\"",
                   dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("coefficients.sigma") != std::string::npos);
}

TEST_CASE("solve: malformed JSON is a usage error with a position") {
  const fs::path dir = workdir("malformed");
  std::ofstream(dir / "bad.json") << "{\"schema_version\": 1,,}";
  const Run r = cli("solve --config \"" + (dir / "bad.json").string() + "\" --out \"" + (dir / "out").string() + "\"",
                   dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("line") != std::string::npos);
}

TEST_CASE("solve: non-convergence exits with 2") {
  const fs::path dir = workdir("stalled");
  json j = ee::read_json_file(kConfigs / "thermistor_small_data.json");
  j["solver"] = {{"max_iter", 1}};
  const Run r = cli("solve --config \"" + write_config(dir, j).string() + "\" --out \"" + (dir / "out").string() + "\"",
                   dir);
  CHECK(r.code == 2);
  CHECK(read(dir / "out" / "report.json")["convergence"]["status"] == "stalled");
}

TEST_CASE("usage errors") {
  const fs::path dir = workdir("usage");
  CHECK(cli("", dir).code == 1);
  CHECK(cli("verify --suite nonsense", dir).code == 1);
  CHECK(cli("solve --out x", dir).code == 1);
  CHECK(cli("solve --config /does/not/exist.json --out x", dir).code == 1);
}

TEST_CASE("study: manufactured sine orders") {
  const fs::path dir = workdir("study_sine");
  const Run r = cli("study --config \"" + (kConfigs / "manufactured_sine.json").string() + "\" --refine 3 --out \"" +
                       (dir / "out").string() + "\"",
                   dir);
  REQUIRE(r.code == 0);
  const json s = read(dir / "out" / "study.json");
  REQUIRE(s["rows"].size() == 3);
  REQUIRE(s["orders"].size() == 2);
  for (const json& o : s["orders"]) {
    CHECK(o["err_l2_u"].get<double>() >= 1.8);
    CHECK(o["err_l2_u"].get<double>() <= 2.2);
    CHECK(o["err_h1_u"].get<double>() >= 0.8);
    CHECK(o["err_h1_u"].get<double>() <= 1.2);
  }
  CHECK(fs::exists(dir / "out" / "study.csv"));
}

TEST_CASE("study: thermistor closed form") {
  const fs::path dir = workdir("study_thermistor");
  json j = ee::read_json_file(kConfigs / "thermistor_manufactured.json");
  j["mesh"]["nx"] = 8;
  j["mesh"]["ny"] = 8;
  const Run r = cli("study --config \"" + write_config(dir, j).string() + "\" --refine 3 --out \"" +
                       (dir / "out").string() + "\"",
                   dir);
  REQUIRE(r.code == 0);
  const json rows = read(dir / "out" / "study.json")["rows"];
  REQUIRE(rows.size() == 3);
  // The P1 solution of this one-dimensional problem is nodally exact, so the
  // error either shrinks by 3 per level or already sits at round-off.
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double prev = rows[k - 1]["err_max_u"], cur = rows[k]["err_max_u"];
    CHECK((cur <= prev / 3 || cur <= 1e-12));
  }
}

TEST_CASE("study: a single level is a usage error") {
  const fs::path dir = workdir("study_one");
  const Run r = cli("study --config \"" + (kConfigs / "manufactured_sine.json").string() + "\" --refine 1 --out \"" +
                       (dir / "out").string() + "\"",
                   dir);
  CHECK(r.code == 1);
}

TEST_CASE("sweep") {
  const fs::path dir = workdir("sweep");
  const Run r = cli("sweep --config \"" + (kConfigs / "thermistor_small_data.json").string() + "\" --grid \"" +
                       (kConfigs / "thermistor_voltage_grid.json").string() + "\" --out \"" + (dir / "out").string() +
                       "\"",
                   dir);
  REQUIRE(r.code == 0);
  const std::string summary = slurp(dir / "out" / "summary.csv");
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 9);
  CHECK(fs::exists(dir / "out" / "case_000" / "report.json"));
  CHECK(fs::exists(dir / "out" / "case_007" / "report.json"));
}

TEST_CASE("verify writes machine-readable results") {
  const fs::path dir = workdir("verify");
  const Run r = cli("verify --suite fem --out \"" + (dir / "out").string() + "\"", dir);
  CHECK(r.code == 0);
  const json res = read(dir / "out" / "results.json");
  CHECK(res["passed"] == true);
  CHECK(res["suite"] == "fem");
  CHECK(r.out.find("PASS") != std::string::npos);
}
