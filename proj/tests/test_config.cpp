#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <variant>

#include <nlohmann/json.hpp>

#include "aspinn/config.hpp"
#include "aspinn/errors.hpp"

using namespace aspinn;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// tests are launched from the build tree; configs live in the source tree
fs::path repo_root() {
  fs::path p = fs::current_path();
  while (!p.empty() && !fs::exists(p / "configs" / "table1_smooth1d.json")) {
    if (p == p.parent_path()) break;
    p = p.parent_path();
  }
  return p;
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << text;
  return path;
}

bool has_diag(const std::vector<Diagnostic>& diags, const std::string& where) {
  for (const auto& d : diags)
    if (d.where == where) return true;
  return false;
}

}  // namespace

TEST_CASE("shipped presets parse and validate cleanly") {
  const fs::path root = repo_root();
  REQUIRE(fs::exists(root / "configs"));
  for (const char* name :
       {"table1_smooth1d.json", "table2_multiscale1d.json", "table3_smooth2d.json",
        "table4_highcontrast2d.json", "quick_smooth1d.json"}) {
    const auto diags = check_config_file(root / "configs" / name);
    CHECK_MESSAGE(diags.empty(), name);
    const AnyConfig cfg = load_config(root / "configs" / name);
    CHECK(std::holds_alternative<ExperimentConfig>(cfg));
  }
  for (const char* name : {"oracle_1d.json", "oracle_2d.json"}) {
    const AnyConfig cfg = load_config(root / "configs" / name);
    CHECK(std::holds_alternative<OracleConfig>(cfg));
  }
}

TEST_CASE("tau bound diagnostic names the limit") {
  ExperimentConfig c;
  c.problem_id = "smooth1d";
  c.per_axis = 10;
  c.tau = 0.75;  // Nc = 2 -> bound 0.5
  c.seeds = {0};
  c.out_dir = "x";
  const auto diags = validate(c);
  CHECK(has_diag(diags, "/solver/tau"));
  bool mentions_bound = false;
  for (const auto& d : diags)
    if (d.where == "/solver/tau" && d.message.find("1/Nc") != std::string::npos)
      mentions_bound = true;
  CHECK(mentions_bound);
}

TEST_CASE("negative epoch count and empty seeds are rejected") {
  ExperimentConfig c;
  c.problem_id = "smooth1d";
  c.per_axis = 4;
  c.local_epochs = -5;
  c.out_dir = "x";
  c.seeds = {};
  const auto diags = validate(c);
  CHECK(has_diag(diags, "/epochs/local"));
  CHECK(has_diag(diags, "/seeds"));
}

TEST_CASE("auto tau resolves to 1/Nc") {
  ExperimentConfig c;
  c.problem_id = "smooth1d";
  c.per_axis = 10;
  CHECK(c.resolved_tau() == 0.5);
  c.problem_id = "smooth2d";
  CHECK(c.resolved_tau() == 0.25);
  c.per_axis = 1;
  CHECK(c.resolved_tau() == 1.0);
  c.level = SolverKind::single;
  CHECK(c.resolved_tau() == 1.0);
}

TEST_CASE("config round-trips through json") {
  const fs::path root = repo_root();
  const AnyConfig loaded = load_config(root / "configs" / "table1_smooth1d.json");
  const auto& c = std::get<ExperimentConfig>(loaded);

  const json j = to_json(c);
  const fs::path copy = write_temp("aspinn_roundtrip.json", j.dump(2));
  const AnyConfig reloaded = load_config(copy);
  const auto& c2 = std::get<ExperimentConfig>(reloaded);

  CHECK(c2.name == c.name);
  CHECK(c2.problem_id == c.problem_id);
  CHECK(c2.per_axis == c.per_axis);
  CHECK(c2.overlap_ratio == c.overlap_ratio);
  CHECK(c2.tau == c.tau);
  CHECK(c2.max_outer == c.max_outer);
  CHECK(c2.seeds == c.seeds);
  CHECK(to_json(c2) == j);
  fs::remove(copy);
}

TEST_CASE("parse failures and bad files produce diagnostics, not partial configs") {
  const fs::path bad = write_temp("aspinn_bad.json", "{ not json");
  const auto diags = check_config_file(bad);
  REQUIRE(!diags.empty());
  CHECK(diags[0].message.find("parse error") != std::string::npos);
  CHECK_THROWS_AS(load_config(bad), ConfigError);
  fs::remove(bad);

  CHECK_THROWS_AS(load_config("/definitely/not/here.json"), ConfigError);

  const fs::path wrong_kind = write_temp("aspinn_kind.json", R"({"kind": "mystery"})");
  CHECK(has_diag(check_config_file(wrong_kind), "/kind"));
  fs::remove(wrong_kind);
}

TEST_CASE("missing required fields are reported with their paths") {
  const fs::path missing = write_temp("aspinn_missing.json", R"({"kind": "experiment"})");
  const auto diags = check_config_file(missing);
  CHECK(has_diag(diags, "/problem/id"));
  CHECK(has_diag(diags, "/seeds"));
  CHECK(has_diag(diags, "/out_dir"));
  fs::remove(missing);
}
