#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "ldp/commands.hpp"
#include "ldp/config.hpp"
#include "ldp/error.hpp"
#include "ldp/io.hpp"

using namespace ldp;

namespace {

// A fast configuration: short horizon, coarse grid.
Config quick(const std::string& kind) {
  Config c = Config::defaults();
  c.set("model.kind", kind);
  c.set("model.initial", kind == "fvp" ? "uniform-cdf(0,1)" : "gaussian-cdf(0,1)");
  c.set("model.epsilon", "0.05");
  c.set("grid.L", "4");
  c.set("grid.dx", "0.1");
  c.set("grid.nt", "50");
  c.set("grid.na", "8");
  c.set("experiment.realizations", "6");
  c.set("experiment.epsilons", "0.05,0.02");
  return c;
}

}  // namespace

TEST_CASE("number formatting and tables") {
  CHECK(fmt(0.1) == "0.10000000000000001");
  CHECK(std::stod(fmt(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(fmt(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(fmt(std::size_t{42}) == "42");

  Table t{{"a", "b"}, {}};
  t.add({"1", "2"});
  CHECK(t.to_csv() == "a,b\n1,2\n");
  CHECK_THROWS_AS(t.add({"1"}), ValidationError);
}

TEST_CASE("content hashes") {
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("config merging") {
  Config c = Config::defaults();
  CHECK(c.number("grid.L") == 8.0);
  CHECK(c.type_name("grid.nt") == "UINT");
  CHECK(c.type_name("experiment.epsilons") == "LIST");

  c.merge(nlohmann::json::parse(R"({"grid": {"L": 4, "nt": 20}, "model.epsilon": 0.5})"));
  CHECK(c.number("grid.L") == 4.0);
  CHECK(c.count("grid.nt") == 20);
  CHECK(c.number("model.epsilon") == 0.5);

  c.set("experiment.epsilons", "0.2,0.1");
  CHECK(c.list("experiment.epsilons") == std::vector<double>{0.2, 0.1});
  c.set("experiment.bracket", "1");
  CHECK(c.flag("experiment.bracket"));

  CHECK_THROWS_AS(c.merge(nlohmann::json::parse(R"({"grid": {"Lx": 4}})")), ValidationError);
  CHECK_THROWS_AS(c.merge(nlohmann::json::parse(R"({"grid.nt": -3})")), ValidationError);
  CHECK_THROWS_AS(c.merge(nlohmann::json::parse(R"({"model.kind": 3})")), ValidationError);
  CHECK_THROWS_AS(c.set("grid.dx", "fast"), ValidationError);
  CHECK_THROWS_AS(c.set("experiment.snapshots", "maybe"), ValidationError);

  const auto path = std::filesystem::temp_directory_path() / "ldp_config_test.json";
  write_text(path, R"({"noise": {"seed": 9}})");
  c.merge_file(path);
  CHECK(c.seed("noise.seed") == 9);
  write_text(path, "{broken");
  CHECK_THROWS_AS(c.merge_file(path), ValidationError);
  std::filesystem::remove(path);
}

TEST_CASE("resolving a config") {
  Config c = Config::defaults();
  Setup s = resolve(c);
  CHECK(s.model.kind == ModelKind::fvp);
  CHECK(s.grid.bc == Boundary::dirichlet_pinned);
  CHECK(s.grid.a_min == 0.0);
  CHECK(s.grid.a_max == 1.0);
  CHECK(s.grid.ny == 321);

  c.set("model.kind", "sbm");
  c.set("model.initial", "gaussian-cdf(0,1)");
  s = resolve(c);
  CHECK(s.grid.bc == Boundary::neumann);
  CHECK(s.grid.a_min < 0.0);
  CHECK(s.grid.a_max > 1.0);
  CHECK(s.model.a_min == s.grid.a_min);

  c.set("noise.window", "-2,3");
  s = resolve(c);
  CHECK(s.grid.a_min == -2.0);
  CHECK(s.grid.a_max == 3.0);
  c.set("noise.window", "-2");
  CHECK_THROWS_AS(resolve(c), ValidationError);
}

TEST_CASE("control tables round trip") {
  Grid g;
  g.nt = 4;
  g.na = 3;
  Control h(g);
  for (std::size_t j = 0; j < h.values.size(); ++j) h.values[j] = std::sin(1.7 * j) / 3.0;
  const Control back = parse_control_csv(control_csv(h, g), g);
  CHECK(back.values == h.values);
  Grid other = g;
  other.na = 4;
  CHECK_THROWS_AS(parse_control_csv(control_csv(h, g), other), ValidationError);
}

TEST_CASE("commands are deterministic") {
  for (const std::string name : {"simulate", "convergence", "metrics"}) {
    CAPTURE(name);
    const Config c = quick("fvp");
    const CommandOutput a = run_command(name, c);
    Config threaded = c;
    threaded.set("experiment.threads", "3");
    const CommandOutput b = run_command(name, threaded);
    CHECK_FALSE(a.files.empty());
    CHECK(outputs_hash(a) == outputs_hash(b));
  }
  const CommandOutput sbm = run_command("simulate", quick("sbm"));
  CHECK(sbm.files.front().first == "terminal.csv");
  CHECK_THROWS_AS(run_command("fly", quick("fvp")), ValidationError);
}

TEST_CASE("run summaries") {
  const Config c = quick("fvp");
  const CommandOutput out = run_command("simulate", c);
  const auto dir = std::filesystem::temp_directory_path() / "ldp_run_test";
  const auto summary = write_run(dir, "simulate", c, out, 0.5);
  CHECK(std::filesystem::exists(dir / "terminal.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));
  CHECK(summary["command"] == "simulate");
  CHECK(summary["seed"] == 1);
  CHECK(summary["config_hash"] == git_blob_hash(c.dump()));
  CHECK(summary["content_hash"] == outputs_hash(out));
  CHECK(summary["outputs"]["terminal.csv"] == git_blob_hash(read_text(dir / "terminal.csv")));
  std::filesystem::remove_all(dir);
}
