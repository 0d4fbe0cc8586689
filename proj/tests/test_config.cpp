#include "srdkf/config.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace srdkf;
using namespace srdkf::config;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("srdkf_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const std::string& stdout_file = "/dev/null") {
  const std::string cmd = std::string(SRDKF_CLI) + " " + args + " >" + stdout_file + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

json minimal() {
  return json::parse(R"({"graph": {"n_receivers": 2, "edges": [[1, 2]]}, "duration_s": 10})");
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("decimal unit conversion") {
  CHECK(from_unit(6.0, 1e-9) == 6e-9);
  CHECK(from_unit(26.5, 1e-6) == 26.5e-6);
  CHECK(from_unit(3.0, 1e-12) == 3e-12);
  CHECK(from_unit(6.0, 1e-18) == 6e-18);
  CHECK(per_unit(1e-6) == 1e6);
  CHECK(per_unit(1e-18) == 1e18);
  CHECK(per_unit(1.0) == 1.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (double scale : {1e-6, 1e-9, 1e-12, 1e-18}) {
    for (int t = 0; t < 2000; ++t) {
      const double si = from_unit(u(rng), scale);
      CHECK(from_unit(to_unit(si, scale), scale) == si);
    }
  }
}

TEST_CASE("presets survive a JSON round trip") {
  for (const auto& s : {netsim::preset_coordinated(), netsim::preset_none(), netsim::preset_robustness_cell(45e-6, 4)}) {
    const auto j = scenario_to_json(s);
    const auto back = scenario_from_json(j);
    CHECK(equivalent(s, back));
    CHECK(scenario_to_json(back) == j);
    // Through text as well.
    CHECK(equivalent(s, scenario_from_json(json::parse(j.dump()))));
  }
}

TEST_CASE("file units") {
  const auto j = scenario_to_json(netsim::preset_coordinated());
  CHECK(j["alert_limit_us"] == 26.5);
  CHECK(j["attacks"][0]["victim"] == 5);
  CHECK(j["attacks"][0]["rate_nsps"] == 100.0);
  CHECK(j["graph"]["edges"][0] == json::array({1, 2}));

  auto m = minimal();
  m["attacks"] = json::parse(R"([{"victim": 2, "kind": "meaconing", "start_s": 1, "end_s": 5, "bias_us": 30}])");
  const auto s = scenario_from_json(m);
  REQUIRE(s.attacks.size() == 1);
  CHECK(s.attacks[0].victim == 1);
  CHECK(s.attacks[0].magnitude == 30e-6);
  CHECK(s.graph.adjacency[0][1]);
  CHECK(s.duration_s == 10.0);
  // Defaults for everything else.
  CHECK(s.psi == 0.3);
  CHECK(s.n_satellites == 8);
  CHECK(equivalent(s, scenario_from_json(scenario_to_json(s))));
}

TEST_CASE("strict parsing") {
  auto unknown = minimal();
  unknown["filter"] = {{"max_generator", 4}};
  CHECK_THROWS_WITH_AS(scenario_from_json(unknown), doctest::Contains("filter.max_generator"), netsim::ConfigError);

  auto top = minimal();
  top["gama"] = 3;
  CHECK_THROWS_WITH_AS(scenario_from_json(top), doctest::Contains("gama"), netsim::ConfigError);

  auto wrong_type = minimal();
  wrong_type["psi"] = "high";
  CHECK_THROWS_WITH_AS(scenario_from_json(wrong_type), doctest::Contains("psi"), netsim::ConfigError);

  auto bad_victim = minimal();
  bad_victim["attacks"] = json::parse(R"([{"victim": 3, "kind": "ramp", "start_s": 1, "end_s": 5, "rate_nsps": 1}])");
  CHECK_THROWS_WITH_AS(scenario_from_json(bad_victim), doctest::Contains("attacks[0].victim"), netsim::ConfigError);

  auto bad_kind = minimal();
  bad_kind["attacks"] = json::parse(R"([{"victim": 1, "kind": "jam", "start_s": 1, "end_s": 5}])");
  CHECK_THROWS_AS(scenario_from_json(bad_kind), netsim::ConfigError);

  // Every missing required field in one message.
  try {
    (void)scenario_from_json(json::object());
    FAIL("expected ConfigError");
  } catch (const netsim::ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("graph") != std::string::npos);
    CHECK(msg.find("duration_s") != std::string::npos);
  }
  CHECK_THROWS_AS(scenario_from_json(json::array()), netsim::ConfigError);
}

TEST_CASE("scenario files") {
  const auto dir = scratch("files");
  write_file(dir / "empty.json", "  \n");
  CHECK_THROWS_WITH_AS(load_scenario(dir / "empty.json"), doctest::Contains("duration_s"), netsim::ConfigError);
  write_file(dir / "broken.json", "{\n  \"duration_s\": 10,\n  oops\n}");
  CHECK_THROWS_WITH_AS(load_scenario(dir / "broken.json"), doctest::Contains("broken.json:3:"), netsim::ConfigError);
  CHECK_THROWS(load_scenario(dir / "missing.json"));
  write_file(dir / "ok.json", minimal().dump());
  CHECK(load_scenario(dir / "ok.json").graph.n_receivers == 2);
  CHECK_THROWS(write_file(dir / "no" / "such" / "dir.txt", "x"));
}

TEST_CASE("timeseries layout") {
  auto s = netsim::preset_coordinated();
  s.duration_s = 12.0;
  const auto log = netsim::run_scenario(s);
  std::ostringstream out;
  write_timeseries(out, log);
  const auto lines = split(out.str(), '\n');
  REQUIRE(lines.size() == 1 + 12 * 7 * 3 + 1);
  CHECK(lines.front() == kTimeseriesHeader);
  CHECK(lines.front() == "k,t_s,rx,truth_T_us,truth_Tdot_nsps,est,dT_us,dTdot_nsps,alpha,risk");
  CHECK(lines.back().empty());

  const auto summary = summary_to_json(log, s, netsim::summarize(log, s));
  std::vector<std::vector<double>> max_dt(7, std::vector<double>(3, 0.0));
  const std::vector<std::string> names{"srdkf", "pvdkf", "akf"};
  for (std::size_t r = 1; r + 1 < lines.size(); ++r) {
    const auto f = split(lines[r], ',');
    REQUIRE(f.size() == 10);
    const std::size_t row = r - 1;
    CHECK(std::stoi(f[0]) == static_cast<int>(row / 21));
    CHECK(std::stoi(f[2]) == static_cast<int>(row / 3 % 7) + 1);
    CHECK(f[5] == names[row % 3]);
    if (f[5] == "srdkf") {
      CHECK_FALSE(f[8].empty());
      CHECK_FALSE(f[9].empty());
    } else {
      CHECK(f[8].empty());
      CHECK(f[9].empty());
    }
    auto& m = max_dt[std::stoi(f[2]) - 1][row % 3];
    m = std::max(m, std::abs(std::stod(f[6])));
  }
  for (int i = 0; i < 7; ++i)
    for (int e = 0; e < 3; ++e)
      CHECK(summary["receivers"][i]["estimators"][names[e]]["max_abs_dT_us"].get<double>() == max_dt[i][e]);
  CHECK(summary["receivers"][0]["rx"] == 1);
  CHECK(summary["iterations"] == 12);
}

TEST_CASE("Monte Carlo JSON") {
  auto s = netsim::preset_none();
  s.duration_s = 5.0;
  netsim::RunOptions o;
  o.compute_risk = false;
  const auto j = monte_carlo_to_json(netsim::monte_carlo(s, 2, 1, o), s);
  CHECK(j.dump().find("NaN") == std::string::npos);
  CHECK(j.dump().find("nan") == std::string::npos);
}

TEST_CASE("command line") {
  const auto dir = scratch("cli");
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("run --preset nope --out " + (dir / "a").string()) == 2);
  CHECK(run_cli("run --preset none") == 2);
  CHECK(run_cli("run --preset none --scenario x.json --out " + (dir / "b").string()) == 2);
  CHECK(run_cli("run --preset none --estimators foo --out " + (dir / "c").string()) == 2);
  write_file(dir / "bad.json", R"({"duration_s": 1})");
  CHECK(run_cli("run --scenario " + (dir / "bad.json").string() + " --out " + (dir / "d").string()) == 2);

  // A preset and its resolved scenario file produce the same bytes.
  auto s = netsim::preset_coordinated();
  s.duration_s = 30.0;
  write_file(dir / "short.json", scenario_to_json(s).dump(2));
  REQUIRE(run_cli("run --scenario " + (dir / "short.json").string() + " --out " + (dir / "e").string()) == 0);
  REQUIRE(run_cli("run --scenario " + (dir / "short.json").string() + " --out " + (dir / "f").string()) == 0);
  CHECK(slurp(dir / "e" / "timeseries.csv") == slurp(dir / "f" / "timeseries.csv"));
  CHECK(slurp(dir / "e" / "summary.json") == slurp(dir / "f" / "summary.json"));
  CHECK(equivalent(load_scenario(dir / "e" / "resolved_config.json"), s));

  REQUIRE(run_cli("config --preset none", (dir / "none.json").string()) == 0);
  CHECK(equivalent(load_scenario(dir / "none.json"), netsim::preset_none()));

  REQUIRE(run_cli("run --scenario " + (dir / "short.json").string() + " --runs 2 --no-risk --out " +
                  (dir / "g").string()) == 0);
  const auto mc = json::parse(slurp(dir / "g" / "montecarlo.json"));
  CHECK(mc.contains("receivers"));
}

}  // TEST_SUITE
