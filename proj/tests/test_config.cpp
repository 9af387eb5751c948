#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "trapcool/commands.hpp"
#include "trapcool/config.hpp"
#include "trapcool/errors.hpp"
#include "trapcool/output.hpp"

using namespace trapcool;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

}  // namespace

TEST_CASE("empty config gives the default scenario") {
  const ScenarioConfig c = parse_config_string("");
  CHECK(c.params.chi == 4.0);
  CHECK(c.params.kappa == 40.0);
  CHECK(c.params.g == 0.375);
  CHECK(c.params.phi == -std::numbers::pi / 2.0);
  CHECK(c.n_trunc == 30);
  CHECK(config_keys().size() == 18);
}

TEST_CASE("config round trip") {
  ScenarioConfig c;
  c.params.nu = 18.75;
  c.params.g = 0.1 + 0.2;  // not exactly representable in short decimal form
  c.params.eta = 1.0 / 3.0;
  c.params.phi = -1.2345678901234567;
  c.n_trunc = 44;
  c.seed = 123456789012345ULL;
  c.dt = 2.5e-3;
  const ScenarioConfig back = parse_config_string(serialize_config(c));
  CHECK(back == c);
  CHECK(serialize_config(back) == serialize_config(c));

  const ScenarioConfig fig1 = load_config(std::string(TRAPCOOL_CONFIG_DIR) + "/fig1.conf");
  CHECK(parse_config_string(serialize_config(fig1)) == fig1);
  CHECK(fig1.params.nu == 1000.0);
}

TEST_CASE("config errors name the line and key") {
  CHECK(contains(error_of("chi = 4\nfoo = 1\n"), "<config>:2:"));
  CHECK(contains(error_of("chi = 4\nfoo = 1\n"), "unknown key 'foo'"));
  CHECK(contains(error_of("g = 1\n\n# c\ng = 2\n"), ":4: duplicate key 'g'"));
  CHECK(contains(error_of("eta = abc\n"), "key 'eta'"));
  CHECK(contains(error_of("eta = 0.5x\n"), "cannot parse"));
  CHECK(contains(error_of("n_trunc = 3.5\n"), "key 'n_trunc'"));
  CHECK(contains(error_of("just text\n"), "expected key = value"));
  CHECK(contains(error_of("nu = inf\n"), "nu"));
  CHECK(error_of("  chi=4   # trailing comment\n").empty());

  try {
    load_config("/nonexistent/x.conf");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(contains(e.what(), "/nonexistent/x.conf"));
  }
}

TEST_CASE("config validation") {
  auto message = [](ScenarioConfig c) -> std::string {
    try {
      c.validate();
    } catch (const Error& e) {
      return e.what();
    }
    return "";
  };
  ScenarioConfig c;
  CHECK(message(c).empty());
  c.n_trunc = 0;
  CHECK(contains(message(c), "n_trunc"));
  c = ScenarioConfig{};
  c.params.eta = 1.5;
  CHECK(contains(message(c), "eta"));
  c = ScenarioConfig{};
  c.params.kappa = -1.0;
  CHECK(contains(message(c), "kappa"));
  c = ScenarioConfig{};
  c.dt = 0.0;
  CHECK(contains(message(c), "dt"));
  c = ScenarioConfig{};
  c.params.chi = 20.0;
  CHECK(c.validate().size() == 1);
}

TEST_CASE("sweep value lists") {
  CHECK(parse_sweep_values("1,2.5,3") == std::vector<double>{1.0, 2.5, 3.0});
  CHECK(parse_sweep_values("0:1:5") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const auto logv = parse_sweep_values("log:0.01:100:5");
  REQUIRE(logv.size() == 5);
  CHECK(logv[2] == doctest::Approx(1.0));
  CHECK(logv[4] == doctest::Approx(100.0));
  CHECK_THROWS_AS(parse_sweep_values("1,,2"), Error);
  CHECK_THROWS_AS(parse_sweep_values("log:0:1:4"), Error);
  CHECK_THROWS_AS(parse_sweep_values("0:1:2.5"), Error);
  CHECK_THROWS_AS(parse_sweep_values("a"), Error);
}

TEST_CASE("output rendering") {
  Table t;
  t.columns = {"a", "b", "c"};
  t.rows.push_back({0.1, std::monostate{}, std::string("x")});
  t.rows.push_back({std::nan(""), 3LL, true});
  CHECK(render_table(t, OutputFormat::csv) == "a,b,c\n0.10000000000000001,,x\n,3,true\n");
  const std::string json = render_table(t, OutputFormat::json);
  CHECK(contains(json, "\"b\": null"));
  CHECK(contains(json, "\"a\": 0.1"));

  Record r;
  r.emplace_back("N", 0.5);
  r.emplace_back("stable", false);
  CHECK(render_record(r, OutputFormat::csv) == "key,value\nN,0.5\nstable,false\n");
  CHECK(contains(render_record(r, OutputFormat::json), "\"stable\": false"));

  CHECK(sibling_path("runs/out.csv", "summary") == "runs/out.summary.csv");
  CHECK(sibling_path("out", "summary") == "out.summary");
  CHECK(parse_format("json") == OutputFormat::json);
  CHECK_THROWS_AS(parse_format("xml"), Error);
}
