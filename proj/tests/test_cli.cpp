#include "doctest.h"

#include <fstream>
#include <sstream>

#include "cdo/cli/report.hpp"
#include "cdo/cli/scenario.hpp"
#include "cdo/dolbeault.hpp"
#include "cdo/parse.hpp"

using namespace cdo;
using namespace cdo::cli;

static std::string sample(const std::string& name) { return std::string(CDO_SAMPLES_DIR) + "/" + name; }

struct Run {
  int code;
  std::string out, err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

static Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

TEST_CASE("minimal scenario") {
  Scenario s = parse_scenario_text("dim 1\nchart U\n");
  CHECK(s.dim == 1);
  CHECK(s.charts == std::vector<std::string>{"U"});
  CHECK(s.nerve().size() == 1);
  CHECK(parse_scenario(sample("point.scn")) == s);
}

TEST_CASE("scenario diagnostics") {
  try {
    parse_scenario_text("dim 2\nchart A B\nmap A -> C : (b1, b2)\n", "f.scn");
    FAIL("no error");
  } catch (const ScenarioError& e) {
    CHECK(e.line == 3);
    CHECK(e.column == 10);
    CHECK(std::string(e.what()).find("'C'") != std::string::npos);
    CHECK(std::string(e.what()).rfind("f.scn:3:10:", 0) == 0);
  }
  try {
    parse_scenario_text("dim 2\nchart A B\n  map A -> B : (b1, b2 + * b1)\n");
    FAIL("no error");
  } catch (const ScenarioError& e) {
    CHECK(e.line == 3);
    CHECK(e.column == 26);
  }
  CHECK_THROWS_AS(parse_scenario_text("chart A\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text("dim 2\nchart A A\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text("dim 2\nchart A B\nmap B -> A : (b1, b2)\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text("dim 2\nchart A B\nmap A -> B : (b1)\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text("dim 2\nchart A B\nmap A -> B : (b1, b3)\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text("dim 2\nchart A B\nxi A -> B : 0\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text("dim 2\nchart A B\ngamma B : [[0, 0], [0, 0]]\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text("dim 2\nchart A\nfrobnicate\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text("dim 2\nchart A\nseed 3 4\n"), ScenarioError);
  // a non-shear without inverse is rejected when the nerve is built
  Scenario s = parse_scenario_text("dim 2\nchart A B\nmap A -> B : (b1 + b2^2, b2 + b1^2)\n");
  CHECK_THROWS_AS(s.nerve(), DomainError);
}

TEST_CASE("golden shear scenario") {
  Scenario s = parse_scenario(sample("shear2.scn"));
  CHECK(s.charts.size() == 3);
  CHECK(s.transitions.size() == 3);
  CHECK(s.suites == std::vector<std::string>{"cech", "dolbeault"});

  // same nerve as the built-in one
  Nerve N = s.nerve(), ref = shear_nerve(3);
  CHECK(N.validate().empty());
  CHECK(N.simplices() == ref.simplices());
  for (auto [b, a] : std::vector<std::pair<int, int>>{{1, 0}, {2, 1}, {2, 0}}) {
    CHECK(N.phi(b, a).forward() == ref.phi(b, a).forward());
    CHECK(N.xi(b, a) == ref.xi(b, a));
  }
  MatForm h = MatForm::functions({{SmoothPoly(1), parse_poly("B1*b2")}, {SmoothPoly(0), SmoothPoly(1)}});
  CHECK(s.gamma0() == chern_type_connection(h));

  // round trips
  CHECK(parse_scenario_text(s.to_text()) == s);
  CHECK(Scenario::from_json(s.to_json()) == s);
  std::ifstream in(sample("shear2.json"));
  REQUIRE(in);
  nlohmann::json golden = nlohmann::json::parse(in);
  CHECK(s.to_json() == golden);
  CHECK(Scenario::from_json(golden) == s);
}

TEST_CASE("witten command") {
  Run r = run({"witten", "--chern", sample("k3.json"), "--order", "6", "--json"});
  CHECK(r.code == kSuccess);
  auto j = r.json();
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["version"] == kReportVersion);
  QSeries w = qseries_from_json(j["series"]["witten"]);
  CHECK(w.order() == 6);
  CHECK(w[0] == 2);
  CHECK(j["values"]["todd"] == "2");
}

TEST_CASE("character command") {
  Run r = run({"character", "--chern", sample("zero.json"), "--order", "4", "--json"});
  CHECK(r.code == kSuccess);
  QSeries c = qseries_from_json(r.json()["series"]["character"]);
  CHECK(c.is_zero());
  CHECK(c.offset() == Q(-1, 6));
  CHECK(c.order() == 4);
}

TEST_CASE("verify command") {
  Run r = run({"verify", "--suite", "algebroid", "--dim", "2", "--seed", "7", "--trials", "100", "--json"});
  CHECK(r.code == kSuccess);
  auto j = r.json();
  REQUIRE(j["suites"].size() == 1);
  CHECK(j["suites"][0]["name"] == "algebroid");
  CHECK(j["suites"][0]["ok"] == true);
  CHECK(j["options"]["seed"] == 7);

  Run s = run({"verify", "--scenario", sample("shear2.scn"), "--json"});
  CHECK(s.code == kSuccess);
  CHECK(s.json()["suites"].size() == 2);
  auto js = s.json();
  bool sigma = false;
  for (auto& f : js["suites"][0]["findings"]) sigma = sigma || f.get<std::string>().find("+sigma") != std::string::npos;
  CHECK(sigma);
}

TEST_CASE("reports are deterministic and text agrees with JSON") {
  std::vector<std::string> args{"verify", "--suite", "qseries,genus,voa", "--seed", "3", "--trials", "4"};
  Run a = run(args), b = run(args);
  CHECK(a.out == b.out);
  args.push_back("--json");
  Run ja = run(args), jb = run(args);
  CHECK(ja.out == jb.out);
  CHECK(render_text(ja.json()) == a.out);
  for (auto& s : ja.json()["suites"])
    for (auto& c : s["checks"]) CHECK(a.out.find(c["name"].get<std::string>()) != std::string::npos);
}

TEST_CASE("exit codes") {
  std::string bad = std::string(CDO_BINARY_DIR) + "/bad_chart.scn";
  std::ofstream(bad) << "dim 2\nchart A B\nmap A -> C : (b1, b2)\n";
  Run p = run({"verify", "--scenario", bad});
  CHECK(p.code == kInputError);
  CHECK(p.err.find("bad_chart.scn:3:10") != std::string::npos);
  CHECK(run({"witten", "--chern", "/no/such/file.json"}).code == kInputError);
  CHECK(run({"verify", "--suite", "nope"}).code == kInputError);
  CHECK(run({"verify", "--dim", "9"}).code == kInputError);
  CHECK(run({"frobnicate"}).code == kInputError);

  std::string big = std::string(CDO_BINARY_DIR) + "/overflow.scn";
  std::ofstream(big) << "dim 2\nchart A B\nmap A -> B : (b1, b2 + b1^64*b1^64)\n";
  CHECK(run({"verify", "--scenario", big, "--suite", "cech"}).code == kOverflow);

  // the report is written even on failure
  std::string rep = std::string(CDO_BINARY_DIR) + "/failed_report.json";
  run({"verify", "--scenario", bad, "--report", rep});
  std::ifstream in(rep);
  REQUIRE(in);
  auto j = nlohmann::json::parse(in);
  CHECK(j["ok"] == false);
  CHECK(j["error"]["kind"] == "parse");
}
