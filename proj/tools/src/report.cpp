#include "cdo/cli/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "cdo/parse.hpp"

namespace cdo::cli {

using nlohmann::json;

json suite_json(const SuiteResult& s, bool timing) {
  json j;
  j["name"] = s.name;
  j["ok"] = s.ok();
  auto checks = json::array();
  for (auto& c : s.checks) {
    json x{{"name", c.name}, {"ok", c.ok}};
    if (!c.detail.empty()) x["detail"] = c.detail;
    if (!c.witness.empty()) x["witness"] = c.witness;
    checks.push_back(x);
  }
  j["checks"] = checks;
  j["findings"] = s.findings;
  if (timing) j["seconds"] = s.seconds;
  return j;
}

namespace {

std::string series_text(const json& s) {
  QSeries q = qseries_from_json(s);
  return q.str(12);
}

}  // namespace

std::string render_text(const json& r) {
  std::ostringstream o;
  o << r.value("command", std::string("?")) << ": " << (r.value("ok", false) ? "PASS" : "FAIL") << "\n";
  if (r.contains("error")) o << "error (" << r["error"].value("kind", "") << "): " << r["error"].value("message", "") << "\n";
  if (r.contains("options"))
    for (auto& [k, v] : r["options"].items()) o << "  " << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  if (r.contains("series"))
    for (auto& [k, v] : r["series"].items()) o << k << " = " << series_text(v) << "\n";
  if (r.contains("values"))
    for (auto& [k, v] : r["values"].items()) o << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  if (r.contains("checks"))
    for (auto& c : r["checks"]) {
      o << "  [" << (c["ok"].get<bool>() ? "ok" : "FAIL") << "] " << c["name"].get<std::string>();
      if (c.contains("detail")) o << "  (" << c["detail"].get<std::string>() << ")";
      o << "\n";
      if (c.contains("witness")) o << "      witness: " << c["witness"].get<std::string>() << "\n";
    }
  if (r.contains("suites"))
    for (auto& s : r["suites"]) {
      o << "suite " << s["name"].get<std::string>() << ": " << (s["ok"].get<bool>() ? "pass" : "FAIL");
      if (s.contains("seconds")) o << std::fixed << std::setprecision(3) << "  " << s["seconds"].get<double>() << " s";
      o << "\n";
      for (auto& c : s["checks"]) {
        o << "  [" << (c["ok"].get<bool>() ? "ok" : "FAIL") << "] " << c["name"].get<std::string>();
        if (c.contains("detail")) o << "  (" << c["detail"].get<std::string>() << ")";
        o << "\n";
        if (c.contains("witness")) o << "      witness: " << c["witness"].get<std::string>() << "\n";
      }
      for (auto& f : s["findings"]) o << "  finding: " << f.get<std::string>() << "\n";
    }
  if (r.contains("findings"))
    for (auto& f : r["findings"]) o << "finding: " << f.get<std::string>() << "\n";
  if (r.contains("seconds")) o << std::fixed << std::setprecision(3) << "total " << r["seconds"].get<double>() << " s\n";
  return o.str();
}

namespace {

struct Common {
  int order = 10;
  std::uint64_t seed = 0;
  int trials = 20;
  int dim = 2;
  std::string chern, scenario, report_path;
  std::vector<std::string> suites;
  bool json_out = false, timing = false;
};

json base_report(const std::string& cmd) {
  json r;
  r["schema"] = kReportSchema;
  r["version"] = kReportVersion;
  r["command"] = cmd;
  return r;
}

std::string q_str(const Q& q) { return q.get_str(); }

ChernData chern_input(const Common& c, const std::optional<Scenario>& sc) {
  if (!c.chern.empty()) return read_chern_file(c.chern);
  if (sc && sc->chern_path) return sc->chern();
  throw DomainError("--chern is required");
}

int witten_cmd(const Common& c, const std::optional<Scenario>& sc, json& r) {
  ChernData data = chern_input(c, sc);
  r["options"] = {{"order", c.order}, {"d", data.d}};
  auto w = witten_genus(data, c.order);
  r["series"]["witten"] = to_json(w.value);
  auto [todd, ahat] = todd_and_ahat(data);
  r["values"] = {{"todd", q_str(todd)}, {"ahat", q_str(ahat)}, {"q0", q_str(w.value[0])}};
  auto ob = obstruction_predicates(data);
  auto fs = json::array();
  for (auto& it : ob.items)
    fs.push_back(it.condition + " " + it.monomial + " = " + q_str(it.value) + (it.holds ? "" : " (nonzero)"));
  if (!ob.note.empty()) fs.push_back(ob.note);
  bool string_like = ob.ch1_necessary && ob.ch2_necessary;
  for (auto& it : ob.items) string_like = string_like && it.holds;
  if (string_like && data.d % 2 == 0 && data.d > 0) {
    auto dec = modularity_decompose(w.value, data.d, c.order);
    std::string s = "weight " + std::to_string(data.d) + " decomposition: ";
    if (dec.status == Decomposition::Member) {
      s += "member";
      for (auto& [m, v] : dec.coeffs) s += " " + q_str(v) + "*" + m.name();
    } else if (dec.status == Decomposition::NotMember) {
      s += "not a member, mismatch at q^" + std::to_string(dec.mismatch_degree);
    } else {
      s += dec.message.empty() ? "undetermined" : dec.message;
    }
    fs.push_back(s);
  }
  r["findings"] = fs;
  r["ok"] = true;
  return kSuccess;
}

int character_cmd(const Common& c, const std::optional<Scenario>& sc, json& r) {
  ChernData data = chern_input(c, sc);
  r["options"] = {{"order", c.order}, {"d", data.d}};
  auto ch = cdo_character(data, c.order);
  r["series"]["character"] = to_json(ch.value);
  r["values"] = {{"offset", q_str(ch.value.offset())}};
  auto id = character_identity_check(data, c.order);
  json chk{{"name", "character.identity"}, {"ok", id.equal}, {"detail", "against the e^{c1/2} W / eta^{2d} side"}};
  if (id.first_difference) chk["witness"] = "q^" + q_str(id.first_difference->first) + ": " + q_str(id.first_difference->second);
  r["checks"] = json::array({chk});
  r["ok"] = id.equal;
  return id.equal ? kSuccess : kCheckFailure;
}

int verify_cmd(const Common& c, const std::optional<Scenario>& sc, json& r) {
  VerifyOptions vo;
  vo.dim = sc ? sc->dim : c.dim;
  vo.seed = c.seed;
  vo.trials = c.trials;
  vo.order = c.order;
  vo.scenario = sc;
  if (!c.chern.empty()) vo.chern = read_chern_file(c.chern);
  else if (sc && sc->chern_path) vo.chern = sc->chern();
  std::vector<std::string> names;
  for (auto& s : c.suites) {
    if (s == "all") {
      names = suite_names();
      break;
    }
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw DomainError("unknown suite '" + s + "'");
    names.push_back(s);
  }
  if (names.empty()) names = suite_names();
  r["options"] = {{"dim", vo.dim}, {"seed", vo.seed}, {"trials", vo.trials}, {"order", vo.order}};
  if (sc) r["options"]["scenario"] = sc->to_json();
  auto suites = json::array();
  bool ok = true;
  for (auto& n : names) {
    SuiteResult s = run_suite(n, vo);
    ok = ok && s.ok();
    suites.push_back(suite_json(s, c.timing));
  }
  r["suites"] = suites;
  r["ok"] = ok;
  return ok ? kSuccess : kCheckFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact checks for chiral differential operators on polynomial models"};
  app.set_version_flag("--version", std::to_string(kReportVersion));
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--order", c.order, "q-series truncation order")->check(CLI::Range(0, 200));
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--scenario", c.scenario, "scenario file");
    sub->add_option("--chern", c.chern, "Chern-number JSON file");
    sub->add_option("--report", c.report_path, "also write the JSON report here");
    sub->add_flag("--json", c.json_out, "print JSON instead of text");
    sub->add_flag("--timing", c.timing, "include run times (the report is then not reproducible)");
  };
  auto* witten = app.add_subcommand("witten", "Witten genus q-expansion");
  auto* character = app.add_subcommand("character", "CDO character");
  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_common(witten);
  add_common(character);
  add_common(verify);
  verify->add_option("--suite", c.suites, "suite names or 'all'")->delimiter(',');
  verify->add_option("--dim", c.dim, "complex dimension")->check(CLI::Range(1, 4));
  verify->add_option("--trials", c.trials, "random trials per check")->check(CLI::Range(1, 100000));

  std::vector<const char*> argv{"cdo"};
  for (auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    std::ostringstream o, e2;
    app.exit(e, o, e2);
    out << o.str();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    app.exit(e, o, e2);
    err << e2.str() << o.str();
    return kInputError;
  }

  std::string cmd = witten->parsed() ? "witten" : character->parsed() ? "character" : "verify";
  CLI::App* sub = app.get_subcommand(cmd);
  json r = base_report(cmd);
  int code = kSuccess;
  auto t0 = std::chrono::steady_clock::now();
  auto fail = [&](int k, const std::string& kind, const std::string& msg) {
    r["ok"] = false;
    r["error"] = {{"kind", kind}, {"message", msg}};
    err << "cdo " << cmd << ": " << msg << "\n";
    code = k;
  };
  try {
    std::optional<Scenario> sc;
    if (!c.scenario.empty()) {
      sc = parse_scenario(c.scenario);
      if (sub->count("--seed") == 0 && sc->seed) c.seed = *sc->seed;
      if (sub->count("--order") == 0 && sc->order) c.order = *sc->order;
      if (cmd == "verify") {
        if (sub->count("--trials") == 0 && sc->trials) c.trials = *sc->trials;
        if (c.suites.empty()) c.suites = sc->suites;
        if (sub->count("--dim") && c.dim != sc->dim) throw DomainError("--dim disagrees with the scenario's dim");
      }
    }
    if (cmd == "witten") code = witten_cmd(c, sc, r);
    else if (cmd == "character") code = character_cmd(c, sc, r);
    else code = verify_cmd(c, sc, r);
  } catch (const ScenarioError& e) {
    fail(kInputError, "parse", e.what());
  } catch (const ParseError& e) {
    fail(kInputError, "parse", std::to_string(e.line) + ":" + std::to_string(e.column) + ": " + e.what());
  } catch (const InputFileError& e) {
    fail(kInputError, "io", e.what());
  } catch (const nlohmann::json::exception& e) {
    fail(kInputError, "input", e.what());
  } catch (const DomainError& e) {
    fail(kInputError, "input", e.what());
  } catch (const OverflowError& e) {
    fail(kOverflow, "overflow", e.what());
  } catch (const std::bad_alloc&) {
    fail(kOverflow, "overflow", "out of memory");
  }
  if (c.timing) r["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!c.report_path.empty()) {
    std::ofstream f(c.report_path);
    if (f) f << r.dump(2) << "\n";
    if (!f) {
      err << "cdo: cannot write " << c.report_path << "\n";
      if (code == kSuccess || code == kCheckFailure) code = kInputError;
    }
  }
  out << (c.json_out ? r.dump(2) + "\n" : render_text(r));
  return code;
}

}  // namespace cdo::cli
