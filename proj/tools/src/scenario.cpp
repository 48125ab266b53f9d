#include "cdo/cli/scenario.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cdo/dolbeault.hpp"
#include "cdo/parse.hpp"

namespace cdo::cli {

ScenarioError::ScenarioError(std::string f, int l, int c, const std::string& msg)
    : std::runtime_error(f + ":" + std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
      file(std::move(f)),
      line(l),
      column(c) {}

namespace {

int form_max_index(const PQForm& w) {
  int r = 0;
  for (auto& [m, c] : w.terms()) {
    for (int i = 1; i <= kMaxDim; ++i)
      if (m & (hol_bit(i) | bar_bit(i))) r = std::max(r, i);
    r = std::max(r, c.max_index());
  }
  return r;
}

// one scenario line with a column cursor
class LineCursor {
 public:
  LineCursor(const std::string& file, int line, std::string text) : file_(file), line_(line), s_(std::move(text)) {}

  [[noreturn]] void fail(const std::string& msg, int col = -1) const {
    throw ScenarioError(file_, line_, col < 0 ? column() : col, msg);
  }
  int column() const { return static_cast<int>(pos_) + 1; }
  int line() const { return line_; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + s_.substr(pos_) + "'");
  }
  std::string word() {
    skip_ws();
    size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '.'))
      ++pos_;
    if (b == pos_) fail(pos_ < s_.size() ? "expected a name, found '" + std::string(1, s_[pos_]) + "'" : "expected a name");
    return s_.substr(b, pos_ - b);
  }
  bool peek(const std::string& tok) {
    skip_ws();
    return s_.compare(pos_, tok.size(), tok) == 0;
  }
  void expect(const std::string& tok) {
    if (!peek(tok)) fail("expected '" + tok + "'");
    pos_ += tok.size();
  }
  bool accept_word(const std::string& w) {
    skip_ws();
    size_t save = pos_;
    if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      if (word() == w) return true;
    }
    pos_ = save;
    return false;
  }
  long integer() {
    skip_ws();
    size_t b = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (b == pos_ || (pos_ == b + 1 && s_[b] == '-')) fail("expected an integer");
    try {
      return std::stol(s_.substr(b, pos_ - b));
    } catch (const std::out_of_range&) {
      fail("integer out of range", static_cast<int>(b) + 1);
    }
  }
  // expression text up to a top-level delimiter (or end of line); returns text and its column
  std::pair<std::string, int> expression(const std::string& delims) {
    skip_ws();
    size_t b = pos_;
    int depth = 0;
    while (pos_ < s_.size()) {
      char ch = s_[pos_];
      if (depth == 0 && delims.find(ch) != std::string::npos) break;
      if (ch == '(' || ch == '[') ++depth;
      if (ch == ')' || ch == ']') {
        if (depth == 0) break;
        --depth;
      }
      ++pos_;
    }
    if (depth != 0) fail("unbalanced parentheses", static_cast<int>(b) + 1);
    size_t e = pos_;
    while (e > b && std::isspace(static_cast<unsigned char>(s_[e - 1]))) --e;
    if (e == b) fail("expected an expression");
    return {s_.substr(b, e - b), static_cast<int>(b) + 1};
  }
  std::string rest() {
    skip_ws();
    std::string r = s_.substr(pos_);
    pos_ = s_.size();
    while (!r.empty() && std::isspace(static_cast<unsigned char>(r.back()))) r.pop_back();
    return r;
  }

 private:
  std::string file_;
  int line_;
  std::string s_;
  size_t pos_ = 0;
};

struct Parser {
  Scenario sc;
  std::vector<int> transition_line;

  void need_dim(LineCursor& c) {
    if (sc.dim == 0) c.fail("'dim' must come first");
  }
  std::string chart_ref(LineCursor& c) {
    int col = (c.skip_ws(), c.column());
    std::string name = c.word();
    if (sc.chart_index(name) < 0) c.fail("undeclared chart '" + name + "'", col);
    return name;
  }
  SmoothPoly poly(LineCursor& c, const std::string& delims) {
    auto [text, col] = c.expression(delims);
    SmoothPoly p;
    try {
      p = parse_poly(text, c.line(), col);
    } catch (const ParseError& e) {
      throw ScenarioError(sc.path, e.line, e.column, e.message);
    }
    if (p.max_index() > sc.dim) c.fail("variable index exceeds dim " + std::to_string(sc.dim), col);
    return p;
  }
  PQForm form(LineCursor& c, const std::string& delims) {
    auto [text, col] = c.expression(delims);
    PQForm w;
    try {
      w = parse_form(text, c.line(), col);
    } catch (const ParseError& e) {
      throw ScenarioError(sc.path, e.line, e.column, e.message);
    }
    if (form_max_index(w) > sc.dim) c.fail("index exceeds dim " + std::to_string(sc.dim), col);
    return w;
  }
  std::vector<SmoothPoly> tuple(LineCursor& c) {
    c.expect("(");
    std::vector<SmoothPoly> r;
    do r.push_back(poly(c, ",)"));
    while (c.peek(",") && (c.expect(","), true));
    c.expect(")");
    if (static_cast<int>(r.size()) != sc.dim)
      c.fail("expected " + std::to_string(sc.dim) + " coordinates, found " + std::to_string(r.size()));
    return r;
  }
  std::vector<std::vector<PQForm>> matrix(LineCursor& c) {
    std::vector<std::vector<PQForm>> m;
    c.expect("[");
    do {
      c.expect("[");
      std::vector<PQForm> row;
      do row.push_back(form(c, ",]"));
      while (c.peek(",") && (c.expect(","), true));
      c.expect("]");
      if (static_cast<int>(row.size()) != sc.dim) c.fail("matrix row needs " + std::to_string(sc.dim) + " entries");
      m.push_back(row);
    } while (c.peek(",") && (c.expect(","), true));
    c.expect("]");
    if (static_cast<int>(m.size()) != sc.dim) c.fail("matrix needs " + std::to_string(sc.dim) + " rows");
    return m;
  }
  Transition* find_transition(const std::string& a, const std::string& b) {
    for (auto& t : sc.transitions)
      if (t.from == a && t.to == b) return &t;
    return nullptr;
  }

  void statement(LineCursor& c) {
    int kcol = (c.skip_ws(), c.column());
    std::string kw = c.word();
    if (kw == "dim") {
      if (sc.dim != 0) c.fail("'dim' given twice", kcol);
      long d = c.integer();
      if (d < 1 || d > 8) c.fail("dim must be between 1 and 8", kcol);
      sc.dim = static_cast<int>(d);
    } else if (kw == "chart") {
      need_dim(c);
      do {
        int col = (c.skip_ws(), c.column());
        std::string name = c.word();
        if (sc.chart_index(name) >= 0) c.fail("chart '" + name + "' declared twice", col);
        sc.charts.push_back(name);
      } while (!c.at_end());
    } else if (kw == "map") {
      need_dim(c);
      Transition t;
      t.from = chart_ref(c);
      c.expect("->");
      int tcol = (c.skip_ws(), c.column());
      t.to = chart_ref(c);
      if (sc.chart_index(t.from) >= sc.chart_index(t.to))
        c.fail("a map must go from an earlier chart to a later one", tcol);
      if (find_transition(t.from, t.to)) c.fail("map " + t.from + " -> " + t.to + " given twice", kcol);
      c.expect(":");
      t.forward = tuple(c);
      if (c.accept_word("inverse")) t.inverse = tuple(c);
      sc.transitions.push_back(t);
      transition_line.push_back(c.line());
    } else if (kw == "xi") {
      need_dim(c);
      std::string a = chart_ref(c);
      c.expect("->");
      std::string b = chart_ref(c);
      Transition* t = find_transition(a, b);
      if (!t) c.fail("xi for " + a + " -> " + b + " precedes its map", kcol);
      c.expect(":");
      if (c.accept_word("solve")) {
        t->xi_solve = true;
        t->xi.reset();
      } else {
        t->xi = form(c, "");
        t->xi_solve = false;
      }
    } else if (kw == "gamma") {
      need_dim(c);
      ConnectionDirective g;
      g.chart = chart_ref(c);
      if (sc.chart_index(g.chart) != 0) c.fail("the connection is given on the first chart and propagated", kcol);
      c.expect(":");
      g.chern = c.accept_word("chern");
      g.matrix = matrix(c);
      sc.gamma = g;
    } else if (kw == "B") {
      need_dim(c);
      std::string a = chart_ref(c);
      if (sc.chart_index(a) != 0) c.fail("B is given on the first chart and solved on the others", kcol);
      c.expect(":");
      sc.B = std::make_pair(a, form(c, ""));
    } else if (kw == "chern") {
      std::string p = c.rest();
      if (p.size() >= 2 && p.front() == '"' && p.back() == '"') p = p.substr(1, p.size() - 2);
      if (p.empty()) c.fail("expected a path");
      sc.chern_path = p;
    } else if (kw == "suite") {
      do sc.suites.push_back(c.word());
      while (!c.at_end());
    } else if (kw == "seed") {
      long s = c.integer();
      if (s < 0) c.fail("seed must be non-negative");
      sc.seed = static_cast<std::uint64_t>(s);
    } else if (kw == "order") {
      long o = c.integer();
      if (o < 0 || o > 200) c.fail("order must be between 0 and 200");
      sc.order = static_cast<int>(o);
    } else if (kw == "trials") {
      long t = c.integer();
      if (t < 1 || t > 100000) c.fail("trials must be between 1 and 100000");
      sc.trials = static_cast<int>(t);
    } else {
      c.fail("unknown statement '" + kw + "'", kcol);
    }
    c.expect_end();
  }
};

std::string list_str(const std::vector<SmoothPoly>& v) {
  std::string r = "(";
  for (size_t i = 0; i < v.size(); ++i) r += (i ? ", " : "") + v[i].str();
  return r + ")";
}

nlohmann::json polys_json(const std::vector<SmoothPoly>& v) {
  auto j = nlohmann::json::array();
  for (auto& p : v) j.push_back(p.str());
  return j;
}

std::vector<SmoothPoly> polys_from(const nlohmann::json& j) {
  std::vector<SmoothPoly> r;
  for (auto& s : j) r.push_back(parse_poly(s.get<std::string>()));
  return r;
}

PolyBiholo biholo_of(const Transition& t, int d) {
  if (!t.inverse.empty()) return PolyBiholo(t.forward, t.inverse);
  int moved = -1;
  for (int i = 0; i < d; ++i)
    if (t.forward[i] != SmoothPoly::var(i + 1)) {
      if (moved >= 0) throw DomainError("map " + t.from + " -> " + t.to + " needs an explicit inverse");
      moved = i;
    }
  if (moved < 0) return PolyBiholo::identity(d);
  SmoothPoly p = t.forward[moved] - SmoothPoly::var(moved + 1);
  if (!p.d_hol(moved + 1).is_zero() || !p.is_holomorphic())
    throw DomainError("map " + t.from + " -> " + t.to + " needs an explicit inverse");
  return PolyBiholo::shear(d, moved + 1, p);
}

}  // namespace

bool Scenario::operator==(const Scenario& o) const {
  return dim == o.dim && charts == o.charts && transitions == o.transitions && gamma == o.gamma && B == o.B &&
         chern_path == o.chern_path && suites == o.suites && seed == o.seed && order == o.order && trials == o.trials;
}

int Scenario::chart_index(const std::string& name) const {
  for (size_t i = 0; i < charts.size(); ++i)
    if (charts[i] == name) return static_cast<int>(i);
  return -1;
}

Scenario parse_scenario_text(const std::string& text, const std::string& path) {
  Parser p;
  p.sc.path = path;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    LineCursor c(path, lineno, line);
    if (c.at_end()) continue;
    p.statement(c);
  }
  if (p.sc.dim == 0) throw ScenarioError(path, std::max(lineno, 1), 1, "missing 'dim'");
  if (p.sc.charts.empty()) throw ScenarioError(path, std::max(lineno, 1), 1, "no charts declared");
  return p.sc;
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputFileError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), path);
}

std::string Scenario::to_text() const {
  std::ostringstream o;
  o << "dim " << dim << "\n";
  o << "chart";
  for (auto& c : charts) o << " " << c;
  o << "\n";
  for (auto& t : transitions) {
    o << "map " << t.from << " -> " << t.to << " : " << list_str(t.forward);
    if (!t.inverse.empty()) o << " inverse " << list_str(t.inverse);
    o << "\n";
    if (t.xi_solve)
      o << "xi " << t.from << " -> " << t.to << " : solve\n";
    else if (t.xi)
      o << "xi " << t.from << " -> " << t.to << " : " << form_expr(*t.xi) << "\n";
  }
  if (gamma) {
    o << "gamma " << gamma->chart << " : " << (gamma->chern ? "chern " : "") << "[";
    for (size_t i = 0; i < gamma->matrix.size(); ++i) {
      o << (i ? ", [" : "[");
      for (size_t j = 0; j < gamma->matrix[i].size(); ++j) o << (j ? ", " : "") << form_expr(gamma->matrix[i][j]);
      o << "]";
    }
    o << "]\n";
  }
  if (B) o << "B " << B->first << " : " << form_expr(B->second) << "\n";
  if (chern_path) o << "chern \"" << *chern_path << "\"\n";
  if (!suites.empty()) {
    o << "suite";
    for (auto& s : suites) o << " " << s;
    o << "\n";
  }
  if (seed) o << "seed " << *seed << "\n";
  if (order) o << "order " << *order << "\n";
  if (trials) o << "trials " << *trials << "\n";
  return o.str();
}

nlohmann::json Scenario::to_json() const {
  nlohmann::json j;
  j["dim"] = dim;
  j["charts"] = charts;
  auto ts = nlohmann::json::array();
  for (auto& t : transitions) {
    nlohmann::json x{{"from", t.from}, {"to", t.to}, {"forward", polys_json(t.forward)}};
    if (!t.inverse.empty()) x["inverse"] = polys_json(t.inverse);
    if (t.xi_solve)
      x["xi"] = "solve";
    else if (t.xi)
      x["xi"] = form_expr(*t.xi);
    ts.push_back(x);
  }
  j["transitions"] = ts;
  if (gamma) {
    auto m = nlohmann::json::array();
    for (auto& row : gamma->matrix) {
      auto r = nlohmann::json::array();
      for (auto& w : row) r.push_back(form_expr(w));
      m.push_back(r);
    }
    j["gamma"] = {{"chart", gamma->chart}, {"chern", gamma->chern}, {"matrix", m}};
  }
  if (B) j["B"] = {{"chart", B->first}, {"form", form_expr(B->second)}};
  if (chern_path) j["chern"] = *chern_path;
  if (!suites.empty()) j["suites"] = suites;
  if (seed) j["seed"] = *seed;
  if (order) j["order"] = *order;
  if (trials) j["trials"] = *trials;
  return j;
}

Scenario Scenario::from_json(const nlohmann::json& j) {
  Scenario s;
  s.dim = j.at("dim").get<int>();
  s.charts = j.at("charts").get<std::vector<std::string>>();
  for (auto& x : j.at("transitions")) {
    Transition t;
    t.from = x.at("from").get<std::string>();
    t.to = x.at("to").get<std::string>();
    t.forward = polys_from(x.at("forward"));
    if (x.contains("inverse")) t.inverse = polys_from(x.at("inverse"));
    if (x.contains("xi")) {
      std::string v = x.at("xi").get<std::string>();
      if (v == "solve")
        t.xi_solve = true;
      else
        t.xi = parse_form(v);
    }
    s.transitions.push_back(t);
  }
  if (j.contains("gamma")) {
    ConnectionDirective g;
    g.chart = j["gamma"].at("chart").get<std::string>();
    g.chern = j["gamma"].at("chern").get<bool>();
    for (auto& row : j["gamma"].at("matrix")) {
      std::vector<PQForm> r;
      for (auto& w : row) r.push_back(parse_form(w.get<std::string>()));
      g.matrix.push_back(r);
    }
    s.gamma = g;
  }
  if (j.contains("B")) s.B = std::make_pair(j["B"].at("chart").get<std::string>(), parse_form(j["B"].at("form").get<std::string>()));
  if (j.contains("chern")) s.chern_path = j["chern"].get<std::string>();
  if (j.contains("suites")) s.suites = j["suites"].get<std::vector<std::string>>();
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("order")) s.order = j["order"].get<int>();
  if (j.contains("trials")) s.trials = j["trials"].get<int>();
  return s;
}

Nerve Scenario::nerve() const {
  Nerve N(dim, charts);
  for (auto& t : transitions) {
    PolyBiholo phi = biholo_of(t, dim);
    PQForm xi;
    if (t.xi_solve) {
      PQForm w = wz(phi);
      xi = w.is_zero() ? PQForm() : poincare_solve(w, Operator::Partial);
    } else if (t.xi) {
      xi = *t.xi;
    }
    N.set_pair(chart_index(t.to), chart_index(t.from), phi, xi);
  }
  // every set of charts whose pairs all carry maps
  int n = static_cast<int>(charts.size());
  for (unsigned m = 1; m < (1u << n); ++m) {
    Simplex s;
    for (int i = 0; i < n; ++i)
      if (m & (1u << i)) s.push_back(i);
    bool clique = true;
    for (size_t a = 0; a < s.size() && clique; ++a)
      for (size_t b = a + 1; b < s.size() && clique; ++b) clique = N.has_pair(s[b], s[a]);
    if (clique && !N.has(s)) N.declare(s);
  }
  return N;
}

MatForm Scenario::gamma0() const {
  if (!gamma) return MatForm(dim);
  MatForm m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = gamma->matrix[i][j];
  if (!gamma->chern) return m;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (!m(i, j).is_type(0, 0)) throw DomainError("chern matrix entries must be functions");
  return chern_type_connection(m);
}

PQForm Scenario::B0() const { return B ? B->second : PQForm(); }

ChernData read_chern_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputFileError("cannot read " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
  ChernData c = ChernData::from_json(j);
  c.validate();
  return c;
}

ChernData Scenario::chern() const {
  if (!chern_path) throw DomainError("scenario has no chern block");
  std::filesystem::path p(*chern_path);
  if (p.is_relative() && !path.empty() && path != "<input>") p = std::filesystem::path(path).parent_path() / p;
  return read_chern_file(p.string());
}

}  // namespace cdo::cli
