#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdo/cech.hpp"
#include "cdo/genus.hpp"
#include "json.hpp"

namespace cdo::cli {

// grammar violation or a bad reference, with the position in the scenario file
struct ScenarioError : std::runtime_error {
  std::string file;
  int line, column;
  ScenarioError(std::string file, int line, int column, const std::string& msg);
};

struct InputFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Transition {
  std::string from, to;  // from is declared before to
  std::vector<SmoothPoly> forward, inverse;  // inverse empty: derived for a shear
  std::optional<PQForm> xi;  // absent: zero
  bool xi_solve = false;     // xi = Poincare primitive of WZ
  friend bool operator==(const Transition&, const Transition&) = default;
};

struct ConnectionDirective {
  std::string chart;
  bool chern = false;  // matrix is h and Gamma = h^{-1} dh
  std::vector<std::vector<PQForm>> matrix;
  friend bool operator==(const ConnectionDirective&, const ConnectionDirective&) = default;
};

struct Scenario {
  std::string path;  // for diagnostics and relative chern paths; not part of equality
  int dim = 0;
  std::vector<std::string> charts;
  std::vector<Transition> transitions;
  std::optional<ConnectionDirective> gamma;
  std::optional<std::pair<std::string, PQForm>> B;
  std::optional<std::string> chern_path;
  std::vector<std::string> suites;
  std::optional<std::uint64_t> seed;
  std::optional<int> order, trials;

  bool operator==(const Scenario& o) const;
  int chart_index(const std::string& name) const;  // -1 if undeclared

  std::string to_text() const;
  nlohmann::json to_json() const;
  static Scenario from_json(const nlohmann::json& j);

  // the nerve with every clique of declared transitions; DomainError on inconsistent data
  Nerve nerve() const;
  bool has_connection() const { return gamma.has_value(); }
  MatForm gamma0() const;  // Gamma on the first chart
  PQForm B0() const;
  ChernData chern() const;  // reads chern_path relative to the scenario file
};

Scenario parse_scenario_text(const std::string& text, const std::string& path = "<input>");
Scenario parse_scenario(const std::string& path);  // InputFileError when unreadable

ChernData read_chern_file(const std::string& path);

}  // namespace cdo::cli
