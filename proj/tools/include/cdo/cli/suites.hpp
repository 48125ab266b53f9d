#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdo/cli/scenario.hpp"
#include "cdo/random.hpp"

namespace cdo::cli {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;   // counts, summaries
  std::string witness;  // first failing input and residual
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;
  std::vector<std::string> findings;  // sign conventions and the like
  double seconds = 0;
  bool ok() const;
};

struct VerifyOptions {
  int dim = 2;
  std::uint64_t seed = 0;
  int trials = 20;
  int order = 10;
  std::optional<Scenario> scenario;  // nerve and connection data for cech and dolbeault
  std::optional<ChernData> chern;
};

const std::vector<std::string>& suite_names();  // qseries genus polycx algebroid voa cech dolbeault
SuiteResult run_suite(const std::string& name, const VerifyOptions& opts);

// Chern numbers uniform in [-30, 30]; those with a c1 factor zeroed on request
ChernData random_chern_data(Rng& rng, int d, bool c1_zero);

}  // namespace cdo::cli
