#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "cdo/cli/suites.hpp"
#include "json.hpp"

namespace cdo::cli {

inline constexpr const char* kReportSchema = "cdo-report";
inline constexpr int kReportVersion = 1;

enum ExitCode { kSuccess = 0, kCheckFailure = 1, kInputError = 2, kOverflow = 3 };

nlohmann::json suite_json(const SuiteResult& s, bool timing);
// the text form is rendered from the JSON form, so both carry the same content
std::string render_text(const nlohmann::json& report);

// argv-style entry point; out receives the report, err diagnostics
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdo::cli
