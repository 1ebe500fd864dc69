// SPDX-License-Identifier: Apache-2.0
//
// Batch campaigns behind the hstokes command line: strict JSON configuration,
// deterministic CSV/JSON outputs and the exit-code contract
// 0 success, 1 tolerance breach, 2 configuration error, 3 numerical budget.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace hstokes::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { kSuccess = 0, kToleranceBreach = 1, kConfigError = 2, kNumericalBudget = 3 };

/// Invalid configuration text, unknown key or failed validation. The message carries the
/// location (line:column for syntax, a JSON pointer for schema errors).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string>& commands();

/// Parses configuration text; syntax errors are reported as "line L, column C: ...".
json parse_config_text(const std::string& text);

/// Applies defaults, rejects unknown keys, validates, and returns the fully resolved config.
/// A seed override replaces the "seed" entry. Resolving a resolved config is the identity.
json resolve_config(const std::string& command, const json& raw, std::optional<std::uint64_t> seed = std::nullopt);

struct Invocation {
  std::string command;
  std::optional<std::filesystem::path> config_path;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";
};

/// Runs one campaign, writing outputs under inv.out. Diagnostics go to `log`; the return value is an ExitCode.
int run(const Invocation& inv, std::ostream& log);

/// Worker count from --jobs, falling back to HSTOKES_JOBS; nullopt leaves the runtime default.
/// Throws ConfigError on a non-positive or malformed value.
std::optional<int> resolve_jobs(std::optional<int> flag, const char* env);

}  // namespace hstokes::cli
