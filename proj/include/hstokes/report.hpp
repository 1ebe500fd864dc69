// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hstokes/symbol_core.hpp"

namespace hstokes {

struct ReportRow {
  std::string key;
  std::vector<std::pair<std::string, double>> metrics;

  double metric(const std::string& name) const;
};

/// Outcome of a verification sweep. `max_error` is compared against `tolerance`.
struct VerificationReport {
  std::string name;
  double tolerance = 0.0;
  double max_error = 0.0;
  std::string worst_key;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;
  std::vector<std::string> warnings;

  bool passed() const { return max_error < tolerance; }
  /// Records a row and folds `error` into the maximum. Ties keep the earlier key.
  void add(ReportRow row, double error);
  /// Appends another report's rows in order; the result does not depend on how a sweep was split.
  void merge(const VerificationReport& other);
};

/// Stable textual key for a mode, printed with 17 significant digits.
std::string mode_key(const ModeParams& mode);

/// printf("%.17g") of a double.
std::string format_double(double v);

}  // namespace hstokes
