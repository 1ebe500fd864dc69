// SPDX-License-Identifier: Apache-2.0
#include "hstokes/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hstokes {

double ReportRow::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  throw std::out_of_range("ReportRow: no metric " + name);
}

void VerificationReport::add(ReportRow row, double error) {
  if (worst_key.empty()) worst_key = row.key;
  if (std::isnan(error) || error > max_error) {
    max_error = std::isnan(error) ? INFINITY : error;
    worst_key = row.key;
  }
  rows.push_back(std::move(row));
}

void VerificationReport::merge(const VerificationReport& other) {
  if (other.max_error > max_error) {
    max_error = other.max_error;
    worst_key = other.worst_key;
  } else if (worst_key.empty()) {
    worst_key = other.worst_key;
  }
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string mode_key(const ModeParams& m) {
  std::string s = "rho=" + format_double(m.constants.rho) + ";mu=" + format_double(m.constants.mu) +
                  ";eps=" + format_double(m.constants.epsilon) + ";lambda=" + format_double(m.lambda.real()) + "," +
                  format_double(m.lambda.imag()) + ";xi=";
  for (std::size_t i = 0; i < m.xi.size(); ++i) s += (i ? "," : "") + format_double(m.xi[i]);
  return s;
}

}  // namespace hstokes
