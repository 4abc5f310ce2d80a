#pragma once

// CSV and JSON-lines serialization of verification rows.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "verify.hpp"

namespace string_spectra {

inline constexpr const char* kCsvHeader = "claim,density_digest,n,m,tau,margin,tolerance,pass,runtime_ms";

struct ReportFormat {
  /// runtime_ms is left blank unless set, so output is byte-stable
  bool timing = false;
};

namespace detail {

inline std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace detail

inline std::string to_csv_line(const VerificationReport& r, ReportFormat fmt = {}) {
  std::string line = r.claim + ',' + r.density_digest + ',' + std::to_string(r.n) + ',' +
                     std::to_string(r.m) + ',' + detail::format_number(r.tau) + ',' +
                     detail::format_number(r.margin) + ',' + detail::format_number(r.tolerance) + ',' +
                     (r.pass ? "true" : "false") + ',';
  if (fmt.timing) line += detail::format_number(r.runtime_ms);
  return line;
}

inline nlohmann::json to_json(const VerificationReport& r, ReportFormat fmt = {}) {
  nlohmann::json j{{"claim", r.claim},
                   {"density_digest", r.density_digest},
                   {"n", r.n},
                   {"m", r.m},
                   {"tau", std::isnan(r.tau) ? nlohmann::json(nullptr) : nlohmann::json(r.tau)},
                   {"margin", r.margin},
                   {"tolerance", r.tolerance},
                   {"pass", r.pass},
                   {"in_hypothesis", r.in_hypothesis},
                   {"runtime_ms", fmt.timing ? nlohmann::json(r.runtime_ms) : nlohmann::json(nullptr)}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline void write_csv(std::ostream& out, const Reports& rows, ReportFormat fmt = {}) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) out << to_csv_line(r, fmt) << '\n';
}

inline void write_json_lines(std::ostream& out, const Reports& rows, ReportFormat fmt = {}) {
  for (const auto& r : rows) out << to_json(r, fmt).dump() << '\n';
}

}  // namespace string_spectra
