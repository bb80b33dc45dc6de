#pragma once

#include <string>
#include <vector>

#include "specgate/errors.hpp"

namespace specgate {

/// A statistic that may legitimately be +infinity; infinite entries serialize
/// as the string "inf", never as an IEEE infinity.
struct ReportValue {
  double value = 0.0;
  bool infinite = false;

  static ReportValue finite(double v) { return {v, false}; }
  static ReportValue inf() { return {0.0, true}; }

  bool operator==(const ReportValue&) const = default;
};

struct ReportRow {
  std::vector<double> location;
  std::vector<ReportValue> stats;  // aligned with ScanReport::columns

  bool operator==(const ReportRow&) const = default;
};

/// Ordered scan output. meta is an ordered key/value list; columns fixes the
/// stat order for every row. Serialization is deterministic, floats carry 17
/// significant digits.
struct ScanReport {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<ReportRow> rows;

  void set_meta(const std::string& key, const std::string& value);
  void set_meta(const std::string& key, double value);
  std::string meta_value(const std::string& key) const;

  bool operator==(const ScanReport&) const = default;
};

std::string format_double(double v);  // %.17g

std::string report_to_json(const ScanReport& report);
std::string report_to_csv(const ScanReport& report);
ScanReport report_from_json(const std::string& text);

enum class ReportFormat { Json, Csv };

void write_report(const ScanReport& report, ReportFormat format, const std::string& path);

}  // namespace specgate
