#include "specgate/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace specgate {

void ScanReport::set_meta(const std::string& key, const std::string& value) {
  for (auto& kv : meta)
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  meta.emplace_back(key, value);
}

void ScanReport::set_meta(const std::string& key, double value) { set_meta(key, format_double(value)); }

std::string ScanReport::meta_value(const std::string& key) const {
  for (const auto& kv : meta)
    if (kv.first == key) return kv.second;
  return {};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

void emit_value(std::ostringstream& out, const ReportValue& v) {
  if (v.infinite)
    out << "\"inf\"";
  else
    out << format_double(v.value);
}

}  // namespace

std::string report_to_json(const ScanReport& report) {
  // Hand-rolled emitter: meta order preserved, numbers at 17 significant digits.
  std::ostringstream out;
  out << "{\"meta\":{";
  for (std::size_t i = 0; i < report.meta.size(); ++i) {
    if (i) out << ",";
    out << "\"" << json_escape(report.meta[i].first) << "\":\"" << json_escape(report.meta[i].second)
        << "\"";
  }
  out << "},\"columns\":[";
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i) out << ",";
    out << "\"" << json_escape(report.columns[i]) << "\"";
  }
  out << "],\"rows\":[";
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    if (r) out << ",";
    const ReportRow& row = report.rows[r];
    out << "{\"loc\":[";
    for (std::size_t i = 0; i < row.location.size(); ++i) {
      if (i) out << ",";
      out << format_double(row.location[i]);
    }
    out << "],\"stats\":[";
    for (std::size_t i = 0; i < row.stats.size(); ++i) {
      if (i) out << ",";
      emit_value(out, row.stats[i]);
    }
    out << "]}";
  }
  out << "]}";
  return out.str();
}

std::string report_to_csv(const ScanReport& report) {
  std::ostringstream out;
  for (const auto& kv : report.meta) out << "# " << kv.first << "=" << kv.second << "\n";
  std::size_t loc_width = report.rows.empty() ? 0 : report.rows.front().location.size();
  out << "step,y";
  for (const std::string& c : report.columns) out << "," << c;
  out << "\n";
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    const ReportRow& row = report.rows[r];
    out << r << ",\"";
    for (std::size_t i = 0; i < loc_width; ++i) {
      if (i) out << ";";
      out << format_double(row.location[i]);
    }
    out << "\"";
    for (const ReportValue& v : row.stats) {
      out << ",";
      if (v.infinite)
        out << "inf";
      else
        out << format_double(v.value);
    }
    out << "\n";
  }
  return out.str();
}

ScanReport report_from_json(const std::string& text) {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::IoFailure, "report JSON does not parse");
  ScanReport rep;
  for (auto& [k, v] : j.at("meta").items()) rep.meta.emplace_back(k, v.get<std::string>());
  rep.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& jr : j.at("rows")) {
    ReportRow row;
    row.location = jr.at("loc").get<std::vector<double>>();
    for (const auto& js : jr.at("stats")) {
      if (js.is_string()) {
        if (js.get<std::string>() != "inf") fail(Errc::IoFailure, "unexpected stat sentinel");
        row.stats.push_back(ReportValue::inf());
      } else {
        row.stats.push_back(ReportValue::finite(js.get<double>()));
      }
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

void write_report(const ScanReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoFailure, "cannot open " + path + " for writing");
  out << (format == ReportFormat::Json ? report_to_json(report) : report_to_csv(report));
  if (format == ReportFormat::Json) out << "\n";
  if (!out) fail(Errc::IoFailure, "write failed: " + path);
}

}  // namespace specgate
