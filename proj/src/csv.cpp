#include "weierdim/csv.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "weierdim/spec_io.hpp"

namespace weierdim {

namespace {

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string number(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += field(table.header[i]);
  }
  out += "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += number(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

void export_csv(const CsvTable& table, const std::string& path) { write_text_file(path, to_csv(table)); }

CsvTable dimension_table(const DimensionReport& report) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  CsvTable t{{"n", "log_d", "ratio_H", "ratio_B"}, {}};
  auto value_at = [](const RatioSeries& s, int n) {
    for (const auto& e : s.entries)
      if (e.n == n) return e.value;
    return nan;
  };
  for (int n = report.n0; n <= report.n1; ++n)
    t.rows.push_back({static_cast<double>(n), report.log_d[static_cast<std::size_t>(n - report.n0)],
                      value_at(report.hausdorff_ratio, n), value_at(report.upperbox_ratio, n)});
  return t;
}

CsvTable box_table(const BoxCountTable& table) {
  CsvTable t{{"r", "N", "log2_r", "log2_N", "octave_slope"}, {}};
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    double slope = std::numeric_limits<double>::quiet_NaN();
    if (i > 0) {
      const auto& prev = table.rows[i - 1];
      slope = std::log(static_cast<double>(row.N) / static_cast<double>(prev.N)) / std::log(prev.r / row.r);
    }
    t.rows.push_back({row.r, static_cast<double>(row.N), std::log2(row.r), std::log2(static_cast<double>(row.N)), slope});
  }
  return t;
}

}  // namespace weierdim
