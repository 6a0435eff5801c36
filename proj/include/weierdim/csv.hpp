#pragma once

#include <string>
#include <vector>

#include "weierdim/grid.hpp"
#include "weierdim/theory.hpp"

namespace weierdim {

// A numeric table. Empty cells (e.g. the first octave slope) are NaN and are
// written as empty fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// RFC 4180 text: CRLF line ends, quoted fields where needed, 17 significant digits.
std::string to_csv(const CsvTable& table);
void export_csv(const CsvTable& table, const std::string& path);

// Columns n, log_d, ratio_H, ratio_B.
CsvTable dimension_table(const DimensionReport& report);
// Columns r, N, log2_r, log2_N, octave_slope.
CsvTable box_table(const BoxCountTable& table);

}  // namespace weierdim
