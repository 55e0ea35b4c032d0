#pragma once

// Minimal RFC-4180 CSV for numeric tables: one mandatory header row, LF line
// endings, numbers in shortest round-trip form.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace thermoq::cli {

/// Shortest decimal string that parses back to exactly x.
std::string format_number(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& out, const CsvTable& table);
std::string to_csv(const CsvTable& table);

/// Throws std::runtime_error on malformed input (ragged rows, non-numeric
/// cells, unterminated quotes).
CsvTable parse_csv(std::string_view text);

}  // namespace thermoq::cli
