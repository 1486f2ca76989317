#pragma once

#include <string>
#include <vector>

namespace sdefit {

// Locale-independent formatting with 17 significant digits, enough for an
// exact double round-trip; integers render without an exponent.
std::string format_double(double value);
std::string format_int(long long value);

double parse_double(const std::string& text);
long long parse_int(const std::string& text);

// Comma-separated table with a header row and LF line endings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
  double value(std::size_t row, const std::string& name) const;
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

}  // namespace sdefit
