#ifndef EVAC_CSV_HPP_
#define EVAC_CSV_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace evac::csv {

// Comma-separated table with a header row. Fields may be quoted with
// double quotes; embedded quotes are doubled per the usual convention.
struct Table {
  std::string source;  // file name, for error messages
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a required column; throws SchemaError naming the column.
  std::size_t column(const std::string& name) const;
  // Index of an optional column, or npos.
  std::size_t find_column(const std::string& name) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

Table read_file(const std::string& path);
Table parse(const std::string& text, const std::string& source_name);

std::string escape(const std::string& field);
void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

// Numeric field parsing with row-aware error messages.
std::int64_t to_int(const Table& t, std::size_t row, std::size_t col);
double to_double(const Table& t, std::size_t row, std::size_t col);

}  // namespace evac::csv

#endif  // EVAC_CSV_HPP_
