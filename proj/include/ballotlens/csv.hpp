#pragma once

#include <map>
#include <string>
#include <vector>

namespace ballotlens::csv {

// Minimal RFC-4180-ish CSV. Quoted fields, embedded commas and quotes
// supported; no multi-line fields.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws SchemaError if missing.
  std::size_t col(const std::string& name) const;
  bool has_col(const std::string& name) const;
};

std::vector<std::string> split_line(const std::string& line);
std::string join_line(const std::vector<std::string>& fields);

Table read_file(const std::string& path);   // throws SchemaError (missing file, no header)
Table parse(const std::string& content);

void write_file(const std::string& path, const Table& t);

}  // namespace ballotlens::csv
