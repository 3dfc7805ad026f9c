// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace rolemine {

/// Shortest round-trip decimal rendering of a double. Deterministic, so
/// repeated runs produce byte-identical artifacts.
std::string format_double(double value);

/// RFC-4180 style quoting; only quotes when the field needs it.
std::string csv_escape(std::string_view field);

/// Minimal CSV writer with deterministic float formatting.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void write_row(const std::vector<std::string>& fields);
  bool good() const { return out_.good(); }

 private:
  std::ofstream out_;
};

/// Reads a whole file; throws std::runtime_error when unreadable.
std::string read_file(const std::filesystem::path& path);

/// Splits on a delimiter, trimming ASCII whitespace from each piece.
std::vector<std::string> split_trimmed(std::string_view text, char delim);

std::string trim(std::string_view text);
std::string to_lower(std::string_view text);

}  // namespace rolemine
