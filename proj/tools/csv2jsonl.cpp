// Apache License, Version 2.0, refer to LICENSE.txt
//
// Converts a CSV export of posts into the line-delimited corpus format.
// Expected header: post_id,account_id,timestamp,text,links,likes,shares,comments
// with links separated by '|' inside their field. Embedded newlines are not
// supported.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rolemine/civil.hpp"
#include "rolemine/io.hpp"

using nlohmann::json;

namespace {

std::vector<std::string> parse_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convert a CSV post export to the line-delimited corpus format"};
  std::string input;
  std::string output;
  app.add_option("input", input, "CSV file with a header row")->required();
  app.add_option("output", output, "JSONL output path")->required();
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(input);
  if (!in) {
    std::cerr << "error: cannot open " << input << "\n";
    return 1;
  }
  std::ofstream out(output);
  if (!out) {
    std::cerr << "error: cannot write " << output << "\n";
    return 1;
  }

  std::string line;
  std::vector<std::string> header;
  std::size_t written = 0;
  std::size_t skipped = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header.empty()) {
      header = parse_csv_row(line);
      continue;
    }
    const auto fields = parse_csv_row(line);
    if (fields.size() != header.size()) {
      ++skipped;
      continue;
    }
    json record;
    bool ok = true;
    for (std::size_t i = 0; i < header.size(); ++i) {
      const std::string key = rolemine::to_lower(rolemine::trim(header[i]));
      const std::string& value = fields[i];
      if (key == "post_id" || key == "account_id" || key == "text") {
        record[key] = value;
      } else if (key == "timestamp") {
        const auto parsed = rolemine::parse_utc_timestamp(rolemine::trim(value));
        if (!parsed) {
          ok = false;
          break;
        }
        record[key] = *parsed;
      } else if (key == "links") {
        json links = json::array();
        for (const std::string& piece : rolemine::split_trimmed(value, '|')) {
          if (!piece.empty()) links.push_back(piece);
        }
        record[key] = links;
      } else if (key == "likes" || key == "shares" || key == "comments") {
        try {
          record[key] = std::stoll(value.empty() ? "0" : value);
        } catch (const std::exception&) {
          ok = false;
          break;
        }
      }
      // Unknown columns are dropped.
    }
    if (!ok) {
      ++skipped;
      continue;
    }
    out << record.dump() << "\n";
    ++written;
  }
  std::cerr << "csv2jsonl: wrote " << written << " records, skipped " << skipped
            << "\n";
  return 0;
}
