#pragma once

#include "nlpbma/dataset.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace nlpbma {

struct CsvError : std::runtime_error {
  int line;
  CsvError(const std::string& msg, int line_in)
      : std::runtime_error(msg + " (line " + std::to_string(line_in) + ")"),
        line(line_in) {}
};

struct CsvTable {
  std::vector<std::string> header;
  Matrix values;
};

/* Numeric CSV with a mandatory header row; rejects ragged rows and
 * non-numeric cells with the offending line number. */
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

/* First column is the response, remaining columns the design. */
Dataset dataset_from_table(const CsvTable& table);

/* Shortest round-trip decimal representation (deterministic). */
std::string format_double(double x);

std::string render_csv(const std::vector<std::string>& header, const Matrix& values);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace nlpbma
