#include "nlpbma/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace nlpbma {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  CsvTable table;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (table.header.empty()) {
      for (const auto& f : fields) {
        const std::string name = trim(f);
        if (name.empty()) throw CsvError("empty column name in header", line_no);
        table.header.push_back(name);
      }
      continue;
    }
    if (fields.size() != table.header.size())
      throw CsvError("expected " + std::to_string(table.header.size()) + " fields, got " +
                         std::to_string(fields.size()),
                     line_no);
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const std::string cell = trim(fields[j]);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw CsvError("non-numeric value '" + cell + "' in column '" + table.header[j] + "'",
                       line_no);
      row[j] = v;
    }
    rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw CsvError("missing header row", 1);
  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(table.header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return table;
}

CsvTable read_csv(const std::string& path) {
  return parse_csv(read_text_file(path));
}

Dataset dataset_from_table(const CsvTable& table) {
  if (table.header.size() < 2)
    throw CsvError("need a response column and at least one covariate", 1);
  if (table.values.rows() < 1) throw CsvError("no data rows", 2);
  Dataset data;
  data.y = table.values.col(0);
  data.X = table.values.rightCols(table.values.cols() - 1);
  data.column_names.assign(table.header.begin() + 1, table.header.end());
  data.validate();
  return data;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string render_csv(const std::vector<std::string>& header, const Matrix& values) {
  if (static_cast<Eigen::Index>(header.size()) != values.cols())
    throw std::invalid_argument("render_csv: header width mismatch");
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out.push_back(',');
    out += header[j];
  }
  out.push_back('\n');
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) out.push_back(',');
      out += format_double(values(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace nlpbma
