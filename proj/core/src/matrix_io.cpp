#include "detperm/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "detperm/errors.hpp"
#include "detperm/json_writer.hpp"

namespace detperm {

namespace {

bool is_blank(const std::string& line) {
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Parses one CSV cell. `col` is the 1-based character position of the cell's
// first byte within its line, used for diagnostics.
double parse_cell(const std::string& cell, std::size_t line_no,
                  std::size_t col) {
  std::size_t begin = 0;
  std::size_t end = cell.size();
  while (begin < end &&
         std::isspace(static_cast<unsigned char>(cell[begin]))) {
    ++begin;
  }
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(cell[end - 1]))) {
    --end;
  }
  if (begin == end) {
    throw ParseError("empty cell", line_no, col + begin);
  }
  double value = 0.0;
  const char* first = cell.data() + begin;
  const char* last = cell.data() + end;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("expected a number, got '" +
                         cell.substr(begin, end - begin) + "'",
                     line_no, col + begin);
  }
  return value;
}

}  // namespace

ParseError json_parse_error(const std::string& text, std::size_t byte_offset,
                            const std::string& message) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte_offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return ParseError(message, line, column);
}

DenseMatrix read_matrix_csv(std::istream& in) {
  std::vector<double> entries;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      if (rows == 0) {
        throw ParseError("blank line before any matrix row", line_no, 1);
      }
      // Allow trailing blank lines; anything after must be blank too.
      std::string rest;
      std::size_t rest_no = line_no;
      while (std::getline(in, rest)) {
        ++rest_no;
        if (!rest.empty() && rest.back() == '\r') rest.pop_back();
        if (!is_blank(rest)) {
          throw ParseError("blank line between matrix rows", line_no, 1);
        }
      }
      break;
    }
    std::size_t row_cols = 0;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      std::size_t cell_end = comma == std::string::npos ? line.size() : comma;
      entries.push_back(
          parse_cell(line.substr(pos, cell_end - pos), line_no, pos + 1));
      ++row_cols;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (rows == 0) {
      cols = row_cols;
    } else if (row_cols != cols) {
      throw ParseError("row has " + std::to_string(row_cols) +
                           " entries, expected " + std::to_string(cols),
                       line_no, 1);
    }
    ++rows;
  }
  if (rows == 0) {
    throw ParseError("no matrix rows found", 1, 1);
  }
  return DenseMatrix(rows, cols, std::move(entries));
}

DenseMatrix read_matrix_json(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw json_parse_error(text, e.byte > 0 ? e.byte - 1 : 0);
  }

  if (!doc.is_object()) {
    throw ParseError("expected a JSON object with rows/cols/entries", 1, 1);
  }
  for (const char* field : {"rows", "cols", "entries"}) {
    if (!doc.contains(field)) {
      throw ParseError(std::string("missing field '") + field + "'", 1, 1);
    }
  }
  if (!doc["rows"].is_number_integer() || !doc["cols"].is_number_integer()) {
    throw ParseError("rows and cols must be integers", 1, 1);
  }
  const std::int64_t rows = doc["rows"].get<std::int64_t>();
  const std::int64_t cols = doc["cols"].get<std::int64_t>();
  if (rows <= 0 || cols <= 0) {
    throw DomainError("matrix dimensions must be positive");
  }
  if (!doc["entries"].is_array()) {
    throw ParseError("entries must be an array of numbers", 1, 1);
  }
  std::vector<double> entries;
  entries.reserve(doc["entries"].size());
  for (const auto& item : doc["entries"]) {
    if (!item.is_number()) {
      throw ParseError("entries must be an array of numbers", 1, 1);
    }
    entries.push_back(item.get<double>());
  }
  return DenseMatrix(static_cast<std::size_t>(rows),
                     static_cast<std::size_t>(cols), std::move(entries));
}

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

DenseMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open input file: " + path);
  }
  if (has_suffix(path, ".json")) return read_matrix_json(in);
  if (has_suffix(path, ".csv")) return read_matrix_csv(in);
  int c = in.peek();
  while (c != std::char_traits<char>::eof() &&
         std::isspace(static_cast<unsigned char>(c))) {
    in.get();
    c = in.peek();
  }
  if (c == '{') return read_matrix_json(in);
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_json(std::ostream& out, const DenseMatrix& m) {
  out << "{\"rows\": " << m.rows() << ", \"cols\": " << m.cols()
      << ", \"entries\": [";
  const auto& entries = m.entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k > 0) out << ", ";
    out << format_double(entries[k]);
  }
  out << "]}\n";
}

void write_matrix_file(const std::string& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot open output file: " + path);
  }
  if (has_suffix(path, ".json")) {
    write_matrix_json(out, m);
  } else {
    write_matrix_csv(out, m);
  }
}

}  // namespace detperm
