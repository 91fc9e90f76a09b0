#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "detperm/errors.hpp"
#include "detperm/matrix.hpp"

namespace detperm {

/// ParseError carrying the 1-based line/column of `byte_offset` within
/// `text`; shared by everything that reads JSON.
ParseError json_parse_error(const std::string& text, std::size_t byte_offset,
                            const std::string& message = "invalid JSON");

/// CSV layout: one matrix row per line, entries comma-separated. JSON layout:
/// {"rows": n, "cols": m, "entries": [row-major numbers]}. Readers throw
/// ParseError with a 1-based line/column position for malformed input.

DenseMatrix read_matrix_csv(std::istream& in);
DenseMatrix read_matrix_json(std::istream& in);

/// Dispatches on the file extension (.csv / .json); anything else is sniffed
/// by the first non-space byte ('{' means JSON).
DenseMatrix read_matrix_file(const std::string& path);

void write_matrix_csv(std::ostream& out, const DenseMatrix& m);
void write_matrix_json(std::ostream& out, const DenseMatrix& m);

/// Dispatches on extension; .json writes JSON, everything else CSV.
void write_matrix_file(const std::string& path, const DenseMatrix& m);

}  // namespace detperm
