#ifndef MGFNORM_CSV_HPP
#define MGFNORM_CSV_HPP

// Comma-separated data files: one observation per row, an optional header
// row (detected by a non-numeric first line), blank lines ignored.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mgfnorm/linalg.hpp"

namespace mgfnorm {

struct CsvData {
  std::vector<std::string> header;  // empty when the file has none
  Matrix<double> values;
};

/// Throws ParseError naming the line and column of the first bad cell, or of
/// a row whose length differs from the first row.
CsvData parse_csv(std::istream& in, const std::string& source = "<input>");
CsvData read_csv_file(const std::filesystem::path& file);

/// Parsed file as a DataMatrix; InvalidData if n < d + 1.
DataMatrix<double> read_data_matrix(const std::filesystem::path& file);

/// Writes every value with 17 significant digits, so that re-reading gives
/// bit-identical doubles.
void write_csv(std::ostream& out, const Matrix<double>& values,
               const std::vector<std::string>& header = {});

}  // namespace mgfnorm

#endif  // MGFNORM_CSV_HPP
