#include "mgfnorm/csv.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mgfnorm/detail/text.hpp"
#include "mgfnorm/errors.hpp"

namespace mgfnorm {

namespace {

bool all_numeric(const std::vector<std::string_view>& cells) {
  for (auto c : cells) {
    try {
      detail::parse_double(c, "");
    } catch (const ParseError&) {
      return false;
    }
  }
  return true;
}

}  // namespace

CsvData parse_csv(std::istream& in, const std::string& source) {
  CsvData out;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split(line, ',');
    if (first) {
      first = false;
      width = cells.size();
      if (!all_numeric(cells)) {
        for (auto c : cells) out.header.emplace_back(detail::trim(c));
        continue;
      }
    }
    if (cells.size() != width) {
      std::ostringstream msg;
      msg << source << ": line " << line_no << " has " << cells.size() << " columns, expected "
          << width;
      throw ParseError(msg.str());
    }
    std::vector<double> row;
    row.reserve(width);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::ostringstream where;
      where << source << ": line " << line_no << ", column " << c + 1;
      row.push_back(detail::parse_double(cells[c], where.str()));
      if (!std::isfinite(row.back())) {
        throw ParseError(where.str() + ": value is not finite");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(source + ": no data rows");
  out.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      out.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return out;
}

CsvData read_csv_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open " + file.string());
  return parse_csv(in, file.string());
}

DataMatrix<double> read_data_matrix(const std::filesystem::path& file) {
  return DataMatrix<double>(read_csv_file(file).values);
}

void write_csv(std::ostream& out, const Matrix<double>& values,
               const std::vector<std::string>& header) {
  for (std::size_t j = 0; j < header.size(); ++j) {
    out << (j ? "," : "") << header[j];
  }
  if (!header.empty()) out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      out << (j ? "," : "") << detail::format_exact(values(i, j));
    }
    out << '\n';
  }
}

}  // namespace mgfnorm
