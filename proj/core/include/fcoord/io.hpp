#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fcoord/grid.hpp"
#include "fcoord/kernels.hpp"

namespace fcoord {

/// Rectangular numeric table with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  friend bool operator==(const CsvTable&, const CsvTable&) = default;
};

/// 17 significant digits ("%.17g").
std::string format_double(double v);

/// Comma separated, one header line, '\n' line ends, 17 digit values.
std::string to_csv(const CsvTable& table);
/// Throws DomainError on ragged rows or unparsable cells.
CsvTable parse_csv(std::string_view text);

/// x, value (real) or x, value_re, value_im (complex) rows.
CsvTable samples_table(const RealVector& xs, const ComplexVector& values, bool complex);

/// x, y, R or x, y, R_re, R_im rows.
CsvTable residual_table(const ResidualField& field, bool complex);

/// (x, y, omega) triples of a kernel on a grid's nodes and column nodes.
CsvTable kernel_table(const Kernel& k, const Grid& grid);

/// i, j, re, im entries of a matrix.
CsvTable matrix_table(const OperatorMatrix& m);

/// Throws IoError.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Pretty JSON with a trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace fcoord
