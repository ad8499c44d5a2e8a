#include "fcoord/io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fcoord/errors.hpp"

namespace fcoord {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    out += (c ? "," : "") + table.header[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) {
        out += ',';
      }
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) {
      return cells;
    }
    start = comma + 1;
  }
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t pos = 0;
  bool first = true;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      continue;
    }
    auto cells = split(line);
    if (first) {
      table.header = std::move(cells);
      first = false;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw DomainError("CSV line " + std::to_string(line_no) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(table.header.size()));
    }
    std::vector<double> row;
    for (const auto& cell : cells) {
      char* stop = nullptr;
      errno = 0;
      const double v = std::strtod(cell.c_str(), &stop);
      if (cell.empty() || *stop != '\0') {
        throw DomainError("CSV line " + std::to_string(line_no) + ": not a number '" + cell +
                          "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable samples_table(const RealVector& xs, const ComplexVector& values, bool complex) {
  if (xs.size() != values.size()) {
    throw DomainError("abscissae and values differ in length");
  }
  CsvTable t;
  t.header = complex ? std::vector<std::string>{"x", "value_re", "value_im"}
                     : std::vector<std::string>{"x", "value"};
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    if (complex) {
      t.rows.push_back({xs[i], values[i].real(), values[i].imag()});
    } else {
      t.rows.push_back({xs[i], values[i].real()});
    }
  }
  return t;
}

CsvTable residual_table(const ResidualField& field, bool complex) {
  CsvTable t;
  t.header = complex ? std::vector<std::string>{"x", "y", "R_re", "R_im"}
                     : std::vector<std::string>{"x", "y", "R"};
  for (Eigen::Index i = 0; i < field.xs.size(); ++i) {
    for (Eigen::Index j = 0; j < field.ys.size(); ++j) {
      const Complex v = field.values(i, j);
      if (complex) {
        t.rows.push_back({field.xs[i], field.ys[j], v.real(), v.imag()});
      } else {
        t.rows.push_back({field.xs[i], field.ys[j], v.real()});
      }
    }
  }
  return t;
}

CsvTable kernel_table(const Kernel& k, const Grid& grid) {
  CsvTable t;
  t.header = k.is_complex() ? std::vector<std::string>{"x", "y", "omega_re", "omega_im"}
                            : std::vector<std::string>{"x", "y", "omega"};
  const RealVector ys = k.column_nodes(grid);
  for (int i = 0; i < grid.size(); ++i) {
    for (int j = 0; j < ys.size(); ++j) {
      const Complex v = k(grid.node(i), ys[j]);
      if (k.is_complex()) {
        t.rows.push_back({grid.node(i), ys[j], v.real(), v.imag()});
      } else {
        t.rows.push_back({grid.node(i), ys[j], v.real()});
      }
    }
  }
  return t;
}

CsvTable matrix_table(const OperatorMatrix& m) {
  CsvTable t;
  t.header = {"i", "j", "re", "im"};
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      t.rows.push_back({static_cast<double>(i), static_cast<double>(j), m(i, j).real(),
                        m(i, j).imag()});
    }
  }
  return t;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw IoError("failed reading " + path.string());
  }
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace fcoord
