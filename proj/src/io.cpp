#include "otdr/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace otdr {

static_assert(std::endian::native == std::endian::little,
              "OTPB reader/writer assumes a little-endian host");

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

[[noreturn]] void fail_line(const std::string& path, long line,
                            const std::string& what) {
  fail(path, "line " + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) fail(path, "cannot open for reading");
  return in;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) fail(path, "cannot open for writing");
  return out;
}

double parse_double(const std::string& token, const std::string& path,
                    long line) {
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    while (used < token.size() && std::isspace(
               static_cast<unsigned char>(token[used]))) {
      ++used;
    }
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    fail_line(path, line, "cannot parse number '" + token + "'");
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream ss(line);
  while (std::getline(ss, token, ',')) out.push_back(token);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::vector<double> row;
    for (const auto& token : split_csv(line)) {
      row.push_back(parse_double(token, path, lineno));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail_line(path, lineno,
                "expected " + std::to_string(rows.front().size()) +
                    " columns, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(path, "no data rows");
  return rows;
}

constexpr char kMagic[4] = {'O', 'T', 'P', 'B'};

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Matrix read_matrix_csv(const std::string& path) {
  auto rows = read_rows(path);
  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  auto out = open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) fail(path, "write failed");
}

Matrix read_matrix_otpb(const std::string& path) {
  auto in = open_in(path, true);
  char header[16];
  if (!in.read(header, 16) || std::memcmp(header, kMagic, 4) != 0) {
    fail(path, "not an OTPB file (bad magic)");
  }
  std::uint32_t m32, n32;
  std::memcpy(&m32, header + 4, 4);
  std::memcpy(&n32, header + 8, 4);
  if (m32 == 0 || n32 == 0) fail(path, "zero dimension in OTPB header");
  Matrix m(static_cast<Index>(m32), static_cast<Index>(n32));
  // Row-major payload matches the in-memory layout.
  if (!in.read(reinterpret_cast<char*>(m.data()),
               static_cast<std::streamsize>(sizeof(double)) * m.size())) {
    fail(path, "truncated OTPB payload");
  }
  return m;
}

void write_matrix_otpb(const std::string& path, const Matrix& m) {
  auto out = open_out(path, true);
  char header[16] = {};
  std::memcpy(header, kMagic, 4);
  auto m32 = static_cast<std::uint32_t>(m.rows());
  auto n32 = static_cast<std::uint32_t>(m.cols());
  std::memcpy(header + 4, &m32, 4);
  std::memcpy(header + 8, &n32, 4);
  out.write(header, 16);
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double)) * m.size());
  if (!out) fail(path, "write failed");
}

Matrix read_matrix(const std::string& path) {
  {
    auto in = open_in(path, true);
    char magic[4];
    if (in.read(magic, 4) && std::memcmp(magic, kMagic, 4) == 0) {
      return read_matrix_otpb(path);
    }
  }
  return read_matrix_csv(path);
}

Vector read_vector(const std::string& path) {
  auto rows = read_rows(path);
  // Accept a column of values or a single CSV row.
  if (rows.front().size() == 1) {
    Vector v(static_cast<Index>(rows.size()));
    for (Index i = 0; i < v.size(); ++i) {
      v[i] = rows[static_cast<std::size_t>(i)].front();
    }
    return v;
  }
  if (rows.size() == 1) {
    Vector v(static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < v.size(); ++i) {
      v[i] = rows.front()[static_cast<std::size_t>(i)];
    }
    return v;
  }
  fail(path, "expected a vector (one column or one row)");
}

void write_vector(const std::string& path, const Vector& v) {
  auto out = open_out(path);
  for (Index i = 0; i < v.size(); ++i) out << format_double(v[i]) << '\n';
  if (!out) fail(path, "write failed");
}

GroupPartition read_groups(const std::string& path, Index rows, Index cols) {
  auto in = open_in(path);
  std::vector<std::vector<GroupPartition::Cell>> groups;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line) || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string kind;
    ss >> kind;
    if (kind == "g") {
      // g <id>: (i,j) (i,j) ...
      std::string id;
      ss >> id;
      std::vector<GroupPartition::Cell> cells;
      std::string cell;
      while (ss >> cell) {
        int i, j;
        if (std::sscanf(cell.c_str(), "(%d,%d)", &i, &j) != 2) {
          fail_line(path, lineno, "bad cell '" + cell + "'");
        }
        cells.emplace_back(i, j);
      }
      if (cells.empty()) fail_line(path, lineno, "empty group");
      groups.push_back(std::move(cells));
    } else if (kind == "cols") {
      // cols <label>: j1..j2 rows i1..i2  (inclusive rectangular block)
      std::string label, range, rows_kw, row_range;
      ss >> label >> range >> rows_kw >> row_range;
      int j1, j2, i1, i2;
      if (rows_kw != "rows" ||
          std::sscanf(range.c_str(), "%d..%d", &j1, &j2) != 2 ||
          std::sscanf(row_range.c_str(), "%d..%d", &i1, &i2) != 2) {
        fail_line(path, lineno, "bad shorthand (want 'cols <label>: j1..j2 rows i1..i2')");
      }
      std::vector<GroupPartition::Cell> cells;
      for (int i = i1; i <= i2; ++i) {
        for (int j = j1; j <= j2; ++j) cells.emplace_back(i, j);
      }
      if (cells.empty()) fail_line(path, lineno, "empty group");
      groups.push_back(std::move(cells));
    } else {
      fail_line(path, lineno, "unknown group line kind '" + kind + "'");
    }
  }
  try {
    return make_partition(rows, cols, groups);
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

void write_groups(const std::string& path, const GroupPartition& partition) {
  auto out = open_out(path);
  for (std::size_t g = 0; g < partition.num_groups(); ++g) {
    out << "g " << g << ':';
    for (auto [i, j] : partition.group(g)) {
      out << " (" << i << ',' << j << ')';
    }
    out << '\n';
  }
  if (!out) fail(path, "write failed");
}

PointCloud read_point_cloud(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail(path, "empty file");
  auto header = split_csv(line);
  bool labeled = !header.empty() && header.back() == "label";
  Index dim = static_cast<Index>(header.size()) - (labeled ? 1 : 0);
  if (dim < 1) fail(path, "point cloud needs at least one coordinate column");

  std::vector<std::vector<double>> coords;
  std::vector<int> labels;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto tokens = split_csv(line);
    if (static_cast<Index>(tokens.size()) != dim + (labeled ? 1 : 0)) {
      fail_line(path, lineno, "wrong column count");
    }
    std::vector<double> row(static_cast<std::size_t>(dim));
    for (Index d = 0; d < dim; ++d) {
      row[static_cast<std::size_t>(d)] =
          parse_double(tokens[static_cast<std::size_t>(d)], path, lineno);
    }
    coords.push_back(std::move(row));
    if (labeled) {
      double l = parse_double(tokens.back(), path, lineno);
      if (l != std::floor(l) || l < 0) {
        fail_line(path, lineno, "labels must be non-negative integers");
      }
      labels.push_back(static_cast<int>(l));
    }
  }
  if (coords.empty()) fail(path, "no points");

  PointCloud cloud;
  cloud.points.resize(static_cast<Index>(coords.size()), dim);
  for (Index i = 0; i < cloud.points.rows(); ++i) {
    for (Index d = 0; d < dim; ++d) {
      cloud.points(i, d) =
          coords[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
    }
  }
  cloud.labels = std::move(labels);
  return cloud;
}

void write_point_cloud(const std::string& path, const PointCloud& cloud) {
  auto out = open_out(path);
  for (Index d = 0; d < cloud.dim(); ++d) {
    if (d) out << ',';
    out << 'x' << d;
  }
  if (cloud.labeled()) out << ",label";
  out << '\n';
  for (Index i = 0; i < cloud.size(); ++i) {
    for (Index d = 0; d < cloud.dim(); ++d) {
      if (d) out << ',';
      out << format_double(cloud.points(i, d));
    }
    if (cloud.labeled()) out << ',' << cloud.labels[static_cast<std::size_t>(i)];
    out << '\n';
  }
  if (!out) fail(path, "write failed");
}

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& trace) {
  auto out = open_out(path);
  out << "iter,r_primal,gap,dual_residual,support,elapsed_ms\n";
  for (const auto& row : trace) {
    out << row.iter << ',' << format_double(row.r_primal) << ',';
    if (!std::isnan(row.gap)) out << format_double(row.gap);
    out << ',';
    if (!std::isnan(row.dual_residual)) out << format_double(row.dual_residual);
    out << ',' << row.support << ',' << format_double(row.elapsed_ms) << '\n';
  }
  if (!out) fail(path, "write failed");
}

}  // namespace otdr
