#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crmm/error.hpp"
#include "crmm/matrix.hpp"

namespace crmm {

// Binary matrix container, format "CRMM1":
//   bytes 0..4   magic "CRMM1"
//   bytes 5..12  rows, uint64 little-endian
//   bytes 13..20 cols, uint64 little-endian
//   then rows*cols IEEE-754 float64 values, row-major, little-endian.

namespace detail {

inline void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline std::uint64_t get_u64_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace detail

inline constexpr char kMatrixMagic[5] = {'C', 'R', 'M', 'M', '1'};

inline void save_matrix(const DenseMatrix& m, const std::string& path) {
  std::string buf;
  buf.reserve(5 + 16 + 8 * m.size());
  buf.append(kMatrixMagic, 5);
  detail::put_u64_le(buf, m.rows());
  detail::put_u64_le(buf, m.cols());
  for (double v : m.data()) detail::put_u64_le(buf, std::bit_cast<std::uint64_t>(v));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(errc::io_error, "cannot open " + path + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(errc::io_error, "short write to " + path);
}

inline DenseMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::io_error, "cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 21 || std::memcmp(buf.data(), kMatrixMagic, 5) != 0) {
    throw Error(errc::bad_format, path + " is not a CRMM1 matrix file");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  const std::uint64_t rows = detail::get_u64_le(p + 5);
  const std::uint64_t cols = detail::get_u64_le(p + 13);
  const std::uint64_t count = rows * cols;
  if (buf.size() != 21 + 8 * count) {
    throw Error(errc::bad_format,
                path + ": payload holds " + std::to_string((buf.size() - 21) / 8) +
                    " values, header promises " + std::to_string(count));
  }
  std::vector<double> data(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    data[i] = std::bit_cast<double>(detail::get_u64_le(p + 21 + 8 * i));
  }
  return DenseMatrix(rows, cols, std::move(data));
}

// CSV import/export.  Export uses %.17g so a round trip is value-exact.

inline void write_matrix_csv(const DenseMatrix& m, std::ostream& out) {
  char cell[40];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(cell, sizeof cell, "%.17g", m(i, j));
      if (j) out << ',';
      out << cell;
    }
    out << '\n';
  }
}

inline void save_matrix_csv(const DenseMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(errc::io_error, "cannot open " + path + " for writing");
  write_matrix_csv(m, out);
  if (!out) throw Error(errc::io_error, "short write to " + path);
}

inline DenseMatrix read_matrix_csv(std::istream& in, const std::string& name = "csv") {
  std::vector<double> data;
  std::size_t rows = 0, cols = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    std::size_t ncols = 0;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      std::string cell = line.substr(start, comma == std::string::npos
                                                ? std::string::npos
                                                : comma - start);
      try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        while (used < cell.size() &&
               (cell[used] == ' ' || cell[used] == '\r' || cell[used] == '\t'))
          ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
        data.push_back(v);
      } catch (const std::exception&) {
        throw Error(errc::bad_format, name + " row " + std::to_string(lineno) +
                                          ": cannot parse \"" + cell + "\"");
      }
      ++ncols;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = ncols;
    } else if (ncols != cols) {
      throw Error(errc::bad_format, name + " row " + std::to_string(lineno) +
                                        " has " + std::to_string(ncols) +
                                        " cells, expected " + std::to_string(cols));
    }
    ++rows;
  }
  return DenseMatrix(rows, cols, std::move(data));
}

inline DenseMatrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_error, "cannot open " + path);
  return read_matrix_csv(in, path);
}

}  // namespace crmm
