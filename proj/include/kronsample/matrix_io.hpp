#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kronsample/linalg.hpp"

namespace kronsample {

static_assert(std::endian::native == std::endian::little,
              "matrix container is little-endian");

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Splits "a+bi" / "a-bi" at the sign that starts the imaginary part
// (signs directly after an exponent marker do not count).
inline Complex parse_complex(std::string s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.pop_back();
  }
  if (s.empty()) throw std::runtime_error("csv: empty entry");
  auto to_double = [](const std::string& t) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != t.size()) throw std::runtime_error("csv: malformed number '" + t + "'");
    return v;
  };
  if (s.back() != 'i') return Complex(to_double(s), 0.0);
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t p = s.size(); p-- > 1;) {
    if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  if (split == std::string::npos) return Complex(0.0, to_double(s));
  double re = to_double(s.substr(0, split));
  std::string im = s.substr(split);
  if (im == "+") im = "1";
  if (im == "-") im = "-1";
  return Complex(re, to_double(im));
}

}  // namespace detail

// CSV layout: one matrix row per line, entries "a+bi" separated by commas.
inline void write_matrix_csv(const std::string& path, const Matrix& m) {
  validate_matrix(m, "write_matrix_csv");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_csv: cannot open " + path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      const Complex v = m(i, j);
      out << detail::format_double(v.real());
      if (v.imag() >= 0 || std::isnan(v.imag())) out << '+';
      out << detail::format_double(v.imag()) << 'i';
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_matrix_csv: write failed for " + path);
}

inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_matrix_csv: cannot open " + path);
  std::vector<std::vector<Complex>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    std::vector<Complex> row;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      std::string cell = comma == std::string::npos
                             ? line.substr(start)
                             : line.substr(start, comma - start);
      row.push_back(detail::parse_complex(cell));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("read_matrix_csv: ragged rows in " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("read_matrix_csv: no data in " + path);
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  validate_matrix(m, "read_matrix_csv");
  return m;
}

// Binary layout: magic "KSMAT1", u64 rows, u64 cols, u8 is_complex, then the
// row-major float64 payload (re,im interleaved when is_complex is 1).
inline void write_matrix_bin(const std::string& path, const Matrix& m) {
  validate_matrix(m, "write_matrix_bin");
  bool is_complex = false;
  for (Index i = 0; i < m.rows() && !is_complex; ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j).imag() != 0.0) {
        is_complex = true;
        break;
      }
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_matrix_bin: cannot open " + path);
  out.write("KSMAT1", 6);
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
  out.write(reinterpret_cast<const char*>(&rows), 8);
  out.write(reinterpret_cast<const char*>(&cols), 8);
  const std::uint8_t flag = is_complex ? 1 : 0;
  out.write(reinterpret_cast<const char*>(&flag), 1);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const double re = m(i, j).real();
      out.write(reinterpret_cast<const char*>(&re), 8);
      if (is_complex) {
        const double im = m(i, j).imag();
        out.write(reinterpret_cast<const char*>(&im), 8);
      }
    }
  }
  if (!out) throw std::runtime_error("write_matrix_bin: write failed for " + path);
}

inline Matrix read_matrix_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_matrix_bin: cannot open " + path);
  char magic[6];
  in.read(magic, 6);
  if (!in || std::memcmp(magic, "KSMAT1", 6) != 0) {
    throw std::runtime_error("read_matrix_bin: bad magic in " + path);
  }
  std::uint64_t rows = 0, cols = 0;
  std::uint8_t flag = 0;
  in.read(reinterpret_cast<char*>(&rows), 8);
  in.read(reinterpret_cast<char*>(&cols), 8);
  in.read(reinterpret_cast<char*>(&flag), 1);
  if (!in || rows == 0 || cols == 0 || flag > 1) {
    throw std::runtime_error("read_matrix_bin: bad header in " + path);
  }
  if (rows > (1u << 30) || cols > (1u << 30) ||
      rows * cols > (1ull << 32)) {
    throw std::runtime_error("read_matrix_bin: implausible shape in " + path);
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      double re = 0, im = 0;
      in.read(reinterpret_cast<char*>(&re), 8);
      if (flag) in.read(reinterpret_cast<char*>(&im), 8);
      if (!in) throw std::runtime_error("read_matrix_bin: truncated payload in " + path);
      m(i, j) = Complex(re, im);
    }
  }
  validate_matrix(m, "read_matrix_bin");
  return m;
}

}  // namespace kronsample
