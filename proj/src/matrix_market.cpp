#include "uniteig/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace uniteig {

namespace {

enum class Field { real, complex };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string format_value(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Header {
  Field field;
  std::size_t rows;
  std::size_t cols;
};

Header read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("Matrix Market: empty input");
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
    throw FormatError("Matrix Market: bad header '" + line + "'");
  }
  if (lower(format) != "array") {
    throw FormatError("Matrix Market: only the array format is supported, got '" + format + "'");
  }
  if (lower(symmetry) != "general") {
    throw FormatError("Matrix Market: only general symmetry is supported, got '" + symmetry + "'");
  }
  Header h{};
  const std::string f = lower(field);
  if (f == "real" || f == "double" || f == "integer") {
    h.field = Field::real;
  } else if (f == "complex") {
    h.field = Field::complex;
  } else {
    throw FormatError("Matrix Market: unsupported field '" + field + "'");
  }
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    std::istringstream ds(line);
    long long r = -1;
    long long c = -1;
    std::string extra;
    if (!(ds >> r >> c) || (ds >> extra) || r < 0 || c < 0) {
      throw FormatError("Matrix Market: bad size line '" + line + "'");
    }
    h.rows = static_cast<std::size_t>(r);
    h.cols = static_cast<std::size_t>(c);
    return h;
  }
  throw FormatError("Matrix Market: missing size line");
}

double read_number(std::istream& in, std::size_t index) {
  std::string tok;
  if (!(in >> tok)) {
    throw FormatError("Matrix Market: expected more values (stopped at entry " +
                      std::to_string(index) + ")");
  }
  // strtod rather than stod: stod rejects subnormals, which a round trip must keep.
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || (errno == ERANGE && std::isinf(x))) {
    throw FormatError("Matrix Market: bad value '" + tok + "'");
  }
  return x;
}

void expect_end(std::istream& in) {
  std::string tok;
  if (in >> tok) throw FormatError("Matrix Market: trailing data '" + tok + "'");
}

template <typename T>
void write_impl(std::ostream& out, const Matrix<T>& m) {
  out << (is_complex_v<T> ? kComplexHeader : kRealHeader) << '\n';
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if constexpr (is_complex_v<T>) {
        out << format_value(m(i, j).real()) << ' ' << format_value(m(i, j).imag()) << '\n';
      } else {
        out << format_value(m(i, j)) << '\n';
      }
    }
  }
}

template <typename M>
M load(const std::string& path, M (*reader)(std::istream&)) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return reader(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

template <typename T>
void save(const std::string& path, const Matrix<T>& m) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_impl(out, m);
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace

void write_matrix_market(std::ostream& out, const RealMatrix& m) { write_impl(out, m); }
void write_matrix_market(std::ostream& out, const ComplexMatrix& m) { write_impl(out, m); }

RealMatrix read_real_matrix_market(std::istream& in) {
  const Header h = read_header(in);
  if (h.field != Field::real) throw FormatError("Matrix Market: expected a real matrix");
  std::vector<double> v(h.rows * h.cols);
  for (std::size_t j = 0; j < h.cols; ++j)
    for (std::size_t i = 0; i < h.rows; ++i) v[i * h.cols + j] = read_number(in, j * h.rows + i);
  expect_end(in);
  return RealMatrix(h.rows, h.cols, std::move(v));
}

ComplexMatrix read_complex_matrix_market(std::istream& in) {
  const Header h = read_header(in);
  std::vector<cplx> v(h.rows * h.cols);
  for (std::size_t j = 0; j < h.cols; ++j) {
    for (std::size_t i = 0; i < h.rows; ++i) {
      const std::size_t index = j * h.rows + i;
      const double re = read_number(in, index);
      const double im = h.field == Field::complex ? read_number(in, index) : 0.0;
      v[i * h.cols + j] = cplx(re, im);
    }
  }
  expect_end(in);
  return ComplexMatrix(h.rows, h.cols, std::move(v));
}

void save_matrix(const std::string& path, const RealMatrix& m) { save(path, m); }
void save_matrix(const std::string& path, const ComplexMatrix& m) { save(path, m); }

RealMatrix load_real_matrix(const std::string& path) {
  return load(path, &read_real_matrix_market);
}

ComplexMatrix load_complex_matrix(const std::string& path) {
  return load(path, &read_complex_matrix_market);
}

void save_vector(const std::string& path, std::span<const cplx> v) {
  save(path, ComplexMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end())));
}

std::vector<cplx> load_complex_vector(const std::string& path) {
  const ComplexMatrix m = load_complex_matrix(path);
  if (m.cols() != 1 && m.rows() != 1) {
    throw FormatError(path + ": expected a vector, got a " +
                      ComplexMatrix::shape_string(m.rows(), m.cols()) + " matrix");
  }
  return {m.data().begin(), m.data().end()};
}

}  // namespace uniteig
