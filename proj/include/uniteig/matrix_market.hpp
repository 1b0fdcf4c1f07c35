#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "uniteig/matrix.hpp"

namespace uniteig {

// Matrix Market "array" files: a header line, optional '%' comments, a
// "rows cols" line, then the entries in column-major order. Complex entries
// are written as "re im" pairs. Values use 17 significant digits, so a write
// followed by a read is exact.

inline constexpr const char* kRealHeader = "%%MatrixMarket matrix array real general";
inline constexpr const char* kComplexHeader = "%%MatrixMarket matrix array complex general";

void write_matrix_market(std::ostream& out, const RealMatrix& m);
void write_matrix_market(std::ostream& out, const ComplexMatrix& m);

RealMatrix read_real_matrix_market(std::istream& in);
/// Also accepts real-field files (imaginary parts zero).
ComplexMatrix read_complex_matrix_market(std::istream& in);

void save_matrix(const std::string& path, const RealMatrix& m);
void save_matrix(const std::string& path, const ComplexMatrix& m);
RealMatrix load_real_matrix(const std::string& path);
ComplexMatrix load_complex_matrix(const std::string& path);

/// Vectors are stored as n x 1 complex arrays.
void save_vector(const std::string& path, std::span<const cplx> v);
std::vector<cplx> load_complex_vector(const std::string& path);

}  // namespace uniteig
