#pragma once

#include <complex>

namespace ptscat {

using cplx = std::complex<double>;

/// Dense 2x2 complex matrix, row-major entries.
struct Matrix2 {
  cplx m11{1.0}, m12{0.0}, m21{0.0}, m22{1.0};

  static Matrix2 identity() { return {}; }
  static Matrix2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

  cplx det() const { return m11 * m22 - m12 * m21; }

  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

Matrix2 operator*(const Matrix2& a, const Matrix2& b);
Matrix2 operator-(const Matrix2& a, const Matrix2& b);

Matrix2 conj(const Matrix2& a);
Matrix2 adjugate(const Matrix2& a);

/// sigma1 * a * sigma1 with sigma1 the first Pauli matrix: swaps both rows and columns.
Matrix2 sigma1_sandwich(const Matrix2& a);

double max_abs(const Matrix2& a);
double max_abs_diff(const Matrix2& a, const Matrix2& b);

}  // namespace ptscat
