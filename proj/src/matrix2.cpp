#include "ptscat/matrix2.hpp"

#include <algorithm>

namespace ptscat {

Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
  return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
          a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
  return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
}

Matrix2 conj(const Matrix2& a) {
  return {std::conj(a.m11), std::conj(a.m12), std::conj(a.m21), std::conj(a.m22)};
}

Matrix2 adjugate(const Matrix2& a) { return {a.m22, -a.m12, -a.m21, a.m11}; }

Matrix2 sigma1_sandwich(const Matrix2& a) { return {a.m22, a.m21, a.m12, a.m11}; }

double max_abs(const Matrix2& a) {
  return std::max({std::abs(a.m11), std::abs(a.m12), std::abs(a.m21), std::abs(a.m22)});
}

double max_abs_diff(const Matrix2& a, const Matrix2& b) { return max_abs(a - b); }

}  // namespace ptscat
