#pragma once

#include <string_view>

#include "ptscat/transfer.hpp"

namespace ptscat {

enum class SymmetryAction { parity, time_reversal, pt };

std::string_view to_string(SymmetryAction a);

/// sigma1 M^{-1} sigma1. Throws SingularMatrix when det M == 0; warns when |det M - 1| > 1e-6.
Matrix2 apply_parity(const Matrix2& m);
/// sigma1 M^* sigma1.
Matrix2 apply_time_reversal(const Matrix2& m);
/// (M^{-1})^*.
Matrix2 apply_pt(const Matrix2& m);

Matrix2 apply(SymmetryAction action, const Matrix2& m);

TransferMatrix apply(SymmetryAction action, const TransferMatrix& t);

/// max |M_ij - action(M)_ij|.
double invariance_residual(const Matrix2& m, SymmetryAction action);

}  // namespace ptscat
