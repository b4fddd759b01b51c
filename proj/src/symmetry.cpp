#include "ptscat/symmetry.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ptscat/errors.hpp"

namespace ptscat {
namespace {

constexpr double kDetDriftWarning = 1e-6;

Matrix2 inverse(const Matrix2& m) {
  const cplx det = m.det();
  if (det == cplx{}) throw SingularMatrix("symmetry action on a singular matrix");
  if (std::abs(det - 1.0) > kDetDriftWarning)
    warn(fmt::format("transfer matrix determinant drifted from 1 by {:.3e}", std::abs(det - 1.0)));
  const Matrix2 adj = adjugate(m);
  return {adj.m11 / det, adj.m12 / det, adj.m21 / det, adj.m22 / det};
}

}  // namespace

std::string_view to_string(SymmetryAction a) {
  switch (a) {
    case SymmetryAction::parity: return "P";
    case SymmetryAction::time_reversal: return "T";
    case SymmetryAction::pt: return "PT";
  }
  return "?";
}

Matrix2 apply_parity(const Matrix2& m) { return sigma1_sandwich(inverse(m)); }

Matrix2 apply_time_reversal(const Matrix2& m) { return sigma1_sandwich(conj(m)); }

Matrix2 apply_pt(const Matrix2& m) { return conj(inverse(m)); }

Matrix2 apply(SymmetryAction action, const Matrix2& m) {
  switch (action) {
    case SymmetryAction::parity: return apply_parity(m);
    case SymmetryAction::time_reversal: return apply_time_reversal(m);
    case SymmetryAction::pt: return apply_pt(m);
  }
  return m;
}

TransferMatrix apply(SymmetryAction action, const TransferMatrix& t) {
  return {apply(action, t.m), t.k, t.backend};
}

double invariance_residual(const Matrix2& m, SymmetryAction action) { return max_abs_diff(m, apply(action, m)); }

}  // namespace ptscat
