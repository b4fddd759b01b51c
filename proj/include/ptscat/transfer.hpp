#pragma once

#include <cstddef>
#include <string_view>

#include "ptscat/matrix2.hpp"
#include "ptscat/potential.hpp"

namespace ptscat {

// Asymptotic convention: psi(x) -> A_- e^{ikx} + B_- e^{-ikx} as x -> -inf and
// A_+ e^{ikx} + B_+ e^{-ikx} as x -> +inf, with the plane waves referenced to x = 0.
// The transfer matrix maps (A_-, B_-) to (A_+, B_+).

enum class Backend { stack, ode };

std::string_view to_string(Backend b);

struct TransferMatrix {
  Matrix2 m;
  double k = 0.0;
  Backend backend = Backend::stack;

  /// |M22|; vanishes at a spectral singularity.
  double condition() const { return std::abs(m.m22); }
};

struct AsymptoticCoefficients {
  cplx a_minus, b_minus, a_plus, b_plus;
};

/// Propagates left-side coefficients to the right side.
AsymptoticCoefficients propagate(const TransferMatrix& t, cplx a_minus, cplx b_minus);

/// Exact matrix of a constant slab v0 occupying [x_left, x_left + width].
TransferMatrix layer_matrix(cplx v0, double width, double k, double x_left = 0.0);

/// Same slab with the interior wavenumber supplied explicitly (kappa^2 must equal k^2 - v0).
/// The result depends only on kappa^2, for either square-root branch.
TransferMatrix layer_matrix_with_kappa(cplx v0, double width, double k, double x_left, cplx kappa);

/// Ordered product of layer matrices, rightmost layer applied last.
TransferMatrix transfer_matrix_stack(const Potential& p, double k);

struct OdeOptions {
  double tol = 1e-11;              ///< local error per step, mixed absolute/relative
  std::size_t max_steps = 4000000;  ///< attempts per integration, summed over segments
};

/// Integrates the wave equation across the support for pure e^{ikx} and e^{-ikx} data on the left.
TransferMatrix transfer_matrix_ode(const Potential& p, double k, const OdeOptions& opts = {});

TransferMatrix transfer_matrix(const Potential& p, double k, Backend backend,
                               const OdeOptions& opts = {});

/// Stack for layer potentials, ode otherwise.
Backend preferred_backend(const Potential& p);

inline constexpr double kSingularityFloor = 1e-12;

struct ScatteringData {
  double k = 0.0;
  cplx t, r_left, r_right;
  cplx d;  ///< T^2 - R_left R_right
  bool finite = false;
  double condition = 0.0;  ///< |M22|
};

/// Reads amplitudes off the matrix entries: T = 1/M22, R_left = -M21/M22, R_right = M12/M22.
/// Below the singularity floor on |M22| the amplitudes are NaN and `finite` is false.
ScatteringData scattering_data(const TransferMatrix& t, double singularity_floor = kSingularityFloor);

/// Inverse dictionary: the matrix with the given amplitudes (requires T != 0).
Matrix2 matrix_from_amplitudes(cplx t, cplx r_left, cplx r_right);

/// M(-k) = sigma1 M(k) sigma1.
TransferMatrix negative_k_matrix(const TransferMatrix& t);

}  // namespace ptscat
