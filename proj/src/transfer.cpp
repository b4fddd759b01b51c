#include "ptscat/transfer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint/stepper/runge_kutta_cash_karp54.hpp>
#include <fmt/format.h>

#include "ptscat/errors.hpp"

namespace ptscat {
namespace {

constexpr cplx kI{0.0, 1.0};

void require_nonzero_k(double k) {
  if (k == 0.0 || !std::isfinite(k)) throw DomainError("wavenumber k must be finite and nonzero");
}

// sin(z)/z, with the series near zero.
cplx sinc_times(cplx kappa, double w) {
  const cplx z = kappa * w;
  if (std::abs(z) < 1e-3) {
    const cplx z2 = z * z;
    return w * (1.0 - z2 / 6.0 + z2 * z2 / 120.0);
  }
  return std::sin(z) / kappa;
}

// Columns of the fundamental matrix for pure e^{ikx} and e^{-ikx} data, mapped back to plane-wave
// coefficients at x.
Matrix2 plane_wave_coefficients(double k, double x, cplx psi_a, cplx dpsi_a, cplx psi_b, cplx dpsi_b) {
  const cplx em = std::exp(-kI * k * x);
  const cplx ep = std::exp(kI * k * x);
  const cplx ik = kI * k;
  return {0.5 * em * (psi_a + dpsi_a / ik), 0.5 * em * (psi_b + dpsi_b / ik),
          0.5 * ep * (psi_a - dpsi_a / ik), 0.5 * ep * (psi_b - dpsi_b / ik)};
}

using OdeState = std::array<cplx, 4>;  // psi_a, psi_a', psi_b, psi_b'

}  // namespace

std::string_view to_string(Backend b) { return b == Backend::stack ? "stack" : "ode"; }

AsymptoticCoefficients propagate(const TransferMatrix& t, cplx a_minus, cplx b_minus) {
  return {a_minus, b_minus, t.m.m11 * a_minus + t.m.m12 * b_minus, t.m.m21 * a_minus + t.m.m22 * b_minus};
}

TransferMatrix layer_matrix_with_kappa(cplx v0, double width, double k, double x_left, cplx kappa) {
  require_nonzero_k(k);
  if (!(width > 0.0)) throw DomainError("layer width must be positive");
  if (v0 == cplx{}) return {Matrix2::identity(), k, Backend::stack};

  const cplx c = std::cos(kappa * width);
  const cplx s = sinc_times(kappa, width);
  const cplx q = (k * k + kappa * kappa) / (2.0 * k);
  const cplx coupling = kI * s * v0 / (2.0 * k);
  const double x_sum = 2.0 * x_left + width;

  Matrix2 m{std::exp(-kI * k * width) * (c + kI * s * q), -std::exp(-kI * k * x_sum) * coupling,
            std::exp(kI * k * x_sum) * coupling, std::exp(kI * k * width) * (c - kI * s * q)};
  return {m, k, Backend::stack};
}

TransferMatrix layer_matrix(cplx v0, double width, double k, double x_left) {
  return layer_matrix_with_kappa(v0, width, k, x_left, std::sqrt(cplx{k * k} - v0));
}

TransferMatrix transfer_matrix_stack(const Potential& p, double k) {
  require_nonzero_k(k);
  if (!p.is_layered()) throw UnsupportedBackend("stack backend requires a piecewise-constant potential");
  const auto& stack = p.layer_stack();
  Matrix2 m = Matrix2::identity();
  double x = stack.x0;
  for (const auto& layer : stack.layers) {
    m = layer_matrix(layer.value, layer.width, k, x).m * m;
    x += layer.width;
  }
  return {m, k, Backend::stack};
}

TransferMatrix transfer_matrix_ode(const Potential& p, double k, const OdeOptions& opts) {
  require_nonzero_k(k);
  if (!(opts.tol > 0.0)) throw DomainError("ode tolerance must be positive");
  const auto segments = p.segments();
  if (segments.empty()) return {Matrix2::identity(), k, Backend::ode};

  const double x_start = segments.front().lo;
  const cplx ik = kI * k;
  const cplx ea = std::exp(ik * x_start);
  const cplx eb = std::exp(-ik * x_start);
  OdeState y{ea, ik * ea, eb, -ik * eb};

  boost::numeric::odeint::runge_kutta_cash_karp54<OdeState> stepper;
  const double k2 = k * k;
  std::size_t attempts = 0;
  double h = std::min(segments.front().hi - segments.front().lo, 0.05 / std::max(1.0, std::abs(k)));
  double last_error = 0.0;

  for (const auto& seg : segments) {
    auto rhs = [&](const OdeState& s, OdeState& ds, double x) {
      const cplx q = p.evaluate_on(seg, x) - k2;
      ds = {s[1], q * s[0], s[3], q * s[2]};
    };
    double x = seg.lo;
    while (x < seg.hi) {
      const bool last = x + h >= seg.hi;
      const double step = last ? seg.hi - x : h;
      if (++attempts > opts.max_steps)
        throw ConvergenceError(
            fmt::format("ode backend exceeded {} steps at x = {} (k = {})", opts.max_steps, x, k), last_error);
      if (step < 1e-15 * std::max(1.0, std::abs(x)))
        throw ConvergenceError(fmt::format("ode step size underflow at x = {} (k = {})", x, k), last_error);

      OdeState out, err;
      stepper.do_step(rhs, y, x, out, step, err);
      double ratio = 0.0;
      for (std::size_t i = 0; i < 4; ++i)
        ratio = std::max(ratio, std::abs(err[i]) / (opts.tol * (1.0 + std::max(std::abs(y[i]), std::abs(out[i])))));
      if (!std::isfinite(ratio)) ratio = std::numeric_limits<double>::max();
      last_error = ratio * opts.tol;

      const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
      if (ratio <= 1.0) {
        y = out;
        x = last ? seg.hi : x + step;
        // A short final step says nothing about the natural step size.
        if (!last || step >= h) h = step * factor;
      } else {
        h = step * std::min(factor, 0.9);
      }
    }
  }

  const double x_end = segments.back().hi;
  return {plane_wave_coefficients(k, x_end, y[0], y[1], y[2], y[3]), k, Backend::ode};
}

TransferMatrix transfer_matrix(const Potential& p, double k, Backend backend, const OdeOptions& opts) {
  return backend == Backend::stack ? transfer_matrix_stack(p, k) : transfer_matrix_ode(p, k, opts);
}

Backend preferred_backend(const Potential& p) { return p.is_layered() ? Backend::stack : Backend::ode; }

ScatteringData scattering_data(const TransferMatrix& t, double singularity_floor) {
  ScatteringData s;
  s.k = t.k;
  s.condition = t.condition();
  if (s.condition > singularity_floor) {
    s.finite = true;
    s.t = 1.0 / t.m.m22;
    s.r_left = -t.m.m21 / t.m.m22;
    s.r_right = t.m.m12 / t.m.m22;
    s.d = s.t * s.t - s.r_left * s.r_right;
  } else {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    s.t = s.r_left = s.r_right = s.d = cplx{nan, nan};
  }
  return s;
}

Matrix2 matrix_from_amplitudes(cplx t, cplx r_left, cplx r_right) {
  return {t - r_left * r_right / t, r_right / t, -r_left / t, 1.0 / t};
}

TransferMatrix negative_k_matrix(const TransferMatrix& t) { return {sigma1_sandwich(t.m), -t.k, t.backend}; }

}  // namespace ptscat
