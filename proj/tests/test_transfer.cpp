#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"

#include "ptscat/catalog.hpp"
#include "ptscat/errors.hpp"
#include "ptscat/symmetry.hpp"
#include "ptscat/transfer.hpp"

using namespace ptscat;
using namespace std::complex_literals;

namespace {

// Matches plane waves on both sides of a slab to A e^{i kappa x} + B e^{-i kappa x} inside,
// enforcing continuity of psi and psi' at both faces. One 4x4 solve per column of M.
Matrix2 slab_by_face_matching(cplx v0, double x1, double x2, double k) {
  const cplx kappa = std::sqrt(cplx{k * k} - v0);
  auto e = [](cplx q, double x) { return std::exp(1.0i * q * x); };
  Matrix2 m;
  for (int col = 0; col < 2; ++col) {
    const cplx am = col == 0 ? 1.0 : 0.0;
    const cplx bm = col == 0 ? 0.0 : 1.0;
    Eigen::Matrix4cd a = Eigen::Matrix4cd::Zero();
    Eigen::Vector4cd rhs;
    // unknowns: C, D (interior), A+, B+
    a(0, 0) = e(kappa, x1);
    a(0, 1) = e(-kappa, x1);
    rhs(0) = am * e(k, x1) + bm * e(-k, x1);
    a(1, 0) = 1.0i * kappa * e(kappa, x1);
    a(1, 1) = -1.0i * kappa * e(-kappa, x1);
    rhs(1) = 1.0i * k * (am * e(k, x1) - bm * e(-k, x1));
    a(2, 0) = e(kappa, x2);
    a(2, 1) = e(-kappa, x2);
    a(2, 2) = -e(k, x2);
    a(2, 3) = -e(-k, x2);
    rhs(2) = 0.0;
    a(3, 0) = 1.0i * kappa * e(kappa, x2);
    a(3, 1) = -1.0i * kappa * e(-kappa, x2);
    a(3, 2) = -1.0i * k * e(k, x2);
    a(3, 3) = 1.0i * k * e(-k, x2);
    rhs(3) = 0.0;
    const Eigen::Vector4cd sol = a.fullPivLu().solve(rhs);
    if (col == 0) {
      m.m11 = sol(2);
      m.m21 = sol(3);
    } else {
      m.m12 = sol(2);
      m.m22 = sol(3);
    }
  }
  return m;
}

Matrix2 random_unit_det(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Matrix2 m{{n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)}};
  const cplx s = std::sqrt(m.det());
  return {m.m11 / s, m.m12 / s, m.m21 / s, m.m22 / s};
}

}  // namespace

TEST_CASE("single slab agrees with direct face matching") {
  struct Case {
    cplx v0;
    double x1, w, k;
  };
  const Case cases[] = {
      {2.0, 0.0, 1.0, 1.0},         {2.0, -1.0, 2.0, 1.7},        {0.5i, -1.0, 1.0, 1.0},
      {-0.5i, 0.0, 1.0, 0.6},       {1.0 + 0.5i, 0.3, 0.5, 2.2},  {-3.0, -0.2, 0.8, 0.4},
      {10.0, 0.0, 1.0, 0.9},        {-0.5 + 0.8i, 1.1, 0.7, 3.0},
  };
  for (const auto& c : cases) {
    CAPTURE(c.v0);
    CAPTURE(c.k);
    const auto got = layer_matrix(c.v0, c.w, c.k, c.x1);
    const auto want = slab_by_face_matching(c.v0, c.x1, c.x1 + c.w, c.k);
    CHECK(max_abs_diff(got.m, want) <= 1e-12 * std::max(1.0, max_abs(want)));
    CHECK(std::abs(got.m.det() - 1.0) < 1e-13);
  }
}

TEST_CASE("slab at the band edge is continuous in v0") {
  const double k = 1.3;
  const auto edge = layer_matrix(k * k, 0.9, k, 0.2);
  const auto near = layer_matrix(k * k * (1.0 + 1e-9), 0.9, k, 0.2);
  CHECK(max_abs_diff(edge.m, near.m) < 1e-8);
  CHECK(std::abs(edge.m.det() - 1.0) < 1e-14);
}

TEST_CASE("vanishing layer is exactly the identity") {
  for (double k : {0.1, 1.0, 7.5})
    for (double x1 : {-3.0, 0.0, 2.5}) CHECK(layer_matrix(0.0, 1.3, k, x1).m == Matrix2::identity());
}

TEST_CASE("either interior square-root branch gives the same slab") {
  for (cplx v0 : {cplx{2.0}, cplx{0.5i}, cplx{1.0, -2.0}, cplx{-4.0}}) {
    const double k = 1.1;
    const cplx kappa = std::sqrt(cplx{k * k} - v0);
    const auto a = layer_matrix_with_kappa(v0, 0.8, k, -0.4, kappa);
    const auto b = layer_matrix_with_kappa(v0, 0.8, k, -0.4, -kappa);
    CHECK(max_abs_diff(a.m, b.m) < 1e-14 * std::max(1.0, max_abs(a.m)));
  }
}

TEST_CASE("stack products") {
  CHECK(transfer_matrix_stack(Potential::free(), 1.0).m == Matrix2::identity());
  CHECK(transfer_matrix_stack(Potential::layers(0.0, {{0.0, 1.0}, {0.0, 2.0}}), 1.0).m == Matrix2::identity());

  // two adjacent equal slabs compose to one slab of double width
  for (cplx v0 : {cplx{3.0}, cplx{0.7i}, cplx{-1.0, 0.4}}) {
    const double k = 0.9;
    const auto split = transfer_matrix_stack(Potential::layers(-0.5, {{v0, 0.6}, {v0, 0.6}}), k);
    const auto whole = layer_matrix(v0, 1.2, k, -0.5);
    CHECK(max_abs_diff(split.m, whole.m) < 1e-13 * std::max(1.0, max_abs(whole.m)));
  }

  // ordering: right layer applied last
  const auto p = Potential::layers(-1.0, {{1.0, 1.0}, {2.0i, 0.5}});
  const auto want = layer_matrix(2.0i, 0.5, 1.4, 0.0).m * layer_matrix(1.0, 1.0, 1.4, -1.0).m;
  CHECK(max_abs_diff(transfer_matrix_stack(p, 1.4).m, want) < 1e-14);
}

TEST_CASE("PT bilayer matrix structure") {
  const auto p = builtin::pt_bilayer(0.5, 1.0);
  for (double k : {0.3, 1.0, 2.7}) {
    const auto m = transfer_matrix_stack(p, k).m;
    CHECK(std::abs(std::conj(m.m11) - m.m22) < 1e-13);
    CHECK(std::abs(m.m12.real()) < 1e-13);
    CHECK(std::abs(m.m21.real()) < 1e-13);
    CHECK(std::abs(m.det() - 1.0) < 1e-13);
  }
}

TEST_CASE("determinant stays one across the catalog") {
  for (const auto& e : builtin_potentials()) {
    const auto p = e.make(e.defaults);
    if (!p.is_layered()) continue;
    CAPTURE(e.name);
    for (double k = 0.3; k <= 3.0; k += 0.27) CHECK(std::abs(transfer_matrix_stack(p, k).m.det() - 1.0) < 1e-12);
  }
}

TEST_CASE("ode backend") {
  SUBCASE("zero potential") {
    CHECK(transfer_matrix_ode(Potential::free(), 1.0).m == Matrix2::identity());
    const auto empty_layers = Potential::layers(-1.0, {{0.0, 2.0}});
    CHECK(max_abs_diff(transfer_matrix_ode(empty_layers, 1.7).m, Matrix2::identity()) < 1e-10);
  }
  SUBCASE("barrier agrees with the stack product") {
    const auto p = builtin::barrier(2.0, 1.0);
    const auto ode = transfer_matrix_ode(p, 1.3, {.tol = 1e-9});
    const auto stack = transfer_matrix_stack(p, 1.3);
    CHECK(max_abs_diff(ode.m, stack.m) / max_abs(stack.m) < 1e-7);
    CHECK(ode.backend == Backend::ode);
  }
  SUBCASE("sampled bilayer within the interpolation bound") {
    const double gamma = 0.5, eps = 1e-4, k = 1.1;
    const auto sampled = Potential::sampled({{-1.0 - eps, 0.0},
                                             {-1.0, gamma * 1.0i},
                                             {-eps, gamma * 1.0i},
                                             {0.0, -gamma * 1.0i},
                                             {1.0, -gamma * 1.0i},
                                             {1.0 + eps, 0.0}});
    const auto ode = transfer_matrix_ode(sampled, k, {.tol = 1e-11});
    const auto stack = transfer_matrix_stack(builtin::pt_bilayer(gamma, 1.0), k);
    // Duhamel bound: |dM| <~ (1/k) int |dv| exp((1/k) int |v|), with int |dv| = 2 gamma eps
    const double dv = 2.0 * gamma * eps;
    const double bound = 2.0 * dv / k * std::exp((2.0 * gamma + dv) / k) * max_abs(stack.m);
    CHECK(max_abs_diff(ode.m, stack.m) <= bound);
    CHECK(max_abs_diff(ode.m, stack.m) > 0.0);
  }
  SUBCASE("cross-backend agreement on layered catalog entries") {
    for (const auto& e : builtin_potentials()) {
      const auto p = e.make(e.defaults);
      if (!p.is_layered()) continue;
      CAPTURE(e.name);
      for (double k : {0.3, 0.95, 1.7, 3.0}) {
        const auto a = transfer_matrix_stack(p, k);
        const auto b = transfer_matrix_ode(p, k, {.tol = 1e-9});
        CHECK(max_abs_diff(a.m, b.m) / std::max(1.0, max_abs(a.m)) < 1e-6);
      }
    }
  }
  SUBCASE("scarf II determinant") {
    const auto p = builtin::scarf2();
    for (double k : {0.3, 1.0, 2.5}) CHECK(std::abs(transfer_matrix_ode(p, k).m.det() - 1.0) < 1e-8);
  }
  SUBCASE("step budget") {
    try {
      transfer_matrix_ode(builtin::scarf2(), 1.0, {.tol = 1e-10, .max_steps = 10});
      FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
      CHECK(e.worst_local_error() >= 0.0);
    }
  }
}

TEST_CASE("domain and backend errors") {
  CHECK_THROWS_AS(transfer_matrix_stack(builtin::barrier(), 0.0), DomainError);
  CHECK_THROWS_AS(transfer_matrix_ode(builtin::barrier(), 0.0), DomainError);
  CHECK_THROWS_AS(transfer_matrix_stack(builtin::scarf2(), 1.0), UnsupportedBackend);
  CHECK(preferred_backend(builtin::scarf2()) == Backend::ode);
  CHECK(preferred_backend(builtin::barrier()) == Backend::stack);
}

TEST_CASE("amplitude dictionary") {
  const auto id = scattering_data({Matrix2::identity(), 1.0, Backend::stack});
  CHECK(id.finite);
  CHECK(id.t == cplx{1.0});
  CHECK(id.r_left == cplx{});
  CHECK(id.r_right == cplx{});
  CHECK(id.d == cplx{1.0});

  const auto s = scattering_data({{1.0, 1.0, -1.0, 2.0}, 1.0, Backend::stack});
  CHECK(s.t == cplx{0.5});
  CHECK(s.r_left == cplx{0.5});
  CHECK(s.r_right == cplx{0.5});
  CHECK(std::abs(s.d) < 1e-16);

  const auto sing = scattering_data({{1.0, 1.0, 1.0, 0.0}, 1.0, Backend::stack});
  CHECK_FALSE(sing.finite);
  CHECK(std::isnan(sing.t.real()));
  CHECK(sing.condition == 0.0);

  // amplitudes -> matrix -> amplitudes
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto m = random_unit_det(rng);
    const auto d = scattering_data({m, 1.0, Backend::stack});
    CHECK(max_abs_diff(matrix_from_amplitudes(d.t, d.r_left, d.r_right), m) < 1e-10 * max_abs(m));
  }
}

TEST_CASE("amplitudes describe left and right incidence") {
  const auto t = transfer_matrix_stack(builtin::pt_stack4(), 1.2);
  const auto s = scattering_data(t);
  const auto left = propagate(t, 1.0, s.r_left);  // unit wave from the left
  CHECK(std::abs(left.a_plus - s.t) < 1e-13);
  CHECK(std::abs(left.b_plus) < 1e-13);
  // from the right: nothing incoming on the left, T outgoing there, unit incoming on the right
  const auto right = propagate(t, 0.0, s.t);
  CHECK(std::abs(right.b_plus - 1.0) < 1e-13);
  CHECK(std::abs(right.a_plus - s.r_right) < 1e-13);
}

TEST_CASE("negative k") {
  for (const auto& p : {builtin::barrier(), builtin::pt_bilayer(), builtin::one_sided(), builtin::pt_stack4()}) {
    for (double k : {0.4, 1.3}) {
      const auto m = transfer_matrix_stack(p, k);
      const auto flipped = negative_k_matrix(m);
      CHECK(flipped.k == -k);
      CHECK(max_abs_diff(flipped.m, transfer_matrix_stack(p, -k).m) < 1e-13 * std::max(1.0, max_abs(m.m)));
      CHECK(max_abs_diff(flipped.m, transfer_matrix_ode(p, -k, {.tol = 1e-11}).m) < 1e-8 * max_abs(m.m));
    }
  }
}

TEST_CASE("real potentials are time-reversal invariant, even ones parity invariant") {
  const auto barrier = transfer_matrix_stack(builtin::barrier(), 0.8).m;
  CHECK(invariance_residual(barrier, SymmetryAction::time_reversal) < 1e-13);
  CHECK(invariance_residual(barrier, SymmetryAction::parity) < 1e-13);
  CHECK(std::abs(barrier.m12 + barrier.m21) < 1e-13);
}
