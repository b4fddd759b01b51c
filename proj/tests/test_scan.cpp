#include <cmath>
#include <numbers>

#include "doctest.h"

#include "oracles.hpp"
#include "ptscat/catalog.hpp"
#include "ptscat/errors.hpp"
#include "ptscat/scan.hpp"

using namespace ptscat;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Feature> of_kind(const ScanResult& r, FeatureKind kind) {
  std::vector<Feature> out;
  for (const auto& f : r.features)
    if (f.kind == kind) out.push_back(f);
  return out;
}

double abs_m22(const Potential& p, double k) { return std::abs(transfer_matrix_stack(p, k).m.m22); }

}  // namespace

TEST_CASE("golden-section search") {
  const auto m = golden_section_minimize([](double x) { return (x - 0.3) * (x - 0.3) + 2.0; }, -1.0, 2.0, 1e-10);
  CHECK(std::abs(m.x - 0.3) < 1e-7);  // a smooth minimum is resolved to about sqrt(eps)
  CHECK(m.value == doctest::Approx(2.0));
  const auto edge = golden_section_minimize([](double x) { return x; }, 1.0, 2.0, 1e-12);
  CHECK(edge.x - 1.0 < 1e-11);
  const auto cusp = golden_section_minimize([](double x) { return std::abs(x - 1.234567); }, 1.0, 2.0, 1e-12);
  CHECK(std::abs(cusp.x - 1.234567) < 1e-11);
}

TEST_CASE("real and free potentials have no spectral singularities") {
  const ScanOptions o;
  for (const auto& p : {builtin::barrier(), builtin::double_barrier(), Potential::free()}) {
    const auto r = find_spectral_singularities(p, 0.3, 3.0, o);
    CHECK(r.count(FeatureKind::spectral_singularity) == 0);
  }
  const auto free = scan_all(Potential::free(), 0.3, 3.0, o);
  CHECK(free.features.empty());
  CHECK(free.rejected.empty());
}

TEST_CASE("PT bilayer singularity agrees with a two-parameter grid search") {
  // M22 vanishing is two real conditions, so a threshold gain gamma* is needed.
  const auto best = oracle::zoom_minimize_2d(
      [](double g, double k) { return abs_m22(builtin::pt_bilayer(g, 1.0), k); }, 1.5, 2.5, 0.6, 1.5);
  CHECK(best.value < 1e-12);
  CHECK(best.x == doctest::Approx(2.0717).epsilon(1e-3));

  const auto p = builtin::pt_bilayer(best.x, 1.0);
  const auto r = find_spectral_singularities(p, 0.3, 3.0, {});
  const auto sing = of_kind(r, FeatureKind::spectral_singularity);
  REQUIRE(sing.size() == 1);
  CHECK(std::abs(sing[0].k_star - best.y) < 1e-6);
  CHECK(sing[0].abs_t > 1e3);
  CHECK(sing[0].residual <= 1e-8);
  CHECK(sing[0].bracket_lo <= sing[0].k_star);
  CHECK(sing[0].k_star <= sing[0].bracket_hi);
  CHECK_FALSE(sing[0].near_boundary);

  // below threshold the minimum of |M22| stays finite and is reported as rejected
  const auto below = find_spectral_singularities(builtin::pt_bilayer(0.9 * best.x, 1.0), 0.3, 3.0, {});
  CHECK(below.count(FeatureKind::spectral_singularity) == 0);
  CHECK_FALSE(below.rejected.empty());
  for (const auto& c : below.rejected) CHECK(c.value > 1e-8);
}

TEST_CASE("ode backend locates the same singularity") {
  const auto best = oracle::zoom_minimize_2d(
      [](double g, double k) { return abs_m22(builtin::pt_bilayer(g, 1.0), k); }, 1.5, 2.5, 0.6, 1.5);
  ScanOptions o;
  o.backend = Backend::ode;
  o.ode.tol = 1e-12;
  o.grid_step = 0.05;
  o.singularity_floor = 1e-7;
  const auto r = find_spectral_singularities(builtin::pt_bilayer(best.x, 1.0), 0.5, 2.0, o);
  REQUIRE(r.count(FeatureKind::spectral_singularity) == 1);
  CHECK(std::abs(r.features[0].k_star - best.y) < 1e-6);
}

TEST_CASE("PT four-layer stack: unidirectional reflectionlessness") {
  const auto p = builtin::pt_stack4();
  const auto r = find_unidirectional_points(p, 0.3, 3.0, {});
  const auto left = of_kind(r, FeatureKind::reflectionless_left);
  const auto right = of_kind(r, FeatureKind::reflectionless_right);

  auto rl = [&](double k) { return std::abs(scattering_data(transfer_matrix_stack(p, k)).r_left); };
  auto rr = [&](double k) { return std::abs(scattering_data(transfer_matrix_stack(p, k)).r_right); };
  const auto want_left = oracle::zeros(rl, 0.3, 3.0, 1e-3, 1e-8);
  const auto want_right = oracle::zeros(rr, 0.3, 3.0, 1e-3, 1e-8);
  REQUIRE(left.size() == want_left.size());
  REQUIRE(right.size() == want_right.size());
  CHECK(left.size() >= 1);
  CHECK(right.size() >= 1);
  for (std::size_t i = 0; i < left.size(); ++i) CHECK(std::abs(left[i].k_star - want_left[i].x) < 1e-6);
  for (std::size_t i = 0; i < right.size(); ++i) CHECK(std::abs(right[i].k_star - want_right[i].x) < 1e-6);

  for (const auto& f : r.features) {
    CAPTURE(f.k_star);
    CHECK(std::abs(f.abs_t - 1.0) <= 1e-6);
    if (f.kind == FeatureKind::reflectionless_left || f.kind == FeatureKind::reflectionless_right) {
      CHECK(f.residual <= 1e-8);
      CHECK(f.opposite_reflection > 1e-7);
    }
  }
  CHECK(r.count(FeatureKind::bidirectional_reflectionless) == 0);
}

TEST_CASE("even potentials are only ever reflectionless from both sides") {
  for (const auto& p : {builtin::barrier(), builtin::double_barrier()}) {
    const auto r = find_unidirectional_points(p, 0.3, 6.0, {});
    CHECK(r.count(FeatureKind::reflectionless_left) == 0);
    CHECK(r.count(FeatureKind::reflectionless_right) == 0);
    CHECK(r.count(FeatureKind::bidirectional_reflectionless) >= 1);
  }
}

TEST_CASE("barrier resonances: invisible only when T = 1") {
  SUBCASE("phase of T is a multiple of 2 pi") {
    // v0 = 2 pi^2 on [-1, 1]: at k = 3 pi / 2 the interior phase is pi and e^{-2ik} = -1
    const auto p = builtin::barrier(2.0 * kPi * kPi, 1.0);
    const double k_star = 1.5 * kPi;
    const auto r = find_unidirectional_points(p, 4.0, 5.0, {.grid_step = 1e-2});
    const auto bi = of_kind(r, FeatureKind::bidirectional_reflectionless);
    REQUIRE(bi.size() == 1);
    CHECK(std::abs(bi[0].k_star - k_star) < 1e-8);
    CHECK(r.count(FeatureKind::invisible_left) == 1);
    CHECK(r.count(FeatureKind::invisible_right) == 1);
    const auto s = scattering_data(transfer_matrix_stack(p, k_star));
    CHECK(check_invisibility(bi[0], s, 1e-6));
  }
  SUBCASE("transparent but phase-shifted") {
    const auto p = builtin::barrier(2.0, 1.0);
    const double k_star = std::sqrt(2.0 + kPi * kPi / 4.0);
    const auto r = find_unidirectional_points(p, 0.3, 3.0, {});
    const auto bi = of_kind(r, FeatureKind::bidirectional_reflectionless);
    REQUIRE(bi.size() == 1);
    CHECK(std::abs(bi[0].k_star - k_star) < 1e-8);
    CHECK(std::abs(bi[0].abs_t - 1.0) < 1e-9);
    CHECK(r.count(FeatureKind::invisible_left) == 0);
    const auto s = scattering_data(transfer_matrix_stack(p, k_star));
    CHECK_FALSE(check_invisibility(bi[0], s, 1e-6));
    CHECK(std::abs(s.t - std::exp(cplx{0.0, -2.0 * k_star}) * -1.0) < 1e-8);
  }
  Feature sing;
  CHECK_THROWS_AS(check_invisibility(sing, {}, 1e-6), DomainError);
}

TEST_CASE("results are stable under grid refinement") {
  const auto p = builtin::pt_stack4();
  const auto coarse = scan_all(p, 0.3, 3.0, {.grid_step = 2e-2});
  const auto fine = scan_all(p, 0.3, 3.0, {.grid_step = 5e-3});
  REQUIRE(coarse.features.size() == fine.features.size());
  for (std::size_t i = 0; i < coarse.features.size(); ++i) {
    CHECK(coarse.features[i].kind == fine.features[i].kind);
    CHECK(std::abs(coarse.features[i].k_star - fine.features[i].k_star) < 1e-8);
  }
}

TEST_CASE("features near the scan edge are flagged") {
  const auto p = builtin::barrier(2.0, 1.0);
  const double k_star = std::sqrt(2.0 + kPi * kPi / 4.0);
  const auto r = find_unidirectional_points(p, 1.0, k_star + 0.005, {.grid_step = 1e-2});
  REQUIRE(r.features.size() == 1);
  CHECK(r.features[0].near_boundary);
  CHECK(std::abs(r.features[0].k_star - k_star) < 1e-8);
}

TEST_CASE("scan argument validation") {
  CHECK_THROWS_AS(find_spectral_singularities(builtin::barrier(), 0.0, 1.0, {}), DomainError);
  CHECK_THROWS_AS(find_spectral_singularities(builtin::barrier(), 2.0, 1.0, {}), DomainError);
  CHECK_THROWS_AS(find_unidirectional_points(builtin::barrier(), 0.5, 1.0, {.grid_step = 0.0}), DomainError);
  CHECK(to_string(FeatureKind::invisible_left) == "invisible_left");
  CHECK(feature_kind_from_string("spectral_singularity") == FeatureKind::spectral_singularity);
  CHECK_FALSE(feature_kind_from_string("bogus"));
}
