#include <cmath>
#include <vector>

#include <omp.h>

#include "doctest.h"

#include "ptscat/catalog.hpp"
#include "ptscat/errors.hpp"
#include "ptscat/sweep.hpp"

using namespace ptscat;

namespace {

bool same_bits(cplx a, cplx b) {
  auto eq = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  return eq(a.real(), b.real()) && eq(a.imag(), b.imag());
}

struct Threads {
  int previous = omp_get_max_threads();
  explicit Threads(int n) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(previous); }
};

}  // namespace

TEST_CASE("linspace and grid validation") {
  const auto g = linspace(0.5, 3.0, 6);
  REQUIRE(g.size() == 6);
  CHECK(g.front() == 0.5);
  CHECK(g.back() == 3.0);
  CHECK(g[1] == doctest::Approx(1.0));
  CHECK(linspace(2.0, 2.0, 1) == std::vector<double>{2.0});

  CHECK_NOTHROW(validate_k_grid(g));
  CHECK_NOTHROW(validate_k_grid(std::vector<double>{}));
  CHECK_THROWS_AS(validate_k_grid(std::vector<double>{0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(validate_k_grid(std::vector<double>{-1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(validate_k_grid(std::vector<double>{1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(validate_k_grid(std::vector<double>{2.0, 1.0}), DomainError);
  CHECK_THROWS_AS(validate_k_grid(std::vector<double>{1.0, NAN}), DomainError);
}

TEST_CASE("parallel sweep reproduces the serial reference exactly") {
  Threads t(4);
  const auto ks = linspace(0.3, 3.0, 97);
  for (Backend b : {Backend::stack, Backend::ode}) {
    for (const auto& p : {builtin::pt_stack4(), builtin::barrier(), builtin::one_sided()}) {
      const auto par = sweep(p, ks, {.backend = b, .ode = {.tol = 1e-9}});
      const auto ser = sweep_serial(p, ks, {.backend = b, .ode = {.tol = 1e-9}});
      REQUIRE(par.size() == ser.size());
      for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].k == ks[i]);
        CHECK(same_bits(par[i].data.t, ser[i].data.t));
        CHECK(same_bits(par[i].data.r_left, ser[i].data.r_left));
        CHECK(same_bits(par[i].data.r_right, ser[i].data.r_right));
        CHECK(par[i].error == ser[i].error);
      }
    }
  }
  const auto scarf_ks = linspace(0.5, 2.5, 9);
  const auto a = transfer_grid(builtin::scarf2(), scarf_ks, Backend::ode);
  const auto b = transfer_grid_serial(builtin::scarf2(), scarf_ks, Backend::ode);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].matrix.m == b[i].matrix.m);
}

TEST_CASE("parallel identity reports match the serial reference") {
  Threads t(3);
  const auto p = builtin::pt_bilayer(0.8);
  const auto cls = classify_symmetry(p);
  const auto ks = linspace(0.3, 3.0, 40);
  const auto par = identity_reports(p, ks, {}, cls);
  const auto ser = identity_reports_serial(p, ks, {}, cls);
  REQUIRE(par.size() == ks.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    REQUIRE(par[i].report);
    REQUIRE(ser[i].report);
    for (std::size_t j = 0; j < par[i].report->entries.size(); ++j)
      CHECK(same_bits(par[i].report->entries[j].residual, ser[i].report->entries[j].residual));
    CHECK(par[i].report->passed(1e-8));
  }
}

TEST_CASE("sweep rows carry physical amplitudes") {
  const auto ks = linspace(0.3, 3.0, 50);
  for (const auto& row : sweep(Potential::free(), ks, {})) {
    CHECK(row.data.t == cplx{1.0});
    CHECK(row.data.r_left == cplx{});
  }
  for (const auto& row : sweep(builtin::double_barrier(), ks, {})) {
    const double t2 = std::norm(row.data.t);
    CHECK(std::abs(t2 + std::norm(row.data.r_left) - 1.0) < 1e-12);
  }
}

TEST_CASE("backend failures are recorded per row") {
  const auto ks = linspace(0.5, 1.5, 5);
  const auto rows = sweep(builtin::scarf2(), ks, {.backend = Backend::stack});
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    CHECK_FALSE(r.ok());
    CHECK(r.error.find("piecewise-constant") != std::string::npos);
  }
  const auto tight = sweep(builtin::scarf2(), ks, {.backend = Backend::ode, .ode = {.tol = 1e-10, .max_steps = 5}});
  for (const auto& r : tight) CHECK_FALSE(r.ok());

  const auto reports = identity_reports(builtin::scarf2(), ks, {}, classify_symmetry(builtin::scarf2()));
  for (const auto& r : reports) {
    CHECK_FALSE(r.report);
    CHECK_FALSE(r.error.empty());
  }
  CHECK_THROWS_AS(sweep(builtin::barrier(), std::vector<double>{1.0, 0.5}, {}), DomainError);
}
