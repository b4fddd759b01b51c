#include "ptscat/sweep.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "ptscat/errors.hpp"

namespace ptscat {
namespace {

GridPoint evaluate_point(const Potential& p, double k, Backend backend, const OdeOptions& ode) {
  try {
    return {transfer_matrix(p, k, backend, ode), {}};
  } catch (const std::exception& e) {
    return {TransferMatrix{Matrix2::zero(), k, backend}, e.what()};
  }
}

SweepRow sweep_row(const GridPoint& g, const SweepOptions& opts) {
  SweepRow row;
  row.k = g.matrix.k;
  row.error = g.error;
  if (g.ok()) row.data = scattering_data(g.matrix, opts.singularity_floor);
  else {
    // no matrix: amplitudes and condition are unknown, not zero
    row.data = scattering_data({Matrix2::zero(), g.matrix.k, g.matrix.backend}, 0.0);
    row.data.condition = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

ReportRow report_row(const Potential& p, double k, const IdentityOptions& opts, const SymmetryClass& cls) {
  try {
    return {identity_report(p, k, opts, cls), {}};
  } catch (const std::exception& e) {
    return {std::nullopt, e.what()};
  }
}

std::ptrdiff_t ssize(std::span<const double> ks) { return static_cast<std::ptrdiff_t>(ks.size()); }

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

void validate_k_grid(std::span<const double> ks) {
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(ks[i] > 0.0) || !std::isfinite(ks[i])) throw DomainError("k grid: every k must be positive and finite");
    if (i > 0 && !(ks[i] > ks[i - 1])) throw DomainError("k grid: must be strictly increasing");
  }
}

std::vector<GridPoint> transfer_grid_serial(const Potential& p, std::span<const double> ks, Backend backend,
                                            const OdeOptions& ode) {
  std::vector<GridPoint> out;
  out.reserve(ks.size());
  for (double k : ks) out.push_back(evaluate_point(p, k, backend, ode));
  return out;
}

std::vector<GridPoint> transfer_grid(const Potential& p, std::span<const double> ks, Backend backend,
                                     const OdeOptions& ode) {
  std::vector<GridPoint> out(ks.size());
  const std::ptrdiff_t n = ssize(ks);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = evaluate_point(p, ks[idx], backend, ode);
  }
  return out;
}

std::vector<SweepRow> sweep_serial(const Potential& p, std::span<const double> ks, const SweepOptions& opts) {
  validate_k_grid(ks);
  std::vector<SweepRow> rows;
  rows.reserve(ks.size());
  for (const auto& g : transfer_grid_serial(p, ks, opts.backend, opts.ode)) rows.push_back(sweep_row(g, opts));
  return rows;
}

std::vector<SweepRow> sweep(const Potential& p, std::span<const double> ks, const SweepOptions& opts) {
  validate_k_grid(ks);
  const auto grid = transfer_grid(p, ks, opts.backend, opts.ode);
  std::vector<SweepRow> rows(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) rows[i] = sweep_row(grid[i], opts);
  return rows;
}

std::vector<ReportRow> identity_reports_serial(const Potential& p, std::span<const double> ks,
                                               const IdentityOptions& opts, const SymmetryClass& cls) {
  validate_k_grid(ks);
  std::vector<ReportRow> out;
  out.reserve(ks.size());
  for (double k : ks) out.push_back(report_row(p, k, opts, cls));
  return out;
}

std::vector<ReportRow> identity_reports(const Potential& p, std::span<const double> ks, const IdentityOptions& opts,
                                        const SymmetryClass& cls) {
  validate_k_grid(ks);
  std::vector<ReportRow> out(ks.size());
  const std::ptrdiff_t n = ssize(ks);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = report_row(p, ks[idx], opts, cls);
  }
  return out;
}

}  // namespace ptscat
