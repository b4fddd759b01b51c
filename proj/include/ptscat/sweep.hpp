#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptscat/identities.hpp"
#include "ptscat/transfer.hpp"

namespace ptscat {

// Grid kernels. Each has an OpenMP version and a serial reference with identical results;
// output order always follows the input grid.

std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Throws DomainError unless the grid is strictly increasing and every k > 0.
void validate_k_grid(std::span<const double> ks);

struct GridPoint {
  TransferMatrix matrix;
  std::string error;  ///< backend failure message, empty on success

  bool ok() const { return error.empty(); }
};

std::vector<GridPoint> transfer_grid(const Potential& p, std::span<const double> ks, Backend backend,
                                     const OdeOptions& ode = {});
std::vector<GridPoint> transfer_grid_serial(const Potential& p, std::span<const double> ks,
                                            Backend backend, const OdeOptions& ode = {});

struct SweepOptions {
  Backend backend = Backend::stack;
  OdeOptions ode{};
  double singularity_floor = kSingularityFloor;
};

struct SweepRow {
  double k = 0.0;
  ScatteringData data;
  std::string error;

  bool ok() const { return error.empty(); }
};

/// One row per k. Backend errors are recorded per row; the sweep continues.
std::vector<SweepRow> sweep(const Potential& p, std::span<const double> ks, const SweepOptions& opts);
std::vector<SweepRow> sweep_serial(const Potential& p, std::span<const double> ks,
                                   const SweepOptions& opts);

struct ReportRow {
  std::optional<IdentityReport> report;
  std::string error;
};

std::vector<ReportRow> identity_reports(const Potential& p, std::span<const double> ks,
                                        const IdentityOptions& opts, const SymmetryClass& cls);
std::vector<ReportRow> identity_reports_serial(const Potential& p, std::span<const double> ks,
                                               const IdentityOptions& opts, const SymmetryClass& cls);

}  // namespace ptscat
