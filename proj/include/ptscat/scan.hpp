#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "ptscat/transfer.hpp"

namespace ptscat {

enum class FeatureKind {
  spectral_singularity,
  reflectionless_left,
  reflectionless_right,
  bidirectional_reflectionless,
  invisible_left,
  invisible_right,
};

std::string_view to_string(FeatureKind kind);
std::optional<FeatureKind> feature_kind_from_string(std::string_view s);

struct Feature {
  FeatureKind kind = FeatureKind::spectral_singularity;
  double k_star = 0.0;
  /// |M22| for singularities, |R| for reflectionless points, |R| + |T - 1| for invisibility.
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool near_boundary = false;  ///< within one grid step of the scan edge
  double abs_t = 0.0;          ///< |T(k*)| = 1/|M22(k*)|
  double t_phase = 0.0;        ///< arg T(k*)
  double opposite_reflection = 0.0;  ///< |R| on the other side (reflectionless points)
  double dual_residual = 0.0;        ///< |M11(k*)| for singularities (zero of the time-reversed dual)

  friend bool operator==(const Feature&, const Feature&) = default;
};

struct Candidate {
  double k = 0.0;
  double value = 0.0;  ///< refined objective that missed the acceptance floor

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct ScanOptions {
  double grid_step = 1e-2;
  double k_tol = 1e-10;  ///< final bracket width of the refinement
  double singularity_floor = 1e-8;
  double reflection_floor = 1e-8;
  double invisibility_tol = 1e-6;
  Backend backend = Backend::stack;
  OdeOptions ode{};
};

struct ScanResult {
  double k_min = 0.0;
  double k_max = 0.0;
  double grid_step = 0.0;
  std::vector<Feature> features;  ///< sorted by k_star
  std::vector<Candidate> rejected;

  std::size_t count(FeatureKind kind) const;
  friend bool operator==(const ScanResult&, const ScanResult&) = default;
};

struct Minimum {
  double x;
  double value;
};

/// Golden-section search for a minimum of f on [lo, hi], stopping at bracket width <= tol.
Minimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                double tol);

/// Real-k zeros of M22, located as minima of |M22|^2.
ScanResult find_spectral_singularities(const Potential& p, double k_min, double k_max,
                                       const ScanOptions& opts);

/// Zeros of |R_left| and |R_right|; a point is unidirectional when the opposite |R| exceeds
/// 10x the reflection floor. Invisibility features are added where additionally |T - 1| is small.
ScanResult find_unidirectional_points(const Potential& p, double k_min, double k_max,
                                      const ScanOptions& opts);

/// Union of both scans, sorted by k.
ScanResult scan_all(const Potential& p, double k_min, double k_max, const ScanOptions& opts);

/// True iff |T(k*) - 1| <= tol. Requires `feature` to be a reflectionless point.
bool check_invisibility(const Feature& feature, const ScatteringData& s, double tol);

}  // namespace ptscat
