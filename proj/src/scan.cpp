#include "ptscat/scan.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ptscat/errors.hpp"
#include "ptscat/sweep.hpp"

namespace ptscat {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Grid {
  std::vector<double> ks;
  double step;
};

Grid make_grid(double k_min, double k_max, const ScanOptions& opts) {
  if (!(k_min > 0.0) || !(k_max > k_min) || !std::isfinite(k_max))
    throw DomainError("scan range must satisfy 0 < k_min < k_max");
  if (!(opts.grid_step > 0.0) || !(opts.k_tol > 0.0)) throw DomainError("scan grid_step and k_tol must be positive");
  const auto n = static_cast<std::size_t>(std::ceil((k_max - k_min) / opts.grid_step - 1e-9)) + 1;
  Grid g{linspace(k_min, k_max, std::max<std::size_t>(n, 2)), 0.0};
  g.step = (k_max - k_min) / static_cast<double>(g.ks.size() - 1);
  return g;
}

// Grid indices that are strict local minima (plateaus do not count).
std::vector<std::size_t> local_minima(const std::vector<double>& f) {
  std::vector<std::size_t> out;
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(f[i])) continue;
    const bool left_ok = i == 0 ? true : f[i] < f[i - 1];
    const bool right_ok = i + 1 == n ? true : f[i] <= f[i + 1];
    const bool strict = (i > 0 && f[i] < f[i - 1]) || (i + 1 < n && f[i] < f[i + 1]);
    if (left_ok && right_ok && strict) out.push_back(i);
  }
  return out;
}

template <class F>
auto guarded(F f) {
  return [f](double k) {
    try {
      const double v = f(k);
      return std::isnan(v) ? kInf : v;
    } catch (const Error&) {
      return kInf;
    }
  };
}

bool near_edge(double k, double k_min, double k_max, double step) {
  return k - k_min < step || k_max - k < step;
}

void sort_features(ScanResult& r) {
  std::stable_sort(r.features.begin(), r.features.end(),
                   [](const Feature& a, const Feature& b) { return a.k_star < b.k_star; });
}

}  // namespace

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::spectral_singularity: return "spectral_singularity";
    case FeatureKind::reflectionless_left: return "reflectionless_left";
    case FeatureKind::reflectionless_right: return "reflectionless_right";
    case FeatureKind::bidirectional_reflectionless: return "bidirectional_reflectionless";
    case FeatureKind::invisible_left: return "invisible_left";
    case FeatureKind::invisible_right: return "invisible_right";
  }
  return "?";
}

std::optional<FeatureKind> feature_kind_from_string(std::string_view s) {
  for (auto k : {FeatureKind::spectral_singularity, FeatureKind::reflectionless_left, FeatureKind::reflectionless_right,
                 FeatureKind::bidirectional_reflectionless, FeatureKind::invisible_left, FeatureKind::invisible_right})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::size_t ScanResult::count(FeatureKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(features.begin(), features.end(), [&](const Feature& f) { return f.kind == kind; }));
}

Minimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = std::min(lo, hi), b = std::max(lo, hi);
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  Minimum best = fc <= fd ? Minimum{c, fc} : Minimum{d, fd};
  for (int it = 0; it < 400 && b - a > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      if (fc < best.value) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      if (fd < best.value) best = {d, fd};
    }
  }
  return best;
}

ScanResult find_spectral_singularities(const Potential& p, double k_min, double k_max, const ScanOptions& opts) {
  const Grid grid = make_grid(k_min, k_max, opts);
  ScanResult result{k_min, k_max, grid.step, {}, {}};

  const auto points = transfer_grid(p, grid.ks, opts.backend, opts.ode);
  std::vector<double> f(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    f[i] = points[i].ok() ? std::norm(points[i].matrix.m.m22) : kInf;

  auto objective = guarded([&](double k) { return std::norm(transfer_matrix(p, k, opts.backend, opts.ode).m.m22); });
  const std::size_t n = grid.ks.size();
  for (std::size_t i : local_minima(f)) {
    const double lo = grid.ks[i == 0 ? 0 : i - 1];
    const double hi = grid.ks[std::min(i + 1, n - 1)];
    const Minimum m = golden_section_minimize(objective, lo, hi, opts.k_tol);
    const double residual = std::sqrt(m.value);
    if (!(residual <= opts.singularity_floor)) {
      result.rejected.push_back({m.x, residual});
      continue;
    }
    const TransferMatrix t = transfer_matrix(p, m.x, opts.backend, opts.ode);
    Feature feat;
    feat.kind = FeatureKind::spectral_singularity;
    feat.k_star = m.x;
    feat.residual = residual;
    feat.bracket_lo = lo;
    feat.bracket_hi = hi;
    feat.near_boundary = near_edge(m.x, k_min, k_max, grid.step);
    feat.abs_t = 1.0 / t.condition();
    feat.t_phase = -std::arg(t.m.m22);
    feat.dual_residual = std::abs(t.m.m11);
    if (!result.features.empty() && std::abs(result.features.back().k_star - feat.k_star) < opts.k_tol * 10.0) {
      if (feat.residual < result.features.back().residual) result.features.back() = feat;
      continue;
    }
    result.features.push_back(feat);
  }
  sort_features(result);
  return result;
}

ScanResult find_unidirectional_points(const Potential& p, double k_min, double k_max, const ScanOptions& opts) {
  const Grid grid = make_grid(k_min, k_max, opts);
  ScanResult result{k_min, k_max, grid.step, {}, {}};

  const auto points = transfer_grid(p, grid.ks, opts.backend, opts.ode);
  const std::size_t n = points.size();
  std::array<std::vector<double>, 2> f{std::vector<double>(n, kInf), std::vector<double>(n, kInf)};
  for (std::size_t i = 0; i < n; ++i) {
    if (!points[i].ok()) continue;
    const ScatteringData s = scattering_data(points[i].matrix);
    if (!s.finite) continue;
    f[0][i] = std::norm(s.r_left);
    f[1][i] = std::norm(s.r_right);
  }

  auto data_at = [&](double k) { return scattering_data(transfer_matrix(p, k, opts.backend, opts.ode)); };
  const double floor2 = opts.reflection_floor * opts.reflection_floor;

  std::vector<Feature> bidirectional;
  for (int side = 0; side < 2; ++side) {
    const auto& fs = f[static_cast<std::size_t>(side)];
    // Reflectionless everywhere (e.g. the free potential): no isolated features.
    if (std::all_of(fs.begin(), fs.end(), [&](double v) { return v <= floor2; })) continue;
    auto objective = guarded([&](double k) {
      const ScatteringData s = data_at(k);
      return s.finite ? std::norm(side == 0 ? s.r_left : s.r_right) : kInf;
    });
    for (std::size_t i : local_minima(fs)) {
      const double lo = grid.ks[i == 0 ? 0 : i - 1];
      const double hi = grid.ks[std::min(i + 1, n - 1)];
      const Minimum m = golden_section_minimize(objective, lo, hi, opts.k_tol);
      const double residual = std::sqrt(m.value);
      if (!(residual <= opts.reflection_floor)) {
        result.rejected.push_back({m.x, residual});
        continue;
      }
      const ScatteringData s = data_at(m.x);
      const double opposite = std::abs(side == 0 ? s.r_right : s.r_left);
      Feature feat;
      feat.k_star = m.x;
      feat.residual = residual;
      feat.bracket_lo = lo;
      feat.bracket_hi = hi;
      feat.near_boundary = near_edge(m.x, k_min, k_max, grid.step);
      feat.abs_t = std::abs(s.t);
      feat.t_phase = std::arg(s.t);
      feat.opposite_reflection = opposite;
      if (opposite > 10.0 * opts.reflection_floor) {
        feat.kind = side == 0 ? FeatureKind::reflectionless_left : FeatureKind::reflectionless_right;
        result.features.push_back(feat);
        if (check_invisibility(feat, s, opts.invisibility_tol)) {
          Feature inv = feat;
          inv.kind = side == 0 ? FeatureKind::invisible_left : FeatureKind::invisible_right;
          inv.residual = std::abs(s.t - 1.0);
          result.features.push_back(inv);
        }
      } else {
        feat.kind = FeatureKind::bidirectional_reflectionless;
        feat.residual = std::max(residual, opposite);
        auto dup = std::find_if(bidirectional.begin(), bidirectional.end(),
                                [&](const Feature& b) { return std::abs(b.k_star - feat.k_star) < grid.step; });
        if (dup == bidirectional.end()) bidirectional.push_back(feat);
        else if (feat.residual < dup->residual) *dup = feat;
      }
    }
  }

  for (const Feature& feat : bidirectional) {
    result.features.push_back(feat);
    const ScatteringData s = data_at(feat.k_star);
    if (check_invisibility(feat, s, opts.invisibility_tol)) {
      for (auto kind : {FeatureKind::invisible_left, FeatureKind::invisible_right}) {
        Feature inv = feat;
        inv.kind = kind;
        inv.residual = std::abs(s.t - 1.0);
        result.features.push_back(inv);
      }
    }
  }
  sort_features(result);
  return result;
}

ScanResult scan_all(const Potential& p, double k_min, double k_max, const ScanOptions& opts) {
  ScanResult a = find_spectral_singularities(p, k_min, k_max, opts);
  ScanResult b = find_unidirectional_points(p, k_min, k_max, opts);
  a.features.insert(a.features.end(), b.features.begin(), b.features.end());
  a.rejected.insert(a.rejected.end(), b.rejected.begin(), b.rejected.end());
  std::sort(a.rejected.begin(), a.rejected.end(), [](const Candidate& x, const Candidate& y) { return x.k < y.k; });
  sort_features(a);
  return a;
}

bool check_invisibility(const Feature& feature, const ScatteringData& s, double tol) {
  if (feature.kind == FeatureKind::spectral_singularity)
    throw DomainError("check_invisibility: feature is not a reflectionless point");
  return s.finite && std::abs(s.t - 1.0) <= tol;
}

}  // namespace ptscat
