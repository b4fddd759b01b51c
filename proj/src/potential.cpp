#include "ptscat/potential.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ptscat/errors.hpp"

namespace ptscat {
namespace {

double param(const AnalyticFamily& f, const char* key, double fallback) {
  auto it = f.params.find(key);
  return it == f.params.end() ? fallback : it->second;
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct FamilyDef {
  const char* name;
  std::vector<const char*> keys;
  cplx (*value)(const AnalyticFamily&, double x);
  // A distance from the centre beyond which |v| < threshold is guaranteed.
  double (*tail_bound)(const AnalyticFamily&);
};

cplx scarf2_value(const AnalyticFamily& f, double x) {
  const double alpha = param(f, "alpha", 1.0);
  const double u = (x - param(f, "center", 0.0)) / alpha;
  const double sech = 1.0 / std::cosh(u);
  return {param(f, "v1", 0.0) * sech * sech, param(f, "v2", 0.0) * sech * std::tanh(u)};
}

double scarf2_tail(const AnalyticFamily& f) {
  // sech^2 u <= 4 e^{-2|u|}, |sech u tanh u| <= 2 e^{-|u|}
  const double amp = 4.0 * std::abs(param(f, "v1", 0.0)) + 2.0 * std::abs(param(f, "v2", 0.0));
  return param(f, "alpha", 1.0) * (std::log(std::max(amp, f.threshold) / f.threshold) + 2.0);
}

cplx gaussian_value(const AnalyticFamily& f, double x) {
  const double u = (x - param(f, "center", 0.0)) / param(f, "width", 1.0);
  return cplx{param(f, "re", 0.0), param(f, "im", 0.0)} * std::exp(-u * u);
}

double gaussian_tail(const AnalyticFamily& f) {
  const double amp = std::abs(cplx{param(f, "re", 0.0), param(f, "im", 0.0)});
  return param(f, "width", 1.0) * (std::sqrt(std::log(std::max(amp, f.threshold) / f.threshold)) + 1.0);
}

const std::vector<FamilyDef>& families() {
  static const std::vector<FamilyDef> defs = {
      {"scarf2", {"v1", "v2", "alpha", "center"}, scarf2_value, scarf2_tail},
      {"gaussian", {"re", "im", "width", "center"}, gaussian_value, gaussian_tail},
  };
  return defs;
}

const FamilyDef& family_def(const AnalyticFamily& f) {
  for (const auto& d : families())
    if (f.name == d.name) return d;
  throw SpecError(fmt::format("unknown analytic family '{}'", f.name));
}

// Largest distance d from the centre, along direction `dir`, with |v(c + dir d)| >= threshold.
double tail_extent(const AnalyticFamily& f, const FamilyDef& def, double center, double dir) {
  const double bound = def.tail_bound(f);
  constexpr int kScan = 4000;
  const double h = bound / kScan;
  auto above = [&](double d) { return std::abs(def.value(f, center + dir * d)) >= f.threshold; };
  int last = -1;
  for (int j = 0; j <= kScan; ++j)
    if (above(j * h)) last = j;
  if (last < 0) return -1.0;
  if (last == kScan) return bound;
  double lo = last * h, hi = (last + 1) * h;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (above(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

cplx analytic_value(const AnalyticFamily& family, double x) { return family_def(family).value(family, x); }

Interval truncation_interval(const AnalyticFamily& family) {
  const auto& def = family_def(family);
  const double center = param(family, "center", 0.0);
  const double half = std::max(tail_extent(family, def, center, +1.0), tail_extent(family, def, center, -1.0));
  if (half <= 0.0) return {center, center};
  return {center - half, center + half};
}

Potential::Potential(Kind kind, Interval support, std::vector<double> edges)
    : kind_(std::move(kind)), support_(support), edges_(std::move(edges)) {}

Potential Potential::free() { return Potential(LayerStack{}, Interval{0.0, 0.0}, {0.0}); }

Potential Potential::layers(double x0, std::vector<Layer> layers) {
  if (!std::isfinite(x0)) throw SpecError("x0: must be finite");
  if (layers.empty()) return free();
  std::vector<double> edges{x0};
  edges.reserve(layers.size() + 1);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (!(l.width > 0.0) || !std::isfinite(l.width))
      throw SpecError(fmt::format("layers[{}].width: must be a positive finite number, got {}", i, l.width));
    if (!finite(l.value)) throw SpecError(fmt::format("layers[{}]: value must be finite", i));
    edges.push_back(edges.back() + l.width);
  }
  Interval support{edges.front(), edges.back()};
  return Potential(LayerStack{x0, std::move(layers)}, support, std::move(edges));
}

Potential Potential::sampled(std::vector<Sample> samples) {
  if (samples.size() < 2) throw SpecError("samples: at least 2 samples are required");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].x) || !finite(samples[i].value))
      throw SpecError(fmt::format("samples[{}]: values must be finite", i));
    if (i > 0 && !(samples[i].x > samples[i - 1].x))
      throw SpecError(fmt::format("samples[{}].x: abscissae must be strictly increasing", i));
  }
  Interval support{samples.front().x, samples.back().x};
  return Potential(SampledGrid{std::move(samples)}, support, {});
}

Potential Potential::analytic(std::string family, std::map<std::string, double> params, double threshold) {
  if (!(threshold > 0.0)) throw SpecError("threshold: must be positive");
  AnalyticFamily f{std::move(family), std::move(params), threshold};
  const auto& def = family_def(f);
  for (const auto& [key, value] : f.params) {
    if (std::find_if(def.keys.begin(), def.keys.end(), [&](const char* k) { return key == k; }) == def.keys.end())
      throw SpecError(fmt::format("params.{}: unknown parameter for family '{}'", key, f.name));
    if (!std::isfinite(value)) throw SpecError(fmt::format("params.{}: must be finite", key));
  }
  for (const char* scale : {"alpha", "width"})
    if (f.params.contains(scale) && !(f.params.at(scale) > 0.0))
      throw SpecError(fmt::format("params.{}: must be positive", scale));
  Interval support = truncation_interval(f);
  return Potential(std::move(f), support, {});
}

bool Potential::is_zero() const {
  if (support_.width() <= 0.0) return true;
  if (const auto* s = std::get_if<LayerStack>(&kind_))
    return std::all_of(s->layers.begin(), s->layers.end(), [](const Layer& l) { return l.value == cplx{}; });
  return false;
}

const LayerStack& Potential::layer_stack() const {
  if (const auto* s = std::get_if<LayerStack>(&kind_)) return *s;
  throw UnsupportedBackend("potential is not a layer stack");
}

cplx Potential::operator()(double x) const {
  if (!support_.contains(x) || support_.width() <= 0.0) return 0.0;
  return std::visit(
      [&](const auto& k) -> cplx {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LayerStack>) {
          const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
          const auto idx = static_cast<std::size_t>(it - edges_.begin());  // edges_[idx-1] <= x < edges_[idx]
          auto value_of = [&](std::size_t layer) -> cplx {
            return layer < k.layers.size() ? k.layers[layer].value : cplx{};
          };
          if (x == edges_[idx - 1]) {
            const cplx left = idx >= 2 ? value_of(idx - 2) : cplx{};
            return 0.5 * (left + value_of(idx - 1));
          }
          return value_of(idx - 1);
        } else if constexpr (std::is_same_v<K, SampledGrid>) {
          const auto& s = k.samples;
          auto it = std::upper_bound(s.begin(), s.end(), x, [](double v, const Sample& e) { return v < e.x; });
          if (it == s.end()) return s.back().value;
          const auto& b = *it;
          const auto& a = *(it - 1);
          const double t = (x - a.x) / (b.x - a.x);
          return a.value + t * (b.value - a.value);
        } else {
          return analytic_value(k, x);
        }
      },
      kind_);
}

std::vector<Segment> Potential::segments() const {
  std::vector<Segment> out;
  if (support_.width() <= 0.0) return out;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LayerStack>) {
          for (std::size_t i = 0; i < k.layers.size(); ++i) out.push_back({edges_[i], edges_[i + 1], i});
        } else if constexpr (std::is_same_v<K, SampledGrid>) {
          for (std::size_t i = 0; i + 1 < k.samples.size(); ++i)
            out.push_back({k.samples[i].x, k.samples[i + 1].x, i});
        } else {
          out.push_back({support_.lo, support_.hi, 0});
        }
      },
      kind_);
  return out;
}

cplx Potential::evaluate_on(const Segment& segment, double x) const {
  return std::visit(
      [&](const auto& k) -> cplx {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LayerStack>) {
          return k.layers[segment.index].value;
        } else if constexpr (std::is_same_v<K, SampledGrid>) {
          const auto& a = k.samples[segment.index];
          const auto& b = k.samples[segment.index + 1];
          return a.value + ((x - a.x) / (b.x - a.x)) * (b.value - a.value);
        } else {
          return analytic_value(k, x);
        }
      },
      kind_);
}

SymmetryClass classify_symmetry(const Potential& p, double tol, std::size_t n_samples) {
  if (!(tol > 0.0)) throw DomainError("classify_symmetry: tol must be positive");
  if (n_samples < 2) throw DomainError("classify_symmetry: need at least 2 samples");
  SymmetryClass c;
  c.tol = tol;
  const double L = std::max(std::abs(p.support().lo), std::abs(p.support().hi));
  if (!p.is_zero() && L > 0.0) {
    std::vector<double> xs;
    for (std::size_t j = 0; j < n_samples; ++j)
      xs.push_back(-L + 2.0 * L * static_cast<double>(j) / static_cast<double>(n_samples - 1));
    std::vector<double> edges;
    if (p.is_layered()) {
      // Mirrored edges agree only up to rounding, so stay clear of them and probe every layer.
      for (const auto& s : p.segments()) {
        edges.push_back(s.lo);
        edges.push_back(s.hi);
        xs.push_back(0.5 * (s.lo + s.hi));
        xs.push_back(-0.5 * (s.lo + s.hi));
      }
    }
    const double guard = 1e-9 * std::max(1.0, L);
    auto near_edge = [&](double x) {
      for (double e : edges)
        if (std::abs(x - e) <= guard || std::abs(-x - e) <= guard) return true;
      return false;
    };
    for (double x : xs) {
      if (near_edge(x)) continue;
      const cplx v = p(x);
      const cplx vm = p(-x);
      c.real_violation = std::max(c.real_violation, std::abs(v.imag()));
      c.even_violation = std::max(c.even_violation, std::abs(vm - v));
      c.pt_violation = std::max(c.pt_violation, std::abs(std::conj(vm) - v));
    }
  }
  c.is_real = c.real_violation <= tol;
  c.is_even = c.even_violation <= tol;
  c.is_pt_symmetric = c.pt_violation <= tol;
  return c;
}

}  // namespace ptscat
