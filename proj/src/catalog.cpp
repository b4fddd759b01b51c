#include "ptscat/catalog.hpp"

#include <fmt/format.h>

#include "ptscat/errors.hpp"

namespace ptscat {
namespace builtin {

Potential barrier(double height, double half_width) {
  return Potential::layers(-half_width, {{height, 2.0 * half_width}});
}

Potential double_barrier(double height, double width, double gap) {
  return Potential::layers(-0.5 * gap - width, {{height, width}, {0.0, gap}, {height, width}});
}

Potential pt_bilayer(double gamma, double a) {
  return Potential::layers(-a, {{{0.0, gamma}, a}, {{0.0, -gamma}, a}});
}

Potential pt_stack4(cplx a, cplx b, double w1, double w2) {
  return Potential::layers(-(w1 + w2), {{a, w1}, {b, w2}, {std::conj(b), w2}, {std::conj(a), w1}});
}

Potential one_sided(double strength, double width) {
  return Potential::layers(0.0, {{{0.0, strength}, width}});
}

Potential scarf2(double v1, double v2, double alpha, double threshold) {
  return Potential::analytic("scarf2", {{"v1", v1}, {"v2", v2}, {"alpha", alpha}}, threshold);
}

}  // namespace builtin

namespace {

double get(const ParamMap& p, const char* key) { return p.at(key); }

}  // namespace

const std::vector<CatalogEntry>& builtin_potentials() {
  static const std::vector<CatalogEntry> entries = {
      {"free", "zero potential", {}, [](const ParamMap&) { return Potential::free(); }},
      {"barrier", "real square barrier on [-half_width, half_width]",
       {{"height", 2.0}, {"half_width", 1.0}},
       [](const ParamMap& p) { return builtin::barrier(get(p, "height"), get(p, "half_width")); }},
      {"double-barrier", "two real barriers separated by a gap, symmetric about 0",
       {{"height", 3.0}, {"width", 0.5}, {"gap", 2.0}},
       [](const ParamMap& p) { return builtin::double_barrier(get(p, "height"), get(p, "width"), get(p, "gap")); }},
      {"pt-bilayer", "+i gamma on (-a, 0), -i gamma on (0, a)",
       {{"gamma", 0.5}, {"a", 1.0}},
       [](const ParamMap& p) { return builtin::pt_bilayer(get(p, "gamma"), get(p, "a")); }},
      {"pt-stack4", "layers (a, b, b*, a*) with widths (w1, w2, w2, w1)",
       {{"a_re", 1.0}, {"a_im", 0.5}, {"b_re", -0.5}, {"b_im", 0.8}, {"w1", 0.5}, {"w2", 0.7}},
       [](const ParamMap& p) {
         return builtin::pt_stack4({get(p, "a_re"), get(p, "a_im")}, {get(p, "b_re"), get(p, "b_im")},
                                   get(p, "w1"), get(p, "w2"));
       }},
      {"one-sided", "i * strength on [0, width]",
       {{"strength", 1.0}, {"width", 1.0}},
       [](const ParamMap& p) { return builtin::one_sided(get(p, "strength"), get(p, "width")); }},
      {"scarf2", "complexified Scarf II, v1 sech^2(x/alpha) + i v2 sech(x/alpha) tanh(x/alpha)",
       {{"v1", -1.0}, {"v2", 0.5}, {"alpha", 1.0}, {"threshold", 1e-12}},
       [](const ParamMap& p) {
         return builtin::scarf2(get(p, "v1"), get(p, "v2"), get(p, "alpha"), get(p, "threshold"));
       }},
  };
  return entries;
}

Potential make_builtin(std::string_view name, const ParamMap& params) {
  for (const auto& e : builtin_potentials()) {
    if (e.name != name) continue;
    ParamMap merged = e.defaults;
    for (const auto& [key, value] : params) {
      if (!merged.contains(key)) throw SpecError(fmt::format("params.{}: unknown parameter for '{}'", key, name));
      merged[key] = value;
    }
    return e.make(merged);
  }
  throw SpecError(fmt::format("unknown builtin potential '{}'", name));
}

}  // namespace ptscat
