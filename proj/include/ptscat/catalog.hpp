#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ptscat/potential.hpp"

namespace ptscat {

using ParamMap = std::map<std::string, double>;

struct CatalogEntry {
  std::string name;
  std::string description;
  ParamMap defaults;
  Potential (*make)(const ParamMap& params);
};

/// Named, parameterized constructors for the reference potentials.
const std::vector<CatalogEntry>& builtin_potentials();

/// Builds a catalog potential; unspecified parameters take the entry's defaults.
/// Unknown names or parameter keys throw SpecError.
Potential make_builtin(std::string_view name, const ParamMap& params = {});

namespace builtin {

Potential barrier(double height = 2.0, double half_width = 1.0);
Potential double_barrier(double height = 3.0, double width = 0.5, double gap = 2.0);
/// +i gamma on (-a, 0), -i gamma on (0, a).
Potential pt_bilayer(double gamma = 0.5, double a = 1.0);
/// Layers (a, b, b*, a*) with widths (w1, w2, w2, w1), centred on the origin.
Potential pt_stack4(cplx a = {1.0, 0.5}, cplx b = {-0.5, 0.8}, double w1 = 0.5, double w2 = 0.7);
/// i * strength on [0, width]: neither real nor PT-symmetric.
Potential one_sided(double strength = 1.0, double width = 1.0);
/// v1 sech^2(x/alpha) + i v2 sech(x/alpha) tanh(x/alpha), PT-symmetric for real v1, v2.
Potential scarf2(double v1 = -1.0, double v2 = 0.5, double alpha = 1.0, double threshold = 1e-12);

}  // namespace builtin

}  // namespace ptscat
