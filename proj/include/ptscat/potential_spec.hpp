#pragma once

#include <filesystem>
#include <string_view>

#include "ptscat/potential.hpp"

namespace ptscat {

// Potential description documents (JSON syntax). Exactly one of these top-level forms:
//
//   {"layers": [{"re": 0, "im": 0.5, "width": 1}, ...], "x0": -1}
//   {"samples": [{"x": -1, "re": 0, "im": 0}, ...]}
//   {"family": "scarf2", "params": {"v1": -1, "v2": 0.5}, "threshold": 1e-12}
//   {"builtin": "pt-bilayer", "params": {"gamma": 0.5}}
//
// Layers may carry an explicit left edge "x"; it must match the running edge.
// Errors throw SpecError naming the line (syntax) or the offending field.
Potential parse_potential_spec(std::string_view text);
Potential load_potential_file(const std::filesystem::path& path);

}  // namespace ptscat
