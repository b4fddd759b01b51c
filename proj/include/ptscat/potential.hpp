#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ptscat/matrix2.hpp"

namespace ptscat {

// Potentials enter the wave equation -psi'' + v(x) psi = k^2 psi, so v carries units of 1/length^2.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Layer {
  cplx value;
  double width;
};

/// Contiguous piecewise-constant slabs starting at x0, ordered left to right.
struct LayerStack {
  double x0 = 0.0;
  std::vector<Layer> layers;
};

struct Sample {
  double x;
  cplx value;
};

/// Samples joined by linear interpolation.
struct SampledGrid {
  std::vector<Sample> samples;
};

/// A named closed-form family, truncated where |v| drops below `threshold`.
struct AnalyticFamily {
  std::string name;
  std::map<std::string, double> params;
  double threshold = 1e-12;
};

/// A piece of the support on which the potential is smooth.
struct Segment {
  double lo;
  double hi;
  std::size_t index;
};

/// Immutable complex potential with compact numeric support.
class Potential {
 public:
  using Kind = std::variant<LayerStack, SampledGrid, AnalyticFamily>;

  static Potential free();
  static Potential layers(double x0, std::vector<Layer> layers);
  static Potential sampled(std::vector<Sample> samples);
  static Potential analytic(std::string family, std::map<std::string, double> params,
                            double threshold = 1e-12);

  /// v(x); zero outside the support. At a layer interface the mean of the two sides is returned.
  cplx operator()(double x) const;
  cplx evaluate(double x) const { return (*this)(x); }

  const Interval& support() const { return support_; }
  const Kind& kind() const { return kind_; }

  bool is_layered() const { return std::holds_alternative<LayerStack>(kind_); }
  bool is_zero() const;
  const LayerStack& layer_stack() const;

  /// Pieces of the support free of discontinuities, in order. Empty for the zero potential.
  std::vector<Segment> segments() const;

  /// The smooth formula of one segment, valid on its closed interval (no interface averaging).
  cplx evaluate_on(const Segment& segment, double x) const;

 private:
  Potential(Kind kind, Interval support, std::vector<double> edges);

  Kind kind_;
  Interval support_;
  std::vector<double> edges_;  // layer interfaces, size layers+1; empty otherwise
};

/// Symmetric-hull interval where an analytic family's |v| stays at or above `threshold`.
Interval truncation_interval(const AnalyticFamily& family);

/// Raw closed-form value of a named family, ignoring truncation.
cplx analytic_value(const AnalyticFamily& family, double x);

struct SymmetryClass {
  bool is_real = false;
  bool is_even = false;
  bool is_pt_symmetric = false;
  double real_violation = 0.0;  ///< sup |Im v(x)|
  double even_violation = 0.0;  ///< sup |v(-x) - v(x)|
  double pt_violation = 0.0;    ///< sup |v(-x)^* - v(x)|
  double tol = 0.0;
};

inline constexpr double kDefaultClassifyTol = 1e-10;
inline constexpr std::size_t kDefaultClassifySamples = 2001;

/// Samples v on a symmetric grid over [-L, L], L = max(|x_minus|, |x_plus|), plus every layer midpoint.
SymmetryClass classify_symmetry(const Potential& p, double tol = kDefaultClassifyTol,
                                std::size_t n_samples = kDefaultClassifySamples);

}  // namespace ptscat
