#include "ptscat/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ptscat/errors.hpp"

namespace ptscat {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_finite(const ScatteringData& s) {
  if (!s.finite) throw DomainError("scattering amplitudes are not finite at this k");
}

std::size_t index_of(IdentityId id) {
  return static_cast<std::size_t>(std::find(kAllIdentities.begin(), kAllIdentities.end(), id) -
                                  kAllIdentities.begin());
}

struct NameEntry {
  IdentityId id;
  std::string_view name;
};

constexpr std::array<NameEntry, kAllIdentities.size()> kNames = {{
    {IdentityId::reciprocity_real, "RECIPROCITY_REAL"},
    {IdentityId::unitarity_real, "UNITARITY_REAL"},
    {IdentityId::pt_pseudo_unitarity, "PT_PSEUDO_UNITARITY"},
    {IdentityId::phase_sum_real, "PHASE_SUM_REAL"},
    {IdentityId::phase_sum_pt, "PHASE_SUM_PT"},
    {IdentityId::pt_phase_integers, "PT_PHASE_INTEGERS"},
    {IdentityId::negk_matrix, "NEGK_MATRIX"},
    {IdentityId::negk_amplitudes, "NEGK_AMPLITUDES"},
    {IdentityId::d_phase, "D_PHASE"},
    {IdentityId::r_negk_conj, "R_NEGK_CONJ"},
    {IdentityId::t_negk_conj, "T_NEGK_CONJ"},
    {IdentityId::reciprocity_gen, "RECIPROCITY_GEN"},
    {IdentityId::t_modulus_parity, "T_MODULUS_PARITY"},
    {IdentityId::gen_unitarity_l, "GEN_UNITARITY_L"},
    {IdentityId::gen_unitarity_r, "GEN_UNITARITY_R"},
    {IdentityId::r_phase_real, "R_PHASE_REAL"},
    {IdentityId::pt_negk_r, "PT_NEGK_R"},
}};

}  // namespace

std::string_view to_string(IdentityId id) {
  for (const auto& e : kNames)
    if (e.id == id) return e.name;
  return "?";
}

std::optional<IdentityId> identity_from_string(std::string_view s) {
  for (const auto& e : kNames)
    if (e.name == s) return e.id;
  return std::nullopt;
}

std::string_view to_string(Inapplicable reason) {
  switch (reason) {
    case Inapplicable::none: return "none";
    case Inapplicable::symmetry_class: return "symmetry_class";
    case Inapplicable::reflectionless: return "reflectionless";
    case Inapplicable::non_finite: return "non_finite";
    case Inapplicable::small_d: return "small_d";
  }
  return "?";
}

std::optional<Inapplicable> inapplicable_from_string(std::string_view s) {
  for (auto r : {Inapplicable::none, Inapplicable::symmetry_class, Inapplicable::reflectionless,
                 Inapplicable::non_finite, Inapplicable::small_d})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::optional<int> PhaseRecord::m_parity() const {
  if (!m1 || !m2) return std::nullopt;
  return ((*m1 + *m2) % 2 + 2) % 2;
}

PhaseRecord phases(const ScatteringData& s, double reflection_floor) {
  require_finite(s);
  PhaseRecord ph;
  if (std::abs(s.t) >= reflection_floor) ph.tau = std::arg(s.t);
  if (std::abs(s.r_left) >= reflection_floor) ph.lambda = std::arg(s.r_left);
  if (std::abs(s.r_right) >= reflection_floor) ph.rho = std::arg(s.r_right);
  auto integer_of = [&](const std::optional<double>& angle, std::optional<int>& m, double& residue) {
    if (!angle || !ph.tau) return;
    const double x = (*angle - *ph.tau) / kPi - 0.5;
    const double r = std::round(x);
    m = static_cast<int>(r);
    residue = std::abs(x - r);
  };
  integer_of(ph.lambda, ph.m1, ph.m1_residue);
  integer_of(ph.rho, ph.m2, ph.m2_residue);
  return ph;
}

double lattice_distance(double x, double period) { return std::abs(x - period * std::round(x / period)); }

PseudoUnitarity residual_pt_pseudo_unitarity(const ScatteringData& s) {
  require_finite(s);
  const double t2 = std::norm(s.t);
  const double gap = 1.0 - t2;
  const int sign = gap > 0.0 ? 1 : (gap < 0.0 ? -1 : 0);
  return {std::abs(t2 + sign * std::abs(s.r_left * s.r_right) - 1.0), sign};
}

double residual_generalized_unitarity(const ScatteringData& s_k, const ScatteringData& s_negk, Side side) {
  require_finite(s_k);
  require_finite(s_negk);
  const cplx product = side == Side::left ? s_k.r_left * s_negk.r_left : s_k.r_right * s_negk.r_right;
  return std::abs(product + std::norm(s_k.t) - 1.0);
}

ReciprocityResidual residual_reciprocity_gen(const ScatteringData& s_k, const ScatteringData& s_negk) {
  require_finite(s_k);
  require_finite(s_negk);
  return {std::abs(std::abs(s_negk.r_left) - std::abs(s_k.r_right)),
          std::abs(std::abs(s_negk.r_right) - std::abs(s_k.r_left))};
}

TParityResidual residual_t_parity(const ScatteringData& s_k, const ScatteringData& s_negk) {
  require_finite(s_k);
  require_finite(s_negk);
  return {std::abs(std::abs(s_negk.t) - std::abs(s_k.t)), std::abs(s_negk.t - std::conj(s_k.t))};
}

double NegkAmplitudeResidual::max() const { return std::max({r_left, r_right, t}); }

NegkAmplitudeResidual residual_negk_amplitudes(const ScatteringData& s_k, const ScatteringData& s_negk,
                                              double d_floor) {
  require_finite(s_k);
  require_finite(s_negk);
  if (std::abs(s_k.d) < d_floor) throw DomainError("|D(k)| below floor");
  return {std::abs(s_negk.r_left + s_k.r_right / s_k.d), std::abs(s_negk.r_right + s_k.r_left / s_k.d),
          std::abs(s_negk.t - s_k.t / s_k.d)};
}

PhaseSumResidual residual_phase_sums(const PhaseRecord& ph) {
  if (!ph.tau || !ph.lambda || !ph.rho) throw DomainError("phase sums need both reflection phases");
  const double excess = *ph.lambda + *ph.rho - 2.0 * *ph.tau;
  return {lattice_distance(excess - kPi, 2.0 * kPi), lattice_distance(excess, kPi)};
}

double residual_r_phase_real(const ScatteringData& s) {
  require_finite(s);
  const double tau = std::arg(s.t);
  return std::abs(std::conj(s.r_left) + std::polar(1.0, -2.0 * tau) * s.r_right);
}

double residual_negk_matrix(const TransferMatrix& m_k, const TransferMatrix& m_negk) {
  return max_abs_diff(m_negk.m, sigma1_sandwich(m_k.m)) / std::max(1.0, max_abs(m_k.m));
}

const IdentityEntry& IdentityReport::entry(IdentityId id) const { return entries.at(index_of(id)); }

double IdentityReport::max_applicable_residual() const {
  double worst = 0.0;
  for (const auto& e : entries)
    if (e.applicable) worst = std::max(worst, std::isnan(e.residual) ? std::numeric_limits<double>::infinity() : e.residual);
  return worst;
}

bool IdentityReport::passed(double tol) const {
  return std::all_of(entries.begin(), entries.end(), [&](const IdentityEntry& e) { return e.passed(tol); });
}

std::vector<IdentityId> IdentityReport::failures(double tol) const {
  std::vector<IdentityId> out;
  for (const auto& e : entries)
    if (!e.passed(tol)) out.push_back(e.id);
  return out;
}

IdentityReport identity_report(const TransferMatrix& m_k, const TransferMatrix& m_negk, const IdentityOptions& opts,
                               const SymmetryClass& cls) {
  IdentityReport r;
  r.k = m_k.k;
  r.k_backend = m_k.backend;
  r.negk_backend = m_negk.backend;
  r.at_k = scattering_data(m_k, opts.singularity_floor);
  r.at_negk = scattering_data(m_negk, opts.singularity_floor);
  const ScatteringData& s = r.at_k;
  const ScatteringData& n = r.at_negk;

  const bool real = cls.is_real;
  const bool pt = cls.is_pt_symmetric;
  const bool pt_or_real = pt || real;
  const bool both_finite = s.finite && n.finite;
  if (s.finite) {
    r.phases = phases(s, opts.reflection_floor);
    r.pt_sign = residual_pt_pseudo_unitarity(s).sign;
  }
  const bool have_phases = r.phases.tau && r.phases.lambda && r.phases.rho;
  const bool small_d = s.finite && std::abs(s.d) < opts.d_floor;

  r.entries.reserve(kAllIdentities.size());
  for (IdentityId id : kAllIdentities) r.entries.push_back({id, kNaN, false, Inapplicable::none});
  auto set = [&](IdentityId id, bool class_ok, bool needs_negk, bool needs_phases, auto&& compute) {
    IdentityEntry& e = r.entries[index_of(id)];
    Inapplicable reason = Inapplicable::none;
    if (!class_ok) reason = Inapplicable::symmetry_class;
    else if (!(needs_negk ? both_finite : s.finite)) reason = Inapplicable::non_finite;
    else if (needs_phases && !have_phases) reason = Inapplicable::reflectionless;
    const bool computable = (needs_negk ? both_finite : s.finite) && (!needs_phases || have_phases);
    e.residual = computable ? compute() : kNaN;
    e.applicable = reason == Inapplicable::none;
    e.reason = reason;
  };

  // Matrix-level relation: needs no amplitudes.
  {
    IdentityEntry& e = r.entries[index_of(IdentityId::negk_matrix)];
    e.residual = residual_negk_matrix(m_k, m_negk);
    e.applicable = true;
  }
  set(IdentityId::negk_amplitudes, true, true, false,
      [&] { return small_d ? kNaN : residual_negk_amplitudes(s, n, 0.0).max(); });
  if (small_d) {
    auto& e = r.entries[index_of(IdentityId::negk_amplitudes)];
    e.applicable = false;
    e.reason = Inapplicable::small_d;
  }

  set(IdentityId::reciprocity_real, real, false, false,
      [&] { return std::abs(std::abs(s.r_left) - std::abs(s.r_right)); });
  set(IdentityId::unitarity_real, real, false, false, [&] {
    const double t2 = std::norm(s.t);
    return std::max(std::abs(std::norm(s.r_left) + t2 - 1.0), std::abs(std::norm(s.r_right) + t2 - 1.0));
  });
  set(IdentityId::r_phase_real, real, false, false, [&] { return residual_r_phase_real(s); });
  set(IdentityId::phase_sum_real, real, false, true, [&] { return residual_phase_sums(r.phases).real_class; });
  set(IdentityId::r_negk_conj, real, true, false, [&] {
    return std::max(std::abs(n.r_left - std::conj(s.r_left)), std::abs(n.r_right - std::conj(s.r_right)));
  });

  set(IdentityId::pt_pseudo_unitarity, pt_or_real, false, false,
      [&] { return residual_pt_pseudo_unitarity(s).residual; });
  set(IdentityId::phase_sum_pt, pt_or_real, false, true, [&] { return residual_phase_sums(r.phases).pt_class; });
  set(IdentityId::d_phase, pt_or_real, false, false, [&] { return std::abs(s.d - s.t / std::conj(s.t)); });
  set(IdentityId::t_negk_conj, pt_or_real, true, false, [&] { return residual_t_parity(s, n).conjugate; });
  set(IdentityId::t_modulus_parity, pt_or_real, true, false, [&] { return residual_t_parity(s, n).modulus; });
  set(IdentityId::reciprocity_gen, pt_or_real, true, false, [&] { return residual_reciprocity_gen(s, n).max(); });
  set(IdentityId::gen_unitarity_l, pt_or_real, true, false,
      [&] { return residual_generalized_unitarity(s, n, Side::left); });
  set(IdentityId::gen_unitarity_r, pt_or_real, true, false,
      [&] { return residual_generalized_unitarity(s, n, Side::right); });
  set(IdentityId::pt_negk_r, pt_or_real, true, false, [&] {
    const cplx phase = std::polar(1.0, -2.0 * std::arg(s.t));
    return std::max(std::abs(n.r_left + phase * s.r_right), std::abs(n.r_right + phase * s.r_left));
  });

  set(IdentityId::pt_phase_integers, pt, false, true,
      [&] { return kPi * std::max(r.phases.m1_residue, r.phases.m2_residue); });
  return r;
}

IdentityReport identity_report(const Potential& p, double k, const IdentityOptions& opts, const SymmetryClass& cls) {
  if (k == 0.0) throw DomainError("identity_report: k must be nonzero");
  const TransferMatrix m_k = transfer_matrix(p, k, opts.k_backend, opts.ode);
  const TransferMatrix m_negk = transfer_matrix(p, -k, opts.negk_backend, opts.ode);
  return identity_report(m_k, m_negk, opts, cls);
}

IdentityReport identity_report(const Potential& p, double k, const IdentityOptions& opts) {
  return identity_report(p, k, opts, classify_symmetry(p));
}

}  // namespace ptscat
