#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptscat/potential.hpp"
#include "ptscat/transfer.hpp"

namespace ptscat {

// Amplitude-level reciprocity and unitarity relations, each evaluated as a residual >= 0.
//
// Which relations are expected to hold depends on the symmetry class of the potential:
//   any potential:        NEGK_MATRIX, NEGK_AMPLITUDES
//   real:                 RECIPROCITY_REAL, UNITARITY_REAL, R_PHASE_REAL, PHASE_SUM_REAL, R_NEGK_CONJ
//   real or PT-symmetric: PT_PSEUDO_UNITARITY, PHASE_SUM_PT, D_PHASE, T_NEGK_CONJ, RECIPROCITY_GEN,
//                         T_MODULUS_PARITY, GEN_UNITARITY_L/R, PT_NEGK_R
//   PT-symmetric:         PT_PHASE_INTEGERS

enum class IdentityId {
  reciprocity_real,     // |R_l| = |R_r|
  unitarity_real,       // |R_{l/r}|^2 + |T|^2 = 1
  pt_pseudo_unitarity,  // |T|^2 +- |R_l R_r| = 1, sign of 1 - |T|^2
  phase_sum_real,       // lambda + rho = 2 tau + (2m+1) pi
  phase_sum_pt,         // lambda + rho = 2 tau + (m1+m2+1) pi
  pt_phase_integers,    // lambda - tau - pi/2 and rho - tau - pi/2 in pi*Z
  negk_matrix,          // M11(-k) = M22(k), M12(-k) = M21(k)
  negk_amplitudes,      // R_l(-k) = -R_r/D, R_r(-k) = -R_l/D, T(-k) = T/D
  d_phase,              // D = T / T^*
  r_negk_conj,          // R_{l/r}(-k) = R_{l/r}(k)^*
  t_negk_conj,          // T(-k) = T(k)^*
  reciprocity_gen,      // |R_l(-k)| = |R_r(k)|, |R_r(-k)| = |R_l(k)|
  t_modulus_parity,     // |T(-k)| = |T(k)|
  gen_unitarity_l,      // R_l(k) R_l(-k) + |T(k)|^2 = 1
  gen_unitarity_r,      // R_r(k) R_r(-k) + |T(k)|^2 = 1
  r_phase_real,         // R_l^* = -e^{-2i tau} R_r
  pt_negk_r,            // R_{l/r}(-k) = -e^{-2i tau} R_{r/l}(k)
};

inline constexpr std::array kAllIdentities = {
    IdentityId::reciprocity_real, IdentityId::unitarity_real,   IdentityId::pt_pseudo_unitarity,
    IdentityId::phase_sum_real,   IdentityId::phase_sum_pt,     IdentityId::pt_phase_integers,
    IdentityId::negk_matrix,      IdentityId::negk_amplitudes,  IdentityId::d_phase,
    IdentityId::r_negk_conj,      IdentityId::t_negk_conj,      IdentityId::reciprocity_gen,
    IdentityId::t_modulus_parity, IdentityId::gen_unitarity_l,  IdentityId::gen_unitarity_r,
    IdentityId::r_phase_real,     IdentityId::pt_negk_r,
};

/// Stable upper-case id, e.g. "GEN_UNITARITY_L".
std::string_view to_string(IdentityId id);
std::optional<IdentityId> identity_from_string(std::string_view s);

enum class Inapplicable { none, symmetry_class, reflectionless, non_finite, small_d };

std::string_view to_string(Inapplicable reason);
std::optional<Inapplicable> inapplicable_from_string(std::string_view s);

struct PhaseRecord {
  std::optional<double> tau, lambda, rho;  ///< principal arguments in (-pi, pi]
  std::optional<int> m1, m2;
  double m1_residue = 0.0;  ///< |(lambda - tau)/pi - 1/2 - m1|, in units of pi
  double m2_residue = 0.0;

  std::optional<int> m_parity() const;

  friend bool operator==(const PhaseRecord&, const PhaseRecord&) = default;
};

inline constexpr double kReflectionFloor = 1e-10;
inline constexpr double kDFloor = 1e-12;

/// Phase angles of T, R_left, R_right; an angle is absent when its modulus is below the floor.
/// Throws DomainError for non-finite data.
PhaseRecord phases(const ScatteringData& s, double reflection_floor = kReflectionFloor);

/// Distance from x to the nearest point of period * Z.
double lattice_distance(double x, double period);

struct PseudoUnitarity {
  double residual;
  int sign;  ///< sign of 1 - |T|^2
};

PseudoUnitarity residual_pt_pseudo_unitarity(const ScatteringData& s);

enum class Side { left, right };

double residual_generalized_unitarity(const ScatteringData& s_k, const ScatteringData& s_negk,
                                      Side side);

struct ReciprocityResidual {
  double left_from_right;  ///< | |R_l(-k)| - |R_r(k)| |
  double right_from_left;  ///< | |R_r(-k)| - |R_l(k)| |
  double max() const { return left_from_right > right_from_left ? left_from_right : right_from_left; }
};

ReciprocityResidual residual_reciprocity_gen(const ScatteringData& s_k, const ScatteringData& s_negk);

struct TParityResidual {
  double modulus;    ///< | |T(-k)| - |T(k)| |
  double conjugate;  ///< |T(-k) - T(k)^*|
};

TParityResidual residual_t_parity(const ScatteringData& s_k, const ScatteringData& s_negk);

struct NegkAmplitudeResidual {
  double r_left;   ///< |R_l(-k) + R_r(k)/D(k)|
  double r_right;  ///< |R_r(-k) + R_l(k)/D(k)|
  double t;        ///< |T(-k) - T(k)/D(k)|
  double max() const;
};

/// Valid for any potential. Throws DomainError when |D(k)| is below `d_floor`.
NegkAmplitudeResidual residual_negk_amplitudes(const ScatteringData& s_k, const ScatteringData& s_negk,
                                              double d_floor = kDFloor);

struct PhaseSumResidual {
  double real_class;  ///< distance of lambda + rho - 2 tau - pi to 2 pi Z
  double pt_class;    ///< distance of lambda + rho - 2 tau to pi Z
};

/// Throws DomainError when lambda or rho is absent.
PhaseSumResidual residual_phase_sums(const PhaseRecord& ph);

/// |R_l^* + e^{-2i tau} R_r|.
double residual_r_phase_real(const ScatteringData& s);

/// max entrywise |M(-k) - sigma1 M(k) sigma1| relative to max(1, max|M|).
double residual_negk_matrix(const TransferMatrix& m_k, const TransferMatrix& m_negk);

struct IdentityEntry {
  IdentityId id;
  double residual = 0.0;  ///< NaN when it could not be evaluated
  bool applicable = false;
  Inapplicable reason = Inapplicable::none;

  bool passed(double tol) const { return !applicable || residual <= tol; }
};

struct IdentityOptions {
  Backend k_backend = Backend::stack;
  Backend negk_backend = Backend::stack;
  OdeOptions ode{};
  double tol = 1e-8;  ///< pass threshold on applicable residuals
  double reflection_floor = kReflectionFloor;
  double d_floor = kDFloor;
  double singularity_floor = kSingularityFloor;
};

struct IdentityReport {
  double k = 0.0;
  ScatteringData at_k, at_negk;
  PhaseRecord phases;
  int pt_sign = 0;
  Backend k_backend = Backend::stack;
  Backend negk_backend = Backend::stack;
  std::vector<IdentityEntry> entries;  ///< ordered as kAllIdentities

  const IdentityEntry& entry(IdentityId id) const;
  double max_applicable_residual() const;
  bool passed(double tol) const;
  std::vector<IdentityId> failures(double tol) const;
};

/// Computes M(k) and M(-k) by independent backend runs and fills every identity.
IdentityReport identity_report(const Potential& p, double k, const IdentityOptions& opts,
                               const SymmetryClass& cls);
IdentityReport identity_report(const Potential& p, double k, const IdentityOptions& opts = {});

/// Builds the report from precomputed matrices (no backend calls).
IdentityReport identity_report(const TransferMatrix& m_k, const TransferMatrix& m_negk,
                               const IdentityOptions& opts, const SymmetryClass& cls);

}  // namespace ptscat
