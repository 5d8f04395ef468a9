#pragma once

#include "qsens/moments.hpp"
#include "qsens/spin.hpp"

#include <optional>

namespace qsens {

/// Method-of-moments sensitivity χ² = (ΔX)² / |⟨[X, H]⟩|².
struct ChiSquared {
  enum class Diagnostic { none, parameter_insensitive, identity_observable };
  static constexpr double kGradientFloor = 1e-14;

  double variance = 0.0;
  double gradient = 0.0;  // −i⟨[X, H]⟩, real
  Diagnostic diagnostic = Diagnostic::none;

  /// +∞ when the observable is insensitive to the parameter.
  double value() const;
  double inverse() const;
  bool insensitive() const { return diagnostic != Diagnostic::none; }
};

ChiSquared chi_squared(const QuantumState& state_theta, const HermitianOperator& h, const HermitianOperator& x);

/// F = Σ d_x² / p_x over kept outcomes.
double classical_fisher(const QuantumState& state_theta, const HermitianOperator& h, const ProjectiveBasis& basis);

/// E = a·b².
double enhancement(const ReducedStats& stats);

/// Pure: 4 Var(H). Mixed: 2 Σ (λ_k − λ_l)² / (λ_k + λ_l) |⟨k|H|l⟩|².
double quantum_fisher(const QuantumState& state, const HermitianOperator& h);

struct SensitivityBreakdown {
  double theta = 0.0;
  double fisher = 0.0;           // F
  double enhancement = 0.0;      // E
  double fisher_plus_e = 0.0;    // F + E
  double quantum_fisher = 0.0;   // F_Q
  double moment_path = 0.0;      // e₁ᵀ M e₁ over (H, Π_active)
  std::optional<double> chi_sqz; // spin systems only
  double a = 0.0;
  double b = 0.0;
  bool generator_in_basis_span = false;
  std::vector<std::size_t> diverging;

  std::optional<int> repetitions;
  /// χ²/μ = 1/(μ (F+E)), set when `repetitions` is.
  std::optional<double> estimator_variance;
  std::optional<double> cramer_rao_variance;          // 1/(μ F)
  std::optional<double> quantum_cramer_rao_variance;  // 1/(μ F_Q)
};

struct EnhancedOptions {
  /// Compare F + E against the moment-matrix route and throw
  /// NumericalConsistencyError when they differ by more than 1e-8 relative.
  bool cross_check = true;
  std::optional<int> repetitions;
};

/// Evolves `state` by θ under H and evaluates the full hierarchy
/// F ≤ F + E ≤ F_Q for measurements in `basis`.
SensitivityBreakdown enhanced_sensitivity(const QuantumState& state, const HermitianOperator& h,
                                          const ProjectiveBasis& basis, double theta, EnhancedOptions options = {});

/// Relative agreement used by the hierarchy and two-path checks:
/// |x − y| ≤ rel·max(|x|, |y|) + 1e-12.
bool within_relative(double x, double y, double rel);
/// lower ≤ upper up to rel·scale + 1e-12.
bool ordered_within(double lower, double upper, double rel, double scale);

struct SqueezingSensitivity {
  double value = 0.0;         // χ⁻²_SQZ
  Eigen::Vector3d direction;  // unit n maximising nᵀ M n
};

/// Largest eigenvalue of the moment matrix over (J_x, J_y, J_z).
SqueezingSensitivity spin_squeezing_sensitivity(const QuantumState& state, const SpinSystem& spin);

/// Largest integer k with χ⁻²/N > k, or 0.
int entanglement_witness(double chi_inv2, int particles);

}  // namespace qsens
