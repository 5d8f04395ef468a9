#pragma once

#include "qsens/observable.hpp"
#include "qsens/sensitivity.hpp"
#include "qsens/spin.hpp"

#include <vector>

namespace qsens {

/// Sensitivities of one one-axis-twisted state |Ψ(τ)⟩ measured in the J_y
/// basis with generator J_z. Raw values in rad⁻², rescaled ones divided by
/// the shot-noise level N = 2j.
struct SweepRecord {
  double j = 0.0;
  int particles = 0;
  double tau = 0.0;
  double tau_scaled = 0.0;  // τ√j
  double theta = 0.0;
  double fisher = 0.0;
  double enhancement = 0.0;
  double fisher_plus_e = 0.0;
  double quantum_fisher = 0.0;
  double chi_sqz = 0.0;
  double fisher_resc = 0.0;
  double enhancement_resc = 0.0;
  double fisher_plus_e_resc = 0.0;
  double quantum_fisher_resc = 0.0;
  double chi_sqz_resc = 0.0;
};

struct SweepOptions {
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Raw τ values for `points` equally spaced scaled times τ√j in
/// [scaled_min, scaled_max].
std::vector<double> scaled_tau_grid(double j, double scaled_min, double scaled_max, int points);

SweepRecord clock_record(const OneAxisTwisting& oat, double tau, double theta);

/// One record per τ, in input order regardless of scheduling.
std::vector<SweepRecord> sensitivity_sweep(double j, const std::vector<double>& taus, double theta,
                                           SweepOptions options = {});

enum class TauObjective {
  relative_gain,  // (F+E)/F where F+E reaches shot noise N, else 1; the default
  enhancement,    // E
};

struct TauOptimum {
  double tau = 0.0;
  double tau_scaled = 0.0;
  double fisher = 0.0;
  double enhancement = 0.0;
  double gain_ratio = 1.0;  // (F+E)/F
  double objective = 0.0;
  /// Objective at every point of the coarse grid (τ√j ∈ [0, 3], 300 points).
  std::vector<double> coarse_scaled;
  std::vector<double> coarse_objective;
};

/// Coarse scan over τ√j ∈ [0, 3] (300 points) followed by golden-section
/// refinement to |Δ(τ√j)| ≤ 1e-6.
TauOptimum find_tau_opt(double j, double theta, TauObjective objective = TauObjective::relative_gain);
TauOptimum find_tau_opt(const OneAxisTwisting& oat, double theta, TauObjective objective = TauObjective::relative_gain);

struct ScalingRecord {
  double j = 0.0;
  double tau_opt = 0.0;
  double tau_opt_scaled = 0.0;
  double fisher = 0.0;
  double enhancement = 0.0;
  double gain_ratio = 1.0;
  double c_h = 0.0;  // normalized H coefficient of X_opt at τ_opt
  int witness_f = 0;
  int witness_fe = 0;
};

std::vector<ScalingRecord> gain_scaling(const std::vector<double>& j_list, double theta, SweepOptions options = {});

struct CoefficientRow {
  double m_y = 0.0;
  double c_opt = 0.0;
  double c_opt0 = 0.0;
};

struct CoefficientProfile {
  std::vector<CoefficientRow> rows;
  double c_h = 0.0;   // X_opt
  double c_h0 = 0.0;  // X_opt,0, identically zero
};

CoefficientProfile coefficient_profile(const QuantumState& state, const HermitianOperator& h,
                                       const ProjectiveBasis& basis, double theta);
CoefficientProfile coefficient_profile(double j, double tau, double theta);

}  // namespace qsens
