#pragma once

#include "qsens/moments.hpp"
#include "qsens/sensitivity.hpp"

#include <optional>

namespace qsens {

/// X = c_H·H + Σ_x c_x Π_x + offset·1.
struct ObservableCoefficients {
  double c_h = 0.0;
  RVector c_x;
  bool normalized = false;
  double offset = 0.0;

  double norm() const;
};

HermitianOperator assemble_observable(const ObservableCoefficients& c, const HermitianOperator& h,
                                      const ProjectiveBasis& basis);

/// Rescales so that c_H² + Σ c_x² = 1 and the largest-magnitude coefficient
/// is positive. Throws std::invalid_argument for an all-zero input.
ObservableCoefficients normalize_coefficients(const ObservableCoefficients& raw);

struct OptimalObservable {
  HermitianOperator op;
  ObservableCoefficients raw;
  /// Empty when every raw coefficient vanishes. Coefficients are zeroed when
  /// the bound itself is below ChiSquared::kGradientFloor (basis commuting
  /// with H), where they would only carry rounding noise.
  std::optional<ObservableCoefficients> normalized;
  ReducedStats stats;
  QuantumState state_theta;
};

/// X_opt = X_opt,0 + a·b·(Σ_x γ_x/p_x Π_x − H), built at ρ(θ).
OptimalObservable x_opt(const QuantumState& state, const HermitianOperator& h, const ProjectiveBasis& basis,
                        double theta);

/// X_opt,0 = Σ_x (d_x/p_x) Π_x, built at ρ(θ).
OptimalObservable x_opt0(const QuantumState& state, const HermitianOperator& h, const ProjectiveBasis& basis,
                         double theta);

struct AblatedObservable {
  HermitianOperator op;  // X_opt + a·b·H
  ChiSquared chi;
};

/// X_opt with its H component dropped.
AblatedObservable ablated_observable(const QuantumState& state, const HermitianOperator& h,
                                     const ProjectiveBasis& basis, double theta);

}  // namespace qsens
