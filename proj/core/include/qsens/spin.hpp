#pragma once

#include "qsens/types.hpp"

namespace qsens {

/// Spin length j restricted to positive half-integers, stored as 2j.
class SpinLength {
 public:
  /// Throws std::invalid_argument unless 2j is a positive integer.
  static SpinLength from_value(double j);
  static SpinLength from_dim(Eigen::Index dim);

  double value() const { return 0.5 * twice_; }
  int particles() const { return twice_; }  // N = 2j
  Eigen::Index dim() const { return twice_ + 1; }
  /// m_k = j − k, k = 0..2j (the global J_z ordering).
  double m(Eigen::Index k) const { return value() - static_cast<double>(k); }

 private:
  explicit SpinLength(int twice) : twice_(twice) {}
  int twice_;
};

/// Collective spin operators in the (2j+1)-dimensional symmetric subspace,
/// J_z eigenbasis ordered m = j, j−1, …, −j.
struct SpinSystem {
  SpinLength length;
  HermitianOperator jx;
  HermitianOperator jy;
  HermitianOperator jz;

  double j() const { return length.value(); }
  int particles() const { return length.particles(); }
  Eigen::Index dim() const { return length.dim(); }
};

enum class Axis { x, y, z };

SpinSystem make_spin_operators(double j);

/// |j, j⟩_z.
QuantumState coherent_state_z(double j);

/// e^{-i J_y² τ} |j, j⟩_z, applied exactly in the J_y eigenbasis.
QuantumState oat_state(double j, double tau);

/// ρ(θ) = e^{-iHθ} ρ e^{iHθ}.
QuantumState phase_evolve(const QuantumState& state, const HermitianOperator& h, double theta);

/// Rank-one projectors onto J_y eigenstates, labelled m_y = −j … j.
///
/// Each eigenvector's phase is fixed so that its leading largest-magnitude
/// component is real and positive.
ProjectiveBasis jy_basis(double j);

/// e^{-i J_axis angle} applied to a state of a spin system (j inferred from
/// the state dimension).
QuantumState rotate(const QuantumState& state, Axis axis, double angle);

/// Precomputed J_y eigenbasis for repeated one-axis-twisting evaluations.
class OneAxisTwisting {
 public:
  explicit OneAxisTwisting(double j);

  const SpinSystem& spin() const { return spin_; }
  const ProjectiveBasis& jy_basis() const { return basis_; }
  QuantumState state(double tau) const;

 private:
  struct Parts {
    SpinSystem spin;
    CMatrix eigenvectors;
    RVector m_values;
  };
  static Parts build(double j);
  explicit OneAxisTwisting(Parts parts);

  SpinSystem spin_;
  CMatrix eigenvectors_;  // columns ordered m_y = −j … j
  RVector m_values_;
  ProjectiveBasis basis_;
  CVector coherent_in_y_;  // ⟨m_y | j, j⟩_z
};

}  // namespace qsens
