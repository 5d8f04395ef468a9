#pragma once

#include "qsens/types.hpp"

#include <span>

namespace qsens {

/// Ordered family of Hermitian operators sharing one dimension.
class OperatorFamily {
 public:
  explicit OperatorFamily(std::vector<HermitianOperator> members);

  /// (H, Π_x for every x in `outcomes`), in that order.
  static OperatorFamily generator_and_projectors(const HermitianOperator& h, const ProjectiveBasis& basis,
                                                 std::span<const std::size_t> outcomes);

  Eigen::Index dim() const { return members_.front().dim(); }
  std::size_t size() const { return members_.size(); }
  const HermitianOperator& operator[](std::size_t k) const { return members_[k]; }
  const std::vector<HermitianOperator>& members() const { return members_; }

 private:
  std::vector<HermitianOperator> members_;
};

/// Cutoff applied to the eigenvalues of the equilibrated covariance matrix,
/// relative to its largest eigenvalue.
struct RankPolicy {
  double relative_cutoff = 1e-10;
};

struct MomentMatrix {
  RMatrix m;
  Eigen::Index rank = 0;
  bool rank_deficient = false;
};

/// Covariance Γ, commutator C and moment matrix M = Cᵀ Γ⁺ C of a family.
struct MomentData {
  RMatrix gamma;       // ½⟨H_k H_l + H_l H_k⟩ − ⟨H_k⟩⟨H_l⟩
  RMatrix commutator;  // −i⟨[H_k, H_l]⟩
  MomentMatrix moment;
  RVector means;
};

MomentData moment_data(const QuantumState& state, const OperatorFamily& family, RankPolicy policy = {});

/// Cᵀ Γ⁺ C. Γ is rescaled to unit diagonal before the pseudo-inverse; this
/// leaves the quadratic form unchanged because the columns of C lie in the
/// range of Γ, and keeps families with widely different variances
/// well-conditioned.
MomentMatrix moment_matrix(const RMatrix& gamma, const RMatrix& commutator, RankPolicy policy = {});

/// nᵀ M n: the largest χ⁻² over span(family) for the generator nᵀĤ.
double max_moment_sensitivity(const MomentData& md, const RVector& n);

/// Per-outcome statistics of a projective measurement on ρ(θ) together with
/// the closed-form scalars of the enhanced bound.
struct ReducedStats {
  static constexpr double kProbabilityFloor = 1e-12;
  static constexpr double kDivergenceThreshold = 1e-8;
  static constexpr double kDegenerateRelative = 1e-10;

  RVector p;      // p(x|θ)
  RVector d;      // ∂p(x|θ)/∂θ = −i⟨[Π_x, H]⟩
  RVector gamma;  // Cov(H, Π_x)
  double mean_h = 0.0;
  double var_h = 0.0;

  std::vector<bool> kept;           // p_x ≥ floor
  std::size_t removed_index = 0;    // argmax p
  std::vector<std::size_t> active;  // kept outcomes other than removed_index, ascending
  RVector w;                        // w over `active`

  double a_inverse = 0.0;  // (ΔH)² − Σ_kept γ_x²/p_x
  double a = 0.0;
  double b = 0.0;  // Σ_kept γ_x d_x / p_x
  /// a⁻¹ vanished relative to (ΔH)²: H acts like an element of span(Π) on
  /// the state, so the enhancement is zero and a is reported as 0.
  bool generator_in_basis_span = false;
  /// Masked outcomes whose |d_x| exceeds 1e-8.
  std::vector<std::size_t> diverging;

  std::size_t outcomes() const { return static_cast<std::size_t>(p.size()); }
  /// Σ_kept d_x² / p_x.
  double fisher() const;
  /// a·b², with the [−1e-9, 0) window clamped to 0.
  double enhancement() const;
};

/// `state_theta` must already be the evolved state ρ(θ).
ReducedStats reduced_projector_stats(const QuantumState& state_theta, const HermitianOperator& h,
                                     const ProjectiveBasis& basis);

/// Closed-form inverse of Γ[Π without `removed`] = P − p pᵀ:
/// P⁻¹ + (1/p_removed) e eᵀ, rows/cols ordered by outcome with `removed`
/// skipped. Throws std::invalid_argument on a nonpositive probability.
RMatrix structured_inverse(std::span<const double> p, std::size_t removed);

/// Inverse of Γ over (H, Π_active) assembled from a, w and the structured
/// inverse of the projector block.
RMatrix block_inverse(const ReducedStats& stats);

}  // namespace qsens
