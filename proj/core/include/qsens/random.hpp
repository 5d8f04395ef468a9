#pragma once

#include "qsens/types.hpp"

#include <cstdint>
#include <random>

namespace qsens {

/// Seeded generator for random test and verification instances. All draws
/// come from one std::mt19937_64 stream, so a seed fixes the whole sequence.
class InstanceSampler {
 public:
  explicit InstanceSampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive
  double normal();
  Complex complex_normal();

  /// Haar-random pure state.
  CVector haar_vector(Eigen::Index dim);
  /// Haar-random unitary (QR of a Ginibre matrix with the phase correction).
  CMatrix haar_unitary(Eigen::Index dim);
  /// GUE sample (G + G†)/2 with standard complex normal G.
  CMatrix gue(Eigen::Index dim);
  /// Random full-rank density matrix G G† / tr.
  CMatrix random_density(Eigen::Index dim, Eigen::Index rank);
  RVector probability_vector(Eigen::Index r);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};


/// Rank-one basis U|k⟩ for a Haar-random U.
ProjectiveBasis random_basis(InstanceSampler& rng, Eigen::Index dim);
/// Random basis whose projectors group consecutive columns of a Haar unitary
/// into `blocks` (1 ≤ blocks ≤ dim) projectors of varying rank.
ProjectiveBasis random_coarse_basis(InstanceSampler& rng, Eigen::Index dim, Eigen::Index blocks);

}  // namespace qsens
