#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qsens {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Raised when two algebraically equivalent computations disagree, or when a
/// quantity that must be real/nonnegative carries a residue beyond tolerance.
class NumericalConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest absolute entry, ‖A‖_max.
double max_abs(const CMatrix& a);
double max_abs(const RMatrix& a);

/// Hermitian operator on a d-dimensional Hilbert space.
///
/// Stored either densely or, for projectors, as an isometry V with the
/// operator equal to V V†. The factored form keeps a J_y basis for j = 100
/// (201 rank-one projectors) at O(d^2) memory.
class HermitianOperator {
 public:
  static constexpr double kHermiticityTolerance = 1e-12;

  /// Dense operator. Throws std::invalid_argument if not square or not
  /// Hermitian within 1e-12 per element.
  explicit HermitianOperator(CMatrix matrix);

  /// Orthogonal projector V V† onto the column span of `isometry`.
  static HermitianOperator projector(CMatrix isometry);
  static HermitianOperator identity(Eigen::Index dim);

  Eigen::Index dim() const;
  bool is_projector() const { return std::holds_alternative<Factored>(repr_); }
  /// Rank of a factored projector; dim() for dense operators.
  Eigen::Index rank() const;

  /// Dense matrix (materialised for factored projectors).
  CMatrix matrix() const;
  /// Isometry of a factored projector. Throws std::logic_error otherwise.
  const CMatrix& isometry() const;

  /// A·W without materialising factored projectors.
  CMatrix apply(const CMatrix& w) const;

 private:
  struct Factored {
    CMatrix isometry;
  };
  explicit HermitianOperator(Factored f) : repr_(std::move(f)) {}

  std::variant<CMatrix, Factored> repr_;
};

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator*(double s, const HermitianOperator& a);

/// Unitary e^{-i A t} built from the spectral decomposition of A.
CMatrix unitary_exp(const HermitianOperator& generator, double t);

/// Pure or mixed quantum state.
///
/// Internally every state keeps a factor W with ρ = W W† (W = ψ for pure
/// states, W = V·diag(√λ) for mixed ones). All expectation values are Frobenius
/// inner products of A·W blocks, so pure and mixed states share one code path.
class QuantumState {
 public:
  enum class Kind { pure, mixed };

  static constexpr double kNormTolerance = 1e-12;
  static constexpr double kEigenvalueFloor = -1e-10;

  /// Throws std::invalid_argument unless ‖ψ‖ = 1 within 1e-12.
  static QuantumState pure(CVector psi);
  /// Throws std::invalid_argument unless ρ is Hermitian (1e-12), has unit
  /// trace (1e-12) and eigenvalues ≥ −1e-10.
  static QuantumState mixed(const CMatrix& rho);
  static QuantumState maximally_mixed(Eigen::Index dim);

  Kind kind() const { return kind_; }
  bool is_pure() const { return kind_ == Kind::pure; }
  Eigen::Index dim() const { return factor_.rows(); }

  /// State vector. Throws std::logic_error for mixed states.
  CVector vector() const;
  CMatrix density() const;
  const CMatrix& factor() const { return factor_; }
  /// Eigenvalues of ρ in ascending order (length dim()).
  RVector spectrum() const;
  double purity() const;

  Complex expectation(const HermitianOperator& a) const;
  double mean(const HermitianOperator& a) const;
  double variance(const HermitianOperator& a) const;
  /// ⟨A B⟩.
  Complex correlation(const HermitianOperator& a, const HermitianOperator& b) const;

  /// U ρ U†.
  QuantumState transformed(const CMatrix& unitary) const;

 private:
  QuantumState(Kind kind, CMatrix factor) : kind_(kind), factor_(std::move(factor)) {}

  Kind kind_;
  CMatrix factor_;
};

/// Complete set of mutually orthogonal projectors with outcome labels.
class ProjectiveBasis {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Validates idempotency, mutual orthogonality and completeness (1e-10).
  ProjectiveBasis(std::vector<HermitianOperator> projectors, std::vector<double> labels);

  /// Rank-one basis from the columns of a unitary, labels 0..d-1 by default.
  static ProjectiveBasis from_unitary(const CMatrix& unitary, std::vector<double> labels = {});
  /// Eigenbasis of the computational (standard) basis vectors.
  static ProjectiveBasis computational(Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return projectors_.size(); }
  const HermitianOperator& operator[](std::size_t x) const { return projectors_[x]; }
  const std::vector<HermitianOperator>& projectors() const { return projectors_; }
  const std::vector<double>& labels() const { return labels_; }

  /// Σ_x c_x Π_x as a dense matrix.
  CMatrix combine(const RVector& coefficients) const;
  /// p_x = Tr{ρ Π_x}.
  RVector probabilities(const QuantumState& state) const;

 private:
  Eigen::Index dim_;
  std::vector<HermitianOperator> projectors_;
  std::vector<double> labels_;
};

}  // namespace qsens
