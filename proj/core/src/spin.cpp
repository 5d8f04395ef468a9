#include "qsens/spin.hpp"

#include <cmath>
#include <sstream>

namespace qsens {

SpinLength SpinLength::from_value(double j) {
  const double twice = 2.0 * j;
  const double rounded = std::round(twice);
  if (!std::isfinite(j) || rounded < 1.0 || std::abs(twice - rounded) > 1e-12 || rounded > 1e6) {
    std::ostringstream os;
    os << "spin length j = " << j << " is not a positive half-integer";
    throw std::invalid_argument(os.str());
  }
  return SpinLength(static_cast<int>(rounded));
}

SpinLength SpinLength::from_dim(Eigen::Index dim) {
  if (dim < 2) throw std::invalid_argument("spin system requires dimension >= 2");
  return SpinLength(static_cast<int>(dim - 1));
}

SpinSystem make_spin_operators(double j) {
  const SpinLength length = SpinLength::from_value(j);
  const Eigen::Index d = length.dim();
  const double jj = length.value() * (length.value() + 1.0);

  CMatrix raise = CMatrix::Zero(d, d);
  for (Eigen::Index k = 1; k < d; ++k) {
    const double m = length.m(k);
    raise(k - 1, k) = std::sqrt(jj - m * (m + 1.0));
  }
  const CMatrix lower = raise.adjoint();
  CMatrix jz = CMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) jz(k, k) = length.m(k);

  return SpinSystem{length, HermitianOperator(CMatrix(0.5 * (raise + lower))),
                    HermitianOperator(CMatrix((raise - lower) / Complex(0.0, 2.0))), HermitianOperator(std::move(jz))};
}

QuantumState coherent_state_z(double j) {
  const SpinLength length = SpinLength::from_value(j);
  CVector psi = CVector::Zero(length.dim());
  psi(0) = 1.0;
  return QuantumState::pure(std::move(psi));
}

namespace {

struct Eigensystem {
  CMatrix vectors;
  RVector values;
};

// Phase convention: the first component whose magnitude is within a relative
// 1e-8 of the column maximum is made real positive. Eigenvectors of J_y have
// |v_m| = |v_{-m}|, so a bare argmax would depend on roundoff.
void fix_phase(Eigen::Ref<CVector> v) {
  const double peak = v.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) >= peak * (1.0 - 1e-8)) {
      v *= std::conj(v(k)) / std::abs(v(k));
      v(k) = std::abs(v(k));
      return;
    }
  }
}

Eigensystem jy_eigensystem(const SpinSystem& spin) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(spin.jy.matrix());
  if (es.info() != Eigen::Success) throw NumericalConsistencyError("jy_basis: eigen-decomposition failed");
  Eigensystem out{es.eigenvectors(), RVector(spin.dim())};
  for (Eigen::Index k = 0; k < spin.dim(); ++k) {
    const double exact = -spin.j() + static_cast<double>(k);
    if (std::abs(es.eigenvalues()(k) - exact) > 1e-8) {
      throw NumericalConsistencyError("jy_basis: J_y spectrum deviates from -j..j");
    }
    out.values(k) = exact;
    fix_phase(out.vectors.col(k));
  }
  return out;
}

ProjectiveBasis basis_from(const Eigensystem& es) {
  std::vector<double> labels(es.values.data(), es.values.data() + es.values.size());
  return ProjectiveBasis::from_unitary(es.vectors, std::move(labels));
}

}  // namespace

ProjectiveBasis jy_basis(double j) { return basis_from(jy_eigensystem(make_spin_operators(j))); }

QuantumState oat_state(double j, double tau) { return OneAxisTwisting(j).state(tau); }

QuantumState phase_evolve(const QuantumState& state, const HermitianOperator& h, double theta) {
  if (state.dim() != h.dim()) throw std::invalid_argument("phase_evolve: dimension mismatch");
  if (theta == 0.0) return state;
  return state.transformed(unitary_exp(h, theta));
}

QuantumState rotate(const QuantumState& state, Axis axis, double angle) {
  const SpinSystem spin = make_spin_operators(SpinLength::from_dim(state.dim()).value());
  const HermitianOperator& generator = axis == Axis::x ? spin.jx : (axis == Axis::y ? spin.jy : spin.jz);
  return state.transformed(unitary_exp(generator, angle));
}

OneAxisTwisting::Parts OneAxisTwisting::build(double j) {
  SpinSystem spin = make_spin_operators(j);
  Eigensystem es = jy_eigensystem(spin);
  return Parts{std::move(spin), std::move(es.vectors), std::move(es.values)};
}

OneAxisTwisting::OneAxisTwisting(double j) : OneAxisTwisting(build(j)) {}

OneAxisTwisting::OneAxisTwisting(Parts parts)
    : spin_(std::move(parts.spin)),
      eigenvectors_(std::move(parts.eigenvectors)),
      m_values_(std::move(parts.m_values)),
      basis_(basis_from(Eigensystem{eigenvectors_, m_values_})),
      coherent_in_y_(eigenvectors_.adjoint().col(0)) {}

QuantumState OneAxisTwisting::state(double tau) const {
  if (!std::isfinite(tau)) throw std::invalid_argument("oat_state: tau must be finite");
  const CVector phases =
      (m_values_.array().square().cast<Complex>() * Complex(0.0, -tau)).exp().matrix();
  CVector psi = eigenvectors_ * phases.cwiseProduct(coherent_in_y_).eval();
  return QuantumState::pure(std::move(psi));
}

}  // namespace qsens
