#include "qsens/sensitivity.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qsens {

double ChiSquared::value() const {
  if (insensitive()) return std::numeric_limits<double>::infinity();
  return variance / (gradient * gradient);
}

double ChiSquared::inverse() const {
  if (insensitive()) return 0.0;
  return gradient * gradient / variance;
}

ChiSquared chi_squared(const QuantumState& state_theta, const HermitianOperator& h, const HermitianOperator& x) {
  if (state_theta.dim() != h.dim() || x.dim() != h.dim()) throw std::invalid_argument("chi_squared: dimension mismatch");
  ChiSquared out;
  out.variance = state_theta.variance(x);
  out.gradient = 2.0 * state_theta.correlation(x, h).imag();

  const CMatrix xm = x.matrix();
  const Complex shift = xm.trace() / static_cast<double>(xm.rows());
  const CMatrix traceless = xm - shift * CMatrix::Identity(xm.rows(), xm.cols());
  if (max_abs(traceless) <= 1e-12) {
    out.diagnostic = ChiSquared::Diagnostic::identity_observable;
  } else if (std::abs(out.gradient) <= ChiSquared::kGradientFloor) {
    out.diagnostic = ChiSquared::Diagnostic::parameter_insensitive;
  }
  return out;
}

double classical_fisher(const QuantumState& state_theta, const HermitianOperator& h, const ProjectiveBasis& basis) {
  return reduced_projector_stats(state_theta, h, basis).fisher();
}

double enhancement(const ReducedStats& stats) { return stats.enhancement(); }

double quantum_fisher(const QuantumState& state, const HermitianOperator& h) {
  if (state.dim() != h.dim()) throw std::invalid_argument("quantum_fisher: dimension mismatch");
  if (state.is_pure()) return 4.0 * state.variance(h);

  Eigen::SelfAdjointEigenSolver<CMatrix> es(state.density());
  if (es.info() != Eigen::Success) throw NumericalConsistencyError("quantum_fisher: eigen-decomposition failed");
  const RVector& lambda = es.eigenvalues();
  const CMatrix hk = es.eigenvectors().adjoint() * h.apply(es.eigenvectors());
  double fq = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    for (Eigen::Index l = 0; l < lambda.size(); ++l) {
      const double sum = lambda(k) + lambda(l);
      if (sum <= 1e-12) continue;
      const double diff = lambda(k) - lambda(l);
      fq += 2.0 * diff * diff / sum * std::norm(hk(k, l));
    }
  }
  return fq;
}

bool within_relative(double x, double y, double rel) {
  return std::abs(x - y) <= rel * std::max(std::abs(x), std::abs(y)) + 1e-12;
}

bool ordered_within(double lower, double upper, double rel, double scale) {
  return lower <= upper + rel * std::abs(scale) + 1e-12;
}

SensitivityBreakdown enhanced_sensitivity(const QuantumState& state, const HermitianOperator& h,
                                          const ProjectiveBasis& basis, double theta, EnhancedOptions options) {
  const QuantumState evolved = phase_evolve(state, h, theta);
  const ReducedStats stats = reduced_projector_stats(evolved, h, basis);

  SensitivityBreakdown out;
  out.theta = theta;
  out.fisher = stats.fisher();
  out.enhancement = stats.enhancement();
  out.fisher_plus_e = out.fisher + out.enhancement;
  out.quantum_fisher = quantum_fisher(state, h);
  out.a = stats.a;
  out.b = stats.b;
  out.generator_in_basis_span = stats.generator_in_basis_span;
  out.diverging = stats.diverging;

  if (options.cross_check) {
    const auto family = OperatorFamily::generator_and_projectors(h, basis, stats.active);
    const MomentData md = moment_data(evolved, family);
    out.moment_path = md.moment.m(0, 0);
    if (!within_relative(out.fisher_plus_e, out.moment_path, 1e-8)) {
      std::ostringstream os;
      os.precision(17);
      os << "enhanced_sensitivity: closed form F+E = " << out.fisher_plus_e << " disagrees with moment matrix "
         << out.moment_path;
      throw NumericalConsistencyError(os.str());
    }
  } else {
    out.moment_path = std::numeric_limits<double>::quiet_NaN();
  }

  if (options.repetitions) {
    const int mu = *options.repetitions;
    if (mu <= 0) throw std::invalid_argument("enhanced_sensitivity: repetitions must be positive");
    out.repetitions = mu;
    out.estimator_variance = 1.0 / (mu * out.fisher_plus_e);
    out.cramer_rao_variance = 1.0 / (mu * out.fisher);
    out.quantum_cramer_rao_variance = 1.0 / (mu * out.quantum_fisher);
  }
  return out;
}

SqueezingSensitivity spin_squeezing_sensitivity(const QuantumState& state, const SpinSystem& spin) {
  if (state.dim() != spin.dim()) throw std::invalid_argument("spin_squeezing_sensitivity: dimension mismatch");
  const MomentData md = moment_data(state, OperatorFamily({spin.jx, spin.jy, spin.jz}));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(Eigen::Matrix3d(md.moment.m));
  SqueezingSensitivity out;
  out.value = std::max(0.0, es.eigenvalues()(2));
  out.direction = es.eigenvectors().col(2);
  Eigen::Index lead = 0;
  out.direction.cwiseAbs().maxCoeff(&lead);
  if (out.direction(lead) < 0.0) out.direction = -out.direction;
  return out;
}

int entanglement_witness(double chi_inv2, int particles) {
  if (!(chi_inv2 >= 0.0) || !std::isfinite(chi_inv2) || particles <= 0) {
    throw std::invalid_argument("entanglement_witness: need finite chi_inv2 >= 0 and a positive particle count");
  }
  const double ratio = chi_inv2 / particles;
  if (ratio <= 0.0) return 0;
  return static_cast<int>(std::ceil(ratio)) - 1;
}

}  // namespace qsens
