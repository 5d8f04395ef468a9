#include "qsens/observable.hpp"

#include "qsens/spin.hpp"

#include <cmath>

namespace qsens {

double ObservableCoefficients::norm() const { return std::sqrt(c_h * c_h + c_x.squaredNorm()); }

HermitianOperator assemble_observable(const ObservableCoefficients& c, const HermitianOperator& h,
                                      const ProjectiveBasis& basis) {
  if (h.dim() != basis.dim()) throw std::invalid_argument("assemble_observable: dimension mismatch");
  CMatrix x = basis.combine(c.c_x);
  if (c.c_h != 0.0) x += c.c_h * h.matrix();
  if (c.offset != 0.0) x += c.offset * CMatrix::Identity(x.rows(), x.cols());
  return HermitianOperator(CMatrix(0.5 * (x + x.adjoint())));
}

ObservableCoefficients normalize_coefficients(const ObservableCoefficients& raw) {
  const double n = raw.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("normalize_coefficients: all coefficients are zero");

  // Sign: the leading coefficient of largest magnitude (c_H first) is positive.
  double peak = std::abs(raw.c_h);
  if (raw.c_x.size() > 0) peak = std::max(peak, raw.c_x.cwiseAbs().maxCoeff());
  double lead = raw.c_h;
  if (std::abs(raw.c_h) < peak * (1.0 - 1e-12)) {
    for (Eigen::Index k = 0; k < raw.c_x.size(); ++k) {
      if (std::abs(raw.c_x(k)) >= peak * (1.0 - 1e-12)) {
        lead = raw.c_x(k);
        break;
      }
    }
  }
  const double s = (lead < 0.0 ? -1.0 : 1.0) / n;
  ObservableCoefficients out;
  out.c_h = s * raw.c_h;
  out.c_x = s * raw.c_x;
  out.offset = s * raw.offset;
  out.normalized = true;
  return out;
}

namespace {

OptimalObservable build(const QuantumState& state, const HermitianOperator& h, const ProjectiveBasis& basis,
                        double theta, bool with_generator) {
  QuantumState evolved = phase_evolve(state, h, theta);
  ReducedStats stats = reduced_projector_stats(evolved, h, basis);

  ObservableCoefficients raw;
  raw.c_x = RVector::Zero(static_cast<Eigen::Index>(basis.size()));
  const double ab = with_generator ? stats.a * stats.b : 0.0;
  for (std::size_t x = 0; x < basis.size(); ++x) {
    if (!stats.kept[x]) continue;
    const auto i = static_cast<Eigen::Index>(x);
    raw.c_x(i) = (stats.d(i) + ab * stats.gamma(i)) / stats.p(i);
  }
  raw.c_h = -ab;
  // Below the χ² gradient floor the coefficients are rounding noise; report
  // the zero operator instead of normalizing it.
  const double gradient = stats.fisher() + (with_generator ? stats.enhancement() : 0.0);
  if (gradient <= ChiSquared::kGradientFloor) {
    raw.c_x.setZero();
    raw.c_h = 0.0;
  }

  std::optional<ObservableCoefficients> normalized;
  if (raw.norm() > 0.0) normalized = normalize_coefficients(raw);
  HermitianOperator op = assemble_observable(raw, h, basis);
  return OptimalObservable{std::move(op), std::move(raw), std::move(normalized), std::move(stats),
                           std::move(evolved)};
}

}  // namespace

OptimalObservable x_opt(const QuantumState& state, const HermitianOperator& h, const ProjectiveBasis& basis,
                        double theta) {
  return build(state, h, basis, theta, true);
}

OptimalObservable x_opt0(const QuantumState& state, const HermitianOperator& h, const ProjectiveBasis& basis,
                         double theta) {
  return build(state, h, basis, theta, false);
}

AblatedObservable ablated_observable(const QuantumState& state, const HermitianOperator& h,
                                     const ProjectiveBasis& basis, double theta) {
  const OptimalObservable opt = x_opt(state, h, basis, theta);
  ObservableCoefficients without_h = opt.raw;
  without_h.c_h = 0.0;
  HermitianOperator op = assemble_observable(without_h, h, basis);
  ChiSquared chi = chi_squared(opt.state_theta, h, op);
  return AblatedObservable{std::move(op), chi};
}

}  // namespace qsens
