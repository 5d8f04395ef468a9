#include "qsens/clock.hpp"

#include "qsens/parallel.hpp"

#include <cmath>
#include <optional>

namespace qsens {

namespace {

constexpr double kCoarseMax = 3.0;
constexpr int kCoarsePoints = 300;
constexpr double kRefineTolerance = 1e-6;

struct Evaluation {
  double fisher = 0.0;
  double enhancement = 0.0;
  double shot_noise = 0.0;

  double gain() const { return fisher > 0.0 ? (fisher + enhancement) / fisher : 1.0; }
  // Below shot noise both F and F+E vanish near τ = 0 and their ratio is
  // 0/0; those points count as no gain.
  double objective(TauObjective o) const {
    if (o == TauObjective::enhancement) return enhancement;
    return fisher + enhancement >= shot_noise ? gain() : 1.0;
  }
};

Evaluation evaluate(const OneAxisTwisting& oat, double tau, double theta) {
  const QuantumState state = phase_evolve(oat.state(tau), oat.spin().jz, theta);
  const ReducedStats stats = reduced_projector_stats(state, oat.spin().jz, oat.jy_basis());
  return Evaluation{stats.fisher(), stats.enhancement(), static_cast<double>(oat.spin().particles())};
}

}  // namespace

std::vector<double> scaled_tau_grid(double j, double scaled_min, double scaled_max, int points) {
  const double root = std::sqrt(SpinLength::from_value(j).value());
  if (points < 1) throw std::invalid_argument("scaled_tau_grid: need at least one point");
  if (!(scaled_min >= 0.0) || !(scaled_max >= scaled_min) || !std::isfinite(scaled_max)) {
    throw std::invalid_argument("scaled_tau_grid: need 0 <= min <= max");
  }
  std::vector<double> taus(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double s = points == 1 ? scaled_min : scaled_min + (scaled_max - scaled_min) * k / (points - 1);
    taus[static_cast<std::size_t>(k)] = s / root;
  }
  return taus;
}

SweepRecord clock_record(const OneAxisTwisting& oat, double tau, double theta) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::invalid_argument("clock_record: tau must be finite and >= 0");
  const SpinSystem& spin = oat.spin();
  const QuantumState state = oat.state(tau);
  const SensitivityBreakdown s = enhanced_sensitivity(state, spin.jz, oat.jy_basis(), theta);
  const double sqz = spin_squeezing_sensitivity(phase_evolve(state, spin.jz, theta), spin).value;

  SweepRecord r;
  r.j = spin.j();
  r.particles = spin.particles();
  r.tau = tau;
  r.tau_scaled = tau * std::sqrt(spin.j());
  r.theta = theta;
  r.fisher = s.fisher;
  r.enhancement = s.enhancement;
  r.fisher_plus_e = s.fisher_plus_e;
  r.quantum_fisher = s.quantum_fisher;
  r.chi_sqz = sqz;
  const double n = r.particles;
  r.fisher_resc = r.fisher / n;
  r.enhancement_resc = r.enhancement / n;
  r.fisher_plus_e_resc = r.fisher_plus_e / n;
  r.quantum_fisher_resc = r.quantum_fisher / n;
  r.chi_sqz_resc = r.chi_sqz / n;
  return r;
}

std::vector<SweepRecord> sensitivity_sweep(double j, const std::vector<double>& taus, double theta,
                                           SweepOptions options) {
  for (const double t : taus) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("sensitivity_sweep: grid values must be >= 0");
  }
  const OneAxisTwisting oat(j);
  std::vector<SweepRecord> out(taus.size());
  parallel_for(taus.size(), options.threads, [&](std::size_t i) { out[i] = clock_record(oat, taus[i], theta); });
  return out;
}

TauOptimum find_tau_opt(double j, double theta, TauObjective objective) {
  return find_tau_opt(OneAxisTwisting(j), theta, objective);
}

TauOptimum find_tau_opt(const OneAxisTwisting& oat, double theta, TauObjective objective) {
  const double root = std::sqrt(oat.spin().j());
  auto value_at = [&](double scaled) { return evaluate(oat, scaled / root, theta).objective(objective); };

  TauOptimum out;
  out.coarse_scaled.resize(kCoarsePoints);
  out.coarse_objective.resize(kCoarsePoints);
  std::size_t best = 0;
  for (int k = 0; k < kCoarsePoints; ++k) {
    const auto i = static_cast<std::size_t>(k);
    out.coarse_scaled[i] = kCoarseMax * k / (kCoarsePoints - 1);
    out.coarse_objective[i] = value_at(out.coarse_scaled[i]);
    if (out.coarse_objective[i] > out.coarse_objective[best]) best = i;
  }

  // Golden-section search on the bracket around the coarse maximum.
  double lo = out.coarse_scaled[best == 0 ? 0 : best - 1];
  double hi = out.coarse_scaled[std::min<std::size_t>(best + 1, kCoarsePoints - 1)];
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = value_at(x1);
  double f2 = value_at(x2);
  while (hi - lo > kRefineTolerance) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = value_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = value_at(x2);
    }
  }
  double scaled = 0.5 * (lo + hi);
  double value = value_at(scaled);
  if (out.coarse_objective[best] > value) {
    scaled = out.coarse_scaled[best];
    value = out.coarse_objective[best];
  }

  const Evaluation e = evaluate(oat, scaled / root, theta);
  out.tau_scaled = scaled;
  out.tau = scaled / root;
  out.fisher = e.fisher;
  out.enhancement = e.enhancement;
  out.gain_ratio = e.gain();
  out.objective = value;
  return out;
}

std::vector<ScalingRecord> gain_scaling(const std::vector<double>& j_list, double theta, SweepOptions options) {
  if (j_list.empty()) throw std::invalid_argument("gain_scaling: empty j list");
  for (const double j : j_list) SpinLength::from_value(j);
  std::vector<ScalingRecord> out(j_list.size());
  parallel_for(j_list.size(), options.threads, [&](std::size_t i) {
    const OneAxisTwisting oat(j_list[i]);
    const TauOptimum opt = find_tau_opt(oat, theta);
    const SensitivityBreakdown s = enhanced_sensitivity(oat.state(opt.tau), oat.spin().jz, oat.jy_basis(), theta);
    const OptimalObservable x = x_opt(oat.state(opt.tau), oat.spin().jz, oat.jy_basis(), theta);

    ScalingRecord& r = out[i];
    r.j = oat.spin().j();
    r.tau_opt = opt.tau;
    r.tau_opt_scaled = opt.tau_scaled;
    r.fisher = s.fisher;
    r.enhancement = s.enhancement;
    r.gain_ratio = s.fisher > 0.0 ? s.fisher_plus_e / s.fisher : 1.0;
    r.c_h = x.normalized ? x.normalized->c_h : 0.0;
    r.witness_f = entanglement_witness(s.fisher, oat.spin().particles());
    r.witness_fe = entanglement_witness(s.fisher_plus_e, oat.spin().particles());
  });
  return out;
}

CoefficientProfile coefficient_profile(const QuantumState& state, const HermitianOperator& h,
                                       const ProjectiveBasis& basis, double theta) {
  const OptimalObservable opt = x_opt(state, h, basis, theta);
  const OptimalObservable opt0 = x_opt0(state, h, basis, theta);
  CoefficientProfile out;
  out.c_h = opt.normalized ? opt.normalized->c_h : 0.0;
  out.c_h0 = opt0.normalized ? opt0.normalized->c_h : 0.0;
  out.rows.resize(basis.size());
  for (std::size_t x = 0; x < basis.size(); ++x) {
    const auto i = static_cast<Eigen::Index>(x);
    out.rows[x] = CoefficientRow{basis.labels()[x], opt.normalized ? opt.normalized->c_x(i) : 0.0,
                                 opt0.normalized ? opt0.normalized->c_x(i) : 0.0};
  }
  return out;
}

CoefficientProfile coefficient_profile(double j, double tau, double theta) {
  const OneAxisTwisting oat(j);
  return coefficient_profile(oat.state(tau), oat.spin().jz, oat.jy_basis(), theta);
}

}  // namespace qsens
