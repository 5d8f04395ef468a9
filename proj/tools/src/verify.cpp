#include "qsens/cli.hpp"
#include "qsens/random.hpp"

#include <algorithm>
#include <cmath>

namespace qsens::cli {

namespace {

constexpr double kRelative = 1e-8;
constexpr double kAbsolute = 1e-12;
constexpr double kFiniteStep = 1e-5;

// |x − y| measured against the relative-plus-absolute allowance.
double violation(double x, double y, double rel) {
  return std::abs(x - y) / (rel * std::max(std::abs(x), std::abs(y)) + kAbsolute);
}

struct Tally {
  CheckTally& c;
  void record(double v) {
    ++c.total;
    if (v <= 1.0) ++c.passed;
    c.worst = std::max(c.worst, v);
  }
};

double variance_of(const QuantumState& s, const HermitianOperator& x) { return s.variance(x); }
double gradient_of(const QuantumState& s, const HermitianOperator& x, const HermitianOperator& h) {
  return 2.0 * s.correlation(x, h).imag();
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckTally& c) { return c.passed == c.total; });
}

VerifyReport run_verification(std::uint64_t seed, int instances) {
  if (instances < 1) throw std::invalid_argument("run_verification: need at least one instance");
  VerifyReport report;
  report.seed = seed;
  report.instances = instances;
  report.checks = {{"enhancement_nonnegative"}, {"hierarchy"},          {"two_path_equivalence"},
                   {"structured_inverse"},      {"finite_difference_d"}, {"observable_identities"}};
  Tally nonneg{report.checks[0]}, hierarchy{report.checks[1]}, two_path{report.checks[2]},
      structured{report.checks[3]}, finite{report.checks[4]}, identities{report.checks[5]};

  InstanceSampler rng(seed);
  for (int t = 0; t < instances; ++t) {
    const Eigen::Index dim = rng.uniform_int(2, 8);
    const QuantumState state = QuantumState::pure(rng.haar_vector(dim));
    const HermitianOperator h(rng.gue(dim));
    const ProjectiveBasis basis = random_basis(rng, dim);
    const double theta = rng.uniform(-1.0, 1.0);

    const QuantumState evolved = phase_evolve(state, h, theta);
    const ReducedStats stats = reduced_projector_stats(evolved, h, basis);
    const double f = stats.fisher();
    const double raw_e = stats.a * stats.b * stats.b;
    const double e = stats.enhancement();
    const double fq = quantum_fisher(state, h);

    nonneg.record(raw_e >= 0.0 ? 0.0 : -raw_e / 1e-9);

    const double allowance = kRelative * fq + kAbsolute;
    hierarchy.record(std::max({0.0, (f - (f + e)) / allowance, ((f + e) - fq) / allowance}));

    const MomentData md = moment_data(evolved, OperatorFamily::generator_and_projectors(h, basis, stats.active));
    two_path.record(violation(f + e, md.moment.m(0, 0), kRelative));

    // Closed-form inverse of the reduced projector covariance against a dense LU inverse.
    std::vector<double> kept_p;
    std::size_t removed = 0;
    for (std::size_t x = 0; x < stats.outcomes(); ++x) {
      if (!stats.kept[x]) continue;
      if (x == stats.removed_index) removed = kept_p.size();
      kept_p.push_back(stats.p(static_cast<Eigen::Index>(x)));
    }
    if (kept_p.size() >= 2) {
      RVector reduced(static_cast<Eigen::Index>(kept_p.size() - 1));
      for (std::size_t x = 0, k = 0; x < kept_p.size(); ++x) {
        if (x != removed) reduced(static_cast<Eigen::Index>(k++)) = kept_p[x];
      }
      const RMatrix gamma = RMatrix(reduced.asDiagonal()) - reduced * reduced.transpose();
      const RMatrix dense = gamma.fullPivLu().inverse();
      structured.record(max_abs(RMatrix(structured_inverse(kept_p, removed) - dense)) / 1e-10);
    }

    const RVector plus = basis.probabilities(phase_evolve(state, h, theta + kFiniteStep));
    const RVector minus = basis.probabilities(phase_evolve(state, h, theta - kFiniteStep));
    const RVector fd = (plus - minus) / (2.0 * kFiniteStep);
    const double scale = stats.d.cwiseAbs().maxCoeff();
    finite.record((fd - stats.d).cwiseAbs().maxCoeff() / (1e-6 * scale + kAbsolute));

    const OptimalObservable opt = x_opt(state, h, basis, theta);
    const OptimalObservable opt0 = x_opt0(state, h, basis, theta);
    identities.record(std::max({violation(variance_of(evolved, opt.op), f + e, kRelative),
                                violation(gradient_of(evolved, opt.op, h), f + e, kRelative),
                                violation(variance_of(evolved, opt0.op), f, kRelative),
                                violation(gradient_of(evolved, opt0.op, h), f, kRelative)}));
  }
  return report;
}

}  // namespace qsens::cli
