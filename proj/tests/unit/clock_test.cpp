#include "qsens/clock.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

namespace qsens {
namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

TEST(ScaledTauGrid, EndpointsAndValidation) {
  const auto taus = scaled_tau_grid(25.0, 0.0, 3.0, 300);
  ASSERT_EQ(taus.size(), 300u);
  EXPECT_EQ(taus.front(), 0.0);
  EXPECT_NEAR(taus.back(), 3.0 / 5.0, 1e-15);
  EXPECT_EQ(scaled_tau_grid(4.0, 1.0, 1.0, 1).front(), 0.5);
  EXPECT_THROW(scaled_tau_grid(25.0, -0.1, 3.0, 10), std::invalid_argument);
  EXPECT_THROW(scaled_tau_grid(25.0, 2.0, 1.0, 10), std::invalid_argument);
  EXPECT_THROW(scaled_tau_grid(25.0, 0.0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(scaled_tau_grid(0.3, 0.0, 1.0, 5), std::invalid_argument);
}

TEST(ClockRecord, UntwistedStateIsShotNoiseLimited) {
  const OneAxisTwisting oat(25.0);
  const SweepRecord r = clock_record(oat, 0.0, 0.0);
  EXPECT_EQ(r.particles, 50);
  EXPECT_NEAR(r.fisher, 0.0, 1e-12);
  EXPECT_NEAR(r.enhancement, 0.0, 1e-12);
  EXPECT_NEAR(r.quantum_fisher, 0.0, 1e-12);
  EXPECT_NEAR(r.chi_sqz_resc, 1.0, 1e-6);
}

// Twisting about y conserves ⟨J_y²⟩ = j/2; once the state covers the xz great
// circle evenly ⟨J_z²⟩ = (j(j+1) − j/2)/2, so F_Q = j(2j+1). At τ = π/2 the
// state is NOON-like and F_Q = N².
TEST(ClockRecord, QuantumFisherPlateauAndNoonPoint) {
  for (const double j : {10.0, 25.0}) {
    const OneAxisTwisting oat(j);
    for (const double tau : {0.7, 1.0}) {
      EXPECT_NEAR(quantum_fisher(oat.state(tau), oat.spin().jz) / (j * (2.0 * j + 1.0)), 1.0, 1e-3) << j << ' ' << tau;
    }
    EXPECT_NEAR(quantum_fisher(oat.state(std::acos(-1.0) / 2.0), oat.spin().jz), 4.0 * j * j, 1e-8 * j * j) << j;
  }
}

TEST(ClockRecord, RejectsNegativeTau) {
  const OneAxisTwisting oat(2.0);
  EXPECT_THROW(clock_record(oat, -0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(sensitivity_sweep(2.0, {0.1, -0.1}, 0.0), std::invalid_argument);
}

TEST(SensitivitySweep, RescalingAndHierarchyPerRecord) {
  const auto records = sensitivity_sweep(25.0, scaled_tau_grid(25.0, 0.0, 3.0, 60), 0.0);
  ASSERT_EQ(records.size(), 60u);
  for (const auto& r : records) {
    EXPECT_EQ(r.fisher_resc, r.fisher / 50.0);
    EXPECT_EQ(r.enhancement_resc, r.enhancement / 50.0);
    EXPECT_EQ(r.fisher_plus_e_resc, r.fisher_plus_e / 50.0);
    EXPECT_EQ(r.quantum_fisher_resc, r.quantum_fisher / 50.0);
    EXPECT_EQ(r.chi_sqz_resc, r.chi_sqz / 50.0);
    EXPECT_NEAR(r.tau_scaled, r.tau * 5.0, 1e-12);
    EXPECT_TRUE(ordered_within(r.fisher, r.fisher_plus_e, 1e-8, r.quantum_fisher)) << r.tau_scaled;
    EXPECT_TRUE(ordered_within(r.fisher_plus_e, r.quantum_fisher, 1e-8, r.quantum_fisher)) << r.tau_scaled;
    EXPECT_GE(r.enhancement, 0.0);
  }
}

TEST(SensitivitySweep, ParallelMatchesSerialBitForBit) {
  const auto taus = scaled_tau_grid(12.5, 0.0, 3.0, 40);
  const auto serial = sensitivity_sweep(12.5, taus, 0.05, SweepOptions{1});
  const auto parallel = sensitivity_sweep(12.5, taus, 0.05, SweepOptions{4});
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_TRUE(same_bits(serial[i].tau, parallel[i].tau));
    EXPECT_TRUE(same_bits(serial[i].fisher, parallel[i].fisher));
    EXPECT_TRUE(same_bits(serial[i].enhancement, parallel[i].enhancement));
    EXPECT_TRUE(same_bits(serial[i].quantum_fisher, parallel[i].quantum_fisher));
    EXPECT_TRUE(same_bits(serial[i].chi_sqz, parallel[i].chi_sqz));
  }
}

TEST(FindTauOpt, WindowAtJ25AndCoarseMaximum) {
  const TauOptimum opt = find_tau_opt(25.0, 0.0);
  EXPECT_GE(opt.tau_scaled, 0.88);
  EXPECT_LE(opt.tau_scaled, 1.00);
  EXPECT_NEAR(opt.tau, opt.tau_scaled / 5.0, 1e-15);
  EXPECT_GT(opt.enhancement, 0.0);
  EXPECT_NEAR(opt.gain_ratio, (opt.fisher + opt.enhancement) / opt.fisher, 1e-12);
  ASSERT_EQ(opt.coarse_objective.size(), 300u);
  for (const double v : opt.coarse_objective) EXPECT_GE(opt.objective, v);
}

TEST(FindTauOpt, WindowAtJ100) {
  const TauOptimum opt = find_tau_opt(100.0, 0.0);
  EXPECT_GE(opt.tau_scaled, 0.88);
  EXPECT_LE(opt.tau_scaled, 1.00);
}

TEST(FindTauOpt, EnhancementObjectiveIsAlsoAMaximum) {
  const TauOptimum opt = find_tau_opt(10.0, 0.0, TauObjective::enhancement);
  EXPECT_EQ(opt.objective, opt.enhancement);
  for (const double v : opt.coarse_objective) EXPECT_GE(opt.objective, v);
}

TEST(FindTauOpt, SmallThetaStaysInWindow) {
  const OneAxisTwisting oat(25.0);
  for (const double theta : {0.001, 0.003, 0.01}) {
    const TauOptimum opt = find_tau_opt(oat, theta);
    EXPECT_GE(opt.tau_scaled, 0.88) << theta;
    EXPECT_LE(opt.tau_scaled, 1.00) << theta;
    EXPECT_GE(opt.fisher + opt.enhancement, 50.0) << theta;
  }
}

TEST(ClockAtOptimum, SqueezingOvershootAndAblation) {
  const OneAxisTwisting oat(25.0);
  const TauOptimum opt = find_tau_opt(oat, 0.0);
  const SweepRecord r = clock_record(oat, opt.tau, 0.0);
  EXPECT_LT(r.chi_sqz_resc, 1.0);
  EXPECT_GT(r.fisher_plus_e_resc, r.fisher_resc);

  const AblatedObservable abl = ablated_observable(oat.state(opt.tau), oat.spin().jz, oat.jy_basis(), 0.0);
  EXPECT_LT(abl.chi.inverse(), r.fisher);

  EXPECT_GT(entanglement_witness(r.fisher_plus_e, r.particles), entanglement_witness(r.fisher, r.particles));
}

TEST(GainScaling, RecordsAreConsistent) {
  const auto records = gain_scaling({10.0, 25.0}, 0.0);
  ASSERT_EQ(records.size(), 2u);
  for (const auto& r : records) {
    EXPECT_GE(r.gain_ratio, 1.0 - 1e-9);
    EXPECT_NEAR(r.gain_ratio, (r.fisher + r.enhancement) / r.fisher, 1e-10);
    EXPECT_EQ(r.witness_f, entanglement_witness(r.fisher, static_cast<int>(2 * r.j)));
    EXPECT_GT(r.c_h, 0.0);
  }
  EXPECT_GT(records[1].gain_ratio, records[0].gain_ratio);
  EXPECT_LT(records[1].c_h, records[0].c_h);
  EXPECT_THROW(gain_scaling({}, 0.0), std::invalid_argument);
}

TEST(CoefficientProfile, RowsLabelsAndNormalization) {
  const CoefficientProfile prof = coefficient_profile(10.0, 0.3, 0.0);
  ASSERT_EQ(prof.rows.size(), 21u);
  EXPECT_EQ(prof.rows.front().m_y, -10.0);
  EXPECT_EQ(prof.rows.back().m_y, 10.0);
  EXPECT_EQ(prof.c_h0, 0.0);
  double sum = prof.c_h * prof.c_h, sum0 = 0.0;
  for (const auto& row : prof.rows) {
    sum += row.c_opt * row.c_opt;
    sum0 += row.c_opt0 * row.c_opt0;
  }
  EXPECT_NEAR(sum, 1.0, 1e-10);
  EXPECT_NEAR(sum0, 1.0, 1e-10);
}

TEST(CoefficientProfile, CommutingBasisIsAllZero) {
  const SpinSystem s = make_spin_operators(3.0);
  const CoefficientProfile prof =
      coefficient_profile(oat_state(3.0, 0.4), s.jz, ProjectiveBasis::computational(s.dim()), 0.0);
  for (const auto& row : prof.rows) EXPECT_EQ(row.c_opt0, 0.0);
  EXPECT_EQ(prof.c_h0, 0.0);
}

}  // namespace
}  // namespace qsens
