#pragma once

#include "qsens/clock.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qsens::cli {

enum class ExitCode : int {
  ok = 0,
  verification_failed = 1,
  invalid_arguments = 2,
  numerical_inconsistency = 3,
};

enum class Format { csv, json };

struct RunConfig {
  std::string command;
  double j = 25.0;
  double theta = 0.0;
  double tau_min = 0.0;  // scaled, τ√j
  double tau_max = 3.0;
  int tau_points = 300;
  std::optional<double> tau_scaled;  // bound / coeffs; τ_opt when absent
  std::vector<double> j_list;
  std::uint64_t seed = 0;
  int instances = 1000;
  std::string output;  // empty: standard output
  Format format = Format::csv;
  unsigned threads = 0;
};

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

inline constexpr const char* kSweepHeader =
    "j,N,tau,tau_scaled,theta,F,E,FplusE,Fq,chiSqz,F_resc,E_resc,FplusE_resc,Fq_resc,chiSqz_resc";

void write_sweep(std::ostream& os, const RunConfig& cfg, const std::vector<SweepRecord>& records);
void write_scaling(std::ostream& os, const RunConfig& cfg, const std::vector<ScalingRecord>& records);
void write_coefficients(std::ostream& os, const RunConfig& cfg, double tau, const CoefficientProfile& profile);

struct BoundResult {
  SweepRecord record;
  double a = 0.0;
  double b = 0.0;
  int witness_f = 0;
  int witness_fe = 0;
};
void write_bound(std::ostream& os, const RunConfig& cfg, const BoundResult& result);

struct CheckTally {
  std::string name;
  int passed = 0;
  int total = 0;
  double worst = 0.0;  // largest normalized violation seen (≤ 1 passes)
};

struct VerifyReport {
  std::uint64_t seed = 0;
  int instances = 0;
  std::vector<CheckTally> checks;

  bool all_passed() const;
};

/// Property suite over `instances` seeded random (state, H, basis) triples:
/// Haar pure states, GUE generators, Haar-rotated computational bases,
/// dimensions 2–8.
VerifyReport run_verification(std::uint64_t seed, int instances);
void write_verify(std::ostream& os, const VerifyReport& report);

/// Parses `args` (without the program name) and runs the command. Results go
/// to `out` unless --output is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsens::cli
