#include "qsens/cli.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace qsens::cli {

namespace {

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ArgumentError(what);
}

std::vector<double> default_j_list() {
  std::vector<double> js;
  for (int j = 10; j <= 100; j += 5) js.push_back(j);
  return js;
}

void validate(const RunConfig& cfg) {
  require(std::isfinite(cfg.theta), "--theta must be finite");
  if (cfg.command == "sweep" || cfg.command == "coeffs" || cfg.command == "bound") {
    try {
      SpinLength::from_value(cfg.j);
    } catch (const std::invalid_argument&) {
      throw ArgumentError("--j must be a positive half-integer");
    }
  }
  if (cfg.command == "sweep") {
    require(cfg.tau_points >= 1, "--tau-points must be at least 1");
    require(std::isfinite(cfg.tau_min) && std::isfinite(cfg.tau_max), "--tau-min/--tau-max must be finite");
    require(cfg.tau_min >= 0.0 && cfg.tau_max >= cfg.tau_min, "need 0 <= --tau-min <= --tau-max");
  }
  if (cfg.tau_scaled) require(std::isfinite(*cfg.tau_scaled) && *cfg.tau_scaled >= 0.0, "--tau-scaled must be >= 0");
  if (cfg.command == "scaling") {
    require(!cfg.j_list.empty(), "--j-list must not be empty");
    for (const double j : cfg.j_list) {
      try {
        SpinLength::from_value(j);
      } catch (const std::invalid_argument&) {
        throw ArgumentError("--j-list entries must be positive half-integers");
      }
    }
  }
  if (cfg.command == "verify") require(cfg.instances >= 1, "--instances must be at least 1");
}

double resolve_tau(const RunConfig& cfg, const OneAxisTwisting& oat) {
  if (cfg.tau_scaled) return *cfg.tau_scaled / std::sqrt(oat.spin().j());
  return find_tau_opt(oat, cfg.theta).tau;
}

ExitCode execute(const RunConfig& cfg, std::ostream& os) {
  if (cfg.command == "sweep") {
    const auto taus = scaled_tau_grid(cfg.j, cfg.tau_min, cfg.tau_max, cfg.tau_points);
    write_sweep(os, cfg, sensitivity_sweep(cfg.j, taus, cfg.theta, SweepOptions{cfg.threads}));
  } else if (cfg.command == "scaling") {
    write_scaling(os, cfg, gain_scaling(cfg.j_list, cfg.theta, SweepOptions{cfg.threads}));
  } else if (cfg.command == "coeffs") {
    const OneAxisTwisting oat(cfg.j);
    const double tau = resolve_tau(cfg, oat);
    write_coefficients(os, cfg, tau,
                       coefficient_profile(oat.state(tau), oat.spin().jz, oat.jy_basis(), cfg.theta));
  } else if (cfg.command == "bound") {
    const OneAxisTwisting oat(cfg.j);
    const double tau = resolve_tau(cfg, oat);
    BoundResult result;
    result.record = clock_record(oat, tau, cfg.theta);
    const SensitivityBreakdown s = enhanced_sensitivity(oat.state(tau), oat.spin().jz, oat.jy_basis(), cfg.theta);
    result.a = s.a;
    result.b = s.b;
    result.witness_f = entanglement_witness(s.fisher, oat.spin().particles());
    result.witness_fe = entanglement_witness(s.fisher_plus_e, oat.spin().particles());
    write_bound(os, cfg, result);
  } else if (cfg.command == "verify") {
    const VerifyReport report = run_verification(cfg.seed, cfg.instances);
    write_verify(os, report);
    if (!report.all_passed()) return ExitCode::verification_failed;
  }
  return ExitCode::ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string format = "csv";
  std::vector<double> j_list;

  CLI::App app{"Phase-estimation sensitivity limits for projective measurements", "qsens"};
  app.require_subcommand(1, 1);

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output,-o", cfg.output, "Write results to this file instead of standard output");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_physics = [&](CLI::App* sub) {
    sub->add_option("--j", cfg.j, "Spin length j = N/2")->capture_default_str();
    sub->add_option("--theta", cfg.theta, "Phase θ at which the bound is evaluated")->capture_default_str();
  };

  auto* sweep = app.add_subcommand("sweep", "Sensitivities of twisted states over a τ√j grid");
  add_physics(sweep);
  sweep->add_option("--tau-min", cfg.tau_min, "Smallest τ√j")->capture_default_str();
  sweep->add_option("--tau-max", cfg.tau_max, "Largest τ√j")->capture_default_str();
  sweep->add_option("--tau-points", cfg.tau_points, "Grid points")->capture_default_str();
  sweep->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
  add_output(sweep);

  auto* scaling = app.add_subcommand("scaling", "Gain (F+E)/F and c_H at τ_opt over a list of j");
  scaling->add_option("--j-list", j_list, "Comma-separated spin lengths")->delimiter(',');
  scaling->add_option("--theta", cfg.theta, "Phase θ")->capture_default_str();
  scaling->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
  add_output(scaling);

  auto* coeffs = app.add_subcommand("coeffs", "Normalized coefficients of the optimal observables");
  add_physics(coeffs);
  coeffs->add_option("--tau-scaled", cfg.tau_scaled, "τ√j (default: τ_opt)");
  add_output(coeffs);

  auto* bound = app.add_subcommand("bound", "Full sensitivity breakdown at one τ");
  add_physics(bound);
  bound->add_option("--tau-scaled", cfg.tau_scaled, "τ√j (default: τ_opt)");
  add_output(bound);

  auto* verify = app.add_subcommand("verify", "Seeded property checks on random instances");
  verify->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  verify->add_option("--instances", cfg.instances, "Number of random instances")->capture_default_str();
  verify->add_option("--output,-o", cfg.output, "Write the report to this file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return static_cast<int>(ExitCode::ok);
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return static_cast<int>(ExitCode::ok);
  } catch (const CLI::ParseError& e) {
    err << "qsens: " << e.what() << '\n';
    return static_cast<int>(ExitCode::invalid_arguments);
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.format = format == "json" ? Format::json : Format::csv;
  cfg.j_list = j_list.empty() ? default_j_list() : j_list;

  try {
    validate(cfg);
  } catch (const ArgumentError& e) {
    err << "qsens: " << e.what() << '\n';
    return static_cast<int>(ExitCode::invalid_arguments);
  }

  std::ostringstream buffer;
  ExitCode code = ExitCode::ok;
  try {
    code = execute(cfg, buffer);
  } catch (const NumericalConsistencyError& e) {
    err << "qsens: numerical consistency error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numerical_inconsistency);
  } catch (const std::invalid_argument& e) {
    err << "qsens: " << e.what() << '\n';
    return static_cast<int>(ExitCode::invalid_arguments);
  } catch (const std::exception& e) {
    err << "qsens: internal error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numerical_inconsistency);
  }

  if (cfg.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(cfg.output, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "qsens: cannot open " << cfg.output << " for writing\n";
      return static_cast<int>(ExitCode::invalid_arguments);
    }
    file << buffer.str();
  }
  return static_cast<int>(code);
}

}  // namespace qsens::cli
