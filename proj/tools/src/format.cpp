#include "qsens/cli.hpp"

#include "json.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <type_traits>

#ifndef QSENS_VERSION
#define QSENS_VERSION "unknown"
#endif

namespace qsens::cli {

namespace {

using nlohmann::ordered_json;

const char* format_name(Format f) { return f == Format::csv ? "csv" : "json"; }

ordered_json metadata(const RunConfig& cfg) {
  ordered_json config;
  config["command"] = cfg.command;
  config["j"] = cfg.j;
  config["theta"] = cfg.theta;
  if (cfg.command == "sweep") {
    config["tau_min"] = cfg.tau_min;
    config["tau_max"] = cfg.tau_max;
    config["tau_points"] = cfg.tau_points;
  }
  if (cfg.command == "scaling") config["j_list"] = cfg.j_list;
  if (cfg.tau_scaled) config["tau_scaled"] = *cfg.tau_scaled;
  config["format"] = format_name(cfg.format);

  ordered_json meta;
  meta["version"] = QSENS_VERSION;
  meta["config"] = std::move(config);
  return meta;
}

void write_json(std::ostream& os, const RunConfig& cfg, ordered_json payload) {
  ordered_json doc;
  doc["metadata"] = metadata(cfg);
  for (auto& [key, value] : payload.items()) doc[key] = std::move(value);
  os << doc.dump(2) << '\n';
}

template <class... Ts>
void csv_row(std::ostream& os, const Ts&... fields) {
  bool first = true;
  auto put = [&](const auto& v) {
    if (!first) os << ',';
    first = false;
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) {
      os << format_double(v);
    } else {
      os << v;
    }
  };
  (put(fields), ...);
  os << '\n';
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_sweep(std::ostream& os, const RunConfig& cfg, const std::vector<SweepRecord>& records) {
  if (cfg.format == Format::csv) {
    os << kSweepHeader << '\n';
    for (const auto& r : records) {
      csv_row(os, r.j, r.particles, r.tau, r.tau_scaled, r.theta, r.fisher, r.enhancement, r.fisher_plus_e,
              r.quantum_fisher, r.chi_sqz, r.fisher_resc, r.enhancement_resc, r.fisher_plus_e_resc,
              r.quantum_fisher_resc, r.chi_sqz_resc);
    }
    return;
  }
  ordered_json rows = ordered_json::array();
  for (const auto& r : records) {
    rows.push_back({{"j", r.j},
                    {"N", r.particles},
                    {"tau", r.tau},
                    {"tau_scaled", r.tau_scaled},
                    {"theta", r.theta},
                    {"F", r.fisher},
                    {"E", r.enhancement},
                    {"FplusE", r.fisher_plus_e},
                    {"Fq", r.quantum_fisher},
                    {"chiSqz", r.chi_sqz},
                    {"F_resc", r.fisher_resc},
                    {"E_resc", r.enhancement_resc},
                    {"FplusE_resc", r.fisher_plus_e_resc},
                    {"Fq_resc", r.quantum_fisher_resc},
                    {"chiSqz_resc", r.chi_sqz_resc}});
  }
  write_json(os, cfg, {{"records", std::move(rows)}});
}

void write_scaling(std::ostream& os, const RunConfig& cfg, const std::vector<ScalingRecord>& records) {
  if (cfg.format == Format::csv) {
    os << "j,tau_opt,tau_opt_scaled,F,E,gain_ratio,c_H,witness_F,witness_FE\n";
    for (const auto& r : records) {
      csv_row(os, r.j, r.tau_opt, r.tau_opt_scaled, r.fisher, r.enhancement, r.gain_ratio, r.c_h, r.witness_f,
              r.witness_fe);
    }
    return;
  }
  ordered_json rows = ordered_json::array();
  for (const auto& r : records) {
    rows.push_back({{"j", r.j},
                    {"tau_opt", r.tau_opt},
                    {"tau_opt_scaled", r.tau_opt_scaled},
                    {"F", r.fisher},
                    {"E", r.enhancement},
                    {"gain_ratio", r.gain_ratio},
                    {"c_H", r.c_h},
                    {"witness_F", r.witness_f},
                    {"witness_FE", r.witness_fe}});
  }
  write_json(os, cfg, {{"records", std::move(rows)}});
}

void write_coefficients(std::ostream& os, const RunConfig& cfg, double tau, const CoefficientProfile& profile) {
  if (cfg.format == Format::csv) {
    os << "m_y,c_opt,c_opt0,c_H,c_H0\n";
    for (const auto& row : profile.rows) csv_row(os, row.m_y, row.c_opt, row.c_opt0, profile.c_h, profile.c_h0);
    return;
  }
  ordered_json rows = ordered_json::array();
  for (const auto& row : profile.rows) {
    rows.push_back({{"m_y", row.m_y}, {"c_opt", row.c_opt}, {"c_opt0", row.c_opt0}});
  }
  write_json(os, cfg, {{"tau", tau}, {"c_H", profile.c_h}, {"c_H0", profile.c_h0}, {"records", std::move(rows)}});
}

void write_bound(std::ostream& os, const RunConfig& cfg, const BoundResult& result) {
  const SweepRecord& r = result.record;
  if (cfg.format == Format::csv) {
    os << kSweepHeader << ",a,b,witness_F,witness_FE\n";
    csv_row(os, r.j, r.particles, r.tau, r.tau_scaled, r.theta, r.fisher, r.enhancement, r.fisher_plus_e,
            r.quantum_fisher, r.chi_sqz, r.fisher_resc, r.enhancement_resc, r.fisher_plus_e_resc,
            r.quantum_fisher_resc, r.chi_sqz_resc, result.a, result.b, result.witness_f, result.witness_fe);
    return;
  }
  ordered_json rec = {{"j", r.j},
                      {"N", r.particles},
                      {"tau", r.tau},
                      {"tau_scaled", r.tau_scaled},
                      {"theta", r.theta},
                      {"F", r.fisher},
                      {"E", r.enhancement},
                      {"FplusE", r.fisher_plus_e},
                      {"Fq", r.quantum_fisher},
                      {"chiSqz", r.chi_sqz},
                      {"F_resc", r.fisher_resc},
                      {"E_resc", r.enhancement_resc},
                      {"FplusE_resc", r.fisher_plus_e_resc},
                      {"Fq_resc", r.quantum_fisher_resc},
                      {"chiSqz_resc", r.chi_sqz_resc},
                      {"a", result.a},
                      {"b", result.b},
                      {"witness_F", result.witness_f},
                      {"witness_FE", result.witness_fe}};
  write_json(os, cfg, {{"record", std::move(rec)}});
}

void write_verify(std::ostream& os, const VerifyReport& report) {
  os << "qsens verify seed=" << report.seed << " instances=" << report.instances << '\n';
  int failed = 0;
  for (const auto& c : report.checks) {
    os << (c.passed == c.total ? "PASS " : "FAIL ") << c.name << ' ' << c.passed << '/' << c.total
       << " worst=" << format_double(c.worst) << '\n';
    failed += c.total - c.passed;
  }
  os << (report.all_passed() ? "OK" : "FAILED") << " failures=" << failed << '\n';
}

}  // namespace qsens::cli
