#include "qsens/cli.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace qsens::cli {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) out.push_back(f);
  return out;
}

double parse(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  EXPECT_EQ(res.ec, std::errc()) << s;
  EXPECT_EQ(res.ptr, s.data() + s.size()) << s;
  return v;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(25.0), "25");
  EXPECT_EQ(format_double(-0.0), "-0");
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int k = 0; k < 10000; ++k) {
    std::uint64_t b = bits(gen);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string s = format_double(v);
    EXPECT_EQ(parse(s), v) << s;
    EXPECT_LE(s.size(), 24u);
  }
}

TEST(Sweep, DefaultGridHeaderAndRowCount) {
  const CliRun r = run({"sweep", "--j", "25"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 301u);
  EXPECT_EQ(rows.front(), "j,N,tau,tau_scaled,theta,F,E,FplusE,Fq,chiSqz,F_resc,E_resc,FplusE_resc,Fq_resc,chiSqz_resc");
  for (std::size_t k = 1; k < rows.size(); ++k) ASSERT_EQ(fields(rows[k]).size(), 15u);
}

TEST(Sweep, CsvValuesRoundTripExactly) {
  const CliRun r = run({"sweep", "--j", "6", "--tau-points", "17", "--theta", "0.02"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto records = sensitivity_sweep(6.0, scaled_tau_grid(6.0, 0.0, 3.0, 17), 0.02);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), records.size() + 1);
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto f = fields(rows[k + 1]);
    const auto& rec = records[k];
    EXPECT_EQ(parse(f[2]), rec.tau);
    EXPECT_EQ(parse(f[5]), rec.fisher);
    EXPECT_EQ(parse(f[6]), rec.enhancement);
    EXPECT_EQ(parse(f[8]), rec.quantum_fisher);
    EXPECT_EQ(parse(f[14]), rec.chi_sqz_resc);
    for (const auto& field : f) EXPECT_EQ(format_double(parse(field)), field);
  }
}

TEST(Sweep, JsonMirrorsCsv) {
  const CliRun csv = run({"sweep", "--j", "4", "--tau-points", "5"});
  const CliRun json = run({"sweep", "--j", "4", "--tau-points", "5", "--format", "json"});
  ASSERT_EQ(json.code, 0) << json.err;
  const auto doc = nlohmann::json::parse(json.out);
  EXPECT_EQ(doc["metadata"]["config"]["command"], "sweep");
  EXPECT_TRUE(doc["metadata"].contains("version"));
  const auto header = fields(lines(csv.out).front());
  const auto rows = lines(csv.out);
  ASSERT_EQ(doc["records"].size(), rows.size() - 1);
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const auto f = fields(rows[k + 1]);
    for (std::size_t c = 0; c < header.size(); ++c) {
      EXPECT_EQ(doc["records"][k][header[c]].get<double>(), parse(f[c])) << header[c];
    }
  }
}

TEST(Sweep, OutputFileIsByteIdenticalAcrossRuns) {
  const auto dir = std::filesystem::temp_directory_path() / "qsens_cli_test";
  std::filesystem::create_directories(dir);
  const auto a = dir / "a.csv", b = dir / "b.csv";
  ASSERT_EQ(run({"sweep", "--j", "10", "--tau-points", "30", "--output", a.string()}).code, 0);
  ASSERT_EQ(run({"sweep", "--j", "10", "--tau-points", "30", "--threads", "1", "--output", b.string()}).code, 0);
  const std::string first = read_file(a);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, read_file(b));
  std::filesystem::remove_all(dir);
}

TEST(Verify, DeterministicAndPassing) {
  const CliRun first = run({"verify", "--seed", "42", "--instances", "200"});
  const CliRun second = run({"verify", "--seed", "42", "--instances", "200"});
  EXPECT_EQ(first.code, 0) << first.out;
  EXPECT_EQ(first.out, second.out);
  EXPECT_NE(first.out.find("OK failures=0"), std::string::npos);
  const CliRun other = run({"verify", "--seed", "7", "--instances", "200"});
  EXPECT_NE(other.out, first.out);
}

TEST(Verify, FailingReportMapsToExitCodeOne) {
  VerifyReport report;
  report.checks = {{"hierarchy", 9, 10, 2.5}};
  EXPECT_FALSE(report.all_passed());
  std::ostringstream os;
  write_verify(os, report);
  EXPECT_NE(os.str().find("FAIL hierarchy 9/10"), std::string::npos);
  EXPECT_EQ(static_cast<int>(ExitCode::verification_failed), 1);
}

TEST(Bound, EnhancedAboveFisherAtPeak) {
  const CliRun r = run({"bound", "--j", "25", "--tau-scaled", "0.94"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  const auto header = fields(rows[0]);
  const auto f = fields(rows[1]);
  auto col = [&](const std::string& name) {
    return parse(f[static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin())]);
  };
  EXPECT_GT(col("FplusE_resc"), col("F_resc"));
  EXPECT_GT(col("witness_FE"), col("witness_F"));
  EXPECT_NEAR(col("tau_scaled"), 0.94, 1e-12);
}

TEST(Scaling, RowsPerJ) {
  const CliRun r = run({"scaling", "--j-list", "10,20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "j,tau_opt,tau_opt_scaled,F,E,gain_ratio,c_H,witness_F,witness_FE");
  EXPECT_EQ(fields(rows[1])[0], "10");
  EXPECT_GT(parse(fields(rows[2])[5]), parse(fields(rows[1])[5]));
}

TEST(Coeffs, TableShape) {
  const CliRun r = run({"coeffs", "--j", "10", "--tau-scaled", "0.9"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 22u);
  EXPECT_EQ(rows[0], "m_y,c_opt,c_opt0,c_H,c_H0");
  EXPECT_EQ(fields(rows[1])[0], "-10");
  EXPECT_EQ(fields(rows[1])[4], "0");
  const CliRun json = run({"coeffs", "--j", "10", "--tau-scaled", "0.9", "--format", "json"});
  EXPECT_EQ(nlohmann::json::parse(json.out)["records"].size(), 21u);
}

TEST(InvalidArguments, ExitCodeTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"sweep", "--j", "0.3"}).code, 2);
  EXPECT_EQ(run({"sweep", "--j", "-1"}).code, 2);
  EXPECT_EQ(run({"sweep", "--tau-points", "0"}).code, 2);
  EXPECT_EQ(run({"sweep", "--tau-min", "2", "--tau-max", "1"}).code, 2);
  EXPECT_EQ(run({"sweep", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"sweep", "--theta", "abc"}).code, 2);
  EXPECT_EQ(run({"bound", "--tau-scaled", "-1"}).code, 2);
  EXPECT_EQ(run({"scaling", "--j-list", "10,0.3"}).code, 2);
  EXPECT_EQ(run({"verify", "--instances", "0"}).code, 2);
  const CliRun r = run({"sweep", "--j", "0.3"});
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(r.err.empty());
}

TEST(Help, ExitsCleanly) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

}  // namespace
}  // namespace qsens::cli
