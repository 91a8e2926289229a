#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "run.hpp"

using namespace twotier;

namespace {

struct Result {
  int status = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "twotier");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::main_entry(static_cast<int>(argv.size()),
                                     argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) result.push_back(line);
  return result;
}

std::filesystem::path temp_file(const std::string& name,
                                const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << contents;
  return path;
}

}  // namespace

TEST(Cli, ReproduceTable4WinnerTakeAll) {
  const Result r = run_cli({"reproduce-table4", "--rule", "wta", "--format", "csv"});
  EXPECT_EQ(r.status, cli::kExitOk) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 19u);
  EXPECT_EQ(rows[0],
            "config,category,rule,t1_a,t1_a_published,gap_a,t1_b,"
            "t1_b_published,gap_b,iterations,converged");
  EXPECT_EQ(rows[1].substr(0, 9), "1,IC,WTA,");
  EXPECT_NE(r.err.find("# max_abs_gap="), std::string::npos);
}

TEST(Cli, ReproduceTable4FailsAboveTolerance) {
  const Result r = run_cli({"reproduce-table4", "--rule", "pr", "--max-gap", "1e-6",
                            "--format", "csv"});
  EXPECT_EQ(r.status, cli::kExitGap);
  EXPECT_NE(r.err.find("\"error\":\"GapExceeded\""), std::string::npos);
}

TEST(Cli, SolveJson) {
  const Result r = run_cli({"solve", "--config", "12", "--rule", "wta", "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["command"], "solve");
  ASSERT_EQ(doc["rows"].size(), 6u);
  EXPECT_NEAR(doc["rows"][0]["cutpoint"].get<double>(), 0.585, 0.01);
  EXPECT_EQ(doc["summary"]["converged"], true);
}

TEST(Cli, SolveReportsNonConvergence) {
  const Result r = run_cli({"solve", "-c", "9", "--max-iterations", "3", "--format", "csv"});
  EXPECT_EQ(r.status, cli::kExitFailure);
  EXPECT_NE(r.err.find("NonConvergence"), std::string::npos);
  EXPECT_EQ(lines(r.out).size(), 13u);  // header + 2 rules x 6 types
}

TEST(Cli, SolveFromConfigFile) {
  const auto path = temp_file(
      "twotier_cli_cfg.json",
      R"({"group_sizes": [21, 21, 21], "support_rates": [0.5, 0.5, 0.5]})");
  const Result from_file = run_cli({"solve", "--config-file", path.string(), "--format", "csv"});
  const Result embedded = run_cli({"solve", "--config", "1", "--format", "csv"});
  EXPECT_EQ(from_file.status, 0) << from_file.err;
  EXPECT_EQ(from_file.out, embedded.out);
  std::filesystem::remove(path);
}

TEST(Cli, SimulateIsDeterministic) {
  const std::vector<std::string> args{"simulate", "-c", "9", "-r", "pr", "-n", "20000",
                                      "-s", "5", "--format", "csv"};
  const Result a = run_cli(args);
  const Result b = run_cli(args);
  auto with_threads = args;
  with_threads.insert(with_threads.end(), {"--threads", "3"});
  const Result c = run_cli(with_threads);
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.err, b.err);
  EXPECT_EQ(a.out, c.out);
  EXPECT_EQ(lines(a.out)[0],
            "group,candidate,cutpoint,turnout,turnout_se,turnout_analytic,"
            "welfare,welfare_se,welfare_analytic");
}

TEST(Cli, SimulateWithExplicitProfile) {
  const Result r = run_cli({"simulate", "-c", "1", "--profile", "0,0,0,0,0,0", "-n",
                            "4000", "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["rows"][0]["turnout"], 0.0);
  EXPECT_EQ(doc["summary"]["profile"], "given");
}

TEST(Cli, WelfareSummaryMatchesPublishedTheory) {
  const Result r = run_cli({"welfare", "--summary", "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["rows"].size(), 6u);
  EXPECT_LE(doc["summary"]["max_abs_welfare_gap"].get<double>(), 0.02);
  EXPECT_LE(doc["summary"]["max_abs_gini_gap"].get<double>(), 0.015);
}

TEST(Cli, WelfareFromSamplesFile) {
  const auto path = temp_file("twotier_cli_samples.csv",
                              "config_id,rule,group,candidate,value\n"
                              "6,PR,1,A,20\n6,PR,1,A,40\n6,PR,1,B,90\n6,PR,1,B,110\n");
  const Result r = run_cli({"welfare", "-c", "6", "-r", "pr", "--samples",
                            path.string(), "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["rows"][0]["cutpoint"].get<double>(), 0.15, 1e-12);
  EXPECT_NEAR(doc["rows"][1]["cutpoint"].get<double>(), 0.5, 1e-12);
  EXPECT_TRUE(doc["summary"].contains("gini"));

  const Result missing = run_cli({"welfare", "-c", "6", "-r", "wta", "--samples",
                                  path.string()});
  EXPECT_EQ(missing.status, cli::kExitFailure);
  EXPECT_NE(missing.err.find("EmptySample"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, DeviationsEmbedded) {
  const Result r = run_cli({"deviations", "--format", "csv"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = lines(r.out);
  EXPECT_EQ(rows.size(), 53u);
  EXPECT_EQ(rows[0], "config,category,rule,camp,deviation,effect,published");
  bool found = false;
  for (const auto& row : rows) {
    if (row.rfind("5,Local,PR,minority,", 0) == 0) {
      found = true;
      EXPECT_NE(row.find("-0.650000,titanic,-0.650"), std::string::npos) << row;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Cli, DeviationsFromObservedFile) {
  const auto path = temp_file("twotier_cli_observed.csv",
                              "config_id,rule,group,candidate,value\n"
                              "6,WTA,1,A,0.2\n6,WTA,1,B,0.6\n");
  const Result r = run_cli({"deviations", "--observed-file", path.string(), "--format", "csv"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "config,category,rule,camp,deviation,effect");
  std::filesystem::remove(path);
}

TEST(Cli, DeviationsSummary) {
  const Result r = run_cli({"deviations", "--summary", "--format", "csv"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 13u);
}

TEST(Cli, PivotAtProfile) {
  const Result r = run_cli({"pivot", "-c", "1", "--profile", "0,0,0,0,0,0", "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  for (const auto& row : doc["rows"]) {
    EXPECT_NEAR(row["pivot"].get<double>(), 0.25, 1e-15);
  }
}

TEST(Cli, ExportConfigRoundTrips) {
  const Result r = run_cli({"export-config", "-c", "13"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["group_sizes"][0], 7);
}

TEST(Cli, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "twotier_cli_out.csv";
  const Result r = run_cli({"pivot", "-c", "2", "--format", "csv", "-o", path.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "group,candidate,cutpoint,pivot,best_response");
  std::filesystem::remove(path);
}

TEST(Cli, ErrorRecords) {
  const Result no_config = run_cli({"pivot"});
  EXPECT_EQ(no_config.status, cli::kExitFailure);
  const auto record = nlohmann::json::parse(lines(no_config.err).back());
  EXPECT_EQ(record["error"], "InvalidOptions");

  const Result bad_id = run_cli({"solve", "-c", "42"});
  EXPECT_EQ(bad_id.status, cli::kExitFailure);
  EXPECT_NE(bad_id.err.find("MissingKey"), std::string::npos);

  const Result bad_profile = run_cli({"pivot", "-c", "1", "--profile", "0.1,2"});
  EXPECT_EQ(bad_profile.status, cli::kExitUsage);
  EXPECT_NE(bad_profile.err.find("ParseError"), std::string::npos);

  const Result out_of_range = run_cli({"pivot", "-c", "1", "--profile", "0,0,0,0,0,1.5"});
  EXPECT_EQ(out_of_range.status, cli::kExitUsage);
  EXPECT_NE(out_of_range.err.find("ValidationError"), std::string::npos);

  const Result unknown = run_cli({"frobnicate"});
  EXPECT_EQ(unknown.status, cli::kExitUsage);

  const Result both_rules = run_cli({"simulate", "-c", "1", "-r", "both"});
  EXPECT_EQ(both_rules.status, cli::kExitFailure);

  const Result bad_file = run_cli({"solve", "--config-file", "/nonexistent.json"});
  EXPECT_EQ(bad_file.status, cli::kExitFailure);
  EXPECT_NE(bad_file.err.find("ParseError"), std::string::npos);

  const Result bad_ties = run_cli({"solve", "-c", "1", "--tie-convention", "dice"});
  EXPECT_EQ(bad_ties.status, cli::kExitUsage);
}

TEST(Cli, HelpExitsCleanly) {
  const Result r = run_cli({"--help"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("reproduce-table4"), std::string::npos);
}

TEST(Cli, SplitTieConventionChangesTheSolution) {
  const Result coin = run_cli({"solve", "-c", "1", "-r", "wta", "--format", "csv"});
  const Result split = run_cli({"solve", "-c", "1", "-r", "wta", "--tie-convention",
                                "split", "--format", "csv"});
  ASSERT_EQ(split.status, 0) << split.err;
  EXPECT_NE(coin.out, split.out);
}
