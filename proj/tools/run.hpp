#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "report_table.hpp"
#include "twotier/equilibrium.hpp"
#include "twotier/model.hpp"
#include "twotier/montecarlo.hpp"
#include "twotier/welfare.hpp"

namespace twotier::cli {

enum class Command {
  solve,
  reproduce_table4,
  simulate,
  welfare,
  deviations,
  pivot,
  export_config,
};

// Where the strategy profile of simulate / welfare / pivot comes from.
enum class ProfileSource {
  equilibrium,  // solved
  values,       // --profile
  observed,     // group 1 at the published experiment averages, groups 2-3
                // at equilibrium
  samples,      // group 1 from a cutpoint-sample CSV (welfare only)
};

enum class TheorySource { published, solved };

struct RunSpec {
  Command command = Command::solve;

  std::optional<int> config_id;
  std::optional<std::filesystem::path> config_file;
  std::vector<Rule> rules{Rule::wta, Rule::pr};

  ProfileSource profile_source = ProfileSource::equilibrium;
  std::optional<StrategyProfile> profile;
  std::optional<std::filesystem::path> samples_file;
  std::optional<std::filesystem::path> observed_file;
  TheorySource theory = TheorySource::published;

  // The tie convention and pruning switch live in solver.pivot and are
  // copied into the simulation and welfare options.
  SolverOptions solver;
  bool all_fixed_points = false;
  std::vector<double> grid{0.1, 0.5, 0.9};
  StartGrid grid_mode = StartGrid::symmetric;

  SimOptions sim;
  WelfareOptions welfare;
  bool summary = false;
  double gap_tolerance = 0.01;
  unsigned threads = 0;

  OutputFormat format = OutputFormat::table;
  std::optional<std::filesystem::path> output;
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitGap = 1;      // reproduce-table4 gap above tolerance
inline constexpr int kExitUsage = 2;    // bad command line
inline constexpr int kExitFailure = 3;  // library error or non-convergence

// Throws ParseError on a bad command line; returns nullopt after printing
// help to `out`.
std::optional<RunSpec> parse_arguments(int argc, const char* const* argv,
                                       std::ostream& out);

int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

// parse_arguments + run, with every error reported to `err` as a one-line
// JSON record {"error": kind, "message": text}.
int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err);

// "0.3,0.3,0.4,0.4,0.5,0.5" in the order t1A,t1B,t2A,t2B,t3A,t3B.
StrategyProfile parse_profile(std::string_view text);

}  // namespace twotier::cli
