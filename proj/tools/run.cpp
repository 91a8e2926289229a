#include "run.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <tuple>

#include <CLI11.hpp>
#include <json.hpp>

#include "twotier/behavioral.hpp"
#include "twotier/error.hpp"
#include "twotier/io.hpp"
#include "twotier/parallel.hpp"
#include "twotier/pivot.hpp"
#include "twotier/reference_data.hpp"

namespace twotier::cli {

namespace {

constexpr int kComputed = 6;
constexpr int kPublished = 3;

Number num(double v, int decimals = kComputed) { return Number{v, decimals}; }
std::string str(std::string_view s) { return std::string(s); }

std::vector<double> parse_doubles(std::string_view text, std::string_view what) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    double v = 0.0;
    const auto [end, ec] =
        std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() ||
        end != token.data() + token.size()) {
      throw ParseError(std::string(what) + ": '" + std::string(token) +
                       "' is not a number");
    }
    values.push_back(v);
    pos = comma + 1;
  }
  return values;
}

std::vector<Rule> parse_rules(const std::string& text) {
  if (text == "both" || text == "BOTH") return {Rule::wta, Rule::pr};
  return {parse_rule(text)};
}

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  if (text == "table") return OutputFormat::table;
  throw ParseError("unknown format '" + std::string(text) +
                   "' (expected csv|json|table)");
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::reproduce_table4: return "reproduce-table4";
    case Command::simulate: return "simulate";
    case Command::welfare: return "welfare";
    case Command::deviations: return "deviations";
    case Command::pivot: return "pivot";
    case Command::export_config: return "export-config";
  }
  return "";
}

void write_error(std::ostream& err, std::string_view kind,
                 std::string_view message) {
  nlohmann::ordered_json record;
  record["error"] = kind;
  record["message"] = message;
  err << record.dump() << '\n';
}

// ---------------------------------------------------------------------------
// Shared resolution of configuration, rule and profile.

ElectorateConfig resolve_config(const RunSpec& spec) {
  if (spec.config_file) return io::load_config(*spec.config_file);
  if (spec.config_id) return reference::configuration(*spec.config_id).config;
  throw InvalidOptions("one of --config or --config-file is required");
}

Rule single_rule(const RunSpec& spec) {
  if (spec.rules.size() != 1) {
    throw InvalidOptions(std::string(command_name(spec.command)) +
                         " takes a single --rule (wta or pr)");
  }
  return spec.rules.front();
}

EquilibriumResult solve_or_throw(const ElectorateConfig& config, Rule rule,
                                 const SolverOptions& options) {
  EquilibriumResult result = solve(config, rule, options);
  if (!result.converged) {
    throw NonConvergence("no fixed point within " +
                         std::to_string(options.max_iterations) +
                         " iterations (residual " +
                         io::format_fixed(result.residual, 10) + ")");
  }
  return result;
}

StrategyProfile with_observed_group_one(const RunSpec& spec,
                                        const ElectorateConfig& config,
                                        Rule rule) {
  if (!spec.config_id || spec.config_file) {
    throw InvalidOptions(
        "--observed needs an embedded configuration (--config ID)");
  }
  const GroupOneTurnout observed =
      reference::experiment_turnout(*spec.config_id).under(rule);
  StrategyProfile profile = solve_or_throw(config, rule, spec.solver).profile;
  profile(0, Candidate::a) = observed.t_a;
  profile(0, Candidate::b) = observed.t_b;
  return profile;
}

StrategyProfile resolve_profile(const RunSpec& spec,
                                const ElectorateConfig& config, Rule rule) {
  switch (spec.profile_source) {
    case ProfileSource::equilibrium:
      return solve_or_throw(config, rule, spec.solver).profile;
    case ProfileSource::values:
      spec.profile->validate();
      return *spec.profile;
    case ProfileSource::observed:
      return with_observed_group_one(spec, config, rule);
    case ProfileSource::samples:
      break;
  }
  throw InvalidOptions("--samples is only accepted by welfare");
}

std::string_view profile_label(ProfileSource source) {
  switch (source) {
    case ProfileSource::equilibrium: return "equilibrium";
    case ProfileSource::values: return "given";
    case ProfileSource::observed: return "observed";
    case ProfileSource::samples: return "samples";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Commands. Each returns its table plus the exit status it wants.

struct Outcome {
  explicit Outcome(ReportTable t) : table(std::move(t)) {}

  ReportTable table;
  int status = kExitOk;
  std::optional<std::pair<std::string, std::string>> error;
};

void add_solution_rows(ReportTable& table, Rule rule, std::int64_t index,
                       const EquilibriumResult& r) {
  for (int g = 0; g < kNumGroups; ++g) {
    for (Candidate c : {Candidate::a, Candidate::b}) {
      const std::size_t k = type_index(g, c);
      table.add_row({str(to_string(rule)), index, std::int64_t{g + 1},
                     str(to_string(c)), num(r.profile[k]),
                     num(r.unclamped_response[k]), r.corner_flags[k],
                     Number{r.residual, 10}, std::int64_t{r.iterations},
                     r.converged});
    }
  }
}

Outcome run_solve(const RunSpec& spec) {
  const ElectorateConfig config = resolve_config(spec);
  Outcome outcome{ReportTable({"rule", "solution", "group", "candidate",
                               "cutpoint", "best_response", "corner",
                               "residual", "iterations", "converged"})};
  bool all_converged = true;
  std::int64_t solutions = 0;
  for (Rule rule : spec.rules) {
    if (spec.all_fixed_points) {
      const auto points = find_all_fixed_points(
          config, rule, spec.grid, spec.grid_mode, spec.solver, spec.threads);
      for (std::size_t i = 0; i < points.size(); ++i) {
        add_solution_rows(outcome.table, rule, static_cast<std::int64_t>(i + 1),
                          points[i]);
      }
      outcome.table.add_summary(std::string(to_string(rule)) + "_fixed_points",
                                static_cast<std::int64_t>(points.size()));
      solutions += static_cast<std::int64_t>(points.size());
    } else {
      const EquilibriumResult r = solve(config, rule, spec.solver);
      add_solution_rows(outcome.table, rule, 1, r);
      all_converged = all_converged && r.converged;
      ++solutions;
    }
  }
  outcome.table.add_summary("solutions", solutions);
  outcome.table.add_summary("converged", all_converged);
  if (!all_converged) {
    outcome.status = kExitFailure;
    outcome.error = {"NonConvergence",
                     "iteration limit reached; best iterate reported"};
  }
  return outcome;
}

Outcome run_reproduce_table4(const RunSpec& spec) {
  struct Situation {
    const reference::Configuration* config;
    Rule rule;
    EquilibriumResult result;
  };
  std::vector<Situation> situations;
  for (const reference::Configuration& c : reference::configurations()) {
    for (Rule rule : spec.rules) situations.push_back({&c, rule, {}});
  }
  parallel_for(situations.size(), spec.threads, [&](std::size_t i) {
    situations[i].result =
        solve(situations[i].config->config, situations[i].rule, spec.solver);
  });

  Outcome outcome{ReportTable(
      {"config", "category", "rule", "t1_a", "t1_a_published", "gap_a", "t1_b",
       "t1_b_published", "gap_b", "iterations", "converged"})};
  double max_gap = 0.0;
  std::string worst;
  bool all_converged = true;
  for (const Situation& s : situations) {
    const GroupOneTurnout published =
        reference::equilibrium_turnout(s.config->id).under(s.rule);
    const double t_a = s.result.profile(0, Candidate::a);
    const double t_b = s.result.profile(0, Candidate::b);
    const double gap_a = t_a - published.t_a;
    const double gap_b = t_b - published.t_b;
    outcome.table.add_row(
        {std::int64_t{s.config->id}, str(to_string(s.config->category)),
         str(to_string(s.rule)), num(t_a), num(published.t_a, kPublished),
         num(gap_a), num(t_b), num(published.t_b, kPublished), num(gap_b),
         std::int64_t{s.result.iterations}, s.result.converged});
    for (double gap : {gap_a, gap_b}) {
      if (std::abs(gap) > max_gap) {
        max_gap = std::abs(gap);
        worst = std::to_string(s.config->id) + "/" +
                std::string(to_string(s.rule));
      }
    }
    all_converged = all_converged && s.result.converged;
  }
  outcome.table.add_summary("situations",
                            static_cast<std::int64_t>(situations.size()));
  outcome.table.add_summary("max_abs_gap", num(max_gap));
  outcome.table.add_summary("worst", worst);
  outcome.table.add_summary("tolerance", num(spec.gap_tolerance, 4));
  outcome.table.add_summary("converged", all_converged);
  if (!all_converged) {
    outcome.status = kExitFailure;
    outcome.error = {"NonConvergence", "some situations did not converge"};
  } else if (max_gap > spec.gap_tolerance) {
    outcome.status = kExitGap;
    outcome.error = {"GapExceeded", "max |gap| " + io::format_fixed(max_gap, 6) +
                                        " above tolerance " +
                                        io::format_fixed(spec.gap_tolerance, 4)};
  }
  return outcome;
}

Outcome run_simulate(const RunSpec& spec) {
  const ElectorateConfig config = resolve_config(spec);
  const Rule rule = single_rule(spec);
  const StrategyProfile profile = resolve_profile(spec, config, rule);
  const SimReport report = estimate(config, rule, profile, spec.sim);

  // Analytic counterparts under continuous costs: per-type expected payoff
  // of a voter who plays that cutpoint.
  WelfareOptions analytic = spec.welfare;
  analytic.basis = WinBasis::focal;
  const WelfareReport exact = expected_welfare(config, rule, profile, analytic);

  Outcome outcome{ReportTable({"group", "candidate", "cutpoint", "turnout",
                               "turnout_se", "turnout_analytic", "welfare",
                               "welfare_se", "welfare_analytic"})};
  for (int g = 0; g < kNumGroups; ++g) {
    for (Candidate c : {Candidate::a, Candidate::b}) {
      const std::size_t k = type_index(g, c);
      outcome.table.add_row(
          {std::int64_t{g + 1}, str(to_string(c)), num(profile[k]),
           num(report.turnout[k].mean), num(report.turnout[k].std_error),
           num(config.type_share(g, c) * profile[k]),
           num(report.welfare[k].mean), num(report.welfare[k].std_error),
           num(exact.welfare[k])});
    }
  }
  outcome.table.add_summary("rule", str(to_string(rule)));
  outcome.table.add_summary("profile", str(profile_label(spec.profile_source)));
  outcome.table.add_summary("cost_model", str(to_string(spec.sim.cost_model)));
  outcome.table.add_summary("trials", report.trials);
  outcome.table.add_summary("seed", static_cast<std::int64_t>(spec.sim.seed));
  outcome.table.add_summary("win_prob_a", num(report.win_prob_a.mean));
  outcome.table.add_summary("win_prob_a_se", num(report.win_prob_a.std_error));
  outcome.table.add_summary("win_prob_a_analytic", num(exact.win_prob_a));
  return outcome;
}

void add_welfare_summary(ReportTable& table, const WelfareReport& report) {
  table.add_summary("win_prob_a", num(report.win_prob_a));
  if (report.majority) table.add_summary("majority", num(*report.majority));
  if (report.minority) table.add_summary("minority", num(*report.minority));
  if (report.gini) table.add_summary("gini", num(*report.gini));
}

// Category averages of camp welfare and Gini over every non-IC
// configuration, at equilibrium and with group 1 at the experiment
// averages, next to the published averages.
Outcome run_welfare_summary(const RunSpec& spec) {
  struct Job {
    const reference::Configuration* config;
    Rule rule;
    WelfareReport theory;
    WelfareReport observed;
  };
  std::vector<Job> jobs;
  for (const reference::Configuration& c : reference::configurations()) {
    if (c.category == Category::ic) continue;
    for (Rule rule : spec.rules) jobs.push_back({&c, rule, {}, {}});
  }
  parallel_for(jobs.size(), spec.threads, [&](std::size_t i) {
    Job& job = jobs[i];
    StrategyProfile profile =
        solve_or_throw(job.config->config, job.rule, spec.solver).profile;
    job.theory =
        expected_welfare(job.config->config, job.rule, profile, spec.welfare);
    const GroupOneTurnout observed =
        reference::experiment_turnout(job.config->id).under(job.rule);
    profile(0, Candidate::a) = observed.t_a;
    profile(0, Candidate::b) = observed.t_b;
    job.observed =
        expected_welfare(job.config->config, job.rule, profile, spec.welfare);
  });

  struct Sums {
    double values[6] = {};
    int count = 0;
    int gini_count[2] = {};
  };
  std::map<std::pair<Category, Rule>, Sums> sums;
  for (const Job& job : jobs) {
    Sums& s = sums[{job.config->category, job.rule}];
    ++s.count;
    s.values[0] += job.theory.majority.value_or(0.0);
    s.values[1] += job.theory.minority.value_or(0.0);
    s.values[3] += job.observed.majority.value_or(0.0);
    s.values[4] += job.observed.minority.value_or(0.0);
    if (job.theory.gini) {
      s.values[2] += *job.theory.gini;
      ++s.gini_count[0];
    }
    if (job.observed.gini) {
      s.values[5] += *job.observed.gini;
      ++s.gini_count[1];
    }
  }

  Outcome outcome{ReportTable(
      {"category", "rule", "configs", "majority", "majority_published",
       "minority", "minority_published", "gini", "gini_published",
       "majority_observed", "majority_experiment", "minority_observed",
       "minority_experiment", "gini_observed", "gini_experiment"})};
  double max_welfare_gap = 0.0;
  double max_gini_gap = 0.0;
  for (const auto& [key, s] : sums) {
    const auto& [category, rule] = key;
    const reference::WelfareRow& row = reference::welfare_row(category, rule);
    const double n = s.count;
    const double majority = s.values[0] / n;
    const double minority = s.values[1] / n;
    const double gini = s.gini_count[0] ? s.values[2] / s.gini_count[0] : 0.0;
    outcome.table.add_row(
        {str(to_string(category)), str(to_string(rule)),
         std::int64_t{s.count}, num(majority),
         num(row.majority_theory, kPublished), num(minority),
         num(row.minority_theory, kPublished), num(gini),
         num(row.gini_theory, kPublished), num(s.values[3] / n),
         num(row.majority_experiment, kPublished), num(s.values[4] / n),
         num(row.minority_experiment, kPublished),
         num(s.gini_count[1] ? s.values[5] / s.gini_count[1] : 0.0),
         num(row.gini_experiment, kPublished)});
    max_welfare_gap = std::max({max_welfare_gap,
                                std::abs(majority - row.majority_theory),
                                std::abs(minority - row.minority_theory)});
    max_gini_gap = std::max(max_gini_gap, std::abs(gini - row.gini_theory));
  }
  outcome.table.add_summary("basis", str(to_string(spec.welfare.basis)));
  outcome.table.add_summary("gini_population",
                            str(to_string(spec.welfare.gini_population)));
  outcome.table.add_summary("max_abs_welfare_gap", num(max_welfare_gap));
  outcome.table.add_summary("max_abs_gini_gap", num(max_gini_gap));
  return outcome;
}

Outcome run_welfare(const RunSpec& spec) {
  if (spec.summary) return run_welfare_summary(spec);
  const ElectorateConfig config = resolve_config(spec);
  const Rule rule = single_rule(spec);

  StrategyProfile profile;
  WelfareReport report;
  if (spec.profile_source == ProfileSource::samples) {
    const std::vector<io::Record> records = io::load_records(*spec.samples_file);
    const auto [sample_a, sample_b] =
        io::cutpoint_samples(records, spec.config_id.value_or(0), rule);
    profile = solve_or_throw(config, rule, spec.solver).profile;
    report = welfare_from_sample(config, rule, sample_a, sample_b, profile,
                                 spec.welfare);
    for (const CutpointSample* s : {&sample_a, &sample_b}) {
      double total = 0.0;
      for (double v : s->values) total += v / config.cost_cap;
      profile(0, s->candidate) = total / static_cast<double>(s->values.size());
    }
  } else {
    profile = resolve_profile(spec, config, rule);
    report = expected_welfare(config, rule, profile, spec.welfare);
  }

  Outcome outcome{ReportTable({"group", "candidate", "cutpoint", "welfare"})};
  for (int g = 0; g < kNumGroups; ++g) {
    for (Candidate c : {Candidate::a, Candidate::b}) {
      outcome.table.add_row({std::int64_t{g + 1}, str(to_string(c)),
                             num(profile(g, c)), num(report(g, c))});
    }
  }
  outcome.table.add_summary("rule", str(to_string(rule)));
  outcome.table.add_summary("profile", str(profile_label(spec.profile_source)));
  outcome.table.add_summary("basis", str(to_string(spec.welfare.basis)));
  add_welfare_summary(outcome.table, report);
  return outcome;
}

std::vector<GroupOneTurnout> solved_theory(const RunSpec& spec) {
  std::vector<GroupOneTurnout> theory;
  for (const reference::Configuration& c : reference::configurations()) {
    for (Rule rule : {Rule::wta, Rule::pr}) {
      theory.push_back({c.id, rule, 0.0, 0.0});
    }
  }
  parallel_for(theory.size(), spec.threads, [&](std::size_t i) {
    const StrategyProfile p =
        solve_or_throw(reference::configuration(theory[i].config_id).config,
                       theory[i].rule, spec.solver)
            .profile;
    theory[i].t_a = p(0, Candidate::a);
    theory[i].t_b = p(0, Candidate::b);
  });
  return theory;
}

Outcome run_deviations(const RunSpec& spec) {
  const std::vector<GroupOneTurnout> theory =
      spec.theory == TheorySource::published
          ? reference::equilibrium_turnout_points()
          : solved_theory(spec);
  std::vector<ObservedTurnout> observed =
      spec.observed_file
          ? io::observed_turnout(io::load_records(*spec.observed_file))
          : reference::experiment_turnout_points();
  std::erase_if(observed, [&](const ObservedTurnout& o) {
    return std::find(spec.rules.begin(), spec.rules.end(), o.rule) ==
           spec.rules.end();
  });
  const ConfigTable configs = reference::config_table();
  const std::vector<DeviationRecord> records =
      deviation_table(theory, observed, configs);

  if (spec.summary) {
    Outcome outcome{ReportTable(
        {"category", "rule", "camp", "mean_deviation", "count"})};
    for (const CategorySummary& s : category_summary(records, configs)) {
      outcome.table.add_row({str(to_string(s.category)), str(to_string(s.rule)),
                             str(to_string(s.camp)), num(s.mean_deviation),
                             std::int64_t{s.count}});
    }
    return outcome;
  }

  // Published deviations are comparable only when both inputs are the
  // embedded ones.
  const bool compare =
      !spec.observed_file && spec.theory == TheorySource::published;
  std::map<std::tuple<int, Rule, Camp>, double> published;
  for (const reference::Deviation& d : reference::deviations()) {
    published[{d.config_id, d.rule, d.camp}] = d.value;
  }
  std::vector<std::string> columns{"config", "category", "rule", "camp",
                                   "deviation", "effect"};
  if (compare) columns.push_back("published");
  Outcome outcome{ReportTable(std::move(columns))};
  double max_gap = 0.0;
  for (const DeviationRecord& r : records) {
    std::vector<Cell> row{std::int64_t{r.config_id},
                          str(to_string(categorize(configs.at(r.config_id)))),
                          str(to_string(r.rule)), str(to_string(r.camp)),
                          num(r.deviation), str(to_string(r.effect))};
    if (compare) {
      const auto it = published.find({r.config_id, r.rule, r.camp});
      const double value = it == published.end() ? 0.0 : it->second;
      row.emplace_back(num(value, kPublished));
      max_gap = std::max(max_gap, std::abs(r.deviation - value));
    }
    outcome.table.add_row(std::move(row));
  }
  outcome.table.add_summary("records",
                            static_cast<std::int64_t>(records.size()));
  if (compare) outcome.table.add_summary("max_abs_gap", num(max_gap));
  return outcome;
}

Outcome run_pivot(const RunSpec& spec) {
  const ElectorateConfig config = resolve_config(spec);
  const Rule rule = single_rule(spec);
  const StrategyProfile profile = resolve_profile(spec, config, rule);
  const PivotVector pi = pivot_vector(config, rule, profile, spec.solver.pivot);

  Outcome outcome{ReportTable(
      {"group", "candidate", "cutpoint", "pivot", "best_response"})};
  for (int g = 0; g < kNumGroups; ++g) {
    for (Candidate c : {Candidate::a, Candidate::b}) {
      outcome.table.add_row(
          {std::int64_t{g + 1}, str(to_string(c)), num(profile(g, c)),
           Number{pi(g, c), 10},
           num(config.benefit * pi(g, c) / config.cost_cap)});
    }
  }
  outcome.table.add_summary("rule", str(to_string(rule)));
  outcome.table.add_summary("profile", str(profile_label(spec.profile_source)));
  outcome.table.add_summary(
      "win_prob_a",
      num(win_probability_a(config, rule, profile, spec.solver.pivot)));
  return outcome;
}

}  // namespace

StrategyProfile parse_profile(std::string_view text) {
  const std::vector<double> values = parse_doubles(text, "profile");
  if (values.size() != kNumTypes) {
    throw ParseError("profile needs 6 comma-separated cutpoints "
                     "(t1A,t1B,t2A,t2B,t3A,t3B), got " +
                     std::to_string(values.size()));
  }
  std::array<double, kNumTypes> cutpoints{};
  std::copy(values.begin(), values.end(), cutpoints.begin());
  StrategyProfile profile(cutpoints);
  profile.validate();
  return profile;
}

std::optional<RunSpec> parse_arguments(int argc, const char* const* argv,
                                       std::ostream& out) {
  CLI::App app{"Costly-voting two-tier election solver and simulator",
               "twotier"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  struct Raw {
    std::string ties = "coin";
    bool prune = false;
    std::string format = "table";
    std::string output;
    unsigned threads = 0;
    double damping = 0.5;
    double tolerance = 1e-7;
    int max_iterations = 10000;

    int config_id = 0;
    std::string config_file;
    std::string rule;
    std::string profile;
    bool observed = false;
    std::string samples;
    std::string observed_file;
    std::string theory = "published";

    bool all_fixed_points = false;
    std::string grid = "0.1,0.5,0.9";
    std::string grid_mode = "symmetric";
    std::string start;

    std::int64_t trials = 100000;
    std::uint64_t seed = 0;
    std::string cost_model = "continuous";

    std::string basis = "electorate";
    std::string gini_population = "group1";
    bool summary = false;
    double max_gap = 0.01;
  } raw;

  app.add_option("--tie-convention", raw.ties,
                 "WTA within-group ties: coin or split")
      ->capture_default_str();
  app.add_flag("--prune", raw.prune,
               "Drop tally outcomes below 1e-15 probability");
  app.add_option("--format", raw.format, "csv, json or table")
      ->capture_default_str();
  app.add_option("--output,-o", raw.output, "Write the result to a file");
  app.add_option("--threads", raw.threads,
                 "Worker threads (0: TWOTIER_THREADS or hardware)");
  app.add_option("--damping", raw.damping, "Fixed-point damping in (0, 1]")
      ->capture_default_str();
  app.add_option("--tolerance", raw.tolerance, "Fixed-point tolerance")
      ->capture_default_str();
  app.add_option("--max-iterations", raw.max_iterations,
                 "Fixed-point iteration cap")
      ->capture_default_str();

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config,-c", raw.config_id,
                    "Embedded laboratory configuration (1-18)");
    sub->add_option("--config-file", raw.config_file,
                    "JSON configuration file");
  };
  auto add_rule = [&](CLI::App* sub, const char* help) {
    sub->add_option("--rule,-r", raw.rule, help);
  };
  auto add_profile = [&](CLI::App* sub) {
    sub->add_option("--profile", raw.profile,
                    "Cutpoints t1A,t1B,t2A,t2B,t3A,t3B (default: equilibrium)");
    sub->add_flag("--observed", raw.observed,
                  "Group 1 at the experiment averages, groups 2-3 at "
                  "equilibrium");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve for equilibrium");
  add_config(solve_cmd);
  add_rule(solve_cmd, "wta, pr or both (default both)");
  solve_cmd->add_flag("--all-fixed-points", raw.all_fixed_points,
                      "Multi-start search for every fixed point");
  solve_cmd->add_option("--grid", raw.grid, "Start values per axis")
      ->capture_default_str();
  solve_cmd->add_option("--grid-mode", raw.grid_mode, "symmetric or full")
      ->capture_default_str();
  solve_cmd->add_option("--start", raw.start, "Start profile (six values)");

  CLI::App* table4_cmd = app.add_subcommand(
      "reproduce-table4",
      "Solve every laboratory configuration and compare with the published "
      "equilibrium turnout");
  add_rule(table4_cmd, "wta, pr or both (default both)");
  table4_cmd->add_option("--max-gap", raw.max_gap,
                         "Fail when any |gap| exceeds this")
      ->capture_default_str();

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Monte Carlo estimates at a profile");
  add_config(simulate_cmd);
  add_rule(simulate_cmd, "wta or pr (default wta)");
  add_profile(simulate_cmd);
  simulate_cmd->add_option("--trials,-n", raw.trials, "Simulated elections")
      ->capture_default_str();
  simulate_cmd->add_option("--seed,-s", raw.seed, "Random seed")
      ->capture_default_str();
  simulate_cmd->add_option("--cost-model", raw.cost_model,
                           "continuous or discrete")
      ->capture_default_str();

  CLI::App* welfare_cmd = app.add_subcommand("welfare", "Expected welfare");
  add_config(welfare_cmd);
  add_rule(welfare_cmd, "wta or pr (default wta; both with --summary)");
  add_profile(welfare_cmd);
  welfare_cmd->add_option("--samples", raw.samples,
                          "Group-1 cutpoint samples (record CSV)");
  welfare_cmd->add_option("--basis", raw.basis, "electorate or focal")
      ->capture_default_str();
  welfare_cmd->add_option("--gini-population", raw.gini_population,
                          "group1 or all")
      ->capture_default_str();
  welfare_cmd->add_flag("--summary", raw.summary,
                        "Category averages over the laboratory "
                        "configurations");

  CLI::App* deviations_cmd = app.add_subcommand(
      "deviations", "Observed minus predicted group-1 turnout per camp");
  add_rule(deviations_cmd, "wta, pr or both (default both)");
  deviations_cmd->add_flag("--embedded", "Use the embedded experiment "
                                         "averages (default)");
  deviations_cmd->add_option("--observed-file", raw.observed_file,
                             "Observed turnout (record CSV)");
  deviations_cmd->add_option("--theory", raw.theory, "published or solved")
      ->capture_default_str();
  deviations_cmd->add_flag("--summary", raw.summary,
                           "Mean deviation per category, rule and camp");

  CLI::App* pivot_cmd =
      app.add_subcommand("pivot", "Pivot probabilities at a profile");
  add_config(pivot_cmd);
  add_rule(pivot_cmd, "wta or pr (default wta)");
  add_profile(pivot_cmd);

  CLI::App* export_cmd = app.add_subcommand(
      "export-config", "Print an embedded configuration as JSON");
  add_config(export_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, out);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ParseError(e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  RunSpec spec;
  if (name == "solve") spec.command = Command::solve;
  else if (name == "reproduce-table4") spec.command = Command::reproduce_table4;
  else if (name == "simulate") spec.command = Command::simulate;
  else if (name == "welfare") spec.command = Command::welfare;
  else if (name == "deviations") spec.command = Command::deviations;
  else if (name == "pivot") spec.command = Command::pivot;
  else spec.command = Command::export_config;

  auto given = [&](const char* option) {
    return sub->get_option_no_throw(option) != nullptr && sub->count(option) > 0;
  };

  if (given("--config")) spec.config_id = raw.config_id;
  if (given("--config-file")) spec.config_file = raw.config_file;
  if (spec.config_id && spec.config_file) {
    throw InvalidOptions("--config and --config-file are exclusive");
  }

  const bool multi_rule = spec.command == Command::solve ||
                          spec.command == Command::reproduce_table4 ||
                          spec.command == Command::deviations ||
                          (spec.command == Command::welfare && raw.summary);
  if (!raw.rule.empty()) {
    spec.rules = parse_rules(raw.rule);
  } else if (!multi_rule) {
    spec.rules = {Rule::wta};
  }

  int sources = 0;
  if (given("--profile")) {
    spec.profile = parse_profile(raw.profile);
    spec.profile_source = ProfileSource::values;
    ++sources;
  }
  if (raw.observed) {
    spec.profile_source = ProfileSource::observed;
    ++sources;
  }
  if (given("--samples")) {
    spec.samples_file = raw.samples;
    spec.profile_source = ProfileSource::samples;
    ++sources;
  }
  if (sources > 1) {
    throw InvalidOptions("--profile, --observed and --samples are exclusive");
  }
  if (given("--observed-file")) spec.observed_file = raw.observed_file;
  if (raw.theory == "published") spec.theory = TheorySource::published;
  else if (raw.theory == "solved") spec.theory = TheorySource::solved;
  else throw ParseError("unknown theory source '" + raw.theory +
                        "' (expected published|solved)");

  spec.solver.damping = raw.damping;
  spec.solver.tolerance = raw.tolerance;
  spec.solver.max_iterations = raw.max_iterations;
  spec.solver.pivot.wta_ties = parse_tie_convention(raw.ties);
  spec.solver.pivot.prune = raw.prune;
  if (!raw.start.empty()) spec.solver.starts = {parse_profile(raw.start)};
  spec.solver.validate();
  spec.all_fixed_points = raw.all_fixed_points;
  spec.grid = parse_doubles(raw.grid, "grid");
  if (raw.grid_mode == "symmetric") spec.grid_mode = StartGrid::symmetric;
  else if (raw.grid_mode == "full") spec.grid_mode = StartGrid::full;
  else throw ParseError("unknown grid mode '" + raw.grid_mode +
                        "' (expected symmetric|full)");

  spec.threads = raw.threads;
  spec.sim.trials = raw.trials;
  spec.sim.seed = raw.seed;
  spec.sim.cost_model = parse_cost_model(raw.cost_model);
  spec.sim.wta_ties = spec.solver.pivot.wta_ties;
  spec.sim.threads = raw.threads;
  spec.sim.validate();

  spec.welfare.basis = parse_win_basis(raw.basis);
  spec.welfare.gini_population = parse_gini_population(raw.gini_population);
  spec.welfare.pivot = spec.solver.pivot;
  spec.summary = raw.summary;
  spec.gap_tolerance = raw.max_gap;

  spec.format = parse_format(raw.format);
  if (!raw.output.empty()) spec.output = raw.output;
  return spec;
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream file;
    std::ostream* target = &out;
    if (spec.output) {
      file.open(*spec.output, std::ios::binary);
      if (!file) {
        throw ValidationError("output",
                              "cannot open '" + spec.output->string() + "'");
      }
      target = &file;
    }

    if (spec.command == Command::export_config) {
      *target << io::config_to_json(resolve_config(spec)) << '\n';
      return kExitOk;
    }

    Outcome outcome{ReportTable({})};
    switch (spec.command) {
      case Command::solve: outcome = run_solve(spec); break;
      case Command::reproduce_table4: outcome = run_reproduce_table4(spec); break;
      case Command::simulate: outcome = run_simulate(spec); break;
      case Command::welfare: outcome = run_welfare(spec); break;
      case Command::deviations: outcome = run_deviations(spec); break;
      case Command::pivot: outcome = run_pivot(spec); break;
      case Command::export_config: break;
    }
    outcome.table.write(*target, err, spec.format,
                        std::string(command_name(spec.command)));
    target->flush();
    if (outcome.error) {
      write_error(err, outcome.error->first, outcome.error->second);
    }
    return outcome.status;
  } catch (const Error& e) {
    write_error(err, e.kind(), e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    write_error(err, "InternalError", e.what());
    return kExitFailure;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  std::optional<RunSpec> spec;
  try {
    spec = parse_arguments(argc, argv, out);
  } catch (const Error& e) {
    write_error(err, e.kind(), e.what());
    return kExitUsage;
  }
  if (!spec) return kExitOk;
  return run(*spec, out, err);
}

}  // namespace twotier::cli
