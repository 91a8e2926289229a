// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Informational lines start with "  ".

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "support/instances.hpp"
#include "support/oracle.hpp"
#include "twotier/behavioral.hpp"
#include "twotier/equilibrium.hpp"
#include "twotier/montecarlo.hpp"
#include "twotier/pivot.hpp"
#include "twotier/reference_data.hpp"
#include "twotier/welfare.hpp"

using namespace twotier;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double wall_seconds(const std::function<Verdict()>& fn, Verdict& out) {
  const auto start = std::chrono::steady_clock::now();
  out = fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void info(const std::string& line) { std::printf("  %s\n", line.c_str()); }

constexpr std::array<Rule, 2> kRules{Rule::wta, Rule::pr};

// --- 1: equilibrium golden values -------------------------------------------

double max_equilibrium_gap(TieConvention ties, std::string* worst) {
  double max_gap = 0.0;
  for (const auto& c : reference::configurations()) {
    for (Rule rule : kRules) {
      SolverOptions opts;
      opts.pivot.wta_ties = ties;
      const EquilibriumResult r = solve(c.config, rule, opts);
      const GroupOneTurnout want = reference::equilibrium_turnout(c.id).under(rule);
      const double gap = std::max(std::abs(r.profile(0, Candidate::a) - want.t_a),
                                  std::abs(r.profile(0, Candidate::b) - want.t_b));
      if (gap > max_gap || !r.converged) {
        max_gap = r.converged ? gap : INFINITY;
        if (worst) *worst = fmt::format("config {} {}", c.id, to_string(rule));
      }
    }
  }
  return max_gap;
}

Verdict golden_equilibria() {
  std::string worst;
  const double gap = max_equilibrium_gap(TieConvention::coin, &worst);
  const EquilibriumResult corner = solve(reference::configuration(15).config, Rule::pr);
  const bool corner_ok = corner.profile(0, Candidate::a) == 1.0 &&
                         corner.corner_flags[type_index(0, Candidate::a)];
  const double split_gap = max_equilibrium_gap(TieConvention::split, nullptr);
  info(fmt::format("alternate WTA tie convention (split): max gap {:.4f}", split_gap));
  return {gap <= 0.01 && corner_ok,
          fmt::format("36 situations x (t1A, t1B), max |gap| {:.4f} at {} (tol 0.01); "
                      "config 15 PR corner t1A=1 {}",
                      gap, worst, corner_ok ? "held" : "missed")};
}

// --- 2: fixed-point residual ---------------------------------------------------

Verdict fixed_point_residual() {
  double interior = 0.0;
  int corners = 0;
  int kkt_violations = 0;
  for (const auto& c : reference::configurations()) {
    for (Rule rule : kRules) {
      const EquilibriumResult r = solve(c.config, rule);
      // Recomputed here rather than trusting the solver's own residual.
      const PivotVector pi = pivot_vector(c.config, rule, r.profile);
      const double scale = c.config.benefit / c.config.cost_cap;
      for (std::size_t k = 0; k < kNumTypes; ++k) {
        const double t = r.profile[k];
        const double response = scale * pi.pi[k];
        if (t <= 0.0 || t >= 1.0) {
          ++corners;
          const bool ok = t >= 1.0 ? response >= 1.0 - 1e-6 : response <= 1e-6;
          if (!ok) ++kkt_violations;
        } else {
          interior = std::max(interior, std::abs(t - response));
        }
      }
    }
  }
  return {interior <= 1e-6 && kkt_violations == 0,
          fmt::format("max interior |t - beta*pi/c| {:.2e} (tol 1e-6); {} corner "
                      "components, {} KKT violations",
                      interior, corners, kkt_violations)};
}

// --- 3: analytic vs Monte Carlo vs enumeration ---------------------------------

Verdict oracle_equivalence() {
  std::mt19937_64 gen(20240601);
  int checks = 0;
  int misses = 0;
  double worst_z = 0.0;
  std::string missed;
  auto compare = [&](const Estimate& e, double truth, double k, const std::string& what) {
    ++checks;
    const double diff = std::abs(e.mean - truth);
    if (e.std_error > 0.0) worst_z = std::max(worst_z, diff / e.std_error);
    if (diff > k * e.std_error + 1e-12) {
      ++misses;
      missed += fmt::format(" {} (z {:.2f})", what, (e.mean - truth) / e.std_error);
    }
  };

  const int random_instances = 20;
  for (int i = 0; i < random_instances; ++i) {
    const fixtures::Instance inst = fixtures::random_instance(gen, 1, 15);
    SimOptions opts;
    opts.trials = 1'000'000;
    opts.seed = 1000 + static_cast<std::uint64_t>(i);
    const SimReport sim = estimate(inst.config, inst.rule, inst.profile, opts);
    compare(sim.win_prob_a, win_probability_a(inst.config, inst.rule, inst.profile), 3.0,
            fmt::format("instance {} win probability", i));
    const int g = static_cast<int>(gen() % kNumGroups);
    const Candidate c = gen() % 2 == 0 ? Candidate::a : Candidate::b;
    const Estimate pe = estimate_pivot(inst.config, inst.rule, inst.profile, g, c, opts);
    compare(pe, pivot_probability(inst.config, inst.rule, inst.profile, g, c), 3.0,
            fmt::format("instance {} pivot {}{}", i, g + 1, to_string(c)));
  }
  const int random_checks = checks;
  const int random_misses = misses;

  double analytic_vs_oracle = 0.0;
  for (int i = 0; i < 5; ++i) {
    const fixtures::Instance inst = fixtures::random_instance(gen, 1, 3);
    const double credit = oracle::expected_credit_a(inst.config, inst.rule, inst.profile);
    analytic_vs_oracle = std::max(
        analytic_vs_oracle,
        std::abs(credit - win_probability_a(inst.config, inst.rule, inst.profile)));
    SimOptions opts;
    opts.trials = 10'000'000;
    opts.seed = 5000 + static_cast<std::uint64_t>(i);
    compare(estimate(inst.config, inst.rule, inst.profile, opts).win_prob_a, credit, 4.0,
            fmt::format("small instance {} win probability", i));
    const int g = i % kNumGroups;
    const Candidate c = i % 2 == 0 ? Candidate::a : Candidate::b;
    const double exact = oracle::pivot(inst.config, inst.rule, inst.profile, g, c);
    analytic_vs_oracle = std::max(
        analytic_vs_oracle,
        std::abs(exact - pivot_probability(inst.config, inst.rule, inst.profile, g, c)));
    compare(estimate_pivot(inst.config, inst.rule, inst.profile, g, c, opts), exact, 4.0,
            fmt::format("small instance {} pivot {}{}", i, g + 1, to_string(c)));
  }
  return {misses == 0 && analytic_vs_oracle <= 1e-12,
          fmt::format("{} random instances at 1e6 trials: {}/{} within 3 SE; 5 instances "
                      "n<=3 at 1e7 trials: {}/{} within 4 SE of enumeration; worst z {:.2f}; "
                      "analytic vs enumeration {:.1e}{}",
                      random_instances, random_checks - random_misses, random_checks,
                      (checks - random_checks) - (misses - random_misses),
                      checks - random_checks, worst_z, analytic_vs_oracle,
                      missed.empty() ? "" : "; outside:" + missed)};
}

// --- 4: deviation table ------------------------------------------------------------

Verdict deviation_consistency() {
  const auto records =
      deviation_table(reference::equilibrium_turnout_points(),
                      reference::experiment_turnout_points(), reference::config_table());
  double worst = 0.0;
  int found = 0;
  for (const reference::Deviation& d : reference::deviations()) {
    for (const DeviationRecord& r : records) {
      if (r.config_id == d.config_id && r.rule == d.rule && r.camp == d.camp) {
        worst = std::max(worst, std::abs(r.deviation - d.value));
        ++found;
      }
    }
  }
  const int expected = static_cast<int>(reference::deviations().size());
  for (Rule rule : kRules) {
    int titanic = 0, bandwagon = 0, minority = 0, majority = 0;
    for (const auto& r : records) {
      if (r.rule != rule || std::abs(r.deviation) <= 0.05) continue;
      (r.camp == Camp::minority ? minority : majority) += 1;
      titanic += r.effect == Effect::titanic;
      bandwagon += r.effect == Effect::behavioral_bandwagon;
    }
    info(fmt::format("{} |dev|>0.05: titanic {} vs bandwagon {}; any sign: minority {} "
                     "vs majority {}",
                     to_string(rule), titanic, bandwagon, minority, majority));
  }
  return {found == expected && worst <= 0.0015,
          fmt::format("{}/{} printed deviations recomputed, max |gap| {:.4f} (tol 0.0015)",
                      found, expected, worst)};
}

// --- 5: category welfare and Gini ----------------------------------------------

Verdict welfare_theory() {
  double welfare_gap = 0.0;
  double gini_gap = 0.0;
  for (const reference::WelfareRow& row : reference::welfare_rows()) {
    double majority = 0.0, minority = 0.0, g = 0.0;
    int n = 0;
    for (const auto& c : reference::configurations()) {
      if (c.category != row.category) continue;
      const WelfareReport r =
          expected_welfare(c.config, row.rule, solve(c.config, row.rule).profile);
      majority += *r.majority;
      minority += *r.minority;
      g += *r.gini;
      ++n;
    }
    welfare_gap = std::max({welfare_gap, std::abs(majority / n - row.majority_theory),
                            std::abs(minority / n - row.minority_theory)});
    gini_gap = std::max(gini_gap, std::abs(g / n - row.gini_theory));
  }
  return {welfare_gap <= 0.02 && gini_gap <= 0.015,
          fmt::format("6 category x rule rows: max welfare gap {:.4f} (tol 0.02), max "
                      "Gini gap {:.4f} (tol 0.015)",
                      welfare_gap, gini_gap)};
}

// --- 6: directions under observed turnout -------------------------------------

Verdict observed_directions() {
  bool pass = true;
  std::string detail;
  std::array<double, 2> mean_shift{};
  int win_up_total = 0;
  int configs_total = 0;
  for (std::size_t ri = 0; ri < kRules.size(); ++ri) {
    const Rule rule = kRules[ri];
    int majority_up = 0, minority_down = 0, win_up = 0, n = 0;
    double shift = 0.0;
    for (const auto& c : reference::configurations()) {
      if (c.category == Category::ic) continue;
      const StrategyProfile eq = solve(c.config, rule).profile;
      const GroupOneTurnout obs = reference::experiment_turnout(c.id).under(rule);
      const auto [sa, sb] = point_mass_samples(c.config, obs.t_a, obs.t_b);
      const WelfareReport at_eq = expected_welfare(c.config, rule, eq);
      const WelfareReport at_obs = welfare_from_sample(c.config, rule, sa, sb, eq);
      majority_up += *at_obs.majority >= *at_eq.majority;
      minority_down += *at_obs.minority <= *at_eq.minority;
      shift += std::abs(*at_obs.majority - *at_eq.majority) +
               std::abs(*at_obs.minority - *at_eq.minority);

      StrategyProfile observed = eq;
      observed(0, Candidate::a) = obs.t_a;
      observed(0, Candidate::b) = obs.t_b;
      SimOptions opts;
      opts.trials = 200'000;
      opts.seed = 77 + static_cast<std::uint64_t>(c.id);
      const Candidate major =
          camp_of(c.config, Candidate::a) == Camp::majority ? Candidate::a : Candidate::b;
      auto major_wins = [&](const StrategyProfile& t) {
        const double pa = estimate(c.config, rule, t, opts).win_prob_a.mean;
        return major == Candidate::a ? pa : 1.0 - pa;
      };
      win_up += major_wins(observed) > major_wins(eq);
      ++n;
    }
    mean_shift[ri] = shift / (2.0 * n);
    win_up_total += win_up;
    configs_total += n;
    const bool rule_ok = majority_up >= 11 && minority_down >= 11 && 2 * win_up > n;
    pass = pass && rule_ok;
    detail += fmt::format("{}: majority up {}/{}, minority down {}/{}, majority win "
                          "probability up {}/{}; ",
                          to_string(rule), majority_up, n, minority_down, n, win_up, n);
  }
  const bool shift_ok = mean_shift[1] > mean_shift[0];
  detail += fmt::format("mean |shift| PR {:.4f} vs WTA {:.4f}", mean_shift[1],
                        mean_shift[0]);
  return {pass && shift_ok, detail};
}

// --- 7: properties --------------------------------------------------------------

Verdict properties() {
  std::mt19937_64 gen(7);
  double swap_gap = 0.0;
  for (int i = 0; i < 30; ++i) {
    const fixtures::Instance inst = fixtures::random_instance(gen, 1, 21);
    const ElectorateConfig sc = swap_labels(inst.config);
    const StrategyProfile st = swap_labels(inst.profile);
    swap_gap = std::max(swap_gap,
                        std::abs(win_probability_a(sc, inst.rule, st) -
                                 (1.0 - win_probability_a(inst.config, inst.rule,
                                                          inst.profile))));
    const PivotVector p = pivot_vector(inst.config, inst.rule, inst.profile);
    const PivotVector q = pivot_vector(sc, inst.rule, st);
    for (int g = 0; g < kNumGroups; ++g) {
      swap_gap = std::max(swap_gap, std::abs(p(g, Candidate::a) - q(g, Candidate::b)));
      swap_gap = std::max(swap_gap, std::abs(p(g, Candidate::b) - q(g, Candidate::a)));
    }
  }

  int conservation_failures = 0;
  for (int size = 1; size <= 21; ++size) {
    for (int a = 0; a <= size; ++a) {
      for (int b = 0; a + b <= size; ++b) {
        for (Rule rule : kRules) {
          const WeightAllocation w = allocate_weights({a, b}, rule, size);
          conservation_failures += !(w.weight_a + w.weight_b == Rational(size));
          for (TieConvention ties : {TieConvention::coin, TieConvention::split}) {
            for (const WeightOutcome& o : allocation_outcomes({a, b}, rule, size, ties)) {
              conservation_failures +=
                  !(o.allocation.weight_a + o.allocation.weight_b == Rational(size));
            }
          }
        }
      }
    }
  }

  bool deterministic = true;
  {
    const auto& c = reference::configuration(13).config;
    const StrategyProfile t = solve(c, Rule::pr).profile;
    SimOptions opts;
    opts.trials = 2 * kTrialsPerBlock + 77;
    opts.seed = 3;
    opts.threads = 1;
    const SimReport one = estimate(c, Rule::pr, t, opts);
    const Estimate p1 = estimate_pivot(c, Rule::pr, t, 1, Candidate::b, opts);
    for (unsigned threads : {2u, 4u, 7u}) {
      opts.threads = threads;
      const SimReport many = estimate(c, Rule::pr, t, opts);
      const Estimate pn = estimate_pivot(c, Rule::pr, t, 1, Candidate::b, opts);
      deterministic = deterministic && one.win_prob_a.mean == many.win_prob_a.mean &&
                      one.win_prob_a.std_error == many.win_prob_a.std_error &&
                      p1.mean == pn.mean && p1.std_error == pn.std_error;
      for (std::size_t k = 0; k < kNumTypes; ++k) {
        deterministic = deterministic && one.welfare[k].mean == many.welfare[k].mean &&
                        one.turnout[k].mean == many.turnout[k].mean;
      }
    }
  }

  int bound_violations = 0;
  double point_mass_gap = 0.0;
  for (const auto& c : reference::configurations()) {
    for (Rule rule : kRules) {
      const StrategyProfile t = solve(c.config, rule).profile;
      const WelfareReport r = expected_welfare(c.config, rule, t);
      const double floor = -c.config.cost_cap / (2.0 * c.config.benefit);
      for (double w : r.welfare) bound_violations += w < floor || w > 1.0;
      const auto [sa, sb] =
          point_mass_samples(c.config, t(0, Candidate::a), t(0, Candidate::b));
      const WelfareReport s = welfare_from_sample(c.config, rule, sa, sb, t);
      for (std::size_t k = 0; k < kNumTypes; ++k) {
        point_mass_gap = std::max(point_mass_gap, std::abs(s.welfare[k] - r.welfare[k]));
      }
    }
  }

  // Label swap is compared to 1e-14: A and B tallies are summed in different
  // orders, so the last bit can differ.
  const bool pass = swap_gap <= 1e-14 && conservation_failures == 0 && deterministic &&
                    bound_violations == 0 && point_mass_gap <= 1e-10;
  return {pass, fmt::format("label swap max diff {:.1e} (tol 1e-14); weight conservation "
                            "failures {}; thread determinism {}; welfare bound "
                            "violations {}; point-mass gap {:.1e} (tol 1e-10)",
                            swap_gap, conservation_failures,
                            deterministic ? "bit-exact" : "BROKEN", bound_violations,
                            point_mass_gap)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Verdict (*run)();
  };
  const Criterion criteria[] = {
      {"equilibrium golden values", golden_equilibria},
      {"fixed-point residual", fixed_point_residual},
      {"analytic / Monte Carlo / enumeration agreement", oracle_equivalence},
      {"deviation table consistency", deviation_consistency},
      {"equilibrium welfare and Gini by category", welfare_theory},
      {"welfare directions under observed turnout", observed_directions},
      {"property suites", properties},
  };
  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Verdict v;
    const double seconds = wall_seconds(c.run, v);
    std::printf("%s %d %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", index, c.name,
                v.detail.c_str(), seconds);
    std::fflush(stdout);
    failures += !v.pass;
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
