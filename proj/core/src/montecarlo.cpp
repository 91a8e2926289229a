#include "twotier/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <vector>

#include "twotier/error.hpp"
#include "twotier/parallel.hpp"
#include "twotier/summation.hpp"

namespace twotier {

namespace {

struct Moments {
  CompensatedSum sum;
  CompensatedSum sum_sq;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
  }
  void merge(const Moments& other) {
    sum += other.sum;
    sum_sq += other.sum_sq;
  }
  Estimate finish(std::int64_t n, double scale = 1.0) const {
    const double count = static_cast<double>(n);
    const double mean = sum.value() / count;
    double var = 0.0;
    if (n > 1) {
      var = (sum_sq.value() - count * mean * mean) / (count - 1.0);
      var = std::max(var, 0.0);
    }
    return {mean * scale, std::sqrt(var / count) * std::abs(scale)};
  }
};

// Rule application with coin-resolved ties; coins are drawn by the caller so
// that paired evaluations share them.
double resolve_credit_a(const ElectorateConfig& config, Rule rule,
                        TieConvention wta_ties,
                        const std::array<GroupTally, kNumGroups>& tallies,
                        const std::array<double, kNumGroups>& group_coins,
                        double final_coin) {
  Rational total_a(0);
  for (int g = 0; g < kNumGroups; ++g) {
    const GroupTally& tally = tallies[g];
    const int n = config.group_sizes[g];
    if (rule == Rule::wta && wta_ties == TieConvention::coin &&
        tally.votes_a == tally.votes_b) {
      if (group_coins[g] < 0.5) total_a += Rational(n);
      continue;
    }
    total_a += allocate_weights(tally, rule, n).weight_a;
  }
  const double credit = win_credit_a(total_a, config.total_weight());
  if (credit == 0.5) return final_coin < 0.5 ? 1.0 : 0.0;
  return credit;
}

template <typename BlockFn>
std::vector<typename std::invoke_result_t<BlockFn, std::int64_t, std::int64_t>>
run_blocks(std::int64_t trials, unsigned threads, BlockFn&& block_fn) {
  using Acc = std::invoke_result_t<BlockFn, std::int64_t, std::int64_t>;
  const std::int64_t blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<Acc> out(static_cast<std::size_t>(blocks));
  parallel_for(out.size(), threads, [&](std::size_t b) {
    const std::int64_t begin = static_cast<std::int64_t>(b) * kTrialsPerBlock;
    const std::int64_t end = std::min(trials, begin + kTrialsPerBlock);
    out[b] = block_fn(begin, end);
  });
  return out;
}

void check(const ElectorateConfig& config, const StrategyProfile& profile,
           const SimOptions& options) {
  config.validate();
  profile.validate();
  options.validate();
}

}  // namespace

std::string_view to_string(CostModel model) {
  return model == CostModel::continuous ? "continuous" : "discrete";
}

CostModel parse_cost_model(std::string_view text) {
  if (text == "continuous") return CostModel::continuous;
  if (text == "discrete") return CostModel::discrete;
  throw ParseError("unknown cost model '" + std::string(text) +
                   "' (expected continuous|discrete)");
}

void SimOptions::validate() const {
  if (trials < 1) throw InvalidOptions("trials must be >= 1");
}

ElectionOutcome simulate_election(const ElectorateConfig& config, Rule rule,
                                  const StrategyProfile& profile,
                                  Xoshiro256& rng, CostModel cost_model,
                                  TieConvention wta_ties,
                                  std::optional<FocalOverride> focal) {
  ElectionOutcome out;
  // Cost of each voter who turned out, per type, to settle payoffs once the
  // winner is known.
  std::array<double, kNumTypes> cost_paid{};

  for (int g = 0; g < kNumGroups; ++g) {
    const int n = config.group_sizes[g];
    const double p = config.support_rates[g];
    for (int i = 0; i < n; ++i) {
      // Both draws are consumed for every voter, focal or not, so paired
      // runs stay aligned.
      const double u_pref = rng.uniform();
      const double u_cost = rng.uniform();

      Candidate pref = u_pref < p ? Candidate::a : Candidate::b;
      const double t = profile(g, pref);
      double cost = 0.0;
      bool votes = false;
      if (cost_model == CostModel::continuous) {
        cost = u_cost * config.cost_cap;
        votes = u_cost <= t;
      } else {
        const int level = std::min(
            kDiscreteCostLevels - 1,
            static_cast<int>(u_cost * kDiscreteCostLevels));
        cost = level * config.cost_cap / (kDiscreteCostLevels - 1);
        votes = level <= static_cast<int>(std::floor(
                             t * (kDiscreteCostLevels - 1) + 1e-9));
      }
      if (focal && focal->group == g && i == 0) {
        pref = focal->candidate;
        votes = focal->votes;
      }

      const std::size_t k = type_index(g, pref);
      ++out.voters[k];
      if (votes) {
        ++out.votes[k];
        cost_paid[k] += cost;
        if (pref == Candidate::a) {
          ++out.tallies[g].votes_a;
        } else {
          ++out.tallies[g].votes_b;
        }
      }
    }
  }

  std::array<double, kNumGroups> group_coins{};
  for (double& coin : group_coins) coin = rng.uniform();
  const double final_coin = rng.uniform();
  out.credit_a = resolve_credit_a(config, rule, wta_ties, out.tallies,
                                  group_coins, final_coin);

  for (int g = 0; g < kNumGroups; ++g) {
    for (Candidate c : {Candidate::a, Candidate::b}) {
      const std::size_t k = type_index(g, c);
      const double wins = c == Candidate::a ? out.credit_a : 1.0 - out.credit_a;
      out.payoff_sum[k] =
          wins * out.voters[k] - cost_paid[k] / config.benefit;
    }
  }
  return out;
}

SimReport estimate(const ElectorateConfig& config, Rule rule,
                   const StrategyProfile& profile, const SimOptions& options) {
  check(config, profile, options);

  struct Block {
    Moments win;
    std::array<Moments, kNumTypes> payoff;
    std::array<Moments, kNumTypes> turnout;
  };
  const auto blocks = run_blocks(
      options.trials, options.threads,
      [&](std::int64_t begin, std::int64_t end) {
        Block acc;
        for (std::int64_t trial = begin; trial < end; ++trial) {
          Xoshiro256 rng = Xoshiro256::substream(
              options.seed, static_cast<std::uint64_t>(trial));
          const ElectionOutcome outcome = simulate_election(
              config, rule, profile, rng, options.cost_model, options.wta_ties);
          acc.win.add(outcome.credit_a);
          for (int g = 0; g < kNumGroups; ++g) {
            for (Candidate c : {Candidate::a, Candidate::b}) {
              const std::size_t k = type_index(g, c);
              acc.payoff[k].add(outcome.payoff_sum[k]);
              acc.turnout[k].add(static_cast<double>(outcome.votes[k]) /
                                 config.group_sizes[g]);
            }
          }
        }
        return acc;
      });

  Block total;
  for (const Block& block : blocks) {
    total.win.merge(block.win);
    for (std::size_t k = 0; k < kNumTypes; ++k) {
      total.payoff[k].merge(block.payoff[k]);
      total.turnout[k].merge(block.turnout[k]);
    }
  }

  SimReport report;
  report.trials = options.trials;
  report.win_prob_a = total.win.finish(options.trials);
  for (int g = 0; g < kNumGroups; ++g) {
    for (Candidate c : {Candidate::a, Candidate::b}) {
      const std::size_t k = type_index(g, c);
      // E[sum of type-k payoffs] = n_g * share * E[payoff | type k].
      const double mass = config.group_sizes[g] * config.type_share(g, c);
      if (mass > 0.0) {
        report.welfare[k] = total.payoff[k].finish(options.trials, 1.0 / mass);
      }
      report.turnout[k] = total.turnout[k].finish(options.trials);
    }
  }
  return report;
}

Estimate estimate_pivot(const ElectorateConfig& config, Rule rule,
                        const StrategyProfile& profile, int group,
                        Candidate candidate, const SimOptions& options) {
  check(config, profile, options);
  if (group < 0 || group >= kNumGroups) {
    throw ValidationError("group", "group index out of range");
  }
  const auto blocks = run_blocks(
      options.trials, options.threads,
      [&](std::int64_t begin, std::int64_t end) {
        Moments acc;
        for (std::int64_t trial = begin; trial < end; ++trial) {
          const Xoshiro256 base = Xoshiro256::substream(
              options.seed, static_cast<std::uint64_t>(trial));
          Xoshiro256 rng_vote = base;
          Xoshiro256 rng_abstain = base;
          const double with_vote =
              simulate_election(config, rule, profile, rng_vote,
                                options.cost_model, options.wta_ties,
                                FocalOverride{group, candidate, true})
                  .credit_a;
          const double without_vote =
              simulate_election(config, rule, profile, rng_abstain,
                                options.cost_model, options.wta_ties,
                                FocalOverride{group, candidate, false})
                  .credit_a;
          const double gain = with_vote - without_vote;
          acc.add(candidate == Candidate::a ? gain : -gain);
        }
        return acc;
      });
  Moments total;
  for (const Moments& block : blocks) total.merge(block);
  return total.finish(options.trials);
}

}  // namespace twotier
