#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "twotier/model.hpp"
#include "twotier/rng.hpp"

namespace twotier {

enum class CostModel {
  continuous,  // uniform on [0, c_bar]
  discrete,    // uniform on {0, 1, ..., 200} scaled by c_bar / 200
};

inline constexpr int kDiscreteCostLevels = 201;

std::string_view to_string(CostModel model);
CostModel parse_cost_model(std::string_view text);

struct SimOptions {
  std::int64_t trials = 100000;
  std::uint64_t seed = 0;
  CostModel cost_model = CostModel::continuous;
  TieConvention wta_ties = TieConvention::coin;
  unsigned threads = 0;  // 0 = default_thread_count()

  void validate() const;
};

// Trials are grouped into fixed blocks; each block is reduced in trial
// order and blocks are merged in block order, so estimates are bit-identical
// for any thread count.
inline constexpr std::int64_t kTrialsPerBlock = 1 << 14;

// Realized outcome of one election. Payoffs are in units of the benefit:
// 1 if the voter's candidate wins, minus cost / benefit if they voted.
struct ElectionOutcome {
  double credit_a = 0.0;  // 0 or 1 after every coin is resolved
  std::array<double, kNumTypes> payoff_sum{};
  std::array<int, kNumTypes> voters{};
  std::array<int, kNumTypes> votes{};
  std::array<GroupTally, kNumGroups> tallies{};
};

// Forces one voter of `group` (the focal voter) to be a `candidate`
// supporter who votes or abstains regardless of the draws.
struct FocalOverride {
  int group = 0;
  Candidate candidate = Candidate::a;
  bool votes = true;
};

// Draws every voter's preference and cost, applies the cutpoint rule and
// resolves group and overall ties by explicit fair coins.
ElectionOutcome simulate_election(const ElectorateConfig& config, Rule rule,
                                  const StrategyProfile& profile,
                                  Xoshiro256& rng, CostModel cost_model,
                                  TieConvention wta_ties = TieConvention::coin,
                                  std::optional<FocalOverride> focal = {});

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct SimReport {
  Estimate win_prob_a;
  // Expected payoff of a voter of each type, in units of the benefit. Zero
  // (with zero error) for types that have no mass.
  std::array<Estimate, kNumTypes> welfare{};
  // Mean share of group g that turned out for candidate I; its expectation
  // is share_I * t_{g,I}.
  std::array<Estimate, kNumTypes> turnout{};
  std::int64_t trials = 0;
};

SimReport estimate(const ElectorateConfig& config, Rule rule,
                   const StrategyProfile& profile, const SimOptions& options);

// Paired estimator of pi_{g,I}: each trial evaluates the same draws twice,
// with the focal voter forced to vote and forced to abstain, and records the
// difference in I's win credit.
Estimate estimate_pivot(const ElectorateConfig& config, Rule rule,
                        const StrategyProfile& profile, int group,
                        Candidate candidate, const SimOptions& options);

}  // namespace twotier
