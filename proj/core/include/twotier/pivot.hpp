#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "twotier/model.hpp"

namespace twotier {

struct TallyEntry {
  GroupTally tally;
  double probability = 0.0;
};

// Trinomial law of (votes for A, votes for B) among n independent voters
// who vote A with probability p*t_a, B with probability (1-p)*t_b and
// abstain otherwise. Only outcomes with nonzero probability are listed.
struct TallyDistribution {
  int voters = 0;
  std::vector<TallyEntry> entries;
};

TallyDistribution tally_distribution(int voters, double p, double t_a,
                                     double t_b);

// Tally entries below this mass are dropped when `prune` is set.
inline constexpr double kPruneMass = 1e-15;

struct PivotOptions {
  TieConvention wta_ties = TieConvention::coin;
  bool prune = false;
};

// A's expected win credit when one focal voter of `group` votes A, abstains,
// or votes B, with every other voter following the profile.
struct FocalWinProbabilities {
  double vote_a = 0.0;
  double abstain = 0.0;
  double vote_b = 0.0;

  // Marginal gain in the candidate's win probability from voting, clamped
  // to [0, 1] to absorb rounding at the boundary.
  double pivot(Candidate c) const {
    const double gain = c == Candidate::a ? vote_a - abstain : abstain - vote_b;
    return std::clamp(gain, 0.0, 1.0);
  }
};

FocalWinProbabilities focal_win_probabilities(const ElectorateConfig& config,
                                              Rule rule,
                                              const StrategyProfile& profile,
                                              int group,
                                              const PivotOptions& options = {});

// Exact probability that A wins, ties counted at one half.
double win_probability_a(const ElectorateConfig& config, Rule rule,
                         const StrategyProfile& profile,
                         const PivotOptions& options = {});

double pivot_probability(const ElectorateConfig& config, Rule rule,
                         const StrategyProfile& profile, int group,
                         Candidate candidate, const PivotOptions& options = {});

struct PivotVector {
  std::array<double, kNumTypes> pi{};

  double operator()(int group, Candidate c) const {
    return pi[type_index(group, c)];
  }
};

PivotVector pivot_vector(const ElectorateConfig& config, Rule rule,
                         const StrategyProfile& profile,
                         const PivotOptions& options = {});

// All three focal decompositions in one pass; cheaper than three separate
// focal_win_probabilities calls.
std::array<FocalWinProbabilities, kNumGroups> focal_win_probabilities_all(
    const ElectorateConfig& config, Rule rule, const StrategyProfile& profile,
    const PivotOptions& options = {});

}  // namespace twotier
