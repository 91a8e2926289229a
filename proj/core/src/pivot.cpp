#include "twotier/pivot.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twotier/error.hpp"
#include "twotier/summation.hpp"

namespace twotier {

namespace {

struct WeightPoint {
  Rational weight_a;
  double probability = 0.0;
};

// Sorted by weight_a with unique keys.
using WeightDistribution = std::vector<WeightPoint>;

WeightDistribution merge_sorted(std::vector<WeightPoint> points) {
  std::sort(points.begin(), points.end(),
            [](const WeightPoint& x, const WeightPoint& y) {
              return x.weight_a < y.weight_a;
            });
  WeightDistribution out;
  out.reserve(points.size());
  std::size_t i = 0;
  while (i < points.size()) {
    CompensatedSum mass;
    const Rational key = points[i].weight_a;
    for (; i < points.size() && points[i].weight_a == key; ++i) {
      mass += points[i].probability;
    }
    out.push_back({key, mass.value()});
  }
  return out;
}

WeightDistribution group_weights(const TallyDistribution& dist, int extra_a,
                                 int extra_b, Rule rule, int group_size,
                                 const PivotOptions& options) {
  std::vector<WeightPoint> points;
  points.reserve(dist.entries.size() + 1);
  for (const TallyEntry& entry : dist.entries) {
    if (options.prune && entry.probability < kPruneMass) continue;
    const GroupTally tally{entry.tally.votes_a + extra_a,
                           entry.tally.votes_b + extra_b};
    for (const WeightOutcome& branch :
         allocation_outcomes(tally, rule, group_size, options.wta_ties)) {
      points.push_back({branch.allocation.weight_a,
                        entry.probability * branch.probability});
    }
  }
  return merge_sorted(std::move(points));
}

WeightDistribution convolve(const WeightDistribution& x,
                            const WeightDistribution& y) {
  std::vector<WeightPoint> points;
  points.reserve(x.size() * y.size());
  for (const WeightPoint& u : x) {
    for (const WeightPoint& v : y) {
      points.push_back({u.weight_a + v.weight_a, u.probability * v.probability});
    }
  }
  return merge_sorted(std::move(points));
}

// Weight distribution of "everyone else" with tail masses, answering
// E[credit_A | the remaining group contributes weight w].
class CreditTable {
 public:
  CreditTable(WeightDistribution others, int total_weight)
      : others_(std::move(others)),
        tail_(others_.size() + 1, 0.0),
        half_(total_weight, 2) {
    CompensatedSum running;
    for (std::size_t i = others_.size(); i-- > 0;) {
      running += others_[i].probability;
      tail_[i] = running.value();
    }
  }

  double credit_given(const Rational& weight_a) const {
    const Rational threshold = half_ - weight_a;
    const auto it = std::upper_bound(
        others_.begin(), others_.end(), threshold,
        [](const Rational& h, const WeightPoint& p) { return h < p.weight_a; });
    const auto idx = static_cast<std::size_t>(it - others_.begin());
    double credit = tail_[idx];
    if (idx > 0 && others_[idx - 1].weight_a == threshold) {
      credit += 0.5 * others_[idx - 1].probability;
    }
    return credit;
  }

  double expected_credit(const WeightDistribution& group) const {
    CompensatedSum total;
    for (const WeightPoint& point : group) {
      total += point.probability * credit_given(point.weight_a);
    }
    return total.value();
  }

 private:
  WeightDistribution others_;
  std::vector<double> tail_;
  Rational half_;
};

void check_inputs(const ElectorateConfig& config,
                  const StrategyProfile& profile) {
  config.validate();
  profile.validate();
}

void check_group(int group) {
  if (group < 0 || group >= kNumGroups) {
    throw ValidationError("group", "group index " + std::to_string(group) +
                                       " out of range");
  }
}

TallyDistribution group_tally(const ElectorateConfig& config,
                              const StrategyProfile& profile, int group,
                              int voters) {
  return tally_distribution(voters, config.support_rates[group],
                            profile(group, Candidate::a),
                            profile(group, Candidate::b));
}

std::array<WeightDistribution, kNumGroups> full_group_weights(
    const ElectorateConfig& config, Rule rule, const StrategyProfile& profile,
    const PivotOptions& options) {
  std::array<WeightDistribution, kNumGroups> weights;
  for (int g = 0; g < kNumGroups; ++g) {
    const int n = config.group_sizes[g];
    weights[g] = group_weights(group_tally(config, profile, g, n), 0, 0, rule,
                               n, options);
  }
  return weights;
}

FocalWinProbabilities focal_given_others(const ElectorateConfig& config,
                                         Rule rule,
                                         const StrategyProfile& profile,
                                         int group, const CreditTable& table,
                                         const PivotOptions& options) {
  const int n = config.group_sizes[group];
  if (n < 1) {
    throw ValidationError("group_sizes[" + std::to_string(group) + "]",
                          "pivot probability needs a nonempty group");
  }
  const TallyDistribution rest = group_tally(config, profile, group, n - 1);
  FocalWinProbabilities out;
  out.vote_a =
      table.expected_credit(group_weights(rest, 1, 0, rule, n, options));
  out.abstain =
      table.expected_credit(group_weights(rest, 0, 0, rule, n, options));
  out.vote_b =
      table.expected_credit(group_weights(rest, 0, 1, rule, n, options));
  return out;
}

std::array<int, 2> other_groups(int group) {
  switch (group) {
    case 0:
      return {1, 2};
    case 1:
      return {0, 2};
    default:
      return {0, 1};
  }
}

}  // namespace

TallyDistribution tally_distribution(int voters, double p, double t_a,
                                     double t_b) {
  if (voters < 0) throw ValidationError("voters", "must be nonnegative");
  const double q_a = p * t_a;
  const double q_b = (1.0 - p) * t_b;
  const double q_0 = std::max(0.0, 1.0 - q_a - q_b);

  // choose[k] = C(voters, k), built by the multiplicative recurrence.
  std::vector<double> choose(static_cast<std::size_t>(voters) + 1, 1.0);
  for (int k = 1; k <= voters; ++k) {
    choose[k] = choose[k - 1] * (voters - k + 1) / k;
  }

  TallyDistribution dist;
  dist.voters = voters;
  dist.entries.reserve(static_cast<std::size_t>(voters + 1) * (voters + 2) / 2);
  for (int a = 0; a <= voters; ++a) {
    const double head = choose[a] * std::pow(q_a, a);
    if (head == 0.0) continue;
    // C(voters - a, b) via its own recurrence.
    double inner = 1.0;
    const int rest = voters - a;
    for (int b = 0; b <= rest; ++b) {
      if (b > 0) inner = inner * (rest - b + 1) / b;
      const double prob =
          head * inner * std::pow(q_b, b) * std::pow(q_0, rest - b);
      if (prob > 0.0) dist.entries.push_back({{a, b}, prob});
    }
  }
  return dist;
}

std::array<FocalWinProbabilities, kNumGroups> focal_win_probabilities_all(
    const ElectorateConfig& config, Rule rule, const StrategyProfile& profile,
    const PivotOptions& options) {
  check_inputs(config, profile);
  const auto weights = full_group_weights(config, rule, profile, options);
  std::array<FocalWinProbabilities, kNumGroups> out;
  for (int g = 0; g < kNumGroups; ++g) {
    const auto [h1, h2] = other_groups(g);
    const CreditTable table(convolve(weights[h1], weights[h2]),
                            config.total_weight());
    out[g] = focal_given_others(config, rule, profile, g, table, options);
  }
  return out;
}

FocalWinProbabilities focal_win_probabilities(const ElectorateConfig& config,
                                              Rule rule,
                                              const StrategyProfile& profile,
                                              int group,
                                              const PivotOptions& options) {
  check_inputs(config, profile);
  check_group(group);
  const auto weights = full_group_weights(config, rule, profile, options);
  const auto [h1, h2] = other_groups(group);
  const CreditTable table(convolve(weights[h1], weights[h2]),
                          config.total_weight());
  return focal_given_others(config, rule, profile, group, table, options);
}

double win_probability_a(const ElectorateConfig& config, Rule rule,
                         const StrategyProfile& profile,
                         const PivotOptions& options) {
  check_inputs(config, profile);
  const auto weights = full_group_weights(config, rule, profile, options);
  const CreditTable table(convolve(weights[1], weights[2]),
                          config.total_weight());
  return table.expected_credit(weights[0]);
}

double pivot_probability(const ElectorateConfig& config, Rule rule,
                         const StrategyProfile& profile, int group,
                         Candidate candidate, const PivotOptions& options) {
  return focal_win_probabilities(config, rule, profile, group, options)
      .pivot(candidate);
}

PivotVector pivot_vector(const ElectorateConfig& config, Rule rule,
                         const StrategyProfile& profile,
                         const PivotOptions& options) {
  const auto focal = focal_win_probabilities_all(config, rule, profile, options);
  PivotVector out;
  for (int g = 0; g < kNumGroups; ++g) {
    for (Candidate c : {Candidate::a, Candidate::b}) {
      out.pi[type_index(g, c)] = focal[g].pivot(c);
    }
  }
  return out;
}

}  // namespace twotier
