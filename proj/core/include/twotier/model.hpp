#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twotier/rational.hpp"

namespace twotier {

inline constexpr int kNumGroups = 3;
inline constexpr int kNumTypes = 2 * kNumGroups;

enum class Rule { wta, pr };
enum class Candidate { a, b };

// How a within-group vote tie (including 0-0) is resolved under WTA.
//   coin:  the whole group weight goes to a fair-coin winner.
//   split: each candidate receives half the group weight.
// Under PR only the 0-0 case is a choice; it is always an even split.
enum class TieConvention { coin, split };

enum class Category { ic, global, local, both };

std::string_view to_string(Rule rule);
std::string_view to_string(Candidate candidate);
std::string_view to_string(TieConvention convention);
std::string_view to_string(Category category);

// Case-insensitive; throws ParseError on unknown names.
Rule parse_rule(std::string_view text);
Candidate parse_candidate(std::string_view text);
TieConvention parse_tie_convention(std::string_view text);

constexpr Candidate other(Candidate c) {
  return c == Candidate::a ? Candidate::b : Candidate::a;
}

// Flat index of the (group, candidate) voter type; groups are 0-based.
constexpr std::size_t type_index(int group, Candidate c) {
  return static_cast<std::size_t>(2 * group + (c == Candidate::a ? 0 : 1));
}

struct ElectorateConfig {
  std::array<int, kNumGroups> group_sizes{};
  std::array<double, kNumGroups> support_rates{};
  double benefit = 1000.0;
  double cost_cap = 200.0;
  std::string label;

  int total_weight() const {
    return group_sizes[0] + group_sizes[1] + group_sizes[2];
  }
  // Probability that a voter of group g prefers candidate c.
  double type_share(int group, Candidate c) const {
    const double p = support_rates[static_cast<std::size_t>(group)];
    return c == Candidate::a ? p : 1.0 - p;
  }

  // Throws ValidationError naming the offending field.
  void validate() const;

  friend bool operator==(const ElectorateConfig&,
                         const ElectorateConfig&) = default;
};

// Normalized cutpoints t_{g,I} = c_hat / c_bar, i.e. each type's
// probability of voting.
class StrategyProfile {
 public:
  StrategyProfile() = default;
  explicit StrategyProfile(double uniform) { cutpoints_.fill(uniform); }
  explicit StrategyProfile(const std::array<double, kNumTypes>& cutpoints)
      : cutpoints_(cutpoints) {}

  double& operator()(int group, Candidate c) {
    return cutpoints_[type_index(group, c)];
  }
  double operator()(int group, Candidate c) const {
    return cutpoints_[type_index(group, c)];
  }
  double& operator[](std::size_t i) { return cutpoints_[i]; }
  double operator[](std::size_t i) const { return cutpoints_[i]; }

  const std::array<double, kNumTypes>& values() const { return cutpoints_; }

  void validate() const;

  friend bool operator==(const StrategyProfile&,
                         const StrategyProfile&) = default;

 private:
  std::array<double, kNumTypes> cutpoints_{};
};

struct GroupTally {
  int votes_a = 0;
  int votes_b = 0;

  friend bool operator==(const GroupTally&, const GroupTally&) = default;
};

struct WeightAllocation {
  Rational weight_a;
  Rational weight_b;

  friend bool operator==(const WeightAllocation&,
                         const WeightAllocation&) = default;
};

// One branch of a group's allocation together with its probability.
struct WeightOutcome {
  WeightAllocation allocation;
  double probability = 1.0;
};

double overall_support_rate(const ElectorateConfig& config);

inline constexpr double kCategoryTolerance = 0.005;

// Throws OutsideStudiedRegion when p_1 or the overall support rate exceeds
// one half by more than the category tolerance.
Category categorize(const ElectorateConfig& config);

// Deterministic allocation. A WTA tie (including 0-0) and a PR 0-0 tally
// give each candidate half of the group weight.
WeightAllocation allocate_weights(const GroupTally& tally, Rule rule,
                                  int group_size);

// Allocation branches under a tie convention: one branch, or two
// equiprobable branches for a coin-resolved WTA tie.
std::vector<WeightOutcome> allocation_outcomes(const GroupTally& tally,
                                               Rule rule, int group_size,
                                               TieConvention convention);

// 1 for a strict weight majority, 0.5 on an exact tie, 0 otherwise.
double win_credit_a(const Rational& total_weight_a, int total_weight);

// Relabels candidates: p -> 1-p and t_{g,A} <-> t_{g,B}.
ElectorateConfig swap_labels(const ElectorateConfig& config);
StrategyProfile swap_labels(const StrategyProfile& profile);
GroupTally swap_labels(const GroupTally& tally);

}  // namespace twotier
