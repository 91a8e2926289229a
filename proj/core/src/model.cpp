#include "twotier/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "twotier/error.hpp"

namespace twotier {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

std::string_view to_string(Rule rule) {
  return rule == Rule::wta ? "WTA" : "PR";
}

std::string_view to_string(Candidate candidate) {
  return candidate == Candidate::a ? "A" : "B";
}

std::string_view to_string(TieConvention convention) {
  return convention == TieConvention::coin ? "coin" : "split";
}

std::string_view to_string(Category category) {
  switch (category) {
    case Category::ic:
      return "IC";
    case Category::global:
      return "Global";
    case Category::local:
      return "Local";
    case Category::both:
      return "Both";
  }
  return "?";
}

Rule parse_rule(std::string_view text) {
  const std::string s = lower(text);
  if (s == "wta") return Rule::wta;
  if (s == "pr") return Rule::pr;
  throw ParseError("unknown rule '" + std::string(text) + "' (expected wta|pr)");
}

Candidate parse_candidate(std::string_view text) {
  const std::string s = lower(text);
  if (s == "a") return Candidate::a;
  if (s == "b") return Candidate::b;
  throw ParseError("unknown candidate '" + std::string(text) +
                   "' (expected A|B)");
}

TieConvention parse_tie_convention(std::string_view text) {
  const std::string s = lower(text);
  if (s == "coin") return TieConvention::coin;
  if (s == "split") return TieConvention::split;
  throw ParseError("unknown tie convention '" + std::string(text) +
                   "' (expected coin|split)");
}

void ElectorateConfig::validate() const {
  for (std::size_t g = 0; g < group_sizes.size(); ++g) {
    if (group_sizes[g] < 1) {
      throw ValidationError("group_sizes[" + std::to_string(g) + "]",
                            "group size must be >= 1");
    }
    if (!is_probability(support_rates[g])) {
      throw ValidationError("support_rates[" + std::to_string(g) + "]",
                            "support rate must lie in [0, 1]");
    }
  }
  if (!(std::isfinite(benefit) && benefit > 0.0)) {
    throw ValidationError("benefit", "benefit must be positive");
  }
  if (!(std::isfinite(cost_cap) && cost_cap > 0.0)) {
    throw ValidationError("cost_cap", "cost cap must be positive");
  }
}

void StrategyProfile::validate() const {
  for (std::size_t i = 0; i < cutpoints_.size(); ++i) {
    if (!is_probability(cutpoints_[i])) {
      throw ValidationError("profile[" + std::to_string(i) + "]",
                            "cutpoint must lie in [0, 1]");
    }
  }
}

double overall_support_rate(const ElectorateConfig& config) {
  double weighted = 0.0;
  for (std::size_t g = 0; g < config.group_sizes.size(); ++g) {
    weighted += config.support_rates[g] * config.group_sizes[g];
  }
  return weighted / config.total_weight();
}

Category categorize(const ElectorateConfig& config) {
  const double p1 = config.support_rates[0];
  const double pbar = overall_support_rate(config);
  if (p1 > 0.5 + kCategoryTolerance || pbar > 0.5 + kCategoryTolerance) {
    throw OutsideStudiedRegion(
        "categories are defined only for p_1 <= 0.5 and overall support "
        "<= 0.5");
  }
  const bool local_even = std::abs(p1 - 0.5) <= kCategoryTolerance;
  const bool global_even = std::abs(pbar - 0.5) <= kCategoryTolerance;
  if (local_even && global_even) return Category::ic;
  if (local_even) return Category::global;
  if (global_even) return Category::local;
  return Category::both;
}

WeightAllocation allocate_weights(const GroupTally& tally, Rule rule,
                                  int group_size) {
  const Rational n(group_size);
  const Rational half(group_size, 2);
  const int cast = tally.votes_a + tally.votes_b;
  if (rule == Rule::wta) {
    if (tally.votes_a > tally.votes_b) return {n, Rational(0)};
    if (tally.votes_b > tally.votes_a) return {Rational(0), n};
    return {half, half};
  }
  if (cast == 0) return {half, half};
  const Rational weight_a(static_cast<std::int64_t>(group_size) * tally.votes_a,
                          cast);
  return {weight_a, n - weight_a};
}

std::vector<WeightOutcome> allocation_outcomes(const GroupTally& tally,
                                               Rule rule, int group_size,
                                               TieConvention convention) {
  const bool coin_tie = rule == Rule::wta &&
                        convention == TieConvention::coin &&
                        tally.votes_a == tally.votes_b;
  if (!coin_tie) return {{allocate_weights(tally, rule, group_size), 1.0}};
  const Rational n(group_size);
  return {{{n, Rational(0)}, 0.5}, {{Rational(0), n}, 0.5}};
}

double win_credit_a(const Rational& total_weight_a, int total_weight) {
  const Rational half(total_weight, 2);
  if (total_weight_a > half) return 1.0;
  if (total_weight_a == half) return 0.5;
  return 0.0;
}

ElectorateConfig swap_labels(const ElectorateConfig& config) {
  ElectorateConfig out = config;
  for (double& p : out.support_rates) p = 1.0 - p;
  return out;
}

StrategyProfile swap_labels(const StrategyProfile& profile) {
  StrategyProfile out;
  for (int g = 0; g < kNumGroups; ++g) {
    out(g, Candidate::a) = profile(g, Candidate::b);
    out(g, Candidate::b) = profile(g, Candidate::a);
  }
  return out;
}

GroupTally swap_labels(const GroupTally& tally) {
  return {tally.votes_b, tally.votes_a};
}

}  // namespace twotier
