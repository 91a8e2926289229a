#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "twotier/model.hpp"
#include "twotier/pivot.hpp"

namespace twotier {

// Observed cutpoints of one voter type, in cost units [0, c_bar]. Read as
// the empirical distribution of a mixed cutpoint strategy.
struct CutpointSample {
  int group = 0;
  Candidate candidate = Candidate::a;
  std::vector<double> values;
};

// Which win probability enters a type's expected payoff.
enum class WinBasis {
  electorate,  // P(I wins) over the whole electorate, as published
  focal,       // P(I wins | one voter of the type plays that cutpoint)
};

// Population of the ex ante Gini coefficient.
enum class GiniPopulation {
  group_one,  // the two group-1 types, masses n_1 p_1 and n_1 (1 - p_1)
  all_types,  // all six types, masses n_g p_g and n_g (1 - p_g)
};

std::string_view to_string(WinBasis basis);
std::string_view to_string(GiniPopulation population);
WinBasis parse_win_basis(std::string_view text);
GiniPopulation parse_gini_population(std::string_view text);

struct WelfareOptions {
  WinBasis basis = WinBasis::electorate;
  GiniPopulation gini_population = GiniPopulation::group_one;
  PivotOptions pivot;
};

// Expected payoffs in units of the benefit.
struct WelfareReport {
  std::array<double, kNumTypes> welfare{};
  double win_prob_a = 0.0;
  // Group-1 camps; empty when the configuration has no majority camp.
  std::optional<double> majority;
  std::optional<double> minority;
  // Empty when some type has negative expected welfare.
  std::optional<double> gini;

  double operator()(int group, Candidate c) const {
    return welfare[type_index(group, c)];
  }
};

// w_{g,I} = P(I wins) - t_{g,I}^2 c_bar / (2 beta), the second term being
// E[c 1(c <= c_hat)] / beta for costs uniform on [0, c_bar].
WelfareReport expected_welfare(const ElectorateConfig& config, Rule rule,
                               const StrategyProfile& profile,
                               const WelfareOptions& options = {});

// Group 1 plays the mixed strategies described by the two samples; groups
// 2 and 3 follow `computer_profile`. Vote probabilities use the sample
// mean; the expected cost uses the sample second moment.
// Throws EmptySample or ValidationError.
WelfareReport welfare_from_sample(const ElectorateConfig& config, Rule rule,
                                  const CutpointSample& sample_a,
                                  const CutpointSample& sample_b,
                                  const StrategyProfile& computer_profile,
                                  const WelfareOptions& options = {});

// Point-mass samples at the given normalized cutpoints for group 1.
std::pair<CutpointSample, CutpointSample> point_mass_samples(
    const ElectorateConfig& config, double t_a, double t_b);

struct WelfarePoint {
  double welfare = 0.0;
  double mass = 0.0;
};

// Population-weighted Gini,
//   sum_i sum_j m_i m_j |w_i - w_j| / (2 (sum m)^2 mean(w)).
// Throws NegativeWelfare for negative values and ValidationError for
// non-positive masses.
double gini(std::span<const WelfarePoint> values);

// Gini over type welfare levels weighted by expected type masses;
// zero-mass types are skipped.
double ex_ante_gini(const ElectorateConfig& config, const WelfareReport& report,
                    GiniPopulation population = GiniPopulation::group_one);

}  // namespace twotier
