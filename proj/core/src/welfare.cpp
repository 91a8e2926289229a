#include "twotier/welfare.hpp"

#include <cmath>
#include <string>

#include "twotier/behavioral.hpp"
#include "twotier/error.hpp"
#include "twotier/summation.hpp"

namespace twotier {

namespace {

// Per-type first and second moments of the normalized cutpoint.
struct CutpointMoments {
  std::array<double, kNumTypes> mean{};
  std::array<double, kNumTypes> second{};
};

WelfareReport welfare_with_moments(const ElectorateConfig& config, Rule rule,
                                   const CutpointMoments& moments,
                                   const WelfareOptions& options) {
  const StrategyProfile profile(moments.mean);
  const double cost_scale = config.cost_cap / (2.0 * config.benefit);

  WelfareReport report;
  report.win_prob_a = win_probability_a(config, rule, profile, options.pivot);
  std::array<FocalWinProbabilities, kNumGroups> focal{};
  if (options.basis == WinBasis::focal) {
    focal = focal_win_probabilities_all(config, rule, profile, options.pivot);
  }
  for (int g = 0; g < kNumGroups; ++g) {
    const FocalWinProbabilities& f = focal[g];
    for (Candidate c : {Candidate::a, Candidate::b}) {
      const std::size_t k = type_index(g, c);
      double win = c == Candidate::a ? report.win_prob_a : 1.0 - report.win_prob_a;
      if (options.basis == WinBasis::focal) {
        const double t = moments.mean[k];
        const double if_vote = c == Candidate::a ? f.vote_a : 1.0 - f.vote_b;
        const double if_abstain = c == Candidate::a ? f.abstain : 1.0 - f.abstain;
        win = t * if_vote + (1.0 - t) * if_abstain;
      }
      report.welfare[k] = win - moments.second[k] * cost_scale;
    }
  }

  // Camps are only defined inside the studied region.
  Camp camp_a = Camp::undefined;
  try {
    camp_a = camp_of(config, Candidate::a);
  } catch (const OutsideStudiedRegion&) {
  }
  if (camp_a != Camp::undefined) {
    const Candidate majority =
        camp_a == Camp::majority ? Candidate::a : Candidate::b;
    report.majority = report(0, majority);
    report.minority = report(0, other(majority));
  }
  try {
    report.gini = ex_ante_gini(config, report, options.gini_population);
  } catch (const NegativeWelfare&) {
    report.gini.reset();
  }
  return report;
}

void check_sample(const ElectorateConfig& config, const CutpointSample& sample,
                  Candidate expected) {
  const std::string field =
      "sample(1," + std::string(to_string(expected)) + ")";
  if (sample.values.empty()) {
    throw EmptySample(field + " has no values");
  }
  if (sample.group != 0 || sample.candidate != expected) {
    throw ValidationError(field, "sample must describe group 1 " +
                                     std::string(to_string(expected)) +
                                     "-supporters");
  }
  for (double v : sample.values) {
    if (!(v >= 0.0 && v <= config.cost_cap)) {
      throw ValidationError(field, "cutpoint outside [0, cost_cap]");
    }
  }
}

}  // namespace

std::string_view to_string(WinBasis basis) {
  return basis == WinBasis::electorate ? "electorate" : "focal";
}

std::string_view to_string(GiniPopulation population) {
  return population == GiniPopulation::group_one ? "group1" : "all";
}

WinBasis parse_win_basis(std::string_view text) {
  if (text == "electorate") return WinBasis::electorate;
  if (text == "focal") return WinBasis::focal;
  throw ParseError("unknown win basis '" + std::string(text) +
                   "' (expected electorate|focal)");
}

GiniPopulation parse_gini_population(std::string_view text) {
  if (text == "group1") return GiniPopulation::group_one;
  if (text == "all") return GiniPopulation::all_types;
  throw ParseError("unknown Gini population '" + std::string(text) +
                   "' (expected group1|all)");
}

WelfareReport expected_welfare(const ElectorateConfig& config, Rule rule,
                               const StrategyProfile& profile,
                               const WelfareOptions& options) {
  config.validate();
  profile.validate();
  CutpointMoments moments;
  for (std::size_t k = 0; k < kNumTypes; ++k) {
    moments.mean[k] = profile[k];
    moments.second[k] = profile[k] * profile[k];
  }
  return welfare_with_moments(config, rule, moments, options);
}

WelfareReport welfare_from_sample(const ElectorateConfig& config, Rule rule,
                                  const CutpointSample& sample_a,
                                  const CutpointSample& sample_b,
                                  const StrategyProfile& computer_profile,
                                  const WelfareOptions& options) {
  config.validate();
  computer_profile.validate();
  check_sample(config, sample_a, Candidate::a);
  check_sample(config, sample_b, Candidate::b);

  CutpointMoments moments;
  for (std::size_t k = 0; k < kNumTypes; ++k) {
    moments.mean[k] = computer_profile[k];
    moments.second[k] = computer_profile[k] * computer_profile[k];
  }
  for (const CutpointSample* sample : {&sample_a, &sample_b}) {
    CompensatedSum first;
    CompensatedSum second;
    for (double v : sample->values) {
      const double t = v / config.cost_cap;
      first += t;
      second += t * t;
    }
    const double count = static_cast<double>(sample->values.size());
    const std::size_t k = type_index(0, sample->candidate);
    moments.mean[k] = first.value() / count;
    moments.second[k] = second.value() / count;
  }
  return welfare_with_moments(config, rule, moments, options);
}

std::pair<CutpointSample, CutpointSample> point_mass_samples(
    const ElectorateConfig& config, double t_a, double t_b) {
  return {CutpointSample{0, Candidate::a, {t_a * config.cost_cap}},
          CutpointSample{0, Candidate::b, {t_b * config.cost_cap}}};
}

double gini(std::span<const WelfarePoint> values) {
  CompensatedSum total_mass;
  CompensatedSum weighted;
  for (const WelfarePoint& v : values) {
    if (!(v.mass > 0.0)) {
      throw ValidationError("mass", "population masses must be positive");
    }
    if (v.welfare < 0.0) {
      throw NegativeWelfare("Gini coefficient is undefined for negative "
                            "welfare without a shift");
    }
    total_mass += v.mass;
    weighted += v.mass * v.welfare;
  }
  const double mass = total_mass.value();
  if (values.empty() || weighted.value() == 0.0) return 0.0;
  const double mean = weighted.value() / mass;

  CompensatedSum spread;
  for (const WelfarePoint& x : values) {
    for (const WelfarePoint& y : values) {
      spread += x.mass * y.mass * std::abs(x.welfare - y.welfare);
    }
  }
  return spread.value() / (2.0 * mass * mass * mean);
}

double ex_ante_gini(const ElectorateConfig& config, const WelfareReport& report,
                    GiniPopulation population) {
  std::vector<WelfarePoint> points;
  points.reserve(kNumTypes);
  const int groups = population == GiniPopulation::group_one ? 1 : kNumGroups;
  for (int g = 0; g < groups; ++g) {
    for (Candidate c : {Candidate::a, Candidate::b}) {
      const double mass = config.group_sizes[g] * config.type_share(g, c);
      if (mass > 0.0) points.push_back({report(g, c), mass});
    }
  }
  return gini(points);
}

}  // namespace twotier
