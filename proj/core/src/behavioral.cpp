#include "twotier/behavioral.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "twotier/error.hpp"
#include "twotier/summation.hpp"

namespace twotier {

std::string_view to_string(Camp camp) {
  switch (camp) {
    case Camp::majority:
      return "majority";
    case Camp::minority:
      return "minority";
    case Camp::undefined:
      return "undefined";
  }
  return "?";
}

std::string_view to_string(Effect effect) {
  switch (effect) {
    case Effect::behavioral_bandwagon:
      return "behavioral_bandwagon";
    case Effect::titanic:
      return "titanic";
    case Effect::none:
      return "none";
  }
  return "?";
}

Camp camp_of(const ElectorateConfig& config, Candidate candidate) {
  if (categorize(config) == Category::ic) return Camp::undefined;
  return candidate == Candidate::a ? Camp::minority : Camp::majority;
}

Effect classify(Camp camp, double deviation) {
  if (camp == Camp::majority && deviation > 0.0) {
    return Effect::behavioral_bandwagon;
  }
  if (camp == Camp::minority && deviation < 0.0) return Effect::titanic;
  return Effect::none;
}

std::vector<DeviationRecord> deviation_table(
    std::span<const GroupOneTurnout> theory,
    std::span<const ObservedTurnout> observed, const ConfigTable& configs) {
  std::vector<DeviationRecord> records;
  for (const ObservedTurnout& obs : observed) {
    const std::string key = "config " + std::to_string(obs.config_id) + " " +
                            std::string(to_string(obs.rule));
    const auto predicted = std::find_if(
        theory.begin(), theory.end(), [&](const GroupOneTurnout& t) {
          return t.config_id == obs.config_id && t.rule == obs.rule;
        });
    if (predicted == theory.end()) {
      throw MissingKey("no theory turnout for " + key);
    }
    const auto config = configs.find(obs.config_id);
    if (config == configs.end()) {
      throw MissingKey("no configuration for " + key);
    }
    // Majority first, matching the published panel order.
    for (Candidate c : {Candidate::b, Candidate::a}) {
      const Camp camp = camp_of(config->second, c);
      if (camp == Camp::undefined) continue;
      const double deviation = obs(c) - (*predicted)(c);
      records.push_back(
          {obs.config_id, obs.rule, camp, deviation, classify(camp, deviation)});
    }
  }
  return records;
}

std::vector<CategorySummary> category_summary(
    std::span<const DeviationRecord> records, const ConfigTable& configs) {
  struct Bucket {
    CompensatedSum total;
    int count = 0;
  };
  // Key ordering: category, rule, camp (majority < minority).
  std::map<std::tuple<Category, Rule, Camp>, Bucket> buckets;
  for (const DeviationRecord& r : records) {
    if (r.camp == Camp::undefined) continue;
    const auto config = configs.find(r.config_id);
    if (config == configs.end()) {
      throw MissingKey("no configuration " + std::to_string(r.config_id));
    }
    const Category category = categorize(config->second);
    if (category == Category::ic) continue;
    Bucket& bucket = buckets[{category, r.rule, r.camp}];
    bucket.total += r.deviation;
    ++bucket.count;
  }
  std::vector<CategorySummary> out;
  out.reserve(buckets.size());
  for (const auto& [key, bucket] : buckets) {
    const auto& [category, rule, camp] = key;
    out.push_back({category, rule, camp, bucket.total.value() / bucket.count,
                   bucket.count});
  }
  return out;
}

}  // namespace twotier
