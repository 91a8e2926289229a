#pragma once

#include <map>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "twotier/model.hpp"

namespace twotier {

enum class Camp { majority, minority, undefined };
enum class Effect { behavioral_bandwagon, titanic, none };

std::string_view to_string(Camp camp);
std::string_view to_string(Effect effect);

// Candidate A is the minority in every non-IC configuration of the studied
// region (p_1 <= 0.5 and overall support <= 0.5); IC has no camps.
Camp camp_of(const ElectorateConfig& config, Candidate candidate);

// Group-1 turnout for one (configuration, rule) pair, either observed or
// predicted.
struct GroupOneTurnout {
  int config_id = 0;
  Rule rule = Rule::wta;
  double t_a = 0.0;
  double t_b = 0.0;

  double operator()(Candidate c) const { return c == Candidate::a ? t_a : t_b; }
};

using ObservedTurnout = GroupOneTurnout;

struct DeviationRecord {
  int config_id = 0;
  Rule rule = Rule::wta;
  Camp camp = Camp::undefined;
  double deviation = 0.0;  // observed - theory
  Effect effect = Effect::none;
};

Effect classify(Camp camp, double deviation);

using ConfigTable = std::map<int, ElectorateConfig>;

// One record per camp for each observed (config, rule) outside IC.
// Throws MissingKey when theory or configuration is missing for a key.
std::vector<DeviationRecord> deviation_table(
    std::span<const GroupOneTurnout> theory,
    std::span<const ObservedTurnout> observed, const ConfigTable& configs);

struct CategorySummary {
  Category category = Category::ic;
  Rule rule = Rule::wta;
  Camp camp = Camp::undefined;
  double mean_deviation = 0.0;
  int count = 0;
};

// Mean deviation per (category, rule, camp), ordered by category, rule,
// then camp (majority first).
std::vector<CategorySummary> category_summary(
    std::span<const DeviationRecord> records, const ConfigTable& configs);

}  // namespace twotier
