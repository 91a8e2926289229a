#pragma once

#include <span>
#include <vector>

#include "twotier/behavioral.hpp"
#include "twotier/model.hpp"

// Published reference values for the 18 laboratory voting configurations,
// stored at their printed precision (three decimals).
namespace twotier::reference {

struct Configuration {
  int id = 0;
  ElectorateConfig config;
  Category category = Category::ic;
  double printed_overall_support = 0.0;
};

// Group-1 turnout rates for one configuration.
struct TurnoutRow {
  int config_id = 0;
  double wta_a = 0.0;
  double wta_b = 0.0;
  double pr_a = 0.0;
  double pr_b = 0.0;

  GroupOneTurnout under(Rule rule) const {
    return rule == Rule::wta ? GroupOneTurnout{config_id, rule, wta_a, wta_b}
                             : GroupOneTurnout{config_id, rule, pr_a, pr_b};
  }
};

struct Deviation {
  int config_id = 0;
  Rule rule = Rule::wta;
  Camp camp = Camp::undefined;
  double value = 0.0;
};

// Category averages over the non-IC configurations.
struct WelfareRow {
  Category category = Category::global;
  Rule rule = Rule::wta;
  double majority_theory = 0.0;
  double majority_experiment = 0.0;
  double minority_theory = 0.0;
  double minority_experiment = 0.0;
  double gini_theory = 0.0;
  double gini_experiment = 0.0;
};

std::span<const Configuration> configurations();
// Throws MissingKey for ids outside 1..18.
const Configuration& configuration(int id);
ConfigTable config_table();

std::span<const TurnoutRow> equilibrium_turnout();
std::span<const TurnoutRow> experiment_turnout();
const TurnoutRow& equilibrium_turnout(int config_id);
const TurnoutRow& experiment_turnout(int config_id);

// Both rules, ordered by configuration then rule.
std::vector<GroupOneTurnout> equilibrium_turnout_points();
std::vector<ObservedTurnout> experiment_turnout_points();

// Experiment minus theory, per camp.
std::span<const Deviation> deviations();

std::span<const WelfareRow> welfare_rows();
const WelfareRow& welfare_row(Category category, Rule rule);

}  // namespace twotier::reference
