#include "twotier/reference_data.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "twotier/error.hpp"

namespace twotier::reference {

namespace {

Configuration make(int id, std::array<int, 3> n, std::array<double, 3> p,
                   Category category, double printed_pbar) {
  ElectorateConfig config;
  config.group_sizes = n;
  config.support_rates = p;
  config.benefit = 1000.0;
  config.cost_cap = 200.0;
  config.label = "config " + std::to_string(id);
  return {id, config, category, printed_pbar};
}

using C = Category;

// Voter configurations: sizes, support rates for A, category, and the
// overall support rate as printed (rounded to two decimals).
const std::array<Configuration, 18> kConfigurations = {
    make(1, {21, 21, 21}, {0.5, 0.5, 0.5}, C::ic, 0.5),
    make(2, {21, 21, 7}, {0.5, 0.5, 0.5}, C::ic, 0.5),
    make(3, {21, 21, 3}, {0.5, 0.5, 0.5}, C::ic, 0.5),
    make(4, {21, 21, 21}, {0.5, 0.5, 0.35}, C::global, 0.45),
    make(5, {21, 21, 21}, {0.1, 0.7, 0.7}, C::local, 0.5),
    make(6, {21, 21, 21}, {0.35, 0.5, 0.5}, C::both, 0.45),
    make(7, {21, 21, 7}, {0.5, 0.5, 0.35}, C::global, 0.48),
    make(8, {21, 21, 7}, {0.48, 0.48, 0.48}, C::both, 0.48),
    make(9, {21, 21, 7}, {0.45, 0.5, 0.5}, C::both, 0.48),
    make(10, {7, 7, 7}, {0.5, 0.5, 0.5}, C::ic, 0.5),
    make(11, {7, 21, 21}, {0.5, 0.5, 0.5}, C::ic, 0.5),
    make(12, {7, 21, 21}, {0.15, 0.5, 0.5}, C::both, 0.45),
    make(13, {7, 21, 21}, {0.1, 0.57, 0.57}, C::local, 0.5),
    make(14, {7, 7, 7}, {0.5, 0.5, 0.35}, C::global, 0.45),
    make(15, {7, 7, 7}, {0.1, 0.7, 0.7}, C::local, 0.5),
    make(16, {7, 7, 7}, {0.35, 0.5, 0.5}, C::both, 0.45),
    make(17, {7, 21, 21}, {0.48, 0.48, 0.48}, C::both, 0.48),
    make(18, {7, 21, 21}, {0.5, 0.5, 0.45}, C::global, 0.48),
};

// Equilibrium group-1 turnout: t_A^WTA, t_B^WTA, t_A^PR, t_B^PR.
const std::array<TurnoutRow, 18> kEquilibrium = {{
    {1, 0.359, 0.359, 0.391, 0.391},
    {2, 0.359, 0.359, 0.424, 0.424},
    {3, 0.359, 0.359, 0.442, 0.442},
    {4, 0.359, 0.359, 0.367, 0.383},
    {5, 0.283, 0.144, 0.753, 0.250},
    {6, 0.368, 0.301, 0.437, 0.333},
    {7, 0.359, 0.359, 0.417, 0.425},
    {8, 0.363, 0.353, 0.427, 0.416},
    {9, 0.368, 0.345, 0.441, 0.405},
    {10, 0.516, 0.516, 0.553, 0.553},
    {11, 0.516, 0.516, 0.421, 0.421},
    {12, 0.585, 0.344, 0.630, 0.301},
    {13, 0.588, 0.307, 0.737, 0.287},
    {14, 0.516, 0.516, 0.526, 0.555},
    {15, 0.538, 0.284, 1.000, 0.354},
    {16, 0.553, 0.455, 0.629, 0.480},
    {17, 0.521, 0.508, 0.424, 0.414},
    {18, 0.516, 0.516, 0.415, 0.422},
}};

// Laboratory averages of group-1 turnout, same column order.
const std::array<TurnoutRow, 18> kExperiment = {{
    {1, 0.449, 0.473, 0.495, 0.448},
    {2, 0.471, 0.493, 0.504, 0.462},
    {3, 0.481, 0.477, 0.489, 0.467},
    {4, 0.340, 0.486, 0.321, 0.496},
    {5, 0.071, 0.291, 0.103, 0.457},
    {6, 0.184, 0.444, 0.218, 0.522},
    {7, 0.410, 0.440, 0.415, 0.491},
    {8, 0.340, 0.465, 0.301, 0.471},
    {9, 0.288, 0.494, 0.314, 0.559},
    {10, 0.420, 0.532, 0.485, 0.451},
    {11, 0.410, 0.408, 0.434, 0.375},
    {12, 0.188, 0.407, 0.113, 0.428},
    {13, 0.121, 0.309, 0.161, 0.369},
    {14, 0.329, 0.543, 0.306, 0.489},
    {15, 0.162, 0.309, 0.195, 0.455},
    {16, 0.232, 0.530, 0.175, 0.540},
    {17, 0.322, 0.472, 0.285, 0.392},
    {18, 0.370, 0.479, 0.362, 0.367},
}};

constexpr Camp kMaj = Camp::majority;
constexpr Camp kMin = Camp::minority;
constexpr Rule kWta = Rule::wta;
constexpr Rule kPr = Rule::pr;

// Experiment minus theory. Majority panel first, then minority; within a
// panel WTA then PR, in Global / Local / Both order.
const std::array<Deviation, 52> kDeviations = {{
    {4, kWta, kMaj, 0.127},   {7, kWta, kMaj, 0.081},
    {14, kWta, kMaj, 0.027},  {18, kWta, kMaj, -0.037},
    {5, kWta, kMaj, 0.146},   {13, kWta, kMaj, 0.002},
    {15, kWta, kMaj, 0.025},  {6, kWta, kMaj, 0.144},
    {8, kWta, kMaj, 0.112},   {9, kWta, kMaj, 0.149},
    {12, kWta, kMaj, 0.062},  {16, kWta, kMaj, 0.075},
    {17, kWta, kMaj, -0.035},

    {4, kPr, kMaj, 0.113},    {7, kPr, kMaj, 0.066},
    {14, kPr, kMaj, -0.066},  {18, kPr, kMaj, -0.055},
    {5, kPr, kMaj, 0.207},    {13, kPr, kMaj, 0.082},
    {15, kPr, kMaj, 0.101},   {6, kPr, kMaj, 0.189},
    {8, kPr, kMaj, 0.055},    {9, kPr, kMaj, 0.154},
    {12, kPr, kMaj, 0.127},   {16, kPr, kMaj, 0.059},
    {17, kPr, kMaj, -0.022},

    {4, kWta, kMin, -0.019},  {7, kWta, kMin, 0.051},
    {14, kWta, kMin, -0.187}, {18, kWta, kMin, -0.146},
    {5, kWta, kMin, -0.212},  {13, kWta, kMin, -0.467},
    {15, kWta, kMin, -0.376}, {6, kWta, kMin, -0.183},
    {8, kWta, kMin, -0.023},  {9, kWta, kMin, -0.080},
    {12, kWta, kMin, -0.397}, {16, kWta, kMin, -0.321},
    {17, kWta, kMin, -0.200},

    {4, kPr, kMin, -0.046},   {7, kPr, kMin, -0.002},
    {14, kPr, kMin, -0.220},  {18, kPr, kMin, -0.053},
    {5, kPr, kMin, -0.650},   {13, kPr, kMin, -0.576},
    {15, kPr, kMin, -0.805},  {6, kPr, kMin, -0.219},
    {8, kPr, kMin, -0.126},   {9, kPr, kMin, -0.127},
    {12, kPr, kMin, -0.516},  {16, kPr, kMin, -0.454},
    {17, kPr, kMin, -0.138},
}};

// Category-averaged expected welfare (units of the benefit) and ex ante
// Gini coefficients: theory, then experiment.
const std::array<WelfareRow, 6> kWelfare = {{
    {C::global, kWta, 0.552, 0.598, 0.409, 0.343, 0.074, 0.135},
    {C::global, kPr, 0.563, 0.610, 0.398, 0.336, 0.086, 0.145},
    {C::local, kWta, 0.442, 0.466, 0.527, 0.507, 0.040, 0.034},
    {C::local, kPr, 0.553, 0.709, 0.367, 0.252, 0.031, 0.060},
    {C::both, kWta, 0.560, 0.641, 0.403, 0.310, 0.060, 0.137},
    {C::both, kPr, 0.571, 0.712, 0.387, 0.239, 0.073, 0.193},
}};

template <typename Row>
const Row& find_row(const std::array<Row, 18>& rows, int id) {
  const auto it = std::find_if(rows.begin(), rows.end(),
                               [id](const Row& r) { return r.config_id == id; });
  if (it == rows.end()) {
    throw MissingKey("no published configuration " + std::to_string(id));
  }
  return *it;
}

std::vector<GroupOneTurnout> points(const std::array<TurnoutRow, 18>& rows) {
  std::vector<GroupOneTurnout> out;
  out.reserve(2 * rows.size());
  for (const TurnoutRow& row : rows) {
    out.push_back(row.under(Rule::wta));
    out.push_back(row.under(Rule::pr));
  }
  return out;
}

}  // namespace

std::span<const Configuration> configurations() { return kConfigurations; }

const Configuration& configuration(int id) {
  if (id < 1 || id > static_cast<int>(kConfigurations.size())) {
    throw MissingKey("no published configuration " + std::to_string(id) +
                     " (expected 1..18)");
  }
  return kConfigurations[static_cast<std::size_t>(id - 1)];
}

ConfigTable config_table() {
  ConfigTable table;
  for (const Configuration& c : kConfigurations) table.emplace(c.id, c.config);
  return table;
}

std::span<const TurnoutRow> equilibrium_turnout() { return kEquilibrium; }
std::span<const TurnoutRow> experiment_turnout() { return kExperiment; }

const TurnoutRow& equilibrium_turnout(int config_id) {
  return find_row(kEquilibrium, config_id);
}
const TurnoutRow& experiment_turnout(int config_id) {
  return find_row(kExperiment, config_id);
}

std::vector<GroupOneTurnout> equilibrium_turnout_points() {
  return points(kEquilibrium);
}
std::vector<ObservedTurnout> experiment_turnout_points() {
  return points(kExperiment);
}

std::span<const Deviation> deviations() { return kDeviations; }

std::span<const WelfareRow> welfare_rows() { return kWelfare; }

const WelfareRow& welfare_row(Category category, Rule rule) {
  for (const WelfareRow& row : kWelfare) {
    if (row.category == category && row.rule == rule) return row;
  }
  throw MissingKey("no published welfare row for " +
                   std::string(to_string(category)) + "/" +
                   std::string(to_string(rule)));
}

}  // namespace twotier::reference
