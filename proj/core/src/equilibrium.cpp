#include "twotier/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "twotier/error.hpp"
#include "twotier/parallel.hpp"

namespace twotier {

namespace {

std::array<double, kNumTypes> unclamped_best_response(
    const ElectorateConfig& config, Rule rule, const StrategyProfile& profile,
    const PivotOptions& options) {
  const PivotVector pi = pivot_vector(config, rule, profile, options);
  std::array<double, kNumTypes> out{};
  const double scale = config.benefit / config.cost_cap;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * pi.pi[i];
  return out;
}

double residual_of(const StrategyProfile& profile,
                   const std::array<double, kNumTypes>& response) {
  double worst = 0.0;
  for (std::size_t i = 0; i < response.size(); ++i) {
    worst = std::max(worst,
                     std::abs(profile[i] - std::clamp(response[i], 0.0, 1.0)));
  }
  return worst;
}

void fill_result(EquilibriumResult& result, const ElectorateConfig& config,
                 Rule rule, const PivotOptions& options) {
  result.unclamped_response =
      unclamped_best_response(config, rule, result.profile, options);
  result.residual = residual_of(result.profile, result.unclamped_response);
  for (std::size_t i = 0; i < kNumTypes; ++i) {
    const double t = result.profile[i];
    const double u = result.unclamped_response[i];
    result.corner_flags[i] = (t == 0.0 && u < 0.0) || (t == 1.0 && u > 1.0);
  }
}

double distance(const StrategyProfile& x, const StrategyProfile& y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < kNumTypes; ++i) {
    worst = std::max(worst, std::abs(x[i] - y[i]));
  }
  return worst;
}

std::vector<StrategyProfile> make_starts(const std::vector<double>& values,
                                         StartGrid grid) {
  std::vector<StrategyProfile> starts;
  const std::size_t k = values.size();
  if (k == 0) return starts;
  const int dims = grid == StartGrid::symmetric ? kNumGroups : kNumTypes;
  std::size_t total = 1;
  for (int d = 0; d < dims; ++d) total *= k;
  starts.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    StrategyProfile start;
    for (int d = 0; d < dims; ++d) {
      const double v = values[rest % k];
      rest /= k;
      if (grid == StartGrid::symmetric) {
        start(d, Candidate::a) = v;
        start(d, Candidate::b) = v;
      } else {
        start[static_cast<std::size_t>(d)] = v;
      }
    }
    starts.push_back(start);
  }
  return starts;
}

EquilibriumResult iterate_from(const ElectorateConfig& config, Rule rule,
                               const StrategyProfile& start,
                               const SolverOptions& options) {
  StrategyProfile t = start;
  std::optional<EquilibriumResult> best;
  const double lambda = options.damping;

  for (int it = 1; it <= options.max_iterations; ++it) {
    const auto response = unclamped_best_response(config, rule, t, options.pivot);
    const double residual = residual_of(t, response);
    if (!best || residual < best->residual) {
      best = EquilibriumResult{};
      best->profile = t;
      best->residual = residual;
      best->iterations = it;
    }
    if (residual <= options.tolerance) {
      // Components pushed against a bound converge only geometrically under
      // damping; place them on the bound exactly.
      EquilibriumResult result;
      result.profile = t;
      for (std::size_t i = 0; i < kNumTypes; ++i) {
        const double clamped = std::clamp(response[i], 0.0, 1.0);
        if (clamped == 0.0 || clamped == 1.0) result.profile[i] = clamped;
      }
      fill_result(result, config, rule, options.pivot);
      result.iterations = it;
      result.converged = result.residual <= options.tolerance;
      if (result.converged) return result;
      // Snapping moved us off the fixed point; keep iterating from it.
      t = result.profile;
      continue;
    }
    for (std::size_t i = 0; i < kNumTypes; ++i) {
      t[i] = (1.0 - lambda) * t[i] + lambda * std::clamp(response[i], 0.0, 1.0);
    }
  }

  EquilibriumResult result = *best;
  fill_result(result, config, rule, options.pivot);
  result.iterations = options.max_iterations;
  result.converged = false;
  return result;
}

}  // namespace

void SolverOptions::validate() const {
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw InvalidOptions("damping must lie in (0, 1]");
  }
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw InvalidOptions("tolerance must be positive");
  }
  if (max_iterations < 1) {
    throw InvalidOptions("max_iterations must be >= 1");
  }
  for (const StrategyProfile& start : starts) {
    try {
      start.validate();
    } catch (const ValidationError& e) {
      throw InvalidOptions(std::string("start point ") + e.what());
    }
  }
}

StrategyProfile best_response(const ElectorateConfig& config, Rule rule,
                              const StrategyProfile& profile,
                              const PivotOptions& options) {
  const auto response = unclamped_best_response(config, rule, profile, options);
  StrategyProfile out;
  for (std::size_t i = 0; i < kNumTypes; ++i) {
    out[i] = std::clamp(response[i], 0.0, 1.0);
  }
  return out;
}

EquilibriumResult solve(const ElectorateConfig& config, Rule rule,
                        const SolverOptions& options) {
  options.validate();
  config.validate();
  const StrategyProfile start =
      options.starts.empty() ? StrategyProfile(0.5) : options.starts.front();
  return iterate_from(config, rule, start, options);
}

std::vector<EquilibriumResult> find_all_fixed_points(
    const ElectorateConfig& config, Rule rule,
    const std::vector<double>& grid_values, StartGrid grid,
    const SolverOptions& options, unsigned threads) {
  options.validate();
  config.validate();
  for (double v : grid_values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidOptions("grid values must lie in [0, 1]");
    }
  }
  const std::vector<StrategyProfile> starts = make_starts(grid_values, grid);
  std::vector<EquilibriumResult> results(starts.size());
  parallel_for(starts.size(), threads, [&](std::size_t i) {
    results[i] = iterate_from(config, rule, starts[i], options);
  });

  std::vector<EquilibriumResult> distinct;
  for (const EquilibriumResult& r : results) {
    if (!r.converged) continue;
    const bool seen = std::any_of(
        distinct.begin(), distinct.end(), [&](const EquilibriumResult& d) {
          return distance(d.profile, r.profile) <= kDistinctFixedPoint;
        });
    if (!seen) distinct.push_back(r);
  }
  std::stable_sort(distinct.begin(), distinct.end(),
                   [](const EquilibriumResult& x, const EquilibriumResult& y) {
                     return x.profile(0, Candidate::a) <
                            y.profile(0, Candidate::a);
                   });
  return distinct;
}

}  // namespace twotier
