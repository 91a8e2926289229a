#pragma once

#include <array>
#include <vector>

#include "twotier/model.hpp"
#include "twotier/pivot.hpp"

namespace twotier {

struct SolverOptions {
  double damping = 0.5;       // lambda in (0, 1]
  double tolerance = 1e-7;    // max-norm gap on normalized cutpoints
  int max_iterations = 10000;
  // Start points; solve() uses the first. Empty means all components 0.5.
  std::vector<StrategyProfile> starts;
  PivotOptions pivot;

  // Throws InvalidOptions.
  void validate() const;
};

struct EquilibriumResult {
  StrategyProfile profile;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  // True where the cutpoint sits at 0 or 1 and the unclamped best response
  // lies outside [0, 1].
  std::array<bool, kNumTypes> corner_flags{};
  // beta * pi / c_bar at the reported profile, before clamping.
  std::array<double, kNumTypes> unclamped_response{};
};

// Componentwise clamp(beta * pi_{g,I}(profile) / c_bar, 0, 1).
StrategyProfile best_response(const ElectorateConfig& config, Rule rule,
                              const StrategyProfile& profile,
                              const PivotOptions& options = {});

// Damped iteration t <- (1 - lambda) t + lambda BR(t) from the first start.
// Hitting max_iterations is reported through converged = false, not thrown.
EquilibriumResult solve(const ElectorateConfig& config, Rule rule,
                        const SolverOptions& options = {});

// How start points are generated from a list of axis values.
enum class StartGrid {
  symmetric,  // t_{g,A} = t_{g,B}: |values|^3 starts
  full,       // every component independently: |values|^6 starts
};

// Converged results from every start, deduplicated (componentwise distance
// above 1e-3 counts as distinct) and sorted by t_{1,A}. Starts run
// concurrently on up to `threads` workers (0 = default_thread_count()).
std::vector<EquilibriumResult> find_all_fixed_points(
    const ElectorateConfig& config, Rule rule,
    const std::vector<double>& grid_values, StartGrid grid,
    const SolverOptions& options = {}, unsigned threads = 0);

inline constexpr double kDistinctFixedPoint = 1e-3;

}  // namespace twotier
