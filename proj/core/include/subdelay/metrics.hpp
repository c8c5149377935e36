#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subdelay/arms.hpp"
#include "subdelay/bandit.hpp"
#include "subdelay/env.hpp"

namespace subdelay {

struct RunMetadata {
  std::uint64_t seed = 0;
  std::string env;
  std::string delay;
  std::string agent;
  std::uint64_t horizon = 0;
};

/// α-regret against the expected reward f, step by step.
struct RegretTrace {
  std::vector<double> instantaneous;  // α f(S*) - f(S_t)
  std::vector<double> cumulative;     // prefix sums of instantaneous
  double alpha = kGreedyAlpha;
  double optimum = 0.0;
  RunMetadata metadata;

  double total() const noexcept { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

RegretTrace regret_trace(std::span<const ArmSet> actions, const Environment& env, double optimum,
                         double alpha = kGreedyAlpha, RunMetadata metadata = {});

/// Least-squares line through (ln T, ln R).
struct SlopeFit {
  std::vector<std::pair<double, double>> points;  // (ln T, ln R) actually fitted
  std::vector<double> excluded_horizons;          // dropped for R ≤ 0
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual in log space
};

/// Input pairs are (T, mean cumulative regret). Points with R ≤ 0 are dropped
/// and listed in excluded_horizons; throws NonPositiveRegret when fewer than
/// three usable points remain and InsufficientPoints when fewer than three
/// were given.
SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

struct RunSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n-1) standard deviation
  std::size_t runs = 0;
  bool stddev_defined = false;  // false for a single run, where stddev is reported as 0
};

/// Statistics of the final cumulative regret across replications of one cell.
RunSummary summarize_runs(std::span<const RegretTrace> traces);
RunSummary summarize_values(std::span<const double> totals);

}  // namespace subdelay
