#include "subdelay/metrics.hpp"

#include <cmath>

#include "subdelay/errors.hpp"

namespace subdelay {

RegretTrace regret_trace(std::span<const ArmSet> actions, const Environment& env, double optimum,
                         double alpha, RunMetadata metadata) {
  RegretTrace trace;
  trace.alpha = alpha;
  trace.optimum = optimum;
  trace.metadata = std::move(metadata);
  trace.instantaneous.reserve(actions.size());
  trace.cumulative.reserve(actions.size());

  const double target = alpha * optimum;
  double running = 0.0;
  for (const auto& s : actions) {
    const double r = target - env.expected_value(s);
    running += r;
    trace.instantaneous.push_back(r);
    trace.cumulative.push_back(running);
  }
  return trace;
}

SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3)
    throw InsufficientPoints("slope fit needs at least 3 horizons, got " + std::to_string(points.size()));

  SlopeFit fit;
  for (const auto& [horizon, regret] : points) {
    if (!(regret > 0.0) || !(horizon > 0.0)) {
      fit.excluded_horizons.push_back(horizon);
      continue;
    }
    fit.points.emplace_back(std::log(horizon), std::log(regret));
  }
  if (fit.points.size() < 3)
    throw NonPositiveRegret("only " + std::to_string(fit.points.size()) +
                            " horizons have positive regret; need 3 for a log-log fit");

  const double n = static_cast<double>(fit.points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : fit.points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw InsufficientPoints("slope fit needs at least two distinct horizons");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;

  double ssr = 0.0;
  for (const auto& [x, y] : fit.points) {
    const double e = y - (fit.intercept + fit.slope * x);
    ssr += e * e;
  }
  fit.residual = std::sqrt(ssr / n);
  return fit;
}

RunSummary summarize_values(std::span<const double> totals) {
  if (totals.empty()) throw EmptyCell("no runs to summarize");
  RunSummary s;
  s.runs = totals.size();
  // Shifted by the first value so identical runs give exactly mean = value, stddev = 0.
  const double shift = totals[0];
  double sum = 0.0;
  for (double v : totals) sum += v - shift;
  const double n = static_cast<double>(s.runs);
  s.mean = shift + sum / n;
  if (s.runs > 1) {
    const double centre = sum / n;
    double ss = 0.0;
    for (double v : totals) ss += (v - shift - centre) * (v - shift - centre);
    s.stddev = std::sqrt(ss / (n - 1.0));
    s.stddev_defined = true;
  }
  return s;
}

RunSummary summarize_runs(std::span<const RegretTrace> traces) {
  std::vector<double> totals;
  totals.reserve(traces.size());
  for (const auto& t : traces) totals.push_back(t.total());
  return summarize_values(totals);
}

}  // namespace subdelay
