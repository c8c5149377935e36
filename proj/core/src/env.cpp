#include "subdelay/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "subdelay/errors.hpp"

namespace subdelay {

namespace {

RewardSample clamp_unit(double v) {
  if (v < 0.0) return {0.0, true};
  if (v > 1.0) return {1.0, true};
  return {v, false};
}

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

LinearEnv::LinearEnv(std::vector<double> weights, std::size_t k, Noise noise)
    : weights_(std::move(weights)), k_(k), noise_(noise) {
  if (weights_.empty()) throw InvalidEnvironment("linear environment needs at least one arm");
  if (k_ == 0) throw InvalidEnvironment("normalizer k must be positive");
  for (double w : weights_)
    if (!(w >= 0.0 && w <= 1.0)) throw InvalidEnvironment("linear weights must lie in [0, 1]");
  if (!(noise_.sd >= 0.0)) throw InvalidEnvironment("noise sd must be non-negative");
  if (!(noise_.lower <= 0.0 && noise_.upper >= 0.0))
    throw InvalidEnvironment("noise truncation window must contain 0");
}

LinearEnv LinearEnv::draw(std::size_t n, std::size_t k, double lo, double hi, Rng& rng, Noise noise) {
  if (!(lo <= hi)) throw InvalidEnvironment("weight range is empty");
  std::vector<double> g(n);
  for (auto& w : g) w = rng.uniform(lo, hi);
  return LinearEnv(std::move(g), k, noise);
}

double LinearEnv::expected_value(const ArmSet& s) const {
  double sum = 0.0;
  for (auto a : s.members()) sum += weights_[a];
  return sum / static_cast<double>(k_);
}

RewardSample LinearEnv::sample(const ArmSet& s, Rng& rng) const {
  double eps = 0.0;
  if (noise_.sd > 0.0) {
    // Rejection from the untruncated normal; acceptance is ~0.84 at the defaults.
    do {
      eps = noise_.sd * rng.normal();
    } while (eps < noise_.lower || eps > noise_.upper);
  }
  return clamp_unit(expected_value(s) + eps);
}

double LinearEnv::noise_mean() const {
  if (noise_.sd == 0.0) return 0.0;
  const double a = noise_.lower / noise_.sd;
  const double b = noise_.upper / noise_.sd;
  return noise_.sd * (std_normal_pdf(a) - std_normal_pdf(b)) / (std_normal_cdf(b) - std_normal_cdf(a));
}

WeightCoverEnv::WeightCoverEnv(std::vector<std::size_t> category_of, std::vector<double> upper,
                               std::size_t k)
    : category_of_(std::move(category_of)), upper_(std::move(upper)), k_(k) {
  if (category_of_.empty()) throw InvalidEnvironment("weight cover needs at least one arm");
  if (k_ == 0) throw InvalidEnvironment("normalizer k must be positive");
  for (auto c : category_of_)
    if (c >= upper_.size())
      throw InvalidEnvironment("arm assigned to category " + std::to_string(c) + " of " +
                               std::to_string(upper_.size()));
  double total = 0.0;
  for (double u : upper_) {
    if (!(u >= 0.0)) throw InvalidEnvironment("category weight bound must be non-negative");
    total += u;
  }
  if (total > static_cast<double>(k_) + 1e-12)
    throw InvalidEnvironment("category weight bounds sum above k; rewards would leave [0, 1]");
}

WeightCoverEnv WeightCoverEnv::blocks(const std::vector<std::size_t>& sizes, std::size_t k) {
  std::vector<std::size_t> category_of;
  std::vector<double> upper;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (sizes[j] == 0) throw InvalidEnvironment("empty category in partition");
    category_of.insert(category_of.end(), sizes[j], j);
    upper.push_back(static_cast<double>(j + 1) / 5.0);
  }
  return WeightCoverEnv(std::move(category_of), std::move(upper), k);
}

double WeightCoverEnv::expected_value(const ArmSet& s) const {
  std::vector<bool> covered(upper_.size(), false);
  for (auto a : s.members()) covered[category_of_[a]] = true;
  double sum = 0.0;
  for (std::size_t j = 0; j < upper_.size(); ++j)
    if (covered[j]) sum += upper_[j] / 2.0;
  return sum / static_cast<double>(k_);
}

RewardSample WeightCoverEnv::sample(const ArmSet& s, Rng& rng) const {
  // Weights are redrawn every step for every category, covered or not, so the
  // number of variates consumed does not depend on the action.
  std::vector<bool> covered(upper_.size(), false);
  for (auto a : s.members()) covered[category_of_[a]] = true;
  double sum = 0.0;
  for (std::size_t j = 0; j < upper_.size(); ++j) {
    const double w = rng.uniform(0.0, upper_[j]);
    if (covered[j]) sum += w;
  }
  return clamp_unit(sum / static_cast<double>(k_));
}

GroundSet Environment::ground() const {
  return std::visit([](const auto& e) { return e.ground(); }, impl_);
}

std::size_t Environment::k() const {
  return std::visit([](const auto& e) { return e.k(); }, impl_);
}

double Environment::expected_value(const ArmSet& s) const {
  return std::visit([&](const auto& e) { return e.expected_value(s); }, impl_);
}

RewardSample Environment::sample_reward(const ArmSet& s, Rng& rng) const {
  return std::visit([&](const auto& e) { return e.sample(s, rng); }, impl_);
}

std::pair<ArmSet, double> brute_force_optimum(const Environment& env, std::size_t k) {
  auto candidates = enumerate_actions(env.ground(), k, /*exact=*/true);
  std::size_t best = 0;
  double best_value = env.expected_value(candidates[0]);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double v = env.expected_value(candidates[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return {std::move(candidates[best]), best_value};
}

}  // namespace subdelay
