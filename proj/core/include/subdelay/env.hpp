#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "subdelay/arms.hpp"
#include "subdelay/rng.hpp"

namespace subdelay {

/// One realized draw of F_t(S).
struct RewardSample {
  double value = 0.0;  // always in [0, 1]
  bool clamped = false;
};

/// Normal noise N(0, sd) truncated to [lower, upper].
struct TruncatedNoise {
  double sd = 0.1;
  double lower = -0.1;
  double upper = 1.0;
};

/// Linear environment (F1): f(S) = (1/k) Σ_{a∈S} g(a), plus truncated normal noise.
class LinearEnv {
 public:
  using Noise = TruncatedNoise;

  LinearEnv(std::vector<double> weights, std::size_t k, Noise noise);
  LinearEnv(std::vector<double> weights, std::size_t k) : LinearEnv(std::move(weights), k, Noise{}) {}

  /// Weights drawn i.i.d. uniform on [lo, hi].
  static LinearEnv draw(std::size_t n, std::size_t k, double lo, double hi, Rng& rng,
                        Noise noise = {});

  GroundSet ground() const { return GroundSet(weights_.size()); }
  std::size_t k() const noexcept { return k_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const Noise& noise() const noexcept { return noise_; }

  double expected_value(const ArmSet& s) const;
  RewardSample sample(const ArmSet& s, Rng& rng) const;

  /// Mean of the truncated noise term. The truncation window [-0.1, 1.0] is
  /// asymmetric, so realized rewards sit above expected_value by this amount
  /// (before clamping).
  double noise_mean() const;

 private:
  std::vector<double> weights_;
  std::size_t k_;
  Noise noise_;
};

/// Weighted-cover environment (F2): arms are partitioned into categories; each
/// step draws w_t(j) ~ U([0, upper_j]) and f_t(S) = (1/k) Σ_j w_t(j)·1{S ∩ C_j ≠ ∅}.
class WeightCoverEnv {
 public:
  /// category_of[a] is the category index of arm a; upper[j] the weight bound of
  /// category j. Requires Σ upper ≤ k so rewards stay in [0, 1].
  WeightCoverEnv(std::vector<std::size_t> category_of, std::vector<double> upper, std::size_t k);

  /// Contiguous blocks of the given sizes with upper bounds j/5 for the j-th
  /// category (1-based); sizes (6,6,6,2) gives the 20-arm benchmark instance.
  static WeightCoverEnv blocks(const std::vector<std::size_t>& sizes, std::size_t k);

  GroundSet ground() const { return GroundSet(category_of_.size()); }
  std::size_t k() const noexcept { return k_; }
  const std::vector<std::size_t>& category_of() const noexcept { return category_of_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  std::size_t categories() const noexcept { return upper_.size(); }

  double expected_value(const ArmSet& s) const;
  RewardSample sample(const ArmSet& s, Rng& rng) const;

 private:
  std::vector<std::size_t> category_of_;
  std::vector<double> upper_;
  std::size_t k_;
};

/// Either environment family behind one value type.
class Environment {
 public:
  Environment(LinearEnv env) : impl_(std::move(env)) {}
  Environment(WeightCoverEnv env) : impl_(std::move(env)) {}

  GroundSet ground() const;
  std::size_t k() const;
  double expected_value(const ArmSet& s) const;
  RewardSample sample_reward(const ArmSet& s, Rng& rng) const;

  const LinearEnv* as_linear() const { return std::get_if<LinearEnv>(&impl_); }
  const WeightCoverEnv* as_weight_cover() const { return std::get_if<WeightCoverEnv>(&impl_); }

 private:
  std::variant<LinearEnv, WeightCoverEnv> impl_;
};

/// Exact maximizer of expected_value over all sets of size k (monotone f, so
/// smaller sets never win). Ties go to the lexicographically smallest set.
std::pair<ArmSet, double> brute_force_optimum(const Environment& env, std::size_t k);

}  // namespace subdelay
