#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subdelay/arms.hpp"
#include "subdelay/rng.hpp"

namespace subdelay {

/// Probability mass function over delays 0..support()-1.
class DelayPmf {
 public:
  /// Throws InvalidPmf unless entries are non-negative and sum to 1 within 1e-12.
  explicit DelayPmf(std::vector<double> mass, double truncation_tail = 0.0);

  static DelayPmf point(std::size_t delay);

  /// Geometric law (1 - ratio)·ratio^i, cut at the first index L whose residual
  /// tail ratio^(L+1) drops below kTruncationTail; the residual is folded into L.
  static DelayPmf geometric(double ratio);

  static constexpr double kTruncationTail = 1e-12;
  static constexpr double kSumTolerance = 1e-12;

  std::span<const double> mass() const noexcept { return mass_; }
  double operator[](std::size_t i) const noexcept { return i < mass_.size() ? mass_[i] : 0.0; }
  std::size_t support() const noexcept { return mass_.size(); }

  /// P(delay ≥ j).
  double tail(std::size_t j) const noexcept;

  /// Mass folded into the last support point when an infinite law was cut.
  double truncation_tail() const noexcept { return truncation_tail_; }

 private:
  std::vector<double> mass_;
  double truncation_tail_;
};

/// Mean delay through the tail-sum identity E = Σ_{j≥1} P(delay ≥ j).
double expected_tail(const DelayPmf& pmf);

/// Pointwise-minimal pmf whose tails dominate every family member.
struct TailBound {
  DelayPmf pmf;
  double expected_tail;
};

/// mass(j) = sup_i tail_i(j) - sup_i tail_i(j+1). Throws EmptyFamily.
TailBound build_upper_tail_bound(std::span<const DelayPmf> family);

enum class DelayKind {
  NoDelay,             // D1
  GeometricMixture,    // D2
  DirichletWindow,     // D3
  RewardGeometric,     // D4
  RewardPoint,         // D5
  AdversarialPoint,    // D6
  BoundedAdversarial,  // bounded(d)
  Custom,
};

enum class DelayClass { StochasticIndependent, StochasticConditionallyIndependent, BoundedAdversarial };

/// What a delay model may observe when choosing the delay of step t's reward.
struct DelayContext {
  std::size_t t = 1;  // 1-based step
  const ArmSet* action = nullptr;
  std::optional<double> realized_reward;   // F_t(S_t)
  std::optional<double> prev_observation;  // x_{t-1}
};

class DelayModel {
 public:
  using Adversary = std::function<DelayPmf(const DelayContext&)>;

  static DelayModel no_delay();
  static DelayModel geometric_mixture(double lo = 0.5, double hi = 0.9);
  static DelayModel dirichlet_window(std::size_t lo = 10, std::size_t hi = 30);
  static DelayModel reward_geometric(double base = 0.5, double slope = 0.4);
  static DelayModel reward_point(double scale = 20.0, std::size_t offset = 10);
  static DelayModel adversarial_point(double scale = 20.0, std::size_t offset = 10,
                                      std::size_t first = 15);
  /// Adversary must return pmfs with no mass beyond d; checked on every draw.
  static DelayModel bounded_adversarial(std::size_t d, Adversary adversary);
  static DelayModel custom(DelayPmf pmf);

  /// "D1".."D6" as in the benchmark grid; "bounded(d)" places all mass at d.
  static DelayModel from_name(std::string_view name);

  DelayKind kind() const noexcept { return kind_; }
  DelayClass delay_class() const noexcept;
  std::string name() const;

  /// Largest delay that can occur, or nullopt for unbounded laws.
  friend std::optional<std::size_t> worst_case_bound(const DelayModel& model);

  friend DelayPmf sample_delay_pmf(const DelayModel& model, const DelayContext& ctx, Rng& rng);

 private:
  explicit DelayModel(DelayKind kind) : kind_(kind) {}

  DelayKind kind_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::size_t window_lo_ = 0;
  std::size_t window_hi_ = 0;
  std::size_t first_ = 0;
  std::size_t bound_ = 0;
  Adversary adversary_;
  std::optional<DelayPmf> fixed_;
};

/// Draws the delay pmf Δ_t for one step. Throws MissingContext when the model
/// needs a context field that is absent and InvalidPmf when an adversary breaks
/// its declared bound.
DelayPmf sample_delay_pmf(const DelayModel& model, const DelayContext& ctx, Rng& rng);
std::optional<std::size_t> worst_case_bound(const DelayModel& model);

std::string_view to_string(DelayKind kind);
std::string_view to_string(DelayClass cls);

}  // namespace subdelay
