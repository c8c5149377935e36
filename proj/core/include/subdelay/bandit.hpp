#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subdelay/arms.hpp"

namespace subdelay {

/// Approximation ratio of greedy for monotone submodular maximization.
inline constexpr double kGreedyAlpha = 1.0 - 1.0 / std::numbers::e;

enum class Phase { Explore, Commit };

struct AgentDecision {
  ArmSet action;
  Phase phase;
};

/// Uniform interface the simulator drives. next() is called exactly once per
/// step with the observation emitted at the previous step (0 before step 1).
class Agent {
 public:
  virtual ~Agent() = default;
  virtual AgentDecision next(double last_observation) = 0;
  virtual std::string name() const = 0;
};

/// ⌈(T/n)^{2/3}⌉ in exact integer arithmetic. Throws HorizonTooSmall when n > T.
std::uint64_t etcg_schedule_m(std::uint64_t horizon, std::uint64_t n);

/// ⌈(δT/N)^{2/3}⌉ in exact integer arithmetic. Throws HorizonTooSmall when N > T.
std::uint64_t cetc_schedule_m(std::uint64_t horizon, std::uint64_t delta, std::uint64_t budget);

/// Explore-then-commit greedy.
///
/// Phase i (1..k) pulls S^{(i-1)} ∪ {a} for every a ∉ S^{(i-1)} in ascending
/// order, m consecutive times each. The observation emitted at a step is
/// credited to the candidate played at that step, whichever past action
/// generated it. After the last window of phase i, a_i is the candidate with
/// the highest mean (lowest index on ties). After phase k the agent plays
/// S^{(k)} until the horizon.
class EtcgAgent final : public Agent {
 public:
  /// m defaults to etcg_schedule_m(horizon, n).
  EtcgAgent(GroundSet ground, std::size_t k, std::uint64_t horizon,
            std::optional<std::uint64_t> m = std::nullopt);

  AgentDecision next(double last_observation) override;
  std::string name() const override { return "etcg"; }

  std::uint64_t m() const noexcept { return m_; }
  /// m·Σ_{i=1}^{k} (n-i+1).
  std::uint64_t exploration_length() const noexcept;
  /// Exploration does not fit in the horizon, so the run never commits.
  bool exploration_truncated() const noexcept { return exploration_length() > horizon_; }

  /// S^{(1)}, ..., S^{(i)} for every phase finished so far.
  const std::vector<ArmSet>& prefixes() const noexcept { return prefixes_; }
  std::optional<ArmSet> committed() const;

 private:
  void start_phase();
  void finish_phase();

  GroundSet ground_;
  std::size_t k_;
  std::uint64_t horizon_;
  std::uint64_t m_;
  std::uint64_t t_ = 0;

  ArmSet current_;
  std::vector<ArmSet> prefixes_;
  std::vector<Arm> candidates_;
  std::vector<double> sums_;
  std::size_t cursor_ = 0;         // candidate being pulled
  std::uint64_t credited_ = 0;     // observations credited to candidates_[cursor_]
  bool awaiting_credit_ = false;   // the previous step was an exploration pull
};

/// Declared guarantee of an offline algorithm: it is (alpha, delta)-robust and
/// issues at most `budget` value queries.
struct Robustness {
  double alpha;
  std::uint64_t delta;
  std::uint64_t budget;
};

/// Offline maximizer that talks to its value oracle through queries, so the
/// same algorithm can run against an exact function or against bandit
/// estimates.
class OfflineAlgorithm {
 public:
  virtual ~OfflineAlgorithm() = default;
  virtual Robustness robustness() const = 0;
  /// Next set whose value is needed, or nullopt once the algorithm has halted.
  virtual std::optional<ArmSet> next_query() = 0;
  /// Value for the set most recently returned by next_query().
  virtual void answer(double value) = 0;
  /// Final set; valid once next_query() has returned nullopt.
  virtual ArmSet output() const = 0;
};

/// k-round greedy over value queries; (1 - 1/e, 2k)-robust with budget nk.
class GreedyAlgorithm final : public OfflineAlgorithm {
 public:
  GreedyAlgorithm(GroundSet ground, std::size_t k);

  Robustness robustness() const override;
  std::optional<ArmSet> next_query() override;
  void answer(double value) override;
  ArmSet output() const override { return current_; }

 private:
  GroundSet ground_;
  std::size_t k_;
  ArmSet current_;
  Arm next_arm_ = 0;
  std::optional<Arm> pending_;
  std::optional<Arm> best_arm_;
  double best_value_ = 0.0;
};

using ValueOracle = std::function<double(const ArmSet&)>;

/// Runs `algo` to completion with `value` as its oracle.
ArmSet run_offline(OfflineAlgorithm& algo, const ValueOracle& value);

/// Greedy maximization of `value` under |S| ≤ k, lowest index on ties.
ArmSet greedy_maximize(const ValueOracle& value, const GroundSet& ground, std::size_t k);

/// C-ETC: answers each query of an offline algorithm with the mean of m
/// consecutive observations while playing the queried set, then plays the
/// algorithm's output for the rest of the horizon.
class CetcAgent final : public Agent {
 public:
  /// m defaults to cetc_schedule_m(horizon, δ, N) from the algorithm's
  /// declared robustness; pass an explicit m to override.
  CetcAgent(std::unique_ptr<OfflineAlgorithm> algo, std::uint64_t horizon,
            std::optional<std::uint64_t> m = std::nullopt);

  AgentDecision next(double last_observation) override;
  std::string name() const override { return "cetc"; }

  std::uint64_t m() const noexcept { return m_; }
  std::uint64_t queries() const noexcept { return queries_; }
  std::optional<ArmSet> committed() const { return committed_; }

 private:
  void fetch_query();

  std::unique_ptr<OfflineAlgorithm> algo_;
  Robustness robustness_;
  std::uint64_t horizon_;
  std::uint64_t m_;
  std::uint64_t t_ = 0;
  std::uint64_t queries_ = 0;

  std::optional<ArmSet> query_;
  std::optional<ArmSet> committed_;
  double sum_ = 0.0;
  std::uint64_t credited_ = 0;
  bool awaiting_credit_ = false;
};

/// UCB1 over every size-k set, crediting each observation to the set played at
/// the step it arrives (delay-oblivious).
class NaiveUcbAgent final : public Agent {
 public:
  NaiveUcbAgent(const GroundSet& ground, std::size_t k, std::uint64_t horizon);

  AgentDecision next(double last_observation) override;
  std::string name() const override { return "naive-ucb"; }

  std::size_t arms() const noexcept { return actions_.size(); }
  std::uint64_t pulls(std::size_t arm) const { return pulls_[arm]; }

 private:
  std::vector<ArmSet> actions_;
  std::vector<double> sums_;
  std::vector<std::uint64_t> pulls_;
  std::uint64_t horizon_;
  std::uint64_t t_ = 0;
  std::optional<std::size_t> last_;
};

/// Agent names accepted by make_agent and the experiment config.
inline constexpr std::string_view kAgentNames[] = {"etcg", "cetc-greedy", "naive-ucb"};

struct AgentOptions {
  /// For cetc-greedy: use the ETCG m = ⌈(T/n)^{2/3}⌉ instead of ⌈(δT/N)^{2/3}⌉.
  bool force_alg1_m = false;
};

std::unique_ptr<Agent> make_agent(std::string_view name, const GroundSet& ground, std::size_t k,
                                  std::uint64_t horizon, const AgentOptions& options = {});

}  // namespace subdelay
