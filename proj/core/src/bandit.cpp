#include "subdelay/bandit.hpp"

#include <cmath>
#include <limits>

#include "subdelay/errors.hpp"

namespace subdelay {

namespace {

__extension__ using u128 = unsigned __int128;

// Smallest m ≥ 1 with m³·den² ≥ num², i.e. m = ⌈(num/den)^{2/3}⌉.
std::uint64_t ceil_two_thirds_power(std::uint64_t num, std::uint64_t den) {
  const u128 lhs = u128(num) * num;
  const u128 den2 = u128(den) * den;
  auto covers = [&](std::uint64_t m) { return u128(m) * m * m * den2 >= lhs; };

  const double guess = std::pow(static_cast<double>(num) / static_cast<double>(den), 2.0 / 3.0);
  auto m = static_cast<std::uint64_t>(std::max(1.0, std::floor(guess)));
  while (m > 1 && covers(m - 1)) --m;
  while (!covers(m)) ++m;
  return m;
}

}  // namespace

std::uint64_t etcg_schedule_m(std::uint64_t horizon, std::uint64_t n) {
  if (n == 0) throw InvalidArity("ground set is empty");
  if (n > horizon)
    throw HorizonTooSmall("horizon " + std::to_string(horizon) + " is shorter than n=" + std::to_string(n));
  return ceil_two_thirds_power(horizon, n);
}

std::uint64_t cetc_schedule_m(std::uint64_t horizon, std::uint64_t delta, std::uint64_t budget) {
  if (budget > horizon)
    throw HorizonTooSmall("horizon " + std::to_string(horizon) + " is shorter than the query budget " +
                          std::to_string(budget));
  if (budget == 0) return 1;
  if (delta > std::numeric_limits<std::uint64_t>::max() / std::max<std::uint64_t>(horizon, 1))
    throw HorizonTooSmall("delta·T overflows");
  return ceil_two_thirds_power(delta * horizon, budget);
}

// ---------------------------------------------------------------------------
// ETCG

EtcgAgent::EtcgAgent(GroundSet ground, std::size_t k, std::uint64_t horizon, std::optional<std::uint64_t> m)
    : ground_(ground), k_(k), horizon_(horizon), current_(k) {
  if (k_ > ground_.size())
    throw InvalidArity("k=" + std::to_string(k_) + " exceeds n=" + std::to_string(ground_.size()));
  m_ = m ? *m : etcg_schedule_m(horizon, ground_.size());
  if (m_ == 0) throw InvalidArity("m must be positive");
  if (k_ > 0) start_phase();
}

std::uint64_t EtcgAgent::exploration_length() const noexcept {
  std::uint64_t candidates = 0;
  for (std::size_t i = 1; i <= k_; ++i) candidates += ground_.size() - i + 1;
  return m_ * candidates;
}

std::optional<ArmSet> EtcgAgent::committed() const {
  if (prefixes_.size() < k_) return std::nullopt;
  return current_;
}

void EtcgAgent::start_phase() {
  candidates_.clear();
  for (Arm a = 0; a < ground_.size(); ++a)
    if (!current_.contains(a)) candidates_.push_back(a);
  sums_.assign(candidates_.size(), 0.0);
  cursor_ = 0;
  credited_ = 0;
}

void EtcgAgent::finish_phase() {
  const double m = static_cast<double>(m_);
  std::size_t best = 0;
  double best_mean = sums_[0] / m;
  for (std::size_t c = 1; c < candidates_.size(); ++c) {
    const double mean = sums_[c] / m;
    if (mean > best_mean) {
      best_mean = mean;
      best = c;
    }
  }
  current_ = with_arm(current_, candidates_[best]);
  prefixes_.push_back(current_);
  if (prefixes_.size() < k_) start_phase();
}

AgentDecision EtcgAgent::next(double last_observation) {
  if (t_ >= horizon_) throw ProtocolViolation("etcg stepped past its horizon " + std::to_string(horizon_));
  ++t_;

  if (awaiting_credit_) {
    awaiting_credit_ = false;
    sums_[cursor_] += last_observation;
    if (++credited_ == m_) {
      credited_ = 0;
      if (++cursor_ == candidates_.size()) finish_phase();
    }
  }

  if (prefixes_.size() < k_) {
    awaiting_credit_ = true;
    return {with_arm(current_, candidates_[cursor_]), Phase::Explore};
  }
  return {current_, Phase::Commit};
}

// ---------------------------------------------------------------------------
// Greedy as a query-driven offline algorithm

GreedyAlgorithm::GreedyAlgorithm(GroundSet ground, std::size_t k) : ground_(ground), k_(k), current_(k) {
  if (k_ > ground_.size())
    throw InvalidArity("k=" + std::to_string(k_) + " exceeds n=" + std::to_string(ground_.size()));
}

Robustness GreedyAlgorithm::robustness() const {
  return {kGreedyAlpha, 2 * static_cast<std::uint64_t>(k_),
          static_cast<std::uint64_t>(ground_.size() * k_)};
}

std::optional<ArmSet> GreedyAlgorithm::next_query() {
  if (pending_) throw ProtocolViolation("greedy query left unanswered");
  while (current_.size() < k_) {
    while (next_arm_ < ground_.size() && current_.contains(next_arm_)) ++next_arm_;
    if (next_arm_ < ground_.size()) {
      pending_ = next_arm_;
      return with_arm(current_, next_arm_);
    }
    // Round complete: keep the best extension and start the next round.
    current_ = with_arm(current_, *best_arm_);
    best_arm_.reset();
    next_arm_ = 0;
  }
  return std::nullopt;
}

void GreedyAlgorithm::answer(double value) {
  if (!pending_) throw ProtocolViolation("greedy received an answer without a query");
  if (!best_arm_ || value > best_value_) {
    best_arm_ = pending_;
    best_value_ = value;
  }
  next_arm_ = *pending_ + 1;
  pending_.reset();
}

ArmSet run_offline(OfflineAlgorithm& algo, const ValueOracle& value) {
  const auto budget = algo.robustness().budget;
  std::uint64_t queries = 0;
  while (auto q = algo.next_query()) {
    if (++queries > budget)
      throw OracleBudgetExceeded("offline algorithm exceeded its budget of " + std::to_string(budget));
    algo.answer(value(*q));
  }
  return algo.output();
}

ArmSet greedy_maximize(const ValueOracle& value, const GroundSet& ground, std::size_t k) {
  GreedyAlgorithm greedy(ground, k);
  return run_offline(greedy, value);
}

// ---------------------------------------------------------------------------
// C-ETC

CetcAgent::CetcAgent(std::unique_ptr<OfflineAlgorithm> algo, std::uint64_t horizon,
                     std::optional<std::uint64_t> m)
    : algo_(std::move(algo)), robustness_(algo_->robustness()), horizon_(horizon) {
  if (robustness_.budget > horizon_)
    throw HorizonTooSmall("horizon " + std::to_string(horizon_) + " is shorter than the query budget " +
                          std::to_string(robustness_.budget));
  m_ = m ? *m : cetc_schedule_m(horizon_, robustness_.delta, robustness_.budget);
  if (m_ == 0) throw InvalidArity("m must be positive");
  fetch_query();
}

void CetcAgent::fetch_query() {
  query_ = algo_->next_query();
  if (!query_) {
    committed_ = algo_->output();
    return;
  }
  if (++queries_ > robustness_.budget)
    throw OracleBudgetExceeded("offline algorithm exceeded its budget of " +
                               std::to_string(robustness_.budget));
  sum_ = 0.0;
  credited_ = 0;
}

AgentDecision CetcAgent::next(double last_observation) {
  if (t_ >= horizon_) throw ProtocolViolation("cetc stepped past its horizon " + std::to_string(horizon_));
  ++t_;

  if (awaiting_credit_) {
    awaiting_credit_ = false;
    sum_ += last_observation;
    if (++credited_ == m_) {
      algo_->answer(sum_ / static_cast<double>(m_));
      fetch_query();
    }
  }

  if (query_) {
    awaiting_credit_ = true;
    return {*query_, Phase::Explore};
  }
  return {*committed_, Phase::Commit};
}

// ---------------------------------------------------------------------------
// Naive UCB1 over super arms

NaiveUcbAgent::NaiveUcbAgent(const GroundSet& ground, std::size_t k, std::uint64_t horizon)
    : actions_(enumerate_actions(ground, k, /*exact=*/true)),
      sums_(actions_.size(), 0.0),
      pulls_(actions_.size(), 0),
      horizon_(horizon) {}

AgentDecision NaiveUcbAgent::next(double last_observation) {
  if (t_ >= horizon_) throw ProtocolViolation("naive-ucb stepped past its horizon " + std::to_string(horizon_));
  if (last_) {
    sums_[*last_] += last_observation;
    ++pulls_[*last_];
  }
  ++t_;

  std::size_t choice = 0;
  if (t_ <= actions_.size()) {
    choice = static_cast<std::size_t>(t_ - 1);
  } else {
    const double log_total = std::log(static_cast<double>(t_ - 1));
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < actions_.size(); ++i) {
      const double n = static_cast<double>(pulls_[i]);
      const double index = sums_[i] / n + std::sqrt(2.0 * log_total / n);
      if (index > best) {
        best = index;
        choice = i;
      }
    }
  }
  last_ = choice;
  return {actions_[choice], Phase::Explore};
}

// ---------------------------------------------------------------------------

std::unique_ptr<Agent> make_agent(std::string_view name, const GroundSet& ground, std::size_t k,
                                  std::uint64_t horizon, const AgentOptions& options) {
  if (name == "etcg") return std::make_unique<EtcgAgent>(ground, k, horizon);
  if (name == "cetc-greedy") {
    std::optional<std::uint64_t> m;
    if (options.force_alg1_m) m = etcg_schedule_m(horizon, ground.size());
    return std::make_unique<CetcAgent>(std::make_unique<GreedyAlgorithm>(ground, k), horizon, m);
  }
  if (name == "naive-ucb") return std::make_unique<NaiveUcbAgent>(ground, k, horizon);
  throw ConfigError("unknown agent '" + std::string(name) + "'");
}

}  // namespace subdelay
