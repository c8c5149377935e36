#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "subdelay/arms.hpp"
#include "subdelay/bandit.hpp"
#include "subdelay/delay.hpp"
#include "subdelay/env.hpp"
#include "subdelay/rng.hpp"

namespace subdelay {

/// Per-step record of what the feedback channel did.
struct FeedbackStep {
  std::uint64_t t;
  double realized_reward;
  double observation;
  double escaped_mass;
};

struct SimulationResult {
  std::vector<ArmSet> actions;
  std::vector<double> realized;  // realized F_t(S_t)
  std::vector<FeedbackStep> feedback;  // only filled when requested
  std::uint64_t clamped_rewards = 0;
  double escaped_mass = 0.0;  // reward still in flight at the horizon
};

/// One replication: for t = 1..T the agent picks S_t given x_{t-1}, the
/// environment draws F_t(S_t), the delay model draws Δ_t, and the buffer
/// emits x_t. Strictly sequential; the RNG is consumed in that order.
SimulationResult simulate(Agent& agent, const Environment& env, const DelayModel& delay,
                          std::uint64_t horizon, Rng& rng, bool record_feedback = false);

}  // namespace subdelay
