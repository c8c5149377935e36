#include "subdelay/simulation.hpp"

#include "subdelay/errors.hpp"
#include "subdelay/feedback.hpp"

namespace subdelay {

SimulationResult simulate(Agent& agent, const Environment& env, const DelayModel& delay,
                          std::uint64_t horizon, Rng& rng, bool record_feedback) {
  const auto ground = env.ground();
  SimulationResult result;
  result.actions.reserve(horizon);
  result.realized.reserve(horizon);
  if (record_feedback) result.feedback.reserve(horizon);

  PendingBuffer buffer;
  double last_observation = 0.0;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    auto decision = agent.next(last_observation);
    if (!decision.action.fits(ground) || decision.action.size() > env.k())
      throw ProtocolViolation(agent.name() + " played an invalid action " + decision.action.to_string());

    const auto reward = env.sample_reward(decision.action, rng);
    if (reward.clamped) ++result.clamped_rewards;

    DelayContext ctx;
    ctx.t = t;
    ctx.action = &decision.action;
    ctx.realized_reward = reward.value;
    if (t > 1) ctx.prev_observation = last_observation;
    const auto pmf = sample_delay_pmf(delay, ctx, rng);

    buffer.deposit(reward.value, pmf);
    last_observation = buffer.advance();

    if (record_feedback)
      result.feedback.push_back({t, reward.value, last_observation, buffer.escaped_mass()});
    result.actions.push_back(std::move(decision.action));
    result.realized.push_back(reward.value);
  }
  result.escaped_mass = buffer.escaped_mass();
  return result;
}

}  // namespace subdelay
