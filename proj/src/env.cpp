#include "semibandit/env.hpp"

namespace semibandit {

void env_step(const Instance& instance, const Decision& decision,
              OutcomeStream& stream, Feedback& out) {
  out.observed.assign(instance.set.d(), Feedback::kUnobserved);
  if (instance.reward.is_linear()) {
    double reward = 0.0;
    for (int i : decision.support) {
      const std::int8_t z = stream.uniform(i) < instance.theta[i] ? 1 : 0;
      out.observed[i] = z;
      reward += z;
    }
    out.realized_reward = reward;
  } else {
    double product = 1.0;
    for (int i : decision.support) {
      const std::int8_t z = stream.uniform(i) < instance.theta[i] ? 1 : 0;
      out.observed[i] = z;
      product *= z;
    }
    out.realized_reward = decision.id == 0 ? product : 1.0 - instance.reward.gap;
  }
  stream.advance();
}

Feedback env_step(const Instance& instance, const Decision& decision,
                  OutcomeStream& stream) {
  Feedback out;
  env_step(instance, decision, stream, out);
  return out;
}

void account(RegretAccount& regret, const Gaps& gaps, const Decision& decision) {
  regret.cumulative += gaps.per_decision[decision.id];
  ++regret.t;
}

}  // namespace semibandit
