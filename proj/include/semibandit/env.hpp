#pragma once

#include <cstdint>
#include <vector>

#include "semibandit/model.hpp"
#include "semibandit/random.hpp"

namespace semibandit {

// Semi-bandit observation Y = x (.) Z. Unchosen items stay kUnobserved.
struct Feedback {
  static constexpr std::int8_t kUnobserved = -1;

  std::vector<std::int8_t> observed;
  double realized_reward = 0.0;
};

// Draws Z_i ~ Bernoulli(theta_i) for the chosen items only, in increasing
// item order, then advances the stream to the next round. `out` is reused
// across rounds to keep the loop allocation free.
void env_step(const Instance& instance, const Decision& decision,
              OutcomeStream& stream, Feedback& out);

Feedback env_step(const Instance& instance, const Decision& decision,
                  OutcomeStream& stream);

struct RegretAccount {
  std::int64_t t = 0;
  double cumulative = 0.0;
};

// Adds the pseudo-regret gap of `decision` and advances t.
void account(RegretAccount& regret, const Gaps& gaps, const Decision& decision);

}  // namespace semibandit
