#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semibandit/env.hpp"
#include "semibandit/model.hpp"
#include "semibandit/random.hpp"

namespace semibandit {

// Per-item success (A) and failure (B) counts.
struct PosteriorState {
  std::vector<std::int64_t> successes;
  std::vector<std::int64_t> failures;

  explicit PosteriorState(int d) : successes(d, 0), failures(d, 0) {}

  int d() const { return static_cast<int>(successes.size()); }
  std::int64_t samples(int i) const { return successes[i] + failures[i]; }
  double empirical_mean(int i) const;
};

// Throws std::invalid_argument if `feedback` is not observed exactly on the
// decision's support.
void posterior_update(PosteriorState& state, const Decision& decision,
                      const Feedback& feedback);

// Beta(a, b) by the Gamma ratio X / (X + Y). Parameters with a unit side
// use the exact inverse CDF instead (Beta(a,1) = U^{1/a}), which covers the
// uniform prior and is several times cheaper.
class BetaSampler {
 public:
  double operator()(Engine& engine, double a, double b);

 private:
  std::gamma_distribution<double> gamma_;
};

// Reference sampler for integer parameters: the a-th smallest of a + b - 1
// uniforms. O(a + b) per draw; meant for cross-checking only.
double order_statistic_beta(Engine& engine, int a, int b);

// V_i ~ Beta(A_i + 1, B_i + 1), independently.
void ts_sample(const PosteriorState& state, Engine& engine,
               BetaSampler& sampler, std::span<double> out);

enum class PolicyKind { kThompson, kThompsonForced, kCucb, kEscb, kRandom };

struct PolicyConfig {
  PolicyKind kind = PolicyKind::kThompson;
  int forced_rounds = 0;
  // CUCB exploration constant c in sqrt(c ln t / N_i).
  double cucb_constant = 1.5;
};

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view name);

// Rejects configurations that cannot run on `instance` (ESCB with a
// non-linear reward, odd or negative forced rounds on two-decision sets).
void validate_policy(const PolicyConfig& config, const Instance& instance);

// Lowest-id decision maximising f(x, values).
int argmax_decision(const DecisionSet& set, const RewardModel& reward,
                    std::span<const double> values);

// Stateful selector: holds scratch buffers and the forced-exploration
// coverage table so the per-round call does not allocate.
class Selector {
 public:
  Selector(const PolicyConfig& config, const Instance& instance);

  // Round t >= 1.
  const Decision& select(const PosteriorState& state, std::int64_t t,
                         Engine& engine);

  const PolicyConfig& config() const { return config_; }

 private:
  int select_forced(const PosteriorState& state) const;
  int select_cucb(const PosteriorState& state, std::int64_t t);
  int select_escb(const PosteriorState& state, std::int64_t t) const;

  PolicyConfig config_;
  const Instance* instance_;
  BetaSampler sampler_;
  std::vector<double> scratch_;
  // Lowest-id decision containing each item, -1 if none.
  std::vector<int> cover_;
};

// One-shot form of Selector::select.
const Decision& select(const PolicyConfig& config, const PosteriorState& state,
                       const Instance& instance, std::int64_t t,
                       Engine& engine);

}  // namespace semibandit
