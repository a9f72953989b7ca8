#include "semibandit/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semibandit {

double PosteriorState::empirical_mean(int i) const {
  const std::int64_t n = samples(i);
  return static_cast<double>(successes[i]) / static_cast<double>(std::max<std::int64_t>(n, 1));
}

void posterior_update(PosteriorState& state, const Decision& decision,
                      const Feedback& feedback) {
  const int d = state.d();
  if (static_cast<int>(feedback.observed.size()) != d) {
    throw std::invalid_argument("feedback length differs from d");
  }
  for (int i = 0; i < d; ++i) {
    const bool observed = feedback.observed[i] != Feedback::kUnobserved;
    if (observed != decision.contains(i)) {
      throw std::invalid_argument(
          "feedback must be observed exactly on the decision's support");
    }
  }
  for (int i : decision.support) {
    if (feedback.observed[i]) {
      ++state.successes[i];
    } else {
      ++state.failures[i];
    }
  }
}

double BetaSampler::operator()(Engine& engine, double a, double b) {
  using Param = std::gamma_distribution<double>::param_type;
  if (b == 1.0) {
    const double u = uniform01(engine);
    return a == 1.0 ? u : std::pow(u, 1.0 / a);
  }
  if (a == 1.0) return 1.0 - std::pow(uniform01(engine), 1.0 / b);
  const double x = gamma_(engine, Param(a, 1.0));
  const double y = gamma_(engine, Param(b, 1.0));
  return x / (x + y);
}

double order_statistic_beta(Engine& engine, int a, int b) {
  if (a < 1 || b < 1) {
    throw std::invalid_argument("order-statistic sampler needs a, b >= 1");
  }
  std::vector<double> u(a + b - 1);
  for (double& v : u) v = uniform01(engine);
  std::nth_element(u.begin(), u.begin() + (a - 1), u.end());
  return u[a - 1];
}

void ts_sample(const PosteriorState& state, Engine& engine,
               BetaSampler& sampler, std::span<double> out) {
  for (int i = 0; i < state.d(); ++i) {
    out[i] = sampler(engine, static_cast<double>(state.successes[i] + 1),
                     static_cast<double>(state.failures[i] + 1));
  }
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kThompson: return "ts";
    case PolicyKind::kThompsonForced: return "ts-forced";
    case PolicyKind::kCucb: return "cucb";
    case PolicyKind::kEscb: return "escb";
    case PolicyKind::kRandom: return "random";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
  if (name == "ts") return PolicyKind::kThompson;
  if (name == "ts-forced") return PolicyKind::kThompsonForced;
  if (name == "cucb") return PolicyKind::kCucb;
  if (name == "escb") return PolicyKind::kEscb;
  if (name == "random") return PolicyKind::kRandom;
  throw std::invalid_argument("unknown policy '" + std::string(name) +
                              "' (expected ts, ts-forced, cucb, escb, random)");
}

void validate_policy(const PolicyConfig& config, const Instance& instance) {
  if (config.kind == PolicyKind::kEscb && !instance.reward.is_linear()) {
    throw std::invalid_argument("escb requires a linear reward");
  }
  if (config.forced_rounds < 0) {
    throw std::invalid_argument("forced_rounds must be >= 0");
  }
  const SetKind kind = instance.set.kind();
  if (config.kind == PolicyKind::kThompsonForced &&
      (kind == SetKind::kTwoPath || kind == SetKind::kNonlinearPair) &&
      config.forced_rounds % 2 != 0) {
    throw std::invalid_argument(
        "forced_rounds must be even on two-decision sets");
  }
  if (!(config.cucb_constant > 0.0)) {
    throw std::invalid_argument("cucb constant must be positive");
  }
}

int argmax_decision(const DecisionSet& set, const RewardModel& reward,
                    std::span<const double> values) {
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (const auto& x : set.decisions()) {
    const double v = reward_of(reward, x, values);
    if (v > best_value) {
      best_value = v;
      best = x.id;
    }
  }
  return best;
}

Selector::Selector(const PolicyConfig& config, const Instance& instance)
    : config_(config),
      instance_(&instance),
      scratch_(instance.set.d(), 0.0),
      cover_(instance.set.d(), -1) {
  validate_policy(config, instance);
  for (const auto& x : instance.set.decisions()) {
    for (int i : x.support) {
      if (cover_[i] < 0) cover_[i] = x.id;
    }
  }
}

int Selector::select_forced(const PosteriorState& state) const {
  int item = -1;
  for (int i = 0; i < state.d(); ++i) {
    if (cover_[i] < 0) continue;
    if (item < 0 || state.samples(i) < state.samples(item)) item = i;
  }
  return cover_[item];
}

int Selector::select_cucb(const PosteriorState& state, std::int64_t t) {
  const DecisionSet& set = instance_->set;
  // A decision with an unsampled item is played first (lowest id).
  for (const auto& x : set.decisions()) {
    for (int i : x.support) {
      if (state.samples(i) == 0) return x.id;
    }
  }
  const double log_t = std::log(static_cast<double>(t));
  for (int i = 0; i < state.d(); ++i) {
    const std::int64_t n = state.samples(i);
    if (n == 0) {
      scratch_[i] = 1.0;
      continue;
    }
    const double radius =
        std::sqrt(config_.cucb_constant * log_t / static_cast<double>(n));
    scratch_[i] = std::min(1.0, state.empirical_mean(i) + radius);
  }
  return argmax_decision(set, instance_->reward, scratch_);
}

int Selector::select_escb(const PosteriorState& state, std::int64_t t) const {
  const DecisionSet& set = instance_->set;
  const double td = static_cast<double>(t);
  const double log_log_t = t < 3 ? 0.0 : std::log(std::log(td));
  const double exploration = (std::log(td) + 4.0 * set.m() * log_log_t) / 2.0;

  int best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (const auto& x : set.decisions()) {
    double mean = 0.0;
    double inverse_counts = 0.0;
    bool unsampled = false;
    for (int i : x.support) {
      const std::int64_t n = state.samples(i);
      if (n == 0) {
        unsampled = true;
        break;
      }
      mean += state.empirical_mean(i);
      inverse_counts += 1.0 / static_cast<double>(n);
    }
    if (unsampled) return x.id;
    const double index = mean + std::sqrt(exploration * inverse_counts);
    if (index > best_index) {
      best_index = index;
      best = x.id;
    }
  }
  return best;
}

const Decision& Selector::select(const PosteriorState& state, std::int64_t t,
                                 Engine& engine) {
  const DecisionSet& set = instance_->set;
  int id = 0;
  switch (config_.kind) {
    case PolicyKind::kThompsonForced:
      if (t <= config_.forced_rounds) {
        id = select_forced(state);
        break;
      }
      [[fallthrough]];
    case PolicyKind::kThompson:
      ts_sample(state, engine, sampler_, scratch_);
      id = argmax_decision(set, instance_->reward, scratch_);
      break;
    case PolicyKind::kCucb:
      id = select_cucb(state, t);
      break;
    case PolicyKind::kEscb:
      id = select_escb(state, t);
      break;
    case PolicyKind::kRandom: {
      std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
      id = static_cast<int>(pick(engine));
      break;
    }
  }
  return set[id];
}

const Decision& select(const PolicyConfig& config, const PosteriorState& state,
                       const Instance& instance, std::int64_t t,
                       Engine& engine) {
  Selector selector(config, instance);
  return selector.select(state, t, engine);
}

}  // namespace semibandit
