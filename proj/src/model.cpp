#include "semibandit/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace semibandit {

namespace {

constexpr int kMaxZMatchingM = 12;

std::vector<std::uint8_t> block(int d, int first, int last) {
  std::vector<std::uint8_t> x(d, 0);
  for (int i = first; i < last; ++i) x[i] = 1;
  return x;
}

}  // namespace

std::string_view to_string(SetKind kind) {
  switch (kind) {
    case SetKind::kTwoPath: return "two-path";
    case SetKind::kZMatching: return "z-matching";
    case SetKind::kNonlinearPair: return "nonlinear";
    case SetKind::kExplicit: return "explicit";
  }
  return "unknown";
}

SetKind parse_set_kind(std::string_view name) {
  if (name == "two-path") return SetKind::kTwoPath;
  if (name == "z-matching") return SetKind::kZMatching;
  if (name == "nonlinear") return SetKind::kNonlinearPair;
  throw std::invalid_argument("unknown decision set kind '" +
                              std::string(name) +
                              "' (expected two-path, z-matching or nonlinear)");
}

DecisionSet::DecisionSet(int d,
                         std::vector<std::vector<std::uint8_t>> incidences,
                         SetKind kind)
    : d_(d), kind_(kind) {
  if (d < 1) throw std::invalid_argument("decision set needs d >= 1");
  if (incidences.empty()) {
    throw std::invalid_argument("decision set must not be empty");
  }
  std::set<std::vector<std::uint8_t>> seen;
  decisions_.reserve(incidences.size());
  for (auto& x : incidences) {
    if (static_cast<int>(x.size()) != d) {
      throw std::invalid_argument("incidence vector length differs from d");
    }
    Decision decision;
    decision.id = static_cast<int>(decisions_.size());
    for (int i = 0; i < d; ++i) {
      if (x[i] > 1) throw std::invalid_argument("incidence entries must be 0/1");
      if (x[i]) decision.support.push_back(i);
    }
    decision.weight = static_cast<int>(decision.support.size());
    if (!seen.insert(x).second) {
      throw std::invalid_argument("duplicate decision in decision set");
    }
    decision.incidence = std::move(x);
    m_ = std::max(m_, decision.weight);
    decisions_.push_back(std::move(decision));
  }
}

RewardModel RewardModel::nonlinear_product(double gap) {
  if (!(gap >= 0.0 && gap <= 1.0)) {
    throw std::invalid_argument("nonlinear reward gap must lie in [0,1]");
  }
  return {Kind::kNonlinearProduct, gap};
}

Instance make_instance(DecisionSet set, std::vector<double> theta,
                       RewardModel reward) {
  if (static_cast<int>(theta.size()) != set.d()) {
    throw std::invalid_argument("theta length differs from d");
  }
  for (double v : theta) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("theta components must lie in [0,1]");
    }
  }
  if (!reward.is_linear() && set.kind() != SetKind::kNonlinearPair) {
    throw std::invalid_argument(
        "the product reward is only defined on the nonlinear pair set");
  }
  return Instance{std::move(set), std::move(theta), reward};
}

DecisionSet make_two_path_set(int m) {
  if (m < 1) throw std::invalid_argument("two-path set needs m >= 1");
  const int d = 2 * m;
  return DecisionSet(d, {block(d, 0, m), block(d, m, d)}, SetKind::kTwoPath);
}

// Matchings of the even cycle C_{2m}. Cycle edge k joins vertices k and
// k+1 (mod 2m); item j < m is cycle edge 2j and item m + j is cycle edge
// 2j + 1, so items 0..m-1 and m..2m-1 are the two perfect matchings.
DecisionSet make_z_matching_set(int m) {
  if (m < 2) throw std::invalid_argument("z-matching set needs m >= 2");
  if (m > kMaxZMatchingM) {
    throw std::invalid_argument("z-matching set supports m <= " +
                                std::to_string(kMaxZMatchingM));
  }
  const int d = 2 * m;
  auto item_of_edge = [m](int edge) {
    return edge % 2 == 0 ? edge / 2 : m + edge / 2;
  };

  std::vector<std::vector<std::uint8_t>> matchings;
  std::vector<int> chosen;
  std::function<void(int)> extend = [&](int edge) {
    if (edge == d) {
      if (chosen.empty()) return;
      // Edges 0 and d-1 share vertex 0.
      if (chosen.front() == 0 && chosen.back() == d - 1) return;
      std::vector<std::uint8_t> x(d, 0);
      for (int e : chosen) x[item_of_edge(e)] = 1;
      matchings.push_back(std::move(x));
      return;
    }
    extend(edge + 1);
    if (chosen.empty() || chosen.back() != edge - 1) {
      chosen.push_back(edge);
      extend(edge + 1);
      chosen.pop_back();
    }
  };
  extend(0);

  std::sort(matchings.begin(), matchings.end(), std::greater<>());
  return DecisionSet(d, std::move(matchings), SetKind::kZMatching);
}

std::vector<double> make_two_path_theta(int m, double gap) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  const double ratio = gap / m;
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw std::invalid_argument("gap/m must lie in [0,1]");
  }
  std::vector<double> theta(2 * m, 1.0);
  std::fill(theta.begin() + m, theta.end(), 1.0 - ratio);
  return theta;
}

Instance make_two_path_instance(int m, double gap) {
  return make_instance(make_two_path_set(m), make_two_path_theta(m, gap),
                       RewardModel::linear());
}

Instance make_z_matching_instance(int m, double gap) {
  return make_instance(make_z_matching_set(m), make_two_path_theta(m, gap),
                       RewardModel::linear());
}

Instance make_nonlinear_instance(int m, double gap) {
  if (m < 1) throw std::invalid_argument("nonlinear instance needs m >= 1");
  if (!(gap > 0.0 && gap < 1.0)) {
    throw std::invalid_argument("nonlinear instance needs gap in (0,1)");
  }
  const int d = m + 1;
  DecisionSet set(d, {block(d, 0, m), block(d, m, d)},
                  SetKind::kNonlinearPair);
  return make_instance(std::move(set), std::vector<double>(d, 1.0),
                       RewardModel::nonlinear_product(gap));
}

double reward_of(const RewardModel& reward, const Decision& decision,
                 std::span<const double> values) {
  if (reward.is_linear()) {
    double sum = 0.0;
    for (int i : decision.support) sum += values[i];
    return sum;
  }
  if (decision.id != 0) return 1.0 - reward.gap;
  double product = 1.0;
  for (int i : decision.support) product *= values[i];
  return product;
}

double expected_reward(const Instance& instance, const Decision& decision) {
  return reward_of(instance.reward, decision, instance.theta);
}

Gaps gaps(const Instance& instance) {
  const auto& decisions = instance.set.decisions();
  std::vector<double> rewards;
  rewards.reserve(decisions.size());
  for (const auto& x : decisions) rewards.push_back(expected_reward(instance, x));

  Gaps out;
  const auto best = std::max_element(rewards.begin(), rewards.end());
  out.optimal_id = static_cast<int>(best - rewards.begin());
  // Differences below this are rounding noise in theta^T x, not gaps.
  const double tolerance = 1e-12 * std::max(1.0, std::abs(*best));
  out.per_decision.reserve(rewards.size());
  for (double r : rewards) {
    double gap = *best - r;
    if (gap <= tolerance) gap = 0.0;
    out.per_decision.push_back(gap);
    out.max_gap = std::max(out.max_gap, gap);
    if (gap > 0.0 && (!out.min_positive || gap < *out.min_positive)) {
      out.min_positive = gap;
    }
  }
  return out;
}

}  // namespace semibandit
