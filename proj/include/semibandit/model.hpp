#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semibandit {

enum class SetKind { kTwoPath, kZMatching, kNonlinearPair, kExplicit };

std::string_view to_string(SetKind kind);
SetKind parse_set_kind(std::string_view name);

// A binary decision over d items. `support` lists the items with x_i = 1 in
// increasing order; it is what the hot loops iterate over.
struct Decision {
  int id = 0;
  std::vector<std::uint8_t> incidence;
  std::vector<int> support;
  int weight = 0;

  bool contains(int item) const { return incidence[item] != 0; }
};

class DecisionSet {
 public:
  // Validates: non-empty, equal lengths, pairwise distinct incidences.
  // Decision ids are reassigned to the list position.
  DecisionSet(int d, std::vector<std::vector<std::uint8_t>> incidences,
              SetKind kind);

  int d() const { return d_; }
  int m() const { return m_; }
  SetKind kind() const { return kind_; }
  std::size_t size() const { return decisions_.size(); }
  const Decision& operator[](std::size_t id) const { return decisions_[id]; }
  const std::vector<Decision>& decisions() const { return decisions_; }

 private:
  int d_;
  int m_ = 0;
  SetKind kind_;
  std::vector<Decision> decisions_;
};

// Linear: f(x, z) = z^T x. NonlinearProduct: f(x, z) = prod_{i in x} z_i for
// decision 0 (the weight-m block) and the constant 1 - gap for every other
// decision.
struct RewardModel {
  enum class Kind { kLinear, kNonlinearProduct };
  Kind kind = Kind::kLinear;
  double gap = 0.0;

  static RewardModel linear() { return {}; }
  static RewardModel nonlinear_product(double gap);
  bool is_linear() const { return kind == Kind::kLinear; }
};

struct Instance {
  DecisionSet set;
  std::vector<double> theta;
  RewardModel reward;
};

// Throws std::invalid_argument when theta is out of [0,1], has the wrong
// length, or the reward model does not fit the set kind.
Instance make_instance(DecisionSet set, std::vector<double> theta,
                       RewardModel reward);

DecisionSet make_two_path_set(int m);
DecisionSet make_z_matching_set(int m);

// theta_i = 1 on the first m items and 1 - gap/m on the last m.
std::vector<double> make_two_path_theta(int m, double gap);

Instance make_two_path_instance(int m, double gap);
Instance make_z_matching_instance(int m, double gap);
Instance make_nonlinear_instance(int m, double gap);

// f(x, values) under the instance's reward model. `values` is either the
// parameter vector, a Thompson sample or an index vector.
double reward_of(const RewardModel& reward, const Decision& decision,
                 std::span<const double> values);

double expected_reward(const Instance& instance, const Decision& decision);

struct Gaps {
  std::vector<double> per_decision;
  std::optional<double> min_positive;
  int optimal_id = 0;
  double max_gap = 0.0;

  bool is_optimal(int id) const { return per_decision[id] == 0.0; }
};

Gaps gaps(const Instance& instance);

}  // namespace semibandit
