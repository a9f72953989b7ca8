#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "semibandit/model.hpp"
#include "semibandit/policies.hpp"
#include "semibandit/stats.hpp"

namespace semibandit {

// Instance description as it appears in configs: the gap is given either
// directly or as gap/m.
struct InstanceSpec {
  SetKind kind = SetKind::kTwoPath;
  int m = 1;
  std::optional<double> delta;
  std::optional<double> delta_over_m;

  double gap() const;
  Instance build() const;
};

enum class StopMode { kFixedHorizon, kStopAtTau };

std::string_view to_string(StopMode mode);
StopMode parse_stop_mode(std::string_view name);

struct ExperimentConfig {
  InstanceSpec instance;
  PolicyConfig policy;
  StopMode stop_mode = StopMode::kFixedHorizon;
  std::int64_t horizon = 1000;
  std::int64_t cap = 10'000'000;
  std::int64_t paths = 1000;
  std::uint64_t seed = 1;
  // Rounds at which cumulative regret is recorded; empty means a 64-point
  // log grid over [1, horizon].
  std::vector<std::int64_t> regret_points;
  std::optional<std::string> output_dir;
  double level = 0.95;
};

// Throws std::invalid_argument on an inconsistent config.
void validate(const ExperimentConfig& config);

// Raised for configuration files that cannot be read or do not parse;
// `what()` carries a line number where one is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// One sample path. With forced exploration, tau counts rounds after the
// forced phase (the forced phase plays every decision by construction).
// tau is the first such round playing an optimal decision; a censored
// trace only says tau > tau.
struct Trace {
  std::int64_t path_index = 0;
  std::int64_t tau = 1;
  bool censored = false;
  std::vector<double> regret_at;
};

// Fixed horizon: runs `limit` rounds and samples regret at `regret_points`.
// Stop at tau: runs until tau or until tau would exceed `limit`.
Trace run_path(const Instance& instance, const PolicyConfig& policy,
               StopMode stop_mode, std::int64_t limit,
               std::span<const std::int64_t> regret_points,
               std::uint64_t path_seed, std::int64_t path_index = 0);

std::uint64_t path_seed(std::uint64_t master_seed, std::int64_t path_index);

struct RegretPoint {
  std::int64_t t = 0;
  MeanCi regret;
  std::optional<double> lower_bound;
};

struct Summary {
  ExperimentConfig config;
  double gap = 0.0;
  std::optional<double> min_gap;
  std::int64_t tau_limit = 0;
  TauStatistics tau;
  // Empty under stop-at-tau.
  std::vector<RegretPoint> regret;
  std::vector<Trace> traces;
};

// Runs config.paths paths on up to `threads` workers (0 means hardware
// concurrency). Output does not depend on the thread count.
Summary run_experiment(const ExperimentConfig& config, int threads = 0);

// The lower bound matching (instance, policy) at horizon t, if one applies
// and its hypotheses hold.
std::optional<double> theory_lower_bound(const ExperimentConfig& config,
                                         std::int64_t t);

// Writes summary.json, tau_cdf.csv, regret.csv and taus.csv. Throws IoError.
void write_outputs(const Summary& summary, const std::filesystem::path& dir);

std::string summary_json(const Summary& summary);

// printf("%.10g").
std::string format_float(double x);

}  // namespace semibandit
