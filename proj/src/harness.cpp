#include "semibandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "semibandit/bounds.hpp"
#include "semibandit/env.hpp"

namespace semibandit {

double InstanceSpec::gap() const {
  if (delta.has_value() == delta_over_m.has_value()) {
    throw std::invalid_argument("give exactly one of delta and delta_over_m");
  }
  return delta ? *delta : *delta_over_m * m;
}

Instance InstanceSpec::build() const {
  switch (kind) {
    case SetKind::kTwoPath: return make_two_path_instance(m, gap());
    case SetKind::kZMatching: return make_z_matching_instance(m, gap());
    case SetKind::kNonlinearPair: return make_nonlinear_instance(m, gap());
    case SetKind::kExplicit: break;
  }
  throw std::invalid_argument("explicit decision sets cannot be built from a spec");
}

std::string_view to_string(StopMode mode) {
  return mode == StopMode::kFixedHorizon ? "fixed-horizon" : "stop-at-tau";
}

StopMode parse_stop_mode(std::string_view name) {
  if (name == "fixed-horizon") return StopMode::kFixedHorizon;
  if (name == "stop-at-tau") return StopMode::kStopAtTau;
  throw std::invalid_argument("unknown stop mode '" + std::string(name) +
                              "' (expected fixed-horizon, stop-at-tau)");
}

void validate(const ExperimentConfig& config) {
  if (config.paths < 1) throw std::invalid_argument("paths must be >= 1");
  if (config.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (config.cap < 1) throw std::invalid_argument("cap must be >= 1");
  if (!(config.level > 0.0 && config.level < 1.0)) {
    throw std::invalid_argument("level must lie in (0,1)");
  }
  const auto& points = config.regret_points;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k] < 1 || points[k] > config.horizon) {
      throw std::invalid_argument("regret points must lie in [1, horizon]");
    }
    if (k > 0 && points[k] <= points[k - 1]) {
      throw std::invalid_argument("regret points must be strictly increasing");
    }
  }
  validate_policy(config.policy, config.instance.build());
}

std::uint64_t path_seed(std::uint64_t master_seed, std::int64_t path_index) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(path_index));
}

Trace run_path(const Instance& instance, const PolicyConfig& policy,
               StopMode stop_mode, std::int64_t limit,
               std::span<const std::int64_t> regret_points,
               std::uint64_t seed, std::int64_t path_index) {
  const Gaps g = gaps(instance);
  Selector selector(policy, instance);
  PosteriorState state(instance.set.d());
  Engine engine(stream_seed(seed, Stream::kPolicy));
  OutcomeStream outcomes(stream_seed(seed, Stream::kEnvironment));
  Feedback feedback;
  RegretAccount regret;

  const std::int64_t forced =
      policy.kind == PolicyKind::kThompsonForced ? policy.forced_rounds : 0;
  const bool stop_at_tau = stop_mode == StopMode::kStopAtTau;
  const std::int64_t rounds = stop_at_tau ? forced + limit : limit;

  Trace trace;
  trace.path_index = path_index;
  trace.regret_at.reserve(regret_points.size());
  bool hit = false;
  std::size_t next_point = 0;
  for (std::int64_t t = 1; t <= rounds; ++t) {
    const Decision& x = selector.select(state, t, engine);
    if (!hit && t > forced && g.is_optimal(x.id)) {
      hit = true;
      trace.tau = t - forced;
      if (stop_at_tau) break;
    }
    env_step(instance, x, outcomes, feedback);
    posterior_update(state, x, feedback);
    account(regret, g, x);
    while (next_point < regret_points.size() && regret_points[next_point] == t) {
      trace.regret_at.push_back(regret.cumulative);
      ++next_point;
    }
  }
  if (!hit) {
    trace.censored = true;
    trace.tau = std::max<std::int64_t>(rounds - forced, 0);
  }
  return trace;
}

std::optional<double> theory_lower_bound(const ExperimentConfig& config,
                                         std::int64_t t) {
  const auto kind = config.instance.kind;
  const auto policy = config.policy.kind;
  BoundSpec spec;
  spec.m = config.instance.m;
  spec.gap = config.instance.gap();
  spec.ell = config.policy.forced_rounds;
  spec.horizon = static_cast<double>(t);
  const bool ts = policy == PolicyKind::kThompson;
  const bool forced = policy == PolicyKind::kThompsonForced;
  if (kind == SetKind::kTwoPath && (ts || forced)) {
    spec.theorem = ts ? Theorem::kLinear : Theorem::kForced;
  } else if (kind == SetKind::kNonlinearPair && (ts || forced)) {
    spec.theorem = ts ? Theorem::kNonlinear : Theorem::kNonlinearForced;
  } else {
    return std::nullopt;
  }
  if (ts) spec.ell = 0;
  try {
    const BoundResult r = evaluate_bound(spec);
    if (!r.preconditions_met()) return std::nullopt;
    return r.value;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

Summary run_experiment(const ExperimentConfig& config, int threads) {
  validate(config);
  const Instance instance = config.instance.build();
  const bool fixed = config.stop_mode == StopMode::kFixedHorizon;
  const std::vector<std::int64_t> points =
      !fixed ? std::vector<std::int64_t>{}
             : config.regret_points.empty() ? log_grid(config.horizon)
                                            : config.regret_points;
  const std::int64_t limit = fixed ? config.horizon : config.cap;

  Summary summary;
  summary.config = config;
  summary.traces.resize(config.paths);

  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::int64_t>(threads, config.paths));

  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::int64_t i = next++; i < config.paths; i = next++) {
        summary.traces[i] = run_path(instance, config.policy, config.stop_mode,
                                     limit, points, path_seed(config.seed, i), i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = config.paths;
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const Gaps g = gaps(instance);
  summary.gap = config.instance.gap();
  summary.min_gap = g.min_positive;
  const std::int64_t forced = config.policy.kind == PolicyKind::kThompsonForced
                                  ? config.policy.forced_rounds
                                  : 0;
  summary.tau_limit = fixed ? std::max<std::int64_t>(config.horizon - forced, 1)
                            : config.cap;

  std::vector<TauSample> taus;
  taus.reserve(summary.traces.size());
  for (const auto& tr : summary.traces) taus.push_back({tr.tau, tr.censored});
  const auto grid = log_grid(summary.tau_limit);
  summary.tau = tau_statistics(taus, grid, config.level);

  std::vector<double> column(summary.traces.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (std::size_t i = 0; i < summary.traces.size(); ++i) {
      column[i] = summary.traces[i].regret_at[k];
    }
    summary.regret.push_back({points[k], confidence_interval(column, config.level),
                              theory_lower_bound(config, points[k])});
  }
  return summary;
}

std::string format_float(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

namespace {

std::string optional_float(const std::optional<double>& x) {
  return x ? format_float(*x) : std::string();
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

void write_outputs(const Summary& summary, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  {
    const auto path = dir / "summary.json";
    auto out = open_output(path);
    out << summary_json(summary) << '\n';
    finish(out, path);
  }
  {
    const auto path = dir / "tau_cdf.csv";
    auto out = open_output(path);
    out << "t,cdf,ci_lo,ci_hi\n";
    const auto& tau = summary.tau;
    for (std::size_t k = 0; k < tau.grid.size(); ++k) {
      out << tau.grid[k] << ',' << format_float(tau.cdf[k].p) << ','
          << format_float(tau.cdf[k].lo) << ',' << format_float(tau.cdf[k].hi)
          << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = dir / "regret.csv";
    auto out = open_output(path);
    out << "t,mean_regret,ci_half_width,theory_lower_bound\n";
    for (const auto& p : summary.regret) {
      out << p.t << ',' << format_float(p.regret.mean) << ','
          << optional_float(p.regret.half_width) << ','
          << optional_float(p.lower_bound) << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = dir / "taus.csv";
    auto out = open_output(path);
    out << "path_index,tau,censored\n";
    for (const auto& tr : summary.traces) {
      out << tr.path_index << ',' << tr.tau << ',' << (tr.censored ? 1 : 0) << '\n';
    }
    finish(out, path);
  }
}

}  // namespace semibandit
