#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace semibandit {

// Two-sided standard normal quantile for a confidence level (0.95 -> 1.96).
double normal_critical_value(double level);

struct MeanCi {
  double mean = 0.0;
  // Absent when fewer than two samples.
  std::optional<double> half_width;
  std::int64_t n = 0;
};

// mean +- z s / sqrt(n), s the sample standard deviation.
MeanCi confidence_interval(std::span<const double> samples, double level = 0.95);

struct ProportionCi {
  double p = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Wilson score interval.
ProportionCi proportion_ci(std::int64_t k, std::int64_t n, double level = 0.95);

// First-hit time of one path. A censored path only tells us tau > tau.
struct TauSample {
  std::int64_t tau = 1;
  bool censored = false;
};

struct TauQuantile {
  double level = 0.0;
  // Absent when the quantile lies beyond the censoring point.
  std::optional<std::int64_t> value;
};

struct TauStatistics {
  std::int64_t n = 0;
  std::int64_t censored = 0;
  // Censored paths enter at their censoring point, so the mean is a lower
  // bound whenever censored > 0.
  MeanCi mean;
  bool mean_is_lower_bound = false;
  std::vector<std::int64_t> grid;
  std::vector<ProportionCi> cdf;       // P(tau <= t)
  std::vector<ProportionCi> survival;  // P(tau >= t) = 1 - P(tau <= t - 1)
  std::vector<TauQuantile> quantiles;
};

inline constexpr double kTauQuantileLevels[] = {0.1, 0.25, 0.5, 0.75, 0.9};

// Quantile q is the smallest t with empirical P(tau <= t) >= q.
TauStatistics tau_statistics(std::span<const TauSample> taus,
                             std::span<const std::int64_t> grid,
                             double level = 0.95);

// Roughly log-spaced distinct integers in [1, limit], always containing 1
// and limit; at most `points` values.
std::vector<std::int64_t> log_grid(std::int64_t limit, int points = 64);

}  // namespace semibandit
