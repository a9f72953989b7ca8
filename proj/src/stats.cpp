#include "semibandit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace semibandit {

double normal_critical_value(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0,1)");
  }
  const boost::math::normal standard;
  return boost::math::quantile(standard, 0.5 + level / 2.0);
}

MeanCi confidence_interval(std::span<const double> samples, double level) {
  MeanCi ci;
  ci.n = static_cast<std::int64_t>(samples.size());
  if (samples.empty()) return ci;
  double sum = 0.0;
  for (double x : samples) sum += x;
  ci.mean = sum / ci.n;
  if (ci.n < 2) return ci;
  double ss = 0.0;
  for (double x : samples) ss += (x - ci.mean) * (x - ci.mean);
  const double sd = std::sqrt(ss / (ci.n - 1));
  ci.half_width = normal_critical_value(level) * sd / std::sqrt(static_cast<double>(ci.n));
  return ci;
}

ProportionCi proportion_ci(std::int64_t k, std::int64_t n, double level) {
  if (n < 1 || k < 0 || k > n) {
    throw std::invalid_argument("proportion_ci needs 0 <= k <= n, n >= 1");
  }
  const double z = normal_critical_value(level);
  const double nn = static_cast<double>(n);
  const double p = k / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

TauStatistics tau_statistics(std::span<const TauSample> taus,
                             std::span<const std::int64_t> grid, double level) {
  if (taus.empty()) throw std::invalid_argument("tau_statistics needs >= 1 path");
  TauStatistics s;
  s.n = static_cast<std::int64_t>(taus.size());

  std::vector<double> values;
  values.reserve(taus.size());
  std::vector<std::int64_t> observed;
  for (const auto& t : taus) {
    values.push_back(static_cast<double>(t.tau));
    if (t.censored) {
      ++s.censored;
    } else {
      observed.push_back(t.tau);
    }
  }
  std::sort(observed.begin(), observed.end());
  s.mean = confidence_interval(values, level);
  s.mean_is_lower_bound = s.censored > 0;

  // Number of uncensored taus <= t.
  auto at_most = [&](std::int64_t t) {
    return static_cast<std::int64_t>(
        std::upper_bound(observed.begin(), observed.end(), t) - observed.begin());
  };
  s.grid.assign(grid.begin(), grid.end());
  for (std::int64_t t : s.grid) {
    const std::int64_t below = at_most(t);
    s.cdf.push_back(proportion_ci(below, s.n, level));
    s.survival.push_back(proportion_ci(s.n - at_most(t - 1), s.n, level));
  }

  for (double q : kTauQuantileLevels) {
    TauQuantile tq{q, std::nullopt};
    // Smallest rank k with k / n >= q.
    const auto k = static_cast<std::int64_t>(std::ceil(q * s.n - 1e-9));
    if (k >= 1 && k <= static_cast<std::int64_t>(observed.size())) {
      tq.value = observed[k - 1];
    }
    s.quantiles.push_back(tq);
  }
  return s;
}

std::vector<std::int64_t> log_grid(std::int64_t limit, int points) {
  if (limit < 1) throw std::invalid_argument("grid limit must be >= 1");
  if (points < 2) throw std::invalid_argument("grid needs >= 2 points");
  std::vector<std::int64_t> grid;
  const double log_limit = std::log(static_cast<double>(limit));
  for (int k = 0; k < points; ++k) {
    const double x = std::exp(log_limit * k / (points - 1));
    std::int64_t t = std::clamp<std::int64_t>(std::llround(x), 1, limit);
    if (grid.empty() || t > grid.back()) grid.push_back(t);
  }
  if (grid.back() != limit) grid.push_back(limit);
  return grid;
}

}  // namespace semibandit
