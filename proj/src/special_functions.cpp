#include "semibandit/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semibandit {

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 100000;
  constexpr double kEpsilon = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) {
    throw std::invalid_argument("incomplete beta needs a, b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("incomplete beta needs x in [0,1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double kl_bernoulli(double mean, double x) {
  if (!(mean >= 0.0 && mean <= 1.0 && x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("kl_bernoulli arguments must lie in [0,1]");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double d = 0.0;
  if (mean > 0.0) d += x == 0.0 ? kInf : mean * std::log(mean / x);
  if (mean < 1.0) {
    d += x == 1.0 ? kInf : (1.0 - mean) * std::log((1.0 - mean) / (1.0 - x));
  }
  return std::max(d, 0.0);
}

double irwin_hall_cdf(int m, double x) {
  if (m < 1) throw std::invalid_argument("irwin_hall_cdf needs m >= 1");
  if (x <= 0.0) return 0.0;
  if (x >= m) return 1.0;
  if (x > 0.5 * m) return 1.0 - irwin_hall_cdf(m, m - x);

  long double factorial = 1.0L;
  for (int k = 2; k <= m; ++k) factorial *= k;
  const long double xl = x;
  if (x <= 1.0) return static_cast<double>(std::pow(xl, m) / factorial);

  // Inclusion-exclusion over the floor(x) integer corners.
  long double sum = 0.0L;
  long double binomial = 1.0L;
  const int corners = static_cast<int>(std::floor(x));
  for (int k = 0; k <= corners; ++k) {
    const long double term = binomial * std::pow(xl - k, m);
    sum += (k % 2 == 0) ? term : -term;
    binomial = binomial * (m - k) / (k + 1);
  }
  const long double cdf = sum / factorial;
  return static_cast<double>(std::clamp(cdf, 0.0L, 1.0L));
}

}  // namespace semibandit
