#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include <boost/math/special_functions/beta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "semibandit/random.hpp"
#include "semibandit/special_functions.hpp"

using namespace semibandit;
using Big = boost::multiprecision::cpp_bin_float_50;

TEST_CASE("Irwin-Hall CDF examples") {
  CHECK(irwin_hall_cdf(3, 0.5) == doctest::Approx(0.125 / 6.0).epsilon(1e-14));
  CHECK(irwin_hall_cdf(1, 0.7) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(irwin_hall_cdf(2, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(irwin_hall_cdf(4, -1.0) == 0.0);
  CHECK(irwin_hall_cdf(4, 0.0) == 0.0);
  CHECK(irwin_hall_cdf(4, 4.0) == 1.0);
  CHECK(irwin_hall_cdf(4, 9.0) == 1.0);
  CHECK_THROWS_AS(irwin_hall_cdf(0, 0.5), std::invalid_argument);
}

TEST_CASE("Irwin-Hall lower tail equals x^m / m! to 1e-12") {
  for (int m = 1; m <= 20; ++m) {
    for (double x : {1e-6, 0.01, 0.1, 0.25, 1.0 / 3.0, 0.5, 0.9, 1.0}) {
      Big factorial = 1;
      for (int k = 2; k <= m; ++k) factorial *= k;
      const Big exact = boost::multiprecision::pow(Big(x), m) / factorial;
      const double got = irwin_hall_cdf(m, x);
      CAPTURE(m);
      CAPTURE(x);
      CHECK(std::abs(got - exact.convert_to<double>()) <= 1e-12 * exact.convert_to<double>());
    }
  }
}

TEST_CASE("Irwin-Hall symmetry and Monte Carlo agreement") {
  for (int m = 1; m <= 12; ++m) {
    for (double f : {0.05, 0.3, 0.5, 0.77, 0.95}) {
      const double x = f * m;
      CHECK(irwin_hall_cdf(m, x) + irwin_hall_cdf(m, m - x) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  Engine engine(2024);
  const int n = 1000000;
  int hits2 = 0;
  for (int k = 0; k < n; ++k) hits2 += uniform01(engine) + uniform01(engine) <= 1.0;
  CHECK(std::abs(hits2 / double(n) - irwin_hall_cdf(2, 1.0)) <= 2e-3);
  for (double x : {0.7, 1.4, 2.2}) {
    int hits3 = 0;
    for (int k = 0; k < n; ++k) {
      hits3 += uniform01(engine) + uniform01(engine) + uniform01(engine) <= x;
    }
    const double p = irwin_hall_cdf(3, x);
    CHECK(std::abs(hits3 / double(n) - p) <= 3.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_CASE("incomplete beta closed forms") {
  CHECK(regularized_incomplete_beta(1, 1, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(regularized_incomplete_beta(1, 4, 0.3) == doctest::Approx(1 - std::pow(0.7, 4)).epsilon(1e-13));
  CHECK(regularized_incomplete_beta(3, 3, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(regularized_incomplete_beta(2, 5, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2, 5, 1.0) == 1.0);
  CHECK_THROWS_AS(regularized_incomplete_beta(0, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(regularized_incomplete_beta(1, 1, 1.5), std::invalid_argument);
}

TEST_CASE("incomplete beta matches boost to 1e-10 relative") {
  Engine engine(31);
  double worst = 0.0;
  for (int k = 0; k < 3000; ++k) {
    const double a = std::exp(uniform01(engine) * std::log(1e4));
    const double b = std::exp(uniform01(engine) * std::log(1e4));
    // Concentrate x around the mean so both tails and the bulk are hit.
    const double mean = a / (a + b);
    const double sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1)));
    const double x = std::clamp(mean + sd * 8.0 * (uniform01(engine) - 0.5), 1e-12, 1 - 1e-12);
    const double expected = boost::math::ibeta(a, b, x);
    if (expected < 1e-280) continue;
    const double got = regularized_incomplete_beta(a, b, x);
    worst = std::max(worst, std::abs(got - expected) / expected);
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("Bernoulli KL divergence") {
  CHECK(kl_bernoulli(0.5, 0.5) == 0.0);
  CHECK(kl_bernoulli(0.5, 0.25) == doctest::Approx(0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0)));
  CHECK(kl_bernoulli(0.5, 0.25) == doctest::Approx(0.14384).epsilon(1e-4));
  CHECK(kl_bernoulli(1.0, 0.9) == doctest::Approx(std::log(1 / 0.9)));
  CHECK(kl_bernoulli(0.0, 0.2) == doctest::Approx(std::log(1 / 0.8)));
  CHECK(std::isinf(kl_bernoulli(0.5, 0.0)));
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double mean = i / 40.0;
      const double x = std::clamp(j / 40.0, 1e-9, 1 - 1e-9);
      const double d = kl_bernoulli(mean, x);
      CHECK(d >= 2.0 * (mean - x) * (mean - x) - 1e-15);
    }
  }
}

TEST_CASE("log beta") {
  CHECK(log_beta(1, 1) == doctest::Approx(0.0));
  CHECK(std::exp(log_beta(2, 3)) == doctest::Approx(1.0 / 12.0));
}
