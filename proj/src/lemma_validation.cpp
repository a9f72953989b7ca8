#include "semibandit/lemma_validation.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "semibandit/bounds.hpp"
#include "semibandit/policies.hpp"
#include "semibandit/random.hpp"
#include "semibandit/special_functions.hpp"

namespace semibandit {

namespace {

enum SuiteSeed : std::uint64_t { kProductSuite = 1, kTailSuite = 2, kSumSuite = 3 };

double uniform_in(Engine& engine, double lo, double hi) {
  return lo + (hi - lo) * uniform01(engine);
}

LemmaCheck monte_carlo_check(std::string suite, std::string label,
                             std::int64_t hits, std::int64_t samples,
                             double bound) {
  LemmaCheck c;
  c.suite = std::move(suite);
  c.label = std::move(label);
  const double n = static_cast<double>(samples);
  c.estimate = static_cast<double>(hits) / n;
  c.standard_error = std::sqrt(c.estimate * (1.0 - c.estimate) / n);
  c.bound = bound;
  c.passed = c.estimate - 3.0 * c.standard_error <= bound;
  return c;
}

std::string format(const char* fmt, auto... args) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

void product_suite(const ValidationOptions& opt, ValidationReport& report) {
  Engine engine(derive_seed(opt.seed, kProductSuite));
  for (int m : {3, 5}) {
    for (double gap : {0.5, 0.9}) {
      const double threshold = 1.0 - gap;
      std::int64_t hits = 0;
      for (std::int64_t s = 0; s < opt.samples; ++s) {
        double product = 1.0;
        for (int i = 0; i < m && product >= threshold; ++i) {
          product *= uniform01(engine);
        }
        hits += product >= threshold;
      }
      report.checks.push_back(monte_carlo_check(
          "product", format("m=%d gap=%g", m, gap), hits, opt.samples,
          opt.bound_scale * beta_product_tail_bound(m, 1.0, gap)));
    }
  }
}

void tail_suite(const ValidationOptions& opt, ValidationReport& report) {
  Engine engine(derive_seed(opt.seed, kTailSuite));
  for (int k = 0; k < 200; ++k) {
    // Log-uniform in [1, 1000] so both small and concentrated laws appear.
    const double a = std::exp(uniform_in(engine, 0.0, std::log(1000.0)));
    const double b = std::exp(uniform_in(engine, 0.0, std::log(1000.0)));
    const double mode = a / (a + b);
    const double c = mode * uniform01(engine);
    LemmaCheck check;
    check.suite = "beta-tail";
    check.label = format("a=%.4g b=%.4g c=%.4g", a, b, c);
    check.estimate = c > 0.0 ? regularized_incomplete_beta(a + 1.0, b + 1.0, c) : 0.0;
    check.bound = opt.bound_scale * beta_tail_bound(a, b, c);
    check.passed = check.estimate <= check.bound * (1.0 + 1e-12);
    report.checks.push_back(std::move(check));
  }
}

void sum_suite(const ValidationOptions& opt, ValidationReport& report) {
  Engine engine(derive_seed(opt.seed, kSumSuite));
  BetaSampler sampler;
  for (int k = 0; k < 50; ++k) {
    const int m = 1 + static_cast<int>(uniform01(engine) * 4.0);
    std::vector<BetaParams> params(m);
    for (auto& p : params) {
      p.alpha = uniform_in(engine, 1.0, 10.0);
      p.beta = uniform_in(engine, 1.0, 3.0);
    }
    const double epsilon = uniform_in(engine, 0.05, 0.6);
    const double threshold = m - epsilon;
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < opt.samples; ++s) {
      double sum = 0.0;
      for (const auto& p : params) sum += sampler(engine, p.alpha, p.beta);
      hits += sum >= threshold;
    }
    std::string label = format("m=%d eps=%.4g", m, epsilon);
    for (const auto& p : params) label += format(" (%.3g,%.3g)", p.alpha, p.beta);
    report.checks.push_back(
        monte_carlo_check("beta-sum", std::move(label), hits, opt.samples,
                          opt.bound_scale * beta_sum_tail_bound(params, epsilon)));
  }
}

}  // namespace

bool ValidationReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::vector<LemmaCheck> ValidationReport::failures() const {
  std::vector<LemmaCheck> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c);
  }
  return out;
}

ValidationReport validate_lemmas(const ValidationOptions& options) {
  if (options.samples < 1) throw std::invalid_argument("samples must be >= 1");
  ValidationReport report;
  product_suite(options, report);
  tail_suite(options, report);
  sum_suite(options, report);
  return report;
}

}  // namespace semibandit
