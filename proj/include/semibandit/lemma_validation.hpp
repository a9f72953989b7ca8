#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace semibandit {

// One dominance check: an estimate (Monte Carlo, or exact with zero
// standard error) compared against a closed-form bound.
struct LemmaCheck {
  std::string suite;
  std::string label;
  double estimate = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct ValidationOptions {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  // Multiplies every bound before comparison. Values below 1 plant a wrong
  // bound so the validator itself can be exercised.
  double bound_scale = 1.0;
};

struct ValidationReport {
  std::vector<LemmaCheck> checks;

  bool all_passed() const;
  std::vector<LemmaCheck> failures() const;
};

// Runs three suites:
//  product: P(U_1...U_m >= 1-gap) for (m, gap) in {3,5} x {0.5,0.9};
//  beta-tail: exact P(V <= c), V ~ Beta(a+1, b+1), on 200 random (a, b, c);
//  beta-sum: P(sum V_i >= m - eps) on 50 random Beta configurations.
// A Monte Carlo check fails when estimate - 3 s.e. exceeds the bound.
ValidationReport validate_lemmas(const ValidationOptions& options);

}  // namespace semibandit
