#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semibandit {

// P(V_1 ... V_m >= 1 - gap) bound for V_i ~ Beta(alpha, 1) i.i.d.:
// alpha^m / (m m!) * ln(1/(1-gap))^m, clamped to [0,1].
double beta_product_tail_bound(int m, double alpha, double gap);

// P(V <= c) bound for V ~ Beta(alpha+1, beta+1), c <= M = alpha/(alpha+beta):
// e^{1/12} sqrt(T/(2 pi)) exp(-2 T (M - c)^2) with T = alpha + beta.
double beta_tail_bound(double alpha, double beta, double c);

struct BetaParams {
  double alpha;
  double beta;
};

// P(V_1 + ... + V_m >= m - epsilon) bound for independent
// V_i ~ Beta(alpha_i, beta_i): epsilon^{sum beta} / (m! prod B(alpha_i, beta_i)).
double beta_sum_tail_bound(std::span<const BetaParams> params, double epsilon);

struct Precondition {
  std::string name;
  bool met;
};

// Probabilities driving the lower bounds. Hypotheses are reported by
// the hypotheses_* helpers; the values are computed regardless.
double p_delta(int m, double gap);
double g_delta(int m, double gap);
double p_delta_forced(int m, double gap, int ell);
double p_delta_nonlinear(int m, double gap);
double p_delta_nonlinear_forced(int m, double gap, int ell);

enum class Theorem {
  kLinear,             // t1
  kSmallGap,           // t2
  kMinimax,            // c1
  kForced,             // t3
  kForcedMinimax,      // t4
  kNonlinear,          // t5
  kRandomChoice,       // c2
  kNonlinearForced,    // t6
  kNonlinearMinimax,   // c3
  kEscbUpper,          // t8
};

std::string_view to_string(Theorem theorem);
Theorem parse_theorem(std::string_view tag);
std::span<const Theorem> all_theorems();

struct BoundSpec {
  Theorem theorem = Theorem::kLinear;
  int m = 1;
  double gap = 0.0;
  int ell = 0;
  // Absent means T -> infinity where the formula has a limit.
  std::optional<double> horizon;
  // Ambient dimension for the ESCB bound; defaults to 2m.
  std::optional<int> d;
};

struct BoundResult {
  double value = 0.0;
  std::vector<Precondition> preconditions;
  std::string notes;

  bool preconditions_met() const;
};

struct MinimaxResult {
  double exponent = 1.0;
  double prefactor = 1.0;
  bool large_horizon = false;
  std::vector<Precondition> preconditions;
};

// Constant-free shape prefactor * T^exponent of the minimax lower bounds
// (kMinimax, kNonlinearMinimax, kForcedMinimax).
MinimaxResult minimax_exponent(Theorem theorem, int m, double horizon,
                               int ell = 0);

// Threshold horizon m^2 ln m of the small-gap bound (constant set to 1).
double small_gap_threshold(int m);
// Threshold horizon m^2 ln m * ell^{1/(1/4 - 1/m)} of the forced minimax
// regime (constant set to 1).
double forced_minimax_threshold(int m, int ell);

// Evaluates any tag. Throws std::invalid_argument on parameters outside
// the formula's domain (e.g. gap/m > 1, ell < 1 for t4, missing horizon for
// a minimax shape).
BoundResult evaluate_bound(const BoundSpec& spec);

}  // namespace semibandit
