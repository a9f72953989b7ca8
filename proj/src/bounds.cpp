#include "semibandit/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "semibandit/special_functions.hpp"

namespace semibandit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

double log_factorial(int m) { return std::lgamma(m + 1.0); }

// 1 - (1 - p)^n for real n >= 0, accurate for tiny p; n = inf gives 1.
double one_minus_power(double p, double n) {
  if (n <= 0.0 || p <= 0.0) return 0.0;
  if (p >= 1.0 || std::isinf(n)) return 1.0;
  return -std::expm1(n * std::log1p(-p));
}

// (1 - p)^n.
double power_of_complement(double p, double n) {
  return 1.0 - one_minus_power(p, n);
}

void require_gap_over_m(int m, double gap) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(gap >= 0.0 && gap <= m)) {
    throw std::invalid_argument("gap/m must lie in [0,1]");
  }
}

void require_unit_gap(double gap) {
  if (!(gap > 0.0 && gap < 1.0)) {
    throw std::invalid_argument("gap must lie in (0,1)");
  }
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

double linear_margin(int m, double gap) {
  return gap / m + 1.0 / std::sqrt(static_cast<double>(m));
}

Precondition linear_hypothesis(int m, double gap) {
  return {"gap/m + 1/sqrt(m) < 1/2", linear_margin(m, gap) < 0.5};
}

Precondition forced_hypothesis(int m, double gap, int ell) {
  return {"gap/m + 1/sqrt(m) < 1/(ell/2 + 2)",
          linear_margin(m, gap) < 1.0 / (ell / 2.0 + 2.0)};
}

Precondition even_ell(int ell) {
  return {"ell even and >= 0", ell >= 0 && ell % 2 == 0};
}

double horizon_or_inf(const BoundSpec& spec) {
  if (!spec.horizon) return kInf;
  if (!(*spec.horizon >= 1.0)) throw std::invalid_argument("horizon must be >= 1");
  return *spec.horizon;
}

double required_horizon(const BoundSpec& spec) {
  if (!spec.horizon) {
    throw std::invalid_argument(std::string(to_string(spec.theorem)) +
                                " needs a horizon");
  }
  return horizon_or_inf(spec);
}

BoundResult linear_bound(const BoundSpec& spec) {
  require_gap_over_m(spec.m, spec.gap);
  const double horizon = horizon_or_inf(spec);
  const double p = p_delta(spec.m, spec.gap);
  BoundResult r;
  r.preconditions.push_back(linear_hypothesis(spec.m, spec.gap));
  r.value = spec.gap / (4.0 * p) * one_minus_power(p, horizon - 1.0);
  r.notes = "p_delta=" + format_number(p);
  return r;
}

BoundResult small_gap_bound(const BoundSpec& spec) {
  require_gap_over_m(spec.m, spec.gap);
  const double horizon = required_horizon(spec);
  const int m = spec.m;
  const double gap = spec.gap;
  const double t0 = small_gap_threshold(m);
  BoundResult r;
  r.preconditions.push_back({"gap <= 1/6", gap <= 1.0 / 6.0});
  r.preconditions.push_back({"m >= 5", m >= 5});
  r.preconditions.push_back({"T >= T_0 = m^2 ln m", horizon >= t0});
  if (gap == 0.0) {
    r.value = 0.0;
  } else {
    const double p = p_delta(m, gap);
    const double g = g_delta(m, gap);
    const double first = gap / (4.0 * p) * one_minus_power(p, t0 - 1.0);
    // ((1-g)^{T0} - (1-g)^{T-T0+1}) / g, written as a difference of
    // 1 - (1-g)^n terms so tiny g does not cancel to zero.
    const double second =
        gap * (one_minus_power(g, horizon - t0 + 1.0) - one_minus_power(g, t0)) / g;
    r.value = std::max(0.0, first + second);
  }
  r.notes = "T_0=" + format_number(t0) +
            "; second term and T_0 up to unspecified constants (set to 1)";
  return r;
}

BoundResult forced_bound(const BoundSpec& spec) {
  require_gap_over_m(spec.m, spec.gap);
  const double horizon = horizon_or_inf(spec);
  const int m = spec.m;
  const double p = p_delta_forced(m, spec.gap, spec.ell);
  BoundResult r;
  r.preconditions.push_back(even_ell(spec.ell));
  r.preconditions.push_back(forced_hypothesis(m, spec.gap, spec.ell));
  const double survive_forced =
      power_of_complement(spec.gap / m, m * spec.ell / 2.0);
  r.value = survive_forced * spec.gap / (4.0 * p) *
            one_minus_power(p, horizon - 1.0);
  r.notes = "p_delta^ell=" + format_number(p);
  return r;
}

BoundResult nonlinear_bound(const BoundSpec& spec, double p,
                            std::vector<Precondition> preconditions) {
  const double horizon = horizon_or_inf(spec);
  BoundResult r;
  r.preconditions = std::move(preconditions);
  r.value = spec.gap / p * one_minus_power(p, horizon);
  const double t0 = 1.0 / p;
  r.notes = "T_0=1/p=" + format_number(t0);
  if (t0 > 1e6) r.notes += " (> 10^6)";
  if (horizon <= t0) {
    r.notes += "; T <= T_0 so R(T) >= T gap (1 - 1/e) = " +
               format_number(horizon * spec.gap * (1.0 - std::exp(-1.0)));
  }
  return r;
}

BoundResult random_choice_bound(const BoundSpec& spec) {
  require_unit_gap(spec.gap);
  const double horizon = required_horizon(spec);
  const double t0 = 1.0 / p_delta_nonlinear(spec.m, spec.gap);
  BoundResult r;
  r.preconditions.push_back({"T <= T_0 = 1/p_delta", horizon <= t0});
  r.value = horizon * spec.gap * (1.0 - std::exp(-1.0));
  r.notes = "T_0=" + format_number(t0) + "; random choice pays T gap/2 = " +
            format_number(horizon * spec.gap / 2.0);
  return r;
}

BoundResult minimax_bound(const BoundSpec& spec) {
  const double horizon = required_horizon(spec);
  const MinimaxResult mm =
      minimax_exponent(spec.theorem, spec.m, horizon, spec.ell);
  BoundResult r;
  r.preconditions = mm.preconditions;
  r.value = mm.prefactor * std::pow(horizon, mm.exponent);
  r.notes = "exponent=" + format_number(mm.exponent) +
            " prefactor=" + format_number(mm.prefactor) +
            (mm.large_horizon ? " (large-T regime)" : " (linear regime)") +
            "; up to unspecified universal constant";
  return r;
}

BoundResult escb_upper(const BoundSpec& spec) {
  const double horizon = required_horizon(spec);
  if (!(spec.gap > 0.0)) throw std::invalid_argument("t8 needs gap > 0");
  const double m = spec.m;
  const double d = spec.d.value_or(2 * spec.m);
  const double log_t = std::log(horizon);
  const double log_log_t = horizon < 3.0 ? 0.0 : std::log(log_t);
  const double rounds = std::ceil(std::log(m) / 1.61);
  BoundResult r;
  r.preconditions.push_back({"gap > 0", true});
  r.value = 2.0 * d * m * m * m / (spec.gap * spec.gap) +
            24.0 * d * (log_t + 4.0 * m * log_log_t) / spec.gap * rounds * rounds;
  r.notes = "upper bound; C(m) term omitted";
  return r;
}

}  // namespace

double beta_product_tail_bound(int m, double alpha, double gap) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  require_unit_gap(gap);
  const double log_l = std::log(-std::log1p(-gap));
  const double log_bound =
      m * (std::log(alpha) + log_l) - std::log(static_cast<double>(m)) -
      log_factorial(m);
  return clamp01(std::exp(log_bound));
}

double beta_tail_bound(double alpha, double beta, double c) {
  if (!(alpha > 0.0 && beta > 0.0)) {
    throw std::invalid_argument("alpha and beta must be positive");
  }
  const double t = alpha + beta;
  const double mode = alpha / t;
  if (!(c >= 0.0 && c <= mode)) {
    throw std::invalid_argument("beta_tail_bound needs 0 <= c <= alpha/(alpha+beta)");
  }
  const double bound = std::exp(1.0 / 12.0) * std::sqrt(t / (2.0 * std::numbers::pi)) *
                       std::exp(-2.0 * t * (mode - c) * (mode - c));
  return clamp01(bound);
}

double beta_sum_tail_bound(std::span<const BetaParams> params, double epsilon) {
  if (params.empty()) throw std::invalid_argument("need at least one Beta law");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0,1)");
  }
  double beta_sum = 0.0;
  double log_beta_product = 0.0;
  for (const auto& p : params) {
    if (!(p.alpha > 0.0 && p.beta > 0.0)) {
      throw std::invalid_argument("alpha and beta must be positive");
    }
    beta_sum += p.beta;
    log_beta_product += log_beta(p.alpha, p.beta);
  }
  const int m = static_cast<int>(params.size());
  return clamp01(std::exp(beta_sum * std::log(epsilon) - log_factorial(m) -
                          log_beta_product));
}

double p_delta(int m, double gap) {
  require_gap_over_m(m, gap);
  const double s = 0.5 - linear_margin(m, gap);
  return std::exp(-2.0 * m / 9.0 * s * s);
}

double g_delta(int m, double gap) {
  require_gap_over_m(m, gap);
  if (gap == 0.0) return 0.0;
  return std::exp(m * std::log(2.0 * gap) - log_factorial(m));
}

double p_delta_forced(int m, double gap, int ell) {
  require_gap_over_m(m, gap);
  if (ell < 0) throw std::invalid_argument("ell must be >= 0");
  const double half = ell / 2.0;
  const double s = 1.0 / (half + 2.0) - linear_margin(m, gap);
  return std::exp(-2.0 * m * s * s / ((half + 3.0) * (half + 3.0)));
}

double p_delta_nonlinear(int m, double gap) {
  return beta_product_tail_bound(m, 1.0, gap);
}

double p_delta_nonlinear_forced(int m, double gap, int ell) {
  if (ell < 0) throw std::invalid_argument("ell must be >= 0");
  return beta_product_tail_bound(m, 1.0 + ell / 2.0, gap);
}

namespace {

constexpr std::array<Theorem, 10> kAllTheorems = {
    Theorem::kLinear,       Theorem::kSmallGap,        Theorem::kMinimax,
    Theorem::kForced,       Theorem::kForcedMinimax,   Theorem::kNonlinear,
    Theorem::kRandomChoice, Theorem::kNonlinearForced, Theorem::kNonlinearMinimax,
    Theorem::kEscbUpper};

}  // namespace

std::string_view to_string(Theorem theorem) {
  switch (theorem) {
    case Theorem::kLinear: return "t1";
    case Theorem::kSmallGap: return "t2";
    case Theorem::kMinimax: return "c1";
    case Theorem::kForced: return "t3";
    case Theorem::kForcedMinimax: return "t4";
    case Theorem::kNonlinear: return "t5";
    case Theorem::kRandomChoice: return "c2";
    case Theorem::kNonlinearForced: return "t6";
    case Theorem::kNonlinearMinimax: return "c3";
    case Theorem::kEscbUpper: return "t8";
  }
  return "unknown";
}

Theorem parse_theorem(std::string_view tag) {
  for (Theorem t : kAllTheorems) {
    if (to_string(t) == tag) return t;
  }
  throw std::invalid_argument("unknown theorem tag '" + std::string(tag) +
                              "' (expected t1 t2 c1 t3 t4 t5 c2 t6 c3 t8)");
}

std::span<const Theorem> all_theorems() { return kAllTheorems; }

bool BoundResult::preconditions_met() const {
  return std::all_of(preconditions.begin(), preconditions.end(),
                     [](const Precondition& p) { return p.met; });
}

double small_gap_threshold(int m) {
  return static_cast<double>(m) * m * std::log(static_cast<double>(m));
}

double forced_minimax_threshold(int m, int ell) {
  const double power = 0.25 - 1.0 / m;
  if (power <= 0.0) return kInf;
  return small_gap_threshold(m) * std::pow(static_cast<double>(ell), 1.0 / power);
}

MinimaxResult minimax_exponent(Theorem theorem, int m, double horizon, int ell) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(horizon >= 1.0)) throw std::invalid_argument("horizon must be >= 1");
  const double log_t = std::log(horizon);
  MinimaxResult r;
  switch (theorem) {
    case Theorem::kMinimax: {
      r.preconditions.push_back({"m >= 5", m >= 5});
      r.large_horizon = log_t > m * std::log(2.0) + log_factorial(m);
      if (r.large_horizon) {
        r.exponent = 1.0 - 2.0 / (2.0 * m);
        r.prefactor = m;
      }
      return r;
    }
    case Theorem::kNonlinearMinimax: {
      const int d = m + 1;
      r.large_horizon = true;
      r.exponent = 1.0 - 1.0 / d;
      return r;
    }
    case Theorem::kForcedMinimax: {
      if (ell < 1) throw std::invalid_argument("t4 needs ell >= 1");
      r.preconditions.push_back({"m >= 5", m >= 5});
      r.large_horizon = log_t > m * std::log(4.0) + log_factorial(m) &&
                        horizon > forced_minimax_threshold(m, ell);
      if (r.large_horizon) {
        r.exponent = 1.0 - 1.0 / m;
        r.prefactor = static_cast<double>(m) / ell;
      } else {
        r.prefactor = 1.0 / ell;
      }
      return r;
    }
    default:
      throw std::invalid_argument("minimax shape exists only for c1, c3, t4");
  }
}

BoundResult evaluate_bound(const BoundSpec& spec) {
  switch (spec.theorem) {
    case Theorem::kLinear: return linear_bound(spec);
    case Theorem::kSmallGap: return small_gap_bound(spec);
    case Theorem::kForced: return forced_bound(spec);
    case Theorem::kNonlinear:
      require_unit_gap(spec.gap);
      return nonlinear_bound(spec, p_delta_nonlinear(spec.m, spec.gap),
                             {{"0 < gap < 1", true}});
    case Theorem::kNonlinearForced:
      require_unit_gap(spec.gap);
      return nonlinear_bound(
          spec, p_delta_nonlinear_forced(spec.m, spec.gap, spec.ell),
          {{"0 < gap < 1", true}, even_ell(spec.ell)});
    case Theorem::kRandomChoice: return random_choice_bound(spec);
    case Theorem::kMinimax:
    case Theorem::kNonlinearMinimax:
    case Theorem::kForcedMinimax: return minimax_bound(spec);
    case Theorem::kEscbUpper: return escb_upper(spec);
  }
  throw std::invalid_argument("unknown theorem");
}

}  // namespace semibandit
