// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "semibandit/bounds.hpp"
#include "semibandit/harness.hpp"
#include "semibandit/lemma_validation.hpp"
#include "semibandit/policies.hpp"
#include "semibandit/special_functions.hpp"
#include "support.hpp"

#ifndef SEMIBANDIT_BIN
#error "SEMIBANDIT_BIN must name the semibandit executable"
#endif

using namespace semibandit;
namespace fs = std::filesystem;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(double x) { return format_float(x); }

// Fraction of paths with tau >= t. A censored path (tau > cap, stored as
// cap) counts for every t <= cap.
double survival(const Summary& s, std::int64_t t) {
  std::int64_t k = 0;
  for (const auto& tr : s.traces) k += tr.tau >= t;
  return static_cast<double>(k) / static_cast<double>(s.traces.size());
}

Outcome lemma_dominance() {
  const ValidationReport report = validate_lemmas({});
  std::ostringstream os;
  os << report.checks.size() - report.failures().size() << '/' << report.checks.size()
     << " checks pass";
  for (const auto& c : report.failures()) {
    os << "; " << c.suite << ' ' << c.label << " estimate " << fmt(c.estimate) << " > bound "
       << fmt(c.bound);
  }
  return {report.all_passed(), os.str()};
}

Outcome irwin_hall() {
  double worst = 0.0;
  for (int m = 1; m <= 20; ++m) {
    Big factorial = 1;
    for (int k = 2; k <= m; ++k) factorial *= k;
    for (int j = 1; j <= 100; ++j) {
      const double x = j / 100.0;
      const double exact = (boost::multiprecision::pow(Big(x), m) / factorial).convert_to<double>();
      worst = std::max(worst, std::abs(irwin_hall_cdf(m, x) - exact) / exact);
    }
  }
  bool mc_ok = true;
  double worst_z = 0.0;
  Engine engine(derive_seed(2024, 2));
  const int n = 1000000;
  for (int m : {2, 3}) {
    for (double x : {0.3, 0.8, 1.0, 1.5}) {
      int hits = 0;
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += uniform01(engine);
        hits += s <= x;
      }
      const double p = irwin_hall_cdf(m, x);
      const double z = std::abs(hits / double(n) - p) / std::sqrt(p * (1 - p) / n);
      worst_z = std::max(worst_z, z);
      mc_ok = mc_ok && z <= 3.0;
    }
  }
  return {worst <= 1e-12 && mc_ok,
          "max relative error " + fmt(worst) + ", max Monte Carlo z " + fmt(worst_z)};
}

Outcome threshold_horizon() {
  const double got = 1.0 / p_delta_nonlinear(9, 0.5);
  const Big l = -boost::multiprecision::log1p(Big(-0.5));
  Big factorial = 1;
  for (int k = 2; k <= 9; ++k) factorial *= k;
  const double exact = (9 * factorial / boost::multiprecision::pow(l, 9)).convert_to<double>();
  const double rel = std::abs(got - exact) / exact;
  const bool near = std::abs(got / 8.8e7 - 1.0) <= 0.01;
  return {got > 1e6 && rel <= 1e-6 && near,
          "T_0(9) = " + fmt(got) + ", relative error " + fmt(rel)};
}

Outcome geometric_survival() {
  ExperimentConfig c;
  c.instance = {SetKind::kNonlinearPair, 5, 0.5, std::nullopt};
  c.policy = {PolicyKind::kThompson};
  c.stop_mode = StopMode::kStopAtTau;
  c.cap = 10000;
  c.paths = 1000;
  c.seed = 1;
  const Summary s = run_experiment(c, 0);
  const double p = p_delta_nonlinear(5, 0.5);
  bool ok = true;
  std::ostringstream os;
  os << "p=" << fmt(p);
  for (std::int64_t t : {10, 100, 1000, 10000}) {
    const double emp = survival(s, t);
    const double target = std::pow(1.0 - p, static_cast<double>(t - 1));
    // The larger of the two binomial standard errors, so a zero empirical
    // frequency is not judged with a zero-width band.
    const double se = std::sqrt(std::max(emp * (1 - emp), target * (1 - target)) / c.paths);
    ok = ok && emp >= target - 3.0 * se;
    os << "; t=" << t << " P(tau>=t)=" << fmt(emp) << " vs " << fmt(target) << " - 3se("
       << fmt(se) << ")";
  }
  return {ok, os.str()};
}

Outcome heavy_tail() {
  ExperimentConfig c;
  c.instance = {SetKind::kTwoPath, 14, std::nullopt, 0.2};
  c.policy = {PolicyKind::kThompson};
  c.stop_mode = StopMode::kStopAtTau;
  c.cap = 50000;
  c.paths = 200;
  c.seed = 1;
  const Summary s = run_experiment(c, 0);
  const double emp = survival(s, 50000);
  return {emp >= 0.05, "P(tau >= 5e4) = " + fmt(emp) + " (censored " +
                           std::to_string(s.tau.censored) + "/200)"};
}

Outcome random_choice() {
  ExperimentConfig c;
  c.instance = {SetKind::kNonlinearPair, 7, 0.5, std::nullopt};
  c.policy = {PolicyKind::kThompson};
  c.horizon = 1000;
  c.paths = 500;
  c.seed = 1;
  c.regret_points = {1000};
  const Summary s = run_experiment(c, 0);
  const MeanCi& r = s.regret.back().regret;
  const double lo = r.mean - r.half_width.value_or(0.0);
  return {lo >= 250.0, "TS regret " + fmt(r.mean) + " +- " + fmt(r.half_width.value_or(0.0)) +
                           " vs T gap / 2 = 250"};
}

Outcome optimism_gap() {
  ExperimentConfig c;
  c.instance = {SetKind::kTwoPath, 8, std::nullopt, 0.1};
  c.horizon = 40000;
  c.paths = 40;
  c.seed = 1;
  c.regret_points = {40000};
  auto regret = [&](PolicyKind kind) {
    ExperimentConfig k = c;
    k.policy = {kind};
    return run_experiment(k, 0).regret.back().regret.mean;
  };
  const double ts = regret(PolicyKind::kThompson);
  const double escb = regret(PolicyKind::kEscb);
  const double cucb = regret(PolicyKind::kCucb);
  return {ts >= 10.0 * escb && ts >= 5.0 * cucb,
          "TS " + fmt(ts) + ", ESCB " + fmt(escb) + ", CUCB " + fmt(cucb)};
}

Outcome forced_exploration() {
  std::vector<std::int64_t> medians;
  std::ostringstream os;
  bool ok = true;
  for (int m : {6, 8, 10}) {
    ExperimentConfig c;
    c.instance = {SetKind::kTwoPath, m, std::nullopt, 0.01};
    c.policy = {PolicyKind::kThompsonForced, 4};
    c.stop_mode = StopMode::kStopAtTau;
    c.cap = 100000;
    c.paths = 200;
    c.seed = 1;
    const Summary s = run_experiment(c, 0);
    const auto& q = s.tau.quantiles[2];
    const std::int64_t median = q.value.value_or(c.cap + 1);
    if (!medians.empty()) ok = ok && median > medians.back();
    medians.push_back(median);
    os << (os.tellp() > 0 ? ", " : "") << "m=" << m << " median "
       << (q.value ? std::to_string(*q.value) : ">" + std::to_string(c.cap));
  }
  return {ok, os.str()};
}

bool same_tree(const fs::path& a, const fs::path& b) {
  int files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const auto rel = fs::relative(entry.path(), a);
    if (!fs::exists(b / rel) ||
        testing::read_file(entry.path()) != testing::read_file(b / rel)) {
      return false;
    }
  }
  return files > 0;
}

Outcome determinism() {
  const std::vector<std::string> runs = {
      "simulate --set z-matching --m 4 --delta-over-m 0.125 --horizon 2000 --paths 64 --seed 5",
      "simulate --set two-path --m 6 --delta-over-m 0.2 --stop-at-tau --cap 100000 --paths 300 "
      "--seed 1",
      "sweep-m --m-list 2,3 --policy ts-forced --ell 2 --delta 0.5 --horizon 500 --paths 40",
      "compare --m 4 --delta 0.4 --horizon 2000 --policies ts,escb,cucb,random --paths 16"};
  testing::TempDir root("acceptance_threads");
  int identical = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    std::vector<fs::path> dirs;
    for (int threads : {1, 3, 8}) {
      const fs::path dir = root.path() / ("run" + std::to_string(k)) / std::to_string(threads);
      const std::string cmd = std::string("\"") + SEMIBANDIT_BIN + "\" --threads " +
                              std::to_string(threads) + " --out \"" + dir.string() + "\" " +
                              runs[k] + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
      dirs.push_back(dir);
    }
    identical += same_tree(dirs[0], dirs[1]) && same_tree(dirs[0], dirs[2]);
  }
  return {identical == static_cast<int>(runs.size()),
          std::to_string(identical) + "/" + std::to_string(runs.size()) +
              " runs byte-identical across --threads 1, 3, 8"};
}

Outcome beta_sampler() {
  const int fixtures[][2] = {{0, 0}, {1, 0}, {0, 1}, {3, 7}, {50, 50}};
  const int n = 100000;
  bool ok = true;
  std::ostringstream os;
  BetaSampler sampler;
  std::uint64_t stream = 0;
  for (const auto& f : fixtures) {
    const int a = f[0] + 1;
    const int b = f[1] + 1;
    Engine engine(derive_seed(10, stream++));
    std::vector<double> v(n);
    for (auto& x : v) x = sampler(engine, a, b);
    const double d = testing::ks_statistic(
        v, [&](double x) { return regularized_incomplete_beta(a, b, x); });
    ok = ok && d < testing::ks_critical_1pct(n);
    os << "Beta(" << a << "," << b << ") D=" << fmt(d) << "; ";
  }
  // Gamma-ratio against the order-statistic sampler, both for the posterior
  // Beta(A+1, B+1) of counts (3, 7) and for Beta(3, 7) itself.
  for (const auto& ab : {std::pair{4, 8}, std::pair{3, 7}}) {
    Engine e1(derive_seed(11, stream++));
    Engine e2(derive_seed(11, stream++));
    std::vector<double> g(n);
    std::vector<double> o(n);
    for (auto& x : g) x = sampler(e1, ab.first, ab.second);
    for (auto& x : o) x = order_statistic_beta(e2, ab.first, ab.second);
    const double d = testing::ks_two_sample(g, o);
    ok = ok && d < testing::ks_two_sample_critical_1pct(n, n);
    os << "two-sample Beta(" << ab.first << "," << ab.second << ") D=" << fmt(d) << "; ";
  }
  os << "1% critical " << fmt(testing::ks_critical_1pct(n));
  return {ok, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"lemma dominance suite", lemma_dominance},
      {"Irwin-Hall exactness", irwin_hall},
      {"threshold horizon T_0(9)", threshold_horizon},
      {"geometric survival dominance (nonlinear m=5)", geometric_survival},
      {"heavy tail of tau (two-path m=14)", heavy_tail},
      {"TS regret vs random choice (nonlinear m=7)", random_choice},
      {"optimism gap (two-path m=8)", optimism_gap},
      {"forced exploration median tau increasing in m", forced_exploration},
      {"determinism across --threads", determinism},
      {"Beta sampler correctness", beta_sampler},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = criteria[k].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !r.passed;
    std::printf("%s criterion %zu: %s: %s [%.1fs]\n", r.passed ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), r.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
