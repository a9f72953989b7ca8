#include "semibandit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "semibandit/bounds.hpp"
#include "semibandit/harness.hpp"
#include "semibandit/lemma_validation.hpp"

namespace semibandit {

namespace {

namespace fs = std::filesystem;

constexpr const char* kOutputEnv = "SEMIBANDIT_OUTPUT_DIR";

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::int64_t whole(double x, const char* name) {
  if (!std::isfinite(x) || x != std::floor(x) || std::abs(x) > 9e18) {
    throw UsageError(std::string("--") + name + " must be an integer");
  }
  return static_cast<std::int64_t>(x);
}

struct GlobalFlags {
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string out;
  CLI::Option* out_opt = nullptr;
};

fs::path output_dir(const GlobalFlags& g, const std::optional<std::string>& from_config) {
  if (g.out_opt->count() > 0) return g.out;
  if (const char* env = std::getenv(kOutputEnv); env != nullptr && *env != '\0') {
    return env;
  }
  if (from_config) return *from_config;
  return "results";
}

// Instance and run flags shared by simulate, tau-cdf, sweep-m and compare.
struct RunFlags {
  std::string config;
  std::string set = "two-path";
  int m = 5;
  double delta = 0.0;
  double delta_over_m = 0.0;
  std::string policy = "ts";
  int forced_rounds = 0;
  double cucb_constant = 1.5;
  bool stop_at_tau = false;
  double horizon = 1000;
  double cap = 1e7;
  double paths = 1000;
  std::uint64_t seed = 1;
  double level = 0.95;

  CLI::Option* config_opt = nullptr;
  CLI::Option* set_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* delta_opt = nullptr;
  CLI::Option* delta_over_m_opt = nullptr;
  CLI::Option* policy_opt = nullptr;
  CLI::Option* forced_opt = nullptr;
  CLI::Option* cucb_opt = nullptr;
  CLI::Option* stop_opt = nullptr;
  CLI::Option* horizon_opt = nullptr;
  CLI::Option* cap_opt = nullptr;
  CLI::Option* paths_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* level_opt = nullptr;
};

struct RunFlagSet {
  bool m = true;
  bool policy = true;
  bool stop = true;
  double default_paths = 1000;
};

void add_run_flags(CLI::App* app, RunFlags& f, RunFlagSet which) {
  f.paths = which.default_paths;
  f.config_opt = app->add_option("--config", f.config, "JSON experiment config")
                     ->check(CLI::ExistingFile);
  f.set_opt = app->add_option("--set", f.set, "decision set: two-path, z-matching, nonlinear");
  if (which.m) f.m_opt = app->add_option("--m", f.m, "half dimension m");
  f.delta_opt = app->add_option("--delta", f.delta, "gap Delta");
  f.delta_over_m_opt =
      app->add_option("--delta-over-m", f.delta_over_m, "gap per item delta = Delta/m");
  f.delta_opt->excludes(f.delta_over_m_opt);
  if (which.policy) {
    f.policy_opt =
        app->add_option("--policy", f.policy, "ts, ts-forced, cucb, escb, random");
  }
  f.forced_opt = app->add_option("--forced-rounds,--ell", f.forced_rounds,
                                 "forced exploration rounds for ts-forced");
  f.cucb_opt = app->add_option("--cucb-constant", f.cucb_constant,
                               "CUCB radius constant c in sqrt(c ln t / N)");
  if (which.stop) {
    f.stop_opt = app->add_flag("--stop-at-tau", f.stop_at_tau,
                               "stop each path at the first optimal play");
  }
  f.horizon_opt = app->add_option("--horizon", f.horizon, "horizon T (fixed-horizon mode)");
  f.cap_opt = app->add_option("--cap", f.cap, "tau cap (stop-at-tau mode)");
  f.paths_opt = app->add_option("--paths", f.paths, "number of sample paths");
  f.seed_opt = app->add_option("--seed", f.seed, "master seed");
  f.level_opt = app->add_option("--level", f.level, "confidence level");
}

bool given(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

// Config file (if any) overlaid with the flags given on the command line;
// without a config file every flag applies with its default.
ExperimentConfig build_config(const RunFlags& f) {
  const bool from_file = given(f.config_opt);
  ExperimentConfig c = from_file ? load_config(f.config) : ExperimentConfig{};
  auto use = [&](const CLI::Option* opt) { return opt != nullptr && (!from_file || given(opt)); };

  if (use(f.set_opt)) c.instance.kind = parse_set_kind(f.set);
  if (use(f.m_opt)) c.instance.m = f.m;
  if (given(f.delta_opt)) {
    c.instance.delta = f.delta;
    c.instance.delta_over_m.reset();
  } else if (given(f.delta_over_m_opt)) {
    c.instance.delta_over_m = f.delta_over_m;
    c.instance.delta.reset();
  } else if (!from_file) {
    throw UsageError("give --delta or --delta-over-m");
  }
  if (use(f.policy_opt)) c.policy.kind = parse_policy_kind(f.policy);
  if (use(f.forced_opt)) c.policy.forced_rounds = f.forced_rounds;
  if (use(f.cucb_opt)) c.policy.cucb_constant = f.cucb_constant;
  if (given(f.stop_opt)) c.stop_mode = StopMode::kStopAtTau;
  if (use(f.horizon_opt)) c.horizon = whole(f.horizon, "horizon");
  if (use(f.cap_opt)) c.cap = whole(f.cap, "cap");
  if (use(f.paths_opt)) c.paths = whole(f.paths, "paths");
  if (use(f.seed_opt)) c.seed = f.seed;
  if (use(f.level_opt)) c.level = f.level;
  return c;
}

std::string describe_instance(const ExperimentConfig& c) {
  std::ostringstream os;
  os << to_string(c.instance.kind) << " m=" << c.instance.m
     << " gap=" << format_float(c.instance.gap());
  return os.str();
}

std::string mean_with_ci(const MeanCi& ci) {
  std::string s = format_float(ci.mean);
  if (ci.half_width) s += " +- " + format_float(*ci.half_width);
  return s;
}

void print_summary(const Summary& s, const fs::path& dir, std::ostream& out) {
  const auto& c = s.config;
  out << "instance: " << describe_instance(c) << '\n';
  out << "policy: " << to_string(c.policy.kind);
  if (c.policy.kind == PolicyKind::kThompsonForced) {
    out << " (forced rounds " << c.policy.forced_rounds << ')';
  }
  out << '\n';
  out << "paths: " << s.tau.n << ", censored: " << s.tau.censored << " (tau > "
      << s.tau_limit << ")\n";
  out << "E[tau]: " << (s.tau.mean_is_lower_bound ? ">= " : "")
      << mean_with_ci(s.tau.mean) << '\n';
  out << "tau quantiles:";
  for (const auto& q : s.tau.quantiles) {
    out << ' ' << format_float(q.level) << '='
        << (q.value ? std::to_string(*q.value) : ">" + std::to_string(s.tau_limit));
  }
  out << '\n';
  if (!s.regret.empty()) {
    const auto& last = s.regret.back();
    out << "mean regret at t=" << last.t << ": " << mean_with_ci(last.regret) << '\n';
  }
  out << "outputs: " << dir.string() << '\n';
}

Summary run_and_write(const ExperimentConfig& config, const GlobalFlags& g,
                      fs::path& dir) {
  dir = output_dir(g, config.output_dir);
  Summary s = run_experiment(config, g.threads);
  write_outputs(s, dir);
  return s;
}

std::ofstream open_csv(const fs::path& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw IoError("cannot open " + (dir / name).string() + " for writing");
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

int cmd_simulate(const RunFlags& f, const GlobalFlags& g, std::ostream& out) {
  const ExperimentConfig config = build_config(f);
  fs::path dir;
  const Summary s = run_and_write(config, g, dir);
  print_summary(s, dir, out);
  return kExitOk;
}

int cmd_tau_cdf(const RunFlags& f, const GlobalFlags& g, std::ostream& out) {
  ExperimentConfig config = build_config(f);
  config.stop_mode = StopMode::kStopAtTau;
  fs::path dir;
  const Summary s = run_and_write(config, g, dir);
  print_summary(s, dir, out);
  out << std::setw(12) << "t" << std::setw(14) << "cdf" << std::setw(14) << "ci_lo"
      << std::setw(14) << "ci_hi" << '\n';
  for (std::size_t k = 0; k < s.tau.grid.size(); ++k) {
    out << std::setw(12) << s.tau.grid[k] << std::setw(14) << format_float(s.tau.cdf[k].p)
        << std::setw(14) << format_float(s.tau.cdf[k].lo) << std::setw(14)
        << format_float(s.tau.cdf[k].hi) << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const RunFlags& f, const std::vector<int>& m_list, const GlobalFlags& g,
              std::ostream& out) {
  if (m_list.empty()) throw UsageError("--m-list must not be empty");
  const ExperimentConfig base = build_config(f);
  const fs::path dir = output_dir(g, base.output_dir);
  std::vector<std::string> rows;
  out << std::setw(6) << "m" << std::setw(16) << "E[tau]" << std::setw(14) << "ci"
      << std::setw(10) << "censored" << std::setw(16) << "regret" << '\n';
  for (int m : m_list) {
    ExperimentConfig config = base;
    config.instance.m = m;
    const Summary s = run_experiment(config, g.threads);
    write_outputs(s, dir / ("m" + std::to_string(m)));
    const auto& tau = s.tau;
    std::ostringstream row;
    row << m << ',' << format_float(tau.mean.mean) << ','
        << (tau.mean.half_width ? format_float(*tau.mean.half_width) : "") << ','
        << tau.censored << ',' << (tau.mean_is_lower_bound ? 1 : 0) << ',';
    std::string regret = "";
    if (!s.regret.empty()) {
      const auto& r = s.regret.back().regret;
      row << format_float(r.mean) << ','
          << (r.half_width ? format_float(*r.half_width) : "");
      regret = format_float(r.mean);
    } else {
      row << ',';
    }
    rows.push_back(row.str());
    out << std::setw(6) << m << std::setw(16)
        << ((tau.mean_is_lower_bound ? ">=" : "") + format_float(tau.mean.mean))
        << std::setw(14)
        << (tau.mean.half_width ? format_float(*tau.mean.half_width) : "-")
        << std::setw(10) << tau.censored << std::setw(16) << (regret.empty() ? "-" : regret)
        << '\n';
  }
  auto csv = open_csv(dir, "sweep.csv");
  csv << "m,mean_tau,ci_half_width,censored_count,mean_is_lower_bound,mean_regret,"
         "regret_ci_half_width\n";
  for (const auto& r : rows) csv << r << '\n';
  csv.flush();
  if (!csv) throw IoError("failed writing sweep.csv");
  out << "outputs: " << dir.string() << '\n';
  return kExitOk;
}

int cmd_compare(const RunFlags& f, const std::vector<std::string>& names,
                const GlobalFlags& g, std::ostream& out) {
  if (names.size() < 2) throw UsageError("compare needs at least two policies");
  ExperimentConfig base = build_config(f);
  base.stop_mode = StopMode::kFixedHorizon;
  base.regret_points = {base.horizon};
  const Instance instance = base.instance.build();
  std::vector<ExperimentConfig> configs;
  for (const auto& name : names) {
    ExperimentConfig c = base;
    c.policy.kind = parse_policy_kind(name);
    validate_policy(c.policy, instance);
    configs.push_back(c);
  }
  struct Row {
    std::string policy;
    MeanCi regret;
  };
  std::vector<Row> rows;
  for (const auto& c : configs) {
    const Summary s = run_experiment(c, g.threads);
    rows.push_back({std::string(to_string(c.policy.kind)), s.regret.back().regret});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.regret.mean < b.regret.mean; });
  const fs::path dir = output_dir(g, base.output_dir);
  auto csv = open_csv(dir, "compare.csv");
  csv << "policy,mean_regret,ci_half_width\n";
  out << "instance: " << describe_instance(base) << ", T=" << base.horizon
      << ", paths=" << base.paths << '\n';
  out << std::setw(12) << "policy" << std::setw(18) << "mean_regret" << std::setw(16)
      << "ci_half_width" << '\n';
  for (const auto& r : rows) {
    const std::string hw = r.regret.half_width ? format_float(*r.regret.half_width) : "";
    csv << r.policy << ',' << format_float(r.regret.mean) << ',' << hw << '\n';
    out << std::setw(12) << r.policy << std::setw(18) << format_float(r.regret.mean)
        << std::setw(16) << (hw.empty() ? "-" : hw) << '\n';
  }
  csv.flush();
  if (!csv) throw IoError("failed writing compare.csv");
  out << "outputs: " << dir.string() << '\n';
  return kExitOk;
}

struct BoundFlags {
  std::string theorem = "all";
  int m = 5;
  double delta = 0.0;
  double delta_over_m = 0.0;
  int ell = 0;
  double horizon = 0.0;
  int d = 0;
  bool csv = false;
  CLI::Option* delta_opt = nullptr;
  CLI::Option* delta_over_m_opt = nullptr;
  CLI::Option* horizon_opt = nullptr;
  CLI::Option* d_opt = nullptr;
};

bool needs_gap(Theorem t) {
  return t != Theorem::kMinimax && t != Theorem::kNonlinearMinimax &&
         t != Theorem::kForcedMinimax;
}

int cmd_bounds(const BoundFlags& f, std::ostream& out) {
  std::vector<Theorem> theorems;
  if (f.theorem == "all") {
    theorems.assign(all_theorems().begin(), all_theorems().end());
  } else {
    theorems.push_back(parse_theorem(f.theorem));
  }
  const bool has_gap = given(f.delta_opt) || given(f.delta_over_m_opt);
  const double gap = given(f.delta_opt) ? f.delta : f.delta_over_m * f.m;
  if (theorems.size() == 1 && needs_gap(theorems[0]) && !has_gap) {
    throw UsageError(std::string(to_string(theorems[0])) +
                     " needs --delta or --delta-over-m");
  }

  struct Row {
    std::string tag, value, preconditions, notes;
  };
  std::vector<Row> rows;
  std::vector<std::string> warnings;
  for (Theorem t : theorems) {
    BoundSpec spec;
    spec.theorem = t;
    spec.m = f.m;
    spec.gap = gap;
    spec.ell = f.ell;
    if (given(f.horizon_opt)) spec.horizon = f.horizon;
    if (given(f.d_opt)) spec.d = f.d;
    Row row{std::string(to_string(t)), "", "", ""};
    if (needs_gap(t) && !has_gap) {
      row.value = "n/a";
      row.notes = "needs --delta or --delta-over-m";
      rows.push_back(row);
      continue;
    }
    try {
      const BoundResult r = evaluate_bound(spec);
      row.value = format_float(r.value);
      for (const auto& p : r.preconditions) {
        if (!row.preconditions.empty()) row.preconditions += "; ";
        row.preconditions += p.name + (p.met ? ": ok" : ": FAILS");
        if (!p.met) {
          warnings.push_back(row.tag + ": hypothesis " + p.name + " fails");
        }
      }
      row.notes = r.notes;
    } catch (const std::invalid_argument& e) {
      if (theorems.size() == 1) throw;
      row.value = "n/a";
      row.notes = e.what();
    }
    rows.push_back(row);
  }

  std::ostringstream params;
  params << "m=" << f.m;
  if (has_gap) params << " gap=" << format_float(gap);
  params << " ell=" << f.ell;
  if (given(f.horizon_opt)) params << " T=" << format_float(f.horizon);
  if (f.csv) {
    out << "theorem,m,gap,ell,horizon,value,preconditions,notes\n";
    for (const auto& r : rows) {
      out << r.tag << ',' << f.m << ',' << (has_gap ? format_float(gap) : "") << ','
          << f.ell << ',' << (given(f.horizon_opt) ? format_float(f.horizon) : "") << ','
          << r.value << ',' << csv_field(r.preconditions) << ',' << csv_field(r.notes)
          << '\n';
    }
  } else {
    out << params.str() << '\n';
    out << std::left << std::setw(8) << "theorem" << std::setw(18) << "value"
        << "preconditions | notes\n";
    for (const auto& r : rows) {
      out << std::setw(8) << r.tag << std::setw(18) << r.value
          << (r.preconditions.empty() ? "-" : r.preconditions) << " | " << r.notes
          << '\n';
    }
    out << std::right;
    for (const auto& w : warnings) out << "warning: " << w << '\n';
  }
  return kExitOk;
}

int cmd_validate(double samples, std::uint64_t seed, bool inject, std::ostream& out) {
  ValidationOptions opt;
  opt.samples = whole(samples, "samples");
  if (opt.samples < 10'000) throw UsageError("--samples must be >= 10000");
  opt.seed = seed;
  if (inject) opt.bound_scale = 1e-3;
  const ValidationReport report = validate_lemmas(opt);

  std::vector<std::string> suites;
  for (const auto& c : report.checks) {
    if (std::find(suites.begin(), suites.end(), c.suite) == suites.end()) {
      suites.push_back(c.suite);
    }
  }
  for (const auto& suite : suites) {
    int total = 0;
    int failed = 0;
    for (const auto& c : report.checks) {
      if (c.suite != suite) continue;
      ++total;
      failed += !c.passed;
    }
    out << suite << ": " << total - failed << '/' << total << " passed\n";
  }
  for (const auto& c : report.failures()) {
    out << "FAIL " << c.suite << ' ' << c.label << ": estimate " << format_float(c.estimate)
        << " (s.e. " << format_float(c.standard_error) << ") > bound "
        << format_float(c.bound) << '\n';
  }
  const bool ok = report.all_passed();
  out << (ok ? "all lemma checks passed" : "lemma checks FAILED") << '\n';
  return ok ? kExitOk : kExitValidationFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thompson Sampling and optimistic baselines on combinatorial semi-bandits",
               "semibandit"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  g.out_opt = app.add_option("--out", g.out,
                             "output directory (else $SEMIBANDIT_OUTPUT_DIR, the "
                             "config's output_dir, then ./results)");

  RunFlags sim;
  auto* simulate = app.add_subcommand("simulate", "run an experiment and write outputs");
  add_run_flags(simulate, sim, {});

  RunFlags tau;
  auto* tau_cdf = app.add_subcommand("tau-cdf", "first-hit time c.d.f. (stop at tau)");
  add_run_flags(tau_cdf, tau, {.stop = false});

  RunFlags sweep;
  std::vector<int> m_list;
  auto* sweep_m = app.add_subcommand("sweep-m", "E[tau] (and regret) as a function of m");
  add_run_flags(sweep_m, sweep, {.m = false});
  sweep_m->add_option("--m-list", m_list, "comma-separated m values")
      ->delimiter(',')
      ->required();

  RunFlags cmp;
  std::vector<std::string> policies;
  auto* compare = app.add_subcommand("compare", "paired regret comparison of policies");
  add_run_flags(compare, cmp, {.policy = false, .stop = false, .default_paths = 40});
  compare->add_option("--policies", policies, "comma-separated policy names")
      ->delimiter(',')
      ->required();

  BoundFlags bf;
  auto* bounds = app.add_subcommand("bounds", "evaluate closed-form bounds");
  bounds->add_option("--theorem", bf.theorem, "t1 t2 c1 t3 t4 t5 c2 t6 c3 t8 or all");
  bounds->add_option("--m", bf.m, "half dimension m");
  bf.delta_opt = bounds->add_option("--delta", bf.delta, "gap Delta");
  bf.delta_over_m_opt = bounds->add_option("--delta-over-m", bf.delta_over_m, "Delta/m");
  bf.delta_opt->excludes(bf.delta_over_m_opt);
  bounds->add_option("--ell", bf.ell, "forced exploration rounds");
  bf.horizon_opt = bounds->add_option("--horizon", bf.horizon, "horizon T (default: T -> inf)");
  bf.d_opt = bounds->add_option("--d", bf.d, "ambient dimension for t8 (default 2m)");
  bounds->add_flag("--csv", bf.csv, "CSV instead of an aligned table");

  double samples = 1e6;
  std::uint64_t lemma_seed = 1;
  bool inject = false;
  auto* lemmas = app.add_subcommand("validate-lemmas", "Monte Carlo dominance checks of the Beta tail bounds");
  lemmas->add_option("--samples", samples, "Monte Carlo samples per check (>= 10000)");
  lemmas->add_option("--seed", lemma_seed, "seed");
  lemmas->add_flag("--inject-wrong-bound", inject, "")->group("");

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadArguments;
  }

  try {
    if (*simulate) return cmd_simulate(sim, g, out);
    if (*tau_cdf) return cmd_tau_cdf(tau, g, out);
    if (*sweep_m) return cmd_sweep(sweep, m_list, g, out);
    if (*compare) return cmd_compare(cmp, policies, g, out);
    if (*bounds) return cmd_bounds(bf, out);
    if (*lemmas) return cmd_validate(samples, lemma_seed, inject, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadArguments;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadArguments;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidationFailed;
  }
  return kExitBadArguments;
}

}  // namespace semibandit
