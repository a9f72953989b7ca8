#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "semibandit/harness.hpp"

namespace semibandit {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Line of the first occurrence of "key" in the source, 0 if not found.
int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find('"' + key + '"');
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const int line = line_of_key(text_, key);
    std::string where = line > 0 ? "line " + std::to_string(line) + ": " : "";
    throw ConfigError(where + message);
  }

  void check_keys(const Json& object, const std::string& context,
                  std::initializer_list<const char*> allowed) const {
    if (!object.is_object()) fail(context, "'" + context + "' must be an object");
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& [key, value] : object.items()) {
      if (!known.contains(key)) fail(key, "unknown field '" + key + "'");
    }
  }

  std::int64_t integer(const Json& value, const std::string& key) const {
    if (value.is_number_integer()) return value.get<std::int64_t>();
    if (value.is_number_float()) {
      const double x = value.get<double>();
      if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9.2e18) {
        return static_cast<std::int64_t>(x);
      }
    }
    fail(key, "'" + key + "' must be an integer");
  }

  double number(const Json& value, const std::string& key) const {
    if (!value.is_number()) fail(key, "'" + key + "' must be a number");
    return value.get<double>();
  }

  std::string string(const Json& value, const std::string& key) const {
    if (!value.is_string()) fail(key, "'" + key + "' must be a string");
    return value.get<std::string>();
  }

  template <class F>
  auto guarded(const std::string& key, F&& f) const {
    try {
      return f();
    } catch (const std::invalid_argument& e) {
      fail(key, e.what());
    }
  }

 private:
  const std::string& text_;
};

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_of_offset(text, e.byte)) +
                      ": invalid JSON: " + e.what());
  }
  const Reader r(text);
  r.check_keys(doc, "config",
               {"instance", "policy", "stop_mode", "horizon", "cap", "paths",
                "seed", "regret_points", "output_dir", "level"});

  ExperimentConfig config;
  if (!doc.contains("instance")) throw ConfigError("missing field 'instance'");
  const Json& inst = doc["instance"];
  r.check_keys(inst, "instance", {"kind", "m", "delta", "delta_over_m"});
  if (!inst.contains("kind") || !inst.contains("m")) {
    r.fail("instance", "'instance' needs 'kind' and 'm'");
  }
  config.instance.kind =
      r.guarded("kind", [&] { return parse_set_kind(r.string(inst["kind"], "kind")); });
  config.instance.m = static_cast<int>(r.integer(inst["m"], "m"));
  if (inst.contains("delta")) config.instance.delta = r.number(inst["delta"], "delta");
  if (inst.contains("delta_over_m")) {
    config.instance.delta_over_m = r.number(inst["delta_over_m"], "delta_over_m");
  }

  if (doc.contains("policy")) {
    const Json& pol = doc["policy"];
    r.check_keys(pol, "policy", {"name", "forced_rounds", "cucb_constant"});
    if (pol.contains("name")) {
      config.policy.kind = r.guarded(
          "name", [&] { return parse_policy_kind(r.string(pol["name"], "name")); });
    }
    if (pol.contains("forced_rounds")) {
      config.policy.forced_rounds =
          static_cast<int>(r.integer(pol["forced_rounds"], "forced_rounds"));
    }
    if (pol.contains("cucb_constant")) {
      config.policy.cucb_constant = r.number(pol["cucb_constant"], "cucb_constant");
    }
  }
  if (doc.contains("stop_mode")) {
    config.stop_mode = r.guarded(
        "stop_mode", [&] { return parse_stop_mode(r.string(doc["stop_mode"], "stop_mode")); });
  }
  if (doc.contains("horizon")) config.horizon = r.integer(doc["horizon"], "horizon");
  if (doc.contains("cap")) config.cap = r.integer(doc["cap"], "cap");
  if (doc.contains("paths")) config.paths = r.integer(doc["paths"], "paths");
  if (doc.contains("seed")) {
    const Json& seed = doc["seed"];
    if (!seed.is_number_unsigned()) r.fail("seed", "'seed' must be a non-negative integer");
    config.seed = seed.get<std::uint64_t>();
  }
  if (doc.contains("regret_points")) {
    const Json& points = doc["regret_points"];
    if (!points.is_array()) r.fail("regret_points", "'regret_points' must be an array");
    for (const auto& p : points) {
      config.regret_points.push_back(r.integer(p, "regret_points"));
    }
  }
  if (doc.contains("output_dir")) {
    config.output_dir = r.string(doc["output_dir"], "output_dir");
  }
  if (doc.contains("level")) config.level = r.number(doc["level"], "level");

  try {
    validate(config);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

namespace {

OrderedJson optional_number(const std::optional<double>& x) {
  return x ? OrderedJson(*x) : OrderedJson(nullptr);
}

OrderedJson config_json(const ExperimentConfig& c) {
  OrderedJson inst;
  inst["kind"] = std::string(to_string(c.instance.kind));
  inst["m"] = c.instance.m;
  if (c.instance.delta) inst["delta"] = *c.instance.delta;
  if (c.instance.delta_over_m) inst["delta_over_m"] = *c.instance.delta_over_m;
  OrderedJson pol;
  pol["name"] = std::string(to_string(c.policy.kind));
  pol["forced_rounds"] = c.policy.forced_rounds;
  pol["cucb_constant"] = c.policy.cucb_constant;
  OrderedJson out;
  out["instance"] = inst;
  out["policy"] = pol;
  out["stop_mode"] = std::string(to_string(c.stop_mode));
  out["horizon"] = c.horizon;
  out["cap"] = c.cap;
  out["paths"] = c.paths;
  out["seed"] = c.seed;
  out["level"] = c.level;
  return out;
}

}  // namespace

std::string summary_json(const Summary& s) {
  OrderedJson doc;
  doc["config"] = config_json(s.config);

  OrderedJson inst;
  const Instance instance = s.config.instance.build();
  inst["d"] = instance.set.d();
  inst["m"] = instance.set.m();
  inst["decisions"] = instance.set.size();
  inst["gap"] = s.gap;
  inst["min_gap"] = optional_number(s.min_gap);
  doc["instance"] = inst;

  OrderedJson tau;
  tau["limit"] = s.tau_limit;
  tau["paths"] = s.tau.n;
  tau["censored"] = s.tau.censored;
  tau["mean"] = s.tau.mean.mean;
  tau["ci_half_width"] = optional_number(s.tau.mean.half_width);
  tau["mean_is_lower_bound"] = s.tau.mean_is_lower_bound;
  OrderedJson quantiles = OrderedJson::object();
  for (const auto& q : s.tau.quantiles) {
    quantiles[format_float(q.level)] =
        q.value ? OrderedJson(*q.value) : OrderedJson(nullptr);
  }
  tau["quantiles"] = quantiles;
  OrderedJson cdf = OrderedJson::array();
  OrderedJson survival = OrderedJson::array();
  for (std::size_t k = 0; k < s.tau.grid.size(); ++k) {
    const auto t = s.tau.grid[k];
    const auto& c = s.tau.cdf[k];
    const auto& v = s.tau.survival[k];
    cdf.push_back({{"t", t}, {"p", c.p}, {"lo", c.lo}, {"hi", c.hi}});
    survival.push_back({{"t", t}, {"p", v.p}, {"lo", v.lo}, {"hi", v.hi}});
  }
  tau["cdf"] = cdf;
  tau["survival"] = survival;
  doc["tau"] = tau;

  OrderedJson regret = OrderedJson::array();
  for (const auto& p : s.regret) {
    regret.push_back({{"t", p.t},
                      {"mean", p.regret.mean},
                      {"ci_half_width", optional_number(p.regret.half_width)},
                      {"lower_bound", optional_number(p.lower_bound)}});
  }
  doc["regret"] = regret;
  return doc.dump(2);
}

}  // namespace semibandit
