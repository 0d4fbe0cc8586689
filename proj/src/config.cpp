#include "srdkf/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace srdkf::config {

using netsim::ConfigError;

namespace {

constexpr double kUs = 1e-6;
constexpr double kUs2 = 1e-12;
constexpr double kNsps = 1e-9;
constexpr double kNsps2 = 1e-18;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Walks one JSON object, remembering which keys were read so the rest can be
// reported as unknown. Missing required fields are collected, not thrown, so
// one error lists all of them.
class Reader {
 public:
  Reader(const json& j, std::string path, std::vector<std::string>& missing)
      : j_(j), path_(std::move(path)), missing_(missing) {
    if (!j_.is_object()) throw ConfigError((path_.empty() ? "scenario" : path_) + ": expected an object");
  }

  const json* find(const std::string& key, bool required) {
    allowed_.push_back(key);
    const auto it = j_.find(key);
    if (it == j_.end()) {
      if (required) missing_.push_back(join(path_, key));
      return nullptr;
    }
    return &*it;
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  double number(const std::string& key, double fallback, bool required = false, double scale = 1.0) {
    const json* v = find(key, required);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(path(key) + ": expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigError(path(key) + ": must be finite");
    return from_unit(x, scale);
  }

  // Absent or null reads as NaN.
  double optional_number(const std::string& key, double scale) {
    const json* v = find(key, false);
    if (!v || v->is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!v->is_number()) throw ConfigError(path(key) + ": expected a number or null");
    return from_unit(v->get<double>(), scale);
  }

  long long integer(const std::string& key, long long fallback, bool required = false) {
    const json* v = find(key, required);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
    return v->get<long long>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    const json* v = find(key, false);
    if (!v) return fallback;
    if (!v->is_number_unsigned()) throw ConfigError(path(key) + ": expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key, false);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(path(key) + ": expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback, bool required = false) {
    const json* v = find(key, required);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(path(key) + ": expected a string");
    return v->get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (std::find(allowed_.begin(), allowed_.end(), key) == allowed_.end())
        throw ConfigError(join(path_, key) + ": unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string>& missing_;
  std::vector<std::string> allowed_;
};

template <class E>
E pick(const std::string& value, const std::string& path, std::initializer_list<std::pair<const char*, E>> options) {
  std::string names;
  for (const auto& [name, e] : options) {
    if (value == name) return e;
    names += names.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError(path + ": unknown value '" + value + "' (expected one of " + names + ")");
}

struct Units {
  const char* mean;
  const char* var;
  double mean_scale;
  double var_scale;
};

constexpr Units kTimeUnits{"_us", "_us2", kUs, kUs2};
constexpr Units kRateUnits{"_nsps", "_nsps2", kNsps, kNsps2};

netsim::QuantityBounds read_quantity(const json& j, const std::string& path, const Units& u,
                                     std::vector<std::string>& missing) {
  Reader r(j, path, missing);
  netsim::QuantityBounds q;
  q.mean_lo = r.number(std::string("mean_lo") + u.mean, 0.0, true, u.mean_scale);
  q.mean_hi = r.number(std::string("mean_hi") + u.mean, 0.0, true, u.mean_scale);
  q.cov_hi = r.number(std::string("var_hi") + u.var, 0.0, true, u.var_scale);
  q.generator_hw = r.optional_number(std::string("generator_hw") + u.mean, u.mean_scale);
  r.finish();
  return q;
}

json quantity_to_json(const netsim::QuantityBounds& q, const Units& u) {
  json j = json::object();
  j[std::string("mean_lo") + u.mean] = to_unit(q.mean_lo, u.mean_scale);
  j[std::string("mean_hi") + u.mean] = to_unit(q.mean_hi, u.mean_scale);
  j[std::string("var_hi") + u.var] = to_unit(q.cov_hi, u.var_scale);
  j[std::string("generator_hw") + u.mean] =
      std::isnan(q.generator_hw) ? json(nullptr) : json(to_unit(q.generator_hw, u.mean_scale));
  return j;
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same(const netsim::QuantityBounds& a, const netsim::QuantityBounds& b) {
  return same(a.mean_lo, b.mean_lo) && same(a.mean_hi, b.mean_hi) && same(a.cov_hi, b.cov_hi) &&
         same(a.generator_hw, b.generator_hw);
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// JSON has no NaN.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

double from_unit(double u, double scale) { return u / per_unit(scale); }

double to_unit(double si, double scale) {
  const double k = per_unit(scale);
  const double u = si * k;
  if (u / k == si || !std::isfinite(u)) return u;
  double up = u, down = u;
  for (int step = 0; step < 4; ++step) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    if (up / k == si) return up;
    if (down / k == si) return down;
  }
  return u;
}

netsim::Scenario scenario_from_json(const json& j) {
  std::vector<std::string> missing;
  netsim::Scenario s = netsim::preset_none();
  s.attacks.clear();
  s.name = "custom";
  Reader root(j, "", missing);
  s.name = root.string("name", s.name);

  if (const json* g = root.find("graph", true)) {
    Reader r(*g, "graph", missing);
    const auto n = r.integer("n_receivers", 0, true);
    if (n < 1 || n > 10000) throw ConfigError("graph.n_receivers: must lie in 1..10000");
    std::vector<std::pair<int, int>> edges;
    if (const json* e = r.find("edges", true)) {
      if (!e->is_array()) throw ConfigError("graph.edges: expected an array of [i, j] pairs");
      for (std::size_t k = 0; k < e->size(); ++k) {
        const std::string p = "graph.edges[" + std::to_string(k) + "]";
        const json& pair = (*e)[k];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
          throw ConfigError(p + ": expected a pair of receiver numbers");
        const auto a = pair[0].get<long long>(), b = pair[1].get<long long>();
        if (a < 1 || a > n || b < 1 || b > n)
          throw ConfigError(p + ": receiver outside 1.." + std::to_string(n));
        edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
      }
    }
    r.finish();
    s.graph = netsim::NetworkGraph::from_edges(static_cast<int>(n), edges);
  }

  const auto sats = root.integer("n_satellites", s.n_satellites);
  if (sats < 1 || sats > 1000) throw ConfigError("n_satellites: must lie in 1..1000");
  s.n_satellites = static_cast<int>(sats);
  s.dt_s = root.number("dt_s", s.dt_s);
  s.duration_s = root.number("duration_s", 0.0, true);

  if (const json* a = root.find("attacks", false)) {
    if (!a->is_array()) throw ConfigError("attacks: expected an array");
    for (std::size_t k = 0; k < a->size(); ++k) {
      const std::string p = "attacks[" + std::to_string(k) + "]";
      Reader r((*a)[k], p, missing);
      netsim::AttackSpec at;
      const auto victim = r.integer("victim", 1, true);
      at.victim = static_cast<int>(victim - 1);
      at.kind = pick<netsim::AttackKind>(r.string("kind", "ramp", true), r.path("kind"),
                                         {{"meaconing", netsim::AttackKind::meaconing},
                                          {"ramp", netsim::AttackKind::ramp}});
      at.start_s = r.number("start_s", 0.0, true);
      at.end_s = r.number("end_s", 0.0, true);
      if (at.kind == netsim::AttackKind::meaconing)
        at.magnitude = r.number("bias_us", 0.0, true, kUs);
      else
        at.magnitude = r.number("rate_nsps", 0.0, true, kNsps);
      r.finish();
      s.attacks.push_back(at);
    }
  }

  if (const json* nz = root.find("noise", false)) {
    Reader r(*nz, "noise", missing);
    auto& b = s.bounds;
    if (const json* q = r.find("process_T", false)) b.process_T = read_quantity(*q, "noise.process_T", kTimeUnits, missing);
    if (const json* q = r.find("process_Tdot", false))
      b.process_Tdot = read_quantity(*q, "noise.process_Tdot", kRateUnits, missing);
    if (const json* q = r.find("pseudorange", false))
      b.pseudorange = read_quantity(*q, "noise.pseudorange", kTimeUnits, missing);
    if (const json* q = r.find("doppler", false)) b.doppler = read_quantity(*q, "noise.doppler", kRateUnits, missing);
    if (const json* q = r.find("initial_T", false)) b.initial_T = read_quantity(*q, "noise.initial_T", kTimeUnits, missing);
    if (const json* q = r.find("initial_Tdot", false))
      b.initial_Tdot = read_quantity(*q, "noise.initial_Tdot", kRateUnits, missing);
    b.inflation = r.number("inflation", b.inflation);
    b.redraw_period_s = r.number("redraw_period_s", b.redraw_period_s);
    r.finish();
  }

  s.psi = root.number("psi", s.psi);
  s.gamma = root.number("gamma", s.gamma);
  const auto levels = root.integer("levels", s.levels);
  if (levels < 1 || levels > 100000) throw ConfigError("levels: must lie in 1..100000");
  s.levels = static_cast<int>(levels);
  s.alert_limit_s = root.number("alert_limit_us", s.alert_limit_s, false, kUs);
  s.rng_seed = root.unsigned_integer("rng_seed", s.rng_seed);

  if (const json* f = root.find("filter", false)) {
    Reader r(*f, "filter", missing);
    auto& o = s.filter;
    o.model = pick<netsim::MeasurementModel>(r.string("measurement_model", "ones"), r.path("measurement_model"),
                                             {{"ones", netsim::MeasurementModel::ones},
                                              {"block", netsim::MeasurementModel::block}});
    o.fusion = pick<estimator::FusionMode>(r.string("fusion", "batch"), r.path("fusion"),
                                           {{"batch", estimator::FusionMode::batch},
                                            {"sequential", estimator::FusionMode::sequential}});
    o.edge_delay = r.boolean("edge_delay", o.edge_delay);
    const auto gens = r.integer("max_generators", o.max_generators);
    const auto dirs = r.integer("ellipse_directions", o.ellipse_directions);
    if (gens < 0 || gens > 100000) throw ConfigError("filter.max_generators: must lie in 0..100000");
    if (dirs < 2 || dirs > 4096) throw ConfigError("filter.ellipse_directions: must lie in 2..4096");
    o.max_generators = static_cast<int>(gens);
    o.ellipse_directions = static_cast<int>(dirs);
    o.adaptive_r_floor = r.boolean("adaptive_r_floor", o.adaptive_r_floor);
    o.adaptive_residual = pick<estimator::AdaptiveResidual>(
        r.string("adaptive_residual", "postfit"), r.path("adaptive_residual"),
        {{"postfit", estimator::AdaptiveResidual::postfit}, {"prefit", estimator::AdaptiveResidual::prefit}});
    r.finish();
  }
  root.finish();

  if (!missing.empty()) {
    std::string msg = "missing required field";
    msg += missing.size() > 1 ? "s: " : ": ";
    for (std::size_t k = 0; k < missing.size(); ++k) msg += (k ? ", " : "") + missing[k];
    throw ConfigError(msg);
  }
  s.validate();
  return s;
}

json scenario_to_json(const netsim::Scenario& s) {
  json j = json::object();
  j["name"] = s.name;
  json edges = json::array();
  for (const auto& [a, b] : s.graph.edges()) edges.push_back({a + 1, b + 1});
  j["graph"] = {{"n_receivers", s.graph.n_receivers}, {"edges", edges}};
  j["n_satellites"] = s.n_satellites;
  j["dt_s"] = s.dt_s;
  j["duration_s"] = s.duration_s;
  json attacks = json::array();
  for (const auto& a : s.attacks) {
    json at = {{"victim", a.victim + 1}, {"start_s", a.start_s}, {"end_s", a.end_s}};
    if (a.kind == netsim::AttackKind::meaconing) {
      at["kind"] = "meaconing";
      at["bias_us"] = to_unit(a.magnitude, kUs);
    } else {
      at["kind"] = "ramp";
      at["rate_nsps"] = to_unit(a.magnitude, kNsps);
    }
    attacks.push_back(at);
  }
  j["attacks"] = attacks;
  const auto& b = s.bounds;
  j["noise"] = {{"process_T", quantity_to_json(b.process_T, kTimeUnits)},
                {"process_Tdot", quantity_to_json(b.process_Tdot, kRateUnits)},
                {"pseudorange", quantity_to_json(b.pseudorange, kTimeUnits)},
                {"doppler", quantity_to_json(b.doppler, kRateUnits)},
                {"initial_T", quantity_to_json(b.initial_T, kTimeUnits)},
                {"initial_Tdot", quantity_to_json(b.initial_Tdot, kRateUnits)},
                {"inflation", b.inflation},
                {"redraw_period_s", b.redraw_period_s}};
  j["psi"] = s.psi;
  j["gamma"] = s.gamma;
  j["levels"] = s.levels;
  j["alert_limit_us"] = to_unit(s.alert_limit_s, kUs);
  j["rng_seed"] = s.rng_seed;
  const auto& f = s.filter;
  j["filter"] = {
      {"measurement_model", f.model == netsim::MeasurementModel::ones ? "ones" : "block"},
      {"fusion", f.fusion == estimator::FusionMode::batch ? "batch" : "sequential"},
      {"edge_delay", f.edge_delay},
      {"max_generators", f.max_generators},
      {"ellipse_directions", f.ellipse_directions},
      {"adaptive_r_floor", f.adaptive_r_floor},
      {"adaptive_residual", f.adaptive_residual == estimator::AdaptiveResidual::postfit ? "postfit" : "prefit"}};
  return j;
}

netsim::Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string() + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    j = json::object();
  } else {
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      // Map the byte offset to a line and column.
      const auto pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
      const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
      const auto nl = text.rfind('\n', pos == 0 ? 0 : pos - 1);
      const auto col = nl == std::string::npos ? pos + 1 : pos - nl;
      throw ConfigError(file.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                        ": invalid JSON");
    }
  }
  try {
    return scenario_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
}

bool equivalent(const netsim::Scenario& a, const netsim::Scenario& b) {
  if (a.name != b.name || a.graph.n_receivers != b.graph.n_receivers || a.graph.adjacency != b.graph.adjacency)
    return false;
  if (a.n_satellites != b.n_satellites || !same(a.dt_s, b.dt_s) || !same(a.duration_s, b.duration_s)) return false;
  if (a.attacks.size() != b.attacks.size()) return false;
  for (std::size_t k = 0; k < a.attacks.size(); ++k) {
    const auto &x = a.attacks[k], &y = b.attacks[k];
    if (x.victim != y.victim || x.kind != y.kind || !same(x.start_s, y.start_s) || !same(x.end_s, y.end_s) ||
        !same(x.magnitude, y.magnitude))
      return false;
  }
  const auto &p = a.bounds, &q = b.bounds;
  if (!same(p.process_T, q.process_T) || !same(p.process_Tdot, q.process_Tdot) ||
      !same(p.pseudorange, q.pseudorange) || !same(p.doppler, q.doppler) || !same(p.initial_T, q.initial_T) ||
      !same(p.initial_Tdot, q.initial_Tdot) || !same(p.inflation, q.inflation) ||
      !same(p.redraw_period_s, q.redraw_period_s))
    return false;
  const auto &f = a.filter, &g = b.filter;
  return same(a.psi, b.psi) && same(a.gamma, b.gamma) && a.levels == b.levels &&
         same(a.alert_limit_s, b.alert_limit_s) && a.rng_seed == b.rng_seed && f.model == g.model &&
         f.fusion == g.fusion && f.edge_delay == g.edge_delay && f.max_generators == g.max_generators &&
         f.ellipse_directions == g.ellipse_directions && f.adaptive_r_floor == g.adaptive_r_floor &&
         f.adaptive_residual == g.adaptive_residual;
}

void write_timeseries(std::ostream& out, const netsim::SimLog& log) {
  out << kTimeseriesHeader << '\n';
  std::string row;
  for (int k = 0; k < log.iterations; ++k) {
    const Eigen::Vector2d& x = log.truth[k];
    const std::string prefix_k = std::to_string(k) + "," + fmt17(k * log.dt_s) + ",";
    const std::string truth = fmt17(x.x() / kUs) + "," + fmt17(x.y() / kNsps) + ",";
    for (int i = 0; i < log.n_receivers; ++i) {
      const auto idx = log.index(k, i);
      for (std::size_t e = 0; e < log.estimators.size(); ++e) {
        const Eigen::Vector2d& err = log.errors[e][idx];
        row = prefix_k + std::to_string(i + 1) + "," + truth + netsim::to_string(log.estimators[e]) + "," +
              fmt17(err.x() / kUs) + "," + fmt17(err.y() / kNsps) + ",";
        if (log.estimators[e] == netsim::Estimator::srdkf) {
          if (!log.alpha.empty()) row += fmt17(log.alpha[idx]);
          row += ",";
          if (!log.risk.empty()) row += fmt17(log.risk[idx]);
        } else {
          row += ",";
        }
        out << row << '\n';
      }
    }
  }
}

json summary_to_json(const netsim::SimLog& log, const netsim::Scenario& s, const netsim::RunSummary& summary) {
  json rx = json::array();
  for (int i = 0; i < log.n_receivers; ++i) {
    const auto& r = summary.receivers[i];
    json est = json::object();
    for (std::size_t e = 0; e < log.estimators.size(); ++e) {
      // Same division as the CSV so the maxima agree bit for bit.
      est[netsim::to_string(log.estimators[e])] = {
          {"max_abs_dT_us", r.per_estimator[e].max_abs_dT_s / kUs},
          {"max_abs_dTdot_nsps", r.per_estimator[e].max_abs_dTdot / kNsps}};
    }
    rx.push_back({{"rx", i + 1},
                  {"estimators", est},
                  {"mean_alpha", number_or_null(r.mean_alpha)},
                  {"mean_alpha_attack_window", number_or_null(r.mean_alpha_attack_window)},
                  {"mean_risk", number_or_null(r.mean_risk)},
                  {"max_risk", number_or_null(r.max_risk)}});
  }
  json names = json::array();
  for (auto e : log.estimators) names.push_back(netsim::to_string(e));
  return {{"scenario", s.name},
          {"rng_seed", s.rng_seed},
          {"iterations", log.iterations},
          {"alert_limit_us", to_unit(s.alert_limit_s, kUs)},
          {"estimators", names},
          {"receivers", rx}};
}

json monte_carlo_to_json(const netsim::MonteCarloResult& mc, const netsim::Scenario& s) {
  auto dist = [](const netsim::Distribution& d, double scale) {
    return json{{"mean", number_or_null(d.mean / scale)},
                {"median", number_or_null(d.median / scale)},
                {"p95", number_or_null(d.p95 / scale)},
                {"max", number_or_null(d.max / scale)}};
  };
  json rx = json::array();
  const int n = static_cast<int>(mc.mean_risk.size());
  for (int i = 0; i < n; ++i) {
    json est = json::object();
    for (std::size_t e = 0; e < mc.estimators.size(); ++e)
      est[netsim::to_string(mc.estimators[e])] = {{"max_abs_dT_us", dist(mc.max_abs_dT_s[i][e], kUs)},
                                                  {"exceed_fraction", mc.exceed_fraction[i][e]}};
    json per_run_risk = json::array();
    for (const auto& run : mc.per_run) per_run_risk.push_back(number_or_null(run.receivers[i].mean_risk));
    rx.push_back({{"rx", i + 1},
                  {"estimators", est},
                  {"mean_risk", dist(mc.mean_risk[i], 1.0)},
                  {"mean_alpha", dist(mc.mean_alpha[i], 1.0)},
                  {"per_run_mean_risk", per_run_risk}});
  }
  return {{"scenario", s.name}, {"runs", mc.runs}, {"seed_base", s.rng_seed}, {"receivers", rx}};
}

void write_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error(file.string() + ": cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error(file.string() + ": write failed");
}

}  // namespace srdkf::config
