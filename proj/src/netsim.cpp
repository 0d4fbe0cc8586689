#include "srdkf/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <type_traits>

namespace srdkf::netsim {

namespace {

using estimator::Measurement;
using setfilter::MeasurementBundle;

double standard_normal(std::mt19937_64& rng) {
  // A fresh distribution per call so no cached variate leaks between draws.
  std::normal_distribution<double> n(0.0, 1.0);
  return n(rng);
}

double sample_from(const MomentDraw& m, std::mt19937_64& rng) {
  return m.mean + std::sqrt(m.variance) * standard_normal(rng);
}

void check(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void check_bounds(const QuantityBounds& b, const std::string& path) {
  check(std::isfinite(b.mean_lo) && std::isfinite(b.mean_hi) && std::isfinite(b.cov_hi),
        path + ": bounds must be finite");
  check(b.mean_lo <= b.mean_hi, path + ": mean lower bound exceeds upper bound");
  check(b.cov_hi >= 0.0, path + ": covariance bound must be non-negative");
  check(std::isnan(b.generator_hw) || (std::isfinite(b.generator_hw) && b.generator_hw >= 0.0),
        path + ": generator half-width must be non-negative");
}

// Second-moment bound of a noise whose mean lies in the interval.
double second_moment(const QuantityBounds& b) {
  const double m = std::max(std::abs(b.mean_lo), std::abs(b.mean_hi));
  return m * m + b.cov_hi;
}

setcore::PZonotope bounds_pz(const std::vector<QuantityBounds>& parts, double inflation) {
  const auto n = static_cast<Eigen::Index>(parts.size());
  VectorXd center(n), hw(n), cov(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    center(i) = 0.5 * (parts[i].mean_lo + parts[i].mean_hi);
    hw(i) = parts[i].half_width();
    cov(i) = parts[i].cov_hi;
  }
  return setcore::from_halfwidths(center, hw, cov, inflation);
}

int redraw_every(const Scenario& s) {
  return std::max(1, static_cast<int>(std::lround(s.bounds.redraw_period_s / s.dt_s)));
}

bool selected(const RunOptions& o, Estimator e) {
  return std::find(o.estimators.begin(), o.estimators.end(), e) != o.estimators.end();
}

}  // namespace

NetworkGraph NetworkGraph::isolated(int n) {
  NetworkGraph g;
  g.n_receivers = n;
  g.adjacency.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) g.adjacency[i][i] = true;
  return g;
}

NetworkGraph NetworkGraph::fully_connected(int n) {
  NetworkGraph g;
  g.n_receivers = n;
  g.adjacency.assign(n, std::vector<bool>(n, true));
  return g;
}

NetworkGraph NetworkGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  NetworkGraph g = isolated(n);
  for (const auto& [a, b] : edges) {
    check(a >= 0 && a < n && b >= 0 && b < n, "graph.edges: receiver outside 1.." + std::to_string(n));
    g.adjacency[a][b] = true;
    g.adjacency[b][a] = true;
  }
  return g;
}

std::vector<int> NetworkGraph::neighbors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < n_receivers; ++j)
    if (adjacency[i][j]) out.push_back(j);
  return out;
}

std::vector<std::pair<int, int>> NetworkGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_receivers; ++i)
    for (int j = i + 1; j < n_receivers; ++j)
      if (adjacency[i][j]) out.emplace_back(i, j);
  return out;
}

void NetworkGraph::validate() const {
  check(n_receivers >= 1, "graph.n_receivers: must be at least 1");
  check(static_cast<int>(adjacency.size()) == n_receivers, "graph.edges: adjacency size mismatch");
  for (int i = 0; i < n_receivers; ++i) {
    check(static_cast<int>(adjacency[i].size()) == n_receivers, "graph.edges: adjacency size mismatch");
    check(adjacency[i][i], "graph.edges: receiver " + std::to_string(i + 1) + " is not connected to itself");
    for (int j = 0; j < n_receivers; ++j)
      check(adjacency[i][j] == adjacency[j][i], "graph.edges: adjacency is not symmetric");
  }
}

int Scenario::iterations() const {
  if (duration_s <= 0.0) return 0;
  return static_cast<int>(std::lround(duration_s / dt_s));
}

void Scenario::validate() const {
  graph.validate();
  check(n_satellites >= 1, "n_satellites: must be at least 1");
  check(std::isfinite(dt_s) && dt_s > 0.0, "dt_s: must be positive");
  check(std::isfinite(duration_s) && duration_s >= 0.0, "duration_s: must be non-negative");
  for (std::size_t a = 0; a < attacks.size(); ++a) {
    const auto& at = attacks[a];
    const std::string path = "attacks[" + std::to_string(a) + "]";
    check(at.victim >= 0 && at.victim < graph.n_receivers, path + ".victim: unknown receiver");
    check(at.start_s < at.end_s, path + ": start_s must precede end_s");
    check(std::isfinite(at.magnitude) && at.magnitude >= 0.0, path + ": magnitude must be non-negative");
  }
  check_bounds(bounds.process_T, "noise.process_T");
  check_bounds(bounds.process_Tdot, "noise.process_Tdot");
  check_bounds(bounds.pseudorange, "noise.pseudorange");
  check_bounds(bounds.doppler, "noise.doppler");
  check_bounds(bounds.initial_T, "noise.initial_T");
  check_bounds(bounds.initial_Tdot, "noise.initial_Tdot");
  check(bounds.inflation > 0.0, "noise.inflation: must be positive");
  check(bounds.redraw_period_s > 0.0, "noise.redraw_period_s: must be positive");
  check(psi >= 0.0 && psi <= 1.0, "psi: must lie in [0, 1]");
  check(gamma > 0.0, "gamma: must be positive");
  check(levels >= 1, "levels: must be at least 1");
  check(alert_limit_s > 0.0, "alert_limit_us: must be positive");
  check(filter.max_generators >= 0, "filter.max_generators: must be non-negative");
  check(filter.max_generators == 0 || filter.max_generators >= 2, "filter.max_generators: must be 0 or at least 2");
  check(filter.ellipse_directions >= 2, "filter.ellipse_directions: must be at least 2");
}

const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::srdkf: return "srdkf";
    case Estimator::pvdkf: return "pvdkf";
    case Estimator::akf: return "akf";
  }
  return "?";
}

Estimator estimator_from_string(const std::string& s) {
  if (s == "srdkf") return Estimator::srdkf;
  if (s == "pvdkf") return Estimator::pvdkf;
  if (s == "akf") return Estimator::akf;
  throw ConfigError("unknown estimator '" + s + "' (expected srdkf, pvdkf or akf)");
}

int SimLog::slot(Estimator e) const {
  const auto it = std::find(estimators.begin(), estimators.end(), e);
  return it == estimators.end() ? -1 : static_cast<int>(it - estimators.begin());
}

MomentDraw draw_moments(const QuantityBounds& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MomentDraw m;
  m.mean = b.mean_lo + (b.mean_hi - b.mean_lo) * u(rng);
  m.variance = b.cov_hi * u(rng);
  return m;
}

double sample_bounded_gaussian(const QuantityBounds& b, std::mt19937_64& rng) {
  return sample_from(draw_moments(b, rng), rng);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

Vector2d step_truth(const Vector2d& x, const Matrix2d& f, const Vector2d& process_noise) {
  return f * x + process_noise;
}

MatrixXd measurement_matrix(MeasurementModel model, int n_satellites) {
  if (model == MeasurementModel::ones) return MatrixXd::Ones(2 * n_satellites, 2);
  MatrixXd h = MatrixXd::Zero(2 * n_satellites, 2);
  for (int s = 0; s < n_satellites; ++s) {
    h(2 * s, 0) = 1.0;
    h(2 * s + 1, 1) = 1.0;
  }
  return h;
}

void apply_attacks(VectorXd& z, int receiver, double t_s, const std::vector<AttackSpec>& attacks) {
  for (const auto& a : attacks) {
    if (a.victim != receiver || !a.active(t_s)) continue;
    for (Eigen::Index c = 0; c + 1 < z.size(); c += 2) {
      if (a.kind == AttackKind::meaconing) {
        z(c) += a.magnitude;
      } else {
        z(c) += a.magnitude * (t_s - a.start_s);
        z(c + 1) += a.magnitude;
      }
    }
  }
}

World initialize(const Scenario& s, const RunOptions& opts) {
  s.validate();
  World w;
  w.scenario = s;
  w.options = opts;
  const auto& b = s.bounds;
  w.F = estimator::transition(s.dt_s);
  w.Q = Vector2d(second_moment(b.process_T), second_moment(b.process_Tdot)).asDiagonal();
  w.H = measurement_matrix(s.filter.model, s.n_satellites);
  w.process_pz = bounds_pz({b.process_T, b.process_Tdot}, b.inflation);
  std::vector<QuantityBounds> meas;
  for (int sat = 0; sat < s.n_satellites; ++sat) {
    meas.push_back(b.pseudorange);
    meas.push_back(b.doppler);
  }
  w.measurement_pz = bounds_pz(meas, b.inflation);
  const auto m = 2 * s.n_satellites;
  w.r0 = MatrixXd::Zero(m, m);
  for (int c = 0; c < m; ++c) w.r0(c, c) = second_moment(meas[c]);
  w.r_floor = s.filter.adaptive_r_floor ? w.r0 : MatrixXd();
  w.truth_rng = make_stream(s.rng_seed, 0);

  const setcore::PZonotope initial_pz = bounds_pz({b.initial_T, b.initial_Tdot}, b.inflation);
  const Matrix2d p0 = b.inflation * Vector2d(b.initial_T.cov_hi, b.initial_Tdot.cov_hi).asDiagonal();
  w.receivers.resize(s.graph.n_receivers);
  for (int i = 0; i < s.graph.n_receivers; ++i) {
    auto& r = w.receivers[i];
    r.rng = make_stream(s.rng_seed, static_cast<std::uint64_t>(i) + 1);
    const Vector2d err(sample_bounded_gaussian(b.initial_T, r.rng), sample_bounded_gaussian(b.initial_Tdot, r.rng));
    estimator::PointState p0_state{w.truth + err, p0};
    r.sr.point = p0_state;
    r.sr.err_corr = initial_pz;
    r.sr.err_pred = initial_pz;
    r.pv = p0_state;
    r.akf = p0_state;
    r.r_sr = r.r_pv = r.r_akf = w.r0;
  }
  return w;
}

std::vector<VectorXd> generate_measurements(World& w, int k) {
  const auto& s = w.scenario;
  const auto& b = s.bounds;
  const bool redraw = k % redraw_every(s) == 0;
  const double t = k * s.dt_s;
  std::vector<VectorXd> out;
  out.reserve(w.receivers.size());
  for (std::size_t i = 0; i < w.receivers.size(); ++i) {
    auto& r = w.receivers[i];
    const auto m = 2 * s.n_satellites;
    if (redraw || r.noise_moments.empty()) {
      r.noise_moments.resize(m);
      for (int c = 0; c < m; ++c) r.noise_moments[c] = draw_moments(c % 2 == 0 ? b.pseudorange : b.doppler, r.rng);
    }
    VectorXd z = w.H * w.truth;
    for (int c = 0; c < m; ++c) z(c) += sample_from(r.noise_moments[c], r.rng);
    apply_attacks(z, static_cast<int>(i), t, s.attacks);
    out.push_back(std::move(z));
  }
  return out;
}

void run_round(World& w, int k, SimLog& log) {
  const auto& s = w.scenario;
  const int n = s.graph.n_receivers;
  const bool run_sr = selected(w.options, Estimator::srdkf);
  const bool run_pv = selected(w.options, Estimator::pvdkf);
  const bool run_akf = selected(w.options, Estimator::akf);
  const bool prefit = s.filter.adaptive_residual == estimator::AdaptiveResidual::prefit;

  if (k % redraw_every(s) == 0 || w.process_moments.empty())
    w.process_moments = {draw_moments(s.bounds.process_T, w.truth_rng),
                         draw_moments(s.bounds.process_Tdot, w.truth_rng)};
  const Vector2d nu(sample_from(w.process_moments[0], w.truth_rng), sample_from(w.process_moments[1], w.truth_rng));
  w.truth = step_truth(w.truth, w.F, nu);
  const auto z = generate_measurements(w, k);

  // Phase 1: local prediction, adaptive R and the bundle each receiver broadcasts.
  std::vector<setfilter::SetState> sr_pred(n);
  std::vector<estimator::PointState> pv_pred(n);
  std::vector<MeasurementBundle> bundles(n);
  std::vector<Measurement> pv_bundles(n);
  for (int i = 0; i < n; ++i) {
    auto& r = w.receivers[i];
    if (run_sr) {
      sr_pred[i] = setfilter::sr_time_update(r.sr, w.F, w.Q, w.process_pz);
      const VectorXd eps = z[i] - w.H * sr_pred[i].point.mean;
      if (prefit) r.r_sr = estimator::adaptive_R(r.r_sr, s.psi, eps, w.H, sr_pred[i].point.covariance, w.r_floor);
      const auto l_eps = setfilter::innovation_pzonotope(sr_pred[i], w.H, w.measurement_pz);
      bundles[i] = {static_cast<std::size_t>(i), z[i], w.H, r.r_sr, setfilter::attack_status(l_eps, eps),
                    w.measurement_pz};
    }
    if (run_pv) {
      pv_pred[i] = estimator::pv_time_update(r.pv, w.F, w.Q);
      if (prefit)
        r.r_pv = estimator::adaptive_R(r.r_pv, s.psi, z[i] - w.H * pv_pred[i].mean, w.H, pv_pred[i].covariance,
                                       w.r_floor);
      pv_bundles[i] = {static_cast<std::size_t>(i), z[i], w.H, r.r_pv};
    }
    if (run_akf) {
      auto step = estimator::single_adaptive_kf_step(r.akf, w.F, w.Q, z[i], w.H, r.r_akf, s.psi, w.r_floor,
                                                     s.filter.adaptive_residual,
                                                     static_cast<std::size_t>(i));
      r.akf = step.state;
      r.r_akf = std::move(step.R);
    }
  }

  // A delayed neighbor bundle describes x_{k-1} = F^-1 x_k.
  const bool delayed = s.filter.edge_delay;
  const MatrixXd h_delayed = w.H * w.F.inverse();
  auto received = [&](int i, int j, auto& current, auto& previous) -> std::optional<std::decay_t<decltype(current[0])>> {
    if (!delayed || i == j) return current[j];
    if (previous.empty()) return std::nullopt;
    auto b = previous[j];
    b.H = h_delayed;
    return b;
  };

  // Phase 2 and 3: fuse the snapshot of neighbor bundles.
  for (int i = 0; i < n; ++i) {
    auto& r = w.receivers[i];
    const auto idx = log.index(k, i);
    const auto hood = s.graph.neighbors(i);
    if (run_sr) {
      std::vector<MeasurementBundle> mine;
      for (int j : hood)
        if (auto b = received(i, j, bundles, w.last_bundles)) mine.push_back(std::move(*b));
      r.sr = setfilter::sr_measurement_update(sr_pred[i], mine);
      setcore::ReduceOptions ro;
      ro.max_generators = s.filter.max_generators;
      r.sr.err_corr = setcore::reduce_generators(r.sr.err_corr, ro);
      if (!prefit)
        r.r_sr = estimator::adaptive_R(r.r_sr, s.psi, z[i] - w.H * r.sr.point.mean, w.H, r.sr.point.covariance,
                                       w.r_floor);
      log.alpha[idx] = bundles[i].attack_status;
      if (w.options.compute_risk)
        log.risk[idx] = risk::timing_risk(r.sr.err_corr, {s.alert_limit_s}, s.gamma, s.levels,
                                          {s.filter.ellipse_directions, false})
                            .risk;
    }
    if (run_pv) {
      std::vector<Measurement> mine;
      for (int j : hood)
        if (auto b = received(i, j, pv_bundles, w.last_pv_bundles)) mine.push_back(std::move(*b));
      r.pv = estimator::pv_measurement_update(pv_pred[i], mine, s.filter.fusion);
      if (!prefit)
        r.r_pv = estimator::adaptive_R(r.r_pv, s.psi, z[i] - w.H * r.pv.mean, w.H, r.pv.covariance, w.r_floor);
    }
  }
  if (delayed) {
    w.last_bundles = std::move(bundles);
    w.last_pv_bundles = std::move(pv_bundles);
  }

  log.truth[k] = w.truth;
  for (std::size_t e = 0; e < log.estimators.size(); ++e) {
    for (int i = 0; i < n; ++i) {
      const auto& r = w.receivers[i];
      const Vector2d est = log.estimators[e] == Estimator::srdkf   ? r.sr.point.mean
                           : log.estimators[e] == Estimator::pvdkf ? r.pv.mean
                                                                   : r.akf.mean;
      log.errors[e][log.index(k, i)] = est - w.truth;
    }
  }
}

SimLog run_scenario(const Scenario& s, const RunOptions& opts) {
  World w = initialize(s, opts);
  SimLog log;
  log.iterations = s.iterations();
  log.n_receivers = s.graph.n_receivers;
  log.dt_s = s.dt_s;
  log.estimators = opts.estimators;
  const auto cells = static_cast<std::size_t>(log.iterations) * log.n_receivers;
  log.truth.assign(log.iterations, Vector2d::Zero());
  log.errors.assign(log.estimators.size(), std::vector<Vector2d>(cells, Vector2d::Zero()));
  if (selected(opts, Estimator::srdkf)) {
    log.alpha.assign(cells, 0.0);
    if (opts.compute_risk) log.risk.assign(cells, 0.0);
  }
  for (int k = 0; k < log.iterations; ++k) run_round(w, k, log);
  return log;
}

RunSummary summarize(const SimLog& log, const Scenario& s) {
  RunSummary out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.receivers.resize(log.n_receivers);
  for (int i = 0; i < log.n_receivers; ++i) {
    auto& rs = out.receivers[i];
    rs.per_estimator.resize(log.estimators.size());
    for (std::size_t e = 0; e < log.estimators.size(); ++e) {
      for (int k = 0; k < log.iterations; ++k) {
        const Vector2d& err = log.errors[e][log.index(k, i)];
        rs.per_estimator[e].max_abs_dT_s = std::max(rs.per_estimator[e].max_abs_dT_s, std::abs(err.x()));
        rs.per_estimator[e].max_abs_dTdot = std::max(rs.per_estimator[e].max_abs_dTdot, std::abs(err.y()));
      }
    }
    std::vector<double> all_alpha, window_alpha, risks;
    if (!log.alpha.empty()) {
      for (int k = 0; k < log.iterations; ++k) {
        const double a = log.alpha[log.index(k, i)];
        all_alpha.push_back(a);
        const double t = k * log.dt_s;
        const bool attacked = std::any_of(s.attacks.begin(), s.attacks.end(),
                                          [&](const AttackSpec& at) { return at.victim == i && at.active(t); });
        if (attacked) window_alpha.push_back(a);
      }
    }
    if (!log.risk.empty())
      for (int k = 0; k < log.iterations; ++k) risks.push_back(log.risk[log.index(k, i)]);
    auto mean = [&](std::vector<double> v) {
      if (v.empty()) return nan;
      std::sort(v.begin(), v.end());
      return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    rs.mean_alpha = mean(all_alpha);
    rs.mean_alpha_attack_window = mean(window_alpha);
    rs.mean_risk = mean(risks);
    rs.max_risk = risks.empty() ? nan : *std::max_element(risks.begin(), risks.end());
  }
  return out;
}

Distribution describe(std::vector<double> values) {
  Distribution d;
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, nan};
  }
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  d.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  d.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  // Nearest-rank percentile.
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  d.p95 = values[std::max<std::size_t>(rank, 1) - 1];
  d.max = values.back();
  return d;
}

MonteCarloResult monte_carlo(const Scenario& s, int runs, std::uint64_t seed_base, const RunOptions& opts) {
  std::vector<RunSummary> per_run;
  for (int r = 0; r < runs; ++r) {
    Scenario run = s;
    run.rng_seed = seed_base + static_cast<std::uint64_t>(r);
    per_run.push_back(summarize(run_scenario(run, opts), run));
  }
  return aggregate(s, std::move(per_run), opts.estimators);
}

MonteCarloResult aggregate(const Scenario& s, std::vector<RunSummary> per_run, const std::vector<Estimator>& estimators) {
  MonteCarloResult out;
  const int runs = static_cast<int>(per_run.size());
  out.runs = runs;
  out.estimators = estimators;
  out.per_run = std::move(per_run);
  const int n = s.graph.n_receivers;
  const auto ne = estimators.size();
  out.max_abs_dT_s.assign(n, std::vector<Distribution>(ne));
  out.exceed_fraction.assign(n, std::vector<double>(ne, 0.0));
  out.mean_risk.resize(n);
  out.mean_alpha.resize(n);
  for (int i = 0; i < n; ++i) {
    for (std::size_t e = 0; e < ne; ++e) {
      std::vector<double> v;
      for (const auto& rs : out.per_run) v.push_back(rs.receivers[i].per_estimator[e].max_abs_dT_s);
      out.max_abs_dT_s[i][e] = describe(v);
      const auto hits = std::count_if(v.begin(), v.end(), [&](double x) { return x >= s.alert_limit_s; });
      out.exceed_fraction[i][e] = runs > 0 ? static_cast<double>(hits) / runs : 0.0;
    }
    std::vector<double> risk, alpha;
    for (const auto& rs : out.per_run) {
      risk.push_back(rs.receivers[i].mean_risk);
      alpha.push_back(rs.receivers[i].mean_alpha);
    }
    out.mean_risk[i] = describe(risk);
    out.mean_alpha[i] = describe(alpha);
  }
  return out;
}

NoiseBounds default_bounds() {
  NoiseBounds b;
  // Generator half-widths carry the covariance bound's number in the bound's
  // own unit, as in the 2D construction example (bounds [0,2], [0,3] give
  // G = diag(2, 3)).
  b.process_T = {-2.5e-6, 2.5e-6, 4e-12, 4e-6};
  b.process_Tdot = {-3.5e-9, 3.5e-9, 6e-18, 6e-9};
  b.pseudorange = {-1e-6, 1e-6, 3e-12, 3e-6};
  b.doppler = {-2.5e-9, 2.5e-9, 6e-18, 6e-9};
  b.initial_T = {-1.5e-6, 1.5e-6, 2e-12, 2e-6};
  b.initial_Tdot = {-2.5e-9, 2.5e-9, 4e-18, 4e-9};
  b.inflation = 3.0;
  b.redraw_period_s = 30.0;
  return b;
}

Scenario preset_none() {
  Scenario s;
  s.name = "none";
  // 1-based: 1-2 1-3 1-5 1-6 1-7 2-4 3-4 3-5 4-6 4-7 5-6 5-7
  s.graph = NetworkGraph::from_edges(
      7, {{0, 1}, {0, 2}, {0, 4}, {0, 5}, {0, 6}, {1, 3}, {2, 3}, {2, 4}, {3, 5}, {3, 6}, {4, 5}, {4, 6}});
  s.n_satellites = 8;
  s.dt_s = 1.0;
  s.duration_s = 1300.0;
  s.bounds = default_bounds();
  s.psi = 0.3;
  s.gamma = 6.0;
  s.levels = 32;
  s.alert_limit_s = 26.5e-6;
  s.rng_seed = 1;
  return s;
}

Scenario preset_coordinated() {
  Scenario s = preset_none();
  s.name = "coordinated";
  s.attacks = {{4, AttackKind::ramp, 40.0, 1040.0, 100e-9}, {0, AttackKind::ramp, 800.0, 1300.0, 400e-9}};
  return s;
}

Scenario preset_robustness_cell(double magnitude_s, int size) {
  Scenario s = preset_none();
  s.name = "robustness";
  s.graph = NetworkGraph::fully_connected(size);
  s.duration_s = 100.0;
  s.attacks = {{0, AttackKind::meaconing, 10.0, 100.0, magnitude_s}};
  return s;
}

std::vector<double> robustness_magnitudes_s() { return {30e-6, 45e-6, 60e-6, 100e-6}; }

std::vector<int> robustness_sizes() { return {2, 3, 4, 5, 6, 7}; }

}  // namespace srdkf::netsim
