#pragma once

#include "srdkf/estimator.hpp"
#include "srdkf/risk.hpp"
#include "srdkf/setfilter.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

/// Discrete-time simulation of a receiver network: truth clock, synthetic
/// residual measurements with slowly varying bounded-Gaussian noise, spoofing
/// injection and the per-round filter loop.
///
/// Receivers are 0-based in code and 1-based in every file and message.
namespace srdkf::netsim {

using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct NetworkGraph {
  int n_receivers = 0;
  std::vector<std::vector<bool>> adjacency;  // symmetric, true diagonal

  static NetworkGraph isolated(int n);
  static NetworkGraph fully_connected(int n);
  /// Undirected edges between 0-based receivers; self-loops are implied.
  static NetworkGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  /// Neighborhood M_i in ascending order, i included.
  std::vector<int> neighbors(int i) const;
  /// Undirected edges (i < j), 0-based, lexicographic.
  std::vector<std::pair<int, int>> edges() const;
  void validate() const;
};

enum class AttackKind { meaconing, ramp };

struct AttackSpec {
  int victim = 0;
  AttackKind kind = AttackKind::ramp;
  double start_s = 0.0;
  double end_s = 0.0;
  double magnitude = 0.0;  // s for meaconing, s/s for ramp

  bool active(double t_s) const { return t_s >= start_s && t_s < end_s; }
};

/// Bounds on the moments of one scalar noise source.
struct QuantityBounds {
  double mean_lo = 0.0;
  double mean_hi = 0.0;
  double cov_hi = 0.0;  // variance upper bound
  /// Generator half-width of the bounding p-zonotope; NaN means half the
  /// mean interval.
  double generator_hw = std::numeric_limits<double>::quiet_NaN();

  double half_width() const { return std::isnan(generator_hw) ? 0.5 * (mean_hi - mean_lo) : generator_hw; }
};

struct NoiseBounds {
  QuantityBounds process_T, process_Tdot;
  QuantityBounds pseudorange, doppler;
  QuantityBounds initial_T, initial_Tdot;
  double inflation = 3.0;
  double redraw_period_s = 30.0;
};

enum class MeasurementModel {
  ones,   // H = 1 (2N x 2): both states enter every residual
  block,  // [1 0; 0 1] per satellite
};

struct FilterOptions {
  MeasurementModel model = MeasurementModel::ones;
  estimator::FusionMode fusion = estimator::FusionMode::batch;
  bool edge_delay = false;
  int max_generators = 32;
  int ellipse_directions = 16;
  /// Adds the nominal measurement covariance to the adaptive R blend.
  bool adaptive_r_floor = true;
  estimator::AdaptiveResidual adaptive_residual = estimator::AdaptiveResidual::postfit;
};

struct Scenario {
  std::string name = "custom";
  NetworkGraph graph;
  int n_satellites = 8;
  double dt_s = 1.0;
  double duration_s = 0.0;
  std::vector<AttackSpec> attacks;
  NoiseBounds bounds;
  double psi = 0.3;
  double gamma = 3.0;
  int levels = 32;
  double alert_limit_s = 26.5e-6;
  std::uint64_t rng_seed = 1;
  FilterOptions filter;

  int iterations() const;
  /// Throws ConfigError with the offending field path.
  void validate() const;
};

enum class Estimator { srdkf, pvdkf, akf };

const char* to_string(Estimator e);
Estimator estimator_from_string(const std::string& s);

struct RunOptions {
  std::vector<Estimator> estimators{Estimator::srdkf, Estimator::pvdkf, Estimator::akf};
  bool compute_risk = true;
};

/// Per iteration k and receiver i, flattened as k * n_receivers + i.
struct SimLog {
  int iterations = 0;
  int n_receivers = 0;
  double dt_s = 1.0;
  std::vector<Estimator> estimators;
  std::vector<Vector2d> truth;                // per k
  std::vector<std::vector<Vector2d>> errors;  // per estimator, estimate - truth
  std::vector<double> alpha;                  // SR-DKF only, empty otherwise
  std::vector<double> risk;                   // empty unless computed

  std::size_t index(int k, int i) const { return static_cast<std::size_t>(k) * n_receivers + i; }
  /// Position of e in `estimators`, -1 when not run.
  int slot(Estimator e) const;
};

struct EstimatorSummary {
  double max_abs_dT_s = 0.0;
  double max_abs_dTdot = 0.0;
};

struct ReceiverSummary {
  std::vector<EstimatorSummary> per_estimator;  // aligned with SimLog::estimators
  double mean_alpha = 0.0;
  double mean_alpha_attack_window = 0.0;  // NaN when never attacked
  double mean_risk = 0.0;                 // NaN when risk was not computed
  double max_risk = 0.0;
};

struct RunSummary {
  std::vector<ReceiverSummary> receivers;
};

RunSummary summarize(const SimLog& log, const Scenario& s);

/// Moment draws for one noise source, held for redraw_period_s.
struct MomentDraw {
  double mean = 0.0;
  double variance = 0.0;
};

MomentDraw draw_moments(const QuantityBounds& b, std::mt19937_64& rng);
/// Fresh moments and one sample from N(mean, variance).
double sample_bounded_gaussian(const QuantityBounds& b, std::mt19937_64& rng);

/// One RNG stream per (seed, stream) pair; streams never overlap in use.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

Vector2d step_truth(const Vector2d& x, const Matrix2d& f, const Vector2d& process_noise);

MatrixXd measurement_matrix(MeasurementModel model, int n_satellites);

/// Adds every active attack on `receiver` to its measurement vector.
void apply_attacks(VectorXd& z, int receiver, double t_s, const std::vector<AttackSpec>& attacks);

struct ReceiverState {
  setfilter::SetState sr;
  estimator::PointState pv;
  estimator::PointState akf;
  MatrixXd r_sr, r_pv, r_akf;
  std::vector<MomentDraw> noise_moments;  // per measurement component
  std::mt19937_64 rng;
};

/// Everything that changes from round to round.
struct World {
  Scenario scenario;
  RunOptions options;
  Matrix2d F;
  Matrix2d Q;
  MatrixXd H;
  setcore::PZonotope process_pz;
  setcore::PZonotope measurement_pz;
  MatrixXd r0;
  MatrixXd r_floor;  // empty when the adaptive R has no floor
  Vector2d truth = Vector2d::Zero();
  std::vector<MomentDraw> process_moments;  // T, Tdot
  std::mt19937_64 truth_rng;
  std::vector<ReceiverState> receivers;
  std::vector<setfilter::MeasurementBundle> last_bundles;  // for edge_delay
  std::vector<estimator::Measurement> last_pv_bundles;
};

World initialize(const Scenario& s, const RunOptions& opts = {});

/// Draws z_i = H x + omega_i for every receiver, attacks included.
std::vector<VectorXd> generate_measurements(World& w, int k);

/// One full round; appends iteration k to the log.
void run_round(World& w, int k, SimLog& log);

SimLog run_scenario(const Scenario& s, const RunOptions& opts = {});

struct Distribution {
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  double max = 0.0;
};

struct MonteCarloResult {
  int runs = 0;
  std::vector<Estimator> estimators;
  std::vector<std::vector<Distribution>> max_abs_dT_s;  // [receiver][estimator]
  std::vector<std::vector<double>> exceed_fraction;     // [receiver][estimator], max |dT| >= AL
  std::vector<Distribution> mean_risk;                  // [receiver]
  std::vector<Distribution> mean_alpha;                 // [receiver]
  std::vector<RunSummary> per_run;                      // in seed order
};

/// Seeds seed_base .. seed_base + runs - 1. Aggregates sort their inputs, so
/// they do not depend on the order of the seeds.
MonteCarloResult monte_carlo(const Scenario& s, int runs, std::uint64_t seed_base, const RunOptions& opts = {});
/// The aggregation step of monte_carlo over already summarized runs.
MonteCarloResult aggregate(const Scenario& s, std::vector<RunSummary> per_run, const std::vector<Estimator>& estimators);

Distribution describe(std::vector<double> values);

/// Noise bounds and filter settings shared by all presets.
NoiseBounds default_bounds();
Scenario preset_coordinated();
Scenario preset_none();
/// One cell of the robustness study: meaconing at receiver 1 of a fully
/// connected network of `size` receivers.
Scenario preset_robustness_cell(double magnitude_s, int size);
std::vector<double> robustness_magnitudes_s();
std::vector<int> robustness_sizes();

}  // namespace srdkf::netsim
