#pragma once

#include "srdkf/netsim.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <string>

/// Scenario files and run artifacts.
///
/// Files carry unit-suffixed keys (`_s`, `_us`, `_nsps`, `_us2`, `_nsps2`);
/// everything in memory stays in SI. Receivers are 1-based on disk.
namespace srdkf::config {

using nlohmann::json;

/// Strict parse: unknown keys and wrong types are rejected with the JSON
/// path of the offending field; missing required fields are all listed in
/// one message. The result is validated.
netsim::Scenario scenario_from_json(const json& j);
json scenario_to_json(const netsim::Scenario& s);

/// Reads and parses a scenario file. An empty (or all-whitespace) file is
/// read as `{}` so the error names the missing fields; malformed JSON
/// reports line and column.
netsim::Scenario load_scenario(const std::filesystem::path& file);

/// Field-by-field equality; NaN generator half-widths compare equal.
bool equivalent(const netsim::Scenario& a, const netsim::Scenario& b);

/// Decimal display units (scale 1e-6 for µs, 1e-9 for ns/s, ...) convert by
/// dividing by the exact power of ten 1/scale, so "6" in ns/s parses to the
/// same double as the literal 6e-9.
double from_unit(double u, double scale);
/// Inverse of from_unit; nudged so that from_unit(to_unit(si)) == si
/// whenever such a double exists.
double to_unit(double si, double scale);

/// The power of ten 1/scale stands for, built by exact multiplication
/// (1/1e-18 itself is not 1e18).
inline double per_unit(double scale) {
  const long n = std::lround(-std::log10(scale));
  double k = 1.0;
  for (long i = 0; i < n; ++i) k *= 10.0;
  return k;
}

inline constexpr const char* kTimeseriesHeader = "k,t_s,rx,truth_T_us,truth_Tdot_nsps,est,dT_us,dTdot_nsps,alpha,risk";

/// One row per iteration x receiver x estimator, ordered that way. alpha and
/// risk are left empty for the baselines (and risk when not computed).
void write_timeseries(std::ostream& out, const netsim::SimLog& log);

json summary_to_json(const netsim::SimLog& log, const netsim::Scenario& s, const netsim::RunSummary& summary);
json monte_carlo_to_json(const netsim::MonteCarloResult& mc, const netsim::Scenario& s);

/// Writes `text` to `file`; throws std::runtime_error naming the path.
void write_file(const std::filesystem::path& file, const std::string& text);

}  // namespace srdkf::config
