#pragma once

#include "srdkf/setcore.hpp"

#include <vector>

/// Timing risk: an upper bound on the probability that the timing error
/// leaves the alert band, from a stack of polytopes over the corrected
/// error p-zonotope plus the Gaussian tail beyond gamma.
namespace srdkf::risk {

using setcore::Polytope2D;
using setcore::PZonotope;

/// B = { (dT, dTdot) : |dT| >= alert_limit }.
struct UnsafeSet {
  double alert_limit = 26.5e-6;  // s
};

struct LevelContribution {
  double level_density = 0.0;
  double intersection_area = 0.0;
};

struct RiskResult {
  double risk = 0.0;
  double tail_term = 0.0;
  double slab_mass = 0.0;
  std::vector<LevelContribution> per_level;
};

struct RiskOptions {
  int ellipse_directions = 16;
  /// Weight each level by its top-face density instead of the slab
  /// thickness. Over-counts nested levels; kept for comparison.
  bool literal_sum = false;
};

/// Area of P inside x >= AL plus area inside x <= -AL.
double halfplane_clip_area(const Polytope2D& p, const UnsafeSet& b);

/// 1 - erf(gamma / sqrt 2)^(2n), evaluated without cancellation.
double tail_probability(double gamma, int n = 2);

/// Levels that cannot reach the unsafe set contribute zero area and are
/// skipped without building their polygons.
RiskResult timing_risk(const PZonotope& err_corr, const UnsafeSet& b, double gamma = 3.0, int levels = 32,
                       const RiskOptions& opts = {});

}  // namespace srdkf::risk
