#include "srdkf/risk.hpp"

#include <cmath>
#include <stdexcept>

namespace srdkf::risk {

namespace {

using Eigen::Vector2d;

// Keeps the part of a convex polygon with sign * x >= limit.
std::vector<Vector2d> clip(const std::vector<Vector2d>& poly, double sign, double limit) {
  std::vector<Vector2d> out;
  const auto n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector2d& a = poly[i];
    const Vector2d& b = poly[(i + 1) % n];
    const double fa = sign * a.x() - limit;
    const double fb = sign * b.x() - limit;
    if (fa >= 0.0) out.push_back(a);
    if ((fa >= 0.0) != (fb >= 0.0)) {
      const double t = fa / (fa - fb);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

double shoelace(const std::vector<Vector2d>& poly) {
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vector2d& a = poly[i];
    const Vector2d& b = poly[(i + 1) % poly.size()];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * std::abs(twice);
}

}  // namespace

double halfplane_clip_area(const Polytope2D& p, const UnsafeSet& b) {
  if (!(b.alert_limit > 0.0)) throw std::invalid_argument("alert limit must be positive");
  return shoelace(clip(p.vertices, 1.0, b.alert_limit)) + shoelace(clip(p.vertices, -1.0, b.alert_limit));
}

double tail_probability(double gamma, int n) {
  // 1 - (1 - e)^(2n) with e = erfc(gamma / sqrt 2)
  const double e = std::erfc(gamma / std::sqrt(2.0));
  return -std::expm1(2.0 * n * std::log1p(-e));
}

RiskResult timing_risk(const PZonotope& err_corr, const UnsafeSet& b, double gamma, int levels,
                       const RiskOptions& opts) {
  if (err_corr.dim() != 2) throw setcore::DimensionError("timing_risk: error set must be 2D");
  if (!(gamma > 0.0)) throw std::invalid_argument("timing_risk: gamma must be positive");
  if (!(b.alert_limit > 0.0)) throw std::invalid_argument("timing_risk: alert limit must be positive");
  RiskResult out;
  out.tail_term = tail_probability(gamma, 2);
  const setcore::LevelStack stack(err_corr, gamma, levels, {opts.ellipse_directions});
  out.per_level.reserve(static_cast<std::size_t>(levels));
  for (int k = 1; k <= levels; ++k) {
    // Levels are nested, so once one misses both half-planes the rest do too.
    if (stack.max_first(k) < b.alert_limit && stack.min_first(k) > -b.alert_limit) {
      for (int j = k; j <= levels; ++j) out.per_level.push_back({stack.level_density(j), 0.0});
      break;
    }
    const auto lp = stack.polytope(k);
    const double area = halfplane_clip_area(lp.polytope, b);
    out.per_level.push_back({lp.level_density, area});
    out.slab_mass += area * (opts.literal_sum ? lp.level_density : lp.density_increment);
  }
  out.risk = out.tail_term + out.slab_mass;
  return out;
}

}  // namespace srdkf::risk
