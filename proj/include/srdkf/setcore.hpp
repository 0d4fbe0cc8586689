#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

/// Zonotope, probabilistic zonotope and 2D polytope algebra.
///
/// All operations are pure functions on values. Units are whatever the
/// caller uses; the rest of the library works in SI base units.
namespace srdkf::setcore {

using Eigen::MatrixXd;
using Eigen::VectorXd;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by the box-QP when the iteration cap is hit. Carries the best
/// iterate so callers may still use it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, VectorXd best_beta, double best_distance)
      : std::runtime_error(what), best_beta(std::move(best_beta)), best_distance(best_distance) {}
  VectorXd best_beta;
  double best_distance;
};

/// <c, G> = { c + G b : b in [-1,1]^e }. An empty G is the singleton {c}.
struct Zonotope {
  VectorXd center;
  MatrixXd generators;

  Zonotope() = default;
  Zonotope(VectorXd c, MatrixXd g);
  explicit Zonotope(VectorXd c) : Zonotope(c, MatrixXd(c.size(), 0)) {}

  Eigen::Index dim() const { return center.size(); }
  Eigen::Index order() const { return generators.cols(); }
};

/// Probabilistic zonotope (c, G, Sigma): the supremum of Gaussian densities
/// with covariance Sigma whose means range over <c, G>.
class PZonotope {
 public:
  PZonotope() = default;
  /// Validates shapes and symmetrizes Sigma. Eigenvalues below
  /// -1e-12 * ||Sigma|| are rejected; small negative ones are clamped.
  PZonotope(VectorXd center_mean, MatrixXd center_generators, MatrixXd covariance);

  /// Zero-centered, generator-free, zero-covariance element of dimension n.
  static PZonotope zero(Eigen::Index n);
  static PZonotope gaussian(VectorXd mean, MatrixXd covariance);

  const VectorXd& center_mean() const { return c_; }
  const MatrixXd& center_generators() const { return g_; }
  const MatrixXd& covariance() const { return sigma_; }
  Eigen::Index dim() const { return c_.size(); }
  Eigen::Index order() const { return g_.cols(); }

  Zonotope center_zonotope() const { return Zonotope(c_, g_); }

 private:
  // Assembles without re-validating; used where the result is PSD by
  // construction and the eigen check would dominate the cost.
  struct Trusted {};
  PZonotope(Trusted, VectorXd c, MatrixXd g, MatrixXd sigma)
      : c_(std::move(c)), g_(std::move(g)), sigma_(std::move(sigma)) {}

  friend PZonotope minkowski_sum(const PZonotope&, const PZonotope&);
  friend PZonotope minkowski_sum(std::span<const PZonotope>);
  friend PZonotope linear_map(const MatrixXd&, const PZonotope&);
  friend PZonotope translate(const VectorXd&, const PZonotope&);
  friend PZonotope with_generators(const PZonotope&, MatrixXd);

  VectorXd c_;
  MatrixXd g_;
  MatrixXd sigma_;
};

/// Convex polygon, counter-clockwise. Degenerate zonotopes produce a
/// 2-vertex segment or a single point, both with zero area.
struct Polytope2D {
  std::vector<Eigen::Vector2d> vertices;

  double area() const;
  bool empty() const { return vertices.empty(); }
};

/// One slab of the stacked over-approximation of a 2D p-zonotope.
struct LeveledPolytope {
  Polytope2D polytope;
  double level_density = 0.0;      // density at the slab's top face
  double density_increment = 0.0;  // slab thickness
};

struct DistanceResult {
  double distance = 0.0;
  VectorXd beta;
  int sweeps = 0;
};

struct BoxQpOptions {
  double tolerance = 1e-9;
  int max_sweeps = 10000;
};

PZonotope minkowski_sum(const PZonotope& a, const PZonotope& b);
PZonotope minkowski_sum(std::span<const PZonotope> terms);
PZonotope linear_map(const MatrixXd& a, const PZonotope& l);
PZonotope translate(const VectorXd& mu, const PZonotope& l);

/// Same center and covariance, new generator matrix. Used by the reducers.
PZonotope with_generators(const PZonotope& l, MatrixXd generators);

/// Center at the midpoint of [mean_lo, mean_hi], generators diag of the
/// half-widths, covariance inflation * diag(cov_hi).
PZonotope from_bounds(const VectorXd& mean_lo, const VectorXd& mean_hi, const VectorXd& cov_hi,
                      double inflation);

/// Like from_bounds but with the generator half-widths given explicitly.
PZonotope from_halfwidths(const VectorXd& center, const VectorXd& half_widths,
                          const VectorXd& cov_hi, double inflation);

/// min over b in [-1,1]^e of sqrt((x - c - G b)^T M^-1 (x - c - G b)).
///
/// Cyclic coordinate descent with exact clamped 1D minimization in the
/// whitened space. Exactly parallel generators are merged before solving
/// and the merged coefficient is mapped back onto the originals.
DistanceResult mahalanobis_to_zonotope(const VectorXd& point, const Zonotope& z,
                                       const MatrixXd& metric, const BoxQpOptions& opts = {});

/// log of sup over m in <c, G> of N(point; m, Sigma).
double log_sup_density(const PZonotope& l, const VectorXd& point);
double sup_density(const PZonotope& l, const VectorXd& point);
/// ((2 pi)^n det Sigma)^(-1/2), in the log domain.
double log_peak_density(const PZonotope& l);

/// Columns sqrt(lambda_i) v_i for eigenvalues in descending order, negative
/// eigenvalues clamped to zero, each column's largest-magnitude entry
/// made positive.
MatrixXd covariance_sqrt(const MatrixXd& sigma);

/// <c, [G, gamma * S]> with S = covariance_sqrt(Sigma).
Zonotope gamma_confidence_zonotope(const PZonotope& l, double gamma);

/// Exact vertex enumeration of a 2D zonotope.
Polytope2D zonotope_to_polytope2d(const Zonotope& z);

struct LevelOptions {
  /// Generators used to enclose each Gaussian ellipse: 2 gives the
  /// principal-axis box, larger counts give a circumscribed 2m-gon.
  int ellipse_directions = 16;
};

/// Lazily built stack of leveled polytopes; level k (1-based) encloses the
/// zonotope <c, [G, r_{k-1} E]> where E encloses the unit-Mahalanobis
/// ellipse and r_k = gamma (levels - k) / levels.
class LevelStack {
 public:
  LevelStack(const PZonotope& l, double gamma, int levels, const LevelOptions& opts = {});

  int levels() const { return levels_; }
  double outer_radius(int k) const;
  double level_density(int k) const;
  double density_increment(int k) const;
  /// Largest value of the first coordinate over level k's polytope.
  double max_first(int k) const;
  /// Smallest value of the first coordinate over level k's polytope.
  double min_first(int k) const;
  LeveledPolytope polytope(int k) const;

 private:
  struct Direction {
    double angle;
    Eigen::Vector2d g;
  };
  Eigen::Vector2d center_;
  std::vector<Direction> fixed_;    // center generators
  std::vector<Direction> ellipse_;  // unit-radius ellipse enclosure
  double fixed_extent_ = 0.0;
  double ellipse_extent_ = 0.0;
  double gamma_;
  int levels_;
  double log_peak_;
};

/// Stacked polytopes over-approximating the gamma-truncated density of a
/// 2D p-zonotope. Radii are uniform in gamma; ordered by increasing density.
std::vector<LeveledPolytope> overapprox_leveled_polytopes(const PZonotope& l, double gamma,
                                                          int levels,
                                                          const LevelOptions& opts = {});

/// Generators whose Minkowski sum circumscribes the unit circle with
/// `directions` equally spaced directions (2 gives the identity).
MatrixXd circle_enclosure_generators(int directions);

struct ReduceOptions {
  double parallel_tolerance = 1e-12;  // relative, on |sin| of the angle
  double negligible_tolerance = 1e-15;  // relative to the summed generator norm
  int max_generators = 0;  // 0 disables the box reduction step
};

/// Sum exactly parallel generators, drop numerically negligible ones and,
/// when max_generators > 0, box the smallest generators into their interval
/// hull until the count fits. Every step returns a superset of the input.
PZonotope reduce_generators(const PZonotope& l, const ReduceOptions& opts = {});

/// Point membership in a zonotope (distance under the identity metric).
bool contains(const Zonotope& z, const VectorXd& point, double tolerance = 1e-9);

}  // namespace srdkf::setcore
