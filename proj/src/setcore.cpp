#include "srdkf/setcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace srdkf::setcore {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

MatrixXd symmetrized(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Cholesky of a metric, regularized by 1e-12 * trace * I when the factor
// fails or is numerically singular.
Eigen::LLT<MatrixXd> regularized_cholesky(const MatrixXd& metric) {
  Eigen::LLT<MatrixXd> llt(metric);
  if (llt.info() == Eigen::Success && llt.rcond() > 1e-15) return llt;
  const double trace = metric.trace();
  if (!(trace > 0.0)) throw std::domain_error("metric is singular and cannot be regularized");
  MatrixXd reg = metric;
  reg.diagonal().array() += 1e-12 * trace;
  llt.compute(reg);
  if (llt.info() != Eigen::Success) throw std::domain_error("metric is singular after regularization");
  return llt;
}

struct GeneratorGroups {
  MatrixXd merged;                 // one column per group
  std::vector<int> group_of;       // -1 for zero columns
  std::vector<double> sign;        // orientation relative to the group
};

GeneratorGroups group_parallel(const MatrixXd& g, double tol) {
  GeneratorGroups out;
  const auto e = g.cols();
  out.group_of.assign(e, -1);
  out.sign.assign(e, 0.0);
  std::vector<VectorXd> dirs;
  std::vector<VectorXd> sums;
  for (Eigen::Index i = 0; i < e; ++i) {
    const double norm = g.col(i).norm();
    if (norm == 0.0) continue;
    const VectorXd unit = g.col(i) / norm;
    int found = -1;
    double s = 1.0;
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const double dot = unit.dot(dirs[k]);
      if ((unit - dot * dirs[k]).norm() <= tol) {
        found = static_cast<int>(k);
        s = dot >= 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    if (found < 0) {
      found = static_cast<int>(dirs.size());
      dirs.push_back(unit);
      sums.push_back(VectorXd::Zero(g.rows()));
    }
    sums[found] += s * g.col(i);
    out.group_of[i] = found;
    out.sign[i] = s;
  }
  out.merged.resize(g.rows(), static_cast<Eigen::Index>(sums.size()));
  for (std::size_t k = 0; k < sums.size(); ++k) out.merged.col(static_cast<Eigen::Index>(k)) = sums[k];
  return out;
}

double objective(const VectorXd& r, const MatrixXd& g, const VectorXd& beta) {
  return (r - g * beta).squaredNorm();
}

// Frank-Wolfe gap of f = ||r - G b||^2 over the box: f(b) - f* <= sum |g_i| +
// g_i b_i with g the gradient. Certifies the objective even when the
// minimizer is not unique and the iterate keeps drifting along the optimal
// face. The bound is turned into one on the distance sqrt(f), which near
// zero needs a far smaller gap than the objective itself.
bool gap_certified(const VectorXd& r, const MatrixXd& g, const VectorXd& beta, double tol) {
  // From the residual rather than Q b - G^T r, which cancels near the optimum.
  const VectorXd res = r - g * beta;
  const VectorXd grad = -2.0 * (g.transpose() * res);
  const double gap = std::max(0.0, grad.cwiseAbs().sum() + grad.dot(beta));
  const double f = res.squaredNorm();
  const double d = std::sqrt(f);
  return d - std::sqrt(std::max(0.0, f - gap)) <= tol * std::max(1.0, d);
}

// Box-constrained least squares min ||r - G b||^2, b in [-1,1]^m, in an
// already whitened space. Cyclic coordinate descent with exact clamped 1D
// steps does most of the work; if it has not settled after a few dozen
// sweeps, a primal active-set phase finishes the job. That matters when many
// generators share a low-dimensional span and descent crawls.
DistanceResult solve_box_ls(const VectorXd& r, const MatrixXd& g, const BoxQpOptions& opts) {
  const auto m = g.cols();
  DistanceResult res;
  res.beta = VectorXd::Zero(m);
  if (m == 0) {
    res.distance = r.norm();
    return res;
  }
  const MatrixXd q = g.transpose() * g;
  const VectorXd b = g.transpose() * r;
  VectorXd beta = VectorXd::Zero(m);
  VectorXd qbeta = VectorXd::Zero(m);
  bool converged = false;
  int sweep = 0;
  const int descent_sweeps = std::min(opts.max_sweeps, 48);
  for (; sweep < descent_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double qii = q(i, i);
      if (qii <= 0.0) continue;
      const double rest = qbeta(i) - qii * beta(i);
      const double next = std::clamp((b(i) - rest) / qii, -1.0, 1.0);
      const double delta = next - beta(i);
      if (delta != 0.0) {
        qbeta += delta * q.col(i);
        beta(i) = next;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (gap_certified(r, g, beta, opts.tolerance)) {
      converged = true;
      break;
    }
    // Stalled without a certificate: leave it to the active-set phase.
    if (max_change < opts.tolerance) break;
  }

  // Active set: bound[i] is +1 / -1 when b_i is held at that bound, 0 if free.
  std::vector<int> bound(static_cast<std::size_t>(m), 0);
  for (Eigen::Index i = 0; i < m; ++i) bound[i] = beta(i) >= 1.0 ? 1 : beta(i) <= -1.0 ? -1 : 0;
  const double kkt_tol = 1e-12 * (b.cwiseAbs().maxCoeff() + q.diagonal().maxCoeff());
  std::vector<Eigen::Index> free;
  for (; !converged && sweep < opts.max_sweeps; ++sweep) {
    free.clear();
    for (Eigen::Index i = 0; i < m; ++i)
      if (bound[i] == 0) free.push_back(i);
    const auto f = static_cast<Eigen::Index>(free.size());
    bool full_step = true;
    if (f > 0) {
      // min || r - G_A b_A - G_F b_F ||, solved on the columns rather than
      // the normal equations. G_F is rank deficient when generators share a
      // span; the minimum-norm solution still minimizes over the face.
      MatrixXd gf(g.rows(), f);
      VectorXd fixed_beta = beta;
      for (Eigen::Index a = 0; a < f; ++a) {
        gf.col(a) = g.col(free[a]);
        fixed_beta(free[a]) = 0.0;
      }
      const VectorXd rhs = r - g * fixed_beta;
      const VectorXd target = gf.completeOrthogonalDecomposition().solve(rhs);
      if (!target.allFinite()) break;
      double step = 1.0;
      Eigen::Index blocking = -1;
      for (Eigen::Index a = 0; a < f; ++a) {
        const double d = target(a) - beta(free[a]);
        double limit = 1.0;
        if (beta(free[a]) + d > 1.0) limit = (1.0 - beta(free[a])) / d;
        if (beta(free[a]) + d < -1.0) limit = (-1.0 - beta(free[a])) / d;
        if (limit < step) {
          step = limit;
          blocking = a;
        }
      }
      step = std::max(step, 0.0);
      for (Eigen::Index a = 0; a < f; ++a)
        beta(free[a]) = std::clamp(beta(free[a]) + step * (target(a) - beta(free[a])), -1.0, 1.0);
      if (blocking >= 0) {
        full_step = false;
        const auto i = free[blocking];
        bound[i] = target(blocking) > beta(i) ? 1 : -1;
        beta(i) = bound[i];
      }
      qbeta = q * beta;
    }
    if (gap_certified(r, g, beta, opts.tolerance)) {
      converged = true;
      break;
    }
    if (!full_step) continue;
    // On the face minimizer: release the bound with the worst multiplier.
    const VectorXd grad = qbeta - b;
    Eigen::Index worst = -1;
    double worst_violation = kkt_tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double violation = bound[i] * grad(i);  // > 0 when the bound pulls inward
      if (bound[i] != 0 && violation > worst_violation) {
        worst_violation = violation;
        worst = i;
      }
    }
    if (worst < 0) {
      converged = true;
      break;
    }
    // Move the released coefficient inward right away; on a degenerate face
    // the next face solve can otherwise be blocked at zero length by it.
    bound[worst] = 0;
    const double next = std::clamp(beta(worst) - grad(worst) / q(worst, worst), -1.0, 1.0);
    qbeta += (next - beta(worst)) * q.col(worst);
    beta(worst) = next;
  }
  res.beta = beta;
  res.sweeps = sweep;
  res.distance = std::sqrt(std::max(0.0, objective(r, g, beta)));
  if (!converged) {
    throw ConvergenceError("box QP did not converge within " + std::to_string(opts.max_sweeps) + " sweeps",
                           res.beta, res.distance);
  }
  return res;
}

DistanceResult distance_with_factor(const Eigen::LLT<MatrixXd>& llt, const VectorXd& point,
                                    const Zonotope& z, const BoxQpOptions& opts) {
  const VectorXd r = llt.matrixL().solve(point - z.center);
  const auto e = z.order();
  if (e == 0) {
    DistanceResult res;
    res.distance = r.norm();
    res.beta = VectorXd::Zero(0);
    return res;
  }
  const MatrixXd gw = llt.matrixL().solve(z.generators);
  const GeneratorGroups groups = group_parallel(gw, 1e-12);
  DistanceResult merged;
  try {
    merged = solve_box_ls(r, groups.merged, opts);
  } catch (const ConvergenceError& err) {
    VectorXd beta(e);
    for (Eigen::Index i = 0; i < e; ++i)
      beta(i) = groups.group_of[i] < 0 ? 0.0 : groups.sign[i] * err.best_beta(groups.group_of[i]);
    throw ConvergenceError(err.what(), beta, err.best_distance);
  }
  DistanceResult res;
  res.distance = merged.distance;
  res.sweeps = merged.sweeps;
  res.beta.resize(e);
  for (Eigen::Index i = 0; i < e; ++i)
    res.beta(i) = groups.group_of[i] < 0 ? 0.0 : groups.sign[i] * merged.beta(groups.group_of[i]);
  return res;
}

}  // namespace

Zonotope::Zonotope(VectorXd c, MatrixXd g) : center(std::move(c)), generators(std::move(g)) {
  if (generators.size() == 0) generators.resize(center.size(), 0);
  require(generators.rows() == center.size(), "zonotope generator rows must match center dimension");
}

PZonotope::PZonotope(VectorXd center_mean, MatrixXd center_generators, MatrixXd covariance)
    : c_(std::move(center_mean)), g_(std::move(center_generators)), sigma_(std::move(covariance)) {
  const auto n = c_.size();
  if (g_.size() == 0) g_.resize(n, 0);
  require(g_.rows() == n, "p-zonotope generator rows must match center dimension");
  require(sigma_.rows() == n && sigma_.cols() == n, "p-zonotope covariance must be n x n");
  if (!c_.allFinite() || !g_.allFinite() || !sigma_.allFinite())
    throw std::invalid_argument("p-zonotope entries must be finite");
  sigma_ = symmetrized(sigma_);
  if (n == 0) return;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sigma_);
  const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
  const double lowest = eig.eigenvalues().minCoeff();
  if (lowest < -1e-12 * scale) throw std::invalid_argument("p-zonotope covariance is not positive semidefinite");
  if (lowest < 0.0) {
    const VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
    sigma_ = symmetrized(eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose());
  }
}

PZonotope PZonotope::zero(Eigen::Index n) {
  return PZonotope(Trusted{}, VectorXd::Zero(n), MatrixXd(n, 0), MatrixXd::Zero(n, n));
}

PZonotope PZonotope::gaussian(VectorXd mean, MatrixXd covariance) {
  const auto n = mean.size();
  return PZonotope(std::move(mean), MatrixXd(n, 0), std::move(covariance));
}

double Polytope2D::area() const {
  const auto n = vertices.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    twice += vertices[j].x() * vertices[i].y() - vertices[i].x() * vertices[j].y();
  return 0.5 * std::abs(twice);
}

PZonotope minkowski_sum(const PZonotope& a, const PZonotope& b) {
  require(a.dim() == b.dim(), "minkowski_sum: dimension mismatch");
  MatrixXd g(a.dim(), a.order() + b.order());
  g << a.g_, b.g_;
  return PZonotope(PZonotope::Trusted{}, a.c_ + b.c_, std::move(g), a.sigma_ + b.sigma_);
}

PZonotope minkowski_sum(std::span<const PZonotope> terms) {
  if (terms.empty()) throw std::invalid_argument("minkowski_sum: no operands");
  const auto n = terms.front().dim();
  Eigen::Index cols = 0;
  for (const auto& t : terms) {
    require(t.dim() == n, "minkowski_sum: dimension mismatch");
    cols += t.order();
  }
  VectorXd c = VectorXd::Zero(n);
  MatrixXd g(n, cols);
  MatrixXd sigma = MatrixXd::Zero(n, n);
  Eigen::Index at = 0;
  for (const auto& t : terms) {
    c += t.c_;
    g.middleCols(at, t.order()) = t.g_;
    at += t.order();
    sigma += t.sigma_;
  }
  return PZonotope(PZonotope::Trusted{}, std::move(c), std::move(g), std::move(sigma));
}

PZonotope linear_map(const MatrixXd& a, const PZonotope& l) {
  require(a.cols() == l.dim(), "linear_map: matrix columns must match p-zonotope dimension");
  return PZonotope(PZonotope::Trusted{}, a * l.c_, a * l.g_, symmetrized(a * l.sigma_ * a.transpose()));
}

PZonotope translate(const VectorXd& mu, const PZonotope& l) {
  require(mu.size() == l.dim(), "translate: dimension mismatch");
  return PZonotope(PZonotope::Trusted{}, mu + l.c_, l.g_, l.sigma_);
}

PZonotope with_generators(const PZonotope& l, MatrixXd generators) {
  require(generators.rows() == l.dim() || generators.size() == 0, "with_generators: row mismatch");
  if (generators.size() == 0) generators.resize(l.dim(), 0);
  return PZonotope(PZonotope::Trusted{}, l.c_, std::move(generators), l.sigma_);
}

PZonotope from_bounds(const VectorXd& mean_lo, const VectorXd& mean_hi, const VectorXd& cov_hi,
                      double inflation) {
  require(mean_lo.size() == mean_hi.size() && mean_lo.size() == cov_hi.size(),
          "from_bounds: bound vectors must have equal length");
  if ((mean_hi - mean_lo).minCoeff() < 0.0) throw std::invalid_argument("from_bounds: mean_lo > mean_hi");
  return from_halfwidths(0.5 * (mean_lo + mean_hi), 0.5 * (mean_hi - mean_lo), cov_hi, inflation);
}

PZonotope from_halfwidths(const VectorXd& center, const VectorXd& half_widths, const VectorXd& cov_hi,
                          double inflation) {
  require(center.size() == half_widths.size() && center.size() == cov_hi.size(),
          "from_halfwidths: vectors must have equal length");
  if (half_widths.size() > 0 && half_widths.minCoeff() < 0.0)
    throw std::invalid_argument("from_halfwidths: negative half-width");
  if (cov_hi.size() > 0 && cov_hi.minCoeff() < 0.0) throw std::invalid_argument("from_bounds: negative covariance bound");
  if (!(inflation > 0.0)) throw std::invalid_argument("from_bounds: inflation must be positive");
  return PZonotope(center, MatrixXd(half_widths.asDiagonal()), MatrixXd((inflation * cov_hi).asDiagonal()));
}

DistanceResult mahalanobis_to_zonotope(const VectorXd& point, const Zonotope& z, const MatrixXd& metric,
                                       const BoxQpOptions& opts) {
  require(point.size() == z.dim(), "mahalanobis_to_zonotope: point dimension mismatch");
  require(metric.rows() == z.dim() && metric.cols() == z.dim(), "mahalanobis_to_zonotope: metric must be n x n");
  return distance_with_factor(regularized_cholesky(symmetrized(metric)), point, z, opts);
}

double log_peak_density(const PZonotope& l) {
  const auto llt = regularized_cholesky(l.covariance());
  const MatrixXd lower = llt.matrixL();
  const double log_det = 2.0 * lower.diagonal().array().log().sum();
  return -0.5 * (static_cast<double>(l.dim()) * std::log(2.0 * std::numbers::pi) + log_det);
}

double log_sup_density(const PZonotope& l, const VectorXd& point) {
  require(point.size() == l.dim(), "sup_density: point dimension mismatch");
  const auto llt = regularized_cholesky(l.covariance());
  const MatrixXd lower = llt.matrixL();
  const double log_det = 2.0 * lower.diagonal().array().log().sum();
  const double log_peak = -0.5 * (static_cast<double>(l.dim()) * std::log(2.0 * std::numbers::pi) + log_det);
  const double d = distance_with_factor(llt, point, l.center_zonotope(), {}).distance;
  return log_peak - 0.5 * d * d;
}

double sup_density(const PZonotope& l, const VectorXd& point) { return std::exp(log_sup_density(l, point)); }

MatrixXd covariance_sqrt(const MatrixXd& sigma) {
  require(sigma.rows() == sigma.cols(), "covariance_sqrt: matrix must be square");
  const auto n = sigma.rows();
  if (n == 0) return MatrixXd(0, 0);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(symmetrized(sigma));
  MatrixXd s(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;  // descending
    VectorXd v = eig.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    s.col(k) = std::sqrt(std::max(eig.eigenvalues()(src), 0.0)) * v;
  }
  return s;
}

Zonotope gamma_confidence_zonotope(const PZonotope& l, double gamma) {
  const MatrixXd s = covariance_sqrt(l.covariance());
  MatrixXd g(l.dim(), l.order() + s.cols());
  g << l.center_generators(), gamma * s;
  return Zonotope(l.center_mean(), std::move(g));
}

namespace {

struct Direction {
  double angle;
  Eigen::Vector2d g;
};

// Canonical half-plane orientation (y > 0, or y == 0 and x > 0), sorted by
// angle with equal angles summed. Generators at or below rel_floor * max
// norm are dropped.
std::vector<Direction> canonical_directions(const MatrixXd& gens, double rel_floor) {
  double max_norm = 0.0;
  for (Eigen::Index i = 0; i < gens.cols(); ++i) max_norm = std::max(max_norm, gens.col(i).norm());
  std::vector<Direction> dirs;
  dirs.reserve(static_cast<std::size_t>(gens.cols()));
  for (Eigen::Index i = 0; i < gens.cols(); ++i) {
    Eigen::Vector2d g = gens.col(i);
    if (!(g.norm() > rel_floor * max_norm)) continue;
    if (g.y() < 0.0 || (g.y() == 0.0 && g.x() < 0.0)) g = -g;
    dirs.push_back({std::atan2(g.y(), g.x()), g});
  }
  std::sort(dirs.begin(), dirs.end(), [](const Direction& a, const Direction& b) { return a.angle < b.angle; });
  std::vector<Direction> merged;
  for (const auto& d : dirs) {
    if (!merged.empty() && d.angle - merged.back().angle <= 1e-13)
      merged.back().g += d.g;
    else
      merged.push_back(d);
  }
  // A direction just below pi is parallel to one at angle 0.
  if (merged.size() > 1 && std::numbers::pi - merged.back().angle <= 1e-13) {
    merged.front().g -= merged.back().g;
    merged.pop_back();
  }
  return merged;
}

// Walks the boundary counter-clockwise from the lowest vertex.
Polytope2D walk_boundary(const Eigen::Vector2d& c, const std::vector<Eigen::Vector2d>& sorted) {
  Polytope2D out;
  if (sorted.empty()) {
    out.vertices.push_back(c);
    return out;
  }
  Eigen::Vector2d p = c;
  for (const auto& g : sorted) p -= g;
  out.vertices.reserve(2 * sorted.size());
  out.vertices.push_back(p);
  for (const auto& g : sorted) {
    p += 2.0 * g;
    out.vertices.push_back(p);
  }
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    p -= 2.0 * sorted[i];
    out.vertices.push_back(p);
  }
  return out;
}

}  // namespace

Polytope2D zonotope_to_polytope2d(const Zonotope& z) {
  require(z.dim() == 2, "zonotope_to_polytope2d: zonotope must be 2D");
  const auto dirs = canonical_directions(z.generators, 1e-15);
  std::vector<Eigen::Vector2d> sorted;
  sorted.reserve(dirs.size());
  for (const auto& d : dirs) sorted.push_back(d.g);
  return walk_boundary(z.center, sorted);
}

MatrixXd circle_enclosure_generators(int directions) {
  if (directions < 2) throw std::invalid_argument("circle enclosure needs at least 2 directions");
  if (directions == 2) return MatrixXd::Identity(2, 2);
  const double half_side = std::tan(std::numbers::pi / (2.0 * directions));
  MatrixXd u(2, directions);
  for (int j = 0; j < directions; ++j) {
    const double theta = std::numbers::pi * j / directions;
    u(0, j) = half_side * std::cos(theta);
    u(1, j) = half_side * std::sin(theta);
  }
  return u;
}

LevelStack::LevelStack(const PZonotope& l, double gamma, int levels, const LevelOptions& opts)
    : gamma_(gamma), levels_(levels) {
  require(l.dim() == 2, "leveled polytopes need a 2D p-zonotope");
  if (levels < 1) throw std::invalid_argument("leveled polytopes: levels must be >= 1");
  if (!(gamma >= 0.0)) throw std::invalid_argument("leveled polytopes: gamma must be >= 0");
  center_ = l.center_mean();
  log_peak_ = log_peak_density(l);
  const MatrixXd ellipse = covariance_sqrt(l.covariance()) * circle_enclosure_generators(opts.ellipse_directions);
  for (const auto& d : canonical_directions(l.center_generators(), 1e-15))
    fixed_.push_back({d.angle, d.g});
  for (const auto& d : canonical_directions(ellipse, 1e-15)) ellipse_.push_back({d.angle, d.g});
  for (const auto& d : fixed_) fixed_extent_ += std::abs(d.g.x());
  for (const auto& d : ellipse_) ellipse_extent_ += std::abs(d.g.x());
}

double LevelStack::outer_radius(int k) const {
  return gamma_ * static_cast<double>(levels_ - k + 1) / levels_;
}

double LevelStack::level_density(int k) const {
  const double inner = gamma_ * static_cast<double>(levels_ - k) / levels_;
  return std::exp(log_peak_ - 0.5 * inner * inner);
}

double LevelStack::density_increment(int k) const {
  // The lowest slab rests on zero density so the stack covers the whole
  // truncated hull.
  return k == 1 ? level_density(1) : level_density(k) - level_density(k - 1);
}

double LevelStack::max_first(int k) const { return center_.x() + fixed_extent_ + outer_radius(k) * ellipse_extent_; }

double LevelStack::min_first(int k) const { return center_.x() - fixed_extent_ - outer_radius(k) * ellipse_extent_; }

LeveledPolytope LevelStack::polytope(int k) const {
  if (k < 1 || k > levels_) throw std::out_of_range("LevelStack::polytope: level out of range");
  const double r = outer_radius(k);
  std::vector<Eigen::Vector2d> sorted;
  sorted.reserve(fixed_.size() + ellipse_.size());
  std::size_t i = 0, j = 0;
  double last = -1.0;
  auto push = [&](double angle, const Eigen::Vector2d& g) {
    if (!sorted.empty() && angle - last <= 1e-13)
      sorted.back() += g;
    else
      sorted.push_back(g);
    last = angle;
  };
  while (i < fixed_.size() || j < ellipse_.size()) {
    if (j == ellipse_.size() || (i < fixed_.size() && fixed_[i].angle <= ellipse_[j].angle)) {
      push(fixed_[i].angle, fixed_[i].g);
      ++i;
    } else {
      if (r > 0.0) push(ellipse_[j].angle, r * ellipse_[j].g);
      ++j;
    }
  }
  LeveledPolytope out;
  out.polytope = walk_boundary(center_, sorted);
  out.level_density = level_density(k);
  out.density_increment = density_increment(k);
  return out;
}

std::vector<LeveledPolytope> overapprox_leveled_polytopes(const PZonotope& l, double gamma, int levels,
                                                          const LevelOptions& opts) {
  const LevelStack stack(l, gamma, levels, opts);
  std::vector<LeveledPolytope> out;
  out.reserve(static_cast<std::size_t>(levels));
  for (int k = 1; k <= levels; ++k) out.push_back(stack.polytope(k));
  return out;
}

PZonotope reduce_generators(const PZonotope& l, const ReduceOptions& opts) {
  const auto n = l.dim();
  const MatrixXd& g = l.center_generators();
  if (g.cols() == 0) return l;
  MatrixXd merged = group_parallel(g, opts.parallel_tolerance).merged;

  const VectorXd norms = merged.colwise().norm();
  const double total = norms.sum();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < merged.cols(); ++i)
    if (norms(i) > opts.negligible_tolerance * total) keep.push_back(i);

  if (opts.max_generators > 0 && static_cast<Eigen::Index>(keep.size()) > opts.max_generators) {
    if (opts.max_generators <= n) throw std::invalid_argument("reduce_generators: max_generators must exceed dimension");
    // Girard: the generators closest to axis-aligned cost least to box.
    std::vector<double> score(static_cast<std::size_t>(merged.cols()));
    for (auto i : keep) score[i] = merged.col(i).lpNorm<1>() - merged.col(i).lpNorm<Eigen::Infinity>();
    std::stable_sort(keep.begin(), keep.end(), [&](auto a, auto b) { return score[a] > score[b]; });
    const auto retained = static_cast<std::size_t>(opts.max_generators - n);
    VectorXd box = VectorXd::Zero(n);
    for (std::size_t k = retained; k < keep.size(); ++k) box += merged.col(keep[k]).cwiseAbs();
    keep.resize(retained);
    std::sort(keep.begin(), keep.end());
    MatrixXd out(n, static_cast<Eigen::Index>(retained) + n);
    for (std::size_t k = 0; k < retained; ++k) out.col(static_cast<Eigen::Index>(k)) = merged.col(keep[k]);
    out.rightCols(n) = box.asDiagonal();
    return with_generators(l, std::move(out));
  }
  MatrixXd out(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = merged.col(keep[k]);
  return with_generators(l, std::move(out));
}

bool contains(const Zonotope& z, const VectorXd& point, double tolerance) {
  const double scale = 1.0 + z.center.cwiseAbs().maxCoeff() + z.generators.cwiseAbs().sum();
  const auto res = mahalanobis_to_zonotope(point, z, MatrixXd::Identity(z.dim(), z.dim()));
  return res.distance <= tolerance * scale;
}

}  // namespace srdkf::setcore
