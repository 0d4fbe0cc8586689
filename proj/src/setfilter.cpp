#include "srdkf/setfilter.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace srdkf::setfilter {

namespace {

MatrixXd drop_zero_columns(const MatrixXd& g) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < g.cols(); ++i)
    if (!g.col(i).isZero(0.0)) keep.push_back(i);
  MatrixXd out(g.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = g.col(keep[k]);
  return out;
}

}  // namespace

SetState sr_time_update(const SetState& s, const Matrix2d& f, const Matrix2d& q, const PZonotope& process_noise) {
  if (process_noise.dim() != 2) throw setcore::DimensionError("sr_time_update: process noise must be 2D");
  SetState out;
  out.point = estimator::pv_time_update(s.point, f, q);
  out.err_pred = setcore::minkowski_sum(setcore::linear_map(f, s.err_corr), process_noise);
  out.err_corr = s.err_corr;
  return out;
}

PZonotope innovation_pzonotope(const SetState& s, const MatrixXd& h, const PZonotope& measurement_noise) {
  return setcore::minkowski_sum(measurement_noise, setcore::linear_map(h, s.err_pred));
}

double attack_status(const PZonotope& innovation_set, const VectorXd& innovation) {
  if (innovation.size() != innovation_set.dim())
    throw setcore::DimensionError("attack_status: innovation dimension mismatch");
  const auto res = setcore::mahalanobis_to_zonotope(innovation, innovation_set.center_zonotope(),
                                                    innovation_set.covariance());
  // Ratio of the sup-density at the innovation to the peak, so the
  // normalizing constants cancel.
  return std::clamp(-std::expm1(-0.5 * res.distance * res.distance), 0.0, 1.0);
}

MatrixXd adaptive_gain(double attack_status, const MatrixXd& h, const Matrix2d& p_bar, const MatrixXd& r) {
  if (attack_status < 0.0 || attack_status > 1.0) throw std::invalid_argument("adaptive_gain: attack status outside [0, 1]");
  return (1.0 - attack_status) * estimator::optimal_gain(p_bar, h, r);
}

SetState sr_measurement_update(const SetState& predicted, std::span<const MeasurementBundle> bundles) {
  if (bundles.empty()) throw std::invalid_argument("sr_measurement_update: no bundles");
  std::vector<estimator::Measurement> plain;
  plain.reserve(bundles.size());
  for (const auto& b : bundles) {
    if (b.attack_status < 0.0 || b.attack_status > 1.0)
      throw std::invalid_argument("bundle of receiver " + std::to_string(b.receiver_id + 1) +
                                  " carries an attack status outside [0, 1]");
    if (b.noise_pz.dim() != b.z.size())
      throw setcore::DimensionError("bundle noise p-zonotope dimension must match the measurement");
    plain.push_back({b.receiver_id, b.z, b.H, b.R});
  }

  SetState out;
  out.err_pred = predicted.err_pred;
  const Matrix2d p_bar = estimator::fused_covariance(predicted.point.covariance, plain);

  Matrix2d closed_loop = Matrix2d::Identity();
  out.point.mean = predicted.point.mean;
  out.point.covariance = p_bar;
  std::vector<PZonotope> terms;
  terms.reserve(bundles.size() + 1);
  terms.emplace_back();  // placeholder for the mapped err_pred
  for (const auto& b : bundles) {
    MatrixXd gain;
    try {
      gain = adaptive_gain(b.attack_status, b.H, p_bar, b.R);
    } catch (const estimator::SingularMeasurementError&) {
      throw estimator::SingularMeasurementError(b.receiver_id, "measurement covariance of receiver " +
                                                                   std::to_string(b.receiver_id + 1) + " is singular");
    }
    out.point.mean += gain * (b.z - b.H * predicted.point.mean);
    closed_loop -= gain * b.H;
    terms.push_back(setcore::linear_map(gain, b.noise_pz));
  }
  terms.front() = setcore::linear_map(closed_loop, predicted.err_pred);
  const PZonotope summed = setcore::minkowski_sum(terms);
  out.err_corr = setcore::with_generators(summed, drop_zero_columns(summed.center_generators()));
  return out;
}

}  // namespace srdkf::setfilter
