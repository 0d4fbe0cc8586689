#pragma once

#include "srdkf/estimator.hpp"
#include "srdkf/setcore.hpp"

#include <cstddef>
#include <span>

/// Set-valued distributed Kalman filter: propagates the p-zonotopes of the
/// predicted and corrected estimation error next to the point estimate, and
/// weights each neighbor's measurement by its broadcast attack status.
namespace srdkf::setfilter {

using estimator::PointState;
using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using setcore::PZonotope;

struct SetState {
  PointState point;
  PZonotope err_pred = PZonotope::zero(2);
  PZonotope err_corr = PZonotope::zero(2);

  /// State p-zonotopes: the error sets translated by the point estimate.
  PZonotope predicted_state_set() const { return setcore::translate(point.mean, err_pred); }
  PZonotope corrected_state_set() const { return setcore::translate(point.mean, err_corr); }
};

/// What a receiver broadcasts each round.
struct MeasurementBundle {
  std::size_t receiver_id = 0;
  VectorXd z;  // interleaved [rho_1, phi_1, ..., rho_N, phi_N]
  MatrixXd H;
  MatrixXd R;
  double attack_status = 0.0;
  PZonotope noise_pz;  // measurement-noise bound, 2N-dimensional
};

/// Point time update plus err_pred = F err_corr (+) L_nu.
SetState sr_time_update(const SetState& s, const Matrix2d& f, const Matrix2d& q, const PZonotope& process_noise);

/// L_eps = L_omega (+) H err_pred.
PZonotope innovation_pzonotope(const SetState& s, const MatrixXd& h, const PZonotope& measurement_noise);

/// 1 - exp(-d^2 / 2), d the Mahalanobis distance of the innovation from the
/// center zonotope of L_eps under its covariance. Lies in [0, 1].
double attack_status(const PZonotope& innovation_set, const VectorXd& innovation);

/// (1 - alpha) P_bar H^T R^-1.
MatrixXd adaptive_gain(double attack_status, const MatrixXd& h, const Matrix2d& p_bar, const MatrixXd& r);

/// Fuses the neighborhood's bundles with attack-status-scaled gains. P_bar
/// comes from the information-form fusion; err_corr follows
/// (I - sum K H) err_pred (+) sum K L_omega with all-zero columns dropped.
SetState sr_measurement_update(const SetState& predicted, std::span<const MeasurementBundle> bundles);

}  // namespace srdkf::setfilter
