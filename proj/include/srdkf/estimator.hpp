#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

/// Point-valued baselines: the adaptive distributed Kalman filter over a
/// neighborhood and the single-receiver adaptive Kalman filter.
namespace srdkf::estimator {

using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

/// Clock state [T (s), Tdot (s/s)] with its covariance.
struct PointState {
  Vector2d mean = Vector2d::Zero();
  Matrix2d covariance = Matrix2d::Identity();
};

/// True when the covariance is symmetric and factors after a 1e-18 jitter.
bool is_valid(const PointState& s);

struct NoiseDescriptor {
  MatrixXd R;
  Matrix2d Q = Matrix2d::Zero();
  double psi = 0.3;
};

/// One neighbor's contribution to a measurement update.
struct Measurement {
  std::size_t receiver = 0;
  VectorXd z;
  MatrixXd H;
  MatrixXd R;
};

class SingularMeasurementError : public std::runtime_error {
 public:
  SingularMeasurementError(std::size_t receiver, const std::string& what)
      : std::runtime_error(what), receiver(receiver) {}
  std::size_t receiver;
};

/// Which residual drives the adaptive R. The pre-fit form uses the
/// innovation z - H x_hat with the predicted covariance; the post-fit form
/// uses z - H x_bar with the corrected covariance and feeds the next step.
enum class AdaptiveResidual { prefit, postfit };

enum class FusionMode {
  batch,       // one information-form fusion over the whole neighborhood
  sequential,  // covariance-form updates applied one neighbor at a time
};

/// F = [[1, dt], [0, 1]].
Matrix2d transition(double dt_s);

PointState pv_time_update(const PointState& s, const Matrix2d& f, const Matrix2d& q);

/// psi * R_prev + (1 - psi) * (eps eps^T + H P_hat H^T + floor), symmetrized.
/// An empty floor is zero. The floor keeps R invertible once the initial
/// diagonal has decayed and the rank-one terms dominate.
MatrixXd adaptive_R(const MatrixXd& prev_r, double psi, const VectorXd& innovation, const MatrixXd& h,
                    const Matrix2d& p_hat, const MatrixXd& floor = {});

/// Posterior covariance from the information sum P_hat^-1 + sum H^T R^-1 H.
Matrix2d fused_covariance(const Matrix2d& p_hat, std::span<const Measurement> bundles);

/// K = P_bar H^T R^-1.
MatrixXd optimal_gain(const Matrix2d& p_bar, const MatrixXd& h, const MatrixXd& r, std::size_t receiver = 0);

PointState pv_measurement_update(const PointState& predicted, std::span<const Measurement> bundles,
                                 FusionMode mode = FusionMode::batch);

struct AdaptiveKfStep {
  PointState state;
  MatrixXd R;
};

/// Time update and a measurement update with the receiver's own measurement
/// only. R adapts from the innovation before the update (pre-fit) or from
/// the residual after it (post-fit, used from the next step on).
AdaptiveKfStep single_adaptive_kf_step(const PointState& corrected, const Matrix2d& f, const Matrix2d& q,
                                       const VectorXd& z, const MatrixXd& h, const MatrixXd& prev_r, double psi,
                                       const MatrixXd& floor, AdaptiveResidual residual,
                                       std::size_t receiver = 0);

}  // namespace srdkf::estimator
