#include "srdkf/estimator.hpp"

#include <vector>

namespace srdkf::estimator {

namespace {

Eigen::LLT<MatrixXd> factor_r(const MatrixXd& r, std::size_t receiver) {
  Eigen::LLT<MatrixXd> llt(r);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-300))
    throw SingularMeasurementError(receiver, "measurement covariance of receiver " + std::to_string(receiver + 1) +
                                                 " is singular");
  return llt;
}

void check_shapes(const Measurement& m) {
  if (m.H.cols() != 2 || m.H.rows() != m.z.size() || m.R.rows() != m.z.size() || m.R.cols() != m.z.size())
    throw std::invalid_argument("measurement of receiver " + std::to_string(m.receiver + 1) +
                                " has inconsistent dimensions");
}

Matrix2d symmetrized(const Matrix2d& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

bool is_valid(const PointState& s) {
  if (!s.mean.allFinite() || !s.covariance.allFinite()) return false;
  if ((s.covariance - s.covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * s.covariance.cwiseAbs().maxCoeff())
    return false;
  const Matrix2d jittered = s.covariance + 1e-18 * Matrix2d::Identity();
  return Eigen::LLT<Matrix2d>(jittered).info() == Eigen::Success;
}

Matrix2d transition(double dt_s) {
  Matrix2d f;
  f << 1.0, dt_s, 0.0, 1.0;
  return f;
}

PointState pv_time_update(const PointState& s, const Matrix2d& f, const Matrix2d& q) {
  return {f * s.mean, symmetrized(f * s.covariance * f.transpose() + q)};
}

MatrixXd adaptive_R(const MatrixXd& prev_r, double psi, const VectorXd& innovation, const MatrixXd& h,
                    const Matrix2d& p_hat, const MatrixXd& floor) {
  if (prev_r.rows() != innovation.size() || h.rows() != innovation.size() || h.cols() != 2)
    throw std::invalid_argument("adaptive_R: inconsistent dimensions");
  if (psi < 0.0 || psi > 1.0) throw std::invalid_argument("adaptive_R: forgetting factor must lie in [0, 1]");
  MatrixXd target = innovation * innovation.transpose() + h * p_hat * h.transpose();
  if (floor.size() != 0) {
    if (floor.rows() != target.rows() || floor.cols() != target.cols())
      throw std::invalid_argument("adaptive_R: floor has the wrong shape");
    target += floor;
  }
  MatrixXd r = psi * prev_r + (1.0 - psi) * target;
  return 0.5 * (r + r.transpose());
}

Matrix2d fused_covariance(const Matrix2d& p_hat, std::span<const Measurement> bundles) {
  Matrix2d info = p_hat.inverse();
  for (const auto& m : bundles) {
    check_shapes(m);
    const auto llt = factor_r(m.R, m.receiver);
    info += m.H.transpose() * llt.solve(m.H);
  }
  return symmetrized(info.inverse());
}

MatrixXd optimal_gain(const Matrix2d& p_bar, const MatrixXd& h, const MatrixXd& r, std::size_t receiver) {
  const auto llt = factor_r(r, receiver);
  // P H^T R^-1 = (R^-1 H P)^T since R and P are symmetric.
  return (llt.solve(h * p_bar)).transpose();
}

PointState pv_measurement_update(const PointState& predicted, std::span<const Measurement> bundles,
                                 FusionMode mode) {
  if (bundles.empty()) throw std::invalid_argument("pv_measurement_update: no measurements");
  if (mode == FusionMode::sequential) {
    PointState s = predicted;
    for (const auto& m : bundles) {
      check_shapes(m);
      const MatrixXd innov_cov = m.H * s.covariance * m.H.transpose() + m.R;
      Eigen::LLT<MatrixXd> llt(innov_cov);
      if (llt.info() != Eigen::Success)
        throw SingularMeasurementError(m.receiver, "innovation covariance of receiver " +
                                                       std::to_string(m.receiver + 1) + " is singular");
      const MatrixXd k = llt.solve(m.H * s.covariance).transpose();
      s.mean += k * (m.z - m.H * s.mean);
      const Matrix2d a = Matrix2d::Identity() - k * m.H;
      s.covariance = symmetrized(a * s.covariance * a.transpose() + k * m.R * k.transpose());
    }
    return s;
  }
  PointState out;
  out.covariance = fused_covariance(predicted.covariance, bundles);
  out.mean = predicted.mean;
  for (const auto& m : bundles)
    out.mean += optimal_gain(out.covariance, m.H, m.R, m.receiver) * (m.z - m.H * predicted.mean);
  return out;
}

AdaptiveKfStep single_adaptive_kf_step(const PointState& corrected, const Matrix2d& f, const Matrix2d& q,
                                       const VectorXd& z, const MatrixXd& h, const MatrixXd& prev_r, double psi,
                                       const MatrixXd& floor, AdaptiveResidual residual, std::size_t receiver) {
  const PointState predicted = pv_time_update(corrected, f, q);
  if (residual == AdaptiveResidual::prefit) {
    MatrixXd r = adaptive_R(prev_r, psi, z - h * predicted.mean, h, predicted.covariance, floor);
    const Measurement own{receiver, z, h, r};
    return {pv_measurement_update(predicted, std::span<const Measurement>(&own, 1)), std::move(r)};
  }
  const Measurement own{receiver, z, h, prev_r};
  PointState updated = pv_measurement_update(predicted, std::span<const Measurement>(&own, 1));
  MatrixXd r = adaptive_R(prev_r, psi, z - h * updated.mean, h, updated.covariance, floor);
  return {std::move(updated), std::move(r)};
}

}  // namespace srdkf::estimator
