#include "oracles.hpp"
#include "srdkf/setfilter.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace srdkf;
using namespace srdkf::setfilter;
using Eigen::Vector2d;

namespace {

PZonotope centered(const MatrixXd& g, const MatrixXd& sigma) {
  return PZonotope(VectorXd::Zero(g.rows()), g, sigma);
}

SetState random_predicted(std::mt19937_64& rng) {
  SetState s;
  s.point.mean = oracle::random_matrix(2, 1, rng);
  s.point.covariance = oracle::random_spd(2, rng);
  s.err_pred = centered(oracle::random_matrix(2, 3, rng), oracle::random_spd(2, rng));
  s.err_corr = s.err_pred;
  return s;
}

MeasurementBundle random_bundle(std::size_t id, int n_sat, double alpha, std::mt19937_64& rng) {
  MeasurementBundle b;
  b.receiver_id = id;
  b.z = oracle::random_matrix(2 * n_sat, 1, rng);
  b.H = MatrixXd::Ones(2 * n_sat, 2);
  b.R = oracle::random_spd(2 * n_sat, rng);
  b.attack_status = alpha;
  b.noise_pz = centered(oracle::random_matrix(2 * n_sat, 2 * n_sat, rng).cwiseAbs(), b.R);
  return b;
}

}  // namespace

TEST_SUITE("setfilter") {

TEST_CASE("time update") {
  std::mt19937_64 rng(1);
  SetState s = random_predicted(rng);
  const auto same = sr_time_update(s, Matrix2d::Identity(), Matrix2d::Zero(), PZonotope::zero(2));
  CHECK(same.err_pred.center_generators() == s.err_corr.center_generators());
  CHECK(same.err_pred.covariance() == s.err_corr.covariance());

  // One step from the worked example with the transition matrix and a
  // process-noise set, against the direct formula.
  s.err_corr = PZonotope(Vector2d::Zero(), Vector2d(2e-6, 3e-9).asDiagonal().toDenseMatrix(),
                         Vector2d(6e-12, 9e-18).asDiagonal().toDenseMatrix());
  const Matrix2d f = estimator::transition(1.0);
  const PZonotope nu = setcore::from_halfwidths(Vector2d::Zero(), Vector2d(4e-6, 6e-9), Vector2d(4e-12, 6e-18), 3.0);
  const auto next = sr_time_update(s, f, Matrix2d::Zero(), nu);
  MatrixXd g(2, 4);
  g << oracle::matmul(f, s.err_corr.center_generators()), nu.center_generators();
  const MatrixXd sigma = oracle::matmul(oracle::matmul(f, s.err_corr.covariance()), oracle::transpose(f)) + nu.covariance();
  CHECK(oracle::close(next.err_pred.center_generators(), g, 1e-15));
  CHECK(oracle::close(next.err_pred.covariance(), sigma, 1e-15));
  CHECK(next.err_pred.order() == s.err_corr.order() + nu.order());
  CHECK(next.point.mean == f * s.point.mean);
  CHECK_THROWS(sr_time_update(s, f, Matrix2d::Zero(), PZonotope::zero(3)));
}

TEST_CASE("innovation p-zonotope") {
  SetState s;
  s.err_pred = centered(Matrix2d::Identity(), Matrix2d::Identity());
  const PZonotope omega = centered(MatrixXd::Identity(2, 2) * 0.5, Matrix2d::Identity());
  const auto eps = innovation_pzonotope(s, MatrixXd::Ones(2, 2), omega);
  Matrix2d want;
  want << 3, 2, 2, 3;
  CHECK(eps.covariance() == want);
  CHECK(eps.order() == 4);

  const auto none = innovation_pzonotope(s, MatrixXd::Zero(2, 2), omega);
  CHECK(none.covariance() == omega.covariance());
  CHECK(none.center_generators().leftCols(2) == omega.center_generators());
  CHECK(none.center_generators().rightCols(2).isZero(0.0));
}

TEST_CASE("attack status") {
  const PZonotope one(VectorXd::Zero(1), MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1));
  VectorXd x(1);
  x << 3.0;
  CHECK(attack_status(one, x) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
  CHECK(attack_status(one, x) == doctest::Approx(0.8647).epsilon(1e-4));
  // Grid oracle over the mean interval.
  double best = 0.0;
  for (int i = 0; i <= 2000; ++i) best = std::max(best, std::exp(-0.5 * std::pow(3.0 - (-1.0 + i * 1e-3), 2)));
  CHECK(attack_status(one, x) == doctest::Approx(1.0 - best).epsilon(1e-9));
  x << 0.0;
  CHECK(attack_status(one, x) == 0.0);
  x << -0.7;
  CHECK(attack_status(one, x) == 0.0);
  x << 1e6;
  CHECK(attack_status(one, x) == 1.0);
  CHECK_THROWS(attack_status(one, VectorXd::Zero(2)));
}

TEST_CASE("attack status is invariant under linear reparameterization") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const PZonotope l(oracle::random_matrix(2, 1, rng), oracle::random_matrix(2, t % 4, rng), oracle::random_spd(2, rng));
    const VectorXd eps = oracle::random_matrix(2, 1, rng, 3.0);
    MatrixXd a = oracle::random_matrix(2, 2, rng);
    if (std::abs(a.determinant()) < 0.1) a += Matrix2d::Identity();
    const double base = attack_status(l, eps);
    const double mapped = attack_status(setcore::linear_map(a, l), a * eps);
    CHECK(mapped == doctest::Approx(base).epsilon(1e-7));
    CHECK(base >= 0.0);
    CHECK(base <= 1.0);
  }
}

TEST_CASE("adaptive gain") {
  std::mt19937_64 rng(8);
  const Matrix2d p = oracle::random_spd(2, rng);
  const MatrixXd h = MatrixXd::Ones(4, 2), r = oracle::random_spd(4, rng);
  const MatrixXd k = estimator::optimal_gain(p, h, r);
  CHECK(adaptive_gain(1.0, h, p, r).isZero(0.0));
  CHECK(adaptive_gain(0.0, h, p, r) == k);
  CHECK(adaptive_gain(0.5, h, p, r) == 0.5 * k);
  CHECK(adaptive_gain(0.0, h, p, r).rows() == 2);
  CHECK(adaptive_gain(0.0, h, p, r).cols() == 4);
  CHECK_THROWS(adaptive_gain(1.2, h, p, r));
  CHECK_THROWS(adaptive_gain(0.0, h, p, MatrixXd::Zero(4, 4)));
}

TEST_CASE("fully rejected round keeps the prediction") {
  std::mt19937_64 rng(2);
  const auto s = random_predicted(rng);
  std::vector<MeasurementBundle> bundles{random_bundle(0, 2, 1.0, rng), random_bundle(3, 2, 1.0, rng)};
  const auto out = sr_measurement_update(s, bundles);
  CHECK(out.point.mean == s.point.mean);
  CHECK(out.err_corr.center_generators() == s.err_pred.center_generators());
  CHECK(out.err_corr.covariance() == s.err_pred.covariance());
}

TEST_CASE("single accepted bundle against the direct formula") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const auto s = random_predicted(rng);
    const auto b = random_bundle(0, 1 + t % 3, 0.0, rng);
    const auto out = sr_measurement_update(s, std::span<const MeasurementBundle>(&b, 1));
    const MatrixXd info = s.point.covariance.inverse() + b.H.transpose() * b.R.inverse() * b.H;
    const MatrixXd p_bar = info.inverse();
    const MatrixXd k = oracle::matmul(oracle::matmul(p_bar, oracle::transpose(b.H)), b.R.inverse());
    const MatrixXd a = MatrixXd::Identity(2, 2) - oracle::matmul(k, b.H);
    MatrixXd g(2, s.err_pred.order() + b.noise_pz.order());
    g << oracle::matmul(a, s.err_pred.center_generators()), oracle::matmul(k, b.noise_pz.center_generators());
    const MatrixXd sigma = oracle::matmul(oracle::matmul(a, s.err_pred.covariance()), oracle::transpose(a)) +
                           oracle::matmul(oracle::matmul(k, b.noise_pz.covariance()), oracle::transpose(k));
    CHECK(oracle::close(out.err_corr.center_generators(), g, 1e-9));
    CHECK(oracle::close(out.err_corr.covariance(), sigma, 1e-9));
    CHECK(oracle::close(out.point.mean, s.point.mean + k * (b.z - b.H * s.point.mean), 1e-9));
    CHECK(oracle::close(out.point.covariance, p_bar, 1e-9));
  }
}

TEST_CASE("generator count after the update") {
  std::mt19937_64 rng(4);
  const auto s = random_predicted(rng);
  std::vector<MeasurementBundle> bundles{random_bundle(0, 2, 0.2, rng), random_bundle(1, 3, 0.0, rng),
                                         random_bundle(2, 1, 1.0, rng)};
  const auto out = sr_measurement_update(s, bundles);
  // The rejected bundle's columns are exactly zero and dropped.
  CHECK(out.err_corr.order() == s.err_pred.order() + 4 + 6);
}

TEST_CASE("rejecting less never widens the corrected covariance") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    SetState s = random_predicted(rng);
    // Consistent noise descriptions: the optimal gain then minimizes the
    // corrected covariance and the trace falls as alpha goes to zero.
    s.err_pred = centered(s.err_pred.center_generators(), s.point.covariance);
    std::vector<MeasurementBundle> bundles{random_bundle(0, 2, 0.0, rng), random_bundle(1, 2, 0.0, rng)};
    for (auto& b : bundles) b.noise_pz = centered(b.noise_pz.center_generators(), b.R);
    double prev = -1.0;
    for (double alpha = 1.0; alpha >= -1e-12; alpha -= 0.125) {
      bundles[t % 2].attack_status = std::max(alpha, 0.0);
      const double tr = sr_measurement_update(s, bundles).err_corr.covariance().trace();
      if (prev >= 0.0) CHECK(tr <= prev * (1.0 + 1e-12));
      prev = tr;
    }
  }
}

TEST_CASE("pure Gaussian sets follow the point covariance") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 100; ++t) {
    SetState s;
    s.point.covariance = oracle::random_spd(2, rng);
    s.err_pred = PZonotope::gaussian(Vector2d::Zero(), s.point.covariance);
    std::vector<MeasurementBundle> bundles;
    for (int j = 0; j < 1 + t % 4; ++j) {
      auto b = random_bundle(j, 2, 0.0, rng);
      b.noise_pz = PZonotope::gaussian(VectorXd::Zero(4), b.R);
      bundles.push_back(b);
    }
    const auto out = sr_measurement_update(s, bundles);
    CHECK(out.err_corr.order() == 0);
    CHECK(oracle::close(out.err_corr.covariance(), out.point.covariance, 1e-9));
    CHECK(out.err_corr.center_mean().isZero(0.0));
  }
}

TEST_CASE("error sets stay centered") {
  std::mt19937_64 rng(12);
  SetState s = random_predicted(rng);
  std::vector<MeasurementBundle> bundles{random_bundle(0, 2, 0.3, rng), random_bundle(1, 2, 0.9, rng)};
  const auto out = sr_measurement_update(s, bundles);
  CHECK(out.err_corr.center_mean().isZero(0.0));
  CHECK(out.corrected_state_set().center_mean() == out.point.mean);
  CHECK(out.corrected_state_set().covariance() == out.err_corr.covariance());
}

TEST_CASE("invalid bundles") {
  std::mt19937_64 rng(13);
  const auto s = random_predicted(rng);
  CHECK_THROWS(sr_measurement_update(s, std::span<const MeasurementBundle>()));
  auto b = random_bundle(0, 2, 1.5, rng);
  CHECK_THROWS(sr_measurement_update(s, std::span<const MeasurementBundle>(&b, 1)));
  b.attack_status = 0.0;
  b.noise_pz = PZonotope::zero(2);
  CHECK_THROWS(sr_measurement_update(s, std::span<const MeasurementBundle>(&b, 1)));
}

}  // TEST_SUITE
