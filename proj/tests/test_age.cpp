#include <gtest/gtest.h>

#include <cmath>

#include "aou/age.hpp"
#include "aou/random.hpp"

using namespace aou;

namespace {

TEST(StepDeviceAge, Examples) {
  EXPECT_EQ(step_device_age(5, true), 0.0);
  EXPECT_EQ(step_device_age(5, false), 6.0);
  EXPECT_EQ(step_device_age(0, false), 1.0);
}

TEST(StepDeviceAge, OutputIsResetOrIncrement) {
  for (double T = 0; T < 20; ++T)
    for (bool a : {false, true}) {
      const double n = step_device_age(T, a);
      EXPECT_TRUE(n == 0.0 || n == T + 1);
    }
}

TEST(BsPendingAge, Examples) {
  Eigen::VectorXd two(2), three(3);
  two << 3, 4;
  three << 2, 2, 2;
  EXPECT_EQ(bs_pending_age(two, {false, false}), 1.0);
  EXPECT_EQ(bs_pending_age(two, {true, false}), 4.0);
  EXPECT_EQ(bs_pending_age(three, {true, true, true}), 7.0);
  EXPECT_THROW(bs_pending_age(two, {true}), std::invalid_argument);
}

TEST(AoUState, InitialState) {
  const auto s = initial_state(3, 2);
  EXPECT_EQ(s.round, 1u);
  EXPECT_TRUE(s.prev_device_age.isZero());
  EXPECT_TRUE(s.prev_association.isZero());
  EXPECT_TRUE((s.device_age.array() == 1.0).all());
  EXPECT_TRUE((s.pending_age.array() == 1.0).all());
}

TEST(AoUState, AdvanceAppliesRecursions) {
  auto s = initial_state(3, 2);
  AssociationOutcome o = AssociationOutcome::none(3, 2);
  o.device_to_uav = {0, std::nullopt, 1};
  const auto n = advance(s, o);
  EXPECT_EQ(n.round, 2u);
  // T[2] = (T[1] + 1)(1 - A[1])
  EXPECT_EQ(n.device_age(0, 0), 0.0);
  EXPECT_EQ(n.device_age(0, 1), 2.0);
  EXPECT_EQ(n.device_age(1, 0), 2.0);
  EXPECT_EQ(n.device_age(2, 1), 0.0);
  // S_u = sum_i T[1] A[1] + 1
  EXPECT_EQ(n.pending_age(0), 2.0);
  EXPECT_EQ(n.pending_age(1), 2.0);
  EXPECT_EQ(n.prev_association(0, 0), 1.0);
  EXPECT_EQ(n.prev_association(1, 0), 0.0);
}

TEST(AoUState, AdvanceRejectsMismatchedOutcome) {
  EXPECT_THROW(advance(initial_state(3, 2), AssociationOutcome::none(2, 2)), std::invalid_argument);
}

TEST(GlobalAou, FirstRoundIsMultipleOfDeviceCount) {
  // k = 1: nothing pending, each UAV that does not forward adds I.
  const auto s = initial_state(4, 3);
  auto o = AssociationOutcome::none(4, 3);
  o.uav_to_bs = {true, false, false};
  EXPECT_EQ(global_aou(s, o), 8.0);
  o.uav_to_bs = {true, true, true};
  EXPECT_EQ(global_aou(s, o), 0.0);
}

TEST(GlobalAou, CountsPendingBatch) {
  auto s = initial_state(2, 2);
  auto o = AssociationOutcome::none(2, 2);
  o.device_to_uav = {0, 0};
  s = advance(s, o);  // T[1] = 1 for both, delivered to UAV 0
  s = advance(s, AssociationOutcome::none(2, 2));
  // state: prev ages T[2] = (0,2;0,2), A[2] = 0 -> batches empty
  auto q = AssociationOutcome::none(2, 2);
  EXPECT_EQ(global_aou(s, q), 4.0);
  auto s2 = initial_state(2, 2);
  s2 = advance(s2, AssociationOutcome::none(2, 2));  // T[2] = 2
  auto o2 = AssociationOutcome::none(2, 2);
  o2.device_to_uav = {1, std::nullopt};
  s2 = advance(s2, o2);  // prev age 2, A(0,1) = 1
  // UAV 0: sum_i (0 + 1) = 2; UAV 1: (2*1 + 1) + (0 + 1) = 4
  auto q2 = AssociationOutcome::none(2, 2);
  EXPECT_EQ(global_aou(s2, q2), 6.0);
  q2.uav_to_bs = {false, true};
  EXPECT_EQ(global_aou(s2, q2), 2.0);
}

TEST(ExpectedAou, Examples) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Constant(3, 2, 4.0);
  Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(3, 2);
  EXPECT_EQ(expected_aou(T, a0, Eigen::VectorXd::Ones(2)), 0.0);
  EXPECT_EQ(expected_aou(T, a0, Eigen::VectorXd::Zero(2)), 6.0);
  Eigen::MatrixXd t1 = Eigen::MatrixXd::Constant(1, 1, 3.0);
  Eigen::MatrixXd a1 = Eigen::MatrixXd::Constant(1, 1, 0.5);
  Eigen::VectorXd b1 = Eigen::VectorXd::Constant(1, 0.5);
  EXPECT_DOUBLE_EQ(expected_aou(t1, a1, b1), 1.25);
}

// Average of the global-AoU quantity over independent Bernoulli draws of
// A[k-1] (per entry) and B[k] (per UAV), using the same state machinery.
double monte_carlo_aou(const Eigen::MatrixXd& T, const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                       int n, std::uint64_t seed, double* stderr_out) {
  RandomStream rng(seed, {0, StreamPurpose::expectation_check, 0});
  AoUState s;
  s.prev_device_age = T;
  s.device_age = T;
  double sum = 0, sq = 0;
  for (int k = 0; k < n; ++k) {
    s.prev_association = Eigen::MatrixXd::Zero(T.rows(), T.cols());
    for (Eigen::Index i = 0; i < T.rows(); ++i)
      for (Eigen::Index u = 0; u < T.cols(); ++u) s.prev_association(i, u) = rng.uniform() < a(i, u);
    AssociationOutcome o = AssociationOutcome::none(T.rows(), T.cols());
    for (Eigen::Index u = 0; u < T.cols(); ++u) o.uav_to_bs[u] = rng.uniform() < b(u);
    const double v = global_aou(s, o);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  *stderr_out = std::sqrt((sq / n - mean * mean) / n);
  return mean;
}

TEST(ExpectedAou, MatchesMonteCarloSingleLink) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Constant(1, 1, 3.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(1, 1, 0.5);
  Eigen::VectorXd b = Eigen::VectorXd::Constant(1, 0.5);
  double se = 0;
  const double mc = monte_carlo_aou(T, a, b, 100000, 17, &se);
  EXPECT_NEAR(mc, 1.25, 3 * se);
}

TEST(ExpectedAou, MatchesMonteCarloRandomInstances) {
  RandomStream rng(5, {});
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd T(3, 2), a(3, 2);
    Eigen::VectorXd b(2);
    for (Eigen::Index k = 0; k < T.size(); ++k) {
      T.data()[k] = static_cast<double>(rng.below(8));
      a.data()[k] = rng.uniform() * 0.5;
    }
    for (Eigen::Index u = 0; u < 2; ++u) b(u) = rng.uniform();
    double se = 0;
    const double mc = monte_carlo_aou(T, a, b, 100000, 100 + trial, &se);
    EXPECT_NEAR(mc, expected_aou(T, a, b), 3 * se) << "trial " << trial;
  }
}

TEST(ExpectedAou, ProductsOverloadAgrees) {
  Eigen::MatrixXd T(2, 2), a(2, 2);
  T << 1, 2, 3, 4;
  a << 0.1, 0.2, 0.3, 0.4;
  Eigen::VectorXd b(2);
  b << 0.6, 0.9;
  Eigen::MatrixXd t = a;
  t.col(0) *= 0.6;
  t.col(1) *= 0.9;
  EXPECT_DOUBLE_EQ(expected_aou(T, a, b, t), expected_aou(T, a, b));
  EXPECT_THROW(expected_aou(T, a, Eigen::VectorXd::Ones(3)), std::invalid_argument);
}

TEST(AoUState, AgesStayIntegral) {
  RandomStream rng(9, {});
  auto s = initial_state(5, 3);
  for (int k = 0; k < 50; ++k) {
    auto o = AssociationOutcome::none(5, 3);
    for (std::size_t i = 0; i < 5; ++i) {
      const auto r = rng.below(4);
      if (r < 3) o.device_to_uav[i] = r;
    }
    s = advance(s, o);
    for (Eigen::Index j = 0; j < s.device_age.size(); ++j)
      EXPECT_EQ(s.device_age.data()[j], std::floor(s.device_age.data()[j]));
    EXPECT_TRUE((s.pending_age.array() >= 1.0).all());
  }
  EXPECT_DOUBLE_EQ(device_level_aou(s), s.device_age.sum());
}

}  // namespace
