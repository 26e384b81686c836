#pragma once

// Age-of-Updates bookkeeping.
//
// Round k starts from the ages T[k-1] and realized associations A[k-1] of the
// previous round. Updates a device delivered to UAV u in round k-1 wait in
// the UAV's buffer and reach the base station in round k iff B_u[k] = 1.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace aou {

/// Realized associations for one round.
struct AssociationOutcome {
  std::vector<std::optional<std::size_t>> device_to_uav;  // per device
  std::vector<bool> uav_to_bs;                             // per UAV

  static AssociationOutcome none(std::size_t devices, std::size_t uavs) {
    return {std::vector<std::optional<std::size_t>>(devices), std::vector<bool>(uavs, false)};
  }

  /// 0/1 matrix A (devices x uavs).
  Eigen::MatrixXd association_matrix(std::size_t uavs) const {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(device_to_uav.size()),
                                              static_cast<Eigen::Index>(uavs));
    for (std::size_t i = 0; i < device_to_uav.size(); ++i)
      if (device_to_uav[i]) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(*device_to_uav[i])) = 1.0;
    return A;
  }

  friend bool operator==(const AssociationOutcome&, const AssociationOutcome&) = default;
};

struct AoUState {
  Eigen::MatrixXd device_age;       // T[k], devices x uavs
  Eigen::MatrixXd prev_device_age;  // T[k-1]
  Eigen::MatrixXd prev_association; // A[k-1] as 0/1
  Eigen::VectorXd pending_age;      // S_u = sum_i T[k-1] A[k-1] + 1
  std::size_t round = 0;

  std::size_t devices() const { return static_cast<std::size_t>(device_age.rows()); }
  std::size_t uavs() const { return static_cast<std::size_t>(device_age.cols()); }
};

inline double step_device_age(double age, bool associated) {
  return associated ? 0.0 : age + 1.0;
}

inline double bs_pending_age(const Eigen::Ref<const Eigen::VectorXd>& device_age_prev,
                             const std::vector<bool>& realized_prev) {
  if (static_cast<std::size_t>(device_age_prev.size()) != realized_prev.size())
    throw std::invalid_argument("bs_pending_age: length mismatch");
  double s = 1.0;
  for (std::size_t i = 0; i < realized_prev.size(); ++i)
    if (realized_prev[i]) s += device_age_prev(static_cast<Eigen::Index>(i));
  return s;
}

namespace detail {

inline void check_integral(const Eigen::MatrixXd& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k)
    if (m.data()[k] != std::floor(m.data()[k]) || m.data()[k] < 0.0)
      throw std::logic_error("AoU ages must stay non-negative integers");
}

inline Eigen::VectorXd pending_from(const Eigen::MatrixXd& prev_age, const Eigen::MatrixXd& prev_assoc) {
  return (prev_age.cwiseProduct(prev_assoc)).colwise().sum().transpose().array() + 1.0;
}

}  // namespace detail

/// State before round 1: T[0] = 0, no prior associations, T[1] = T[0] + 1.
inline AoUState initial_state(std::size_t devices, std::size_t uavs) {
  const auto I = static_cast<Eigen::Index>(devices);
  const auto U = static_cast<Eigen::Index>(uavs);
  AoUState s;
  s.prev_device_age = Eigen::MatrixXd::Zero(I, U);
  s.prev_association = Eigen::MatrixXd::Zero(I, U);
  s.device_age = Eigen::MatrixXd::Ones(I, U);
  s.pending_age = detail::pending_from(s.prev_device_age, s.prev_association);
  s.round = 1;
  return s;
}

/// Applies the realized outcome of the current round and moves to the next one.
inline AoUState advance(const AoUState& s, const AssociationOutcome& outcome) {
  if (outcome.device_to_uav.size() != s.devices() || outcome.uav_to_bs.size() != s.uavs())
    throw std::invalid_argument("advance: outcome dimensions do not match state");
  AoUState next;
  next.prev_device_age = s.device_age;
  next.prev_association = outcome.association_matrix(s.uavs());
  next.device_age = s.device_age;
  for (Eigen::Index i = 0; i < next.device_age.rows(); ++i)
    for (Eigen::Index u = 0; u < next.device_age.cols(); ++u)
      next.device_age(i, u) = step_device_age(s.device_age(i, u), next.prev_association(i, u) > 0.5);
  detail::check_integral(next.device_age);
  next.pending_age = detail::pending_from(next.prev_device_age, next.prev_association);
  next.round = s.round + 1;
  return next;
}

/// Global AoU at the base station after the current round's forwarding decision:
/// sum_u sum_i (T[k-1] A[k-1] + 1)(1 - B_u[k]).
inline double global_aou(const AoUState& s, const AssociationOutcome& outcome) {
  if (outcome.uav_to_bs.size() != s.uavs())
    throw std::invalid_argument("global_aou: outcome dimensions do not match state");
  const Eigen::MatrixXd batch = s.prev_device_age.cwiseProduct(s.prev_association);
  double total = 0.0;
  for (Eigen::Index u = 0; u < batch.cols(); ++u) {
    if (outcome.uav_to_bs[static_cast<std::size_t>(u)]) continue;
    total += batch.col(u).sum() + static_cast<double>(batch.rows());
  }
  return total;
}

/// Closed-form expectation of global_aou when A[k-1] ~ Bernoulli(a_prev) and
/// B[k] ~ Bernoulli(b) independently; `products` stands for a_prev * b.
inline double expected_aou(const Eigen::MatrixXd& age_prev, const Eigen::MatrixXd& a_prev,
                           const Eigen::VectorXd& b, const Eigen::MatrixXd& products) {
  if (age_prev.rows() != a_prev.rows() || age_prev.cols() != a_prev.cols() ||
      products.rows() != a_prev.rows() || products.cols() != a_prev.cols() ||
      b.size() != a_prev.cols())
    throw std::invalid_argument("expected_aou: dimension mismatch");
  double total = 0.0;
  for (Eigen::Index u = 0; u < a_prev.cols(); ++u)
    for (Eigen::Index i = 0; i < a_prev.rows(); ++i)
      total += age_prev(i, u) * a_prev(i, u) + (1.0 - b(u)) - age_prev(i, u) * products(i, u);
  return total;
}

inline double expected_aou(const Eigen::MatrixXd& age_prev, const Eigen::MatrixXd& a_prev,
                           const Eigen::VectorXd& b) {
  Eigen::MatrixXd products = a_prev;
  for (Eigen::Index u = 0; u < a_prev.cols(); ++u) products.col(u) *= b(u);
  return expected_aou(age_prev, a_prev, b, products);
}

/// Device-level freshness: sum_u sum_i T[k].
inline double device_level_aou(const AoUState& s) { return s.device_age.sum(); }

}  // namespace aou
