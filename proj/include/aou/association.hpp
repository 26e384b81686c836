#pragma once

// Realizing associations from probabilities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "aou/age.hpp"
#include "aou/random.hpp"

namespace aou {

class EmptyMultisetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Copies per UAV, then the null UAV last: round-half-up of a_u * resolution,
/// with the null count taking whatever is left of `resolution`.
inline std::vector<std::size_t> i2u_multiset(std::span<const double> a, std::size_t resolution) {
  if (resolution == 0) throw std::invalid_argument("i2u_multiset: resolution must be >= 1");
  std::vector<std::size_t> counts;
  counts.reserve(a.size() + 1);
  std::size_t used = 0;
  for (double p : a) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("i2u_multiset: probability outside [0,1]");
    const auto c = static_cast<std::size_t>(std::floor(p * static_cast<double>(resolution) + 0.5));
    counts.push_back(c);
    used += c;
  }
  counts.push_back(used < resolution ? resolution - used : 0);
  return counts;
}

/// Uniform draw from the multiset; none for the null UAV.
inline std::optional<std::size_t> i2u_sample(std::span<const double> a, std::size_t resolution,
                                             RandomStream& rng) {
  const auto counts = i2u_multiset(a, resolution);
  std::size_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw EmptyMultisetError("i2u_sample: every rounded count is zero");
  std::uint64_t pick = rng.below(total);
  for (std::size_t u = 0; u < counts.size(); ++u) {
    if (pick < counts[u]) {
      if (u == a.size()) return std::nullopt;
      return u;
    }
    pick -= counts[u];
  }
  return std::nullopt;
}

/// Categorical draw without bucketing; mass 1 - sum(a) maps to none.
inline std::optional<std::size_t> i2u_sample_exact(std::span<const double> a, RandomStream& rng) {
  const double r = rng.uniform();
  double acc = 0.0;
  for (std::size_t u = 0; u < a.size(); ++u) {
    acc += a[u];
    if (r < acc) return u;
  }
  return std::nullopt;
}

inline bool u2b_sample(double b, RandomStream& rng) {
  if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("u2b_sample: probability outside [0,1]");
  return rng.uniform() < b;
}

/// A_iu = 1 iff a_iu > 0.5, B_u = 1 iff b_u > 0.5.
inline AssociationOutcome deterministic_policy(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.cols() != b.size()) throw std::invalid_argument("deterministic_policy: dimension mismatch");
  auto out = AssociationOutcome::none(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index u = 0; u < a.cols(); ++u) {
      if (a(i, u) > 0.5) {
        if (out.device_to_uav[static_cast<std::size_t>(i)])
          throw std::invalid_argument("deterministic_policy: device row exceeds the simplex");
        out.device_to_uav[static_cast<std::size_t>(i)] = static_cast<std::size_t>(u);
      }
    }
  }
  for (Eigen::Index u = 0; u < b.size(); ++u) out.uav_to_bs[static_cast<std::size_t>(u)] = b(u) > 0.5;
  return out;
}

struct SamplingOptions {
  std::size_t resolution = 10;
  bool exact = false;
};

/// I2U for every device and U2B for every UAV, each entity on its own stream.
inline AssociationOutcome sample_associations(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                              std::uint64_t seed, std::uint64_t round,
                                              const SamplingOptions& opts) {
  const auto I = static_cast<std::size_t>(a.rows()), U = static_cast<std::size_t>(a.cols());
  auto out = AssociationOutcome::none(I, U);
  std::vector<double> row(U);
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t u = 0; u < U; ++u)
      row[u] = std::clamp(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(u)), 0.0, 1.0);
    RandomStream rng(seed, {round, StreamPurpose::device_to_uav, i});
    if (opts.exact) {
      out.device_to_uav[i] = i2u_sample_exact(row, rng);
    } else {
      try {
        out.device_to_uav[i] = i2u_sample(row, opts.resolution, rng);
      } catch (const EmptyMultisetError&) {
        out.device_to_uav[i] = std::nullopt;
      }
    }
  }
  for (std::size_t u = 0; u < U; ++u) {
    RandomStream rng(seed, {round, StreamPurpose::uav_to_bs, u});
    out.uav_to_bs[u] = u2b_sample(std::clamp(b(static_cast<Eigen::Index>(u)), 0.0, 1.0), rng);
  }
  return out;
}

}  // namespace aou
