#pragma once

// Air-to-ground link model: Rician small-scale fading, power-law path loss,
// SNR and Shannon rate.

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "aou/random.hpp"
#include "aou/scenario.hpp"

namespace aou {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline double distance(const Position3& p, const Position3& q) { return (p - q).norm(); }

struct FadingSample {
  std::complex<double> coeff;
  std::complex<double> los_part{1.0, 0.0};
  std::complex<double> nlos_part;

  double power() const { return std::norm(coeff); }
};

/// Combines a unit line-of-sight term with a CN(0,1) scattered term,
/// weighted by the Rician factor. An infinite factor yields pure LoS.
inline FadingSample sample_fading(double rician_factor, RandomStream& rng) {
  if (!(rician_factor >= 0.0)) throw DomainError("sample_fading: rician factor must be >= 0");
  FadingSample s;
  s.nlos_part = rng.complex_normal();
  if (std::isinf(rician_factor)) {
    s.coeff = s.los_part;
    return s;
  }
  const double los_w = std::sqrt(rician_factor / (rician_factor + 1.0));
  const double nlos_w = std::sqrt(1.0 / (rician_factor + 1.0));
  s.coeff = los_w * s.los_part + nlos_w * s.nlos_part;
  return s;
}

/// SNR at unit distance: tx_power * fading_power * ref_gain / noise_power.
/// The link SNR is this coefficient times d^-alpha.
inline double snr_coefficient(double tx_power, double fading_power, double ref_gain,
                              double noise_power) {
  return tx_power * fading_power * ref_gain / noise_power;
}

inline double snr(double tx_power, double fading_power, double ref_gain, double d, double alpha,
                  double noise_power) {
  if (!(d > 0.0)) throw DomainError("snr: distance must be > 0");
  if (!(noise_power > 0.0)) throw DomainError("snr: noise power must be > 0");
  return snr_coefficient(tx_power, fading_power, ref_gain, noise_power) * std::pow(d, -alpha);
}

inline double rate(double bandwidth, double snr_value) {
  if (!(snr_value >= 0.0)) throw DomainError("rate: snr must be >= 0");
  return bandwidth * std::log2(1.0 + snr_value);
}

/// Received-power gain |coeff|^2 * beta0 * d^-alpha.
struct LinkGain {
  double power_gain = 0.0;
};

inline LinkGain link_gain(double fading_power, double ref_gain, double d, double alpha) {
  if (!(d > 0.0)) throw DomainError("link_gain: distance must be > 0");
  return {fading_power * ref_gain * std::pow(d, -alpha)};
}

}  // namespace aou
