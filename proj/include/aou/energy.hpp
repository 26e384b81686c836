#pragma once

// Rotary-wing propulsion power and per-round energy accounting.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "aou/scenario.hpp"

namespace aou {

class InfeasibleMoveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Blade-profile + induced + parasite power at forward speed V.
inline double propulsion_power(double V, const RotorParams& r) {
  const double blade = r.blade_profile_power * (1.0 + 3.0 * V * V / (r.tip_speed * r.tip_speed));
  const double v0sq = r.mean_rotor_velocity * r.mean_rotor_velocity;
  // sqrt(1 + x^2) - x with x = V^2 / (2 v0^2), written without cancellation.
  const double x = V * V / (2.0 * v0sq);
  const double inner = 1.0 / (std::sqrt(1.0 + x * x) + x);
  const double induced = r.induced_power * std::sqrt(inner);
  const double parasite = r.parasite_coeff * V * V * V;
  return blade + induced + parasite;
}

inline double hover_power(const RotorParams& r) { return propulsion_power(0.0, r); }

struct RoundEnergy {
  double fly = 0.0;
  double hover = 0.0;
  double comm = 0.0;
  double total = 0.0;
  double fly_time = 0.0;
};

/// Energy of one slot: fly at constant speed for ||dw||/v, then hover and
/// transmit for the remainder of the slot.
inline RoundEnergy round_energy(const Position3& w_prev, const Position3& w_cur,
                                const UavSpec& spec, double slot) {
  const double travel = (w_cur - w_prev).norm();
  const double fly_time = travel / spec.speed;
  if (fly_time > slot * (1.0 + 1e-12)) {
    throw InfeasibleMoveError("round_energy: move of " + std::to_string(travel) +
                              " m needs " + std::to_string(fly_time) + " s, slot is " +
                              std::to_string(slot) + " s");
  }
  const double rest = std::max(slot - fly_time, 0.0);
  RoundEnergy e;
  e.fly_time = fly_time;
  e.fly = propulsion_power(spec.speed, spec.rotor) * fly_time;
  e.hover = hover_power(spec.rotor) * rest;
  e.comm = spec.tx_power * rest;
  e.total = e.fly + e.hover + e.comm;
  return e;
}

/// Round energy as an affine function of the travelled distance r:
/// E(r) = hover_cost + per_meter * r, valid for 0 <= r <= speed * slot.
struct EnergyLine {
  double hover_cost = 0.0;  // (P_h + P_U) * slot
  double per_meter = 0.0;   // (P_f(v) - P_h - P_U) / v
  double budget = 0.0;

  double at(double r) const { return hover_cost + per_meter * r; }

  /// Displacement where E(r) reaches the budget; +inf when the budget never binds
  /// (per_meter <= 0 and hover_cost <= budget), negative when even hovering exceeds it.
  double max_displacement() const {
    if (per_meter > 0.0) return (budget - hover_cost) / per_meter;
    if (hover_cost <= budget) return std::numeric_limits<double>::infinity();
    return -std::numeric_limits<double>::infinity();
  }
};

inline EnergyLine energy_line(const UavSpec& spec, double slot) {
  const double ph = hover_power(spec.rotor);
  const double pf = propulsion_power(spec.speed, spec.rotor);
  return {(ph + spec.tx_power) * slot, (pf - ph - spec.tx_power) / spec.speed,
          spec.energy_budget};
}

}  // namespace aou
