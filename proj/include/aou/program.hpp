#pragma once

// Per-round convex program.
//
// Coordinate packing (stable; solver dumps use it):
//   a  (I x U, row-major)  at  i*U + u
//   b  (U)                 at  IU + u
//   w  (U x 3)             at  IU + U + 3u + c
//   t  (I x U, row-major)  at  IU + 4U + i*U + u
//   t1 (I x U, row-major)  at  2IU + 4U + i*U + u
//   t2 (U)                 at  3IU + 4U + u
//
// Every inequality is multiplied by a positive constant so that its value is
// O(1) near the previous-round positions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aou/age.hpp"
#include "aou/channel.hpp"
#include "aou/convex.hpp"
#include "aou/energy.hpp"
#include "aou/scenario.hpp"

namespace aou {

struct DecisionLayout {
  std::size_t devices = 0;
  std::size_t uavs = 0;

  std::size_t dimension() const { return 3 * devices * uavs + 5 * uavs; }
  std::size_t a(std::size_t i, std::size_t u) const { return i * uavs + u; }
  std::size_t b(std::size_t u) const { return devices * uavs + u; }
  std::size_t w(std::size_t u, int c) const {
    return devices * uavs + uavs + 3 * u + static_cast<std::size_t>(c);
  }
  std::size_t t(std::size_t i, std::size_t u) const { return devices * uavs + 4 * uavs + i * uavs + u; }
  std::size_t t1(std::size_t i, std::size_t u) const {
    return 2 * devices * uavs + 4 * uavs + i * uavs + u;
  }
  std::size_t t2(std::size_t u) const { return 3 * devices * uavs + 4 * uavs + u; }

  /// Block name of a flat coordinate ("a", "b", "w", "t", "t1", "t2").
  std::string block(std::size_t k) const {
    const std::size_t IU = devices * uavs;
    if (k < IU) return "a";
    if (k < IU + uavs) return "b";
    if (k < IU + 4 * uavs) return "w";
    if (k < 2 * IU + 4 * uavs) return "t";
    if (k < 3 * IU + 4 * uavs) return "t1";
    if (k < dimension()) return "t2";
    throw std::out_of_range("DecisionLayout::block: index out of range");
  }
};

struct DecisionVector {
  Eigen::MatrixXd a;  // I x U
  Eigen::VectorXd b;  // U
  std::vector<Position3> w;
  Eigen::MatrixXd t;   // I x U
  Eigen::MatrixXd t1;  // I x U
  Eigen::VectorXd t2;  // U

  static DecisionVector unpack(const DecisionLayout& L, std::span<const double> x) {
    if (x.size() != L.dimension()) throw std::invalid_argument("unpack: dimension mismatch");
    const auto I = static_cast<Eigen::Index>(L.devices), U = static_cast<Eigen::Index>(L.uavs);
    DecisionVector d;
    d.a.resize(I, U);
    d.t.resize(I, U);
    d.t1.resize(I, U);
    d.b.resize(U);
    d.t2.resize(U);
    for (std::size_t i = 0; i < L.devices; ++i) {
      for (std::size_t u = 0; u < L.uavs; ++u) {
        const auto ii = static_cast<Eigen::Index>(i), uu = static_cast<Eigen::Index>(u);
        d.a(ii, uu) = x[L.a(i, u)];
        d.t(ii, uu) = x[L.t(i, u)];
        d.t1(ii, uu) = x[L.t1(i, u)];
      }
    }
    for (std::size_t u = 0; u < L.uavs; ++u) {
      d.b(static_cast<Eigen::Index>(u)) = x[L.b(u)];
      d.t2(static_cast<Eigen::Index>(u)) = x[L.t2(u)];
      d.w.push_back({x[L.w(u, 0)], x[L.w(u, 1)], x[L.w(u, 2)]});
    }
    return d;
  }

  std::vector<double> pack(const DecisionLayout& L) const {
    std::vector<double> x(L.dimension(), 0.0);
    for (std::size_t i = 0; i < L.devices; ++i) {
      for (std::size_t u = 0; u < L.uavs; ++u) {
        const auto ii = static_cast<Eigen::Index>(i), uu = static_cast<Eigen::Index>(u);
        x[L.a(i, u)] = a(ii, uu);
        x[L.t(i, u)] = t(ii, uu);
        x[L.t1(i, u)] = t1(ii, uu);
      }
    }
    for (std::size_t u = 0; u < L.uavs; ++u) {
      x[L.b(u)] = b(static_cast<Eigen::Index>(u));
      x[L.t2(u)] = t2(static_cast<Eigen::Index>(u));
      for (int c = 0; c < 3; ++c) x[L.w(u, c)] = w[u][c];
    }
    return x;
  }
};

/// Known constants of one round.
struct RoundContext {
  Eigen::MatrixXd age_prev;     // T[k-1], I x U
  Eigen::MatrixXd assoc_prev;   // A[k-1] (0/1 when realized), I x U
  Eigen::MatrixXd age_now;      // T[k], I x U
  std::vector<Position3> w_prev;
  Eigen::MatrixXd device_snr;   // C_iu = P_i |h|^2 beta0 / sigma^2, I x U
  Eigen::VectorXd uav_snr;      // C_u, U

  std::size_t devices() const { return static_cast<std::size_t>(age_prev.rows()); }
  std::size_t uavs() const { return static_cast<std::size_t>(age_prev.cols()); }
};

/// Fading powers |h|^2 used as channel constants for a round.
struct RoundFading {
  Eigen::MatrixXd device;  // I x U
  Eigen::VectorXd uav;     // U

  static RoundFading unit(std::size_t devices, std::size_t uavs) {
    return {Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(devices), static_cast<Eigen::Index>(uavs)),
            Eigen::VectorXd::Ones(static_cast<Eigen::Index>(uavs))};
  }
};

inline RoundContext make_round_context(const ScenarioConfig& cfg, const AoUState& state,
                                       const std::vector<Position3>& w_prev,
                                       const RoundFading& fading) {
  const std::size_t I = cfg.num_devices(), U = cfg.num_uavs();
  if (state.devices() != I || state.uavs() != U || w_prev.size() != U ||
      static_cast<std::size_t>(fading.device.rows()) != I ||
      static_cast<std::size_t>(fading.device.cols()) != U ||
      static_cast<std::size_t>(fading.uav.size()) != U)
    throw std::invalid_argument("make_round_context: dimensions do not match config");
  RoundContext ctx;
  ctx.age_prev = state.prev_device_age;
  ctx.assoc_prev = state.prev_association;
  ctx.age_now = state.device_age;
  ctx.w_prev = w_prev;
  ctx.device_snr.resize(static_cast<Eigen::Index>(I), static_cast<Eigen::Index>(U));
  ctx.uav_snr.resize(static_cast<Eigen::Index>(U));
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t u = 0; u < U; ++u)
      ctx.device_snr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(u)) =
          snr_coefficient(cfg.devices[i].tx_power, fading.device(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(u)),
                          cfg.ref_gain, cfg.noise_power);
  for (std::size_t u = 0; u < U; ++u)
    ctx.uav_snr(static_cast<Eigen::Index>(u)) =
        snr_coefficient(cfg.uavs[u].tx_power, fading.uav(static_cast<Eigen::Index>(u)), cfg.ref_gain, cfg.noise_power);
  return ctx;
}

// ---------------------------------------------------------------------------
// Constraint functions

/// kappa * ((2^(k / a) - 1) / C - s) over (a, s); k = R / Lambda.
class ExponentialRateFunction final : public SmoothFunction {
 public:
  ExponentialRateFunction(std::string family, std::size_t prob_index, std::size_t slack_index,
                          double exponent, double snr_coeff, double scale)
      : SmoothFunction(std::move(family), {prob_index, slack_index}),
        c_(exponent * std::numbers::ln2),
        snr_(snr_coeff),
        scale_(scale) {
    if (!(exponent > 0.0) || !(snr_coeff > 0.0) || !(scale > 0.0))
      throw ProgramError("ExponentialRateFunction: constants must be positive");
  }

  double evaluate(std::span<const double> x, std::span<double> grad,
                  std::span<double> hess) const override {
    const double a = x[support()[0]];
    const double s = x[support()[1]];
    if (!(a > 0.0)) return std::numeric_limits<double>::infinity();
    const double e = std::exp(c_ / a);
    if (!std::isfinite(e)) return std::numeric_limits<double>::infinity();
    const double k = scale_ / snr_;
    if (!grad.empty()) {
      grad[0] = -k * e * c_ / (a * a);
      grad[1] = -scale_;
    }
    if (!hess.empty()) {
      hess[0] = k * e * (c_ * c_ / (a * a * a * a) + 2.0 * c_ / (a * a * a));
      hess[1] = hess[2] = hess[3] = 0.0;
    }
    return scale_ * ((e - 1.0) / snr_ - s);
  }

 private:
  double c_, snr_, scale_;
};

/// scale * ||w - center||^2 + sum_k lin_k x_k + constant.
class QuadraticDistanceFunction final : public SmoothFunction {
 public:
  QuadraticDistanceFunction(std::string family, std::array<std::size_t, 3> w_index,
                            Position3 center, double scale,
                            std::vector<std::pair<std::size_t, double>> linear, double constant)
      : SmoothFunction(std::move(family), support_of(w_index, linear)),
        center_(center),
        scale_(scale),
        linear_(std::move(linear)),
        constant_(constant) {
    if (!(scale > 0.0)) throw ProgramError("QuadraticDistanceFunction: scale must be positive");
  }

  double evaluate(std::span<const double> x, std::span<double> grad,
                  std::span<double> hess) const override {
    const auto& s = support();
    double v = constant_;
    for (int c = 0; c < 3; ++c) {
      const double d = x[s[static_cast<std::size_t>(c)]] - center_[c];
      v += scale_ * d * d;
      if (!grad.empty()) grad[static_cast<std::size_t>(c)] = 2.0 * scale_ * d;
    }
    for (std::size_t k = 0; k < linear_.size(); ++k) {
      v += linear_[k].second * x[linear_[k].first];
      if (!grad.empty()) grad[3 + k] = linear_[k].second;
    }
    if (!hess.empty()) {
      const std::size_t p = s.size();
      std::fill(hess.begin(), hess.end(), 0.0);
      for (std::size_t c = 0; c < 3; ++c) hess[c * p + c] = 2.0 * scale_;
    }
    return v;
  }

 private:
  static std::vector<std::size_t> support_of(const std::array<std::size_t, 3>& w,
                                             const std::vector<std::pair<std::size_t, double>>& lin) {
    std::vector<std::size_t> s(w.begin(), w.end());
    for (const auto& [idx, c] : lin) s.push_back(idx);
    return s;
  }

  Position3 center_;
  double scale_;
  std::vector<std::pair<std::size_t, double>> linear_;
  double constant_;
};

// ---------------------------------------------------------------------------
// Closed-form helpers shared by the builders and the start point.

/// Smallest slack s = d^-alpha admitting rate >= R at probability p: (2^(k/p) - 1) / C.
inline double required_slack(double exponent, double snr_coeff, double p) {
  return std::expm1(exponent * std::numbers::ln2 / p) / snr_coeff;
}

/// Smallest probability p with p * log2(1 + C s) >= k.
inline double required_probability(double exponent, double snr_coeff, double slack) {
  return exponent / std::log2(1.0 + snr_coeff * slack);
}

struct RatePair {
  FunctionPtr rate;
  FunctionPtr coupling;
};

namespace detail {

inline std::array<std::size_t, 3> w_index(const DecisionLayout& L, std::size_t u) {
  return {L.w(u, 0), L.w(u, 1), L.w(u, 2)};
}

// Coupling slack <= d(w, q)^-alpha, convex inner form linearized at w_prev:
// ||w - q||^2 / d0^2 - 1 + (2/alpha)(s / s0 - 1) <= 0 with s0 = d0^-alpha.
inline FunctionPtr coupling(std::string family, const DecisionLayout& L, std::size_t u,
                            std::size_t slack_index, const Position3& q, const Position3& w_prev,
                            double alpha) {
  const double d0 = distance(w_prev, q);
  if (!(d0 > 0.0)) throw ProgramError(family + ": previous position coincides with the anchor");
  const double s0 = std::pow(d0, -alpha);
  return std::make_shared<QuadraticDistanceFunction>(
      std::move(family), w_index(L, u), q, 1.0 / (d0 * d0),
      std::vector<std::pair<std::size_t, double>>{{slack_index, (2.0 / alpha) / s0}},
      -1.0 - 2.0 / alpha);
}

}  // namespace detail

inline RatePair device_rate_constraint(std::size_t i, std::size_t u, const RoundContext& ctx,
                                       const ScenarioConfig& cfg, const DecisionLayout& L) {
  const Position3& q = cfg.devices[i].position;
  const double d0 = distance(ctx.w_prev[u], q);
  const double C = ctx.device_snr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(u));
  const double k = cfg.rate_threshold_device / cfg.devices[i].bandwidth;
  RatePair p;
  p.rate = std::make_shared<ExponentialRateFunction>("device_rate", L.a(i, u), L.t1(i, u), k, C,
                                                     std::pow(d0, cfg.pathloss_exponent));
  p.coupling = detail::coupling("device_coupling", L, u, L.t1(i, u), q, ctx.w_prev[u],
                                cfg.pathloss_exponent);
  return p;
}

inline RatePair uav_rate_constraint(std::size_t u, const RoundContext& ctx,
                                    const ScenarioConfig& cfg, const DecisionLayout& L) {
  const Position3& q = cfg.bs_position;
  const double d0 = distance(ctx.w_prev[u], q);
  const double C = ctx.uav_snr(static_cast<Eigen::Index>(u));
  const double k = cfg.rate_threshold_uav / cfg.uavs[u].bandwidth;
  RatePair p;
  p.rate = std::make_shared<ExponentialRateFunction>("uav_rate", L.b(u), L.t2(u), k, C,
                                                     std::pow(d0, cfg.pathloss_exponent));
  p.coupling = detail::coupling("uav_coupling", L, u, L.t2(u), q, ctx.w_prev[u],
                                cfg.pathloss_exponent);
  return p;
}

/// n^T (w_u - w_v) >= d_min with n the unit previous separation, scaled by 1/d_min.
inline std::vector<FunctionPtr> collision_constraints(const std::vector<Position3>& w_prev,
                                                      double d_min, const DecisionLayout& L) {
  std::vector<FunctionPtr> out;
  for (std::size_t u = 0; u < w_prev.size(); ++u) {
    for (std::size_t v = u + 1; v < w_prev.size(); ++v) {
      const Position3 delta = w_prev[u] - w_prev[v];
      const double len = delta.norm();
      if (!(len > 0.0))
        throw ProgramError("collision_constraints: UAVs " + std::to_string(u) + " and " +
                           std::to_string(v) + " share a previous position");
      const Position3 n = delta * (1.0 / len);
      std::vector<std::size_t> idx;
      std::vector<double> coef;
      for (int c = 0; c < 3; ++c) {
        idx.push_back(L.w(u, c));
        coef.push_back(-n[c] / d_min);
      }
      for (int c = 0; c < 3; ++c) {
        idx.push_back(L.w(v, c));
        coef.push_back(n[c] / d_min);
      }
      out.push_back(make_affine("collision", std::move(idx), std::move(coef), 1.0));
    }
  }
  return out;
}

/// Energy limit of UAV u as a displacement limit ||w_u - w_prev_u|| <= r*.
struct EnergySurrogate {
  EnergyLine line;
  double max_displacement = 0.0;  // r*; +inf if never binding, < 0 if hovering alone exceeds E_max
  FunctionPtr constraint;         // null when never binding
};

inline EnergySurrogate energy_constraint(std::size_t u, const RoundContext& ctx,
                                         const ScenarioConfig& cfg, const DecisionLayout& L) {
  EnergySurrogate e;
  e.line = energy_line(cfg.uavs[u], cfg.slot_duration);
  e.max_displacement = e.line.max_displacement();
  const double r = e.max_displacement;
  if (std::isinf(r) && r > 0.0) return e;
  if (!(r > 0.0)) {
    // Even w_u = w_prev exceeds the budget.
    e.constraint = make_affine("energy", {}, {}, 1.0);
    return e;
  }
  e.constraint = std::make_shared<QuadraticDistanceFunction>(
      "energy", detail::w_index(L, u), ctx.w_prev[u], 1.0 / (r * r),
      std::vector<std::pair<std::size_t, double>>{}, -1.0);
  return e;
}

/// ||w_u - w_prev_u|| <= v * tau.
inline FunctionPtr travel_constraint(std::size_t u, const RoundContext& ctx,
                                     const ScenarioConfig& cfg, const DecisionLayout& L) {
  const double r = cfg.uavs[u].speed * cfg.slot_duration;
  return std::make_shared<QuadraticDistanceFunction>(
      "travel", detail::w_index(L, u), ctx.w_prev[u], 1.0 / (r * r),
      std::vector<std::pair<std::size_t, double>>{}, -1.0);
}

inline FunctionPtr simplex_constraint(std::size_t i, const DecisionLayout& L) {
  std::vector<std::size_t> idx;
  for (std::size_t u = 0; u < L.uavs; ++u) idx.push_back(L.a(i, u));
  return make_affine("simplex", idx, std::vector<double>(L.uavs, 1.0), -1.0);
}

/// Four-face envelope of t = a_prev * b for a constant a_prev in [0,1]:
/// t <= a_prev, t <= b, t >= a_prev + b - 1, t >= 0.
inline std::vector<FunctionPtr> product_envelope(std::size_t i, std::size_t u, double a_prev,
                                                 const DecisionLayout& L) {
  const std::size_t t = L.t(i, u), b = L.b(u);
  return {make_affine("product_envelope", {t}, {1.0}, -a_prev),
          make_affine("product_envelope", {t, b}, {1.0, -1.0}, 0.0),
          make_affine("product_envelope", {t, b}, {-1.0, 1.0}, a_prev - 1.0),
          make_affine("product_envelope", {t}, {-1.0}, 0.0)};
}

/// t = A * b for a realized A in {0, 1} (the envelope's only point).
inline LinkedCoordinate product_link(std::size_t i, std::size_t u, bool associated,
                                     const DecisionLayout& L) {
  LinkedCoordinate l;
  l.dependent = L.t(i, u);
  if (associated) l.terms.push_back({L.b(u), 1.0});
  return l;
}

/// Expected global AoU with the realized A[k-1] plus the weighted device-level term:
///   sum_u sum_i [T_prev A_prev + 1 - b_u - T_prev t_iu] + lambda sum (T_now + 1)(1 - a_iu).
inline FunctionPtr round_objective(const RoundContext& ctx, double device_weight,
                                   const DecisionLayout& L) {
  std::vector<std::size_t> idx;
  std::vector<double> coef;
  double constant = 0.0;
  for (std::size_t i = 0; i < L.devices; ++i) {
    for (std::size_t u = 0; u < L.uavs; ++u) {
      const auto ii = static_cast<Eigen::Index>(i), uu = static_cast<Eigen::Index>(u);
      const double Tp = ctx.age_prev(ii, uu);
      const double Tn = ctx.age_now(ii, uu);
      constant += Tp * ctx.assoc_prev(ii, uu) + 1.0 + device_weight * (Tn + 1.0);
      idx.push_back(L.a(i, u));
      coef.push_back(-device_weight * (Tn + 1.0));
      idx.push_back(L.t(i, u));
      coef.push_back(-Tp);
    }
  }
  for (std::size_t u = 0; u < L.uavs; ++u) {
    idx.push_back(L.b(u));
    coef.push_back(-static_cast<double>(L.devices));
  }
  return make_affine("objective", std::move(idx), std::move(coef), constant);
}

struct RoundProgram {
  ConvexProgram program;
  DecisionLayout layout;
  std::vector<double> start_hint;  // cheap point, strictly feasible whenever w_prev is
  std::vector<EnergySurrogate> energy;
};

inline bool is_binary(double v) { return v == 0.0 || v == 1.0; }

inline RoundProgram assemble_round_program(const RoundContext& ctx, const ScenarioConfig& cfg) {
  const std::size_t I = cfg.num_devices(), U = cfg.num_uavs();
  if (ctx.devices() != I || ctx.uavs() != U || ctx.w_prev.size() != U)
    throw std::invalid_argument("assemble_round_program: context does not match config");
  const DecisionLayout L{I, U};
  RoundProgram rp{ConvexProgram(L.dimension()), L, {}, {}};
  ConvexProgram& P = rp.program;

  P.set_objective(round_objective(ctx, cfg.device_weight, L));

  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t u = 0; u < U; ++u) {
      auto pair = device_rate_constraint(i, u, ctx, cfg, L);
      P.add_inequality(pair.rate);
      P.add_inequality(pair.coupling);
    }
  }
  for (std::size_t u = 0; u < U; ++u) {
    auto pair = uav_rate_constraint(u, ctx, cfg, L);
    P.add_inequality(pair.rate);
    P.add_inequality(pair.coupling);
  }
  for (auto& g : collision_constraints(ctx.w_prev, cfg.min_separation, L)) P.add_inequality(g);
  for (std::size_t u = 0; u < U; ++u) {
    rp.energy.push_back(energy_constraint(u, ctx, cfg, L));
    if (rp.energy.back().constraint) P.add_inequality(rp.energy.back().constraint);
    P.add_inequality(travel_constraint(u, ctx, cfg, L));
  }
  for (std::size_t i = 0; i < I; ++i) P.add_inequality(simplex_constraint(i, L));

  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t u = 0; u < U; ++u) {
      const double ap = ctx.assoc_prev(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(u));
      if (is_binary(ap)) {
        P.link(product_link(i, u, ap == 1.0, L));
      } else {
        for (auto& g : product_envelope(i, u, ap, L)) P.add_inequality(g);
      }
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t u = 0; u < U; ++u) {
      P.set_bounds(L.a(i, u), 0.0, 1.0);
      P.set_bounds(L.t1(i, u), 0.0, inf);
    }
  }
  for (std::size_t u = 0; u < U; ++u) {
    P.set_bounds(L.b(u), 0.0, 1.0);
    P.set_bounds(L.t2(u), 0.0, inf);
    for (int c = 0; c < 3; ++c) P.set_bounds(L.w(u, c), cfg.box.axis(c)[0], cfg.box.axis(c)[1]);
  }

  // Start hint: stay at w_prev, split the spare probability mass evenly and put
  // each slack halfway between its rate and coupling limits.
  const double alpha = cfg.pathloss_exponent;
  std::vector<double> x(L.dimension(), 0.0);
  for (std::size_t u = 0; u < U; ++u)
    for (int c = 0; c < 3; ++c) x[L.w(u, c)] = ctx.w_prev[u][c];
  for (std::size_t i = 0; i < I; ++i) {
    std::vector<double> amin(U), smax(U);
    double total = 0.0;
    for (std::size_t u = 0; u < U; ++u) {
      const double C = ctx.device_snr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(u));
      const double k = cfg.rate_threshold_device / cfg.devices[i].bandwidth;
      smax[u] = std::pow(distance(ctx.w_prev[u], cfg.devices[i].position), -alpha);
      amin[u] = required_probability(k, C, smax[u]);
      total += amin[u];
    }
    const double spare = (1.0 - total) / static_cast<double>(U + 1);
    for (std::size_t u = 0; u < U; ++u) {
      const double a = std::min(amin[u] + spare, 1.0);
      const double C = ctx.device_snr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(u));
      const double k = cfg.rate_threshold_device / cfg.devices[i].bandwidth;
      x[L.a(i, u)] = a;
      x[L.t1(i, u)] = 0.5 * (required_slack(k, C, a) + smax[u]);
    }
  }
  for (std::size_t u = 0; u < U; ++u) {
    const double C = ctx.uav_snr(static_cast<Eigen::Index>(u));
    const double k = cfg.rate_threshold_uav / cfg.uavs[u].bandwidth;
    const double smax = std::pow(distance(ctx.w_prev[u], cfg.bs_position), -alpha);
    const double bmin = required_probability(k, C, smax);
    const double b = bmin + 0.5 * (1.0 - bmin);
    x[L.b(u)] = b;
    x[L.t2(u)] = 0.5 * (required_slack(k, C, b) + smax);
  }
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t u = 0; u < U; ++u) {
      const double ap = ctx.assoc_prev(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(u));
      x[L.t(i, u)] = is_binary(ap) ? ap * x[L.b(u)] : 0.5 * (std::max(0.0, ap + x[L.b(u)] - 1.0) + std::min(ap, x[L.b(u)]));
    }
  }
  P.apply_links(x);
  rp.start_hint = std::move(x);
  return rp;
}

}  // namespace aou
