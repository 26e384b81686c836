#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "aou/aou.hpp"
#include "oracles.hpp"

using namespace aou;

namespace {

ScenarioConfig reference_config() {
  return load_config(std::string(AOU_SOURCE_DIR) + "/configs/reference_scenario.json");
}

std::vector<Position3> initial_positions(const ScenarioConfig& cfg) {
  std::vector<Position3> w;
  for (const auto& u : cfg.uavs) w.push_back(u.initial_position);
  return w;
}

RoundContext first_round(const ScenarioConfig& cfg) {
  return make_round_context(cfg, initial_state(cfg.num_devices(), cfg.num_uavs()),
                            initial_positions(cfg),
                            RoundFading::unit(cfg.num_devices(), cfg.num_uavs()));
}

// A later-round context with random realized A[k-1] and ages.
RoundContext random_round(const ScenarioConfig& cfg, RandomStream& rng) {
  const std::size_t I = cfg.num_devices(), U = cfg.num_uavs();
  AoUState s = initial_state(I, U);
  for (int k = 0; k < 3; ++k) {
    auto o = AssociationOutcome::none(I, U);
    for (std::size_t i = 0; i < I; ++i) {
      const auto r = rng.below(U + 1);
      if (r < U) o.device_to_uav[i] = r;
    }
    s = advance(s, o);
  }
  return make_round_context(cfg, s, initial_positions(cfg), RoundFading::unit(I, U));
}

TEST(DecisionLayout, PackingOrder) {
  const DecisionLayout L{3, 2};
  EXPECT_EQ(L.dimension(), 3u * 6 + 10);
  EXPECT_EQ(L.a(0, 0), 0u);
  EXPECT_EQ(L.a(2, 1), 5u);
  EXPECT_EQ(L.b(0), 6u);
  EXPECT_EQ(L.w(0, 0), 8u);
  EXPECT_EQ(L.w(1, 2), 13u);
  EXPECT_EQ(L.t(0, 0), 14u);
  EXPECT_EQ(L.t1(0, 0), 20u);
  EXPECT_EQ(L.t2(1), 27u);
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t u = 0; u < 2; ++u) seen.insert({L.a(i, u), L.t(i, u), L.t1(i, u)});
  for (std::size_t u = 0; u < 2; ++u) {
    seen.insert({L.b(u), L.t2(u)});
    for (int c = 0; c < 3; ++c) seen.insert(L.w(u, c));
  }
  EXPECT_EQ(seen.size(), L.dimension());
  EXPECT_EQ(*seen.rbegin(), L.dimension() - 1);
  EXPECT_EQ(L.block(7), "b");
  EXPECT_EQ(L.block(27), "t2");
}

TEST(DecisionVector, PackUnpackRoundTrip) {
  const DecisionLayout L{3, 2};
  std::vector<double> x(L.dimension());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = 0.5 + static_cast<double>(k);
  const auto d = DecisionVector::unpack(L, x);
  EXPECT_EQ(d.a(2, 1), x[L.a(2, 1)]);
  EXPECT_EQ(d.w[1].z, x[L.w(1, 2)]);
  EXPECT_EQ(d.pack(L), x);
}

TEST(DeviceRate, UnitExponentNeedsInverseSnr) {
  // a = 1, Lambda = R: 2^1 - 1 = 1, so the minimum slack is 1 / C.
  const double C = 2.5e4;
  EXPECT_DOUBLE_EQ(required_slack(1.0, C, 1.0), 1.0 / C);
  ExponentialRateFunction g("device_rate", 0, 1, 1.0, C, 7.0);
  EXPECT_NEAR(g.value(std::vector<double>{1.0, 1.0 / C}), 0.0, 1e-15);
  EXPECT_LT(g.value(std::vector<double>{1.0, 1.01 / C}), 0.0);
  EXPECT_GT(g.value(std::vector<double>{1.0, 0.99 / C}), 0.0);
}

TEST(DeviceRate, HalfProbabilityExample) {
  const double C = 1e5, Lambda = 1e6, R = 1e6;
  const double s = required_slack(R / Lambda, C, 0.5);
  EXPECT_NEAR(s, 3.0 / 1e5, 1e-18);
  const double d = std::sqrt(1e5 / 3.0);
  // Original form: a Lambda log2(1 + C / d^2) >= R, tight at d.
  EXPECT_NEAR(0.5 * Lambda * std::log2(1 + C / (d * d)), R, 1e-6);
  EXPECT_LT(0.5 * Lambda * std::log2(1 + C / (1.01 * d * 1.01 * d)), R);
}

TEST(DeviceRate, VanishingProbabilityIsUnsatisfiable) {
  ExponentialRateFunction g("device_rate", 0, 1, 0.5, 1e6, 1.0);
  double prev = -1e300;
  for (double a : {0.5, 0.1, 0.02, 0.005}) {
    const double v = g.value(std::vector<double>{a, 1.0});
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_TRUE(std::isinf(g.value(std::vector<double>{1e-4, 1.0})));
  EXPECT_TRUE(std::isinf(g.value(std::vector<double>{0.0, 1.0})));
  EXPECT_TRUE(std::isinf(g.value(std::vector<double>{-0.1, 1.0})));
}

// Feasible exponential pairs with tight coupling satisfy the original rate constraint.
TEST(RatePair, SoundAgainstOriginalRateConstraint) {
  const auto cfg = reference_config();
  RandomStream rng(31, {});
  const auto ctx = first_round(cfg);
  auto rp = assemble_round_program(ctx, cfg);
  const auto& L = rp.layout;
  for (int k = 0; k < 200; ++k) {
    const auto x = random_feasible_point(rp, ctx, cfg, rng);
    const auto d = DecisionVector::unpack(L, x);
    for (std::size_t i = 0; i < cfg.num_devices(); ++i) {
      for (std::size_t u = 0; u < cfg.num_uavs(); ++u) {
        const double dist = distance(d.w[u], cfg.devices[i].position);
        const double r = d.a(i, u) * cfg.devices[i].bandwidth *
                         std::log2(1 + ctx.device_snr(i, u) * std::pow(dist, -cfg.pathloss_exponent));
        ASSERT_GE(r, cfg.rate_threshold_device * (1 - 1e-12));
      }
    }
    for (std::size_t u = 0; u < cfg.num_uavs(); ++u) {
      const double dist = distance(d.w[u], cfg.bs_position);
      const double r = d.b(u) * cfg.uavs[u].bandwidth *
                       std::log2(1 + ctx.uav_snr(u) * std::pow(dist, -cfg.pathloss_exponent));
      ASSERT_GE(r, cfg.rate_threshold_uav * (1 - 1e-12));
    }
  }
}

TEST(UavRate, MirrorExamples) {
  auto cfg = reference_config();
  cfg.uavs[0].bandwidth = cfg.rate_threshold_uav;  // Lambda_u = R_U
  const auto ctx = first_round(cfg);
  const DecisionLayout L{cfg.num_devices(), cfg.num_uavs()};
  const auto pair = uav_rate_constraint(0, ctx, cfg, L);
  std::vector<double> x(L.dimension(), 0.0);
  x[L.b(0)] = 1.0;
  x[L.t2(0)] = 1.0 / ctx.uav_snr(0);
  EXPECT_NEAR(pair.rate->value(x), 0.0, 1e-12);
  x[L.b(0)] = 1e-3;
  EXPECT_GT(pair.rate->value(x), 1e6);
}

TEST(Coupling, TightAtExpansionPointAndInner) {
  const auto cfg = reference_config();
  const auto ctx = first_round(cfg);
  const DecisionLayout L{cfg.num_devices(), cfg.num_uavs()};
  const auto pair = device_rate_constraint(3, 1, ctx, cfg, L);
  const Position3 q = cfg.devices[3].position;
  std::vector<double> x(L.dimension(), 0.0);
  for (int c = 0; c < 3; ++c) x[L.w(1, c)] = ctx.w_prev[1][c];
  x[L.t1(3, 1)] = std::pow(distance(ctx.w_prev[1], q), -2.0);
  EXPECT_NEAR(pair.coupling->value(x), 0.0, 1e-12);
  // Inner approximation: coupling-feasible slack never exceeds d^-2.
  RandomStream rng(8, {});
  for (int k = 0; k < 1000; ++k) {
    const Position3 w{100 * rng.uniform(), 100 * rng.uniform(), 1 + 99 * rng.uniform()};
    for (int c = 0; c < 3; ++c) x[L.w(1, c)] = w[c];
    const double dm2 = std::pow(distance(w, q), -2.0);
    x[L.t1(3, 1)] = dm2 * (1 + 1e-9);
    EXPECT_GT(pair.coupling->value(x), 0.0);
  }
}

TEST(Collision, ExpansionPointValue) {
  const std::vector<Position3> w{{0, 0, 50}, {20, 0, 50}};
  const DecisionLayout L{1, 2};
  const auto g = collision_constraints(w, 15.0, L);
  ASSERT_EQ(g.size(), 1u);
  std::vector<double> x(L.dimension(), 0.0);
  for (std::size_t u = 0; u < 2; ++u)
    for (int c = 0; c < 3; ++c) x[L.w(u, c)] = w[u][c];
  // Reads ||delta_prev|| >= d_min, scaled by 1/d_min: (15 - 20)/15.
  EXPECT_NEAR(g[0]->value(x), -1.0 / 3.0, 1e-15);
}

TEST(Collision, LinearizationIsLowerBound) {
  RandomStream rng(12, {});
  const DecisionLayout L{1, 2};
  int tested = 0;
  for (int k = 0; k < 10000; ++k) {
    const std::vector<Position3> w{{100 * rng.uniform(), 100 * rng.uniform(), 100 * rng.uniform()},
                                   {100 * rng.uniform(), 100 * rng.uniform(), 100 * rng.uniform()}};
    const auto g = collision_constraints(w, 15.0, L);
    std::vector<double> x(L.dimension(), 0.0);
    Position3 n0{}, n1{};
    for (int c = 0; c < 3; ++c) {
      x[L.w(0, c)] = w[0][c] + 30 * (rng.uniform() - 0.5);
      x[L.w(1, c)] = w[1][c] + 30 * (rng.uniform() - 0.5);
    }
    if (g[0]->value(x) <= 0.0) {
      n0 = {x[L.w(0, 0)], x[L.w(0, 1)], x[L.w(0, 2)]};
      n1 = {x[L.w(1, 0)], x[L.w(1, 1)], x[L.w(1, 2)]};
      EXPECT_GE((n0 - n1).norm(), 15.0 - 1e-9);
      ++tested;
    }
  }
  EXPECT_GT(tested, 1000);
}

TEST(Collision, SlackGrowsLinearlyAlongSeparation) {
  const std::vector<Position3> w{{0, 0, 50}, {15, 0, 50}};
  const DecisionLayout L{1, 2};
  const auto g = collision_constraints(w, 15.0, L);
  std::vector<double> x(L.dimension(), 0.0);
  auto at = [&](double s) {
    for (int c = 0; c < 3; ++c) x[L.w(0, c)] = w[0][c], x[L.w(1, c)] = w[1][c];
    x[L.w(1, 0)] += s;
    return g[0]->value(x);
  };
  EXPECT_NEAR(at(0.0), 0.0, 1e-15);
  EXPECT_NEAR(at(3.0) - at(0.0), -3.0 / 15.0, 1e-12);
  EXPECT_NEAR(at(6.0) - at(3.0), -3.0 / 15.0, 1e-12);
}

TEST(Collision, CoincidentPreviousPositionsRejected) {
  const DecisionLayout L{1, 2};
  EXPECT_THROW(collision_constraints({{1, 2, 3}, {1, 2, 3}}, 15.0, L), ProgramError);
}

ScenarioConfig costly_flight_config() {
  auto cfg = reference_config();
  for (auto& u : cfg.uavs) u.speed = 40.0;  // flying costs more than hovering at 40 m/s
  return cfg;
}

TEST(Energy, StayingPutReadsHoverCost) {
  auto cfg = costly_flight_config();
  const auto ctx = first_round(cfg);
  const DecisionLayout L{cfg.num_devices(), cfg.num_uavs()};
  const auto e = energy_constraint(0, ctx, cfg, L);
  ASSERT_TRUE(e.constraint);
  std::vector<double> x(L.dimension(), 0.0);
  for (int c = 0; c < 3; ++c) x[L.w(0, c)] = ctx.w_prev[0][c];
  const double hover = (hover_power(cfg.uavs[0].rotor) + cfg.uavs[0].tx_power) * cfg.slot_duration;
  EXPECT_DOUBLE_EQ(e.line.at(0.0), hover);
  EXPECT_EQ(e.constraint->value(x) < 0.0, hover < cfg.uavs[0].energy_budget);
}

TEST(Energy, BoundaryMatchesRoundEnergy) {
  auto cfg = costly_flight_config();
  const auto ctx = first_round(cfg);
  const DecisionLayout L{cfg.num_devices(), cfg.num_uavs()};
  const auto e = energy_constraint(0, ctx, cfg, L);
  const double r = e.max_displacement;
  ASSERT_GT(r, 0.0);
  ASSERT_LT(r, 40.0);
  double lo = 0, hi = 40;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    const Position3 w = ctx.w_prev[0] + Position3{mid, 0, 0};
    (round_energy(ctx.w_prev[0], w, cfg.uavs[0], cfg.slot_duration).total > cfg.uavs[0].energy_budget ? hi : lo) = mid;
  }
  EXPECT_NEAR(r, 0.5 * (lo + hi), 1e-9);
  std::vector<double> x(L.dimension(), 0.0);
  const Position3 w = ctx.w_prev[0] + Position3{0, r, 0};
  for (int c = 0; c < 3; ++c) x[L.w(0, c)] = w[c];
  EXPECT_NEAR(e.constraint->value(x), 0.0, 1e-12);
}

TEST(Energy, BudgetBelowHoverIsInfeasible) {
  auto cfg = reference_config();
  cfg.uavs[2].energy_budget = 100.0;  // hover + comm draw ~169 W for 1 s
  auto rp = assemble_round_program(first_round(cfg), cfg);
  EXPECT_EQ(phase_one(rp.program, rp.start_hint).status, SolveStatus::infeasible);
}

TEST(Energy, NonBindingBudgetEmitsNoConstraint) {
  const auto cfg = reference_config();  // speed 15: flight is cheaper than hovering
  const DecisionLayout L{cfg.num_devices(), cfg.num_uavs()};
  const auto e = energy_constraint(0, first_round(cfg), cfg, L);
  EXPECT_FALSE(e.constraint);
  EXPECT_TRUE(std::isinf(e.max_displacement));
}

TEST(ProductEnvelope, RealizedOneBindsToB) {
  const DecisionLayout L{1, 1};
  const auto l = product_link(0, 0, true, L);
  EXPECT_EQ(l.dependent, L.t(0, 0));
  ASSERT_EQ(l.terms.size(), 1u);
  EXPECT_EQ(l.terms[0], (std::pair<std::size_t, double>{L.b(0), 1.0}));
  // The envelope with a = 1 pins t = b: t <= b and t >= b.
  const auto env = product_envelope(0, 0, 1.0, L);
  std::vector<double> x(L.dimension(), 0.0);
  x[L.b(0)] = 0.4;
  x[L.t(0, 0)] = 0.4;
  for (const auto& g : env) EXPECT_LE(g->value(x), 0.0);
  x[L.t(0, 0)] = 0.41;
  double worst = -1;
  for (const auto& g : env) worst = std::max(worst, g->value(x));
  EXPECT_GT(worst, 0.0);
}

TEST(ProductEnvelope, RealizedZeroForcesZero) {
  const DecisionLayout L{1, 1};
  const auto l = product_link(0, 0, false, L);
  EXPECT_TRUE(l.terms.empty());
  EXPECT_EQ(l.offset, 0.0);
}

TEST(ProductEnvelope, ContinuousVertices) {
  const DecisionLayout L{1, 1};
  const auto env = product_envelope(0, 0, 0.6, L);
  auto worst = [&](double t) {
    std::vector<double> x(L.dimension(), 0.0);
    x[L.b(0)] = 0.7;
    x[L.t(0, 0)] = t;
    double w = -1e9;
    for (const auto& g : env) w = std::max(w, g->value(x));
    return w;
  };
  // envelope at b = 0.7: max(0, 0.6 + 0.7 - 1) = 0.3 <= t <= min(0.6, 0.7) = 0.6
  EXPECT_NEAR(worst(0.3), 0.0, 1e-15);
  EXPECT_NEAR(worst(0.6), 0.0, 1e-15);
  EXPECT_LT(worst(0.42), 0.0);
  EXPECT_GT(worst(0.29), 0.0);
  EXPECT_GT(worst(0.61), 0.0);
}

TEST(Assemble, ContinuousPreviousAssociationUsesEnvelope) {
  const auto cfg = reference_config();
  auto ctx = first_round(cfg);
  ctx.assoc_prev(0, 0) = 0.3;
  auto rp = assemble_round_program(ctx, cfg);
  std::size_t envelope = 0;
  for (const auto& g : rp.program.inequalities()) envelope += g->family() == "product_envelope";
  EXPECT_EQ(envelope, 4u);
  EXPECT_FALSE(rp.program.is_dependent(rp.layout.t(0, 0)));
  EXPECT_TRUE(rp.program.is_dependent(rp.layout.t(0, 1)));
  EXPECT_TRUE(rp.program.strictly_feasible(rp.start_hint));
}

TEST(Objective, AffineWithZeroHessian) {
  const auto cfg = reference_config();
  RandomStream rng(3, {});
  const auto ctx = random_round(cfg, rng);
  auto rp = assemble_round_program(ctx, cfg);
  const auto& f = rp.program.objective();
  EXPECT_TRUE(f.is_affine());
  const std::size_t p = f.support().size();
  std::vector<double> g(p), h(p * p, 1.0);
  f.evaluate(rp.start_hint, g, h);
  for (double v : h) EXPECT_EQ(v, 0.0);
  for (auto i : f.support()) {
    const auto blk = rp.layout.block(i);
    EXPECT_TRUE(blk == "a" || blk == "b" || blk == "t") << blk;
  }
}

TEST(Objective, MatchesClosedFormPlusDeviceTerm) {
  const auto cfg = reference_config();
  RandomStream rng(4, {});
  const auto ctx = random_round(cfg, rng);
  auto rp = assemble_round_program(ctx, cfg);
  const auto d = DecisionVector::unpack(rp.layout, rp.start_hint);
  double device = 0;
  for (Eigen::Index i = 0; i < d.a.rows(); ++i)
    for (Eigen::Index u = 0; u < d.a.cols(); ++u) device += (ctx.age_now(i, u) + 1) * (1 - d.a(i, u));
  const double closed = expected_aou(ctx.age_prev, ctx.assoc_prev, d.b, d.t);
  EXPECT_NEAR(rp.program.objective_value(rp.start_hint), closed + cfg.device_weight * device, 1e-9);
}

TEST(Objective, ZeroAgesMakeObjectiveIndependentOfT) {
  const auto cfg = reference_config();
  auto ctx = first_round(cfg);
  ctx.assoc_prev.setConstant(0.5);  // keep t free so the coefficient is visible
  auto rp = assemble_round_program(ctx, cfg);
  const auto& f = rp.program.objective();
  std::vector<double> g(f.support().size());
  f.evaluate(rp.start_hint, g, {});
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (rp.layout.block(f.support()[k]) == "t") {
      EXPECT_EQ(g[k], 0.0);
    }
  }
  const auto r = solve(rp.program, rp.start_hint);
  ASSERT_EQ(r.status, SolveStatus::optimal);
  for (std::size_t u = 0; u < cfg.num_uavs(); ++u) EXPECT_GT(r.x[rp.layout.b(u)], 1 - 1e-6);
}

TEST(Assemble, StartHintStrictlyFeasible) {
  const auto cfg = reference_config();
  RandomStream rng(5, {});
  for (int k = 0; k < 5; ++k) {
    auto rp = assemble_round_program(random_round(cfg, rng), cfg);
    EXPECT_TRUE(rp.program.strictly_feasible(rp.start_hint));
  }
}

TEST(Assemble, ContextMismatchRejected) {
  const auto cfg = reference_config();
  auto ctx = first_round(cfg);
  ctx.w_prev.pop_back();
  EXPECT_THROW(assemble_round_program(ctx, cfg), std::invalid_argument);
}

// Midpoint convexity of every emitted inequality on the bound box.
TEST(Convexity, MidpointHoldsForEveryFamily) {
  auto cfg = costly_flight_config();  // so the energy family is present
  RandomStream rng(6, {});
  auto ctx = random_round(cfg, rng);
  ctx.assoc_prev(1, 1) = 0.4;
  auto rp = assemble_round_program(ctx, cfg);
  std::vector<double> span(rp.program.dimension(), 1.0);
  for (std::size_t k = 0; k < span.size(); ++k)
    if (rp.layout.block(k) == "t1" || rp.layout.block(k) == "t2") span[k] = 2e-3;
  std::map<std::string, int> pairs;
  for (int n = 0; n < 1000; ++n) {
    const auto x = aou::testing::random_box_point(rp.program, rng, span);
    const auto y = aou::testing::random_box_point(rp.program, rng, span);
    std::vector<double> m(x.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = 0.5 * (x[k] + y[k]);
    for (const auto& g : rp.program.inequalities()) {
      const double gx = g->value(x), gy = g->value(y), gm = g->value(m);
      if (!std::isfinite(gx) || !std::isfinite(gy)) continue;
      const double tol = 1e-9 * std::max({1.0, std::abs(gx), std::abs(gy)});
      ASSERT_LE(gm, 0.5 * (gx + gy) + tol) << g->family();
    }
    for (const auto& g : rp.program.inequalities()) ++pairs[g->family()];
  }
  for (const char* fam : {"device_rate", "device_coupling", "uav_rate", "uav_coupling", "collision",
                          "energy", "travel", "simplex", "product_envelope"})
    EXPECT_GE(pairs[fam], 1000) << fam;
}

}  // namespace
