#pragma once

// Round loop (JAS), baselines, summaries and trace persistence.
//
// Trace CSV columns, in order:
//   round, expected_aou, realized_aou,
//   uav{u}_x, uav{u}_y, uav{u}_z      for u = 0..U-1
//   uav{u}_energy                     for u = 0..U-1
//   uav{u}_bs                         for u = 0..U-1   (0/1)
//   dev{i}_uav                        for i = 0..I-1   (-1 when unassociated)
// Numbers are written in shortest round-trip form.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "aou/age.hpp"
#include "aou/association.hpp"
#include "aou/channel.hpp"
#include "aou/energy.hpp"
#include "aou/program.hpp"
#include "aou/random.hpp"
#include "aou/scenario.hpp"
#include "aou/solver.hpp"

namespace aou {

enum class Policy { jas, deterministic, random_feasible };

inline const char* to_string(Policy p) {
  switch (p) {
    case Policy::jas: return "jas";
    case Policy::deterministic: return "deterministic";
    case Policy::random_feasible: return "random";
  }
  return "?";
}

inline Policy parse_policy(const std::string& s) {
  if (s == "jas") return Policy::jas;
  if (s == "deterministic") return Policy::deterministic;
  if (s == "random" || s == "random_feasible") return Policy::random_feasible;
  throw ConfigError("policy: unknown policy \"" + s + "\"");
}

class InfeasibleRoundError : public std::runtime_error {
 public:
  InfeasibleRoundError(std::size_t round, const std::string& what)
      : std::runtime_error("round " + std::to_string(round) + ": " + what), round_(round) {}
  std::size_t round() const { return round_; }

 private:
  std::size_t round_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  Policy policy = Policy::jas;
  std::optional<std::size_t> rounds;  // overrides cfg.horizon
  bool exact_sampling = false;
  std::size_t mc_samples = 0;  // > 0: Monte-Carlo check of expected_aou each round
  SolveOptions solver;
  std::size_t random_max_attempts = 100000;
};

struct SolverStats {
  SolveStatus status = SolveStatus::optimal;
  std::size_t outer_iters = 0;
  std::size_t newton_iters = 0;
  std::size_t phase_one_newton = 0;
  double gap_bound = 0.0;
  std::vector<double> objective_trace;
  std::vector<IterateRecord> iterates;
};

struct RoundTrace {
  std::size_t round = 0;
  double expected_aou = 0.0;
  double realized_aou = 0.0;
  double device_level_aou = 0.0;  // sum of ages after this round's uploads
  Eigen::MatrixXd device_ages;    // T[k]
  Eigen::VectorXd pending_ages;   // S_u forwarded in round k
  std::vector<Position3> positions;
  std::vector<RoundEnergy> energies;
  AssociationOutcome associations;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  SolverStats solver;
  std::optional<double> mc_mean;
  std::optional<double> mc_stderr;
};

namespace detail {

inline RoundFading round_fading(const ScenarioConfig& cfg, std::uint64_t seed, std::size_t round) {
  const std::size_t I = cfg.num_devices(), U = cfg.num_uavs();
  RoundFading f = RoundFading::unit(I, U);
  if (cfg.fading_mode == FadingMode::expected) return f;
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t u = 0; u < U; ++u) {
      RandomStream rng(seed, {round, StreamPurpose::fading, i * U + u});
      f.device(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(u)) =
          sample_fading(cfg.rician_factor, rng).power();
    }
  }
  for (std::size_t u = 0; u < U; ++u) {
    RandomStream rng(seed, {round, StreamPurpose::fading, I * U + u});
    f.uav(static_cast<Eigen::Index>(u)) = sample_fading(cfg.rician_factor, rng).power();
  }
  return f;
}

inline Position3 uniform_in_ball(const Position3& center, double radius, RandomStream& rng) {
  Position3 dir{rng.normal(), rng.normal(), rng.normal()};
  const double n = dir.norm();
  if (!(n > 0.0)) return center;
  const double r = radius * std::cbrt(rng.uniform());
  return center + dir * (r / n);
}

}  // namespace detail

class SamplingTimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Random strictly feasible decision vector for the round program.
///
/// Positions are drawn uniformly from the reachable ball (energy and travel
/// limits) intersected with the box and kept if the collision constraints
/// hold. Each slack is then put just inside its coupling limit, a row is the
/// minimum rate-feasible probabilities plus a Dirichlet(1,..,1) share of the
/// spare mass, and b is uniform above its minimum.
inline std::vector<double> random_feasible_point(const RoundProgram& rp, const RoundContext& ctx,
                                                 const ScenarioConfig& cfg, RandomStream& rng,
                                                 std::size_t max_attempts = 100000) {
  const DecisionLayout& L = rp.layout;
  const std::size_t I = L.devices, U = L.uavs;
  const double alpha = cfg.pathloss_exponent;
  constexpr double kInside = 1.0 - 1e-6;

  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<double> x(L.dimension(), 0.0);
    bool ok = true;
    for (std::size_t u = 0; u < U && ok; ++u) {
      double radius = cfg.uavs[u].speed * cfg.slot_duration;
      radius = std::min(radius, rp.energy[u].max_displacement);
      if (!(radius > 0.0)) throw SamplingTimeoutError("random_feasible_point: UAV cannot satisfy its energy budget");
      const Position3 w = detail::uniform_in_ball(ctx.w_prev[u], radius * kInside, rng);
      for (int c = 0; c < 3; ++c) {
        const auto& ax = cfg.box.axis(c);
        if (!(w[c] > ax[0] && w[c] < ax[1])) ok = false;
        x[L.w(u, c)] = w[c];
      }
    }
    if (!ok) continue;

    auto slack_limit = [&](std::size_t u, const Position3& q) {
      const Position3 w{x[L.w(u, 0)], x[L.w(u, 1)], x[L.w(u, 2)]};
      const double d0 = distance(ctx.w_prev[u], q);
      const double s0 = std::pow(d0, -alpha);
      const double r2 = (w - q).dot(w - q) / (d0 * d0);
      return s0 * (1.0 + 0.5 * alpha * (1.0 - r2));
    };

    for (std::size_t i = 0; i < I && ok; ++i) {
      const double k = cfg.rate_threshold_device / cfg.devices[i].bandwidth;
      std::vector<double> amin(U);
      double total = 0.0;
      for (std::size_t u = 0; u < U; ++u) {
        const double s = slack_limit(u, cfg.devices[i].position) * kInside;
        if (!(s > 0.0)) {
          ok = false;
          break;
        }
        x[L.t1(i, u)] = s;
        amin[u] = required_probability(k, ctx.device_snr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(u)), s);
        total += amin[u];
      }
      if (!ok || !(total < 1.0)) {
        ok = false;
        break;
      }
      std::vector<double> share(U + 1);
      double sum = 0.0;
      for (auto& g : share) {
        g = -std::log(1.0 - rng.uniform());
        sum += g;
      }
      for (std::size_t u = 0; u < U; ++u) x[L.a(i, u)] = amin[u] + (1.0 - total) * share[u] / sum;
    }
    if (!ok) continue;

    for (std::size_t u = 0; u < U && ok; ++u) {
      const double s = slack_limit(u, cfg.bs_position) * kInside;
      if (!(s > 0.0)) {
        ok = false;
        break;
      }
      x[L.t2(u)] = s;
      const double k = cfg.rate_threshold_uav / cfg.uavs[u].bandwidth;
      const double bmin = required_probability(k, ctx.uav_snr(static_cast<Eigen::Index>(u)), s);
      if (!(bmin < 1.0)) {
        ok = false;
        break;
      }
      x[L.b(u)] = bmin + (1.0 - bmin) * rng.uniform();
    }
    if (!ok) continue;

    for (std::size_t i = 0; i < I; ++i) {
      for (std::size_t u = 0; u < U; ++u) {
        const double ap = ctx.assoc_prev(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(u));
        const double b = x[L.b(u)];
        const double lo = std::max(0.0, ap + b - 1.0), hi = std::min(ap, b);
        x[L.t(i, u)] = lo + (hi - lo) * rng.uniform();
      }
    }
    rp.program.apply_links(x);
    if (rp.program.strictly_feasible(x)) return x;
  }
  throw SamplingTimeoutError("random_feasible_point: no strictly feasible point after " +
                             std::to_string(max_attempts) + " attempts");
}

/// One replication of `opts.policy` with replication seed `seed`.
inline std::vector<RoundTrace> run_policy(const ScenarioConfig& cfg, std::uint64_t seed,
                                          const RunOptions& opts) {
  validate(cfg);
  const std::size_t I = cfg.num_devices(), U = cfg.num_uavs();
  const std::size_t K = opts.rounds.value_or(cfg.horizon);
  const SamplingOptions sampling{cfg.i2u_resolution, opts.exact_sampling};

  AoUState state = initial_state(I, U);
  std::vector<Position3> w_prev;
  for (const auto& s : cfg.uavs) w_prev.push_back(s.initial_position);

  std::vector<RoundTrace> traces;
  for (std::size_t k = 1; k <= K; ++k) {
    const RoundContext ctx = make_round_context(cfg, state, w_prev, detail::round_fading(cfg, seed, k));
    RoundProgram rp = assemble_round_program(ctx, cfg);

    RoundTrace tr;
    tr.round = k;
    std::vector<double> x;
    if (opts.policy == Policy::random_feasible) {
      RandomStream rng(seed, {k, StreamPurpose::random_feasible, 0});
      try {
        x = random_feasible_point(rp, ctx, cfg, rng, opts.random_max_attempts);
      } catch (const SamplingTimeoutError& e) {
        throw InfeasibleRoundError(k, e.what());
      }
    } else {
      const PhaseOneResult p1 = phase_one(rp.program, rp.start_hint, opts.solver);
      if (p1.status != SolveStatus::optimal)
        throw InfeasibleRoundError(k, std::string("phase I: ") + to_string(p1.status));
      const SolveResult res = solve(rp.program, p1.x, opts.solver);
      if (res.status != SolveStatus::optimal)
        throw InfeasibleRoundError(k, std::string("solve: ") + to_string(res.status));
      tr.solver = {res.status, res.outer_iters, res.newton_iters, p1.newton_iters, res.gap_bound,
                   res.objective_trace, res.iterates};
      x = res.x;
    }
    const DecisionVector d = DecisionVector::unpack(rp.layout, x);
    tr.a = d.a;
    tr.b = d.b;
    tr.expected_aou = expected_aou(ctx.age_prev, ctx.assoc_prev, d.b, d.t);

    tr.associations = opts.policy == Policy::deterministic
                          ? deterministic_policy(d.a, d.b)
                          : sample_associations(d.a, d.b, seed, k, sampling);

    tr.positions = d.w;
    for (std::size_t u = 0; u < U; ++u) {
      tr.energies.push_back(round_energy(w_prev[u], d.w[u], cfg.uavs[u], cfg.slot_duration));
      if (tr.energies.back().total > cfg.uavs[u].energy_budget * (1.0 + 1e-12))
        throw std::logic_error("round " + std::to_string(k) + ": UAV " + std::to_string(u) +
                               " exceeds its energy budget");
    }

    tr.realized_aou = global_aou(state, tr.associations);
    if (opts.mc_samples > 0) {
      RandomStream rng(seed, {k, StreamPurpose::expectation_check, 0});
      double sum = 0.0, sq = 0.0;
      AssociationOutcome draw = tr.associations;
      for (std::size_t n = 0; n < opts.mc_samples; ++n) {
        for (std::size_t u = 0; u < U; ++u) draw.uav_to_bs[u] = u2b_sample(std::clamp(d.b(static_cast<Eigen::Index>(u)), 0.0, 1.0), rng);
        const double v = global_aou(state, draw);
        sum += v;
        sq += v * v;
      }
      const double n = static_cast<double>(opts.mc_samples);
      const double mean = sum / n;
      tr.mc_mean = mean;
      tr.mc_stderr = std::sqrt(std::max(sq / n - mean * mean, 0.0) / n);
    }
    tr.device_ages = state.device_age;
    tr.pending_ages = state.pending_age;

    state = advance(state, tr.associations);
    tr.device_level_aou = device_level_aou(state);
    w_prev = d.w;
    traces.push_back(std::move(tr));
  }
  return traces;
}

inline std::vector<RoundTrace> run_jas(const ScenarioConfig& cfg, std::uint64_t seed,
                                       RunOptions opts = {}) {
  opts.policy = Policy::jas;
  return run_policy(cfg, seed, opts);
}

inline std::vector<RoundTrace> run_baseline(const ScenarioConfig& cfg, std::uint64_t seed,
                                            Policy policy, RunOptions opts = {}) {
  if (policy == Policy::jas) throw std::invalid_argument("run_baseline: jas is not a baseline");
  opts.policy = policy;
  return run_policy(cfg, seed, opts);
}

/// Replication seeds: cfg.seed, cfg.seed + 1, ...
inline std::vector<std::uint64_t> replication_seeds(const ScenarioConfig& cfg, std::size_t n) {
  std::vector<std::uint64_t> s;
  for (std::size_t r = 0; r < n; ++r) s.push_back(cfg.seed + r);
  return s;
}

// ---------------------------------------------------------------------------
// Summaries

struct RunSummary {
  Policy policy = Policy::jas;
  std::vector<std::uint64_t> seeds;
  std::vector<double> mean_realized_aou;  // per round
  std::vector<double> std_realized_aou;   // per round (sample std, 0 for one seed)
  std::vector<double> mean_expected_aou;  // per round
  std::vector<double> mean_device_level_aou;
  double mean_aou = 0.0;                  // realized, over rounds and seeds
  std::vector<double> mean_total_energy;  // per UAV, summed over rounds, mean over seeds
  std::size_t energy_violations = 0;
  std::size_t separation_violations = 0;
  double max_mc_zscore = 0.0;
  double wall_seconds = 0.0;
};

inline double min_pairwise_distance(const std::vector<Position3>& w) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < w.size(); ++u)
    for (std::size_t v = u + 1; v < w.size(); ++v) best = std::min(best, (w[u] - w[v]).norm());
  return best;
}

/// Mean over rounds of realized AoU for one replication.
inline double run_mean_aou(const std::vector<RoundTrace>& t) {
  if (t.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : t) s += r.realized_aou;
  return s / static_cast<double>(t.size());
}

inline RunSummary summarize(const ScenarioConfig& cfg, Policy policy,
                            const std::vector<std::uint64_t>& seeds,
                            const std::vector<std::vector<RoundTrace>>& runs, double wall_seconds) {
  if (runs.size() != seeds.size()) throw std::invalid_argument("summarize: one trace list per seed");
  RunSummary s;
  s.policy = policy;
  s.seeds = seeds;
  s.wall_seconds = wall_seconds;
  const std::size_t U = cfg.num_uavs();
  s.mean_total_energy.assign(U, 0.0);
  const std::size_t K = runs.empty() ? 0 : runs.front().size();
  s.mean_realized_aou.assign(K, 0.0);
  s.std_realized_aou.assign(K, 0.0);
  s.mean_expected_aou.assign(K, 0.0);
  s.mean_device_level_aou.assign(K, 0.0);
  const double n = static_cast<double>(runs.size());
  for (const auto& run : runs) {
    if (run.size() != K) throw std::invalid_argument("summarize: runs differ in length");
    for (std::size_t k = 0; k < K; ++k) {
      const auto& r = run[k];
      s.mean_realized_aou[k] += r.realized_aou / n;
      s.mean_expected_aou[k] += r.expected_aou / n;
      s.mean_device_level_aou[k] += r.device_level_aou / n;
      for (std::size_t u = 0; u < U; ++u) {
        s.mean_total_energy[u] += r.energies[u].total / n;
        if (r.energies[u].total > cfg.uavs[u].energy_budget) ++s.energy_violations;
      }
      if (min_pairwise_distance(r.positions) < cfg.min_separation - 1e-6) ++s.separation_violations;
      if (r.mc_mean && r.mc_stderr && *r.mc_stderr > 0.0)
        s.max_mc_zscore = std::max(s.max_mc_zscore, std::abs(*r.mc_mean - r.expected_aou) / *r.mc_stderr);
    }
  }
  if (runs.size() > 1) {
    for (std::size_t k = 0; k < K; ++k) {
      double ss = 0.0;
      for (const auto& run : runs) ss += std::pow(run[k].realized_aou - s.mean_realized_aou[k], 2);
      s.std_realized_aou[k] = std::sqrt(ss / (n - 1.0));
    }
  }
  for (double m : s.mean_realized_aou) s.mean_aou += K ? m / static_cast<double>(K) : 0.0;
  return s;
}

inline nlohmann::json summary_to_json(const RunSummary& s) {
  return {{"policy", to_string(s.policy)},
          {"seeds", s.seeds},
          {"mean_realized_aou", s.mean_realized_aou},
          {"std_realized_aou", s.std_realized_aou},
          {"mean_expected_aou", s.mean_expected_aou},
          {"mean_device_level_aou", s.mean_device_level_aou},
          {"mean_aou", s.mean_aou},
          {"mean_total_energy", s.mean_total_energy},
          {"energy_violations", s.energy_violations},
          {"separation_violations", s.separation_violations},
          {"max_mc_zscore", s.max_mc_zscore},
          {"wall_seconds", s.wall_seconds}};
}

// ---------------------------------------------------------------------------
// Persistence

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_number(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw IoError(where + ": bad number \"" + s + "\"");
  return v;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

inline std::string trace_header(std::size_t devices, std::size_t uavs) {
  std::string h = "round,expected_aou,realized_aou";
  for (std::size_t u = 0; u < uavs; ++u)
    for (const char* c : {"x", "y", "z"}) h += ",uav" + std::to_string(u) + "_" + c;
  for (std::size_t u = 0; u < uavs; ++u) h += ",uav" + std::to_string(u) + "_energy";
  for (std::size_t u = 0; u < uavs; ++u) h += ",uav" + std::to_string(u) + "_bs";
  for (std::size_t i = 0; i < devices; ++i) h += ",dev" + std::to_string(i) + "_uav";
  return h;
}

inline void write_trace_csv(const std::string& path, const std::vector<RoundTrace>& traces,
                            std::size_t devices, std::size_t uavs) {
  using detail::format_number;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << trace_header(devices, uavs) << "\n";
  for (const auto& r : traces) {
    if (r.positions.size() != uavs || r.energies.size() != uavs ||
        r.associations.device_to_uav.size() != devices || r.associations.uav_to_bs.size() != uavs)
      throw std::invalid_argument("write_trace_csv: trace dimensions do not match header");
    out << r.round << "," << format_number(r.expected_aou) << "," << format_number(r.realized_aou);
    for (const auto& p : r.positions)
      out << "," << format_number(p.x) << "," << format_number(p.y) << "," << format_number(p.z);
    for (const auto& e : r.energies) out << "," << format_number(e.total);
    for (bool b : r.associations.uav_to_bs) out << "," << (b ? 1 : 0);
    for (const auto& d : r.associations.device_to_uav)
      out << "," << (d ? static_cast<long long>(*d) : -1LL);
    out << "\n";
  }
  if (!out) throw IoError(path + ": write failed");
}

/// Reads back the persisted fields (round, AoU values, positions, energy totals, associations).
inline std::vector<RoundTrace> read_trace_csv(const std::string& path, std::size_t devices,
                                              std::size_t uavs) {
  using detail::parse_number;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || line != trace_header(devices, uavs))
    throw IoError(path + ": unexpected header");
  std::vector<RoundTrace> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const auto cells = detail::split_csv(line);
    if (cells.size() != 3 + 5 * uavs + devices) throw IoError(where + ": wrong column count");
    RoundTrace r;
    std::size_t c = 0;
    r.round = static_cast<std::size_t>(parse_number(cells[c++], where));
    r.expected_aou = parse_number(cells[c++], where);
    r.realized_aou = parse_number(cells[c++], where);
    for (std::size_t u = 0; u < uavs; ++u) {
      Position3 p;
      p.x = parse_number(cells[c++], where);
      p.y = parse_number(cells[c++], where);
      p.z = parse_number(cells[c++], where);
      r.positions.push_back(p);
    }
    for (std::size_t u = 0; u < uavs; ++u) {
      RoundEnergy e;
      e.total = parse_number(cells[c++], where);
      r.energies.push_back(e);
    }
    r.associations = AssociationOutcome::none(devices, uavs);
    for (std::size_t u = 0; u < uavs; ++u) r.associations.uav_to_bs[u] = parse_number(cells[c++], where) != 0.0;
    for (std::size_t i = 0; i < devices; ++i) {
      const double v = parse_number(cells[c++], where);
      if (v >= 0.0) r.associations.device_to_uav[i] = static_cast<std::size_t>(v);
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_solver_dump_csv(const std::string& path, const std::vector<RoundTrace>& traces) {
  using detail::format_number;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << "round,outer_iter,t_barrier,objective,newton_steps,kkt_residual\n";
  for (const auto& r : traces)
    for (const auto& it : r.solver.iterates)
      out << r.round << "," << it.outer_iter << "," << format_number(it.t_barrier) << ","
          << format_number(it.objective) << "," << it.newton_steps << ","
          << format_number(it.kkt_residual) << "\n";
  if (!out) throw IoError(path + ": write failed");
}

inline void write_summary_json(const std::string& path, const RunSummary& s) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << summary_to_json(s).dump(2) << "\n";
  if (!out) throw IoError(path + ": write failed");
}

inline std::string trace_filename(Policy p, std::uint64_t seed) {
  return std::string("trace_") + to_string(p) + "_seed" + std::to_string(seed) + ".csv";
}

/// One CSV per replication plus summary_<policy>.json in `dir` (created if missing).
inline void write_traces(const std::string& dir, const ScenarioConfig& cfg, const RunSummary& s,
                         const std::vector<std::vector<RoundTrace>>& runs, bool dump_solver = false) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir + ": " + ec.message());
  const std::filesystem::path base(dir);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    write_trace_csv((base / trace_filename(s.policy, s.seeds[r])).string(), runs[r],
                    cfg.num_devices(), cfg.num_uavs());
    if (dump_solver)
      write_solver_dump_csv(
          (base / (std::string("solver_") + to_string(s.policy) + "_seed" + std::to_string(s.seeds[r]) + ".csv")).string(),
          runs[r]);
  }
  write_summary_json((base / (std::string("summary_") + to_string(s.policy) + ".json")).string(), s);
}

}  // namespace aou
