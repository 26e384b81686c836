#pragma once

// Log-barrier interior-point method for ConvexProgram.
//
// Linked coordinates are eliminated: the solver iterates on the free
// coordinates z and reconstructs x = expand(z). Every inequality and every
// finite bound becomes a term -log(-g) of the barrier
//
//     phi_t(z) = t * f(x(z)) - sum_j log(-g_j(x(z))),
//
// which is minimized by damped Newton steps with backtracking, for an
// increasing sequence t_0, mu * t_0, ... until m / t falls below the gap
// tolerance (m = number of barrier terms).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "aou/convex.hpp"

namespace aou {

struct SolveOptions {
  double duality_gap_tol = 1e-6;
  double newton_tol = 1e-8;  // on lambda^2 / 2
  double barrier_mu = 10.0;
  double t0 = 1.0;
  double backtrack_alpha = 0.25;
  double backtrack_beta = 0.5;
  std::size_t max_newton = 200;  // per centering
  std::size_t max_outer = 60;

  void validate() const {
    const bool ok = backtrack_alpha > 0.0 && backtrack_alpha < 0.5 && backtrack_beta > 0.0 &&
                    backtrack_beta < 1.0 && barrier_mu > 1.0 && duality_gap_tol > 0.0 &&
                    newton_tol > 0.0 && t0 > 0.0 && max_newton > 0 && max_outer > 0;
    if (!ok) throw std::invalid_argument("SolveOptions: parameter out of range");
  }
};

enum class SolveStatus { optimal, infeasible, max_iters };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::max_iters: return "max_iters";
  }
  return "?";
}

struct IterateRecord {
  std::size_t outer_iter = 0;
  double t_barrier = 0.0;
  double objective = 0.0;
  std::size_t newton_steps = 0;
  double kkt_residual = 0.0;
};

struct SolveResult {
  std::vector<double> x;
  double objective = 0.0;
  double gap_bound = std::numeric_limits<double>::infinity();
  double kkt_residual = std::numeric_limits<double>::infinity();
  std::size_t outer_iters = 0;
  std::size_t newton_iters = 0;
  std::vector<double> objective_trace;               // f at each centered point
  std::vector<IterateRecord> iterates;
  std::vector<std::vector<double>> newton_decrements;  // lambda^2 per step, per centering
  SolveStatus status = SolveStatus::max_iters;
};

struct PhaseOneResult {
  SolveStatus status = SolveStatus::max_iters;  // optimal == strictly feasible point found
  std::vector<double> x;
  double max_constraint = std::numeric_limits<double>::infinity();
  std::size_t newton_iters = 0;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> iterate)
      : std::runtime_error(what), iterate_(std::move(iterate)) {}
  const std::vector<double>& iterate() const { return iterate_; }

 private:
  std::vector<double> iterate_;
};

namespace detail {

/// Barrier view of a program in the free coordinates.
class BarrierModel {
 public:
  explicit BarrierModel(const ConvexProgram& p) : program_(p) {
    const std::size_t n = p.dimension();
    free_of_x_.assign(n, npos);
    for (std::size_t i = 0; i < n; ++i) {
      if (!p.is_dependent(i)) {
        free_of_x_[i] = free_.size();
        free_.push_back(i);
      }
    }
    dependent_terms_.resize(n);
    for (const auto& l : p.links()) dependent_terms_[l.dependent] = &l;

    objective_ = make_term(p.objective());
    for (const auto& g : p.inequalities()) terms_.push_back(make_term(*g));
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isfinite(p.lower()[i])) add_owned(make_affine("bound", {i}, {-1.0}, p.lower()[i]));
      if (std::isfinite(p.upper()[i])) add_owned(make_affine("bound", {i}, {1.0}, -p.upper()[i]));
    }
    std::size_t widest = objective_.fn->support().size();
    for (const auto& t : terms_) widest = std::max(widest, t.fn->support().size());
    grad_buf_.resize(widest);
    hess_buf_.resize(widest * widest);
  }

  std::size_t free_dim() const { return free_.size(); }
  std::size_t terms() const { return terms_.size(); }
  const ConvexProgram& program() const { return program_; }

  Eigen::VectorXd restrict(std::span<const double> x) const {
    Eigen::VectorXd z(static_cast<Eigen::Index>(free_.size()));
    for (std::size_t k = 0; k < free_.size(); ++k) z(static_cast<Eigen::Index>(k)) = x[free_[k]];
    return z;
  }

  void expand(const Eigen::VectorXd& z, std::vector<double>& x) const {
    x.assign(program_.dimension(), 0.0);
    for (std::size_t k = 0; k < free_.size(); ++k) x[free_[k]] = z(static_cast<Eigen::Index>(k));
    program_.apply_links(x);
  }

  double objective(std::span<const double> x) const { return objective_.fn->value(x); }
  bool objective_affine() const { return objective_.fn->is_affine(); }

  /// Term values; false when some term is non-finite or not strictly negative.
  bool values(std::span<const double> x, std::vector<double>& g) const {
    g.resize(terms_.size());
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      g[j] = terms_[j].fn->value(x);
      if (!std::isfinite(g[j]) || g[j] >= 0.0) return false;
    }
    return true;
  }

  double max_value(std::span<const double> x, const std::vector<bool>* mask = nullptr) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      if (mask && !(*mask)[j]) continue;
      const double v = terms_[j].fn->value(x);
      if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, v);
    }
    return worst;
  }

  const SmoothFunction& term(std::size_t j) const { return *terms_[j].fn; }

  /// Gradient of f in z.
  Eigen::VectorXd objective_gradient(std::span<const double> x) {
    Eigen::VectorXd gz = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(free_.size()));
    accumulate(objective_, x, 1.0, 0.0, 0.0, gz, nullptr);
    return gz;
  }

  /// Gradient and Hessian of phi_t in z, given term values g (from values()).
  void derivatives(std::span<const double> x, const std::vector<double>& g, double t,
                   Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
    const auto nf = static_cast<Eigen::Index>(free_.size());
    grad.setZero(nf);
    hess.setZero(nf, nf);
    accumulate(objective_, x, t, 0.0, t, grad, &hess);
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      const double inv = -1.0 / g[j];  // 1 / (-g) > 0
      accumulate(terms_[j], x, inv, inv * inv, inv, grad, &hess);
    }
  }

  Eigen::VectorXd barrier_gradient(std::span<const double> x, const std::vector<double>& g,
                                   double t) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(free_.size()));
    accumulate(objective_, x, t, 0.0, 0.0, grad, nullptr);
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      const double inv = -1.0 / g[j];
      accumulate(terms_[j], x, inv, 0.0, 0.0, grad, nullptr);
    }
    return grad;
  }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  struct Term {
    const SmoothFunction* fn = nullptr;
    std::vector<std::size_t> zsupport;
    Eigen::MatrixXd jac;  // support(x) x zsupport
    bool identity = false;
  };

  void add_owned(FunctionPtr f) {
    owned_.push_back(f);
    terms_.push_back(make_term(*owned_.back()));
  }

  Term make_term(const SmoothFunction& f) {
    Term t;
    t.fn = &f;
    const auto& s = f.support();
    auto zpos = [&](std::size_t z) {
      auto it = std::find(t.zsupport.begin(), t.zsupport.end(), z);
      if (it != t.zsupport.end()) return static_cast<std::size_t>(it - t.zsupport.begin());
      t.zsupport.push_back(z);
      return t.zsupport.size() - 1;
    };
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (free_of_x_[s[k]] != npos) {
        rows[k].push_back({zpos(free_of_x_[s[k]]), 1.0});
      } else {
        for (const auto& [idx, c] : dependent_terms_[s[k]]->terms)
          rows[k].push_back({zpos(free_of_x_[idx]), c});
      }
    }
    t.jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.size()),
                                  static_cast<Eigen::Index>(t.zsupport.size()));
    for (std::size_t k = 0; k < s.size(); ++k)
      for (const auto& [col, c] : rows[k]) t.jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(col)) += c;
    t.identity = t.jac.rows() == t.jac.cols() && t.jac.isIdentity(0.0);
    return t;
  }

  // grad += gscale * grad_z(term);  hess += oscale * gg^T + hscale * hess_z(term)
  void accumulate(const Term& t, std::span<const double> x, double gscale, double oscale,
                  double hscale, Eigen::VectorXd& grad, Eigen::MatrixXd* hess) {
    const std::size_t p = t.fn->support().size();
    std::span<double> gb(grad_buf_.data(), p);
    std::span<double> hb = hess ? std::span<double>(hess_buf_.data(), p * p) : std::span<double>{};
    t.fn->evaluate(x, gb, hb);
    const std::size_t q = t.zsupport.size();
    if (t.identity) {
      for (std::size_t a = 0; a < q; ++a) grad(static_cast<Eigen::Index>(t.zsupport[a])) += gscale * gb[a];
      if (hess) {
        for (std::size_t a = 0; a < q; ++a)
          for (std::size_t b = 0; b < q; ++b)
            (*hess)(static_cast<Eigen::Index>(t.zsupport[a]), static_cast<Eigen::Index>(t.zsupport[b])) +=
                oscale * gb[a] * gb[b] + hscale * hb[a * p + b];
      }
      return;
    }
    Eigen::Map<const Eigen::VectorXd> gx(gb.data(), static_cast<Eigen::Index>(p));
    const Eigen::VectorXd gz = t.jac.transpose() * gx;
    for (std::size_t a = 0; a < q; ++a) grad(static_cast<Eigen::Index>(t.zsupport[a])) += gscale * gz(static_cast<Eigen::Index>(a));
    if (hess) {
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> hx(
          hb.data(), static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
      const Eigen::MatrixXd hz = t.jac.transpose() * hx * t.jac;
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b)
          (*hess)(static_cast<Eigen::Index>(t.zsupport[a]), static_cast<Eigen::Index>(t.zsupport[b])) +=
              oscale * gz(static_cast<Eigen::Index>(a)) * gz(static_cast<Eigen::Index>(b)) +
              hscale * hz(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }

  const ConvexProgram& program_;
  std::vector<std::size_t> free_;
  std::vector<std::size_t> free_of_x_;
  std::vector<const LinkedCoordinate*> dependent_terms_;
  Term objective_;
  std::vector<Term> terms_;
  std::vector<FunctionPtr> owned_;
  std::vector<double> grad_buf_, hess_buf_;
};

/// Solves H d = -g on the Jacobi-equilibrated system, regularizing if needed.
inline bool newton_direction(const Eigen::MatrixXd& H, const Eigen::VectorXd& g, Eigen::VectorXd& d) {
  const Eigen::Index n = H.rows();
  Eigen::VectorXd scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = H(i, i);
    scale(i) = (std::isfinite(h) && h > 0.0) ? 1.0 / std::sqrt(h) : 1.0;
  }
  Eigen::MatrixXd Hs = scale.asDiagonal() * H * scale.asDiagonal();
  const Eigen::VectorXd rhs = -(scale.asDiagonal() * g);
  double reg = 0.0;
  for (int attempt = 0; attempt < 10; ++attempt) {
    Eigen::LLT<Eigen::MatrixXd> llt;
    if (reg > 0.0) {
      Eigen::MatrixXd R = Hs;
      R.diagonal().array() += reg;
      llt.compute(R);
    } else {
      llt.compute(Hs);
    }
    if (llt.info() == Eigen::Success) {
      d = scale.asDiagonal() * llt.solve(rhs);
      if (d.allFinite()) return true;
    }
    reg = reg == 0.0 ? 1e-10 : reg * 100.0;
  }
  return false;
}

struct CenteringOutcome {
  bool converged = false;
  bool stopped = false;  // stop predicate fired
  std::size_t steps = 0;
  std::vector<double> decrements;
};

/// Damped Newton on phi_t starting from z (strictly feasible); z is updated in place.
inline CenteringOutcome center(BarrierModel& m, Eigen::VectorXd& z, double t,
                               const SolveOptions& o,
                               const std::function<bool(std::span<const double>)>& stop) {
  CenteringOutcome out;
  std::vector<double> x, x_trial, g, g_trial;
  m.expand(z, x);
  if (!m.values(x, g)) throw SolverError("centering started at an infeasible point", x);
  const bool affine = m.objective_affine();
  double f = m.objective(x);
  Eigen::VectorXd grad, dir;
  Eigen::MatrixXd hess;
  for (;;) {
    if (stop && stop(x)) {
      out.stopped = true;
      return out;
    }
    if (out.steps >= o.max_newton) return out;
    m.derivatives(x, g, t, grad, hess);
    if (!newton_direction(hess, grad, dir)) throw SolverError("Newton system could not be factored", x);
    const double slope = grad.dot(dir);  // = -lambda^2
    const double lambda2 = -slope;
    out.decrements.push_back(lambda2);
    if (!(lambda2 >= 0.0) || lambda2 / 2.0 <= o.newton_tol) {
      out.converged = true;
      return out;
    }
    const double fslope = affine ? m.objective_gradient(x).dot(dir) : 0.0;
    double step = 1.0;
    bool accepted = false;
    while (step > 1e-16) {
      m.expand(z + step * dir, x_trial);
      if (m.values(x_trial, g_trial)) {
        const double f_trial = m.objective(x_trial);
        const double df = affine ? step * fslope : f_trial - f;
        double dlog = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) dlog += std::log(g_trial[j] / g[j]);
        const double dphi = t * df - dlog;
        if (dphi <= o.backtrack_alpha * step * slope) {
          accepted = true;
          f = f_trial;
          break;
        }
      }
      step *= o.backtrack_beta;
    }
    if (!accepted) {
      // Armijo cannot be resolved in floating point once the decrement is tiny.
      if (lambda2 / 2.0 <= 1e-6) {
        out.converged = true;
        return out;
      }
      std::ostringstream os;
      os << "line search failed (t = " << t << ", lambda^2 = " << lambda2 << ")";
      throw SolverError(os.str(), x);
    }
    z += step * dir;
    x.swap(x_trial);
    g.swap(g_trial);
    ++out.steps;
  }
}

/// phi_t-gradient based KKT residual: || grad f + sum_j lambda_j grad g_j || with lambda_j = 1/(-t g_j).
inline double kkt_residual(BarrierModel& m, const Eigen::VectorXd& z, double t) {
  std::vector<double> x, g;
  m.expand(z, x);
  if (!m.values(x, g)) return std::numeric_limits<double>::infinity();
  return m.barrier_gradient(x, g, t).norm() / t;
}

/// g(x) - s, for phase I.
class ShiftedFunction final : public SmoothFunction {
 public:
  ShiftedFunction(FunctionPtr base, std::size_t shift_index)
      : SmoothFunction(base->family(), with_index(base->support(), shift_index)),
        base_(std::move(base)),
        shift_(shift_index) {}

  double evaluate(std::span<const double> x, std::span<double> grad,
                  std::span<double> hess) const override {
    const std::size_t p = base_->support().size();
    const std::size_t q = p + 1;
    std::vector<double> bg(grad.empty() ? 0 : p), bh(hess.empty() ? 0 : p * p);
    const double v = base_->evaluate(x, bg, bh);
    if (!grad.empty()) {
      for (std::size_t k = 0; k < p; ++k) grad[k] = bg[k];
      grad[p] = -1.0;
    }
    if (!hess.empty()) {
      for (auto& h : hess) h = 0.0;
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) hess[a * q + b] = bh[a * p + b];
    }
    return v - x[shift_];
  }

  bool is_affine() const override { return base_->is_affine(); }

 private:
  static std::vector<std::size_t> with_index(std::vector<std::size_t> s, std::size_t i) {
    s.push_back(i);
    return s;
  }
  FunctionPtr base_;
  std::size_t shift_;
};

inline double phase_one_margin(double g) { return 1e-8 * (1.0 + std::abs(g)); }

}  // namespace detail

/// Largest-violation check with the handoff margin used by phase I.
inline bool strictly_feasible_with_margin(const ConvexProgram& p, std::span<const double> x) {
  for (const auto& g : p.inequalities()) {
    const double v = g->value(x);
    if (!std::isfinite(v) || v > -detail::phase_one_margin(v)) return false;
  }
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    if (std::isfinite(p.lower()[i]) && !(x[i] > p.lower()[i])) return false;
    if (std::isfinite(p.upper()[i]) && !(x[i] < p.upper()[i])) return false;
  }
  return p.max_violation(x) < 0.0;
}

inline SolveResult solve(const ConvexProgram& program, std::span<const double> x0,
                         const SolveOptions& opts = {}) {
  opts.validate();
  if (x0.size() != program.dimension()) throw std::invalid_argument("solve: x0 has wrong dimension");
  std::vector<double> start(x0.begin(), x0.end());
  program.apply_links(start);
  if (!program.strictly_feasible(start))
    throw SolverError("solve: x0 is not strictly feasible", start);

  detail::BarrierModel model(program);
  Eigen::VectorXd z = model.restrict(start);
  const double m = static_cast<double>(model.terms());

  SolveResult res;
  double t = opts.t0;
  std::vector<double> x;
  for (std::size_t outer = 1; outer <= opts.max_outer; ++outer) {
    auto c = detail::center(model, z, t, opts, nullptr);
    res.newton_iters += c.steps;
    res.outer_iters = outer;
    model.expand(z, x);
    const double f = model.objective(x);
    res.objective_trace.push_back(f);
    res.newton_decrements.push_back(std::move(c.decrements));
    res.kkt_residual = detail::kkt_residual(model, z, t);
    res.iterates.push_back({outer, t, f, c.steps, res.kkt_residual});
    res.gap_bound = m / t;
    if (!c.converged) {
      res.status = SolveStatus::max_iters;
      break;
    }
    if (res.gap_bound <= opts.duality_gap_tol) {
      res.status = SolveStatus::optimal;
      break;
    }
    t *= opts.barrier_mu;
  }
  model.expand(z, x);
  res.x = x;
  res.objective = model.objective(x);
  return res;
}

/// Finds a strictly feasible point by minimizing s subject to g_j(x) <= s,
/// keeping the bounds of free coordinates as hard barrier terms. Starts from
/// `hint` (clipped into the interior of the bounds) or the box midpoint.
inline PhaseOneResult phase_one(const ConvexProgram& program,
                                std::span<const double> hint = {},
                                const SolveOptions& opts = {}) {
  opts.validate();
  const std::size_t n = program.dimension();
  std::vector<double> x0(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = program.lower()[i], hi = program.upper()[i];
    if (!hint.empty()) {
      double v = hint[i];
      if (std::isfinite(lo) && std::isfinite(hi)) {
        const double pad = 1e-6 * (hi - lo);
        v = std::clamp(v, lo + pad, hi - pad);
      } else if (std::isfinite(lo)) {
        v = std::max(v, lo + 1e-6 * (1.0 + std::abs(lo)));
      } else if (std::isfinite(hi)) {
        v = std::min(v, hi - 1e-6 * (1.0 + std::abs(hi)));
      }
      x0[i] = v;
    } else if (std::isfinite(lo) && std::isfinite(hi)) {
      x0[i] = 0.5 * (lo + hi);
    } else if (std::isfinite(lo)) {
      x0[i] = lo + 1.0;
    } else if (std::isfinite(hi)) {
      x0[i] = hi - 1.0;
    }
  }
  program.apply_links(x0);

  PhaseOneResult res;
  if (strictly_feasible_with_margin(program, x0)) {
    res.status = SolveStatus::optimal;
    res.x = x0;
    res.max_constraint = program.max_violation(x0);
    return res;
  }

  // Augmented program over (x, s).
  const std::size_t s_index = n;
  ConvexProgram aug(n + 1);
  aug.set_objective(make_affine("phase_one", {s_index}, {1.0}, 0.0));
  for (const auto& g : program.inequalities())
    aug.add_inequality(std::make_shared<detail::ShiftedFunction>(g, s_index));
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = program.lower()[i], hi = program.upper()[i];
    if (!program.is_dependent(i)) {
      if (std::isfinite(lo) || std::isfinite(hi)) {
        aug.set_bounds(i, lo, hi);
      }
      continue;
    }
    if (std::isfinite(lo))
      aug.add_inequality(std::make_shared<detail::ShiftedFunction>(make_affine("bound", {i}, {-1.0}, lo), s_index));
    if (std::isfinite(hi))
      aug.add_inequality(std::make_shared<detail::ShiftedFunction>(make_affine("bound", {i}, {1.0}, -hi), s_index));
  }
  for (const auto& l : program.links()) aug.link(l);

  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& g : program.inequalities()) {
    const double v = g->value(x0);
    if (!std::isfinite(v))
      throw ProgramError("phase_one: start point lies outside the domain of " + g->family());
    worst = std::max(worst, v);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!program.is_dependent(i)) continue;
    if (std::isfinite(program.lower()[i])) worst = std::max(worst, program.lower()[i] - x0[i]);
    if (std::isfinite(program.upper()[i])) worst = std::max(worst, x0[i] - program.upper()[i]);
  }
  std::vector<double> xa(x0);
  xa.push_back(worst + 1.0);

  detail::BarrierModel model(aug);
  Eigen::VectorXd z = model.restrict(xa);
  const double m = static_cast<double>(model.terms());
  auto found = [&](std::span<const double> x) {
    return strictly_feasible_with_margin(program, x.first(n));
  };

  double t = opts.t0;
  std::vector<double> x;
  for (std::size_t outer = 1; outer <= opts.max_outer; ++outer) {
    auto c = detail::center(model, z, t, opts, found);
    res.newton_iters += c.steps;
    model.expand(z, x);
    res.max_constraint = x[s_index];
    if (c.stopped) {
      res.status = SolveStatus::optimal;
      res.x.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
      res.max_constraint = program.max_violation(res.x);
      return res;
    }
    if (!c.converged) {
      res.status = SolveStatus::max_iters;
      return res;
    }
    // min s >= s(t) - m/t at a centered point.
    if (x[s_index] - m / t > 0.0 || (m / t <= opts.duality_gap_tol && x[s_index] >= 0.0)) {
      res.status = SolveStatus::infeasible;
      res.x.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
      return res;
    }
    if (m / t <= opts.duality_gap_tol) {
      // Optimum of s is in (-margin, 0): no point with the required margin.
      res.status = SolveStatus::infeasible;
      res.x.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
      return res;
    }
    t *= opts.barrier_mu;
  }
  res.status = SolveStatus::max_iters;
  return res;
}

struct GradientReport {
  double max_rel_error = 0.0;
  std::string worst_family;
  std::map<std::string, double> by_family;
};

namespace detail {

inline void record(GradientReport& r, const std::string& family, double err) {
  auto& slot = r.by_family[family];
  slot = std::max(slot, err);
  if (err > r.max_rel_error || r.worst_family.empty()) {
    if (err >= r.max_rel_error) {
      r.max_rel_error = err;
      r.worst_family = family;
    }
  }
}

inline double rel_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic));
}

}  // namespace detail

/// Central finite differences (h = 1e-6 (1 + |x_i|)) against the analytic
/// gradients of the objective and of every inequality, and (h = 1e-6 max(|x_i|, 1e-3))
/// of the barrier composite t f(x) - sum log(-g_j(x)) (bounds included). Errors are
/// |analytic - numeric| / max(1, |analytic|).
inline GradientReport check_gradients(const ConvexProgram& program, std::span<const double> x,
                                      double barrier_t = 1.0) {
  GradientReport rep;
  std::vector<double> xs(x.begin(), x.end());
  auto check_fn = [&](const SmoothFunction& f) {
    const std::size_t p = f.support().size();
    std::vector<double> grad(p), hess(p * p);
    f.evaluate(xs, grad, hess);
    for (std::size_t k = 0; k < p; ++k) {
      const std::size_t i = f.support()[k];
      const double h = 1e-6 * (1.0 + std::abs(xs[i]));
      const double keep = xs[i];
      xs[i] = keep + h;
      const double fp = f.value(xs);
      xs[i] = keep - h;
      const double fm = f.value(xs);
      xs[i] = keep;
      detail::record(rep, f.family(), detail::rel_error(grad[k], (fp - fm) / (2.0 * h)));
    }
  };
  check_fn(program.objective());
  for (const auto& g : program.inequalities()) check_fn(*g);

  // Barrier composite over every coordinate of x.
  const std::size_t n = program.dimension();
  auto composite = [&](std::span<const double> pt) {
    double v = barrier_t * program.objective().value(pt);
    for (const auto& g : program.inequalities()) v -= std::log(-g->value(pt));
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isfinite(program.lower()[i])) v -= std::log(pt[i] - program.lower()[i]);
      if (std::isfinite(program.upper()[i])) v -= std::log(program.upper()[i] - pt[i]);
    }
    return v;
  };
  std::vector<double> analytic(n, 0.0);
  {
    const auto& f = program.objective();
    std::vector<double> grad(f.support().size());
    f.evaluate(xs, grad, {});
    for (std::size_t k = 0; k < grad.size(); ++k) analytic[f.support()[k]] += barrier_t * grad[k];
  }
  for (const auto& g : program.inequalities()) {
    std::vector<double> grad(g->support().size());
    const double v = g->evaluate(xs, grad, {});
    for (std::size_t k = 0; k < grad.size(); ++k) analytic[g->support()[k]] += grad[k] / (-v);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isfinite(program.lower()[i])) analytic[i] -= 1.0 / (xs[i] - program.lower()[i]);
    if (std::isfinite(program.upper()[i])) analytic[i] += 1.0 / (program.upper()[i] - xs[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double h = 1e-6 * std::max(std::abs(xs[i]), 1e-3);
    const double keep = xs[i];
    xs[i] = keep + h;
    const double fp = composite(xs);
    xs[i] = keep - h;
    const double fm = composite(xs);
    xs[i] = keep;
    detail::record(rep, "barrier", detail::rel_error(analytic[i], (fp - fm) / (2.0 * h)));
  }
  return rep;
}

}  // namespace aou
