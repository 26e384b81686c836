#pragma once

// Smooth convex programs over a flat decision vector:
//
//   minimize f(x)  subject to  g_j(x) <= 0,  lower <= x <= upper,
//                              x_dep = offset + sum_k c_k x_k  (linked coordinates)
//
// Each function touches a small set of coordinates (its support) and reports
// its gradient and Hessian restricted to that support.

#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aou {

class ProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;

  const std::vector<std::size_t>& support() const { return support_; }
  const std::string& family() const { return family_; }

  /// Value at x (full decision vector). When `grad` / `hess` are non-empty they
  /// receive the support-local gradient and row-major Hessian. Points outside
  /// the function's domain evaluate to a non-finite value.
  virtual double evaluate(std::span<const double> x, std::span<double> grad,
                          std::span<double> hess) const = 0;

  virtual bool is_affine() const { return false; }

  double value(std::span<const double> x) const { return evaluate(x, {}, {}); }

 protected:
  SmoothFunction(std::string family, std::vector<std::size_t> support)
      : family_(std::move(family)), support_(std::move(support)) {}

 private:
  std::string family_;
  std::vector<std::size_t> support_;
};

using FunctionPtr = std::shared_ptr<const SmoothFunction>;

class AffineFunction final : public SmoothFunction {
 public:
  AffineFunction(std::string family, std::vector<std::size_t> support, std::vector<double> coeffs,
                 double constant)
      : SmoothFunction(std::move(family), std::move(support)),
        coeffs_(std::move(coeffs)),
        constant_(constant) {
    if (coeffs_.size() != this->support().size())
      throw ProgramError("AffineFunction: support/coefficient size mismatch");
  }

  double evaluate(std::span<const double> x, std::span<double> grad,
                  std::span<double> hess) const override {
    double v = constant_;
    const auto& s = support();
    for (std::size_t k = 0; k < s.size(); ++k) v += coeffs_[k] * x[s[k]];
    if (!grad.empty())
      for (std::size_t k = 0; k < s.size(); ++k) grad[k] = coeffs_[k];
    if (!hess.empty())
      for (auto& h : hess) h = 0.0;
    return v;
  }

  bool is_affine() const override { return true; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double constant() const { return constant_; }

 private:
  std::vector<double> coeffs_;
  double constant_;
};

inline FunctionPtr make_affine(std::string family, std::vector<std::size_t> support,
                               std::vector<double> coeffs, double constant) {
  return std::make_shared<AffineFunction>(std::move(family), std::move(support),
                                          std::move(coeffs), constant);
}

/// x[dependent] = offset + sum_k terms[k].second * x[terms[k].first].
struct LinkedCoordinate {
  std::size_t dependent = 0;
  std::vector<std::pair<std::size_t, double>> terms;
  double offset = 0.0;
};

class ConvexProgram {
 public:
  explicit ConvexProgram(std::size_t dimension)
      : lower_(dimension, -std::numeric_limits<double>::infinity()),
        upper_(dimension, std::numeric_limits<double>::infinity()),
        dependent_(dimension, false) {}

  std::size_t dimension() const { return lower_.size(); }

  void set_objective(FunctionPtr f) {
    check_support(*f);
    objective_ = std::move(f);
  }

  void add_inequality(FunctionPtr g) {
    check_support(*g);
    inequalities_.push_back(std::move(g));
  }

  void set_bounds(std::size_t i, double lo, double hi) {
    if (i >= dimension()) throw ProgramError("set_bounds: index out of range");
    if (!(lo < hi)) throw ProgramError("set_bounds: empty interval at " + std::to_string(i));
    lower_[i] = lo;
    upper_[i] = hi;
  }

  void link(LinkedCoordinate l) {
    if (l.dependent >= dimension()) throw ProgramError("link: index out of range");
    if (dependent_[l.dependent]) throw ProgramError("link: coordinate already linked");
    for (const auto& [idx, c] : l.terms) {
      if (idx >= dimension() || dependent_[idx] || idx == l.dependent)
        throw ProgramError("link: terms must reference free coordinates");
    }
    for (const auto& other : links_)
      for (const auto& [idx, c] : other.terms)
        if (idx == l.dependent) throw ProgramError("link: coordinate used as a free term");
    dependent_[l.dependent] = true;
    links_.push_back(std::move(l));
  }

  const SmoothFunction& objective() const {
    if (!objective_) throw ProgramError("program has no objective");
    return *objective_;
  }
  const FunctionPtr& objective_ptr() const { return objective_; }
  const std::vector<FunctionPtr>& inequalities() const { return inequalities_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<LinkedCoordinate>& links() const { return links_; }
  bool is_dependent(std::size_t i) const { return dependent_[i]; }

  /// Number of inequality terms seen by a barrier (inequalities + finite bounds).
  std::size_t barrier_terms() const {
    std::size_t m = inequalities_.size();
    for (std::size_t i = 0; i < dimension(); ++i)
      m += std::isfinite(lower_[i]) + std::isfinite(upper_[i]);
    return m;
  }

  /// Overwrites linked coordinates from the free ones.
  void apply_links(std::span<double> x) const {
    for (const auto& l : links_) {
      double v = l.offset;
      for (const auto& [idx, c] : l.terms) v += c * x[idx];
      x[l.dependent] = v;
    }
  }

  double objective_value(std::span<const double> x) const { return objective().value(x); }

  /// Largest of g_j(x), lower - x, x - upper and |link residual|. Negative iff strictly feasible
  /// (links exact).
  double max_violation(std::span<const double> x) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& g : inequalities_) {
      const double v = g->value(x);
      if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, v);
    }
    for (std::size_t i = 0; i < dimension(); ++i) {
      if (std::isfinite(lower_[i])) worst = std::max(worst, lower_[i] - x[i]);
      if (std::isfinite(upper_[i])) worst = std::max(worst, x[i] - upper_[i]);
    }
    for (const auto& l : links_) {
      double v = l.offset;
      for (const auto& [idx, c] : l.terms) v += c * x[idx];
      const double r = std::abs(v - x[l.dependent]);
      if (r > 1e-12 * (1.0 + std::abs(v))) worst = std::max(worst, r);
    }
    return worst;
  }

  bool strictly_feasible(std::span<const double> x) const { return max_violation(x) < 0.0; }

 private:
  void check_support(const SmoothFunction& f) const {
    for (auto i : f.support())
      if (i >= dimension()) throw ProgramError(f.family() + ": support index out of range");
  }

  FunctionPtr objective_;
  std::vector<FunctionPtr> inequalities_;
  std::vector<double> lower_, upper_;
  std::vector<LinkedCoordinate> links_;
  std::vector<bool> dependent_;
};

}  // namespace aou
