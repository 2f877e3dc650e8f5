#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wtm/errors.hpp"
#include "wtm/quadrature.hpp"

namespace wtm {

/// Profile is identically zero beyond the last node.
struct ZeroTail {};

/// u(x) = c x^{-s} beyond the last node.
struct PowerDecay {
  double c = 0.0;
  double s = 1.0;
};

using TailModel = std::variant<ZeroTail, PowerDecay>;

/// First value held constant on (0, x_0).
struct ConstantHead {};

/// u(x) = u_0 + c log(x_0 / x) on (0, x_0); used for profiles with a
/// logarithmic singularity at the origin.
struct LogGrowth {
  double c = 0.0;
};

using HeadModel = std::variant<ConstantHead, LogGrowth>;

inline constexpr double kMonotoneTolerance = 1e-12;
inline constexpr double kTailContinuityTolerance = 1e-9;

/// A nonnegative function on (0, inf): linear between strictly increasing
/// positive nodes, with closed-form models below the first node and beyond
/// the last one. An empty profile is the zero function.
class RadialProfile {
public:
  RadialProfile() = default;

  RadialProfile(std::vector<double> nodes, std::vector<double> values, TailModel tail = ZeroTail{},
                HeadModel head = ConstantHead{})
      : x_(std::move(nodes)), u_(std::move(values)), tail_(tail), head_(head) {
    validate();
    monotone_ = check_nonincreasing();
  }

  template <class F>
  static RadialProfile sample(F&& f, std::span<const double> nodes, TailModel tail = ZeroTail{},
                              HeadModel head = ConstantHead{}) {
    std::vector<double> values(nodes.size());
    std::transform(nodes.begin(), nodes.end(), values.begin(), f);
    return RadialProfile(std::vector<double>(nodes.begin(), nodes.end()), std::move(values), tail, head);
  }

  /// Samples f and attaches the power tail c x^{-s} that matches the last sample.
  template <class F>
  static RadialProfile sample_with_power_tail(F&& f, std::span<const double> nodes, double s) {
    std::vector<double> values(nodes.size());
    std::transform(nodes.begin(), nodes.end(), values.begin(), f);
    const double c = values.back() * std::pow(nodes.back(), s);
    return RadialProfile(std::vector<double>(nodes.begin(), nodes.end()), std::move(values),
                         PowerDecay{c, s});
  }

  std::size_t size() const { return x_.size(); }
  bool empty() const { return x_.empty(); }
  std::span<const double> nodes() const { return x_; }
  std::span<const double> values() const { return u_; }
  const TailModel& tail() const { return tail_; }
  const HeadModel& head() const { return head_; }
  bool is_nonincreasing() const { return monotone_; }

  double front_node() const { return x_.front(); }
  double back_node() const { return x_.back(); }

  double slope(std::size_t cell) const {
    return (u_[cell + 1] - u_[cell]) / (x_[cell + 1] - x_[cell]);
  }

  double max_value() const {
    if (empty()) return 0.0;
    if (std::holds_alternative<LogGrowth>(head_) && std::get<LogGrowth>(head_).c > 0.0)
      return std::numeric_limits<double>::infinity();
    return *std::max_element(u_.begin(), u_.end());
  }

  double evaluate(double x) const {
    detail::require(x > 0.0, "evaluate: x must be positive");
    if (empty()) return 0.0;
    if (x <= x_.front()) {
      if (const auto* g = std::get_if<LogGrowth>(&head_)) return u_.front() + g->c * std::log(x_.front() / x);
      return u_.front();
    }
    if (x >= x_.back()) return x == x_.back() ? u_.back() : tail_value(x);
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double w = (x - x_[i]) / (x_[i + 1] - x_[i]);
    return u_[i] + w * (u_[i + 1] - u_[i]);
  }

  double tail_value(double x) const {
    if (const auto* p = std::get_if<PowerDecay>(&tail_)) return p->c * std::pow(x, -p->s);
    return 0.0;
  }

  /// c * u for c >= 0.
  RadialProfile scaled(double c) const {
    detail::require(c >= 0.0 && std::isfinite(c), "scaled: factor must be finite and nonnegative");
    if (empty()) return *this;
    std::vector<double> v(u_);
    for (double& value : v) value *= c;
    TailModel tail = tail_;
    if (auto* p = std::get_if<PowerDecay>(&tail)) p->c *= c;
    HeadModel head = head_;
    if (auto* g = std::get_if<LogGrowth>(&head)) g->c *= c;
    return RadialProfile(x_, std::move(v), tail, head);
  }

  /// Same function model on every other node (first and last always kept).
  RadialProfile coarsened() const {
    if (size() <= 2) return *this;
    std::vector<double> x;
    std::vector<double> u;
    for (std::size_t i = 0; i < size(); i += 2) {
      x.push_back(x_[i]);
      u.push_back(u_[i]);
    }
    if (x.back() != x_.back()) {
      x.push_back(x_.back());
      u.push_back(u_.back());
    }
    return RadialProfile(std::move(x), std::move(u), tail_, head_);
  }

private:
  void validate() const {
    if (x_.empty() && u_.empty()) return;
    detail::require(x_.size() == u_.size(), "profile: node and value counts differ");
    detail::require(x_.size() >= 2, "profile: at least two nodes are required");
    for (std::size_t i = 0; i < x_.size(); ++i) {
      detail::require(std::isfinite(x_[i]) && x_[i] > 0.0, "profile: nodes must be finite and positive");
      detail::require(std::isfinite(u_[i]) && u_[i] >= 0.0, "profile: values must be finite and nonnegative");
      if (i > 0) detail::require(x_[i] > x_[i - 1], "profile: nodes must be strictly increasing");
    }
    if (const auto* p = std::get_if<PowerDecay>(&tail_)) {
      detail::require(p->c >= 0.0 && p->s > 0.0, "profile: power tail needs c >= 0 and s > 0");
    }
    if (const auto* g = std::get_if<LogGrowth>(&head_)) {
      detail::require(g->c >= 0.0 && std::isfinite(g->c), "profile: log-growth coefficient must be >= 0");
    }
    const double un = u_.back();
    detail::require(std::abs(un - tail_value(x_.back())) <= kTailContinuityTolerance * std::max(1.0, un),
                    "profile: tail model is not continuous with the last value");
  }

  bool check_nonincreasing() const {
    for (std::size_t i = 1; i < u_.size(); ++i)
      if (u_[i] > u_[i - 1] + kMonotoneTolerance * std::max(1.0, u_[i - 1])) return false;
    return true;
  }

  std::vector<double> x_;
  std::vector<double> u_;
  TailModel tail_ = ZeroTail{};
  HeadModel head_ = ConstantHead{};
  bool monotone_ = true;
};

/// Integral over [lo, hi] of g(u(x)) x^l dx (unweighted by omega).
/// g must be finite on the range of u; g(0) must vanish when the integral runs
/// over an unbounded zero tail.
template <class G>
double integrate_values(const RadialProfile& u, G&& g, double l, double lo = 0.0,
                        double hi = std::numeric_limits<double>::infinity()) {
  detail::require(lo >= 0.0 && hi >= lo, "integrate_values: invalid range");
  if (u.empty()) {
    const double g0 = g(0.0);
    if (g0 == 0.0) return 0.0;
    return g0 * quad::power_integral(lo, hi, l);
  }
  const auto x = u.nodes();
  const auto v = u.values();
  double total = 0.0;

  // (0, x_0)
  if (lo < x.front()) {
    const double a = lo;
    const double b = std::min(hi, x.front());
    if (const auto* lg = std::get_if<LogGrowth>(&u.head()); lg && lg->c > 0.0) {
      // x = b e^{-tau}: the head becomes an integral over tau in [0, log(b/a)).
      const double x0 = x.front();
      const double base = v.front() + lg->c * std::log(x0 / b);
      const double tau_end = a == 0.0 ? std::numeric_limits<double>::infinity() : std::log(b / a);
      const double scale = std::pow(b, l + 1.0);
      total += quad::panels(
          [&](double tau) {
            const double gv = g(base + lg->c * tau);
            return gv == 0.0 ? 0.0 : gv * scale * std::exp(-(l + 1.0) * tau);
          },
          tau_end);
    } else {
      const double gv = g(v.front());
      if (gv != 0.0) total += gv * quad::power_integral(a, b, l);
    }
  }

  // Linear cells.
  const std::size_t n = u.size();
  std::size_t first = 0;
  if (lo > x.front()) {
    first = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), lo) - x.begin());
    first = first == 0 ? 0 : first - 1;
  }
  for (std::size_t i = first; i + 1 < n; ++i) {
    const double a = std::max(x[i], lo);
    const double b = std::min(x[i + 1], hi);
    if (x[i] >= hi) break;
    if (!(b > a)) continue;
    const double xi = x[i];
    const double ui = v[i];
    const double s = u.slope(i);
    if (s == 0.0) {
      const double gv = g(ui);
      if (gv != 0.0) total += gv * quad::power_integral(a, b, l);
      continue;
    }
    total += quad::adaptive(
        [&](double t) {
          const double ut = std::max(0.0, ui + s * (t - xi));
          return g(ut) * (l == 0.0 ? 1.0 : std::pow(t, l));
        },
        a, b);
  }

  // (x_N, inf)
  if (hi > x.back()) {
    const double a = std::max(lo, x.back());
    const double b = hi;
    if (const auto* p = std::get_if<PowerDecay>(&u.tail()); p && p->c > 0.0) {
      const double ua = p->c * std::pow(a, -p->s);
      const double scale = std::pow(a, l + 1.0);
      const double tau_end = std::isinf(b) ? b : std::log(b / a);
      total += quad::panels(
          [&](double tau) {
            const double gv = g(ua * std::exp(-p->s * tau));
            return gv == 0.0 ? 0.0 : gv * scale * std::exp((l + 1.0) * tau);
          },
          tau_end);
    } else {
      const double g0 = g(0.0);
      if (g0 != 0.0) {
        if (std::isinf(b)) throw NumericalFailure("integrand does not vanish on an unbounded zero tail");
        total += g0 * quad::power_integral(a, b, l);
      }
    }
  }
  if (!std::isfinite(total)) throw NumericalFailure("profile integral is not finite");
  return total;
}

/// Integral over [lo, hi] of |u'|^p x^m dx; exact on every linear cell.
inline double derivative_integral(const RadialProfile& u, double p, double m, double lo = 0.0,
                                  double hi = std::numeric_limits<double>::infinity()) {
  detail::require(p > 0.0, "derivative_integral: p must be positive");
  detail::require(lo >= 0.0 && hi >= lo, "derivative_integral: invalid range");
  if (u.empty()) return 0.0;
  const auto x = u.nodes();
  double total = 0.0;
  if (lo < x.front()) {
    if (const auto* lg = std::get_if<LogGrowth>(&u.head()); lg && lg->c > 0.0) {
      // |u'| = c / x on the head.
      const double b = std::min(hi, x.front());
      total += std::pow(lg->c, p) * quad::power_integral(lo, b, m - p);
    }
  }
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double a = std::max(x[i], lo);
    const double b = std::min(x[i + 1], hi);
    if (!(b > a)) continue;
    const double s = std::abs(u.slope(i));
    if (s == 0.0) continue;
    total += std::pow(s, p) * quad::power_integral(a, b, m);
  }
  if (hi > x.back()) {
    if (const auto* pd = std::get_if<PowerDecay>(&u.tail()); pd && pd->c > 0.0) {
      // |u'| = s c x^{-s-1} on the tail.
      const double a = std::max(lo, x.back());
      total += std::pow(pd->s * pd->c, p) * quad::power_integral(a, hi, m - p * (pd->s + 1.0));
    }
  }
  if (!std::isfinite(total)) throw NumericalFailure("derivative integral is not finite");
  return total;
}

} // namespace wtm
