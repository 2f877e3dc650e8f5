#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "wtm/errors.hpp"
#include "wtm/quadrature.hpp"
#include "wtm/radial_profile.hpp"

namespace wtm {

inline double gamma_fn(double x) {
  detail::require(x > 0.0 && std::isfinite(x), "gamma_fn: argument must be positive");
  return std::tgamma(x);
}

/// omega_l = 2 pi^{(1+l)/2} / Gamma((1+l)/2).
inline double omega(double l) {
  detail::require(l >= 0.0 && std::isfinite(l), "omega: l must be nonnegative");
  const double h = 0.5 * (1.0 + l);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

/// Density omega_l x^l (normalized) or x^l (unnormalized) on (0, inf).
struct WeightedMeasure {
  double l = 0.0;
  bool normalized = true;

  WeightedMeasure() = default;
  WeightedMeasure(double exponent, bool is_normalized) : l(exponent), normalized(is_normalized) {
    detail::require(l >= 0.0 && std::isfinite(l), "WeightedMeasure: l must be nonnegative");
  }

  double constant() const { return normalized ? omega(l) : 1.0; }
  double density(double x) const { return constant() * std::pow(x, l); }
};

/// Strictly increasing positive nodes; integrals over the grid cover
/// (0, tail_cut] with the first sample held constant on (0, x_0).
class QuadratureGrid {
public:
  explicit QuadratureGrid(std::vector<double> nodes) : x_(std::move(nodes)) {
    detail::require(x_.size() >= 2, "QuadratureGrid: at least two nodes are required");
    for (std::size_t i = 0; i < x_.size(); ++i) {
      detail::require(std::isfinite(x_[i]) && x_[i] > 0.0, "QuadratureGrid: nodes must be finite and positive");
      if (i > 0) detail::require(x_[i] > x_[i - 1], "QuadratureGrid: nodes must be strictly increasing");
    }
  }

  static QuadratureGrid geometric(double x_min = 1e-6, double x_max = 1e3, std::size_t n = 4096) {
    detail::require(x_min > 0.0 && x_max > x_min && n >= 2, "QuadratureGrid::geometric: bad range");
    std::vector<double> x(n);
    const double step = std::log(x_max / x_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) x[i] = x_min * std::exp(step * static_cast<double>(i));
    x.back() = x_max;
    return QuadratureGrid(std::move(x));
  }

  static QuadratureGrid uniform(double a, double b, std::size_t n) {
    detail::require(a > 0.0 && b > a && n >= 2, "QuadratureGrid::uniform: bad range");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    x.back() = b;
    return QuadratureGrid(std::move(x));
  }

  std::span<const double> nodes() const { return x_; }
  std::size_t size() const { return x_.size(); }
  double tail_cut() const { return x_.back(); }

  template <class F>
  std::vector<double> sample(F&& f) const {
    std::vector<double> v(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) v[i] = f(x_[i]);
    return v;
  }

private:
  std::vector<double> x_;
};

struct IntegralEstimate {
  double value = 0.0;
  double err_est = 0.0;
};

namespace detail {

// Linear interpolant of the samples integrated against x^l, plus the head and tail.
inline double weighted_sum(std::span<const double> x, std::span<const double> f, double l, const TailModel& tail) {
  double total = f.front() * quad::power_integral(0.0, x.front(), l);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i];
    const double b = x[i + 1];
    const double fa = f[i];
    const double slope = (f[i + 1] - fa) / (b - a);
    if (slope == 0.0) {
      total += fa * quad::power_integral(a, b, l);
      continue;
    }
    total += quad::adaptive([&](double t) { return (fa + slope * (t - a)) * (l == 0.0 ? 1.0 : std::pow(t, l)); },
                            a, b);
  }
  if (const auto* p = std::get_if<PowerDecay>(&tail); p && p->c > 0.0)
    total += p->c * quad::power_integral(x.back(), std::numeric_limits<double>::infinity(), l - p->s);
  return total;
}

} // namespace detail

/// Composite weighted-trapezoid integral of sampled f against the measure.
/// err_est compares against the same rule on every other node.
inline IntegralEstimate weighted_integral(const QuadratureGrid& grid, std::span<const double> values,
                                          const WeightedMeasure& m, const TailModel& tail = ZeroTail{}) {
  detail::require(values.size() == grid.size(), "weighted_integral: sample count differs from grid size");
  for (double v : values)
    if (!std::isfinite(v)) throw NumericalFailure("weighted_integral: non-finite sample");
  const auto x = grid.nodes();
  const double fine = detail::weighted_sum(x, values, m.l, tail);

  std::vector<double> xc;
  std::vector<double> fc;
  for (std::size_t i = 0; i < x.size(); i += 2) {
    xc.push_back(x[i]);
    fc.push_back(values[i]);
  }
  if (xc.back() != x.back()) {
    xc.push_back(x.back());
    fc.push_back(values.back());
  }
  const double coarse = detail::weighted_sum(xc, fc, m.l, tail);
  const double c = m.constant();
  const IntegralEstimate out{c * fine, c * std::abs(fine - coarse)};
  if (!std::isfinite(out.value)) throw NumericalFailure("weighted_integral: result is not finite");
  return out;
}

/// ||u||^p in L^p_theta.
inline double lp_norm_pow(const RadialProfile& u, double p, double theta) {
  detail::require(p >= 1.0, "lp_norm: p must be at least 1");
  detail::require(theta >= 0.0, "lp_norm: theta must be nonnegative");
  if (u.empty()) return 0.0;
  return omega(theta) * integrate_values(u, [p](double v) { return std::pow(v, p); }, theta);
}

inline double lp_norm(const RadialProfile& u, double p, double theta) {
  return std::pow(lp_norm_pow(u, p, theta), 1.0 / p);
}

/// ||u'||^p in L^p_alpha.
inline double derivative_norm_pow(const RadialProfile& u, double p, double alpha) {
  detail::require(p >= 1.0, "derivative_norm: p must be at least 1");
  detail::require(alpha >= 0.0, "derivative_norm: alpha must be nonnegative");
  if (u.empty()) return 0.0;
  return omega(alpha) * derivative_integral(u, p, alpha);
}

inline double derivative_norm(const RadialProfile& u, double p, double alpha) {
  return std::pow(derivative_norm_pow(u, p, alpha), 1.0 / p);
}

inline double sobolev_norm_pow(const RadialProfile& u, double p, double alpha, double theta) {
  return derivative_norm_pow(u, p, alpha) + lp_norm_pow(u, p, theta);
}

/// (||u'||^p_{L^p_alpha} + ||u||^p_{L^p_theta})^{1/p}
inline double sobolev_norm(const RadialProfile& u, double p, double alpha, double theta) {
  return std::pow(sobolev_norm_pow(u, p, alpha, theta), 1.0 / p);
}

/// Norm together with the change seen when the profile is coarsened to every other node.
template <class Norm>
IntegralEstimate with_grid_error(const RadialProfile& u, Norm&& norm) {
  const double fine = norm(u);
  const double coarse = norm(u.coarsened());
  return {fine, std::abs(fine - coarse)};
}

} // namespace wtm
