#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "wtm/errors.hpp"
#include "wtm/measures.hpp"
#include "wtm/radial_profile.hpp"

namespace wtm {

/// mu_{alpha,theta} = (1+theta) omega_alpha^{1/alpha}
inline double tm_threshold(double alpha, double theta) {
  detail::require(alpha > 0.0, "tm_threshold: alpha must be positive");
  detail::require(theta >= 0.0, "tm_threshold: theta must be nonnegative");
  return (1.0 + theta) * std::pow(omega(alpha), 1.0 / alpha);
}

/// Exponents (p, alpha, theta) and the functional parameter mu.
struct WeightParams {
  double p = 2.0;
  double alpha = 1.0;
  double theta = 0.0;
  double mu = 1.0;

  WeightParams() = default;
  WeightParams(double p_, double alpha_, double theta_, double mu_ = 1.0) : p(p_), alpha(alpha_), theta(theta_), mu(mu_) {
    detail::require(std::isfinite(p) && p >= 2.0, "WeightParams: p must be at least 2");
    detail::require(std::isfinite(alpha) && alpha >= 0.0, "WeightParams: alpha must be nonnegative");
    detail::require(std::isfinite(theta) && theta >= 0.0, "WeightParams: theta must be nonnegative");
    detail::require(std::isfinite(mu) && mu > 0.0, "WeightParams: mu must be positive");
  }

  /// Trudinger-Moser parameters tie the derivative weight to p: alpha = p - 1.
  static WeightParams tm(double p, double theta, double mu = 1.0) { return {p, p - 1.0, theta, mu}; }

  bool tm_mode() const { return alpha == p - 1.0; }
  bool has_p_star() const { return alpha > p - 1.0; }

  double mu_threshold() const { return tm_threshold(alpha, theta); }

  /// p(1+theta)/(alpha-(p-1)), defined only when alpha > p-1.
  double p_star() const {
    detail::require(has_p_star(), "p_star: requires alpha > p - 1");
    return p * (1.0 + theta) / (alpha - (p - 1.0));
  }

  void require_tm(const char* where) const {
    detail::require(tm_mode(), std::string(where) + ": requires alpha = p - 1");
  }
};

/// Right side of the pointwise estimate |u(x)|^p <= p omega_theta^{-(p-1)/p} omega_alpha^{-1/p}
/// x^{-((p-1)theta+alpha)/p} ||u||^{p-1} ||u'||.
inline double pointwise_bound(double u_norm_lp, double du_norm_lp, double x, const WeightParams& wp) {
  detail::require(u_norm_lp >= 0.0 && du_norm_lp >= 0.0, "pointwise_bound: norms must be nonnegative");
  detail::require(x > 0.0, "pointwise_bound: x must be positive");
  const double p = wp.p;
  return p * std::pow(omega(wp.theta), -(p - 1.0) / p) * std::pow(omega(wp.alpha), -1.0 / p) *
         std::pow(x, -((p - 1.0) * wp.theta + wp.alpha) / p) * std::pow(u_norm_lp, p - 1.0) * du_norm_lp;
}

/// Bound for |u(x)| when u is nonincreasing: ((1+theta)/(omega_theta x^{1+theta}))^{1/p} ||u||.
inline double monotone_bound(const RadialProfile& u, double x, double p, double theta) {
  detail::require(u.is_nonincreasing(), "monotone_bound: profile must be nonincreasing");
  detail::require(x > 0.0, "monotone_bound: x must be positive");
  detail::require(p >= 1.0 && theta >= 0.0, "monotone_bound: need p >= 1 and theta >= 0");
  if (u.empty()) return 0.0;
  return std::pow((1.0 + theta) / (omega(theta) * std::pow(x, 1.0 + theta)), 1.0 / p) * lp_norm(u, p, theta);
}

/// Radius beyond which unit-ball members are expected to stay below 1.
inline double a0(const WeightParams& wp) {
  wp.require_tm("a0");
  const double p = wp.p;
  const double base = p / (std::pow(omega(wp.theta), p / (p - 1.0)) * std::pow(omega(wp.alpha), 1.0 / p));
  return std::pow(base, p / ((p - 1.0) * (1.0 + wp.theta)));
}

/// x -> t^gamma u(t^sigma x); nodes move to x_i t^{-sigma}.
inline RadialProfile dilate(const RadialProfile& u, double t, double gamma, double sigma) {
  detail::require(t > 0.0 && std::isfinite(t), "dilate: t must be positive");
  if (u.empty()) return u;
  const double amp = std::pow(t, gamma);
  const double shrink = std::pow(t, -sigma);
  std::vector<double> x(u.nodes().begin(), u.nodes().end());
  std::vector<double> v(u.values().begin(), u.values().end());
  for (double& xi : x) xi *= shrink;
  for (double& vi : v) vi *= amp;
  TailModel tail = u.tail();
  if (auto* pd = std::get_if<PowerDecay>(&tail)) {
    pd->c *= std::pow(t, gamma - sigma * pd->s);
  }
  HeadModel head = u.head();
  if (auto* lg = std::get_if<LogGrowth>(&head)) lg->c *= amp;
  return RadialProfile(std::move(x), std::move(v), tail, head);
}

/// u evaluated at the given nodes. With zero_end the last value is forced to 0 and
/// the result carries a zero tail; otherwise the tail is fitted as a power law of exponent tail_s.
inline RadialProfile resample(const RadialProfile& u, std::span<const double> nodes, bool zero_end = true,
                              double tail_s = 1.0) {
  std::vector<double> x(nodes.begin(), nodes.end());
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = u.evaluate(x[i]);
  if (zero_end) {
    v.back() = 0.0;
    return RadialProfile(std::move(x), std::move(v), ZeroTail{}, ConstantHead{});
  }
  const double c = v.back() * std::pow(x.back(), tail_s);
  return RadialProfile(std::move(x), std::move(v), PowerDecay{c, tail_s}, ConstantHead{});
}

/// Piecewise-linear function of t >= 0 with nodes starting at t = 0 and a
/// linear continuation of slope end_slope beyond the last node.
struct LogProfile {
  std::vector<double> t;
  std::vector<double> w;
  double end_slope = 0.0;

  void validate() const {
    detail::require(t.size() == w.size() && t.size() >= 2, "LogProfile: need matching nodes and values");
    detail::require(t.front() == 0.0, "LogProfile: first node must be t = 0");
    for (std::size_t i = 1; i < t.size(); ++i)
      detail::require(t[i] > t[i - 1] && std::isfinite(t[i]), "LogProfile: nodes must be strictly increasing");
    for (double v : w) detail::require(std::isfinite(v), "LogProfile: values must be finite");
    detail::require(std::isfinite(end_slope) && end_slope >= 0.0, "LogProfile: end slope must be >= 0");
  }

  double evaluate(double s) const {
    detail::require(s >= 0.0, "LogProfile: t must be nonnegative");
    if (s >= t.back()) return w.back() + end_slope * (s - t.back());
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
    return w[i] + (w[i + 1] - w[i]) * (s - t[i]) / (t[i + 1] - t[i]);
  }

  /// Integral of |w'|^p over (0, inf), exact per cell.
  double dirichlet(double p) const {
    if (end_slope > 0.0) return std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
      total += std::pow(std::abs(w[i + 1] - w[i]) / (t[i + 1] - t[i]), p) * (t[i + 1] - t[i]);
    return total;
  }

  /// Integral of |w|^p e^{-t} over (0, inf).
  double weighted_lp(double p) const {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      const double a = t[i];
      const double b = t[i + 1];
      const double wa = w[i];
      const double s = (w[i + 1] - wa) / (b - a);
      total += quad::adaptive([&](double r) { return std::pow(std::abs(wa + s * (r - a)), p) * std::exp(-r); }, a, b);
    }
    const double tn = t.back();
    const double wn = w.back();
    if (end_slope == 0.0) {
      total += std::pow(std::abs(wn), p) * std::exp(-tn);
    } else {
      total += quad::panels([&](double r) { return std::pow(std::abs(wn + end_slope * r), p) * std::exp(-tn - r); });
    }
    return total;
  }
};

/// C = omega_alpha^{1/(alpha+1)} (1+theta)^{alpha/(alpha+1)}, the amplitude of the log change of variables.
inline double log_transform_constant(const WeightParams& wp) {
  return std::pow(omega(wp.alpha), 1.0 / (wp.alpha + 1.0)) * std::pow(1.0 + wp.theta, wp.alpha / (wp.alpha + 1.0));
}

/// w(t) = C u(R e^{-t/(1+theta)}) sampled at the images of the nodes of u inside (0, R].
inline LogProfile log_transform(const RadialProfile& u, double R, const WeightParams& wp) {
  wp.require_tm("log_transform");
  detail::require(R > 0.0 && std::isfinite(R), "log_transform: R must be positive");
  const double C = log_transform_constant(wp);
  const double k = 1.0 + wp.theta;
  LogProfile out;
  if (u.empty()) {
    out.t = {0.0, 1.0};
    out.w = {0.0, 0.0};
    return out;
  }
  detail::require(std::holds_alternative<ZeroTail>(u.tail()), "log_transform: profile must vanish beyond R");
  detail::require(u.back_node() <= R * (1.0 + 1e-12), "log_transform: profile support exceeds R");
  detail::require(u.evaluate(R) <= kTailContinuityTolerance * std::max(1.0, u.max_value()),
                  "log_transform: profile must vanish at R");
  const auto x = u.nodes();
  const auto v = u.values();
  out.t.push_back(0.0);
  out.w.push_back(0.0);
  for (std::size_t i = x.size(); i-- > 0;) {
    if (x[i] >= R) continue;
    const double ti = k * std::log(R / x[i]);
    if (ti <= out.t.back()) continue;
    out.t.push_back(ti);
    out.w.push_back(C * v[i]);
  }
  if (out.t.size() < 2) {
    out.t.push_back(1.0);
    out.w.push_back(0.0);
  }
  if (const auto* lg = std::get_if<LogGrowth>(&u.head())) out.end_slope = C * lg->c / k;
  return out;
}

/// u(x) = w((1+theta) log(R/x)) / C on (0, R), zero beyond. Cells of w wider than
/// max_step (in t) are split so the result stays close to the exact inverse.
inline RadialProfile inverse_log_transform(const LogProfile& w, double R, const WeightParams& wp,
                                           double max_step = 0.0) {
  wp.require_tm("inverse_log_transform");
  detail::require(R > 0.0 && std::isfinite(R), "inverse_log_transform: R must be positive");
  w.validate();
  const double C = log_transform_constant(wp);
  const double k = 1.0 + wp.theta;
  std::vector<double> ts;
  std::vector<double> ws;
  for (std::size_t i = 0; i + 1 < w.t.size(); ++i) {
    const double a = w.t[i];
    const double b = w.t[i + 1];
    const std::size_t pieces =
        max_step > 0.0 ? static_cast<std::size_t>(std::ceil((b - a) / max_step)) : std::size_t{1};
    for (std::size_t m = 0; m < pieces; ++m) {
      const double s = a + (b - a) * static_cast<double>(m) / static_cast<double>(pieces);
      ts.push_back(s);
      ws.push_back(w.w[i] + (w.w[i + 1] - w.w[i]) * static_cast<double>(m) / static_cast<double>(pieces));
    }
  }
  ts.push_back(w.t.back());
  ws.push_back(w.w.back());

  const std::size_t n = ts.size();
  std::vector<double> x(n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[n - 1 - i] = i == 0 ? R : R * std::exp(-ts[i] / k);
    v[n - 1 - i] = std::max(0.0, ws[i] / C);
  }
  bool all_zero = true;
  for (double vi : v) all_zero = all_zero && vi == 0.0;
  if (all_zero && w.end_slope == 0.0) return {};
  HeadModel head = ConstantHead{};
  if (w.end_slope > 0.0) head = LogGrowth{w.end_slope * k / C};
  return RadialProfile(std::move(x), std::move(v), ZeroTail{}, head);
}

} // namespace wtm
