#pragma once

#include <cmath>
#include <algorithm>
#include <limits>
#include <vector>

#include "wtm/errors.hpp"
#include "wtm/measures.hpp"
#include "wtm/profiles.hpp"
#include "wtm/radial_profile.hpp"

namespace wtm {

/// Truncation contract for the exponential tail series.
struct SeriesPolicy {
  double rel_tol = 1e-12;
  int max_terms = 400;
};

struct FunctionalReport {
  double value = 0.0;
  double series_tail_bound = 0.0;
  double quad_err_est = 0.0;

  double error_budget() const { return series_tail_bound + quad_err_est; }
};

/// Largest integer strictly below p.
inline int floor_strict(double p) {
  detail::require(std::isfinite(p) && p >= 2.0, "floor_strict: p must be at least 2");
  return static_cast<int>(std::ceil(p)) - 1;
}

struct SeriesValue {
  double sum = 0.0;
  double remainder_bound = 0.0;
};

/// sum_{j >= j0} y^j / j! with a ratio-test bound on the dropped remainder.
inline SeriesValue exp_tail_series(double y, int j0, const SeriesPolicy& policy) {
  if (y == 0.0) return {};
  double term = std::exp(j0 * std::log(y) - std::lgamma(j0 + 1.0));
  double sum = 0.0;
  for (int j = j0; j < j0 + policy.max_terms; ++j) {
    sum += term;
    const double next = term * y / (j + 1.0);
    const double ratio = y / (j + 2.0);
    if (ratio < 1.0) {
      const double bound = next / (1.0 - ratio);
      if (bound <= policy.rel_tol * sum || next == 0.0) return {sum, bound};
    }
    term = next;
    if (!std::isfinite(term)) break;
  }
  throw NumericalFailure("series did not converge within max_terms");
}

/// A_{p,mu}(t) = sum_{j >= floor_strict(p)} mu^j/j! t^{pj/(p-1)}, summed directly.
inline FunctionalReport A(double t, double p, double mu, const SeriesPolicy& policy = {}) {
  detail::require(t >= 0.0 && std::isfinite(t), "A: t must be nonnegative");
  detail::require(mu > 0.0 && std::isfinite(mu), "A: mu must be positive");
  detail::require(policy.rel_tol > 0.0 && policy.max_terms >= floor_strict(p) + 1, "A: invalid series policy");
  const auto s = exp_tail_series(mu * std::pow(t, p / (p - 1.0)), floor_strict(p), policy);
  return {s.sum, s.remainder_bound, 0.0};
}

namespace detail {

inline double tm_integral(const RadialProfile& u, const WeightParams& wp, const SeriesPolicy& policy,
                          double lo = 0.0, double hi = std::numeric_limits<double>::infinity()) {
  const int j0 = floor_strict(wp.p);
  const double e = wp.p / (wp.p - 1.0);
  const double mu = wp.mu;
  return omega(wp.theta) *
         integrate_values(
             u, [&](double v) { return v == 0.0 ? 0.0 : exp_tail_series(mu * std::pow(v, e), j0, policy).sum; },
             wp.theta, lo, hi);
}

} // namespace detail

/// F(u) = int A_{p,mu}(|u|) dlambda_theta without the coarse-grid comparison.
inline double tm_value(const RadialProfile& u, const WeightParams& wp, const SeriesPolicy& policy = {}) {
  return detail::tm_integral(u, wp, policy);
}

/// F(u) with series and grid error estimates. Pointwise truncation is below
/// rel_tol times the retained sum, so the integrated truncation is below rel_tol * F.
inline FunctionalReport tm_functional(const RadialProfile& u, const WeightParams& wp, const SeriesPolicy& policy = {}) {
  if (u.empty()) return {};
  const double fine = detail::tm_integral(u, wp, policy);
  const double coarse = detail::tm_integral(u.coarsened(), wp, policy);
  return {fine, policy.rel_tol * fine, std::abs(fine - coarse)};
}

/// F(u / ||u||_W).
inline FunctionalReport normalized_tm(const RadialProfile& u, const WeightParams& wp, const SeriesPolicy& policy = {}) {
  const double n = u.empty() ? 0.0 : sobolev_norm(u, wp.p, wp.alpha, wp.theta);
  detail::require(n > 0.0, "normalized_tm: zero profile");
  return tm_functional(u.scaled(1.0 / n), wp, policy);
}

/// Upper bound for int_a^inf A_{p,mu}(|u|) dlambda_theta over nonincreasing members
/// of the unit Sobolev ball. Each higher-order term carries the factor a^{1+theta}
/// produced by integrating r^{theta - (1+theta)j/(p-1)} from a to infinity.
inline double tm_tail_bound(double a, const WeightParams& wp, const SeriesPolicy& policy = {}) {
  wp.require_tm("tm_tail_bound");
  detail::require(std::isfinite(a) && a >= a0(wp) * (1.0 - 1e-12), "tm_tail_bound: requires a >= a0");
  const double p = wp.p;
  const double th = wp.theta;
  const double w = omega(th);
  const int j0 = floor_strict(p);
  const double first = std::exp(j0 * std::log(wp.mu) - std::lgamma(j0 + 1.0));

  // log of mu^j (1+theta)^{j/(p-1)} / (omega^{j/(p-1)} a^{(1+theta)j/(p-1)}) per unit j
  const double log_x = std::log(wp.mu) + std::log1p(th) / (p - 1.0) - std::log(w) / (p - 1.0) -
                       (1.0 + th) * std::log(a) / (p - 1.0);
  const double log_pref = std::log((p - 1.0) * w) + (1.0 + th) * std::log(a) - std::log1p(th);
  double sum = 0.0;
  for (int j = j0 + 1; j < j0 + 1 + policy.max_terms; ++j) {
    const double term = std::exp(j * log_x + log_pref - std::lgamma(j + 1.0) - std::log(j - (p - 1.0)));
    sum += term;
    // Successive ratios are below x/(j+2) times (j+1-(p-1))/(j+2-(p-1)) < 1.
    const double ratio = std::exp(log_x) / (j + 2.0);
    if (ratio < 1.0) {
      const double rest = term * ratio / (1.0 - ratio);
      if (rest <= policy.rel_tol * (first + sum)) return first + sum + rest;
    }
    if (!std::isfinite(sum)) break;
  }
  throw NumericalFailure("tm_tail_bound: series did not converge within max_terms");
}

/// gamma with 1 - gamma = (p/q)(p* - q)/(p* - p), or 1 - gamma = p/q when alpha = p - 1.
inline double gn_exponent(double p, double q, double alpha, double theta) {
  detail::require(p >= 1.0 && theta >= 0.0 && alpha >= 0.0, "gn_exponent: invalid exponents");
  if (alpha == p - 1.0) {
    detail::require(q >= p && std::isfinite(q), "gn_exponent: need q >= p");
    return 1.0 - p / q;
  }
  detail::require(alpha > p - 1.0, "gn_exponent: need alpha >= p - 1");
  const double ps = p * (1.0 + theta) / (alpha - (p - 1.0));
  detail::require(q >= p && q < ps, "gn_exponent: need p <= q < p*");
  return 1.0 - (p / q) * (ps - q) / (ps - p);
}

/// E(u) = (||u'||^p_{L^p_alpha} + ||u||^p_{L^p_theta}) / p, with q checked against the GN range.
inline double energy(const RadialProfile& u, double p, double q, double alpha, double theta) {
  (void)gn_exponent(p, q, alpha, theta);
  return sobolev_norm_pow(u, p, alpha, theta) / p;
}

/// ||u'||^2_{L^2_1} ||u||^2_{L^2_theta} / ||u||^4_{L^4_theta}
inline double gn_ratio(const RadialProfile& u, double theta) {
  detail::require(!u.empty(), "gn_ratio: zero profile");
  const double n4 = lp_norm_pow(u, 4.0, theta);
  detail::require(n4 > 0.0, "gn_ratio: zero profile");
  return derivative_norm_pow(u, 2.0, 1.0) * lp_norm_pow(u, 2.0, theta) / n4;
}

/// d/dt F(v_t) at t = 1 for v_t = u_t/||u_t||, u_t(x) = t^{1/2} u(t^{1/(1+theta)} x), p = 2, alpha = 1:
/// sum_j mu^j/j! ||u||_{2j}^{2j} [(j-1)||u||_2^2 - ||u'||^2] on the unit sphere.
inline double dilation_derivative(const RadialProfile& u, double mu, double theta, const SeriesPolicy& policy = {}) {
  detail::require(mu > 0.0, "dilation_derivative: mu must be positive");
  const double n = u.empty() ? 0.0 : sobolev_norm(u, 2.0, 1.0, theta);
  detail::require(n > 0.0, "dilation_derivative: zero profile");
  const RadialProfile v = u.scaled(1.0 / n);
  const double a = lp_norm_pow(v, 2.0, theta);
  const double b = derivative_norm_pow(v, 2.0, 1.0);
  const auto g = [&](double s) {
    if (s == 0.0) return 0.0;
    const double z = mu * s * s;
    const double s0 = exp_tail_series(z, 1, policy).sum;
    // sum_{j>=2} (j-1) z^j/j! = z s0 - sum_{j>=2} z^j/j!; the subtraction loses at most a factor 2.
    const double s1 = z * s0 - exp_tail_series(z, 2, policy).sum;
    return a * s1 - b * s0;
  };
  return omega(theta) * integrate_values(v, g, theta);
}

/// h(t) = ||v||^p / (||v||^p + t^{gamma p} ||v'||^p)
///      + (mu/p) t^{p gamma/(p-1)} ||v||^{p^2/(p-1)}_{p^2/(p-1)} / (||v||^p + t^{gamma p} ||v'||^p)^{p/(p-1)}
/// with norms in L^p_theta, L^p_alpha and L^{p^2/(p-1)}_theta.
inline double h_curve(const RadialProfile& v, double t, const WeightParams& wp, double gamma) {
  detail::require(t > 0.0 && std::isfinite(t), "h_curve: t must be positive");
  detail::require(gamma > 0.0, "h_curve: gamma must be positive");
  detail::require(!v.empty(), "h_curve: zero profile");
  const double p = wp.p;
  const double q = p * p / (p - 1.0);
  const double np = lp_norm_pow(v, p, wp.theta);
  const double dp = derivative_norm_pow(v, p, wp.alpha);
  const double nq = lp_norm_pow(v, q, wp.theta);
  const double denom = np + std::pow(t, gamma * p) * dp;
  return np / denom + (wp.mu / p) * std::pow(t, p * gamma / (p - 1.0)) * nq / std::pow(denom, p / (p - 1.0));
}

/// Local/tail decomposition at a sharp cut R.
struct MassSplit {
  double R = 0.0;
  double sobolev_local = 0.0;
  double sobolev_tail = 0.0;
  double f_local = 0.0;
  double f_tail = 0.0;
  double eta_local = 0.0;
  double eta_tail = 0.0;
};

inline MassSplit mass_split(const RadialProfile& u, double R, const WeightParams& wp, const SeriesPolicy& policy = {}) {
  detail::require(R > 0.0 && std::isfinite(R), "mass_split: R must be positive");
  MassSplit out;
  out.R = R;
  if (u.empty()) return out;
  const double inf = std::numeric_limits<double>::infinity();
  const double p = wp.p;
  const double wa = omega(wp.alpha);
  const double wt = omega(wp.theta);
  const auto lp = [&](double v) { return std::pow(v, p); };
  out.sobolev_local = wa * derivative_integral(u, p, wp.alpha, 0.0, R) + wt * integrate_values(u, lp, wp.theta, 0.0, R);
  out.sobolev_tail = wa * derivative_integral(u, p, wp.alpha, R, inf) + wt * integrate_values(u, lp, wp.theta, R, inf);
  out.f_local = detail::tm_integral(u, wp, policy, 0.0, R);
  out.f_tail = detail::tm_integral(u, wp, policy, R, inf);
  const double eta_e = p * floor_strict(p) / (p - 1.0);
  const auto eta = [&](double v) { return std::pow(v, eta_e); };
  out.eta_local = wt * integrate_values(u, eta, wp.theta, 0.0, R);
  out.eta_tail = wt * integrate_values(u, eta, wp.theta, R, inf);
  return out;
}

enum class CutoffSide { Local, Tail };

/// u times a C^1 cutoff that equals 1 on (0, R] and 0 beyond R + width (Local), or
/// u times one minus it (Tail). The transition is sampled on extra nodes.
inline RadialProfile smooth_cutoff(const RadialProfile& u, double R, CutoffSide side, double width = 1.0,
                                   std::size_t transition_nodes = 65) {
  detail::require(R > 0.0 && width > 0.0 && transition_nodes >= 2, "smooth_cutoff: invalid cutoff");
  if (u.empty()) return u;
  const auto phi = [&](double x) {
    if (x <= R) return 1.0;
    if (x >= R + width) return 0.0;
    const double s = (x - R) / width;
    return 1.0 - s * s * (3.0 - 2.0 * s);
  };
  std::vector<double> xs(u.nodes().begin(), u.nodes().end());
  for (std::size_t i = 0; i < transition_nodes; ++i)
    xs.push_back(R + width * static_cast<double>(i) / static_cast<double>(transition_nodes - 1));
  if (side == CutoffSide::Tail && xs.back() < R + width) xs.push_back(R + width);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> vs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = phi(xs[i]);
    vs[i] = u.evaluate(xs[i]) * (side == CutoffSide::Local ? f : 1.0 - f);
  }
  if (side == CutoffSide::Local) {
    // Nothing survives beyond R + width.
    while (xs.size() > 2 && xs[xs.size() - 2] >= R + width) {
      xs.pop_back();
      vs.pop_back();
    }
    vs.back() = 0.0;
    return RadialProfile(std::move(xs), std::move(vs), ZeroTail{}, u.head());
  }
  TailModel tail = u.tail();
  if (auto* pd = std::get_if<PowerDecay>(&tail)) pd->c = vs.back() * std::pow(xs.back(), pd->s);
  return RadialProfile(std::move(xs), std::move(vs), tail, ConstantHead{});
}

} // namespace wtm
