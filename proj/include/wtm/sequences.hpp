#pragma once

#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "wtm/errors.hpp"
#include "wtm/functionals.hpp"
#include "wtm/measures.hpp"
#include "wtm/profiles.hpp"
#include "wtm/radial_profile.hpp"

namespace wtm {

/// Largest log-radius step used when mapping Moser functions back to (0, R).
/// The Dirichlet integral of the piecewise-linear image then matches the
/// continuum value to about step^2 p(p-1)/24.
inline constexpr double kMoserLogStep = 1e-4;

/// w_j(t) = t / j^{1/p} on [0, j], j^{(p-1)/p} beyond.
inline LogProfile moser_log_profile(int j, double p) {
  detail::require(j >= 1, "moser_log_profile: j must be at least 1");
  detail::require(p >= 2.0 && std::isfinite(p), "moser_log_profile: p must be at least 2");
  const double jd = j;
  return LogProfile{{0.0, jd}, {0.0, std::pow(jd, (p - 1.0) / p)}, 0.0};
}

/// u_j on (0, R): the inverse log transform of w_j. Constant below R e^{-j/(1+theta)}.
inline RadialProfile moser_radial(int j, double p, double R, const WeightParams& wp) {
  detail::require(wp.p == p, "moser_radial: p differs from the weight parameters");
  wp.require_tm("moser_radial");
  return inverse_log_transform(moser_log_profile(j, p), R, wp, kMoserLogStep * (1.0 + wp.theta));
}

/// a_j = (1/j) int_0^j e^{-t} t^p dt + j^{p-1} e^{-j}, which equals int |w_j|^p e^{-t} dt.
inline double a_j(int j, double p) {
  detail::require(j >= 1, "a_j: j must be at least 1");
  detail::require(p > 0.0 && std::isfinite(p), "a_j: p must be positive");
  const double jd = j;
  return boost::math::tgamma_lower(p + 1.0, jd) / jd + std::exp((p - 1.0) * std::log(jd) - jd);
}

/// rho(alpha, theta, R) = R^{1+theta} omega_theta / ((1+theta)^p omega_alpha)
inline double moser_rho(const WeightParams& wp, double R) {
  return std::pow(R, 1.0 + wp.theta) * omega(wp.theta) / (std::pow(1.0 + wp.theta, wp.p) * omega(wp.alpha));
}

/// exp((mu / (mu_{alpha,theta} (1 + rho a_j)^{1/(p-1)}) - 1) j)
inline double blowup_bound(int j, double mu, const WeightParams& wp, double R) {
  wp.require_tm("blowup_bound");
  detail::require(mu > 0.0 && R > 0.0, "blowup_bound: mu and R must be positive");
  const double kappa = mu / (wp.mu_threshold() * std::pow(1.0 + moser_rho(wp, R) * a_j(j, wp.p), 1.0 / (wp.p - 1.0)));
  return std::exp((kappa - 1.0) * j);
}

/// int_0^R exp(mu (u_j / ||u_j||_W)^{p/(p-1)}) dlambda_theta by quadrature on the profile.
inline double moser_exponential_integral(int j, double mu, const WeightParams& wp, double R) {
  const RadialProfile u = moser_radial(j, wp.p, R, wp);
  const double n = sobolev_norm(u, wp.p, wp.alpha, wp.theta);
  const double e = wp.p / (wp.p - 1.0);
  return omega(wp.theta) *
         integrate_values(u, [&](double v) { return std::exp(mu * std::pow(v / n, e)); }, wp.theta, 0.0, R);
}

/// Normalized vanishing sequence phi_n(x) = lambda_n^gamma phi(lambda_n^sigma x) / (1 + lambda_n^{p gamma} lambda_0)^{1/p}.
struct VanishingFamily {
  RadialProfile base;
  std::vector<double> lambdas;
  double gamma = 0.5;
  double sigma = 1.0;
  WeightParams wp;

  double lambda0() const { return derivative_norm_pow(base, wp.p, wp.alpha); }

  void validate() const {
    wp.require_tm("VanishingFamily");
    detail::require(gamma > 0.0 && sigma > 0.0, "VanishingFamily: gamma and sigma must be positive");
    detail::require(std::abs(wp.p * gamma - sigma * (1.0 + wp.theta)) <= 1e-12 * std::max(1.0, wp.p * gamma),
                    "VanishingFamily: need p gamma = sigma (1 + theta)");
    detail::require(!base.empty() && base.is_nonincreasing(), "VanishingFamily: base must be nonzero and nonincreasing");
    detail::require(std::holds_alternative<ZeroTail>(base.tail()), "VanishingFamily: base must be compactly supported");
    detail::require(std::abs(lp_norm_pow(base, wp.p, wp.theta) - 1.0) <= 1e-9, "VanishingFamily: base must have unit L^p norm");
    for (double l : lambdas) detail::require(l > 0.0 && std::isfinite(l), "VanishingFamily: lambdas must be positive");
  }
};

/// Plateau of height 1 on (0, 1/2] falling to 0 at 1 along a cubic smoothstep,
/// scaled to unit L^p_theta norm.
inline RadialProfile default_vanishing_base(double p, double theta, std::size_t nodes = 2001) {
  detail::require(nodes >= 3, "default_vanishing_base: need at least three nodes");
  std::vector<double> x(nodes);
  std::vector<double> v(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(nodes - 1);
    x[i] = 0.5 + 0.5 * s;
    v[i] = 1.0 - s * s * (3.0 - 2.0 * s);
  }
  v.back() = 0.0;
  RadialProfile phi(std::move(x), std::move(v));
  return phi.scaled(1.0 / lp_norm(phi, p, theta));
}

/// lambda_n = 10^{-n/2}, n = 0, 1, ...
inline std::vector<double> default_lambdas(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t n = 0; n < count; ++n) out[n] = std::pow(10.0, -0.5 * static_cast<double>(n));
  return out;
}

/// Family with the default base and gamma = (1+theta)/p, sigma = 1.
inline VanishingFamily default_vanishing_family(const WeightParams& wp, std::size_t count) {
  VanishingFamily vf{default_vanishing_base(wp.p, wp.theta), default_lambdas(count), (1.0 + wp.theta) / wp.p, 1.0, wp};
  vf.validate();
  return vf;
}

inline RadialProfile vanishing_member(const VanishingFamily& vf, std::size_t n) {
  vf.validate();
  detail::require(n < vf.lambdas.size(), "vanishing_member: index out of range");
  const double lam = vf.lambdas[n];
  const double scale = std::pow(1.0 + std::pow(lam, vf.wp.p * vf.gamma) * vf.lambda0(), -1.0 / vf.wp.p);
  return dilate(vf.base, lam, vf.gamma, vf.sigma).scaled(scale);
}

/// mu^{p-1}/(p-1)! for integer p, 0 otherwise.
inline double vanishing_limit(double p, double mu) {
  detail::require(p >= 2.0 && std::isfinite(p), "vanishing_limit: p must be at least 2");
  detail::require(mu > 0.0, "vanishing_limit: mu must be positive");
  if (p != std::floor(p)) return 0.0;
  return std::exp((p - 1.0) * std::log(mu) - std::lgamma(p));
}

} // namespace wtm
