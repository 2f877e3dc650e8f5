#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wtm/errors.hpp"
#include "wtm/functionals.hpp"
#include "wtm/measures.hpp"
#include "wtm/profiles.hpp"
#include "wtm/radial_profile.hpp"
#include "wtm/rearrangement.hpp"
#include "wtm/sequences.hpp"

namespace wtm {

/// Randomized ascent settings. All randomness comes from one mt19937_64 seeded with seed.
struct SearchConfig {
  std::size_t grid_size = 512;
  double x_min = 1e-4;
  double x_max = 1e2;
  int max_iterations = 4000;
  double initial_step = 0.3;
  double step_growth = 1.25;
  double step_shrink = 0.97;
  double min_step = 1e-6;
  double max_step = 1.0;
  std::uint64_t seed = 42;
  double tolerance = 1e-8;
  int window = 50;
  SeriesPolicy series{};

  void validate() const {
    detail::require(grid_size >= 8, "SearchConfig: grid_size must be at least 8");
    detail::require(x_min > 0.0 && x_max > x_min, "SearchConfig: need 0 < x_min < x_max");
    detail::require(max_iterations > 0 && window > 0, "SearchConfig: iterations and window must be positive");
    detail::require(initial_step > 0.0 && min_step > 0.0 && max_step >= min_step, "SearchConfig: bad step sizes");
    detail::require(step_growth >= 1.0 && step_shrink > 0.0 && step_shrink <= 1.0, "SearchConfig: bad step schedule");
    detail::require(tolerance > 0.0, "SearchConfig: tolerance must be positive");
  }

  std::vector<double> nodes() const {
    const auto g = QuadratureGrid::geometric(x_min, x_max, grid_size);
    return {g.nodes().begin(), g.nodes().end()};
  }
};

struct ExtremalReport {
  RadialProfile best;
  double value = 0.0;
  FunctionalReport evaluation;
  std::vector<double> trace;
  int iterations = 0;
  int accepted = 0;
  bool converged = false;
  // certificates
  double sobolev_norm = 0.0;
  bool unit_norm = false;
  bool nonincreasing = false;
  double vanishing_level = 0.0;
  double margin = 0.0;
  bool exceeds_vanishing = false;
};

namespace detail {

enum class Move { Dilation, Block, Node };

// One proposal from the current node values on a fixed grid.
inline std::vector<double> propose(const std::vector<double>& x, const std::vector<double>& v, Move move, double step,
                                   std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n = v.size();
  const double top = std::max(*std::max_element(v.begin(), v.end()), 1e-300);
  std::vector<double> out = v;
  switch (move) {
    case Move::Dilation: {
      const double f = std::exp(0.25 * step * gauss(rng));
      const RadialProfile u(x, v);
      for (std::size_t i = 0; i < n; ++i) out[i] = u.evaluate(x[i] * f);
      break;
    }
    case Move::Block: {
      std::uniform_int_distribution<std::size_t> centre(0, n - 1);
      std::uniform_int_distribution<std::size_t> half(1, std::max<std::size_t>(1, n / 8));
      const std::size_t c = centre(rng);
      const double w = static_cast<double>(half(rng));
      const double amp = step * top * gauss(rng) * 0.1;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(static_cast<double>(i) - static_cast<double>(c)) / w;
        if (d < 1.0) {
          const double b = std::cos(0.5 * std::numbers::pi * d);
          out[i] += amp * b * b;
        }
      }
      break;
    }
    case Move::Node: {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      const std::size_t i = pick(rng);
      out[i] += step * gauss(rng) * 0.05 * std::max(v[i], 1e-3 * top);
      break;
    }
  }
  for (double& o : out) o = std::max(0.0, o);
  out.back() = 0.0;
  return out;
}

// Profile on the grid x made nonincreasing (by rearrangement under x^l) and scaled to unit norm.
template <class Norm>
std::optional<RadialProfile> project(const std::vector<double>& x, std::vector<double> v, double l, Norm&& norm) {
  RadialProfile u(x, std::move(v));
  if (!u.is_nonincreasing()) {
    const RadialProfile r = rearrange(u, l);
    if (r.empty()) return std::nullopt;
    u = resample(r, x);
  }
  const double n = norm(u);
  if (!(n > 0.0) || !std::isfinite(n)) return std::nullopt;
  return u.scaled(1.0 / n);
}

inline Move pick_move(std::mt19937_64& rng, bool allow_dilation) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double r = unif(rng);
  if (allow_dilation && r < 0.1) return Move::Dilation;
  return r < 0.55 ? Move::Block : Move::Node;
}

// Trial shapes used to seed both searches, each at scale s.
inline std::vector<double> trial_shape(const std::vector<double>& x, int kind, double s) {
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = x[i] / s;
    switch (kind) {
      case 0: v[i] = std::exp(-r); break;
      case 1: v[i] = 1.0 / (1.0 + r * r); break;
      case 2: v[i] = std::exp(-r * r); break;
      default: v[i] = std::max(0.0, 1.0 - r); break;
    }
  }
  v.back() = 0.0;
  return v;
}

} // namespace detail

/// Estimates sup F(u) over the unit sphere of W^{1,p}_{p-1,theta} by projected random ascent.
/// User trials are evaluated as given and reported if none of the search iterates beats them.
inline ExtremalReport maximize_tm(const WeightParams& wp, const SearchConfig& cfg,
                                  const std::vector<RadialProfile>& trials = {}) {
  wp.require_tm("maximize_tm");
  cfg.validate();
  detail::require(wp.mu < wp.mu_threshold(),
                  "maximize_tm: mu must be below the critical threshold (the supremum is infinite above it)");
  std::mt19937_64 rng(cfg.seed);
  const auto x = cfg.nodes();
  const auto norm = [&](const RadialProfile& u) { return sobolev_norm(u, wp.p, wp.alpha, wp.theta); };
  const auto F = [&](const RadialProfile& u) { return tm_value(u, wp, cfg.series); };

  // Starting point: best trial shape over a scale scan.
  RadialProfile cur;
  double best = -1.0;
  for (int kind = 0; kind < 4; ++kind) {
    for (int k = 0; k <= 16; ++k) {
      const double s = cfg.x_min * 10.0 * std::pow(cfg.x_max / (cfg.x_min * 100.0), k / 16.0);
      const auto cand = detail::project(x, detail::trial_shape(x, kind, s), wp.theta, norm);
      if (!cand) continue;
      const double f = F(*cand);
      if (f > best) {
        best = f;
        cur = *cand;
      }
    }
  }

  ExtremalReport rep;
  std::vector<double> v(cur.values().begin(), cur.values().end());
  double step = cfg.initial_step;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const auto move = detail::pick_move(rng, true);
    const auto cand = detail::project(x, detail::propose(x, v, move, step, rng), wp.theta, norm);
    bool ok = false;
    if (cand) {
      const double f = F(*cand);
      if (f > best) {
        best = f;
        cur = *cand;
        v.assign(cur.values().begin(), cur.values().end());
        ok = true;
        ++rep.accepted;
      }
    }
    step = ok ? std::min(cfg.max_step, step * cfg.step_growth) : std::max(cfg.min_step, step * cfg.step_shrink);
    rep.trace.push_back(best);
    rep.iterations = it + 1;
    if (it + 1 >= cfg.window) {
      const double old = rep.trace[rep.trace.size() - static_cast<std::size_t>(cfg.window)];
      if (step <= cfg.min_step && best - old <= cfg.tolerance * std::abs(best)) {
        rep.converged = true;
        break;
      }
    }
  }

  rep.best = cur;
  for (const auto& t : trials) {
    const double f = normalized_tm(t, wp, cfg.series).value;
    if (f > best) {
      best = f;
      const double n = norm(t);
      rep.best = t.scaled(1.0 / n);
    }
  }
  rep.evaluation = normalized_tm(rep.best, wp, cfg.series);
  rep.value = rep.evaluation.value;
  rep.sobolev_norm = norm(rep.best);
  rep.unit_norm = std::abs(rep.sobolev_norm - 1.0) <= 1e-9;
  rep.nonincreasing = rep.best.is_nonincreasing();
  rep.vanishing_level = vanishing_limit(wp.p, wp.mu);
  rep.margin = rep.value - rep.vanishing_level;
  rep.exceeds_vanishing = rep.margin > rep.evaluation.error_budget();
  return rep;
}

struct GnReport {
  RadialProfile best;
  double estimate = 0.0;
  double trial_value = 0.0;  // ratio of 1/(1+x^{1+theta})
  std::vector<double> trace;
  int iterations = 0;
  int accepted = 0;
};

/// The profile 1/(1+x^{1+theta}) on a wide geometric grid with its exact power tail.
inline RadialProfile gn_trial_profile(double theta, std::size_t nodes = 1u << 15) {
  const auto g = QuadratureGrid::geometric(1e-6, 1e6, nodes);
  return RadialProfile::sample_with_power_tail([&](double x) { return 1.0 / (1.0 + std::pow(x, 1.0 + theta)); },
                                               g.nodes(), 1.0 + theta);
}

/// Minimizes ||u'||^2_{L^2_1} ||u||^2_{L^2_theta} / ||u||^4_{L^4_theta} over nonincreasing profiles.
/// The fine-grid trial 1/(1+x^{1+theta}) is always a candidate.
inline GnReport minimize_gn(double theta, const SearchConfig& cfg) {
  detail::require(theta >= 0.0, "minimize_gn: theta must be nonnegative");
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  const auto x = cfg.nodes();
  const auto unit = [](const RadialProfile& u) { return u.max_value(); };
  const auto R = [&](const RadialProfile& u) { return gn_ratio(u, theta); };

  GnReport rep;
  const RadialProfile trial = gn_trial_profile(theta);
  rep.trial_value = R(trial);

  RadialProfile cur;
  double best = std::numeric_limits<double>::infinity();
  for (int kind = 0; kind < 4; ++kind) {
    for (int k = 0; k <= 8; ++k) {
      const double s = std::pow(10.0, -1.0 + 2.0 * k / 8.0);
      std::vector<double> v = detail::trial_shape(x, kind, s);
      if (kind == 0)
        for (std::size_t i = 0; i + 1 < x.size(); ++i) v[i] = 1.0 / (1.0 + std::pow(x[i] / s, 1.0 + theta));
      const auto cand = detail::project(x, std::move(v), theta, unit);
      if (!cand) continue;
      const double r = R(*cand);
      if (r < best) {
        best = r;
        cur = *cand;
      }
    }
  }

  std::vector<double> v(cur.values().begin(), cur.values().end());
  double step = cfg.initial_step;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const auto move = detail::pick_move(rng, false);
    const auto cand = detail::project(x, detail::propose(x, v, move, step, rng), theta, unit);
    bool ok = false;
    if (cand) {
      const double r = R(*cand);
      if (r < best) {
        best = r;
        cur = *cand;
        v.assign(cur.values().begin(), cur.values().end());
        ok = true;
        ++rep.accepted;
      }
    }
    step = ok ? std::min(cfg.max_step, step * cfg.step_growth) : std::max(cfg.min_step, step * cfg.step_shrink);
    rep.trace.push_back(best);
    rep.iterations = it + 1;
    if (it + 1 >= cfg.window) {
      const double old = rep.trace[rep.trace.size() - static_cast<std::size_t>(cfg.window)];
      if (step <= cfg.min_step && old - best <= cfg.tolerance * std::abs(best)) break;
    }
  }
  if (rep.trial_value < best) {
    rep.best = trial;
    rep.estimate = rep.trial_value;
  } else {
    rep.best = cur;
    rep.estimate = best;
  }
  return rep;
}

/// Minimizer over s > 0 of s^{e1} A + s^{e2} B with e1 = p-(alpha+1)+p(1+theta)/q, e2 = (1+theta)(p/q-1):
/// t = [((1+theta)(q-p) / (pq + p(1+theta) - q(1+alpha))) B/A]^{1/(p+theta-alpha)}.
inline double gn_optimal_t(double A_term, double B_term, double p, double q, double alpha, double theta) {
  detail::require(A_term > 0.0 && B_term > 0.0, "gn_optimal_t: terms must be positive");
  detail::require(q > p, "gn_optimal_t: need q > p");
  const double denom = p * q + p * (1.0 + theta) - q * (1.0 + alpha);
  detail::require(denom > 0.0, "gn_optimal_t: need pq + p(1+theta) - q(1+alpha) > 0");
  const double e = p + theta - alpha;
  detail::require(e > 0.0, "gn_optimal_t: need p + theta - alpha > 0");
  return std::pow((1.0 + theta) * (q - p) / denom * B_term / A_term, 1.0 / e);
}

/// Nodal values of -omega_1 (u' x)' + omega_theta x^theta (u - lambda u^3) at interior nodes.
struct Residual {
  std::vector<double> x;
  std::vector<double> r;
  std::vector<double> scale;  // omega_theta x^theta |u|, the size of the reaction term

  double max_abs() const {
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
  }
};

inline Residual el_residual(const RadialProfile& u, double lambda, double theta) {
  detail::require(lambda > 0.0, "el_residual: lambda must be positive");
  detail::require(theta >= 0.0, "el_residual: theta must be nonnegative");
  Residual out;
  if (u.size() < 3) return out;
  const auto x = u.nodes();
  const auto v = u.values();
  const double w1 = omega(1.0);
  const double wt = omega(theta);
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double fl = 0.5 * (x[i - 1] + x[i]) * (v[i] - v[i - 1]) / (x[i] - x[i - 1]);
    const double fr = 0.5 * (x[i] + x[i + 1]) * (v[i + 1] - v[i]) / (x[i + 1] - x[i]);
    const double div = (fr - fl) / (0.5 * (x[i + 1] - x[i - 1]));
    const double react = wt * std::pow(x[i], theta) * (v[i] - lambda * v[i] * v[i] * v[i]);
    out.x.push_back(x[i]);
    out.r.push_back(-w1 * div + react);
    out.scale.push_back(wt * std::pow(x[i], theta) * std::abs(v[i]));
  }
  return out;
}

struct ShootConfig {
  double x_start = 1e-3;
  double x_end = 1e3;
  double max_log_step = 5e-4;
  int max_bisections = 200;
};

struct ShootResult {
  RadialProfile profile;
  double u0 = 0.0;
  int bisections = 0;
  double x_cut = 0.0;
};

namespace detail {

struct Trajectory {
  std::vector<double> x;
  std::vector<double> u;
  int outcome = 0;  // +1 crossed zero, -1 turned upward, 0 reached x_end
};

// RK4 in s = log x for u_s = v, v_s = K e^{(1+theta)s} (u - lambda u^3), K = omega_theta / omega_1.
inline Trajectory shoot_once(double c, double lambda, double theta, const ShootConfig& cfg, bool record) {
  const double K = omega(theta) / omega(1.0);
  const double k1 = 1.0 + theta;
  const auto f = [&](double u) { return u - lambda * u * u * u; };
  double s = std::log(cfg.x_start);
  const double s_end = std::log(cfg.x_end);
  double x0 = cfg.x_start;
  // Regular expansion u = c + A x^k + B x^{2k} with k = 1+theta.
  const double A = K * f(c) / (k1 * k1);
  const double B = K * (1.0 - 3.0 * lambda * c * c) * A / (4.0 * k1 * k1);
  const double xk = std::pow(x0, k1);
  double u = c + A * xk + B * xk * xk;
  double v = k1 * A * xk + 2.0 * k1 * B * xk * xk;
  Trajectory tr;
  if (record) {
    tr.x.push_back(x0);
    tr.u.push_back(u);
  }
  const auto rhs = [&](double ss, double uu, double vv, double& du, double& dv) {
    du = vv;
    dv = K * std::exp(k1 * ss) * f(uu);
  };
  while (s < s_end) {
    const double x = std::exp(s);
    const double h = std::min(cfg.max_log_step, 0.02 / std::sqrt(K * std::pow(x, k1)));
    double a1, b1, a2, b2, a3, b3, a4, b4;
    rhs(s, u, v, a1, b1);
    rhs(s + 0.5 * h, u + 0.5 * h * a1, v + 0.5 * h * b1, a2, b2);
    rhs(s + 0.5 * h, u + 0.5 * h * a2, v + 0.5 * h * b2, a3, b3);
    rhs(s + h, u + h * a3, v + h * b3, a4, b4);
    u += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    v += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    s += h;
    if (record) {
      tr.x.push_back(std::exp(s));
      tr.u.push_back(u);
    }
    if (u < 0.0) {
      tr.outcome = 1;
      return tr;
    }
    if (v > 0.0) {
      tr.outcome = -1;
      return tr;
    }
  }
  return tr;
}

} // namespace detail

/// Positive decreasing solution of -omega_1 (u' x)' + omega_theta x^theta (u - lambda u^3) = 0 with
/// u'(0) = 0, found by bisection on u(0) between undershoot (u turns upward) and overshoot
/// (u crosses zero). The undershooting side is kept and cut at its minimum, where it is set to zero.
inline ShootResult el_shoot(double lambda, double theta, const ShootConfig& cfg = {}) {
  detail::require(lambda > 0.0 && std::isfinite(lambda), "el_shoot: lambda must be positive");
  detail::require(theta >= 0.0, "el_shoot: theta must be nonnegative");
  detail::require(cfg.x_start > 0.0 && cfg.x_end > cfg.x_start, "el_shoot: bad integration range");
  const double base = 1.0 / std::sqrt(lambda);
  double lo = base * (1.0 + 1e-6);
  if (detail::shoot_once(lo, lambda, theta, cfg, false).outcome != -1)
    throw NumericalFailure("el_shoot: lower initial value does not undershoot (u(0) = " + std::to_string(lo) + ")");
  double hi = 2.0 * base;
  int doublings = 0;
  while (detail::shoot_once(hi, lambda, theta, cfg, false).outcome != 1) {
    hi *= 2.0;
    if (++doublings > 60) throw NumericalFailure("el_shoot: no overshooting initial value found");
  }
  int it = 0;
  for (; it < cfg.max_bisections && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const int o = detail::shoot_once(mid, lambda, theta, cfg, false).outcome;
    if (o == 1) {
      hi = mid;
    } else if (o == -1) {
      lo = mid;
    } else {
      lo = mid;
      break;
    }
  }
  auto tr = detail::shoot_once(lo, lambda, theta, cfg, true);
  // Cut at the minimum of the undershooting trajectory.
  const auto mn = std::min_element(tr.u.begin(), tr.u.end());
  const std::size_t cut = static_cast<std::size_t>(mn - tr.u.begin());
  tr.x.resize(cut + 1);
  tr.u.resize(cut + 1);
  if (tr.x.size() < 3) throw NumericalFailure("el_shoot: trajectory too short");
  tr.u.back() = 0.0;
  for (double& val : tr.u) val = std::max(0.0, val);
  ShootResult out;
  out.x_cut = tr.x.back();
  out.profile = RadialProfile(std::move(tr.x), std::move(tr.u));
  out.u0 = lo;
  out.bisections = it;
  return out;
}

/// ||u||^{2j}_{L^{2j}_theta} gamma^j / (j! ||u'||^2 ||u||^2 ||u'||^{2(j-2)}) maximized over j = 2..max_j.
inline double gn_constant_ratio(const RadialProfile& u, double gamma, double theta, int max_j = 30) {
  detail::require(max_j >= 2, "gn_constant_ratio: max_j must be at least 2");
  const double a = lp_norm_pow(u, 2.0, theta);
  const double b = derivative_norm_pow(u, 2.0, 1.0);
  if (!(a > 0.0) || !(b > 0.0)) return 0.0;
  double best = 0.0;
  for (int j = 2; j <= max_j; ++j) {
    const double nj = lp_norm_pow(u, 2.0 * j, theta);
    if (!(nj > 0.0)) continue;
    const double log_r = std::log(nj) + j * std::log(gamma) - std::lgamma(j + 1.0) - std::log(a) - (j - 1.0) * std::log(b);
    best = std::max(best, std::exp(log_r));
  }
  return best;
}

struct SampleConfig {
  int samples = 1000;
  std::uint64_t seed = 7;
  int max_j = 30;
  std::size_t nodes = 64;
};

namespace detail {

// Random nonincreasing profile: positive random decrements on a geometric grid of random extent.
inline RadialProfile random_shape(std::mt19937_64& rng, std::size_t nodes) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double lo = std::pow(10.0, -3.0 + 2.0 * unif(rng));
  const double hi = lo * std::pow(10.0, 1.0 + 3.0 * unif(rng));
  const auto g = QuadratureGrid::geometric(lo, hi, nodes);
  std::vector<double> inc(nodes);
  const double sharp = 0.5 + 3.0 * unif(rng);
  for (double& d : inc) d = std::pow(unif(rng), sharp);
  std::vector<double> v(nodes, 0.0);
  for (std::size_t i = nodes - 1; i-- > 0;) v[i] = v[i + 1] + inc[i];
  return RadialProfile({g.nodes().begin(), g.nodes().end()}, std::move(v));
}

} // namespace detail

/// Sampled lower estimate of the constant C_{gamma,2,theta}.
inline double estimate_C_gn(double gamma, double theta, const SampleConfig& sc = {}) {
  detail::require(theta >= 0.0, "estimate_C_gn: theta must be nonnegative");
  detail::require(gamma > 0.0 && gamma < (1.0 + theta) * omega(1.0), "estimate_C_gn: need 0 < gamma < (1+theta) omega_1");
  detail::require(sc.samples > 0 && sc.nodes >= 3, "estimate_C_gn: bad sample configuration");
  std::mt19937_64 rng(sc.seed);
  double best = 0.0;
  for (int i = 0; i < sc.samples; ++i) best = std::max(best, gn_constant_ratio(detail::random_shape(rng, sc.nodes), gamma, theta, sc.max_j));
  detail::require(best > 0.0, "estimate_C_gn: every sample was degenerate");
  return best;
}

/// Partial sum of sum_{j >= 2} j (1/2)^{j-2}; the full series equals 6.
inline double mu0_series_sum(int terms = 200) {
  double s = 0.0;
  for (int j = 2; j < 2 + terms; ++j) s += j * std::ldexp(1.0, -(j - 2));
  return s;
}

/// mu_0 = (2 pi (1+theta)/3)^2 / (6 C).
inline double mu0_threshold(double theta, double C_est) {
  detail::require(theta >= 0.0, "mu0_threshold: theta must be nonnegative");
  detail::require(C_est > 0.0 && std::isfinite(C_est), "mu0_threshold: C_est must be positive");
  const double g = 2.0 * std::numbers::pi * (1.0 + theta) / 3.0;
  return g * g / (6.0 * C_est);
}

} // namespace wtm
