#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "wtm/errors.hpp"
#include "wtm/profiles.hpp"
#include "wtm/quadrature.hpp"
#include "wtm/radial_profile.hpp"

namespace wtm {

/// Exponents of the weighted Dirichlet integral int |u'|^p x^m dx with m = pk + (1-p)l.
struct RearrangementWeights {
  double k = 1.0;
  double l = 0.0;
  double p = 2.0;

  double m() const { return p * k + (1.0 - p) * l; }

  void validate() const {
    detail::require(std::isfinite(p) && p >= 1.0, "RearrangementWeights: p must be at least 1");
    detail::require(std::isfinite(l) && l >= 0.0, "RearrangementWeights: l must be nonnegative");
    detail::require(std::isfinite(k) && k > 0.0, "RearrangementWeights: k must be positive");
    detail::require(k <= l + 1.0, "RearrangementWeights: symmetrization hypothesis k <= l + 1 violated");
  }
};

/// Solves pk + (1-p)l = alpha with l = theta.
inline RearrangementWeights tm_weights_to_kl(const WeightParams& wp) {
  detail::require(wp.alpha <= wp.p + wp.theta, "symmetrization hypothesis violated: need alpha <= p + theta");
  const RearrangementWeights rw{(wp.alpha + (wp.p - 1.0) * wp.theta) / wp.p, wp.theta, wp.p};
  detail::require(rw.k > 0.0, "symmetrization hypothesis violated: need k > 0");
  return rw;
}

namespace detail {

// One piece of a profile seen through its level sets. For thresholds t below lo
// the piece lies entirely above t; for t in [lo, hi) it contributes partially.
struct LevelPiece {
  enum class Kind { Falling, Rising, Flat, LogHead, PowerTail };
  Kind kind;
  double lo;
  double hi;
  double xa;
  double xb;
  double ua;
  double ub;
  double full;
};

class LevelSets {
public:
  LevelSets(const RadialProfile& u, double l) : l_(l) {
    if (u.empty()) return;
    const auto x = u.nodes();
    const auto v = u.values();
    const double inf = std::numeric_limits<double>::infinity();
    if (const auto* lg = std::get_if<LogGrowth>(&u.head()); lg && lg->c > 0.0) {
      pieces_.push_back({LevelPiece::Kind::LogHead, v.front(), inf, 0.0, x.front(), v.front(), lg->c,
                         quad::power_integral(0.0, x.front(), l)});
    } else {
      pieces_.push_back({LevelPiece::Kind::Flat, v.front(), v.front(), 0.0, x.front(), v.front(), v.front(),
                         quad::power_integral(0.0, x.front(), l)});
    }
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double full = quad::power_integral(x[i], x[i + 1], l);
      if (v[i] > v[i + 1]) {
        pieces_.push_back({LevelPiece::Kind::Falling, v[i + 1], v[i], x[i], x[i + 1], v[i], v[i + 1], full});
      } else if (v[i] < v[i + 1]) {
        pieces_.push_back({LevelPiece::Kind::Rising, v[i], v[i + 1], x[i], x[i + 1], v[i], v[i + 1], full});
      } else {
        pieces_.push_back({LevelPiece::Kind::Flat, v[i], v[i], x[i], x[i + 1], v[i], v[i], full});
      }
    }
    if (const auto* pd = std::get_if<PowerDecay>(&u.tail()); pd && pd->c > 0.0) {
      pieces_.push_back({LevelPiece::Kind::PowerTail, 0.0, v.back(), x.back(), inf, pd->c, pd->s, inf});
      power_tail_ = true;
    }
  }

  bool has_power_tail() const { return power_tail_; }
  const std::vector<LevelPiece>& pieces() const { return pieces_; }

  double partial(const LevelPiece& e, double t) const {
    switch (e.kind) {
      case LevelPiece::Kind::Falling: {
        const double xc = std::min(e.xb, e.xa + (e.ua - t) / (e.ua - e.ub) * (e.xb - e.xa));
        return quad::power_integral(e.xa, xc, l_);
      }
      case LevelPiece::Kind::Rising: {
        const double xc = std::max(e.xa, e.xa + (t - e.ua) / (e.ub - e.ua) * (e.xb - e.xa));
        return quad::power_integral(xc, e.xb, l_);
      }
      case LevelPiece::Kind::LogHead: {
        const double xc = std::min(e.xb, e.xb * std::exp((e.lo - t) / e.ub));
        return quad::power_integral(0.0, xc, l_);
      }
      case LevelPiece::Kind::PowerTail: {
        if (t <= 0.0) throw NumericalFailure("superlevel set has infinite measure");
        const double xc = std::pow(e.ua / t, 1.0 / e.ub);
        return quad::power_integral(e.xa, std::max(e.xa, xc), l_);
      }
      case LevelPiece::Kind::Flat:
        return 0.0;
    }
    return 0.0;
  }

  /// mu_l({u > t})
  double rho(double t) const {
    double total = 0.0;
    for (const auto& e : pieces_) {
      if (e.kind == LevelPiece::Kind::Flat) {
        if (t < e.lo) total += e.full;
      } else if (t < e.lo) {
        total += e.full;
      } else if (t < e.hi) {
        total += partial(e, t);
      }
    }
    return total;
  }

  double x_of_mass(double m) const { return std::pow((l_ + 1.0) * m, 1.0 / (l_ + 1.0)); }

  /// rho restricted to a level band [lo, hi] between consecutive node values:
  /// evaluates to rho(t) inside, rho(lo) at lo and mu_l({u >= hi}) at hi.
  struct Band {
    const LevelSets* sets;
    double base = 0.0;
    std::vector<const LevelPiece*> active;

    double rho(double t) const {
      double total = base;
      for (const auto* e : active) total += sets->partial(*e, t);
      return total;
    }
    double x(double t) const { return sets->x_of_mass(rho(t)); }
  };

  Band band(double lo, double hi) const {
    Band b{this, 0.0, {}};
    for (const auto& e : pieces_) {
      if (e.kind == LevelPiece::Kind::Flat) {
        if (e.lo >= hi) b.base += e.full;
      } else if (e.lo >= hi) {
        b.base += e.full;
      } else if (e.lo <= lo && e.hi >= hi) {
        b.active.push_back(&e);
      }
    }
    return b;
  }

private:
  double l_;
  bool power_tail_ = false;
  std::vector<LevelPiece> pieces_;
};

struct NodeSink {
  std::vector<double> x;
  std::vector<double> v;

  void push(double xi, double vi) {
    if (!(xi > 0.0) || !std::isfinite(xi)) return;
    if (!x.empty() && xi <= x.back()) return;
    x.push_back(xi);
    v.push_back(vi);
  }
};

inline constexpr double kRearrangeBendTolerance = 1e-6;
inline constexpr int kRearrangeMaxDepth = 14;

// Adds graph points of u* strictly between (ta, xa) and (tb, xb), then (tb, xb).
// A chord is kept once its midpoint lies within tolerance * xb of the graph.
inline void refine_band(const LevelSets::Band& band, double ta, double xa, double tb, double xb, int depth,
                        NodeSink& sink) {
  if (depth < kRearrangeMaxDepth && xb > xa) {
    const double tm = 0.5 * (ta + tb);
    const double xm = band.x(tm);
    if (std::abs(xm - 0.5 * (xa + xb)) > kRearrangeBendTolerance * xb) {
      refine_band(band, ta, xa, tm, xm, depth + 1, sink);
      refine_band(band, tm, xm, tb, xb, depth + 1, sink);
      return;
    }
  }
  sink.push(xb, tb);
}

} // namespace detail

/// mu_l({u > t}) = integral of x^l over the superlevel set.
inline double distribution(const RadialProfile& u, double t, double l) {
  detail::require(t >= 0.0 && std::isfinite(t), "distribution: t must be nonnegative");
  detail::require(l >= 0.0 && std::isfinite(l), "distribution: l must be nonnegative");
  return detail::LevelSets(u, l).rho(t);
}

/// Half weighted Schwarz symmetrization: the nonincreasing profile equimeasurable
/// with u under x^l dx, u*(x) = sup{t : rho(t) > x^{l+1}/(l+1)}.
inline RadialProfile rearrange(const RadialProfile& u, double l) {
  detail::require(l >= 0.0 && std::isfinite(l), "rearrange: l must be nonnegative");
  if (u.empty() || u.is_nonincreasing()) return u;

  const detail::LevelSets sets(u, l);
  std::vector<double> levels(u.values().begin(), u.values().end());
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const double top = levels.front();
  if (top == 0.0) return {};

  detail::NodeSink sink;
  const auto* lg = std::get_if<LogGrowth>(&u.head());
  const bool log_head = lg && lg->c > 0.0;
  if (log_head) sink.push(sets.x_of_mass(sets.rho(top)), top);

  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    const double hi = levels[k];
    const double lo = levels[k + 1];
    const auto band = sets.band(lo, hi);
    double ta = hi;
    double xa = band.x(hi);
    if (!(xa > 0.0)) {
      // The maximum is attained on a null set: approach it geometrically.
      for (int j = 48; j >= 1; --j) {
        const double tj = hi - (hi - lo) * std::ldexp(1.0, -j);
        const double xj = band.x(tj);
        if (!(xj > 0.0)) continue;
        if (xa > 0.0) {
          detail::refine_band(band, ta, xa, tj, xj, 0, sink);
        } else {
          sink.push(xj, tj);
        }
        ta = tj;
        xa = xj;
      }
    } else {
      sink.push(xa, ta);
    }
    detail::refine_band(band, ta, xa, lo, band.x(lo), 0, sink);
  }

  TailModel tail = ZeroTail{};
  const double bottom = levels.back();
  if (sets.has_power_tail() && bottom > 0.0) {
    const auto& pd = std::get<PowerDecay>(u.tail());
    const auto band = sets.band(0.0, bottom);
    double ta = bottom;
    double xa = band.x(bottom);
    sink.push(xa, ta);
    const double x_stop = 1e3 * std::max(u.back_node(), xa);
    for (int j = 1; j <= 4000; ++j) {
      const double tj = bottom * std::exp2(-0.25 * j);
      const double xj = band.x(tj);
      detail::refine_band(band, ta, xa, tj, xj, 0, sink);
      ta = tj;
      xa = xj;
      if (xj >= x_stop) break;
    }
    tail = PowerDecay{sink.v.back() * std::pow(sink.x.back(), pd.s), pd.s};
  }

  if (sink.x.size() < 2) throw NumericalFailure("rearrange: level sets produced fewer than two nodes");
  HeadModel head = ConstantHead{};
  if (log_head) head = LogGrowth{lg->c};
  return RadialProfile(std::move(sink.x), std::move(sink.v), tail, head);
}

/// int |u'|^p x^m dx, exact on each linear cell.
inline double dirichlet_weighted(const RadialProfile& u, const RearrangementWeights& rw) {
  detail::require(std::isfinite(rw.p) && rw.p >= 1.0, "dirichlet_weighted: p must be at least 1");
  return derivative_integral(u, rw.p, rw.m());
}

struct PolyaSzegoResult {
  double original = 0.0;
  double rearranged = 0.0;
  double gap() const { return original - rearranged; }
};

inline PolyaSzegoResult polya_szego(const RadialProfile& u, const RearrangementWeights& rw) {
  rw.validate();
  return {dirichlet_weighted(u, rw), dirichlet_weighted(rearrange(u, rw.l), rw)};
}

/// I(u) - I(u*); nonnegative up to discretization.
inline double polya_szego_gap(const RadialProfile& u, const RearrangementWeights& rw) {
  return polya_szego(u, rw).gap();
}

} // namespace wtm
