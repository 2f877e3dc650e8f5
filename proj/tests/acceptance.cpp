// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "support.hpp"
#include "wtm/extremal.hpp"
#include "wtm/functionals.hpp"
#include "wtm/measures.hpp"
#include "wtm/profiles.hpp"
#include "wtm/rearrangement.hpp"
#include "wtm/sequences.hpp"

using namespace wtm;
using wtm::testing::Gen;
using wtm::testing::rel_err;
using wtm::testing::Stopwatch;

namespace {

// Pinned tolerances.
constexpr double kClosedFormRel = 1e-6;
constexpr double kClosedFormSeconds = 1.0;
constexpr double kGnRel = 1e-6;
constexpr double kMoserNormAbs = 1e-8;
constexpr double kChangeOfVariablesRel = 1e-6;
constexpr double kA1Abs = 1e-10;
constexpr double kSeriesAbs = 1e-9;
constexpr double kBlowupTarget = 1e3;
constexpr double kBlowupSeconds = 10.0;
constexpr double kVanishAbs = 0.01;
constexpr double kPolyaSzegoRel = 1e-3;
constexpr double kEquimeasurableRel = 1e-4;
constexpr double kDerivativeStep = 1e-4;
constexpr double kDerivativeRel = 1e-4;
constexpr double kExtremalSeconds = 60.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

Outcome closed_form() {
  Stopwatch sw;
  double worst = 0.0;
  for (double th : {0.0, 0.5, 1.0, 2.0}) {
    const auto u = wtm::testing::rational_profile(th);
    const double w = omega(th);
    worst = std::max(worst, rel_err(lp_norm_pow(u, 4.0, th), w / (3.0 * (1.0 + th))));
    worst = std::max(worst, rel_err(lp_norm_pow(u, 2.0, th), w / (1.0 + th)));
    worst = std::max(worst, rel_err(derivative_norm_pow(u, 2.0, 1.0), omega(1.0) * (1.0 + th) / 6.0));
  }
  const double t = sw.seconds();
  return {worst <= kClosedFormRel && t < kClosedFormSeconds, fmt("max rel err %.2e, %.2f s", worst, t)};
}

Outcome gn_trial() {
  double worst = 0.0;
  for (double th : {0.0, 0.5, 1.0, 2.0})
    worst = std::max(worst, rel_err(gn_ratio(wtm::testing::rational_profile(th), th), std::numbers::pi * (1.0 + th)));
  return {worst <= kGnRel, fmt("max rel err %.2e", worst)};
}

Outcome moser_normalization() {
  double norm_err = 0.0;
  double cov_err = 0.0;
  const double R = 1.0;
  for (double p : {2.0, 3.0}) {
    const auto wp = WeightParams::tm(p, 0.0);
    for (int j = 1; j <= 20; ++j) {
      const auto u = moser_radial(j, p, R, wp);
      const auto w = moser_log_profile(j, p);
      norm_err = std::max(norm_err, std::abs(derivative_norm(u, p, wp.alpha) - 1.0));
      cov_err = std::max(cov_err, rel_err(derivative_norm_pow(u, p, wp.alpha), w.dirichlet(p)));
      cov_err = std::max(cov_err, rel_err(lp_norm_pow(u, p, wp.theta), moser_rho(wp, R) * w.weighted_lp(p)));
    }
  }
  return {norm_err <= kMoserNormAbs && cov_err <= kChangeOfVariablesRel,
          fmt("max | ||u_j'|| - 1 | %.2e, change of variables rel err %.2e", norm_err, cov_err)};
}

Outcome aj_oracle() {
  const double exact = 2.0 - 4.0 / std::numbers::e;
  const double boost_val = a_j(1, 2.0);
  const double quad_val = moser_log_profile(1, 2.0).weighted_lp(2.0);
  const double series = mu0_series_sum(60);
  const double e1 = std::max(std::abs(boost_val - exact), std::abs(quad_val - exact));
  const double e2 = std::abs(series - 6.0);
  return {e1 <= kA1Abs && e2 <= kSeriesAbs, fmt("a_1 err %.2e, series err %.2e", e1, e2)};
}

Outcome blowup() {
  Stopwatch sw;
  const auto base = WeightParams::tm(2.0, 0.0);
  const double mu = 1.2 * base.mu_threshold();
  const auto wp = WeightParams::tm(2.0, 0.0, mu);
  int first = -1;
  for (int j = 1; j <= 100 && first < 0; ++j)
    if (blowup_bound(j, mu, wp, 1.0) > kBlowupTarget) first = j;
  bool dominated = true;
  double worst = std::numeric_limits<double>::infinity();
  for (int j : {5, 10, 20}) {
    const double direct = moser_exponential_integral(j, mu, wp, 1.0);
    // quadrature error: change when the profile is coarsened
    const auto u = moser_radial(j, 2.0, 1.0, wp);
    const auto uc = u.coarsened();
    const double n = sobolev_norm(uc, 2.0, 1.0, 0.0);
    const double coarse =
        omega(0.0) * integrate_values(uc, [&](double v) { return std::exp(mu * (v / n) * (v / n)); }, 0.0, 0.0, 1.0);
    const double err = std::abs(direct - coarse);
    const double bound = blowup_bound(j, mu, wp, 1.0);
    dominated = dominated && direct + err >= bound;
    worst = std::min(worst, direct / bound);
  }
  const double t = sw.seconds();
  return {first > 0 && dominated && t < kBlowupSeconds,
          fmt("bound > 1e3 first at j = %d, min integral/bound %.3g, %.2f s", first, worst, t)};
}

Outcome vanishing() {
  bool ok = true;
  double worst = 0.0;
  for (double th : {0.0, 1.0}) {
    const auto wp = WeightParams::tm(2.0, th, 1.0);
    const auto vf = default_vanishing_family(wp, 9);
    for (std::size_t n = 0; n < vf.lambdas.size(); ++n) {
      if (vf.lambdas[n] > 1e-3 * (1.0 + 1e-12)) continue;
      const double f = tm_value(vanishing_member(vf, n), wp);
      worst = std::max(worst, std::abs(f - 1.0));
    }
  }
  ok = worst <= kVanishAbs;
  // p = 2.5: every member with lambda in [1e-8, 1e-5] stays below the level.
  const auto wp = WeightParams::tm(2.5, 0.0, 1.0);
  const auto vf = default_vanishing_family(wp, 17);
  double tail_max = 0.0;
  for (std::size_t n = 10; n < vf.lambdas.size(); ++n) tail_max = std::max(tail_max, tm_value(vanishing_member(vf, n), wp));
  ok = ok && tail_max <= kVanishAbs;
  return {ok, fmt("p=2 max |F-1| %.2e for lambda <= 1e-3; p=2.5 max F %.2e for 1e-8 <= lambda <= 1e-5", worst, tail_max)};
}

Outcome polya_szego_suite() {
  struct W {
    double p, k, l;
  };
  const std::vector<W> ws{{2, 1, 1}, {2, 0.5, 0}, {3, 2.0 / 3.0, 0}, {1, 1, 1}};
  Gen g(20240607);
  double worst_gap = std::numeric_limits<double>::infinity();
  double worst_eq = 0.0;
  bool ok = true;
  for (int i = 0; i < 200; ++i) {
    const auto u = g.wiggly();
    for (const auto& w : ws) {
      const RearrangementWeights rw{w.k, w.l, w.p};
      rw.validate();
      const auto r = rearrange(u, w.l);
      const double before = dirichlet_weighted(u, rw);
      const double gap = before - dirichlet_weighted(r, rw);
      if (before > 0.0) worst_gap = std::min(worst_gap, gap / before);
      ok = ok && gap >= -kPolyaSzegoRel * before;
      for (double q : {1.0, 2.0, 4.0}) {
        const auto pw = [q](double v) { return std::pow(v, q); };
        const double a = integrate_values(u, pw, w.l);
        const double b = integrate_values(r, pw, w.l);
        if (a > 0.0) worst_eq = std::max(worst_eq, rel_err(b, a));
      }
    }
  }
  ok = ok && worst_eq <= kEquimeasurableRel;
  return {ok, fmt("min gap/I %.3e, max equimeasurability rel err %.2e", worst_gap, worst_eq)};
}

double dilated_value(const RadialProfile& u, double t, double mu, double theta) {
  const auto wp = WeightParams::tm(2.0, theta, mu);
  const auto ut = dilate(u, t, 0.5, 1.0 / (1.0 + theta));
  return tm_value(ut.scaled(1.0 / sobolev_norm(ut, 2.0, 1.0, theta)), wp);
}

Outcome derivative_formula() {
  Gen g(4004);
  double worst = 0.0;
  for (double th : {0.0, 1.0})
    for (double mu : {0.5, 3.0})
      for (int i = 0; i < 50; ++i) {
        const auto u = g.sphere(2.0, 1.0, th);
        const double analytic = dilation_derivative(u, mu, th);
        const double h = kDerivativeStep;
        const double fd = (dilated_value(u, 1.0 + h, mu, th) - dilated_value(u, 1.0 - h, mu, th)) / (2.0 * h);
        worst = std::max(worst, rel_err(fd, analytic));
      }
  return {worst <= kDerivativeRel, fmt("max rel diff %.2e", worst)};
}

Outcome small_mu() {
  const double gamma = 2.0 * std::numbers::pi / 3.0;
  const double C = estimate_C_gn(gamma, 0.0, SampleConfig{1000, 7, 30, 64});
  const double mu = 0.5 * mu0_threshold(0.0, C);
  Gen g(9009);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) worst = std::max(worst, dilation_derivative(g.sphere(2.0, 1.0, 0.0), mu, 0.0));
  return {worst < 0.0, fmt("C_est %.4g, mu %.4g, max derivative %.3e", C, mu, worst)};
}

Outcome extremal_excess() {
  const auto wp = WeightParams::tm(3.0, 0.0, 0.5 * tm_threshold(2.0, 0.0));
  const SearchConfig cfg;
  Stopwatch sw;
  const auto a = maximize_tm(wp, cfg);
  const double t = sw.seconds();
  const auto b = maximize_tm(wp, cfg);
  const bool same = a.trace == b.trace && a.value == b.value;
  const bool ok = a.exceeds_vanishing && a.margin > 0.0 && same && t < kExtremalSeconds;
  return {ok, fmt("value %.6f, level %.6f, margin %.3e (budget %.1e), deterministic %s, %.1f s", a.value,
                  a.vanishing_level, a.margin, a.evaluation.error_budget(), same ? "yes" : "no", t)};
}

Outcome tail_bound() {
  Gen g(1111);
  bool ok = true;
  double worst = 0.0;
  const double th_mu = tm_threshold(1.0, 0.0);
  for (double ratio : {0.5, 1.0}) {
    const auto wp = WeightParams::tm(2.0, 0.0, ratio * th_mu);
    const double a = a0(wp);
    const double bound = tm_tail_bound(a, wp);
    for (int i = 0; i < 100; ++i) {
      const auto u = g.sphere(2.0, 1.0, 0.0).scaled(g.uniform(0.2, 1.0));
      const double measured = detail::tm_integral(u, wp, SeriesPolicy{}, a);
      worst = std::max(worst, measured / bound);
      ok = ok && measured <= bound;
    }
  }
  return {ok, fmt("max measured/bound %.3e", worst)};
}

} // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"closed-form quadrature", closed_form},
      {"GN ratio of the trial profile", gn_trial},
      {"Moser normalization and change of variables", moser_normalization},
      {"a_j and series oracles", aj_oracle},
      {"blow-up above the threshold", blowup},
      {"vanishing limit", vanishing},
      {"Polya-Szego suite", polya_szego_suite},
      {"dilation derivative formula", derivative_formula},
      {"small-mu negativity", small_mu},
      {"excess over vanishing level", extremal_excess},
      {"tail bound", tail_bound},
  };
  int failed = 0;
  int k = 0;
  for (const auto& [name, run] : criteria) {
    ++k;
    Outcome o;
    Stopwatch sw;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.c_str(), sw.seconds());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
