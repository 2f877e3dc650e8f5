#pragma once

// Low-level integration kernels shared by the profile and measure layers.

#include <array>
#include <cmath>
#include <limits>

#include "wtm/errors.hpp"

namespace wtm::quad {

inline constexpr std::array<double, 4> kGauss4Nodes{-0.8611363115940526, -0.3399810435848563,
                                                    0.3399810435848563, 0.8611363115940526};
inline constexpr std::array<double, 4> kGauss4Weights{0.3478548451374538, 0.6521451548625461,
                                                      0.6521451548625461, 0.3478548451374538};
inline constexpr std::array<double, 8> kGauss8Nodes{
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGauss8Weights{
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

template <class F, std::size_t N>
double gauss(F&& f, double a, double b, const std::array<double, N>& nodes,
             const std::array<double, N>& weights) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t k = 0; k < N; ++k) sum += weights[k] * f(mid + half * nodes[k]);
  return sum * half;
}

namespace detail {

template <class F>
double adaptive_step(F& f, double a, double b, double whole, double abs_tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss(f, a, m, kGauss8Nodes, kGauss8Weights);
  const double right = gauss(f, m, b, kGauss8Nodes, kGauss8Weights);
  const double both = left + right;
  if (depth >= 30 || std::abs(both - whole) <= abs_tol || both == whole) return both;
  return adaptive_step(f, a, m, left, abs_tol, depth + 1) + adaptive_step(f, m, b, right, abs_tol, depth + 1);
}

} // namespace detail

/// 8-point Gauss-Legendre on [a,b], bisecting until the rule agrees with its two halves
/// to rel_tol of the whole interval's estimate. Intervals with b/a > 2 are first split
/// geometrically so power weights stay well resolved.
template <class F>
double adaptive(F&& f, double a, double b, double rel_tol = 1e-13, int depth = 0) {
  if (!(b > a)) return 0.0;
  if (a > 0.0 && b > 2.0 * a) {
    if (depth >= 60) return gauss(f, a, b, kGauss8Nodes, kGauss8Weights);
    const double m = std::sqrt(a * b);
    return adaptive(f, a, m, rel_tol, depth + 1) + adaptive(f, m, b, rel_tol, depth + 1);
  }
  const double whole = gauss(f, a, b, kGauss8Nodes, kGauss8Weights);
  return detail::adaptive_step(f, a, b, whole, rel_tol * std::abs(whole), 0);
}

/// Integral of f over [0, tau_end) on geometrically growing panels. With an
/// infinite end the sum stops once three consecutive panels are negligible;
/// an integrand that never becomes negligible is reported as divergent.
template <class F>
double panels(F&& f, double tau_end = std::numeric_limits<double>::infinity()) {
  constexpr double kMaxTau = 1e5;
  double tau = 0.0;
  double width = 0.25;
  double total = 0.0;
  int quiet = 0;
  while (tau < tau_end) {
    const double next = std::min(tau + width, tau_end);
    const double piece = adaptive(f, tau, next);
    if (!std::isfinite(piece)) throw NumericalFailure("integral over unbounded range diverges");
    total += piece;
    tau = next;
    width *= 1.25;
    if (std::isinf(tau_end)) {
      quiet = (std::abs(piece) <= 1e-17 * std::abs(total)) ? quiet + 1 : 0;
      if (quiet >= 3 || (total == 0.0 && piece == 0.0 && tau > 50.0)) return total;
      if (tau > kMaxTau) throw NumericalFailure("integral over unbounded range does not converge");
    }
  }
  return total;
}

/// Integral of x^e over [a,b], 0 <= a <= b, stable for b close to a.
inline double power_integral(double a, double b, double e) {
  if (!(b > a)) return 0.0;
  const double k = e + 1.0;
  if (a == 0.0) {
    if (k <= 0.0) throw NumericalFailure("x^e is not integrable at 0");
    return std::pow(b, k) / k;
  }
  if (std::isinf(b)) {
    if (k >= 0.0) throw NumericalFailure("x^e is not integrable at infinity");
    return -std::pow(a, k) / k;
  }
  const double log_ratio = std::log1p((b - a) / a);
  if (k == 0.0) return log_ratio;
  return std::pow(a, k) * std::expm1(k * log_ratio) / k;
}

} // namespace wtm::quad
