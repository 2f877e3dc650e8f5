#pragma once

// Seeded profile generators shared by the property tests and the acceptance run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wtm/measures.hpp"
#include "wtm/radial_profile.hpp"

namespace wtm::testing {

class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

  /// Increasing nodes from a random start with random geometric gaps.
  std::vector<double> nodes(int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    x[0] = log_uniform(1e-2, 1.0);
    for (std::size_t i = 1; i < x.size(); ++i) x[i] = x[i - 1] * (1.0 + log_uniform(0.01, 1.0));
    return x;
  }

  /// Piecewise-linear, generally non-monotone, nonnegative, zero at the last node.
  RadialProfile wiggly(int min_nodes = 4, int max_nodes = 40) {
    const int n = integer(min_nodes, max_nodes);
    auto x = nodes(n);
    std::vector<double> v(x.size());
    for (auto& val : v) val = uniform(0.0, 1.0) < 0.15 ? 0.0 : uniform(0.0, 2.0);
    v.back() = 0.0;
    return RadialProfile(std::move(x), std::move(v));
  }

  /// Nonincreasing, positive before the last node, zero at the last node.
  RadialProfile decreasing(int min_nodes = 3, int max_nodes = 40) {
    const int n = integer(min_nodes, max_nodes);
    auto x = nodes(n);
    std::vector<double> v(x.size(), 0.0);
    const double sharp = uniform(0.3, 3.0);
    for (std::size_t i = v.size() - 1; i-- > 0;) v[i] = v[i + 1] + std::pow(uniform(1e-3, 1.0), sharp);
    return RadialProfile(std::move(x), std::move(v));
  }

  /// Nonincreasing profile on the unit sphere of W^{1,p}_{alpha,theta}.
  RadialProfile sphere(double p, double alpha, double theta) {
    const auto u = decreasing();
    return u.scaled(1.0 / sobolev_norm(u, p, alpha, theta));
  }

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// 1/(1+x^{1+theta}) on 2^15 geometric nodes over [1e-6, 1e6] with its exact power tail.
inline RadialProfile rational_profile(double theta, std::size_t nodes = 1u << 15) {
  const auto g = QuadratureGrid::geometric(1e-6, 1e6, nodes);
  return RadialProfile::sample_with_power_tail([&](double x) { return 1.0 / (1.0 + std::pow(x, 1.0 + theta)); },
                                               g.nodes(), 1.0 + theta);
}

} // namespace wtm::testing
