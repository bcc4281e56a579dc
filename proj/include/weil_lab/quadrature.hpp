#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

namespace weil {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

/// Nodes and weights of the N-point Gauss-Legendre rule on [-1, 1].
template <int N>
struct GaussLegendre {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendre() {
    // Newton iteration on P_N from the Chebyshev-like initial guess.
    for (int i = 0; i < (N + 1) / 2; ++i) {
      double x = std::cos(pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= N; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      // recompute derivative at the converged node
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= N; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = N * (x * p1 - p0) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[N - 1 - i] = x;
      weights[i] = w;
      weights[N - 1 - i] = w;
    }
  }

  static const GaussLegendre& instance() {
    static const GaussLegendre rule;
    return rule;
  }
};

/// Composite Gauss-Legendre integral of f over [a, b] split into equal panels.
template <int N = 32, typename F>
auto integrate_panels(F&& f, double a, double b, std::size_t panels) {
  const auto& rule = GaussLegendre<N>::instance();
  using R = decltype(f(a));
  R sum{};
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double mid = lo + 0.5 * width;
    R part{};
    for (int i = 0; i < N; ++i) part += rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
    sum += part * (0.5 * width);
  }
  return sum;
}

/// Integral with an error estimate from a second pass at half the panel count.
struct QuadratureResult {
  cplx value{};
  double error_estimate = 0.0;
};

}  // namespace weil
