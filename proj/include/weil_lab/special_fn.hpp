#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "weil_lab/errors.hpp"
#include "weil_lab/quadrature.hpp"

namespace weil {

namespace detail {

// g = 7, n = 9 Lanczos coefficients.
inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
inline constexpr double kLanczosG = 7.0;

// B_{2k} / (2k)!, k = 1..30.
inline constexpr std::array<double, 30> kBernoulliOverFactorial = {
    0.083333333333333333333,   -0.0013888888888888888889,  0.000033068783068783068783,
    -8.2671957671957671958e-7, 2.0876756987868098979e-8,   -5.2841901386874931848e-10,
    1.3382536530684678833e-11, -3.3896802963225828668e-13, 8.5860620562778445641e-15,
    -2.174868698558061873e-16, 5.5090028283602295152e-18,  -1.3954464685812523341e-19,
    3.5347070396294674717e-21, -8.9535174270375468504e-23, 2.2679524523376830603e-24,
    -5.7447906688722024453e-26, 1.4551724756148649019e-27, -3.6859949406653101782e-29,
    9.336734257095044672e-31,  -2.3650224157006299346e-32, 5.9906717624821343047e-34,
    -1.5174548844682902617e-35, 3.8437581254541882322e-37, -9.7363530726466910353e-39,
    2.4662470442006809571e-40, -6.2470767418207436931e-42, 1.5824030244644914298e-43,
    -4.0082736859489359685e-45, 1.0153075855569556312e-46, -2.5718041582418717499e-48};

inline bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

}  // namespace detail

/// Principal branch of log Gamma(z).
///
/// Lanczos sum for Re z >= 1/2. Left of that the argument is shifted up with
/// log Gamma(z) = log Gamma(z + n) - sum log(z + k), which keeps the principal branch.
inline cplx log_gamma(cplx z) {
  if (detail::is_nonpositive_integer(z)) throw PoleError("log_gamma: pole at a nonpositive integer");
  if (z.real() < 0.5) {
    const int n = static_cast<int>(std::ceil(0.5 - z.real()));
    cplx shift{};
    for (int k = 0; k < n; ++k) shift += std::log(z + static_cast<double>(k));
    return log_gamma(z + static_cast<double>(n)) - shift;
  }
  const cplx w = z - 1.0;
  cplx series = detail::kLanczos[0];
  for (std::size_t i = 1; i < detail::kLanczos.size(); ++i) series += detail::kLanczos[i] / (w + static_cast<double>(i));
  const cplx t = w + detail::kLanczosG + 0.5;
  return 0.5 * std::log(2 * pi) + (w + 0.5) * std::log(t) - t + std::log(series);
}

/// psi(z) = Gamma'(z)/Gamma(z): upward recurrence to |z| >= 12 then the asymptotic series.
inline cplx digamma(cplx z) {
  if (detail::is_nonpositive_integer(z)) throw PoleError("digamma: pole at a nonpositive integer");
  if (z.real() < 0.5) {
    // reflection: psi(z) = psi(1-z) - pi cot(pi z)
    return digamma(1.0 - z) - pi / std::tan(pi * z);
  }
  cplx acc{};
  while (std::abs(z) < 12.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  const cplx inv2 = 1.0 / (z * z);
  // B_{2k}/(2k) for k = 1..8
  constexpr std::array<double, 8> c = {1.0 / 12,    -1.0 / 120,   1.0 / 252,  -1.0 / 240,
                                       1.0 / 132,   -691.0 / 32760, 1.0 / 12, -3617.0 / 8160};
  cplx series{};
  cplx p = inv2;
  for (double ck : c) {
    series += ck * p;
    p *= inv2;
  }
  return acc + std::log(z) - 0.5 / z - series;
}

namespace detail {

/// (s-1) zeta(s) and its s-derivative by Euler-Maclaurin, differentiated termwise.
struct ZetaPair {
  cplx value;       // (s-1) zeta(s)
  cplx derivative;  // d/ds [(s-1) zeta(s)]
};

inline constexpr int kEulerMaclaurinTerms = 25;

/// Cut-off N with |s + 2K| / (2 pi N) <= 1/2, so the correction terms shrink by >= 4x each.
inline std::size_t euler_maclaurin_cutoff(cplx s) {
  const double n = (std::abs(s) + 2.0 * kEulerMaclaurinTerms) / pi;
  return std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(n)));
}

/// Tail terms of the Euler-Maclaurin sum given N^{-s}, with the trapezoid endpoint and N^{1-s}.
inline void add_tail(cplx s, std::size_t N, cplx n_pow, ZetaPair& out, cplx& s0, cplx& ds0) {
  const double Nd = static_cast<double>(N);
  const double logN = std::log(Nd);
  // half endpoint
  s0 += 0.5 * n_pow;
  ds0 += -0.5 * logN * n_pow;
  // Bernoulli corrections: c_k P_k(s) N^{-s-2k+1}, P_k = s (s+1) ... (s+2k-2)
  cplx P = s, dP = 1.0;
  cplx npow_k = n_pow / Nd;  // N^{-s-1}
  for (int k = 1; k <= kEulerMaclaurinTerms; ++k) {
    if (k > 1) {
      const cplx a = s + static_cast<double>(2 * k - 3);
      const cplx b = s + static_cast<double>(2 * k - 2);
      dP = dP * a * b + P * (a + b);
      P = P * a * b;
      npow_k /= Nd * Nd;
    }
    const double c = kBernoulliOverFactorial[k - 1];
    s0 += c * P * npow_k;
    ds0 += c * (dP - logN * P) * npow_k;
  }
  const cplx n_one_minus_s = n_pow * Nd;
  out.value = (s - 1.0) * s0 + n_one_minus_s;
  out.derivative = s0 + (s - 1.0) * ds0 - logN * n_one_minus_s;
}

inline ZetaPair zeta_times_s_minus_one(cplx s) {
  const std::size_t N = euler_maclaurin_cutoff(s);
  cplx s0{}, ds0{};
  for (std::size_t n = 1; n < N; ++n) {
    const double ln = std::log(static_cast<double>(n));
    const cplx t = std::exp(-s * ln);
    s0 += t;
    ds0 -= ln * t;
  }
  ZetaPair out{};
  add_tail(s, N, std::exp(-s * std::log(static_cast<double>(N))), out, s0, ds0);
  return out;
}

}  // namespace detail

/// Riemann zeta. Euler-Maclaurin for Re s >= 0, functional equation to the left.
inline cplx zeta(cplx s) {
  if (s == cplx(1.0, 0.0)) throw PoleError("zeta: pole at s = 1");
  if (s.real() < 0.0) {
    const cplx one_minus = 1.0 - s;
    const cplx log_factor = s * std::log(2.0) + (s - 1.0) * std::log(pi) + log_gamma(one_minus);
    return std::exp(log_factor) * std::sin(pi * s / 2.0) * zeta(one_minus);
  }
  return detail::zeta_times_s_minus_one(s).value / (s - 1.0);
}

/// xi and xi' together with a relative-error estimate.
struct XiValue {
  cplx xi;
  cplx xi_prime;
  double rel_error;
};

/// xi(s) = mantissa * exp(log_scale), likewise xi'(s); usable at heights where xi underflows.
struct ScaledXi {
  cplx xi;
  cplx xi_prime;
  double log_scale;
};

inline constexpr double kValidatedImag = 120.0;
inline constexpr double kValidatedReal = 10.0;

namespace detail {

/// pi^{-s/2} Gamma(s/2 + 1) split as exp(log_scale) * phase and d/ds log of it.
struct Prefactor {
  double log_scale;
  cplx phase;
  cplx log_derivative;
};

inline Prefactor xi_prefactor(cplx s) {
  const cplx w = s / 2.0 + 1.0;
  const cplx lp = -s / 2.0 * std::log(pi) + log_gamma(w);
  return {lp.real(), std::polar(1.0, lp.imag()), -0.5 * std::log(pi) + 0.5 * digamma(w)};
}

inline ScaledXi xi_direct(cplx s) {
  const auto pre = xi_prefactor(s);
  const auto z = zeta_times_s_minus_one(s);
  return {pre.phase * z.value, pre.phase * (pre.log_derivative * z.value + z.derivative), pre.log_scale};
}

}  // namespace detail

/// xi and xi' in scaled form. Directly for Re s >= 0; xi(s) = xi(1-s), xi'(s) = -xi'(1-s) otherwise.
///
/// xi(s) = pi^{-s/2} Gamma(s/2+1) (s-1) zeta(s) has no removable singularities at s = 0, 1.
inline ScaledXi xi_scaled(cplx s) {
  if (s.real() < 0.0) {
    auto r = detail::xi_direct(1.0 - s);
    r.xi_prime = -r.xi_prime;
    return r;
  }
  return detail::xi_direct(s);
}

inline double xi_rel_error_estimate(cplx s) {
  const double over = std::max(std::abs(s.imag()) / kValidatedImag, std::abs(s.real()) / kValidatedReal);
  return over <= 1.0 ? 1e-12 : 1e-12 * over * over;
}

inline XiValue xi(cplx s) {
  const auto r = xi_scaled(s);
  const double scale = std::exp(r.log_scale);
  return {r.xi * scale, r.xi_prime * scale, xi_rel_error_estimate(s)};
}

inline cplx sharp(cplx (*f)(cplx), cplx z) { return std::conj(f(std::conj(z))); }

/// E_xi(z) = xi(1/2 - iz) + xi'(1/2 - iz).
inline cplx E_xi(cplx z) {
  const auto v = xi(0.5 - cplx(0, 1) * z);
  return v.xi + v.xi_prime;
}

/// E_xi in scaled form: value = mantissa * exp(log_scale).
struct ScaledValue {
  cplx mantissa;
  double log_scale;
};

inline ScaledValue E_xi_scaled(cplx z) {
  const auto v = xi_scaled(0.5 - cplx(0, 1) * z);
  return {v.xi + v.xi_prime, v.log_scale};
}

inline constexpr double kEZeroGuard = 1e-300;

/// Theta_xi(z) = E#(z)/E(z) with E#(z) = conj(E(conj z)).
inline cplx theta_xi(cplx z) {
  const auto e = E_xi_scaled(z);
  if (std::abs(e.mantissa) < kEZeroGuard) throw PoleError("theta_xi: E_xi vanishes at z");
  const auto es = z.imag() == 0.0 ? e : E_xi_scaled(std::conj(z));
  return std::exp(es.log_scale - e.log_scale) * std::conj(es.mantissa) / e.mantissa;
}

namespace detail {

/// (s-1) zeta(s) and derivative at s_k = sigma + i (t0 + k dt), k < count.
/// Blocks of consecutive points share one cut-off; n^{-s} phases advance by recurrence inside a block.
inline std::vector<ZetaPair> zeta_pairs_on_line(double sigma, double t0, double dt, std::size_t count) {
  constexpr std::size_t kBlock = 256;
  std::vector<ZetaPair> out(count);
  std::vector<double> amp, ln, pr, pim, rr, ri;
  for (std::size_t b0 = 0; b0 < count; b0 += kBlock) {
    const std::size_t b1 = std::min(count, b0 + kBlock);
    const double ta = t0 + dt * static_cast<double>(b0), tb = t0 + dt * static_cast<double>(b1 - 1);
    const double tmax = std::max(std::abs(ta), std::abs(tb));
    const std::size_t N = euler_maclaurin_cutoff(cplx(std::abs(sigma), tmax));
    const std::size_t m = N - 1;
    amp.resize(m); ln.resize(m); pr.resize(m); pim.resize(m); rr.resize(m); ri.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      ln[i] = std::log(static_cast<double>(i + 1));
      amp[i] = std::exp(-sigma * ln[i]);
      pr[i] = std::cos(ta * ln[i]);
      pim[i] = -std::sin(ta * ln[i]);
      rr[i] = std::cos(dt * ln[i]);
      ri[i] = -std::sin(dt * ln[i]);
    }
    for (std::size_t k = b0; k < b1; ++k) {
      double s_re = 0, s_im = 0, d_re = 0, d_im = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const double a_re = amp[i] * pr[i], a_im = amp[i] * pim[i];
        s_re += a_re;
        s_im += a_im;
        d_re -= ln[i] * a_re;
        d_im -= ln[i] * a_im;
        const double x = pr[i];
        pr[i] = x * rr[i] - pim[i] * ri[i];
        pim[i] = x * ri[i] + pim[i] * rr[i];
      }
      const cplx s(sigma, t0 + dt * static_cast<double>(k));
      cplx s0(s_re, s_im), ds0(d_re, d_im);
      add_tail(s, N, std::exp(-s * std::log(static_cast<double>(N))), out[k], s0, ds0);
    }
  }
  return out;
}

}  // namespace detail

namespace detail {

/// (xi + xi')(1/2 + ix) = mantissa * exp(log_scale) at x_k = x0 + k h, x_k >= 0 not required.
/// On the real line E(x) = conj of this value.
inline std::vector<ScaledValue> e_conj_on_line(double x0, double h, std::size_t count) {
  std::vector<ScaledValue> out(count);
  auto fill = [&](std::size_t first, std::size_t n, double t_first, double dt, bool mirrored) {
    if (n == 0) return;
    const auto pairs = zeta_pairs_on_line(0.5, t_first, dt, n);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx s(0.5, t_first + dt * static_cast<double>(j));
      const auto pre = xi_prefactor(s);
      const cplx q = pairs[j].value * (1.0 + pre.log_derivative) + pairs[j].derivative;
      const cplx v = pre.phase * q;
      // (xi + xi')(1/2 - it) = conj((xi + xi')(1/2 + it)) by the real symmetry of xi
      out[first + j] = {mirrored ? std::conj(v) : v, pre.log_scale};
    }
  };
  std::size_t first_nonneg = 0;
  while (first_nonneg < count && x0 + h * static_cast<double>(first_nonneg) < 0.0) ++first_nonneg;
  fill(first_nonneg, count - first_nonneg, x0 + h * static_cast<double>(first_nonneg), h, false);
  fill(0, first_nonneg, -x0, -h, true);
  return out;
}

}  // namespace detail

/// E_xi(x_k) at real nodes x_k = x0 + k h, in scaled form.
inline std::vector<ScaledValue> E_xi_on_line(double x0, double h, std::size_t count) {
  auto v = detail::e_conj_on_line(x0, h, count);
  for (auto& e : v) e.mantissa = std::conj(e.mantissa);
  return v;
}

/// Theta_xi at x_k = x0 + k h, k < count, for real nodes: Theta(x) = conj(E(x))/E(x).
inline std::vector<cplx> theta_xi_on_line(double x0, double h, std::size_t count) {
  const auto e = detail::e_conj_on_line(x0, h, count);
  std::vector<cplx> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    const cplx v = e[k].mantissa;
    if (std::abs(v) < kEZeroGuard) throw PoleError("theta_xi_on_line: E_xi vanishes at a node");
    out[k] = v / std::conj(v);
  }
  return out;
}

namespace detail {
inline double omega_series(double x) {
  const double e2 = std::exp(2 * x), e9 = std::exp(4.5 * x), e5 = std::exp(2.5 * x);
  double sum = 0.0;
  for (int n = 1; n < 100000; ++n) {
    const double n2 = static_cast<double>(n) * n;
    const double term = (2 * pi * pi * n2 * n2 * e9 - 3 * pi * n2 * e5) * std::exp(-pi * n2 * e2);
    sum += term;
    // terms decrease monotonically once pi n^2 e^{2x} exceeds 2
    if (pi * n2 * e2 > 2.0 && std::abs(term) < 1e-16 * std::max(1e-300, std::abs(sum))) break;
    if (pi * n2 * e2 > 2.0 && std::abs(term) < 1e-300) break;
  }
  return 2.0 * sum;
}
}  // namespace detail

/// Direct theta-series evaluation at x with no use of evenness.
inline double omega_series(double x) { return detail::omega_series(x); }

/// The Fourier inverse of xi(1/2 - iz):
/// 2 sum_n (2 pi^2 n^4 e^{9x/2} - 3 pi n^2 e^{5x/2}) exp(-pi n^2 e^{2x}).
/// For x < -1/2 the series cancels catastrophically and the even reflection is used.
inline double omega_profile(double x) {
  if (std::abs(x) > 5.0) throw DomainError("omega_profile: |x| must be <= 5");
  return detail::omega_series(x < -0.5 ? -x : x);
}

}  // namespace weil
