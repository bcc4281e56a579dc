#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "weil_lab/debranges.hpp"
#include "weil_lab/errors.hpp"
#include "weil_lab/grid.hpp"
#include "weil_lab/quadrature.hpp"
#include "weil_lab/test_function.hpp"
#include "weil_lab/zero_catalog.hpp"

namespace weil {

/// A numerically evaluated hermitian form.
struct FormValue {
  cplx value{};
  double tail_bound = 0.0;
  double quad_error = 0.0;

  double total_bound() const { return tail_bound + quad_error; }
};

inline nlohmann::json to_json(const FormValue& f) {
  return {{"value_re", f.value.real()}, {"value_im", f.value.imag()}, {"tail_bound", f.tail_bound},
          {"quad_error", f.quad_error}};
}

// ---- transforms of the objects that enter the form ----

inline QuadratureResult transform(const TestFunction& f, cplx z) { return fourier_at(f, z); }

/// Trapezoid transform of time samples. The error estimate compares with every other node,
/// which aliases the band and overstates the error.
inline QuadratureResult transform(const GridFunction& f, cplx z) {
  if (f.domain() != Domain::time) throw DomainError("transform: grid function must be time-domain");
  const auto& g = f.grid();
  const double h = g.spacing();
  const cplx step = std::exp(cplx(0, 1) * z * h);
  cplx phase = std::exp(cplx(0, 1) * z * g.x_min());
  cplx full{}, even{};
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 1024 == 0) phase = std::exp(cplx(0, 1) * z * g.node(i));
    const cplx t = f[i] * phase;
    full += g.weight(i) * t;
    if (i % 2 == 0) even += ((i == 0 || i + 2 >= n) ? h : 2 * h) * t;
    phase *= step;
  }
  return {full, std::abs(full - even)};
}

inline bool vanishes_off_catalog(const TestFunction&) { return false; }
inline bool vanishes_off_catalog(const GridFunction&) { return false; }

template <typename T>
concept Transformable = requires(const T& f, cplx z) {
  { transform(f, z) } -> std::same_as<QuadratureResult>;
  { vanishes_off_catalog(f) } -> std::convertible_to<bool>;
};

/// Linear combination of test functions and basis functions with an exact transform.
template <HermiteBiehlerModel M = XiModel>
struct Combination {
  std::vector<std::pair<cplx, TestFunction>> smooth;
  std::vector<std::pair<cplx, BasisFunction<M>>> basis;

  Combination scaled(cplx c) const {
    Combination r = *this;
    for (auto& t : r.smooth) t.first *= c;
    for (auto& t : r.basis) t.first *= c;
    return r;
  }
  Combination operator+(const Combination& o) const {
    Combination r = *this;
    r.smooth.insert(r.smooth.end(), o.smooth.begin(), o.smooth.end());
    r.basis.insert(r.basis.end(), o.basis.begin(), o.basis.end());
    return r;
  }
  Combination operator-(const Combination& o) const { return *this + o.scaled(-1.0); }
};

template <HermiteBiehlerModel M>
QuadratureResult transform(const Combination<M>& c, cplx z) {
  QuadratureResult r;
  for (const auto& [k, f] : c.smooth) {
    const auto q = fourier_at(f, z);
    r.value += k * q.value;
    r.error_estimate += std::abs(k) * q.error_estimate;
  }
  for (const auto& [k, b] : c.basis) {
    r.value += k * b(z);
    r.error_estimate += std::abs(k) * b.error_at(z);
  }
  return r;
}

template <HermiteBiehlerModel M>
bool vanishes_off_catalog(const Combination<M>& c) {
  return std::all_of(c.smooth.begin(), c.smooth.end(), [](const auto& t) { return t.first == cplx(0.0); });
}

// ---- the form ----

inline constexpr int kTailWindowSamples = 32;

/// sup over T <= |z| <= 2T of |z|^2 |a^(z)| |b^(z)|: the declared decay model for the terms beyond T.
template <Transformable A, Transformable B>
double tail_window_sup(const A& a, const B& b, double T) {
  double sup = 0.0;
  for (int k = 0; k < kTailWindowSamples; ++k) {
    const double x = T * (1.0 + static_cast<double>(k) / (kTailWindowSamples - 1));
    for (double z : {x, -x}) {
      sup = std::max(sup, z * z * std::abs(transform(a, z).value) * std::abs(transform(b, z).value));
    }
  }
  return sup;
}

/// sum over the zeros of m a^(gamma) conj(b^(conj gamma)). The tail bound covers |gamma| > T
/// through sum_{gamma > T} m/gamma^2 <= log(T)/T on each side.
template <Transformable A, Transformable B>
FormValue weil_pairing(const A& a, const B& b, std::span<const Zero> zeros, double T) {
  FormValue f;
  for (const auto& z : zeros) {
    const auto ra = transform(a, z.gamma);
    const auto rb = transform(b, std::conj(z.gamma));
    const double m = z.multiplicity;
    f.value += m * ra.value * std::conj(rb.value);
    f.quad_error += m * (ra.error_estimate * std::abs(rb.value) + std::abs(ra.value) * rb.error_estimate +
                         ra.error_estimate * rb.error_estimate);
  }
  if (!vanishes_off_catalog(a) && !vanishes_off_catalog(b))
    f.tail_bound = tail_window_sup(a, b, T) * 2.0 * zero_tail_density(T);
  return f;
}

template <Transformable A, Transformable B>
FormValue weil_pairing(const A& a, const B& b, const ZeroSet& zs) {
  const auto zeros = iterate_symmetric(zs);
  return weil_pairing(a, b, std::span<const Zero>(zeros), zs.height_T());
}

// ---- spectral coordinates ----

/// (S_gamma) aligned with the symmetric iteration of a zero set.
struct SpectralCoefficients {
  std::vector<Zero> zeros;
  std::vector<cplx> entries;
};

template <Transformable P>
SpectralCoefficients spectral_coeffs(const P& psi, const ZeroSet& zs) {
  SpectralCoefficients s{iterate_symmetric(zs), {}};
  s.entries.reserve(s.zeros.size());
  for (const auto& z : s.zeros) s.entries.push_back(transform(psi, z.gamma).value);
  return s;
}

/// sum m_gamma |S_gamma|^2.
inline double tau_norm(const SpectralCoefficients& S, const ZeroSet& zs) {
  const auto zeros = iterate_symmetric(zs);
  if (S.entries.size() != zeros.size()) throw DomainError("tau_norm: coefficients not aligned with the zero set");
  double s = 0.0;
  for (std::size_t k = 0; k < zeros.size(); ++k) s += zeros[k].multiplicity * std::norm(S.entries[k]);
  return s;
}

// ---- screw function ----

/// g(t) = sum m (e^{i gamma t} - 1)/gamma^2 over the symmetric iteration.
inline FormValue screw_g(double t, const ZeroSet& zs) {
  FormValue f;
  for (const auto& z : iterate_symmetric(zs)) f.value += static_cast<double>(z.multiplicity) * (std::exp(cplx(0, 1) * z.gamma * t) - 1.0) / (z.gamma * z.gamma);
  const double T = zs.height_T();
  f.tail_bound = 2.0 * zero_tail_density(T) * std::min(1.0, std::abs(t) * T);
  return f;
}

/// G(t, s) = g(t - s) - g(t) - g(-s) + g(0).
inline cplx screw_kernel(double t, double s, const ZeroSet& zs) {
  return screw_g(t - s, zs).value - screw_g(t, zs).value - screw_g(-s, zs).value + screw_g(0.0, zs).value;
}

namespace detail {

struct Nodes {
  std::vector<double> x, w;
};

inline Nodes gauss_nodes(double a, double b, std::size_t panels) {
  const auto& rule = GaussLegendre<32>::instance();
  Nodes n;
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + width * (static_cast<double>(p) + 0.5);
    for (int i = 0; i < 32; ++i) {
      n.x.push_back(mid + 0.5 * width * rule.nodes[i]);
      n.w.push_back(0.5 * width * rule.weights[i]);
    }
  }
  return n;
}

inline void require_mean_zero(const TestFunction& phi, const char* who) {
  if (!phi.compact()) throw DomainError(std::string(who) + ": function is not compactly supported");
  const auto [lo, hi] = phi.support();
  double scale = 0.0;
  for (const auto& a : phi.atoms()) scale += std::abs(a.coeff) * a.half_width;
  if (std::abs(phi.mean()) > 1e-10 * std::max(scale, 1e-300) && hi > lo)
    throw DomainError(std::string(who) + ": function must have zero mean");
}

/// Panels per unit resolving the test function and the oscillation of the largest ordinate.
inline std::size_t screw_panels(const TestFunction& phi, double gamma_max) {
  const auto [lo, hi] = phi.support();
  const double width = std::min(phi.resolution(), 4.0 / std::max(gamma_max, 1.0));
  return std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil((hi - lo) / width)));
}

/// Double Gauss-Legendre quadrature of G(t, s) phi1(s) conj(phi2(t)), with G assembled from
/// g evaluated at t - s, t, -s and 0.
inline cplx screw_quadrature(const TestFunction& phi1, const TestFunction& phi2, const ZeroSet& zs, double refine) {
  const double gmax = zs.empty() ? 1.0 : zs.ordinates().back();
  const auto [a1, b1] = phi1.support();
  const auto [a2, b2] = phi2.support();
  const auto s = gauss_nodes(a1, b1, static_cast<std::size_t>(std::ceil(screw_panels(phi1, gmax) * refine)));
  const auto t = gauss_nodes(a2, b2, static_cast<std::size_t>(std::ceil(screw_panels(phi2, gmax) * refine)));
  // g is real and even for a real symmetric zero set: g(x) = sum 2 m (cos(gamma x) - 1)/gamma^2.
  // cos(gamma (t - s)) is expanded through tables of cos and sin at the nodes.
  const std::size_t K = zs.size();
  std::vector<double> c(K);
  for (std::size_t k = 0; k < K; ++k) c[k] = 2.0 * zs.multiplicity(k) / (zs[k] * zs[k]);
  auto table = [&](const std::vector<double>& x, std::vector<double>& cs, std::vector<double>& sn) {
    cs.resize(x.size() * K);
    sn.resize(x.size() * K);
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t k = 0; k < K; ++k) {
        cs[i * K + k] = std::cos(zs[k] * x[i]);
        sn[i * K + k] = std::sin(zs[k] * x[i]);
      }
  };
  std::vector<double> cs_s, sn_s, cs_t, sn_t;
  table(s.x, cs_s, sn_s);
  table(t.x, cs_t, sn_t);
  auto g_at = [&](const double* ct, const double* st, const double* cs, const double* ss, double sign) {
    double v = 0.0;
    for (std::size_t k = 0; k < K; ++k) v += c[k] * (ct[k] * cs[k] + sign * st[k] * ss[k] - 1.0);
    return v;
  };
  std::vector<double> g_t(t.x.size()), g_s(s.x.size());
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    double v = 0.0;
    for (std::size_t k = 0; k < K; ++k) v += c[k] * (cs_t[i * K + k] - 1.0);
    g_t[i] = v;
  }
  for (std::size_t j = 0; j < s.x.size(); ++j) {
    double v = 0.0;
    for (std::size_t k = 0; k < K; ++k) v += c[k] * (cs_s[j * K + k] - 1.0);
    g_s[j] = v;  // g(-s) = g(s)
  }
  std::vector<cplx> f1(s.x.size());
  for (std::size_t j = 0; j < s.x.size(); ++j) f1[j] = s.w[j] * phi1(s.x[j]);
  cplx total{};
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    const cplx f2 = t.w[i] * std::conj(phi2(t.x[i]));
    if (f2 == cplx(0.0)) continue;
    cplx row{};
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      // cos(gamma (t - s)) = cos t cos s + sin t sin s
      const double g_diff = g_at(&cs_t[i * K], &sn_t[i * K], &cs_s[j * K], &sn_s[j * K], 1.0);
      const double G = g_diff - g_t[i] - g_s[j];  // g(0) = 0
      row += G * f1[j];
    }
    total += row * f2;
  }
  return total;
}

}  // namespace detail

/// The form sum over the support box of G(t, s) phi1(s) conj(phi2(t)), by double quadrature.
/// The tail bound comes from sup |phi1^ phi2^| on [T, 2T].
inline FormValue screw_form(const TestFunction& phi1, const TestFunction& phi2, const ZeroSet& zs) {
  detail::require_mean_zero(phi1, "screw_form");
  detail::require_mean_zero(phi2, "screw_form");
  FormValue f;
  if (phi1.empty() || phi2.empty()) return f;
  const cplx fine = detail::screw_quadrature(phi1, phi2, zs, 1.0);
  const cplx coarse = detail::screw_quadrature(phi1, phi2, zs, 0.5);
  f.value = fine;
  f.quad_error = std::abs(fine - coarse) + 1e-14 * std::abs(fine);
  const double T = zs.height_T();
  f.tail_bound = tail_window_sup(phi1, phi2, T) / (T * T) * 2.0 * zero_tail_density(T);
  return f;
}

/// The same form through the transforms: sum m phi1^(gamma) conj(phi2^(gamma)) / gamma^2.
inline FormValue screw_form_spectral(const TestFunction& phi1, const TestFunction& phi2, const ZeroSet& zs) {
  detail::require_mean_zero(phi1, "screw_form_spectral");
  detail::require_mean_zero(phi2, "screw_form_spectral");
  FormValue f;
  if (phi1.empty() || phi2.empty()) return f;
  for (const auto& z : iterate_symmetric(zs)) {
    const auto a = fourier_at(phi1, z.gamma), b = fourier_at(phi2, z.gamma);
    const double w = z.multiplicity / std::norm(z.gamma);
    f.value += w * a.value * std::conj(b.value);
    f.quad_error += w * (a.error_estimate * std::abs(b.value) + std::abs(a.value) * b.error_estimate);
  }
  const double T = zs.height_T();
  f.tail_bound = tail_window_sup(phi1, phi2, T) / (T * T) * 2.0 * zero_tail_density(T);
  return f;
}

// ---- witness for the separation condition ----

struct WitnessReport {
  double gamma;
  cplx value_at_gamma;         // should be 1
  double max_other;            // max |psi^(gamma')| over the other catalog zeros
  double epsilon;
  double delta;
  bool bound_holds;            // |psi^(gamma')| <= eps / |gamma - gamma'|^{1+delta} for all gamma'
};

/// psi = i sqrt(m pi) psi_gamma, so that psi^(gamma) = 1 and psi^ vanishes at the other zeros.
template <HermiteBiehlerModel M = XiModel>
std::pair<Combination<M>, WitnessReport> separation_witness(double gamma, const ZeroSet& zs, double epsilon = 1e-3,
                                                      double delta = 1.0, M model = {}) {
  const auto b = basis_F(gamma, zs, std::move(model));
  Combination<M> psi;
  psi.basis.push_back({cplx(0, 1) * std::sqrt(b.multiplicity() * pi), b});
  WitnessReport r{gamma, transform(psi, gamma).value, 0.0, epsilon, delta, true};
  for (const auto& z : iterate_symmetric(zs)) {
    if (std::abs(z.gamma - gamma) < BasisFunction<M>::kLimitRadius) continue;
    const double v = std::abs(transform(psi, z.gamma).value);
    r.max_other = std::max(r.max_other, v);
    if (v > epsilon / std::pow(std::abs(z.gamma - gamma), 1.0 + delta)) r.bound_holds = false;
  }
  return {psi, r};
}

}  // namespace weil
