#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <span>
#include <utility>
#include <vector>

#include "weil_lab/errors.hpp"
#include "weil_lab/grid.hpp"
#include "weil_lab/quadrature.hpp"
#include "weil_lab/special_fn.hpp"
#include "weil_lab/test_function.hpp"
#include "weil_lab/zero_catalog.hpp"

namespace weil {

// ---------------------------------------------------------------------------
// Hermite-Biehler models. E = A + iA' for a real entire A with real zeros only,
// Theta = E#/E. The xi model is the one that matters; the lifted model raises
// the multiplicity of one zero so that m_gamma > 1 formulas can be exercised.
// ---------------------------------------------------------------------------

template <typename M>
concept HermiteBiehlerModel = requires(const M& m, cplx z, double x, std::size_t n) {
  { m.E(z) } -> std::convertible_to<cplx>;
  { m.theta(z) } -> std::convertible_to<cplx>;
  { m.theta_line(x, x, n) } -> std::convertible_to<std::vector<cplx>>;
};

struct XiModel {
  cplx E(cplx z) const { return E_xi(z); }
  cplx theta(cplx z) const { return theta_xi(z); }
  std::vector<cplx> theta_line(double x0, double h, std::size_t n) const { return theta_xi_on_line(x0, h, n); }

  /// E at real nodes; throws where E underflows.
  std::vector<cplx> E_line(double x0, double h, std::size_t n) const {
    const auto v = E_xi_on_line(x0, h, n);
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = v[k].mantissa * std::exp(v[k].log_scale);
    return out;
  }
};

/// A(z) (z - gamma)^extra with E = A + iA'. With kappa = extra/(z - gamma),
/// Theta_lift = (Theta - i kappa (1+Theta)/2) / (1 + i kappa (1+Theta)/2).
template <HermiteBiehlerModel Base = XiModel>
struct LiftedModel {
  Base base{};
  double gamma = 0.0;
  int extra = 1;

  cplx theta(cplx z) const { return lift(z, base.theta(z)); }

  std::vector<cplx> theta_line(double x0, double h, std::size_t n) const {
    auto t = base.theta_line(x0, h, n);
    for (std::size_t k = 0; k < n; ++k) t[k] = lift(cplx(x0 + h * static_cast<double>(k)), t[k]);
    return t;
  }

  cplx E(cplx z) const {
    const cplx e = base.E(z);
    const cplx a = 0.5 * (e + std::conj(base.E(std::conj(z))));
    const cplx d = z - gamma;
    const cplx p = std::pow(d, extra);
    const cplx dp = static_cast<double>(extra) * std::pow(d, extra - 1);
    return p * e + cplx(0, 1) * a * dp;
  }

  std::vector<cplx> E_line(double x0, double h, std::size_t n) const {
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = E(cplx(x0 + h * static_cast<double>(k)));
    return out;
  }

 private:
  cplx lift(cplx z, cplx t) const {
    if (z == cplx(gamma)) return -1.0;
    const cplx u = cplx(0, 1) * (static_cast<double>(extra) / (z - gamma)) * (1.0 + t) / 2.0;
    return (t - u) / (1.0 + u);
  }
};

// ---------------------------------------------------------------------------
// Theta'(gamma) and the basis F_gamma
// ---------------------------------------------------------------------------

struct ThetaPrime {
  cplx value;       // Richardson extrapolation
  cplx coarse;      // central difference, step h
  cplx fine;        // central difference, step h/2
  double step_gap;  // |coarse - fine|
};

/// Central differences of Theta at steps 1e-4 and 5e-5 combined by Richardson extrapolation.
template <HermiteBiehlerModel M = XiModel>
ThetaPrime theta_prime_at_zero(double gamma, const M& model = {}) {
  constexpr double h = 1e-4;
  auto central = [&](double step) {
    return (model.theta(cplx(gamma + step)) - model.theta(cplx(gamma - step))) / (2.0 * step);
  };
  const cplx c = central(h), f = central(h / 2);
  return {(4.0 * f - c) / 3.0, c, f, std::abs(c - f)};
}

/// F_gamma(z) = sqrt(m/pi) (1 + Theta(z)) / (2 (z - gamma)); within 1e-6 of gamma the limit
/// sqrt(m/pi) Theta'(gamma)/2 is used.
template <HermiteBiehlerModel M = XiModel>
class BasisFunction {
 public:
  static constexpr double kLimitRadius = 1e-6;

  BasisFunction(double gamma, int multiplicity, M model = {})
      : gamma_(gamma), m_(multiplicity), norm_(std::sqrt(multiplicity / pi)), model_(std::move(model)) {
    if (multiplicity < 1) throw DomainError("BasisFunction: multiplicity must be >= 1");
    const auto tp = theta_prime_at_zero(gamma_, model_);
    limit_ = norm_ * tp.value / 2.0;
    limit_error_ = norm_ * tp.step_gap;
  }

  double gamma() const { return gamma_; }
  int multiplicity() const { return m_; }
  double normalization() const { return norm_; }
  const M& model() const { return model_; }

  cplx operator()(cplx z) const {
    if (std::abs(z - gamma_) < kLimitRadius) return limit_;
    return from_theta(z, model_.theta(z));
  }

  /// Value at real z given Theta(z) already sampled.
  cplx from_theta(cplx z, cplx theta) const {
    if (std::abs(z - gamma_) < kLimitRadius) return limit_;
    return norm_ * (1.0 + theta) / (2.0 * (z - gamma_));
  }

  /// Error estimate of a value: round-off away from gamma, the Richardson gap at the limit.
  double error_at(cplx z) const { return std::abs(z - gamma_) < kLimitRadius ? limit_error_ : 1e-13; }

 private:
  double gamma_;
  int m_;
  double norm_;
  M model_;
  cplx limit_{};
  double limit_error_ = 0.0;
};

/// Basis function for an ordinate (either sign) of the catalog.
template <HermiteBiehlerModel M = XiModel>
BasisFunction<M> basis_F(double gamma, const ZeroSet& zs, M model = {}) {
  const auto idx = zs.find(std::abs(gamma));
  if (!idx) throw DomainError("basis_F: gamma is not a catalog ordinate");
  return BasisFunction<M>(gamma, zs.multiplicity(*idx), std::move(model));
}

/// Theta sampled on a uniform real grid; reused by every frequency-side computation on that grid.
struct ThetaSamples {
  Grid grid;
  std::vector<cplx> values;
};

template <HermiteBiehlerModel M = XiModel>
ThetaSamples sample_theta(const Grid& freq, const M& model = {}) {
  return {freq, model.theta_line(freq.x_min(), freq.spacing(), freq.size())};
}

/// Frequency grid on [-Z, Z] fine enough to invert onto a time grid reaching max|x|.
inline Grid frequency_grid_for(double Z, const Grid& time) { return Grid::with_spacing(-Z, Z, pi / (4.0 * time.max_abs())); }

/// sum_k c_k F_{gamma_k} sampled on the Theta grid.
template <HermiteBiehlerModel M>
GridFunction sample_basis_sum(std::span<const std::pair<cplx, BasisFunction<M>>> terms, const ThetaSamples& th) {
  std::vector<cplx> v(th.grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = th.grid.node(i);
    cplx s{};
    for (const auto& [c, b] : terms) s += c * b.from_theta(x, th.values[i]);
    v[i] = s;
  }
  return GridFunction(th.grid, std::move(v), Domain::frequency);
}

template <HermiteBiehlerModel M>
GridFunction sample_basis(const BasisFunction<M>& b, const ThetaSamples& th) {
  const std::pair<cplx, BasisFunction<M>> term{cplx(1.0), b};
  return sample_basis_sum<M>(std::span(&term, 1), th);
}

// ---------------------------------------------------------------------------
// psi_gamma: the L^2 function whose transform is F_gamma
// ---------------------------------------------------------------------------

inline constexpr double kMinCutoff = 500.0;

/// Time samples of psi_gamma together with the exact transform F_gamma.
template <HermiteBiehlerModel M = XiModel>
struct PsiGamma {
  BasisFunction<M> basis;
  GridFunction samples;
  double cutoff_Z;
  double tail_bound;  // L^2 mass of F_gamma outside [-Z, Z] (frequency side)
};

/// L^2 mass of F_gamma outside [-Z, Z].
inline double basis_tail_bound(double gamma, double Z) { return 2.0 / (pi * (Z - std::abs(gamma))); }

template <HermiteBiehlerModel M>
PsiGamma<M> psi_gamma(const BasisFunction<M>& b, const ThetaSamples& th, const Grid& out) {
  const double Z = th.grid.max_abs();
  if (Z < kMinCutoff) throw DomainError("psi_gamma: cutoff Z must be >= 500");
  auto psi = inverse_fourier_grid(sample_basis(b, th), out);
  return {b, std::move(psi), Z, basis_tail_bound(b.gamma(), Z)};
}

template <HermiteBiehlerModel M = XiModel>
PsiGamma<M> psi_gamma(const BasisFunction<M>& b, double Z, const Grid& out) {
  if (Z < kMinCutoff) throw DomainError("psi_gamma: cutoff Z must be >= 500");
  return psi_gamma(b, sample_theta(frequency_grid_for(Z, out), b.model()), out);
}

template <HermiteBiehlerModel M>
QuadratureResult transform(const PsiGamma<M>& p, cplx z) {
  return {p.basis(z), p.basis.error_at(z)};
}

/// F_gamma vanishes at every zero other than gamma, catalogued or not.
template <HermiteBiehlerModel M>
bool vanishes_off_catalog(const PsiGamma<M>&) {
  return true;
}

// ---------------------------------------------------------------------------
// K = F^{-1} M_Theta J F
// ---------------------------------------------------------------------------

/// K psi on the time grid of psi. Theta samples fix the frequency grid; it must satisfy
/// Z h_time <= pi and h_freq max|x| <= pi/4.
inline GridFunction K_apply(const GridFunction& psi, const ThetaSamples& th) {
  if (psi.domain() != Domain::time) throw DomainError("K_apply: input must be time-domain");
  const auto F = fourier_grid(psi, th.grid);
  std::vector<cplx> v(F.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = th.values[i] * std::conj(F[i]);
  return inverse_fourier_grid(GridFunction(th.grid, std::move(v), Domain::frequency), psi.grid());
}

template <HermiteBiehlerModel M = XiModel>
GridFunction K_apply(const GridFunction& psi, double Z, const M& model = {}) {
  return K_apply(psi, sample_theta(frequency_grid_for(Z, psi.grid()), model));
}

// ---------------------------------------------------------------------------
// V(t) diagnostics
// ---------------------------------------------------------------------------

struct MembershipReport {
  double t = 0.0;
  double negative_mass = 0.0;    // L^2 mass of psi on (-inf, t)
  double k_negative_mass = 0.0;  // L^2 mass of K psi on (-inf, t)
  double k_residual = 0.0;       // ||K psi - psi||_2
  double verdict_threshold = 0.0;
};

inline double mass_below(const GridFunction& f, double t) {
  const auto& g = f.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < g.size() && g.node(i) < t; ++i) s += g.weight(i) * std::norm(f[i]);
  return s;
}

inline constexpr double kMembershipMargin = 1.0;

/// Continuous diagnostics for psi in V(t), given psi and K psi on the same grid.
inline MembershipReport v_membership(const GridFunction& psi, const GridFunction& k_psi, double t, double threshold) {
  if (!(psi.grid() == k_psi.grid())) throw DomainError("v_membership: psi and K psi grids differ");
  if (psi.grid().x_min() > t - kMembershipMargin || psi.grid().x_max() <= t)
    throw DomainError("v_membership: grid must cover [t - 1, x_max] with x_max > t");
  MembershipReport r;
  r.t = t;
  r.negative_mass = mass_below(psi, t);
  r.k_negative_mass = mass_below(k_psi, t);
  r.k_residual = norm_grid(k_psi - psi);
  r.verdict_threshold = threshold;
  return r;
}

template <HermiteBiehlerModel M = XiModel>
MembershipReport v_membership(const GridFunction& psi, double t, double Z, double threshold, const M& model = {}) {
  return v_membership(psi, K_apply(psi, Z, model), t, threshold);
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

/// ||F / E||_{L^2} on the frequency grid of F.
template <HermiteBiehlerModel M = XiModel>
double debranges_norm(const GridFunction& F, const M& model = {}) {
  if (F.domain() != Domain::frequency) throw DomainError("debranges_norm: input must be frequency-domain");
  const auto& g = F.grid();
  const auto e = model.E_line(g.x_min(), g.spacing(), g.size());
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(e[i]) < kEZeroGuard) throw PoleError("debranges_norm: E vanishes or underflows at a node; re-grid");
    s += g.weight(i) * std::norm(F[i] / e[i]);
  }
  return std::sqrt(s);
}

struct IsometryCheck {
  double lhs;         // grid ||F_gamma||^2 on [-Z, Z]
  double rhs;         // sum |F_gamma(gamma')|^2 pi m_gamma'
  double tail_bound;  // mass of F_gamma outside [-Z, Z]
};

/// Restriction to the zeros, weighted by mu(gamma') = 2 pi/|Theta'(gamma')| = pi m_gamma'.
template <HermiteBiehlerModel M>
IsometryCheck restriction_isometry_check(const BasisFunction<M>& b, const ZeroSet& zs, const ThetaSamples& th) {
  const auto F = sample_basis(b, th);
  double rhs = 0.0;
  for (const auto& z : iterate_symmetric(zs)) rhs += std::norm(b(z.gamma)) * pi * z.multiplicity;
  return {norm_sq_grid(F), rhs, basis_tail_bound(b.gamma(), th.grid.max_abs())};
}

template <HermiteBiehlerModel M = XiModel>
IsometryCheck restriction_isometry_check(double gamma, const ZeroSet& zs, double Z, double h, const M& model = {}) {
  const auto b = basis_F(gamma, zs, model);
  return restriction_isometry_check(b, zs, sample_theta(Grid::with_spacing(-Z, Z, h), model));
}

}  // namespace weil
