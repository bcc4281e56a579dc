#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "weil_lab/debranges.hpp"
#include "weil_lab/errors.hpp"
#include "weil_lab/grid.hpp"
#include "weil_lab/weil_form.hpp"
#include "weil_lab/zero_catalog.hpp"

namespace weil {

/// S_theta(z) = (i/2)(e^{i theta} E(z) - e^{-i theta} E#(z)).
template <HermiteBiehlerModel M = XiModel>
cplx s_theta(double theta, cplx z, const M& model = {}) {
  const cplx e = model.E(z);
  const cplx es = std::conj(model.E(std::conj(z)));
  const cplx i(0, 1);
  return 0.5 * i * (std::polar(1.0, theta) * e - std::polar(1.0, -theta) * es);
}

/// Self-adjoint extension parameter theta in [0, pi) and the base point w0 with S_theta(w0) != 0.
template <HermiteBiehlerModel M = XiModel>
class ExtensionParams {
 public:
  explicit ExtensionParams(double theta, cplx w0 = cplx(0, 1), M model = {})
      : theta_(theta), w0_(w0), model_(std::move(model)) {
    if (!(theta >= 0.0 && theta < pi)) throw DomainError("ExtensionParams: theta must lie in [0, pi)");
    s_w0_ = s_theta(theta_, w0_, model_);
    if (!(std::abs(s_w0_) > 0.0)) throw DomainError("ExtensionParams: S_theta(w0) vanishes");
  }

  double theta() const { return theta_; }
  cplx w0() const { return w0_; }
  cplx s_at_w0() const { return s_w0_; }
  const M& model() const { return model_; }
  cplx s(cplx z) const { return s_theta(theta_, z, model_); }

 private:
  double theta_;
  cplx w0_;
  M model_;
  cplx s_w0_;
};

struct ExtensionValue {
  cplx G;   // (S(w0) F(z) - S(z) F(w0)) / (z - w0)
  cplx MG;  // z G(z) + F(w0) S(z)
};

/// Both sides of the extension M_theta at z for the element built from F.
/// At z = w0 the quotient is replaced by its limit S(w0) F'(w0) - S'(w0) F(w0) (central differences).
template <HermiteBiehlerModel M, typename F>
ExtensionValue m_theta_apply(const ExtensionParams<M>& p, F&& f, cplx z) {
  const cplx w0 = p.w0();
  const cplx f_w0 = f(w0);
  const cplx s_z = p.s(z);
  cplx G;
  if (std::abs(z - w0) < 1e-8) {
    constexpr double h = 1e-5;
    const cplx df = (f(w0 + h) - f(w0 - h)) / (2 * h);
    const cplx ds = (p.s(w0 + h) - p.s(w0 - h)) / (2 * h);
    G = p.s_at_w0() * df - ds * f_w0;
  } else {
    G = (p.s_at_w0() * f(z) - s_z * f_w0) / (z - w0);
  }
  return {G, z * G + f_w0 * s_z};
}

struct EigenCheck {
  double gamma = 0.0;
  double residual = 0.0;  // max |M G - gamma G| over the samples
  double max_G = 0.0;
  std::vector<cplx> samples;
};

inline nlohmann::json to_json(const EigenCheck& e) {
  nlohmann::json s = nlohmann::json::array();
  for (const auto& z : e.samples) s.push_back({z.real(), z.imag()});
  return {{"gamma", e.gamma}, {"residual", e.residual}, {"max_G", e.max_G}, {"samples", s}};
}

/// Residual of the eigen-equation for G = S(z)/(z - gamma).
///
/// F(z) = (S(z) - S(gamma)) / (z - gamma) * (gamma - w0) / S(w0) is entire for any gamma and equals
/// (S(z)/S(w0)) (gamma - w0)/(z - gamma) when S(gamma) = 0. Then
/// M G - gamma G = (gamma - w0) S(gamma) (S(z)/S(w0) - 1) / (z - w0), so the residual measures S(gamma).
template <HermiteBiehlerModel M>
EigenCheck eigen_residual(const ExtensionParams<M>& p, double gamma, std::span<const cplx> samples) {
  const cplx s_gamma = p.s(cplx(gamma));
  const cplx w0 = p.w0();
  auto f = [&](cplx z) { return (p.s(z) - s_gamma) / (z - gamma) * (gamma - w0) / p.s_at_w0(); };
  EigenCheck r;
  r.gamma = gamma;
  r.samples.assign(samples.begin(), samples.end());
  for (const cplx z : samples) {
    if (std::abs(z - gamma) < 1e-8 || std::abs(z - w0) < 1e-8)
      throw DomainError("eigen_residual: sample point coincides with gamma or w0");
    const auto v = m_theta_apply(p, f, z);
    r.residual = std::max(r.residual, std::abs(v.MG - gamma * v.G));
    r.max_G = std::max(r.max_G, std::abs(v.G));
  }
  return r;
}

// ---- the decomposition psi = psi0 + psi1, psi1 in V(0) ----

template <HermiteBiehlerModel M = XiModel>
struct Decomposition {
  SpectralCoefficients coefficients;  // S_gamma = psi^(gamma)
  Combination<M> psi1;                // sum i S_gamma sqrt(m pi) psi_gamma
  Combination<M> psi0;                // psi - psi1
  GridFunction psi1_grid;
  GridFunction psi0_grid;
};

/// Time samples of a combination: smooth parts pointwise, basis parts by one inversion of the
/// summed transforms on the Theta grid.
template <HermiteBiehlerModel M>
GridFunction sample_combination(const Combination<M>& c, const ThetaSamples& th, const Grid& out) {
  auto smooth = GridFunction::sample(out, Domain::time, [&](double x) {
    cplx v{};
    for (const auto& [k, f] : c.smooth) v += k * f(x);
    return v;
  });
  if (c.basis.empty()) return smooth;
  return smooth + inverse_fourier_grid(sample_basis_sum<M>(c.basis, th), out);
}

/// Splits psi along V(0) using the catalog zeros. The spectral parts are exact combinations;
/// the grid parts come from sample_combination.
template <HermiteBiehlerModel M = XiModel>
Decomposition<M> decompose_LW(const Combination<M>& psi, const ZeroSet& zs, const ThetaSamples& th, const Grid& out,
                              const M& model = {}) {
  auto S = spectral_coeffs(psi, zs);
  Combination<M> psi1;
  for (std::size_t k = 0; k < S.zeros.size(); ++k) {
    const double g = S.zeros[k].gamma.real();
    const int m = S.zeros[k].multiplicity;
    psi1.basis.push_back({cplx(0, 1) * S.entries[k] * std::sqrt(m * pi), BasisFunction<M>(g, m, model)});
  }
  auto psi1_grid = sample_combination(psi1, th, out);
  auto psi0_grid = sample_combination(psi, th, out) - psi1_grid;
  return {std::move(S), psi1, psi - psi1, std::move(psi1_grid), std::move(psi0_grid)};
}

template <HermiteBiehlerModel M = XiModel>
Decomposition<M> decompose_LW(const TestFunction& psi, const ZeroSet& zs, const ThetaSamples& th, const Grid& out,
                              const M& model = {}) {
  Combination<M> whole;
  whole.smooth.push_back({1.0, psi});
  return decompose_LW(whole, zs, th, out, model);
}

template <HermiteBiehlerModel M = XiModel>
Decomposition<M> decompose_LW(const TestFunction& psi, const ZeroSet& zs, double Z, const Grid& out, const M& model = {}) {
  return decompose_LW(psi, zs, sample_theta(frequency_grid_for(Z, out), model), out, model);
}

/// Spot check of A psi = i psi' for A = F^{-1} z F: inverts z psi^(z) on [-Z, Z] and compares with
/// central differences of the samples on interior nodes. Returns the relative L^2 discrepancy.
inline double generator_spot_check(const GridFunction& psi, double Z) {
  const auto& g = psi.grid();
  const Grid freq = frequency_grid_for(Z, g);
  const auto F = fourier_grid(psi, freq);
  std::vector<cplx> zf(F.size());
  for (std::size_t i = 0; i < zf.size(); ++i) zf[i] = freq.node(i) * F[i];
  const auto a_psi = inverse_fourier_grid(GridFunction(freq, std::move(zf), Domain::frequency), g);
  const double h = g.spacing();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    const cplx d = cplx(0, 1) * (psi[i + 1] - psi[i - 1]) / (2 * h);
    num += std::norm(a_psi[i] - d);
    den += std::norm(d);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace weil
