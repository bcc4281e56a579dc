#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "weil_lab/errors.hpp"
#include "weil_lab/quadrature.hpp"

namespace weil {

namespace bump {

/// exp(-1/(1-u^2)) on (-1, 1), zero elsewhere.
inline double value(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

inline double derivative(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  const double q = 1.0 - u * u;
  return value(u) * (-2.0 * u) / (q * q);
}

namespace detail {
inline constexpr int kPanels = 16;

struct Cumulative {
  std::array<double, kPanels + 1> at{};
  Cumulative() {
    const double w = 2.0 / kPanels;
    for (int p = 0; p < kPanels; ++p) {
      const double lo = -1.0 + w * p;
      at[p + 1] = at[p] + integrate_panels<32>([](double u) { return value(u); }, lo, lo + w, 1);
    }
  }
  static const Cumulative& instance() {
    static const Cumulative c;
    return c;
  }
};
}  // namespace detail

/// Integral of the unit bump over [-1, u].
inline double primitive(double u) {
  const auto& c = detail::Cumulative::instance();
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return c.at.back();
  const double w = 2.0 / detail::kPanels;
  const int p = std::min(detail::kPanels - 1, static_cast<int>((u + 1.0) / w));
  const double lo = -1.0 + w * p;
  return c.at[p] + integrate_panels<32>([](double v) { return value(v); }, lo, u, 1);
}

/// Total mass of the unit bump.
inline double mass() { return detail::Cumulative::instance().at.back(); }

}  // namespace bump

enum class AtomKind { bump, bump_derivative, bump_antiderivative };

/// coeff * B((x - center)/half_width) where B is the unit bump, its x-derivative, or its x-antiderivative.
struct BumpAtom {
  AtomKind kind = AtomKind::bump;
  double center = 0.0;
  double half_width = 1.0;
  cplx coeff{1.0, 0.0};

  cplx operator()(double x) const {
    const double u = (x - center) / half_width;
    switch (kind) {
      case AtomKind::bump: return coeff * bump::value(u);
      case AtomKind::bump_derivative: return coeff * (bump::derivative(u) / half_width);
      case AtomKind::bump_antiderivative: return coeff * (half_width * bump::primitive(u));
    }
    return {};
  }
  double left() const { return center - half_width; }
  double right() const { return center + half_width; }
};

/// A finite combination of translated, dilated bumps and their derivatives/antiderivatives.
///
/// Antiderivative atoms are constant to the right of their support; the combination is compactly
/// supported only when those constants cancel, which `compact()` reports.
class TestFunction {
 public:
  TestFunction() = default;
  explicit TestFunction(std::vector<BumpAtom> atoms) : atoms_(std::move(atoms)) {
    for (const auto& a : atoms_)
      if (!(a.half_width > 0.0) || !std::isfinite(a.center))
        throw DomainError("TestFunction: half_width must be positive and center finite");
  }

  static TestFunction unit_bump(double center = 0.0, double half_width = 1.0, cplx coeff = 1.0) {
    return TestFunction({BumpAtom{AtomKind::bump, center, half_width, coeff}});
  }
  static TestFunction bump_derivative(double center = 0.0, double half_width = 1.0, cplx coeff = 1.0) {
    return TestFunction({BumpAtom{AtomKind::bump_derivative, center, half_width, coeff}});
  }

  std::span<const BumpAtom> atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }

  cplx operator()(double x) const {
    cplx s{};
    for (const auto& a : atoms_) s += a(x);
    return s;
  }

  /// Hull of the atom supports; [0, 0] for the zero function.
  std::pair<double, double> support() const {
    if (atoms_.empty()) return {0.0, 0.0};
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& a : atoms_) {
      lo = std::min(lo, a.left());
      hi = std::max(hi, a.right());
    }
    return {lo, hi};
  }

  /// Panel width that resolves the narrowest atom.
  double resolution() const {
    double r = 1.0;
    for (const auto& a : atoms_) r = std::min(r, a.half_width / 8.0);
    return r;
  }

  /// Value constant to the right of the support (zero iff compactly supported).
  cplx right_limit() const {
    cplx s{};
    for (const auto& a : atoms_)
      if (a.kind == AtomKind::bump_antiderivative) s += a.coeff * (a.half_width * bump::mass());
    return s;
  }

  bool compact() const {
    double scale = 0.0;
    for (const auto& a : atoms_)
      if (a.kind == AtomKind::bump_antiderivative) scale += std::abs(a.coeff) * a.half_width * bump::mass();
    return std::abs(right_limit()) <= 1e-12 * std::max(scale, 1e-300) || scale == 0.0;
  }

  /// Integral over the line (the transform at 0); only meaningful when compact.
  cplx mean() const {
    cplx s{};
    for (const auto& a : atoms_) {
      if (a.kind == AtomKind::bump) s += a.coeff * (a.half_width * bump::mass());
    }
    if (std::any_of(atoms_.begin(), atoms_.end(),
                    [](const BumpAtom& a) { return a.kind == AtomKind::bump_antiderivative; })) {
      const auto [lo, hi] = support();
      s = integrate_panels<32>(*this, lo, hi, panels_for(0.0));
    }
    return s;
  }

  std::size_t panels_for(double abs_z) const {
    const auto [lo, hi] = support();
    const double width = std::min(1.0 / (1.0 + abs_z), resolution());
    return std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil((hi - lo) / width)));
  }

  TestFunction operator+(const TestFunction& o) const {
    auto atoms = atoms_;
    atoms.insert(atoms.end(), o.atoms_.begin(), o.atoms_.end());
    return TestFunction(std::move(atoms));
  }
  TestFunction operator*(cplx c) const {
    auto atoms = atoms_;
    for (auto& a : atoms) a.coeff *= c;
    return TestFunction(std::move(atoms));
  }
  friend TestFunction operator*(cplx c, const TestFunction& f) { return f * c; }
  TestFunction operator-(const TestFunction& o) const { return *this + o * cplx(-1.0); }

  TestFunction translated(double shift) const {
    auto atoms = atoms_;
    for (auto& a : atoms) a.center += shift;
    return TestFunction(std::move(atoms));
  }

 private:
  std::vector<BumpAtom> atoms_;
};

/// Anything with a compact support hull and pointwise complex values.
template <typename F>
concept CompactFunction = requires(const F& f, double x) {
  { f.support() } -> std::convertible_to<std::pair<double, double>>;
  { f(x) } -> std::convertible_to<cplx>;
};

inline constexpr double kFourierImagGuard = 50.0;

/// integral over the support of f(x) exp(izx) dx by 32-point Gauss-Legendre panels of width <= 1/(1+|z|).
/// The error estimate is the difference to a pass with half as many panels.
template <CompactFunction F>
QuadratureResult fourier_at(const F& f, cplx z) {
  if (std::abs(z.imag()) > kFourierImagGuard)
    throw DomainError("fourier_at: |Im z| exceeds the growth guard of 50");
  if constexpr (requires { f.compact(); }) {
    if (!f.compact()) throw DomainError("fourier_at: function is not compactly supported");
  }
  const auto [lo, hi] = f.support();
  if (!(hi > lo)) return {};
  std::size_t panels;
  if constexpr (requires { f.panels_for(0.0); }) {
    panels = f.panels_for(std::abs(z));
  } else {
    panels = std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil((hi - lo) * (1.0 + std::abs(z)))));
  }
  const cplx iz = cplx(0, 1) * z;
  auto integrand = [&](double x) { return f(x) * std::exp(iz * x); };
  const cplx fine = integrate_panels<32>(integrand, lo, hi, panels);
  const cplx coarse = integrate_panels<32>(integrand, lo, hi, (panels + 1) / 2);
  return {fine, std::abs(fine - coarse)};
}

/// The antiderivative psi(x) = integral of phi over (-inf, x]; compact iff phi has zero mean.
inline TestFunction antiderivative(const TestFunction& phi) {
  std::vector<BumpAtom> atoms;
  atoms.reserve(phi.atoms().size());
  for (auto a : phi.atoms()) {
    switch (a.kind) {
      case AtomKind::bump: a.kind = AtomKind::bump_antiderivative; break;
      case AtomKind::bump_derivative: a.kind = AtomKind::bump; break;
      case AtomKind::bump_antiderivative:
        throw DomainError("antiderivative: second antiderivatives are not representable");
    }
    atoms.push_back(a);
  }
  return TestFunction(std::move(atoms));
}

}  // namespace weil
