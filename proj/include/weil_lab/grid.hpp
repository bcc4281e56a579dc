#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "weil_lab/errors.hpp"
#include "weil_lab/quadrature.hpp"

namespace weil {

/// Uniform grid x_min, x_min + h, ..., x_max with n_points nodes.
class Grid {
 public:
  Grid(double x_min, double x_max, std::size_t n_points) : x_min_(x_min), x_max_(x_max), n_(n_points) {
    if (!(x_min < x_max) || n_points < 2 || !std::isfinite(x_min) || !std::isfinite(x_max))
      throw DomainError("Grid: need finite x_min < x_max and n_points >= 2");
  }

  /// Grid on [x_min, x_max] whose spacing is at most h.
  static Grid with_spacing(double x_min, double x_max, double h) {
    if (!(h > 0.0)) throw DomainError("Grid: spacing must be positive");
    const auto n = static_cast<std::size_t>(std::ceil((x_max - x_min) / h - 1e-9)) + 1;
    return Grid(x_min, x_max, std::max<std::size_t>(n, 2));
  }

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return n_; }
  double spacing() const { return (x_max_ - x_min_) / static_cast<double>(n_ - 1); }
  double node(std::size_t i) const {
    return i + 1 == n_ ? x_max_ : x_min_ + spacing() * static_cast<double>(i);
  }
  double max_abs() const { return std::max(std::abs(x_min_), std::abs(x_max_)); }

  /// Trapezoid weight of node i.
  double weight(std::size_t i) const { return (i == 0 || i + 1 == n_) ? 0.5 * spacing() : spacing(); }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_ && a.n_ == b.n_;
  }

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
};

enum class Domain { time, frequency };

inline const char* to_string(Domain d) { return d == Domain::time ? "time" : "frequency"; }

/// Complex samples on a uniform grid. Immutable after construction.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<cplx> values, Domain domain)
      : grid_(grid), values_(std::move(values)), domain_(domain) {
    if (values_.size() != grid_.size()) throw DomainError("GridFunction: value count differs from grid size");
    for (const auto& v : values_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError("GridFunction: non-finite sample");
  }

  template <typename F>
  static GridFunction sample(const Grid& grid, Domain domain, F&& f) {
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.node(i));
    return GridFunction(grid, std::move(v), domain);
  }

  const Grid& grid() const { return grid_; }
  Domain domain() const { return domain_; }
  std::span<const cplx> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  cplx operator[](std::size_t i) const { return values_[i]; }

  GridFunction operator+(const GridFunction& o) const { return zip(o, [](cplx a, cplx b) { return a + b; }); }
  GridFunction operator-(const GridFunction& o) const { return zip(o, [](cplx a, cplx b) { return a - b; }); }
  GridFunction scaled(cplx c) const {
    std::vector<cplx> v(values_);
    for (auto& x : v) x *= c;
    return GridFunction(grid_, std::move(v), domain_);
  }

  /// Copy with every sample replaced by mask(x) * value.
  template <typename M>
  GridFunction masked(M&& mask) const {
    std::vector<cplx> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= mask(grid_.node(i));
    return GridFunction(grid_, std::move(v), domain_);
  }

 private:
  template <typename Op>
  GridFunction zip(const GridFunction& o, Op op) const {
    if (!(grid_ == o.grid_) || domain_ != o.domain_) throw DomainError("GridFunction: grid or domain mismatch");
    std::vector<cplx> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(values_[i], o.values_[i]);
    return GridFunction(grid_, std::move(v), domain_);
  }

  Grid grid_;
  std::vector<cplx> values_;
  Domain domain_;
};

/// Trapezoid approximation of the integral of f * conj(g).
inline cplx inner_product_grid(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) throw DomainError("inner_product_grid: grid mismatch");
  if (f.domain() != g.domain()) throw DomainError("inner_product_grid: domain tag mismatch");
  cplx sum{};
  const auto& grid = f.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weight(i) * f[i] * std::conj(g[i]);
  return sum;
}

inline double norm_sq_grid(const GridFunction& f) { return inner_product_grid(f, f).real(); }
inline double norm_grid(const GridFunction& f) { return std::sqrt(norm_sq_grid(f)); }

namespace detail {

/// out_j = sum_k in_k * exp(i * sign * u_k * y_j) for uniform u_k = u0 + k du and y_j = y0 + j dy.
/// Phases advance by recurrence and are reseeded exactly every kReseed steps.
inline std::vector<cplx> exp_sum(std::span<const cplx> in, double u0, double du, double y0, double dy,
                                 std::size_t n_out, double sign) {
  constexpr std::size_t kReseed = 2048;
  const std::size_t n = n_out;
  std::vector<double> acc_re(n, 0.0), acc_im(n, 0.0), p_re(n), p_im(n), r_re(n), r_im(n), y(n);
  for (std::size_t j = 0; j < n; ++j) {
    y[j] = y0 + dy * static_cast<double>(j);
    r_re[j] = std::cos(sign * du * y[j]);
    r_im[j] = std::sin(sign * du * y[j]);
  }
  for (std::size_t k0 = 0; k0 < in.size(); k0 += kReseed) {
    const double u = u0 + du * static_cast<double>(k0);
    for (std::size_t j = 0; j < n; ++j) {
      p_re[j] = std::cos(sign * u * y[j]);
      p_im[j] = std::sin(sign * u * y[j]);
    }
    const std::size_t k1 = std::min(in.size(), k0 + kReseed);
    for (std::size_t k = k0; k < k1; ++k) {
      const double ar = in[k].real(), ai = in[k].imag();
      double* __restrict ar_ = acc_re.data();
      double* __restrict ai_ = acc_im.data();
      double* __restrict pr_ = p_re.data();
      double* __restrict pi_ = p_im.data();
      const double* __restrict rr_ = r_re.data();
      const double* __restrict ri_ = r_im.data();
      if (ar == 0.0 && ai == 0.0) {
        for (std::size_t j = 0; j < n; ++j) {
          const double pr = pr_[j], pim = pi_[j];
          pr_[j] = pr * rr_[j] - pim * ri_[j];
          pi_[j] = pr * ri_[j] + pim * rr_[j];
        }
        continue;
      }
      for (std::size_t j = 0; j < n; ++j) {
        const double pr = pr_[j], pim = pi_[j];
        ar_[j] += ar * pr - ai * pim;
        ai_[j] += ar * pim + ai * pr;
        pr_[j] = pr * rr_[j] - pim * ri_[j];
        pi_[j] = pr * ri_[j] + pim * rr_[j];
      }
    }
  }
  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = {acc_re[j], acc_im[j]};
  return out;
}

/// Same sum as exp_sum, evaluated exactly by the chirp-z identity kj = (k^2 + j^2 - (k-j)^2)/2,
/// which turns it into one circular convolution done with FFTW.
inline std::vector<cplx> chirp_sum(std::span<const cplx> in, double u0, double du, double y0, double dy,
                                   std::size_t n_out, double sign) {
  const std::size_t K = in.size(), J = n_out;
  std::size_t L = 1;
  while (L < K + J - 1) L <<= 1;
  const double alpha = sign * du * dy;
  auto chirp = [&](double m) {
    const double m2 = m * m;  // exact for |m| < 2^26
    return std::polar(1.0, 0.5 * alpha * m2);
  };
  auto* b = fftw_alloc_complex(L);
  auto* c = fftw_alloc_complex(L);
  auto* bc = reinterpret_cast<cplx*>(b);
  auto* cc = reinterpret_cast<cplx*>(c);
  fftw_plan pb = fftw_plan_dft_1d(static_cast<int>(L), b, b, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan pc = fftw_plan_dft_1d(static_cast<int>(L), c, c, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan pi_ = fftw_plan_dft_1d(static_cast<int>(L), b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
  for (std::size_t k = 0; k < L; ++k) {
    bc[k] = 0.0;
    cc[k] = 0.0;
  }
  const double lin = sign * du * y0;
  for (std::size_t k = 0; k < K; ++k) {
    const double kd = static_cast<double>(k);
    bc[k] = in[k] * std::polar(1.0, lin * kd) * chirp(kd);
  }
  for (std::size_t m = 0; m < J; ++m) cc[m] = std::conj(chirp(static_cast<double>(m)));
  for (std::size_t m = 1; m < K; ++m) cc[L - m] = std::conj(chirp(static_cast<double>(m)));
  fftw_execute(pb);
  fftw_execute(pc);
  for (std::size_t k = 0; k < L; ++k) bc[k] *= cc[k];
  fftw_execute(pi_);
  std::vector<cplx> out(J);
  const double inv = 1.0 / static_cast<double>(L);
  for (std::size_t j = 0; j < J; ++j) {
    const double jd = static_cast<double>(j);
    const cplx outer = std::polar(1.0, sign * u0 * (y0 + dy * jd)) * chirp(jd);
    out[j] = outer * bc[j] * inv;
  }
  fftw_destroy_plan(pb);
  fftw_destroy_plan(pc);
  fftw_destroy_plan(pi_);
  fftw_free(b);
  fftw_free(c);
  return out;
}

/// Direct summation for small problems, chirp-z above kChirpThreshold multiply-adds.
inline constexpr double kChirpThreshold = 4e6;

inline std::vector<cplx> uniform_exp_sum(std::span<const cplx> in, double u0, double du, double y0, double dy,
                                         std::size_t n_out, double sign) {
  if (static_cast<double>(in.size()) * static_cast<double>(n_out) > kChirpThreshold)
    return chirp_sum(in, u0, du, y0, dy, n_out, sign);
  return exp_sum(in, u0, du, y0, dy, n_out, sign);
}

inline std::vector<cplx> trapezoid_weighted(const GridFunction& f) {
  std::vector<cplx> w(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) w[i] = f[i] * f.grid().weight(i);
  return w;
}

}  // namespace detail

/// (1/2pi) * integral of F(z) exp(-izx) dz over the frequency grid, per output node (trapezoid rule).
/// Requires h_freq * max|x| <= pi/4 so the periodic images of the trapezoid sum stay away from the output.
inline GridFunction inverse_fourier_grid(const GridFunction& F, const Grid& out) {
  if (F.domain() != Domain::frequency) throw DomainError("inverse_fourier_grid: input must be frequency-domain");
  if (F.grid().spacing() * out.max_abs() > pi / 4 * (1 + 1e-12))
    throw DomainError("inverse_fourier_grid: aliasing guard h_freq * x_max <= pi/4 violated");
  const auto w = detail::trapezoid_weighted(F);
  auto v = detail::uniform_exp_sum(w, F.grid().x_min(), F.grid().spacing(), out.x_min(), out.spacing(), out.size(), -1.0);
  for (auto& x : v) x /= 2 * pi;
  return GridFunction(out, std::move(v), Domain::time);
}

/// integral of psi(x) exp(izx) dx from time samples (trapezoid rule), for z on a frequency grid.
/// Requires max|z| * h_time <= pi (no frequency beyond the sampling band).
inline GridFunction fourier_grid(const GridFunction& psi, const Grid& freq) {
  if (psi.domain() != Domain::time) throw DomainError("fourier_grid: input must be time-domain");
  if (freq.max_abs() * psi.grid().spacing() > pi * (1 + 1e-12))
    throw DomainError("fourier_grid: frequency range exceeds the sampling band of the time grid");
  const auto w = detail::trapezoid_weighted(psi);
  auto v = detail::uniform_exp_sum(w, psi.grid().x_min(), psi.grid().spacing(), freq.x_min(), freq.spacing(), freq.size(), 1.0);
  return GridFunction(freq, std::move(v), Domain::frequency);
}

/// Transform of time samples at a single complex point (trapezoid rule).
inline cplx fourier_grid_at(const GridFunction& psi, cplx z) {
  if (psi.domain() != Domain::time) throw DomainError("fourier_grid_at: input must be time-domain");
  cplx sum{};
  const auto& g = psi.grid();
  for (std::size_t i = 0; i < g.size(); ++i) sum += g.weight(i) * psi[i] * std::exp(cplx(0, 1) * z * g.node(i));
  return sum;
}

/// CSV with header `x,re,im`, 17 significant digits per value.
inline void write_csv(std::ostream& os, const GridFunction& f) {
  os << "x,re,im\n";
  char buf[96];
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.grid().node(i), f[i].real(), f[i].imag());
    os << buf;
  }
}

}  // namespace weil
