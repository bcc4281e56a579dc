#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "weil_lab/errors.hpp"
#include "weil_lab/quadrature.hpp"
#include "weil_lab/special_fn.hpp"

namespace weil {

enum class ZeroSource { table, computed };

/// One entry of the symmetric zero iteration. gamma is complex so that synthetic
/// off-line zero sets can be fed to the same sums.
struct Zero {
  cplx gamma;
  int multiplicity = 1;
};

/// Positive ordinates gamma <= T of the zeros of xi(1/2 - iz), with multiplicities.
class ZeroSet {
 public:
  ZeroSet() = default;
  ZeroSet(std::vector<double> ordinates, std::vector<int> multiplicities, double height_T, ZeroSource source)
      : ordinates_(std::move(ordinates)), mult_(std::move(multiplicities)), T_(height_T), source_(source) {
    if (mult_.empty()) mult_.assign(ordinates_.size(), 1);
    if (mult_.size() != ordinates_.size()) throw DomainError("ZeroSet: multiplicity count differs from ordinate count");
    if (!(T_ > 0.0)) throw DomainError("ZeroSet: height T must be positive");
    for (std::size_t i = 0; i < ordinates_.size(); ++i) {
      if (!(ordinates_[i] > 0.0) || ordinates_[i] > T_) throw DomainError("ZeroSet: ordinates must lie in (0, T]");
      if (i > 0 && !(ordinates_[i] > ordinates_[i - 1])) throw DomainError("ZeroSet: ordinates must be strictly ascending");
      if (mult_[i] < 1) throw DomainError("ZeroSet: multiplicities must be >= 1");
    }
  }

  static ZeroSet from_ordinates(std::vector<double> ordinates, double height_T, ZeroSource source = ZeroSource::table) {
    return ZeroSet(std::move(ordinates), {}, height_T, source);
  }

  const std::vector<double>& ordinates() const { return ordinates_; }
  const std::vector<int>& multiplicities() const { return mult_; }
  double height_T() const { return T_; }
  ZeroSource source() const { return source_; }
  std::size_t size() const { return ordinates_.size(); }
  bool empty() const { return ordinates_.empty(); }
  double operator[](std::size_t i) const { return ordinates_[i]; }
  int multiplicity(std::size_t i) const { return mult_[i]; }

  /// Index of the ordinate within tol of gamma, if any.
  std::optional<std::size_t> find(double gamma, double tol = 1e-6) const {
    auto it = std::lower_bound(ordinates_.begin(), ordinates_.end(), gamma - tol);
    if (it != ordinates_.end() && std::abs(*it - gamma) <= tol) return static_cast<std::size_t>(it - ordinates_.begin());
    return std::nullopt;
  }

 private:
  std::vector<double> ordinates_;
  std::vector<int> mult_;
  double T_ = 1.0;
  ZeroSource source_ = ZeroSource::table;
};

/// (-gamma_k, m_k) for k descending, then (gamma_k, m_k) ascending.
inline std::vector<Zero> iterate_symmetric(const ZeroSet& zs) {
  std::vector<Zero> out;
  out.reserve(2 * zs.size());
  for (std::size_t k = zs.size(); k-- > 0;) out.push_back({cplx(-zs[k], 0.0), zs.multiplicity(k)});
  for (std::size_t k = 0; k < zs.size(); ++k) out.push_back({cplx(zs[k], 0.0), zs.multiplicity(k)});
  return out;
}

/// Bound on sum_{gamma > T} m_gamma / gamma^2 used for every truncated zero sum.
inline double zero_tail_density(double T) { return std::log(std::max(T, std::exp(1.0))) / T; }

/// Reads one ascending positive ordinate per line; blank lines and '#' comments are skipped.
inline ZeroSet parse_zeros(std::istream& in, double T, const std::string& name = "<stream>") {
  std::vector<double> ords;
  std::string line;
  std::size_t lineno = 0;
  double prev = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(first, last - first + 1);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !std::isfinite(v) || !(v > 0.0))
      throw IoError(name + ":" + std::to_string(lineno) + ": malformed ordinate '" + tok + "'");
    if (prev > 0.0 && !(v > prev)) throw IoError(name + ":" + std::to_string(lineno) + ": ordinates not ascending");
    prev = v;
    if (v <= T) ords.push_back(v);
  }
  return ZeroSet::from_ordinates(std::move(ords), T, ZeroSource::table);
}

inline ZeroSet load_zeros(const std::filesystem::path& path, double T) {
  std::ifstream in(path);
  if (!in) throw IoError("load_zeros: cannot open " + path.string());
  return parse_zeros(in, T, path.string());
}

inline constexpr double kMaxHeight = 120.0;

/// xi(1/2 + it), real on the line, as mantissa and log scale.
inline std::pair<double, double> xi_on_critical_line(double t) {
  const auto v = xi_scaled(cplx(0.5, t));
  return {v.xi.real(), v.log_scale};
}

/// Roots of t -> xi(1/2 + it) in (0, T]: sign changes on a 0.05 scan, refined by TOMS 748
/// (bracketing secant / inverse cubic) to full double precision.
inline ZeroSet compute_zeros(double T, double scan_step = 0.05) {
  if (!(T > 0.0) || T > kMaxHeight) throw DomainError("compute_zeros: T must lie in (0, 120]");
  std::vector<double> ords;
  double a = 0.0;
  auto [fa, sa] = xi_on_critical_line(a);
  const auto steps = static_cast<std::size_t>(std::ceil(T / scan_step));
  for (std::size_t k = 1; k <= steps; ++k) {
    const double b = std::min(T, scan_step * static_cast<double>(k));
    auto [fb, sb] = xi_on_critical_line(b);
    if (fb == 0.0) {
      ords.push_back(b);
    } else if ((fa < 0.0) != (fb < 0.0) && fa != 0.0) {
      const double ref = sa;
      auto f = [ref](double t) {
        const auto [m, s] = xi_on_critical_line(t);
        return m * std::exp(s - ref);
      };
      std::uintmax_t iters = 200;
      const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb * std::exp(sb - ref),
                                                        boost::math::tools::eps_tolerance<double>(52), iters);
      ords.push_back(0.5 * (r.first + r.second));
    }
    a = b;
    fa = fb;
    sa = sb;
  }
  return ZeroSet::from_ordinates(std::move(ords), T, ZeroSource::computed);
}

struct CountingReport {
  std::size_t count = 0;
  double expected = 0.0;
  double discrepancy = 0.0;
  bool pass = false;
};

/// Compares |zs| with (T/2pi) log(T/(2 pi e)) + 7/8.
inline CountingReport counting_check(const ZeroSet& zs) {
  if (zs.empty()) throw DomainError("counting_check: empty zero set");
  CountingReport r;
  const double T = zs.height_T();
  for (int m : zs.multiplicities()) r.count += static_cast<std::size_t>(m);
  r.expected = T / (2 * pi) * std::log(T / (2 * pi * std::exp(1.0))) + 7.0 / 8.0;
  r.discrepancy = std::abs(static_cast<double>(r.count) - r.expected);
  r.pass = r.discrepancy <= 2.0;
  return r;
}

// ---- cache ----

inline std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("WEIL_LAB_CACHE"); env && *env) return env;
  return ".weil_lab_cache";
}

inline std::string format_height(double T) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", T);
  return buf;
}

inline std::filesystem::path cache_file(const std::filesystem::path& dir, double T) {
  return dir / ("zeros_T" + format_height(T) + ".txt");
}

/// One ordinate per line with 15 decimals; identical input gives identical bytes.
/// The text format carries no multiplicities.
inline void write_zeros(std::ostream& os, const ZeroSet& zs) {
  char buf[64];
  for (std::size_t i = 0; i < zs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.15f\n", zs[i]);
    os << buf;
  }
}

inline void store_zeros(const std::filesystem::path& dir, const ZeroSet& zs) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = cache_file(dir, zs.height_T());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("store_zeros: cannot write " + path.string());
  write_zeros(out, zs);
  if (!out) throw IoError("store_zeros: write failed for " + path.string());
}

/// Cached set for T if present, otherwise computed and stored.
inline ZeroSet cached_or_computed(const std::filesystem::path& dir, double T) {
  const auto path = cache_file(dir, T);
  if (std::filesystem::exists(path)) {
    auto zs = load_zeros(path, T);
    return ZeroSet::from_ordinates(zs.ordinates(), T, ZeroSource::computed);
  }
  auto zs = compute_zeros(T);
  store_zeros(dir, zs);
  return zs;
}

}  // namespace weil
