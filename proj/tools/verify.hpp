#pragma once

// Verification suites shared by the weil-lab CLI and the acceptance binary.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "weil_lab/weil_lab.hpp"

namespace weil::verify {

struct GridSpec {
  double x_min;
  double x_max;
  std::size_t n;
};

struct RunConfig {
  std::optional<std::filesystem::path> zeros_path;  // table; computed when empty
  std::filesystem::path reference_table;            // published ordinates for the catalog check
  std::filesystem::path cache_dir = default_cache_dir();
  double height_T = 100.0;
  double cutoff_Z = 5000.0;
  std::optional<GridSpec> grid;  // time grid for psi_gamma
  std::filesystem::path out_dir = "weil_lab_out";
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 20240611;

  double tol(const std::string& id, double fallback) const {
    const auto it = tolerances.find(id);
    return it == tolerances.end() ? fallback : it->second;
  }

  void validate() const {
    if (!(height_T > 0.0) || height_T > kMaxHeight) throw DomainError("config: height_T must lie in (0, 120]");
    if (cutoff_Z < kMinCutoff) throw DomainError("config: cutoff_Z must be >= 500");
    if (grid && (!(grid->x_min < grid->x_max) || grid->n < 2)) throw DomainError("config: bad grid spec");
  }
};

struct CheckRow {
  std::string check_id;
  std::string anchor;  // the identity being checked
  double value;
  double bound;
  bool pass;
  int criterion;  // acceptance criterion number, 0 if none
};

inline nlohmann::json to_json(const CheckRow& r) {
  return {{"check_id", r.check_id}, {"paper_anchor", r.anchor}, {"value", r.value},
          {"bound", r.bound},       {"pass", r.pass},           {"criterion", r.criterion}};
}

/// value <= bound.
inline CheckRow at_most(std::string id, std::string anchor, double value, double bound, int criterion) {
  return {std::move(id), std::move(anchor), value, bound, std::isfinite(value) && value <= bound, criterion};
}

/// value >= bound.
inline CheckRow at_least(std::string id, std::string anchor, double value, double bound, int criterion) {
  return {std::move(id), std::move(anchor), value, bound, std::isfinite(value) && value >= bound, criterion};
}

// 40-digit reference value of xi(1/2).
inline constexpr double kXiHalfReference = 0.4971207781883141099127737;

/// Shared state of one run: the zero set and the expensive Theta samples.
class Context {
 public:
  explicit Context(RunConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

  const RunConfig& cfg() const { return cfg_; }

  const ZeroSet& zeros() {
    if (!zs_) {
      if (cfg_.zeros_path)
        zs_ = load_zeros(*cfg_.zeros_path, cfg_.height_T);
      else
        zs_ = cached_or_computed(cfg_.cache_dir, cfg_.height_T);
    }
    return *zs_;
  }

  /// Time grid for psi_gamma at cutoff Z: [-2, 40] at 0.8 of the Nyquist spacing unless overridden.
  Grid psi_grid(double Z) const {
    if (cfg_.grid) {
      const double scale = Z / cfg_.cutoff_Z;
      const auto n = static_cast<std::size_t>(std::ceil((cfg_.grid->n - 1) * scale)) + 1;
      return Grid(cfg_.grid->x_min, cfg_.grid->x_max, n);
    }
    return Grid::with_spacing(-2.0, 40.0, pi / (1.25 * Z));
  }

  const ThetaSamples& theta_for(double Z) {
    auto it = theta_.find(Z);
    if (it == theta_.end()) it = theta_.emplace(Z, sample_theta(frequency_grid_for(Z, psi_grid(Z)))).first;
    return it->second;
  }

  const PsiGamma<>& psi(std::size_t index, double Z) {
    const auto key = std::make_pair(index, Z);
    auto it = psi_.find(key);
    if (it == psi_.end()) {
      const auto& zs = zeros();
      if (index >= zs.size()) throw DomainError("psi: zero index beyond the catalog");
      it = psi_.emplace(key, psi_gamma(basis_F(zs[index], zs), theta_for(Z), psi_grid(Z))).first;
    }
    return it->second;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  RunConfig cfg_;
  std::optional<ZeroSet> zs_;
  std::map<double, ThetaSamples> theta_;
  std::map<std::pair<std::size_t, double>, PsiGamma<>> psi_;
  std::mt19937_64 rng_{cfg_.seed};
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

/// Bump with support inside [lo, hi] and a random complex coefficient.
inline TestFunction random_bump(std::mt19937_64& rng, double lo, double hi) {
  const double w = uniform(rng, 0.3, std::min(1.2, 0.5 * (hi - lo)));
  const double c = uniform(rng, lo + w, hi - w);
  return TestFunction::unit_bump(c, w, std::polar(uniform(rng, 0.5, 2.0), uniform(rng, 0.0, 2 * pi)));
}

/// Sum of 1-3 random bumps in [lo, hi].
inline TestFunction random_test_function(std::mt19937_64& rng, double lo, double hi) {
  auto f = random_bump(rng, lo, hi);
  const int extra = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int k = 0; k < extra; ++k) f = f + random_bump(rng, lo, hi);
  return f;
}

/// Mean-zero combination: a bump pair with cancelling masses plus a bump derivative.
inline TestFunction random_mean_zero(std::mt19937_64& rng, double lo, double hi) {
  const double w1 = uniform(rng, 0.4, 1.0), w2 = uniform(rng, 0.4, 1.0), w3 = uniform(rng, 0.4, 1.0);
  const double c1 = uniform(rng, lo + w1, hi - w1), c2 = uniform(rng, lo + w2, hi - w2), c3 = uniform(rng, lo + w3, hi - w3);
  const cplx a = std::polar(uniform(rng, 0.5, 2.0), uniform(rng, 0.0, 2 * pi));
  const cplx b = std::polar(uniform(rng, 0.2, 1.0), uniform(rng, 0.0, 2 * pi));
  return TestFunction::unit_bump(c1, w1, a) - TestFunction::unit_bump(c2, w2, a * (w1 / w2)) +
         TestFunction::bump_derivative(c3, w3, b);
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline std::vector<CheckRow> suite_special(Context& ctx) {
  const auto& cfg = ctx.cfg();
  auto& rng = ctx.rng();
  std::vector<CheckRow> rows;
  auto t0 = std::chrono::steady_clock::now();

  const double xh = xi(0.5).xi.real();
  rows.push_back(at_most("special.xi_half", "xi(1/2) against a 40-digit reference",
                         std::abs(xh - kXiHalfReference) / kXiHalfReference, cfg.tol("special.xi_half", 1e-10), 1));

  double sym = 0.0;
  for (int k = 0; k < 100; ++k) {
    const cplx s(detail::uniform(rng, -9.5, 10.0), detail::uniform(rng, -kValidatedImag, kValidatedImag));
    const auto a = xi_scaled(s), b = xi_scaled(1.0 - s);
    const cplx va = a.xi, vb = b.xi * std::exp(b.log_scale - a.log_scale);
    sym = std::max(sym, std::abs(va - vb) / std::abs(va));
  }
  rows.push_back(at_most("special.xi_symmetry", "xi(s) = xi(1-s)", sym, cfg.tol("special.xi_symmetry", 1e-10), 1));

  double unimod = 0.0;
  for (int k = 0; k < 100; ++k) unimod = std::max(unimod, std::abs(std::abs(theta_xi(detail::uniform(rng, -150.0, 150.0))) - 1.0));
  rows.push_back(at_most("special.theta_unimodular", "|Theta(x)| = 1 on the real line", unimod,
                         cfg.tol("special.theta_unimodular", 1e-12), 1));
  rows.push_back(at_most("special.theta_zero", "Theta(0) = 1", std::abs(theta_xi(0.0) - 1.0), cfg.tol("special.theta_zero", 1e-12), 1));
  rows.push_back(at_most("special.runtime", "special-function suite runtime [s]", detail::seconds_since(t0), 10.0, 1));

  // Theta'(gamma)/2 = -i/m at every catalog zero
  t0 = std::chrono::steady_clock::now();
  const auto& zs = ctx.zeros();
  double worst = 0.0;
  for (std::size_t k = 0; k < zs.size(); ++k) {
    const auto tp = theta_prime_at_zero(zs[k]);
    worst = std::max(worst, std::abs(tp.value + 2.0 * cplx(0, 1) / static_cast<double>(zs.multiplicity(k))));
  }
  rows.push_back(at_most("special.theta_prime", "Theta'(gamma)/2 = -i/m_gamma", worst, cfg.tol("special.theta_prime", 1e-5), 2));
  rows.push_back(at_most("special.theta_prime_runtime", "Theta' suite runtime [s]", detail::seconds_since(t0), 30.0, 2));

  // the full table F_{gamma_i}(gamma_j)
  t0 = std::chrono::steady_clock::now();
  double diag = 0.0, off = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const auto b = basis_F(zs[i], zs);
    for (std::size_t j = 0; j < zs.size(); ++j) {
      const cplx v = b(zs[j]);
      if (i == j)
        diag = std::max(diag, std::abs(v + cplx(0, 1) / std::sqrt(zs.multiplicity(i) * pi)));
      else
        off = std::max(off, std::abs(v));
    }
  }
  rows.push_back(at_most("special.basis_diagonal", "F_gamma(gamma) = -i/sqrt(m_gamma pi)", diag, cfg.tol("special.basis_diagonal", 1e-6), 3));
  rows.push_back(at_most("special.basis_offdiagonal", "F_gamma(gamma') = 0", off, cfg.tol("special.basis_offdiagonal", 1e-6), 3));
  rows.push_back(at_most("special.basis_runtime", "basis table runtime [s]", detail::seconds_since(t0), 60.0, 3));
  return rows;
}

inline std::vector<CheckRow> suite_zeros(Context& ctx) {
  const auto& cfg = ctx.cfg();
  std::vector<CheckRow> rows;
  const auto computed = compute_zeros(cfg.height_T);
  if (!cfg.reference_table.empty()) {
    const auto table = load_zeros(cfg.reference_table, cfg.height_T);
    rows.push_back(at_most("zeros.count_vs_table", "catalog size equals the published count",
                           std::abs(static_cast<double>(computed.size()) - static_cast<double>(table.size())), 0.0, 12));
    double diff = 0.0;
    for (std::size_t k = 0; k < std::min(computed.size(), table.size()); ++k) diff = std::max(diff, std::abs(computed[k] - table[k]));
    rows.push_back(at_most("zeros.match_table", "computed ordinates match the published table", diff, cfg.tol("zeros.match_table", 1e-6), 12));
  }
  if (cfg.height_T == 100.0)
    rows.push_back(at_most("zeros.count_29", "29 zeros below T = 100",
                           std::abs(static_cast<double>(computed.size()) - 29.0), 0.0, 12));
  if (!computed.empty()) {
    const auto c = counting_check(computed);
    rows.push_back(at_most("zeros.counting", "Riemann-von Mangoldt count within 2", c.discrepancy, 2.0, 12));
  }
  double resid = 0.0;
  for (double g : computed.ordinates()) {
    const auto v = xi(cplx(0.5, g));
    resid = std::max(resid, std::abs(v.xi) / std::max(1.0, std::abs(v.xi_prime)));
  }
  rows.push_back(at_most("zeros.root_residual", "|xi(1/2+i gamma)| <= 1e-8 max(1, |xi'|)", resid, 1e-8, 12));
  return rows;
}

inline std::vector<CheckRow> suite_weil(Context& ctx) {
  const auto& cfg = ctx.cfg();
  const auto& zs = ctx.zeros();
  auto& rng = ctx.rng();
  std::vector<CheckRow> rows;
  const double Z = cfg.cutoff_Z;
  if (!zs.empty()) {
    // psi_gamma enters through its grid samples, transformed by the trapezoid rule
    const auto& p1 = ctx.psi(0, Z);
    const auto w11 = weil_pairing(p1.samples, p1.samples, zs);
    rows.push_back(at_most("weil.basis_norm", "<psi_gamma, psi_gamma>_W = 1/pi", std::abs(w11.value - 1.0 / pi),
                           cfg.tol("weil.basis_norm", 1e-5), 4));
    if (zs.size() >= 2) {
      double cross = 0.0;
      for (std::size_t k = 1; k < std::min<std::size_t>(zs.size(), 3); ++k)
        cross = std::max(cross, std::abs(weil_pairing(p1.samples, ctx.psi(k, Z).samples, zs).value));
      rows.push_back(at_most("weil.basis_cross", "<psi_gamma, psi_gamma'>_W = 0", cross, cfg.tol("weil.basis_cross", 1e-5), 4));
    }
    const auto [w, rep] = separation_witness(zs[0], zs);
    rows.push_back(at_most("weil.witness_value", "witness psi^(gamma) = 1", std::abs(rep.value_at_gamma - 1.0), 1e-6, 0));
    rows.push_back(at_most("weil.witness_others", "witness psi^(gamma') = 0", rep.max_other, 1e-6, 0));
  }
  double worst = -1e300;
  for (int k = 0; k < 50; ++k) {
    const auto psi = detail::random_test_function(rng, -3.0, 3.0);
    const auto f = weil_pairing(psi, psi, zs);
    // margin = Re W + bounds, must be >= 0
    worst = std::max(worst, -(f.value.real() + f.total_bound()));
  }
  rows.push_back(at_most("weil.positivity", "Re W(psi * psi~) >= -(tail + quadrature)", worst, 0.0, 8));
  return rows;
}

inline std::vector<CheckRow> suite_debranges(Context& ctx) {
  const auto& cfg = ctx.cfg();
  const auto& zs = ctx.zeros();
  auto& rng = ctx.rng();
  std::vector<CheckRow> rows;
  if (zs.empty()) return rows;
  const double Z = cfg.cutoff_Z;
  const auto& p1 = ctx.psi(0, Z);
  const double defect = std::abs(2 * pi * norm_sq_grid(p1.samples) - 1.0);
  const double g1 = zs[0];
  rows.push_back(at_most("debranges.basis_l2", "2 pi ||psi_gamma||^2 = 1", defect,
                         cfg.tol("debranges.basis_l2", std::max(2.0 / (pi * (Z - g1)), 1e-2)), 5));
  const auto& p1b = ctx.psi(0, 2 * Z);
  const double defect2 = std::abs(2 * pi * norm_sq_grid(p1b.samples) - 1.0);
  rows.push_back(at_least("debranges.basis_l2_rate", "norm defect shrinks like 1/Z", defect / defect2, 1.8, 5));
  rows.push_back(at_most("debranges.negative_mass_decreases", "mass of psi_gamma on x < 0 decreases with Z",
                         mass_below(p1b.samples, 0.0) - mass_below(p1.samples, 0.0), 0.0, 0));

  // K on random bumps: window [-12, 12], band [-150, 150]
  const Grid bump_grid = Grid::with_spacing(-12.0, 12.0, 0.02);
  const auto th = sample_theta(frequency_grid_for(150.0, bump_grid));
  double inv = 0.0, iso = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto psi = GridFunction::sample(bump_grid, Domain::time, detail::random_bump(rng, -3.0, 3.0));
    const auto kp = K_apply(psi, th);
    const auto kkp = K_apply(kp, th);
    const double n = norm_grid(psi);
    inv = std::max(inv, norm_grid(kkp - psi) / n);
    iso = std::max(iso, std::abs(norm_grid(kp) / n - 1.0));
  }
  rows.push_back(at_most("debranges.K_involution", "K^2 = id", inv, cfg.tol("debranges.K_involution", 1e-3), 6));
  rows.push_back(at_most("debranges.K_isometry", "K is isometric", iso, cfg.tol("debranges.K_isometry", 1e-3), 6));
  const auto k_psi = K_apply(p1.samples, ctx.theta_for(Z));
  rows.push_back(at_most("debranges.K_fixes_basis", "K psi_gamma = psi_gamma", norm_grid(k_psi - p1.samples),
                         cfg.tol("debranges.K_fixes_basis", 5e-2), 6));
  const auto mem = v_membership(p1.samples, k_psi, 0.0, p1.tail_bound);
  rows.push_back(at_most("debranges.V0_membership", "psi_gamma lies in V(0)", std::max(mem.negative_mass, mem.k_negative_mass),
                         mem.verdict_threshold, 0));

  // restriction to the zeros is isometric
  double iso_gap = 0.0, rhs_gap = 0.0;
  const auto th_iso = sample_theta(Grid::with_spacing(-Z, Z, 0.05));
  for (std::size_t k = 0; k < std::min<std::size_t>(3, zs.size()); ++k) {
    const auto c = restriction_isometry_check(basis_F(zs[k], zs), zs, th_iso);
    iso_gap = std::max(iso_gap, std::abs(c.lhs - c.rhs));
    rhs_gap = std::max(rhs_gap, std::abs(c.rhs - 1.0));
  }
  rows.push_back(at_most("debranges.restriction_lhs_rhs", "||F||^2 = sum |F(gamma)|^2 mu(gamma)", iso_gap,
                         cfg.tol("debranges.restriction_lhs_rhs", 1e-2), 9));
  rows.push_back(at_most("debranges.restriction_rhs", "sum |F_gamma(gamma')|^2 pi m_gamma' = 1", rhs_gap,
                         cfg.tol("debranges.restriction_rhs", 1e-6), 9));
  return rows;
}

inline std::vector<CheckRow> suite_screw(Context& ctx) {
  const auto& cfg = ctx.cfg();
  const auto& zs = ctx.zeros();
  auto& rng = ctx.rng();
  std::vector<CheckRow> rows;
  double worst_ratio = -1e300;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXcd G(8, 8);
    std::vector<double> t(8);
    for (auto& x : t) x = detail::uniform(rng, -3.0, 3.0);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) G(i, j) = screw_kernel(t[i], t[j], zs);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
    const double trace = G.trace().real();
    worst_ratio = std::max(worst_ratio, -es.eigenvalues().minCoeff() / std::max(trace, 1e-300));
  }
  rows.push_back(at_most("screw.gram_psd", "the kernel G_g is nonnegative definite", worst_ratio,
                         cfg.tol("screw.gram_psd", 1e-8), 7));
  double worst = -1e300;
  for (int k = 0; k < 10; ++k) {
    const auto phi = detail::random_mean_zero(rng, -3.0, 3.0);
    const auto psi = antiderivative(phi);
    const auto a = screw_form(phi, phi, zs);
    const auto b = weil_pairing(psi, psi, zs);
    // excess of the gap over the declared bounds, must be <= 0
    worst = std::max(worst, std::abs(a.value - b.value) - (a.total_bound() + b.total_bound()));
  }
  rows.push_back(at_most("screw.antiderivative_relation", "screw form of phi = Weil form of its antiderivative", worst, 0.0, 7));
  return rows;
}

inline std::vector<CheckRow> suite_hilbert_polya(Context& ctx) {
  const auto& cfg = ctx.cfg();
  const auto& zs = ctx.zeros();
  auto& rng = ctx.rng();
  std::vector<CheckRow> rows;
  const ExtensionParams<> p(pi / 2);
  double worst = 0.0, detect = 1e300;
  for (std::size_t k = 0; k < zs.size(); ++k) {
    std::vector<cplx> samples;
    for (int j = 0; j < 20; ++j) samples.push_back(zs[k] + std::polar(detail::uniform(rng, 0.2, 2.0), detail::uniform(rng, 0.0, 2 * pi)));
    const auto e = eigen_residual(p, zs[k], samples);
    worst = std::max(worst, e.residual / e.max_G);
    const auto f = eigen_residual(p, zs[k] + 0.1, samples);
    detect = std::min(detect, f.residual / f.max_G);
  }
  if (!zs.empty()) {
    rows.push_back(at_most("hilbert_polya.eigen_residual", "M G = gamma G for G = S(z)/(z - gamma)", worst,
                           cfg.tol("hilbert_polya.eigen_residual", 1e-7), 10));
    rows.push_back(at_least("hilbert_polya.perturbed_residual", "gamma + 0.1 is not an eigenvalue", detect, 1e-2, 10));
  }

  const Grid out = Grid::with_spacing(-4.0, 20.0, pi / (1.25 * kMinCutoff));
  const auto th = sample_theta(frequency_grid_for(kMinCutoff, out));
  double coeff = 0.0, excess = -1e300;
  for (int k = 0; k < 10; ++k) {
    const auto psi = detail::random_test_function(rng, -3.0, 3.0);
    const auto d = decompose_LW(psi, zs, th, out);
    for (const auto& z : d.coefficients.zeros) coeff = std::max(coeff, std::abs(transform(d.psi0, z.gamma).value));
    const auto w = weil_pairing(psi, psi, zs), w1 = weil_pairing(d.psi1, d.psi1, zs);
    excess = std::max(excess, std::abs(w.value - w1.value) - (w.total_bound() + w1.total_bound()));
  }
  rows.push_back(at_most("hilbert_polya.psi0_coefficients", "psi0 has vanishing spectral coefficients", coeff,
                         cfg.tol("hilbert_polya.psi0_coefficients", 1e-5), 11));
  rows.push_back(at_most("hilbert_polya.weil_split", "<psi, psi>_W = <psi1, psi1>_W", excess, 0.0, 11));
  return rows;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"special", "zeros", "weil", "debranges", "screw", "hilbert_polya", "all"};
  return names;
}

inline std::vector<CheckRow> run_suite(const std::string& suite, Context& ctx) {
  if (suite == "special") return suite_special(ctx);
  if (suite == "zeros") return suite_zeros(ctx);
  if (suite == "weil") return suite_weil(ctx);
  if (suite == "debranges") return suite_debranges(ctx);
  if (suite == "screw") return suite_screw(ctx);
  if (suite == "hilbert_polya") return suite_hilbert_polya(ctx);
  if (suite == "all") {
    std::vector<CheckRow> rows;
    for (const auto& s : suite_names()) {
      if (s == "all") continue;
      auto r = run_suite(s, ctx);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    return rows;
  }
  throw DomainError("unknown suite '" + suite + "'");
}

}  // namespace weil::verify
