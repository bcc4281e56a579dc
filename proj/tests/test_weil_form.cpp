#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "oracle_values.hpp"
#include "weil_lab/weil_lab.hpp"

using namespace weil;

namespace {

const ZeroSet& zeros100() {
  static const ZeroSet zs = load_zeros(std::string(WEIL_LAB_DATA_DIR) + "/zeros_first30.txt", 100.0);
  return zs;
}

Combination<> basis_combo(std::size_t k, cplx c = 1.0) {
  Combination<> out;
  out.basis.push_back({c, basis_F(zeros100()[k], zeros100())});
  return out;
}

TestFunction random_bump(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-2, 2), w(0.4, 1.5), a(-1, 1);
  std::vector<BumpAtom> atoms;
  for (int k = 0; k < 3; ++k) atoms.push_back({AtomKind::bump, c(rng), w(rng), cplx(a(rng), a(rng))});
  return TestFunction(atoms);
}

const cplx I(0, 1);

}  // namespace

TEST(WeilPairing, BasisDiagonalIsOneOverPi) {
  const auto v = weil_pairing(basis_combo(0), basis_combo(0), zeros100());
  EXPECT_NEAR(v.value.real(), 1 / pi, 1e-6);
  EXPECT_NEAR(v.value.imag(), 0.0, 1e-6);
  EXPECT_EQ(v.tail_bound, 0.0);
}

TEST(WeilPairing, BasisCrossTermVanishes) {
  EXPECT_NEAR(std::abs(weil_pairing(basis_combo(0), basis_combo(1), zeros100()).value), 0.0, 1e-6);
}

TEST(WeilPairing, ZeroFunctionGivesZero) {
  const TestFunction zero;
  const auto v = weil_pairing(zero, zero, zeros100());
  EXPECT_EQ(v.value, cplx(0.0));
  EXPECT_EQ(v.tail_bound, 0.0);
}

TEST(WeilPairing, BumpIsPositiveAndMatchesIndependentSum) {
  const auto bump = TestFunction::unit_bump();
  const auto v = weil_pairing(bump, bump, zeros100());
  EXPECT_GT(v.value.real(), 0.0);
  EXPECT_LE(std::abs(v.value.imag()), v.quad_error + 1e-18);
  // independent transforms: fine trapezoid of the samples
  const auto samples = GridFunction::sample(Grid(-1, 1, 20001), Domain::time, [](double x) { return cplx(bump::value(x)); });
  double ref = 0.0;
  for (std::size_t k = 0; k < zeros100().size(); ++k) ref += 2 * std::norm(fourier_grid_at(samples, zeros100()[k]));
  EXPECT_NEAR(v.value.real(), ref, 1e-12);
  // the first term alone agrees with the high-precision transform
  EXPECT_NEAR(fourier_at(bump, zeros100()[0]).value.real(), oracle::kBumpHat[2].value, 1e-12);
}

TEST(WeilPairing, HermitianSymmetry) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 5; ++k) {
    const auto a = random_bump(rng), b = random_bump(rng);
    const cplx ab = weil_pairing(a, b, zeros100()).value, ba = weil_pairing(b, a, zeros100()).value;
    EXPECT_NEAR(std::abs(ab - std::conj(ba)), 0.0, 1e-15 * (1 + std::abs(ab)));
  }
}

TEST(WeilPairing, Sesquilinear) {
  std::mt19937_64 rng(6);
  const auto a = random_bump(rng), b = random_bump(rng), c = random_bump(rng);
  const cplx alpha(0.3, -1.7);
  Combination<> lhs;
  lhs.smooth = {{alpha, a}, {1.0, b}};
  const cplx left = weil_pairing(lhs, c, zeros100()).value;
  const cplx right = alpha * weil_pairing(a, c, zeros100()).value + weil_pairing(b, c, zeros100()).value;
  EXPECT_NEAR(std::abs(left - right), 0.0, 1e-14 * (1 + std::abs(left)));
  Combination<> rhs;
  rhs.smooth = {{alpha, c}};
  const cplx second = weil_pairing(a, rhs, zeros100()).value;
  EXPECT_NEAR(std::abs(second - std::conj(alpha) * weil_pairing(a, c, zeros100()).value), 0.0, 1e-14 * (1 + std::abs(second)));
}

TEST(WeilPairing, PositiveOnRandomBumps) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 50; ++k) {
    const auto psi = random_bump(rng);
    const auto v = weil_pairing(psi, psi, zeros100());
    EXPECT_GE(v.value.real(), -v.total_bound());
    EXPECT_LE(std::abs(v.value.imag()), v.quad_error + 1e-15 * std::abs(v.value));
  }
}

TEST(WeilPairing, NonRealZerosUseConjugatePoint) {
  const std::vector<Zero> zs = {{cplx(14.0, 0.5), 1}, {cplx(-14.0, 0.5), 1}};
  const auto a = TestFunction::unit_bump(0.3), b = TestFunction::unit_bump(-0.2, 0.8);
  const auto v = weil_pairing(a, b, std::span<const Zero>(zs), 100.0);
  cplx ref{};
  for (const auto& z : zs) ref += fourier_at(a, z.gamma).value * std::conj(fourier_at(b, std::conj(z.gamma)).value);
  EXPECT_NEAR(std::abs(v.value - ref), 0.0, 1e-15);
}

TEST(WeilPairing, GridFunctionMatchesTestFunction) {
  const auto psi = TestFunction::unit_bump(0.5, 1.2);
  const auto g = GridFunction::sample(Grid(-1, 2, 3001), Domain::time, psi);
  const auto a = weil_pairing(g, g, zeros100()), b = weil_pairing(psi, psi, zeros100());
  EXPECT_NEAR(a.value.real(), b.value.real(), a.quad_error + 1e-12);
}

TEST(FormValue, JsonFields) {
  const auto j = to_json(FormValue{cplx(1.5, -2.0), 0.25, 0.125});
  EXPECT_EQ(j.at("value_re"), 1.5);
  EXPECT_EQ(j.at("value_im"), -2.0);
  EXPECT_EQ(j.at("tail_bound"), 0.25);
  EXPECT_EQ(j.at("quad_error"), 0.125);
}

TEST(ScrewG, VanishesAtZero) {
  const auto v = screw_g(0.0, zeros100());
  EXPECT_EQ(v.value, cplx(0.0));
  EXPECT_EQ(v.tail_bound, 0.0);
}

TEST(ScrewG, ConjugateSymmetric) {
  EXPECT_NEAR(std::abs(screw_g(-1.7, zeros100()).value - std::conj(screw_g(1.7, zeros100()).value)), 0.0, 1e-12);
}

TEST(ScrewG, RealNegativeAtOne) {
  const auto v = screw_g(1.0, zeros100());
  EXPECT_NEAR(v.value.imag(), 0.0, 1e-15);
  EXPECT_LT(v.value.real(), 0.0);
  // more zeros keep it negative
  const auto wide = load_zeros(std::string(WEIL_LAB_DATA_DIR) + "/zeros_first30.txt", 120.0);
  EXPECT_LT(screw_g(1.0, wide).value.real(), 0.0);
  double ref = 0.0;
  for (std::size_t k = 0; k < zeros100().size(); ++k) ref += 2 * (std::cos(zeros100()[k]) - 1) / (zeros100()[k] * zeros100()[k]);
  EXPECT_NEAR(v.value.real(), ref, 1e-14);
}

TEST(ScrewKernel, OriginAndHermitian) {
  EXPECT_EQ(screw_kernel(0, 0, zeros100()), cplx(0.0));
  EXPECT_NEAR(std::abs(screw_kernel(1.1, 0.4, zeros100()) - std::conj(screw_kernel(0.4, 1.1, zeros100()))), 0.0, 1e-14);
}

TEST(ScrewKernel, DiagonalIsNonnegativeDirectSum) {
  const double t = 0.8;
  double ref = 0.0;
  for (std::size_t k = 0; k < zeros100().size(); ++k) ref += 4 * (1 - std::cos(zeros100()[k] * t)) / (zeros100()[k] * zeros100()[k]);
  const cplx G = screw_kernel(t, t, zeros100());
  EXPECT_NEAR(G.real(), ref, 1e-14);
  EXPECT_GE(G.real(), 0.0);
}

TEST(ScrewKernel, GramMatricesArePositiveSemidefinite) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXcd G(8, 8);
    std::vector<double> t(8);
    for (auto& x : t) x = u(rng);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) G(i, j) = screw_kernel(t[i], t[j], zeros100());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8 * G.trace().real());
  }
}

TEST(Antiderivative, OfDerivativeIsTheBump) {
  const auto psi = antiderivative(TestFunction::bump_derivative(0.4, 0.9));
  EXPECT_TRUE(psi.compact());
  for (double x : {-0.3, 0.1, 0.4, 1.0})
    EXPECT_NEAR(std::abs(psi(x) - TestFunction::unit_bump(0.4, 0.9)(x)), 0.0, 1e-15);
}

TEST(Antiderivative, OfBumpIsNotCompact) {
  const auto psi = antiderivative(TestFunction::unit_bump());
  EXPECT_FALSE(psi.compact());
  EXPECT_NEAR(psi(5.0).real(), oracle::kBumpIntegral, 1e-14);
  EXPECT_THROW(antiderivative(psi), DomainError);
}

TEST(Antiderivative, TransformRelation) {
  const TestFunction phi({{AtomKind::bump, -0.5, 0.7, 1.0}, {AtomKind::bump, 0.8, 0.7, -1.0}});
  const auto psi = antiderivative(phi);
  ASSERT_TRUE(psi.compact());
  const double lambda = 3.0;
  const cplx lhs = fourier_at(psi, lambda).value;
  const cplx rhs = fourier_at(phi, lambda).value / (-I * lambda);
  EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10);
}

TEST(ScrewForm, DerivativeOfBumpMatchesWeilPairingOfBump) {
  const auto phi = TestFunction::bump_derivative();
  const auto s = screw_form(phi, phi, zeros100());
  const auto w = weil_pairing(TestFunction::unit_bump(), TestFunction::unit_bump(), zeros100());
  EXPECT_NEAR(std::abs(s.value - w.value), 0.0, 1e-5);
  EXPECT_LE(std::abs(s.value - w.value), s.total_bound() + w.total_bound());
}

TEST(ScrewForm, ZeroFunctionGivesZero) {
  const TestFunction zero;
  EXPECT_EQ(screw_form(zero, zero, zeros100()).value, cplx(0.0));
}

TEST(ScrewForm, QuadratureMatchesSpectralForm) {
  const TestFunction phi({{AtomKind::bump, -0.6, 0.5, cplx(1.0, 0.5)},
                          {AtomKind::bump, 0.7, 0.5, cplx(-1.0, -0.5)},
                          {AtomKind::bump_derivative, 0.1, 0.8, 0.3}});
  const auto q = screw_form(phi, phi, zeros100());
  const auto s = screw_form_spectral(phi, phi, zeros100());
  EXPECT_LE(std::abs(q.value - s.value), q.quad_error + s.quad_error + 1e-14);
}

TEST(ScrewForm, RejectsNonzeroMean) {
  const auto b = TestFunction::unit_bump();
  EXPECT_THROW(screw_form(b, b, zeros100()), DomainError);
}

TEST(TauNorm, UnitVectorAndBasisValue) {
  auto S = spectral_coeffs(TestFunction{}, zeros100());
  S.entries.assign(S.entries.size(), 0.0);
  S.entries[zeros100().size()] = 1.0;  // +gamma_1 sits right after the negatives
  EXPECT_EQ(tau_norm(S, zeros100()), 1.0);

  const auto Sb = spectral_coeffs(basis_combo(0), zeros100());
  EXPECT_NEAR(std::abs(Sb.entries[zeros100().size()] - (-I / std::sqrt(pi))), 0.0, 1e-6);
  EXPECT_NEAR(tau_norm(Sb, zeros100()), 1 / pi, 1e-6);

  auto scaled = Sb;
  for (auto& e : scaled.entries) e *= cplx(2.0, 1.0);
  EXPECT_NEAR(tau_norm(scaled, zeros100()), 5 * tau_norm(Sb, zeros100()), 1e-14);
}

TEST(TauNorm, MisalignedInputIsRejected) {
  SpectralCoefficients S{{}, {1.0, 2.0}};
  EXPECT_THROW(tau_norm(S, zeros100()), DomainError);
}

TEST(TauNorm, EqualsWeilPairing) {
  const auto psi = TestFunction::unit_bump(0.2, 0.8);
  const auto w = weil_pairing(psi, psi, zeros100());
  EXPECT_NEAR(tau_norm(spectral_coeffs(psi, zeros100()), zeros100()), w.value.real(), w.quad_error + 1e-15);
}

TEST(Witness, NormalizedAtGammaAndVanishingElsewhere) {
  const auto [psi, r] = separation_witness(zeros100()[0], zeros100());
  EXPECT_NEAR(std::abs(r.value_at_gamma - 1.0), 0.0, 1e-6);
  EXPECT_NEAR(std::abs(transform(psi, zeros100()[1]).value), 0.0, 1e-6);
  EXPECT_LE(r.max_other, 1e-6);
  EXPECT_TRUE(r.bound_holds);
}

TEST(Witness, GammaOutsideCatalogIsRejected) { EXPECT_THROW(separation_witness(15.0, zeros100()), DomainError); }
