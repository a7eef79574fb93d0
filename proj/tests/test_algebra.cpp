#include <gtest/gtest.h>

#include <complex>
#include <numbers>
#include <random>

#include "qrop/weyl.hpp"

using namespace qrop;
using cd = std::complex<double>;

namespace {

constexpr double kB = 0.7;

// Independent model of a monomial acting on exponential test functions
// f(x) = A e^{s.x}: e^{pi(a.u + c.p)} f(x) = e^{-i pi a.c/4} e^{pi a.x} f(x - i c/2),
// i.e. the shift e^{2 pi b p} f(x) = f(x - i b) with no algebra engine involved.
struct ExpState {
  cd amp;
  std::vector<cd> s;
};

ExpState act(const ExponentForm& e, cd coeff, const ExpState& in) {
  ExpState out = in;
  cd ac = 0;
  cd shift_phase = 0;
  for (std::size_t k = 0; k < e.n(); ++k) {
    const double a = e.pos(k).eval(kB);
    const double c = e.mom(k).eval(kB);
    ac += a * c;
    shift_phase += in.s[k] * cd(0, -c / 2);
    out.s[k] += std::numbers::pi * a;
  }
  out.amp = coeff * in.amp * std::exp(cd(0, -std::numbers::pi / 4) * ac) * std::exp(shift_phase);
  return out;
}

ExponentForm form1(Sym a, Sym c) {
  ExponentForm e(1, 0);
  e.pos(0) = std::move(a);
  e.mom(0) = std::move(c);
  return e;
}

Sym random_sym(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3), den(1, 2), pow(-1, 1), which(0, 1);
  Sym s;
  for (int i = 0; i < 2; ++i) {
    if (which(rng)) s += Sym::monomial(pow(rng), 0, Rational(coef(rng), den(rng)));
    else s += Sym::monomial(0, which(rng) ? 1 : -1, Rational(coef(rng), den(rng)));
  }
  return s;
}

ExponentForm random_form(std::mt19937& rng, std::size_t n, std::size_t m) {
  ExponentForm e(n, m);
  for (std::size_t v = 0; v < e.dim(); ++v) e[v] = random_sym(rng);
  return e;
}

}  // namespace

TEST(Rational, ArithmeticAndOrdering) {
  Rational a(1, 2), b(-2, 6);
  EXPECT_EQ(a + b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(-1, 6));
  EXPECT_EQ(a / b, Rational(-3, 2));
  EXPECT_LT(b, a);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Sym, ShortSquareReduces) {
  // b_s^2 = b_l^2 / 2
  EXPECT_EQ(Sym::bs() * Sym::bs(), Sym::monomial(2, 0, Rational(1, 2)));
  EXPECT_EQ(Sym::bs_inv() * Sym::bs_inv(), Sym::monomial(-2, 0, 2));
  EXPECT_EQ(Sym::bs() * Sym::bs_inv(), Sym(1));
  EXPECT_NEAR(Sym::bs().eval(kB), kB / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(Sym::bs_inv().eval(kB), std::sqrt(2.0) / kB, 1e-12);
}

TEST(Sym, DualSwapExchangesScales) {
  EXPECT_EQ(Sym::bl().dual_swap(), Sym::bl_inv());
  EXPECT_EQ(Sym::bl_inv().dual_swap(), Sym::bl());
  EXPECT_EQ(Sym::bs().dual_swap(), Sym::bs_inv());
  EXPECT_EQ(Sym::bs_inv().dual_swap(), Sym::bs());
  EXPECT_NEAR(Sym::bs_inv().dual_swap().eval(kB), Sym::bs().eval(kB), 1e-14);
}

TEST(Phase, FoldsIntegerShifts) {
  // e^{pi i (1 + b^2)} = -q
  EXPECT_EQ(PhaseCoeff::phase(Sym(1) + Sym::monomial(2, 0)), -PhaseCoeff::q());
  EXPECT_EQ(PhaseCoeff::q(1) * PhaseCoeff::q(-1), PhaseCoeff(1));
  EXPECT_EQ(PhaseCoeff::q(1).conj(), PhaseCoeff::q(-1));
}

TEST(Phase, ExactDivision) {
  const Sym b = Sym::bl();
  PhaseCoeff d = q_diff(b, 1);
  PhaseCoeff n = q_diff(b, 2);  // q^2 - q^-2 = (q - q^-1)(q + q^-1)
  EXPECT_EQ(n.divide(d), q_int(b, 2));
  EXPECT_THROW((PhaseCoeff(1)).divide(d), NonDivisibleError);
  PhaseCoeff f3 = q_factorial(b, 3);
  EXPECT_EQ((f3 * d).divide(f3), d);
}

TEST(Weyl, KTimesTMatchesShiftOracle) {
  const Sym b = Sym::bl();
  auto K = expo(form1(b * Rational(-2), Sym{}));
  auto T = expo(form1(b, b * Rational(-2)));
  auto KT = K * T;
  EXPECT_EQ(KT, PhaseCoeff::q() * expo(form1(-b, b * Rational(-2))));
  ExpState f{1.0, {cd(0.3, -0.2)}};
  ExpState lhs = act(K.terms()[0].exp, 1.0, act(T.terms()[0].exp, 1.0, f));
  ExpState rhs = act(KT.terms()[0].exp, KT.terms()[0].coeff.eval(kB), f);
  EXPECT_NEAR(std::abs(lhs.amp - rhs.amp), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(lhs.s[0] - rhs.s[0]), 0.0, 1e-12);
}

TEST(Weyl, ChainPairQSquared) {
  const Sym b = Sym::bl();
  auto T1 = expo(form1(-b, b * Rational(-2)));
  auto T2 = expo(form1(b, b * Rational(-2)));
  EXPECT_EQ(T1 * T2, PhaseCoeff::q(2) * (T2 * T1));
  EXPECT_EQ(exchange_theta(T1, T2), Sym::monomial(2, 0));
}

TEST(Weyl, KEqualsQSquaredEK) {
  const Sym b = Sym::bl();
  auto K = expo(form1(b * Rational(-2), Sym{}));
  auto e = expo(form1(-b, b * Rational(-2))) + expo(form1(b, b * Rational(-2)));
  EXPECT_EQ(K * e, PhaseCoeff::q(2) * (e * K));
}

TEST(Weyl, RandomProductsAgreeWithShiftOracle) {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    auto x = random_form(rng, 2, 0);
    auto y = random_form(rng, 2, 0);
    auto xy = expo(x) * expo(y);
    ExpState f{1.0, {cd(0.1, 0.2), cd(-0.3, 0.05)}};
    ExpState lhs = act(x, 1.0, act(y, 1.0, f));
    ExpState rhs = act(xy.terms()[0].exp, xy.terms()[0].coeff.eval(kB), f);
    ASSERT_NEAR(std::abs(lhs.amp - rhs.amp), 0.0, 1e-9 * std::max(1.0, std::abs(lhs.amp)));
  }
}

TEST(Weyl, AssociativityProperty) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    auto x = expo(random_form(rng, 2, 1));
    auto y = expo(random_form(rng, 2, 1));
    auto z = expo(random_form(rng, 2, 1));
    ASSERT_EQ((x * y) * z, x * (y * z));
  }
}

TEST(Weyl, OmegaAntisymmetryAndCommutation) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto x = random_form(rng, 2, 1);
    auto y = random_form(rng, 2, 1);
    EXPECT_EQ(PhaseCoeff::phase(product_phase(x, y)) * PhaseCoeff::phase(product_phase(y, x)), PhaseCoeff(1));
    const bool commutes = expo(x) * expo(y) == expo(y) * expo(x);
    EXPECT_EQ(commutes, is_integral_phase(exchange_phase(x, y) * 2));
  }
}

TEST(Weyl, CanonicalFormAndAdjoint) {
  std::mt19937 rng(99);
  const Sym b = Sym::bl();
  auto x = PhaseCoeff::q() * expo(form1(b, b * 2));
  EXPECT_EQ(adjoint(x), PhaseCoeff::q(-1) * expo(form1(b, b * 2)));
  EXPECT_TRUE((x - x).is_zero());
  for (int trial = 0; trial < 100; ++trial) {
    auto a = PhaseCoeff::q(trial % 3) * expo(random_form(rng, 2, 0)) + expo(random_form(rng, 2, 0));
    auto c = expo(random_form(rng, 2, 0));
    EXPECT_EQ(adjoint(a * c), adjoint(c) * adjoint(a));
    EXPECT_EQ(adjoint(adjoint(a)), a);
  }
}

TEST(Weyl, SelfCommutatorDivides) {
  const Sym b = Sym::bl();
  auto x = expo(form1(b, b));
  EXPECT_EQ(q_commutator_div(x, x, Sym::monomial(2, 0), q_diff(b, 1)), x * x);
}

TEST(Weyl, SubstitutionIsHomomorphism) {
  Space sp = Space::make({"u", "v"}, {"l"});
  LinearSubstitution s(sp);
  // p_u -> p_u + u/2 (a shear), with inverse p_u -> p_u - u/2
  ExponentForm img(2, 1);
  img.mom(0) = Sym(1);
  img.pos(0) = Sym(Rational(1, 2));
  s.set(2, img);
  EXPECT_TRUE(s.is_symplectic());
  LinearSubstitution inv(sp);
  img.pos(0) = Sym(Rational(-1, 2));
  inv.set(2, img);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = expo(random_form(rng, 2, 1)) + expo(random_form(rng, 2, 1));
    auto y = expo(random_form(rng, 2, 1));
    EXPECT_EQ(substitute_linear(x * y, s), substitute_linear(x, s) * substitute_linear(y, s));
    EXPECT_EQ(substitute_linear(substitute_linear(x, s), inv), x);
    EXPECT_EQ(substitute_linear(x, LinearSubstitution(sp)), x);
  }
  LinearSubstitution bad(sp);
  ExponentForm twice(2, 1);
  twice.pos(0) = Sym(2);
  bad.set(0, twice);
  EXPECT_THROW(substitute_linear(expo(twice), bad), InvalidSubstitutionError);
}

TEST(Weyl, PositivityCertificate) {
  const Sym b = Sym::bl();
  auto e = expo(form1(-b, b * Rational(-2))) + expo(form1(b, b * Rational(-2)));
  auto cert = manifest_positivity_certificate(e, Sym::monomial(2, 0));
  ASSERT_TRUE(cert.ok) << cert.failure;
  // the term with -u comes first
  EXPECT_EQ(e.terms()[cert.factors[0].order[0]].exp.pos(0), -b);
  auto bad = PhaseCoeff::q() * expo(form1(b, Sym{}));
  EXPECT_FALSE(manifest_positivity_certificate(bad, Sym::monomial(2, 0)).ok);
}
