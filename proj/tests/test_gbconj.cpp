#include <gtest/gtest.h>

#include "qrop/gbconj.hpp"
#include "qrop/lusztig.hpp"

using namespace qrop;

namespace {

const Sym b = Sym::bl();

// e^{2 pi b (x u + y p)} on one degree of freedom
OpElement mono(Rational x, Rational y) {
  ExponentForm e(1, 0);
  e.pos(0) = Sym::bl() * x * Rational(2);
  e.mom(0) = Sym::bl() * y * Rational(2);
  return expo(e);
}

}  // namespace

TEST(GbConjugate, Q2Forward) {
  OpElement U = mono(1, 0), V = mono(0, 1);
  ASSERT_TRUE(U * V == PhaseCoeff::q(2) * (V * U));
  RewriteStep log;
  OpElement out = gb_conjugate(U, V, b, Side::Forward, &log);
  EXPECT_EQ(out, U + PhaseCoeff::q(-1) * (U * V));
  EXPECT_EQ(log.rule, "q2-conj");
}

TEST(GbConjugate, Q2Inverse) {
  // g(U)^* V g(U) = q^-1 U V + V
  OpElement U = mono(1, 0), V = mono(0, 1);
  EXPECT_EQ(gb_conjugate(V, U, b, Side::Inverse), V + PhaseCoeff::q(-1) * (U * V));
}

TEST(GbConjugate, CommutingIsIdentity) {
  OpElement U = mono(1, 0), V = mono(2, 0);
  RewriteStep log;
  EXPECT_EQ(gb_conjugate(U, V, b, Side::Forward, &log), U);
  EXPECT_EQ(log.rule, "commute");
}

TEST(GbConjugate, Q4MonomialRule) {
  // U V = q^4 V U
  OpElement U = mono(2, 0), V = mono(0, 1);
  ASSERT_TRUE(U * V == PhaseCoeff::q(4) * (V * U));
  OpElement expected = U + q_int(b, 2) * PhaseCoeff::q(-2) * (U * V) + PhaseCoeff::q(-4) * (U * V * V);
  EXPECT_EQ(gb_conjugate(U, V, b, Side::Forward), expected);
  OpElement expected_inv = V + q_int(b, 2) * PhaseCoeff::q(2) * (V * U) + PhaseCoeff::q(4) * (V * U * U);
  EXPECT_EQ(gb_conjugate(V, U, b, Side::Inverse), expected_inv);
}

TEST(GbConjugate, WrongOrientationThrows) {
  OpElement U = mono(1, 0), V = mono(0, 1);
  EXPECT_THROW(gb_conjugate(V, U, b, Side::Forward), UnsupportedConjugationError);
  EXPECT_THROW(gb_conjugate(U, U - V, b, Side::Forward), UnsupportedConjugationError);
}

TEST(GbConjugate, PentagonPatternInRank2) {
  // A2 in the tensor square: the first two braiding steps for e1 with word (1,2,1)
  Rep r = builtin_a2();
  TensorAlgebra ta(r.space, 2);
  auto E = [&](int leg, const OpElement& x) { return ta.embed(leg, x); };
  OpElement p1 = E(0, *r.e[0]) * E(1, r.K_pow(0, -1));
  OpElement p3 = E(1, *r.e[0]);
  OpElement A2 = E(0, *r.e[1]) * E(1, r.f[1]);
  OpElement c = E(0, e_ij(r, 0, 1)) * E(1, r.q(0, Rational(1, 2)) * (r.K_pow(0, -1) * r.f[1]));
  RewriteStep s1;
  auto step1 = gb_conjugate_parts({p1, p3}, A2, b, Side::Inverse, &s1, &ta.space);
  EXPECT_EQ(sum_parts(step1), p1 + c + p3);
  EXPECT_NE(s1.rule.find("genpenta"), std::string::npos) << s1.rule;
  OpElement A12 = E(0, e_ij(r, 0, 1)) * E(1, f_ij(r, 0, 1));
  RewriteStep s2;
  auto step2 = gb_conjugate_parts(step1, A12, b, Side::Inverse, &s2, &ta.space);
  EXPECT_EQ(sum_parts(step2), p1 + p3) << s2.rule;
  RewriteTrace t{"A2 e1", {s1, s2}, true, ""};
  std::string why;
  EXPECT_TRUE(t.reverify(&why)) << why;
}

TEST(GbConjugate, Rank1Braiding) {
  // (e x K^-1 + 1 x e) g(e x f) = g(e x f) (e x K + 1 x e)
  Rep r = builtin_sl2();
  TensorAlgebra ta(r.space, 2);
  const OpElement& e = *r.e[0];
  OpElement A = ta.embed(0, e) * ta.embed(1, r.f[0]);
  OpElement lhs = ta.embed(0, e) * ta.embed(1, r.K_pow(0, -1)) + ta.embed(1, e);
  OpElement rhs = ta.embed(0, e) * ta.embed(1, r.K[0]) + ta.embed(1, e);
  EXPECT_EQ(sum_parts(gb_conjugate_parts({ta.embed(0, e) * ta.embed(1, r.K_pow(0, -1)), ta.embed(1, e)}, A, b, Side::Inverse, nullptr, &ta.space)), rhs);
  (void)lhs;
  // f: (f x 1 + K x f) g(e x f) = g(e x f)(f x 1 + K^-1 x f)
  const OpElement& f = r.f[0];
  OpElement out = sum_parts(gb_conjugate_parts({ta.embed(0, f), ta.embed(0, r.K[0]) * ta.embed(1, f)}, A, b, Side::Inverse, nullptr, &ta.space));
  EXPECT_EQ(out, ta.embed(0, f) + ta.embed(0, r.K_pow(0, -1)) * ta.embed(1, f));
}
