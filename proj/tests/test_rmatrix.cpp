#include <gtest/gtest.h>

#include "qrop/rmatrix.hpp"

using namespace qrop;

namespace {

const Rep& sl2() {
  static const Rep r = builtin_rep("sl2");
  return r;
}
const Rep& a2() {
  static const Rep r = builtin_rep("A2");
  return r;
}
const Rep& b2() {
  static const Rep r = builtin_rep("B2");
  return r;
}

Rational half(int k) { return Rational(k, 2); }

}  // namespace

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

TEST(BuildR, Sl2HasOneFactorAndQuarterPrefactor) {
  const auto R = build_R(sl2(), {1});
  ASSERT_EQ(R.factors.size(), 1u);
  // Q = q^{(A^-1) H (x) H} with A = (2): Q^{1/2} = q^{H (x) H / 4}
  EXPECT_EQ(R.prefactor[0][0], Rational(1, 2));
  EXPECT_EQ(R.factors[0].arg, R.ta.embed(0, *sl2().e[0]) * R.ta.embed(1, sl2().f[0]));
  EXPECT_TRUE(R.factors[0].certified) << R.factors[0].certificate;
}

TEST(BuildR, A2MiddleArgumentIsTheNonSimpleRoot) {
  const auto R = build_R(a2(), {1, 2, 1});
  ASSERT_EQ(R.factors.size(), 3u);
  const std::vector<std::vector<Rational>> inv{{Rational(2, 3), Rational(1, 3)}, {Rational(1, 3), Rational(2, 3)}};
  EXPECT_EQ(R.prefactor, inv);
  // product order: root alpha_2, then alpha_1 + alpha_2, then alpha_1
  EXPECT_EQ(R.roots[2].root, (Root{0, 1}));
  EXPECT_EQ(R.roots[1].root, (Root{1, 1}));
  EXPECT_EQ(R.factors[0].arg, R.ta.embed(0, a2().gen({'e', 1})) * R.ta.embed(1, a2().f[1]));
  EXPECT_EQ(R.factors[1].arg, R.ta.embed(0, R.roots[1].e) * R.ta.embed(1, R.roots[1].f));
  EXPECT_TRUE(R.all_certified());
}

TEST(BuildR, B2HasFourFactorsWithMixedScales) {
  const auto R = build_R(b2(), b2().word);
  ASSERT_EQ(R.factors.size(), 4u);
  std::set<std::string> scales;
  for (const auto& f : R.factors) scales.insert(f.scale.str());
  EXPECT_EQ(scales.size(), 2u);
}

TEST(BuildR, RejectsNonReducedWord) {
  EXPECT_THROW(build_R(a2(), {1, 1, 2}), std::invalid_argument);
  EXPECT_THROW(build_R(a2(), {1, 2}), std::invalid_argument);
}

TEST(BuildR, BarredGeneratorsCarryHalfPowersOfK) {
  const auto R = build_R(a2(), {1, 2, 1}, true);
  const auto& r = a2();
  const auto& rv = R.roots[0];  // alpha_1
  const OpElement eb = r.q(0, half(-1)) * (r.K_pow(0, half(1)) * rv.e);
  const OpElement fb = r.q(0, half(-1)) * (r.K_pow(0, half(-1)) * rv.f);
  EXPECT_EQ(R.factors.back().arg, R.ta.embed(0, eb) * R.ta.embed(1, fb));
}

// ---------------------------------------------------------------------------
// Weights and prefactor conjugation
// ---------------------------------------------------------------------------

TEST(Prefactor, WeightsOfRootVectors) {
  const auto R = build_R(a2(), {1, 2, 1});
  for (const auto& rv : R.roots) {
    auto w = monomial_weight(a2(), rv.e.terms()[0].exp);
    ASSERT_TRUE(w);
    EXPECT_EQ((*w)[0], Rational(rv.root[0]));
    EXPECT_EQ((*w)[1], Rational(rv.root[1]));
    auto wf = monomial_weight(a2(), rv.f.terms()[0].exp);
    EXPECT_EQ((*wf)[0], Rational(-rv.root[0]));
  }
}

TEST(Prefactor, Sl2ConjugationOfFlippedCoproduct) {
  // Q^{-1/2} Delta'(e) Q^{1/2} = e (x) K^-1 + 1 (x) e and Q^{1/2} Delta(e) Q^{-1/2} = e (x) K + 1 (x) e
  const auto& r = sl2();
  const TensorAlgebra ta(r.space, 2);
  const OpElement e = *r.e[0];
  EXPECT_EQ(conjugate_prefactor(r, ta, coproduct(r, ta, {'e', 0}, 0, 1, true), 0, 1, -1),
            ta.embed(0, e) * ta.embed(1, r.K_pow(0, -1)) + ta.embed(1, e));
  EXPECT_EQ(conjugate_prefactor(r, ta, coproduct(r, ta, {'e', 0}, 0, 1, false), 0, 1, 1),
            ta.embed(0, e) * ta.embed(1, r.K[0]) + ta.embed(1, e));
}

TEST(Prefactor, A2SingleLegElements) {
  const auto& r = a2();
  const TensorAlgebra ta(r.space, 2);
  // Ad Q^{1/2}: e_1 (x) 1 -> e_1 (x) K_1^{1/2}; 1 (x) f_2 -> K_2^{-1/2} (x) f_2
  EXPECT_EQ(conjugate_prefactor(r, ta, ta.embed(0, r.gen({'e', 0})), 0, 1, 1), ta.embed(0, r.gen({'e', 0})) * ta.embed(1, r.K_pow(0, half(1))));
  EXPECT_EQ(conjugate_prefactor(r, ta, ta.embed(1, r.f[1]), 0, 1, 1), ta.embed(0, r.K_pow(1, half(-1))) * ta.embed(1, r.f[1]));
  // inverse conjugation undoes it
  const OpElement x = ta.embed(0, r.gen({'e', 1})) * ta.embed(1, r.f[0]);
  EXPECT_EQ(conjugate_prefactor(r, ta, conjugate_prefactor(r, ta, x, 0, 1, 1), 0, 1, -1), x);
}

// ---------------------------------------------------------------------------
// Braiding
// ---------------------------------------------------------------------------

TEST(Braiding, Sl2AllGenerators) {
  const auto R = build_R(sl2(), {1});
  for (const auto& g : sl2().generators()) {
    const auto t = verify_braiding(R, g);
    EXPECT_TRUE(t.ok) << g.str() << ": " << t.failure;
    std::string why;
    EXPECT_TRUE(t.reverify(&why)) << why;
  }
}

TEST(Braiding, Sl2MatchesTheRankOneIdentity) {
  // (e (x) K^-1 + 1 (x) e) g(e (x) f) = g(e (x) f) (e (x) K + 1 (x) e)
  const auto& r = sl2();
  const auto R = build_R(r, {1});
  const auto t = verify_braiding(R, {'e', 0});
  ASSERT_TRUE(t.ok);
  const OpElement e = *r.e[0];
  EXPECT_EQ(sum_parts(t.steps.front().after), R.ta.embed(0, e) * R.ta.embed(1, r.K_pow(0, -1)) + R.ta.embed(1, e));
  EXPECT_EQ(sum_parts(t.steps.back().after), R.ta.embed(0, e) * R.ta.embed(1, r.K[0]) + R.ta.embed(1, e));
}

TEST(Braiding, A2BothWordsAllGenerators) {
  for (const ReducedWord& w : {ReducedWord{1, 2, 1}, ReducedWord{2, 1, 2}}) {
    const auto R = build_R(a2(), w);
    for (const auto& g : a2().generators()) {
      const auto t = verify_braiding(R, g);
      EXPECT_TRUE(t.ok) << word_str(w) << " " << g.str() << ": " << t.failure;
      std::string why;
      EXPECT_TRUE(t.reverify(&why)) << why;
    }
  }
}

TEST(Braiding, A2FirstGeneratorUsesTheRootCommutator) {
  // three g_b steps; the first produces c = e_12 (x) q^{1/2} K_1^-1 f_2
  const auto& r = a2();
  const auto R = build_R(r, {1, 2, 1});
  const auto t = verify_braiding(R, {'e', 0});
  ASSERT_TRUE(t.ok);
  int conj_steps = 0;
  for (const auto& s : t.steps) conj_steps += s.conjugation ? 1 : 0;
  EXPECT_EQ(conj_steps, 3);
  const OpElement c = R.ta.embed(0, R.roots[1].e) * R.ta.embed(1, r.q(0, half(1)) * (r.K_pow(0, -1) * r.f[1]));
  bool found = false;
  for (const auto& p : t.steps[1].after) found = found || p == c;
  EXPECT_TRUE(found);
  EXPECT_EQ(t.steps[1].rule, "genpenta");
}

TEST(Braiding, TamperedTraceFailsReplay) {
  const auto R = build_R(a2(), {2, 1, 2});
  auto t = verify_braiding(R, {'f', 1});
  ASSERT_TRUE(t.ok);
  t.steps[1].after[0] = t.steps[1].after[0] + t.steps[1].after[0];
  EXPECT_FALSE(t.reverify());
}

TEST(Braiding, B2GeneratorList) {
  const auto gens = braiding_generators(b2());
  ASSERT_EQ(gens.size(), 4u);
  EXPECT_EQ(gens[0].kind, 'e');
  EXPECT_EQ(gens[1].kind, 'f');
}

// ---------------------------------------------------------------------------
// Quasi-triangularity
// ---------------------------------------------------------------------------

TEST(QuasiTriangularity, Sl2IsOneMerge) {
  const auto& r = sl2();
  const auto R = build_R(r, {1});
  const TensorAlgebra t3(r.space, 3);
  const OpElement e = *r.e[0], f = r.f[0];
  for (int leg : {1, 2}) {
    const auto t = verify_quasitriangularity(R, leg);
    ASSERT_TRUE(t.ok) << t.failure;
    ASSERT_EQ(t.steps.size(), 1u);
    EXPECT_EQ(t.steps[0].rule, "merge");
    EXPECT_TRUE(t.reverify());
    if (leg == 1) {
      // g(Delta e (x) f) = g(e (x) K^{1/2} (x) f) g(K^{-1/2} (x) e (x) f)
      EXPECT_EQ(t.steps[0].after[0].arg, t3.embed(0, e) * t3.embed(1, r.K_pow(0, half(1))) * t3.embed(2, f));
      EXPECT_EQ(t.steps[0].after[1].arg, t3.embed(0, r.K_pow(0, half(-1))) * t3.embed(1, e) * t3.embed(2, f));
    }
  }
}

TEST(QuasiTriangularity, A2BothLegsBothWords) {
  for (const ReducedWord& w : {ReducedWord{1, 2, 1}, ReducedWord{2, 1, 2}}) {
    const auto R = build_R(a2(), w);
    for (int leg : {1, 2}) {
      const auto t = verify_quasitriangularity(R, leg);
      EXPECT_TRUE(t.ok) << t.title << ": " << t.failure;
      EXPECT_EQ(t.steps.size(), 7u);
      std::string why;
      EXPECT_TRUE(t.reverify(&why)) << why;
    }
  }
}

TEST(QuasiTriangularity, A2PentagonStepUsesTheMixedCommutator) {
  // c = [K_2^{-1/2} (x) e_2 (x) f_2, e_1 (x) K_1^{1/2} (x) f_1]/(q-q^-1) = K_2^{-1/2} e_1 (x) K_1^{1/2} e_2 (x) f_12
  const auto& r = a2();
  const auto R = build_R(r, {1, 2, 1});
  const TensorAlgebra t3(r.space, 3);
  const auto t = verify_quasitriangularity(R, 1);
  ASSERT_TRUE(t.ok);
  const OpElement c = t3.embed(0, r.K_pow(1, half(-1)) * r.gen({'e', 0})) * t3.embed(1, r.K_pow(0, half(1)) * r.gen({'e', 1})) *
                      t3.embed(2, R.roots[1].f);
  int pentas = 0;
  for (const auto& s : t.steps)
    if (s.rule == "genpenta") {
      ++pentas;
      EXPECT_EQ(s.before[1].arg, c);
    }
  EXPECT_EQ(pentas, 1);
}

TEST(QuasiTriangularity, TamperedTraceFailsReplay) {
  const auto R = build_R(a2(), {1, 2, 1});
  auto t = verify_quasitriangularity(R, 2);
  ASSERT_TRUE(t.ok);
  std::swap(t.steps[4].after[0], t.steps[4].after[1]);
  EXPECT_FALSE(t.reverify());
}

TEST(QuasiTriangularity, RejectsBadLeg) {
  const auto R = build_R(sl2(), {1});
  EXPECT_THROW(verify_quasitriangularity(R, 3), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Interchange relations
// ---------------------------------------------------------------------------

TEST(Interchange, A2RelationsAdjointsAndTilde) {
  const auto rep = degenerate_interchange_check(a2());
  EXPECT_TRUE(rep.all_pass()) << rep.first_failure();
  EXPECT_EQ(rep.items.size(), 16u);
}

TEST(Interchange, OnlyForA2) { EXPECT_THROW(degenerate_interchange_check(sl2()), std::invalid_argument); }

// ---------------------------------------------------------------------------
// Rank-1 numerics (reduced grid; the full grid runs in the acceptance binary)
// ---------------------------------------------------------------------------

namespace {
rank1::Params small_grid() {
  rank1::Params p;
  p.grid_n = 16;
  p.substeps = 16;
  return p;
}
}  // namespace

TEST(Rank1, BraidingOnGaussians) {
  const rank1::ROperator R(small_grid());
  const auto F = rank1::product({1.0, {0.3, 0}}, {1.3, {0, -0.2}});
  for (char g : {'e', 'f', 'K'}) {
    const auto c = rank1::braiding_check(R, g, F, 1e-6);
    EXPECT_TRUE(c.pass()) << c.name << " " << c.detail;
  }
}

TEST(Rank1, StepRefinementAgrees) {
  // two t-step sizes give the same R F
  auto p = small_grid();
  const auto F = rank1::product({0.9, {0.1, 0.1}}, {1.1, {-0.2, 0}});
  const rank1::ROperator coarse(p);
  p.substeps = 24;
  const rank1::ROperator fine(p);
  for (double x : {-1.0, 0.4})
    for (double y : {-0.3, 1.2}) EXPECT_LT(std::abs(coarse.apply(F, x, y) - fine.apply(F, x, y)), 1e-9);
}

TEST(Rank1, Unitarity) {
  auto p = small_grid();
  p.grid_lo = -4;
  p.grid_hi = 4;
  p.grid_n = 40;
  p.substeps = 4;
  const rank1::ROperator R(p);
  const auto c = rank1::unitarity_check(R, rank1::product({1.0, {0.3, 0}}, {1.0, {0, -0.2}}));
  EXPECT_TRUE(c.pass()) << c.detail;
}

TEST(Rank1, RequiresLiftBelowPoles) {
  rank1::Params p;
  p.lift = 0.5;
  EXPECT_THROW(rank1::ROperator{p}, std::invalid_argument);
}

TEST(Rank1, UElementAndRibbonConstant) {
  const auto rep = rank1::verify_u_element(0.3);
  EXPECT_TRUE(rep.all_pass()) << rep.first_failure();
  // closed form of the constant at lambda = 0, b = 0.7: e^{pi i Q^2 / 2}
  const double Q = 0.7 + 1 / 0.7;
  EXPECT_LT(std::abs(rank1::ribbon_constant(0, 0.7) - std::exp(rank1::kI * (rank1::kPi * Q * Q / 2))), 1e-14);
}

TEST(Rank1, WeylElement) {
  const auto rep = rank1::rank1_weyl_element_check(0.3);
  EXPECT_TRUE(rep.all_pass()) << rep.first_failure();
  EXPECT_EQ(rep.items.size(), 4u);
}
