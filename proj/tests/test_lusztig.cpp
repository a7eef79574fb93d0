#include <gtest/gtest.h>

#include "qrop/lusztig.hpp"

using namespace qrop;

namespace {

void expect_all_pass(const CheckReport& r) { EXPECT_TRUE(r.all_pass()) << r.first_failure(); }

OpElement lit(const Rep& r, const std::string& text) {
  auto c = parse_linear(text, r.space);
  ExponentForm e(r.space.n(), r.space.m());
  for (std::size_t v = 0; v < c.size(); ++v)
    if (!c[v].is_zero()) e[v] = Sym::bl() * c[v];
  return expo(e);
}

}  // namespace

TEST(Eij, A2FourTermElement) {
  Rep r = builtin_a2();
  OpElement e12 = e_ij(r, 0, 1);
  OpElement expected = lit(r, "-v + 2w - 2p_v - 2p_w") + lit(r, "-v - 2p_v - 2p_w") + lit(r, "-u + w - 2p_u - 2p_v") +
                       lit(r, "u + w - 2p_u - 2p_v");
  EXPECT_EQ(e12, expected);
  // the same element by the direct quotient
  OpElement direct = q_commutator_div(*r.e[1], *r.e[0], Sym::monomial(2, 0, Rational(1, 2)), q_diff(Sym::bl(), 1));
  EXPECT_EQ(e12, direct);
  auto cert = manifest_positivity_certificate(e12, Sym::monomial(2, 0));
  EXPECT_TRUE(cert.ok) << cert.failure;
}

TEST(Eij, A2SwappedRoles) {
  Rep r = builtin_a2();
  auto cert = manifest_positivity_certificate(e_ij(r, 1, 0), Sym::monomial(2, 0));
  EXPECT_TRUE(cert.ok) << cert.failure;
}

TEST(Eij, B2DoubleCommutatorAtShortQ) {
  Rep r = builtin_b2();
  // a_12 = -2: two brackets at q_1^-1 and q_1^0, normaliser (q_1 - q_1^-1)(q_1^2 - q_1^-2)
  const OpElement &e1 = *r.e[0], &e2 = *r.e[1];
  OpElement inner = r.q(0, -1) * (e1 * e2) - r.q(0) * (e2 * e1);
  OpElement outer = e1 * inner - inner * e1;
  PhaseCoeff norm = (r.q(0) - r.q(0, -1)) * (r.q(0, 2) - r.q(0, -2));
  EXPECT_EQ(e_ij(r, 0, 1), outer.divide(norm));
  EXPECT_FALSE(e_ij(r, 0, 1).is_zero());
  // a_21 = -1 in the other direction: a single bracket, certified
  std::string why;
  EXPECT_TRUE(certify_positive_structure(e_ij(r, 1, 0), &why)) << why;
}

TEST(Lusztig, TableEntries) {
  Rep r = builtin_a2();
  EXPECT_EQ(apply_T(r, {1}, Gen{'K', 1}), r.K[1] * r.K[0]);
  OpElement t1e1 = apply_T(r, {1}, Gen{'e', 0});
  EXPECT_EQ(t1e1, r.q(0) * (r.f[0] * r.K_pow(0, -1)));
  EXPECT_EQ(t1e1, r.q(0, -1) * (r.K_pow(0, -1) * r.f[0]));
  EXPECT_EQ(apply_T(r, {1}, Gen{'e', 1}), e_ij(r, 0, 1));
}

TEST(Lusztig, HomomorphismOnRelations) {
  for (auto name : {"sl2", "A2", "B2"}) expect_all_pass(check_T_homomorphism(builtin_rep(name)));
}

TEST(Lusztig, BraidRelations) {
  expect_all_pass(check_braid_relations(builtin_a2()));
  expect_all_pass(check_braid_relations(builtin_b2()));
}

TEST(Lusztig, WeylCovariance) {
  // s1 s2 (alpha_1) = alpha_2 in A2, so T1 T2 (x_1) = x_2
  Rep r = builtin_a2();
  for (char k : {'e', 'f', 'K'}) EXPECT_EQ(apply_T(r, {1, 2}, Gen{k, 0}), r.gen({k, 1})) << k;
}

TEST(Lusztig, ProductsOfRandomWords) {
  Rep r = builtin_a2();
  std::vector<Gen> gens = r.generators();
  LusztigEvaluator ev(r, {2});
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = 0; b < gens.size(); ++b) {
      GenPoly w = GenPoly::gen(gens[a]) * GenPoly::gen(gens[b]) * GenPoly::gen(gens[(a + b) % gens.size()]);
      EXPECT_EQ(ev.apply(w), ev.apply(gens[a]) * ev.apply(gens[b]) * ev.apply(gens[(a + b) % gens.size()]));
    }
}

TEST(RootVectors, CertifiedSimplyLaced) {
  struct Case {
    const char* rep;
    ReducedWord word;
  };
  for (const auto& c : {Case{"sl2", {1}}, Case{"A2", {1, 2, 1}}, Case{"A2", {2, 1, 2}}}) {
    Rep r = builtin_rep(c.rep);
    auto rvs = root_vectors(r, c.word);
    ASSERT_EQ(rvs.size(), c.word.size());
    for (const auto& rv : rvs) {
      auto ce = manifest_positivity_certificate(rv.e, r.qexp[rv.node]);
      auto cf = manifest_positivity_certificate(rv.f, r.qexp[rv.node]);
      EXPECT_TRUE(ce.ok) << c.rep << word_str(c.word) << " e root " << rv.node << ": " << ce.failure;
      EXPECT_TRUE(cf.ok) << c.rep << word_str(c.word) << " f root " << rv.node << ": " << cf.failure;
      EXPECT_EQ(apply_T(r, rv.prefix, Gen{'e', rv.node}), rv.e);
    }
  }
  Rep a2 = builtin_a2();
  auto rv = root_vectors(a2, {1, 2, 1});
  EXPECT_EQ(rv[0].e, *a2.e[0]);
  EXPECT_EQ(rv[1].e, e_ij(a2, 0, 1));
  EXPECT_EQ(rv[2].e, *a2.e[1]);
}

TEST(RootVectors, B2MatchesNamedElements) {
  // e3' = (q^1/2 e2 e1 - q^-1/2 e1 e2)/(q - q^-1), eX = (e3' e1 - e1 e3')/(q^1/2 - q^-1/2)
  // with q = q_2 (long) and q^1/2 = q_1 (short)
  Rep r = builtin_b2();
  const OpElement &e1 = *r.e[0], &e2 = *r.e[1];
  OpElement e3 = (r.q(0) * (e2 * e1) - r.q(0, -1) * (e1 * e2)).divide(r.q(1) - r.q(1, -1));
  OpElement eX = (e3 * e1 - e1 * e3).divide(r.q(0) - r.q(0, -1));
  EXPECT_EQ(e_ij(r, 0, 1), eX);
  auto rvs = root_vectors(r, {1, 2, 1, 2});
  ASSERT_EQ(rvs.size(), 4U);
  EXPECT_EQ(rvs[0].e, e1);
  EXPECT_EQ(rvs[1].e, eX);
  EXPECT_EQ(rvs[2].e, e3);
  EXPECT_EQ(rvs[3].e, e2);
  EXPECT_EQ(rvs[1].root, (Root{2, 1}));
  // the short-root vectors at both ends of the word and e3' carry certificates
  EXPECT_TRUE(certify_positive_structure(rvs[0].e));
  EXPECT_TRUE(certify_positive_structure(rvs[2].e));
  EXPECT_TRUE(manifest_positivity_certificate(rvs[3].e, r.qexp[1]).ok);
}

TEST(Casimir, Central) {
  expect_all_pass(check_casimir_central(builtin_sl2(), 0));
  expect_all_pass(check_casimir_central(builtin_a2(), 1));
  Rep r = builtin_sl2();
  // c = f e - q K - q^-1 K^-1
  EXPECT_EQ(casimir(r, 0), r.f[0] * *r.e[0] - PhaseCoeff::q() * r.K[0] - PhaseCoeff::q(-1) * r.K_pow(0, -1));
}

TEST(Casimir, NormalFormA2SecondNode) {
  const Rep r = builtin_a2();
  const auto nf = casimir_normal_form(r, 1);
  ASSERT_TRUE(nf.reached) << nf.trace.failure;
  EXPECT_EQ(nf.result, nf.target);
  // only the distinguished pair (u, p_u) survives
  for (const auto& t : nf.result.terms())
    for (std::size_t v = 0; v < t.exp.dim(); ++v)
      if (v != 0 && v != r.space.n()) {
        EXPECT_TRUE(t.exp[v].is_zero()) << nf.result.str(r.space);
      }
  std::string why;
  EXPECT_TRUE(nf.trace.reverify(&why)) << why;
  EXPECT_FALSE(nf.trace.steps.empty());
  for (const auto& st : nf.trace.steps) EXPECT_FALSE(st.hypothesis.empty());
}

TEST(Casimir, NormalFormIsIdempotent) {
  const Rep r = builtin_a2();
  const auto nf = casimir_normal_form(r, 1);
  const auto again = casimir_chain(nf.result, r.space, r.scale[1], 0);
  EXPECT_TRUE(again.reached);
  EXPECT_TRUE(again.trace.steps.empty());
  EXPECT_EQ(again.result, nf.result);
}

TEST(Casimir, Sl2IsAlreadyScalar) {
  const Rep r = builtin_sl2();
  const auto nf = casimir_normal_form(r, 0);
  EXPECT_TRUE(nf.reached);
  EXPECT_TRUE(nf.trace.steps.empty());
  EXPECT_EQ(nf.result.size(), 2U);
}

TEST(Casimir, OutsideScriptedCasesIsRejected) {
  EXPECT_THROW(casimir_normal_form(builtin_a2(), 0), std::invalid_argument);
}
