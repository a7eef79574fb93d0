#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qrop/gbconj.hpp"
#include "qrop/genpoly.hpp"

namespace qrop {

/// Iterated q-commutator x_ij = (-1)^{a_ij} [x_i, ... [x_i, x_j]_{q_i^{a/2}} ...]_{q_i^{(-a-2)/2}}
/// / prod_{k=1}^{-a_ij} (q_i^k - q_i^{-k}) as a generator polynomial (x = e or f).
inline GenPoly x_ij_poly(const Rep& r, int i, int j, char kind) {
  const int a = r.a[i][j];
  GenPoly xi = GenPoly::letter(kind, i);
  GenPoly acc = GenPoly::letter(kind, j);
  PhaseCoeff norm = 1;
  for (int m = 0; m < -a; ++m) {
    acc = q_commutator(xi, acc, r.qexp[i] * Rational(a + 2 * m, 2));
    norm = norm * (r.q(i, m + 1) - r.q(i, -(m + 1)));
  }
  if (a % 2 != 0) acc = -acc;
  return acc.over(norm);
}

inline OpElement e_ij(const Rep& r, int i, int j) { return evaluate(x_ij_poly(r, i, j, 'e'), r); }
inline OpElement f_ij(const Rep& r, int i, int j) { return evaluate(x_ij_poly(r, i, j, 'f'), r); }

/// Image of a letter under T_i:
///   T_i(e_i) = q_i f_i K_i^{-1},  T_i(f_i) = q_i^{-1} K_i e_i,
///   T_i(e_j) = e_ij,  T_i(f_j) = f_ij,  T_i(K_j^r) = K_j^r K_i^{-a_ij r}.
inline GenPoly lusztig_image(const Rep& r, int i, const Letter& l) {
  if (l.kind == 'K') return GenPoly::letter('K', l.node, l.power) * GenPoly::letter('K', i, Rational(-r.a[i][l.node]) * l.power);
  if (l.node == i) {
    if (l.kind == 'e') return r.q(i) * (GenPoly::letter('f', i) * GenPoly::letter('K', i, -1));
    return r.q(i, -1) * (GenPoly::letter('K', i) * GenPoly::letter('e', i));
  }
  return x_ij_poly(r, i, l.node, l.kind);
}

/// Evaluates (T_{t_1} o ... o T_{t_k})(x) in a representation, memoising the
/// images of letters at every depth so that compositions stay linear in k.
class LusztigEvaluator {
public:
  using Valuation = std::function<OpElement(const Letter&)>;

  LusztigEvaluator(const Rep& r, std::vector<int> t_word) : r_(r), ts_(std::move(t_word)), base_(rep_valuation(r)), one_(r.one()) {}
  /// Evaluate the letters of the innermost level through `base` instead of
  /// the representation itself (e.g. coproduct images in a tensor algebra).
  LusztigEvaluator(const Rep& r, std::vector<int> t_word, Valuation base, OpElement one)
      : r_(r), ts_(std::move(t_word)), base_(std::move(base)), one_(std::move(one)) {}

  /// Image of a generator polynomial under the full composition.
  OpElement apply(const GenPoly& p) {
    const std::size_t k = ts_.size();
    return p.evaluate([&](const Letter& l) { return value(k, l); }, one_);
  }
  OpElement apply(const Gen& g) { return apply(GenPoly::gen(g)); }

private:
  const OpElement& value(std::size_t depth, const Letter& l) {
    auto key = std::make_pair(depth, l);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    OpElement v;
    if (depth == 0) {
      v = base_(l);
    } else if (l.kind == 'K' && !(l.power == Rational(1))) {
      v = value(depth, Letter{'K', l.node, 1}).pow(l.power);
    } else {
      const int i = ts_[depth - 1] - 1;
      GenPoly img = lusztig_image(r_, i, l);
      v = img.evaluate([&](const Letter& m) { return value(depth - 1, m); }, one_);
    }
    return memo_.emplace(key, std::move(v)).first->second;
  }

  const Rep& r_;
  std::vector<int> ts_;
  Valuation base_;
  OpElement one_;
  std::map<std::pair<std::size_t, Letter>, OpElement> memo_;
};

/// T_{t_1} ... T_{t_k}(g) for a word of 1-based node indices.
inline OpElement apply_T(const Rep& r, const std::vector<int>& t_word, const Gen& g) {
  return LusztigEvaluator(r, t_word).apply(g);
}
inline OpElement apply_T(const Rep& r, const std::vector<int>& t_word, const GenPoly& p) {
  return LusztigEvaluator(r, t_word).apply(p);
}

/// Defining relations of the algebra as generator polynomials (each must vanish).
inline std::vector<std::pair<std::string, GenPoly>> defining_relations(const Rep& r) {
  std::vector<std::pair<std::string, GenPoly>> rels;
  const int n = r.rank();
  auto L = [](char k, int i, Rational p = 1) { return GenPoly::letter(k, i, p); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::string ij = std::to_string(i + 1) + std::to_string(j + 1);
      rels.emplace_back("K" + ij + "e", L('K', i) * L('e', j) - r.q(i, r.a[i][j]) * (L('e', j) * L('K', i)));
      rels.emplace_back("K" + ij + "f", L('K', i) * L('f', j) - r.q(i, -r.a[i][j]) * (L('f', j) * L('K', i)));
      GenPoly comm = L('e', i) * L('f', j) - L('f', j) * L('e', i);
      if (i == j) comm = comm - (r.q(i) - r.q(i, -1)) * (L('K', i, -1) - L('K', i));
      rels.emplace_back("[e" + std::to_string(i + 1) + ",f" + std::to_string(j + 1) + "]", comm);
      if (i == j) continue;
      const int m = 1 - r.a[i][j];
      for (char kind : {'e', 'f'}) {
        GenPoly s;
        for (int k = 0; k <= m; ++k) {
          GenPoly w = GenPoly::scalar(1);
          for (int t = 0; t < k; ++t) w = w * L(kind, i);
          w = w * L(kind, j);
          for (int t = 0; t < m - k; ++t) w = w * L(kind, i);
          PhaseCoeff c = q_binomial(r.qexp[i], m, k);
          s = s + ((k % 2) ? -c : c) * w;
        }
        rels.emplace_back(std::string("Serre ") + kind + ij, s);
      }
    }
  return rels;
}

/// T_i maps every defining relation to zero (so it is an algebra map on the
/// span of the generators), for every node i whose images are available.
inline CheckReport check_T_homomorphism(const Rep& r) {
  CheckReport rep;
  for (int i = 0; i < r.rank(); ++i) {
    LusztigEvaluator ev(r, {i + 1});
    for (const auto& [name, rel] : defining_relations(r))
      rep.add(exact_check(r.label + " T" + std::to_string(i + 1) + "(" + name + ")", "T_i preserves the defining relations", ev.apply(rel), r.space));
  }
  return rep;
}

/// T_i T_j T_i ... = T_j T_i T_j ... (m_ij factors) on every generator.
inline CheckReport check_braid_relations(const Rep& r) {
  CheckReport rep;
  for (int i = 0; i < r.rank(); ++i)
    for (int j = i + 1; j < r.rank(); ++j) {
      const int m = r.cd.coxeter_m(i, j);
      std::vector<int> w1, w2;
      for (int k = 0; k < m; ++k) {
        w1.push_back(k % 2 == 0 ? i + 1 : j + 1);
        w2.push_back(k % 2 == 0 ? j + 1 : i + 1);
      }
      LusztigEvaluator ev1(r, w1), ev2(r, w2);
      for (const auto& g : r.generators()) {
        auto res = ev1.apply(g) - ev2.apply(g);
        rep.add(exact_check(r.label + " braid " + word_str(w1) + "=" + word_str(w2) + " on " + g.str(),
                            "Coxeter relation for T_i", res, r.space));
      }
    }
  return rep;
}

struct RootVector {
  Root root;
  int node = 0;  ///< i_k: the root has the length of this simple root
  OpElement e;
  OpElement f;
  std::vector<int> prefix;  ///< T-word producing this root vector from a simple one
};

/// e_{alpha_k} = T_{i_1} ... T_{i_{k-1}}(e_{i_k}) and likewise for f.
inline std::vector<RootVector> root_vectors(const Rep& r, const ReducedWord& word) {
  std::vector<RootVector> out;
  auto roots = word_roots(r.cd, word);
  for (std::size_t k = 0; k < word.size(); ++k) {
    std::vector<int> prefix(word.begin(), word.begin() + static_cast<long>(k));
    const int node = word[k] - 1;
    RootVector rv;
    rv.root = roots[k];
    rv.node = node;
    rv.prefix = prefix;
    LusztigEvaluator ev(r, prefix);
    rv.e = ev.apply(Gen{'e', node});
    rv.f = ev.apply(Gen{'f', node});
    out.push_back(std::move(rv));
  }
  return out;
}

/// Rescaled Casimir c_i = f_i e_i - (q_i K_i + q_i^{-1} K_i^{-1}).
inline OpElement casimir(const Rep& r, int i) {
  return r.f[i] * r.gen({'e', i}) - (r.q(i) * r.K[i] + r.q(i, -1) * r.K_pow(i, -1));
}

inline CheckReport check_casimir_central(const Rep& r, int i) {
  CheckReport rep;
  OpElement c = casimir(r, i);
  for (char k : {'e', 'f', 'K'}) {
    Gen g{k, i};
    rep.add(exact_check(r.label + " [c" + std::to_string(i + 1) + "," + g.str() + "]", "Casimir commutes with its sl2 triple",
                        commutator(c, r.gen(g)), r.space));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Casimir normal form
// ---------------------------------------------------------------------------

namespace detail {

/// a / b as a rational number when a is a rational multiple of b.
inline std::optional<Rational> sym_ratio(const Sym& a, const Sym& b) {
  if (b.is_zero()) return std::nullopt;
  const double r = a.eval(kOrderingB) / b.eval(kOrderingB);
  for (std::int64_t den = 1; den <= 720; ++den) {
    const double num = std::round(r * static_cast<double>(den));
    if (std::abs(num - r * static_cast<double>(den)) > 1e-9) continue;
    Rational q(static_cast<std::int64_t>(num), den);
    if (a == b * q) return q;
  }
  return std::nullopt;
}

inline std::vector<OpElement> monomials(const OpElement& x) {
  std::vector<OpElement> out;
  for (const auto& t : x.terms()) out.push_back(OpElement::from_terms(x.n(), x.m(), {t}));
  return out;
}

inline bool same_momenta(const ExponentForm& a, const ExponentForm& b) {
  for (std::size_t k = 0; k < a.n(); ++k)
    if (!(a.mom(k) == b.mom(k))) return false;
  return true;
}

inline void push_substitution(RewriteTrace& tr, const std::string& what, const LinearSubstitution& s, OpElement& cur) {
  RewriteStep st;
  st.rule = "linear";
  st.hypothesis = what + " (symplectic)";
  st.before = {cur};
  st.substitution = s;
  st.conjugation = false;
  cur = substitute_linear(cur, s);
  st.after = {cur};
  tr.steps.push_back(std::move(st));
}

}  // namespace detail

struct CasimirNormalForm {
  OpElement result;
  OpElement target;
  RewriteTrace trace;
  bool reached = false;
};

/// Unitary normal form of an element of the Casimir shape
///   2cosh(...) + sum_k [X_k] e(p_k - p_1) [u_1]
/// with distinguished coordinate pair (u_n, p_n). The g_b steps take as
/// argument the quotient of two terms that share their momentum part; the
/// remaining three terms are normalised by three symplectic changes of
/// variables. The target is e^{2 pi b u_n} + e^{-2 pi b u_n} + e^{2 pi b p_n}.
inline CasimirNormalForm casimir_chain(const OpElement& x, const Space& sp, const Sym& bi, std::size_t un) {
  CasimirNormalForm nf;
  nf.trace.title = "Casimir normal form";
  OpElement cur = x;
  // 1. collapse pairs of terms with equal momenta by g_b conjugations
  for (bool progress = true; progress;) {
    progress = false;
    const auto parts = detail::monomials(cur);
    for (std::size_t s = 0; s < parts.size() && !progress; ++s)
      for (std::size_t t = 0; t < parts.size() && !progress; ++t) {
        if (s == t) continue;
        const auto &es = parts[s].terms()[0].exp, &et = parts[t].terms()[0].exp;
        if (!detail::same_momenta(es, et) || !es.has_momentum()) continue;
        const ExponentForm diff = et - es;
        if (diff.has_momentum()) continue;
        const OpElement A = expo(diff);
        for (Side side : {Side::Inverse, Side::Forward}) {
          RewriteStep st;
          try {
            OpElement next = sum_parts(gb_conjugate_parts(parts, A, bi, side, &st));
            if (next.size() >= cur.size()) continue;
            cur = next;
            nf.trace.steps.push_back(std::move(st));
            progress = true;
            break;
          } catch (const UnsupportedConjugationError&) {
          }
        }
      }
  }

  // 2. changes of variables on the three remaining terms
  const std::size_t n = sp.n();
  auto unit = [&](std::size_t v) {
    ExponentForm e(n, sp.m());
    e[v] = Sym(1);
    return e;
  };
  const std::size_t pn = n + un;
  std::optional<Monomial> P;
  for (const auto& t : cur.terms())
    if (t.exp.has_momentum()) P = t;
  if (P) {
    // 2a. remove the other momenta from P: p_n -> p_n - sum r_w p_w, u_w -> u_w + r_w u_n
    const Sym cn = P->exp.mom(un);
    LinearSubstitution s1(sp);
    bool any = false;
    for (std::size_t w = 0; w < n; ++w) {
      if (w == un || P->exp.mom(w).is_zero()) continue;
      auto r = detail::sym_ratio(P->exp.mom(w), cn);
      if (!r) break;
      any = true;
      ExponentForm img = s1.image(pn);
      img[n + w] -= Sym(1) * *r;
      s1.set(pn, img);
      ExponentForm iu = unit(w);
      iu[un] += Sym(1) * *r;
      s1.set(w, iu);
    }
    if (any) detail::push_substitution(nf.trace, "remove secondary momenta from the p-term", s1, cur);
    for (const auto& t : cur.terms())
      if (t.exp.has_momentum()) P = t;
    // 2b. shear p_n so that the p-term is exactly e^{2 pi b p_n}
    const Sym c = P->exp.mom(un);
    auto sign = detail::sym_ratio(c, bi * Rational(2));
    if (sign && *sign == Rational(-1)) {
      LinearSubstitution flip(sp);
      ExponentForm a = unit(un), b = unit(pn);
      a[un] = Sym(-1);
      b[pn] = Sym(-1);
      flip.set(un, a).set(pn, b);
      detail::push_substitution(nf.trace, "reflection u_n -> -u_n, p_n -> -p_n", flip, cur);
      for (const auto& t : cur.terms())
        if (t.exp.has_momentum()) P = t;
    }
    LinearSubstitution s2(sp);
    ExponentForm ipn = unit(pn);
    bool shear = false;
    for (std::size_t v = 0; v < sp.dim(); ++v) {
      if (v >= n && v < 2 * n) continue;
      if (P->exp[v].is_zero()) continue;
      auto r = detail::sym_ratio(P->exp[v], P->exp.mom(un));
      if (!r) continue;
      shear = true;
      ipn[v] -= Sym(1) * *r;
      if (v < n && v != un) {
        ExponentForm ipv = unit(n + v);
        ipv[un] -= Sym(1) * *r;
        s2.set(n + v, ipv);
      }
    }
    s2.set(pn, ipn);
    if (shear) detail::push_substitution(nf.trace, "shift p_n by positions and parameters", s2, cur);
  }
  // 2c. shift u_n so that the cosh pair is exactly e^{+-2 pi b u_n}
  std::optional<Monomial> C;
  for (const auto& t : cur.terms())
    if (!t.exp.has_momentum() && t.exp.pos(un).eval(kOrderingB) > 0) C = t;
  if (C) {
    LinearSubstitution s3(sp);
    ExponentForm iun = unit(un);
    bool shift = false;
    for (std::size_t v = 0; v < sp.dim(); ++v) {
      if (v == un || (v >= n && v < 2 * n) || C->exp[v].is_zero()) continue;
      auto r = detail::sym_ratio(C->exp[v], C->exp.pos(un));
      if (!r) continue;
      shift = true;
      iun[v] -= Sym(1) * *r;
      if (v < n) {
        ExponentForm ipv = unit(n + v);
        ipv[pn] += Sym(1) * *r;
        s3.set(n + v, ipv);
      }
    }
    s3.set(un, iun);
    if (shift) detail::push_substitution(nf.trace, "shift u_n by the other coordinates and parameters", s3, cur);
  }
  nf.result = cur;
  ExponentForm eu(n, sp.m()), ep(n, sp.m());
  eu.pos(un) = bi * Rational(2);
  ep.mom(un) = bi * Rational(2);
  nf.target = expo(eu) + expo(eu * Rational(-1)) + expo(ep);
  nf.reached = nf.result == nf.target;
  nf.trace.ok = nf.reached;
  if (!nf.reached) nf.trace.failure = "chain ended at " + nf.result.str(sp);
  return nf;
}

/// Casimir c_i of a built-in representation brought to normal form. The
/// distinguished coordinate is the first coordinate of node i (u_i^n); for a
/// representation with a single coordinate of node i the Casimir is already
/// the scalar e^{2 pi b l_i} + e^{-2 pi b l_i}, which is the target.
inline CasimirNormalForm casimir_normal_form(const Rep& r, int i) {
  std::size_t un = r.space.n();
  int count = 0;
  for (std::size_t k = 0; k < r.space.n(); ++k)
    if (r.coord_node[k] == i) {
      if (un == r.space.n()) un = k;
      ++count;
    }
  if (count >= 2) return casimir_chain(casimir(r, i), r.space, r.scale[i], un);
  if (r.rank() != 1)
    throw std::invalid_argument("casimir_normal_form: node " + std::to_string(i) + " carries a single coordinate outside rank 1");
  CasimirNormalForm nf;
  nf.trace.title = "Casimir normal form";
  nf.result = casimir(r, i);
  ExponentForm el(r.space.n(), r.space.m());
  el.par(static_cast<std::size_t>(i)) = r.scale[i] * Rational(2);
  nf.target = expo(el) + expo(el * Rational(-1));
  nf.reached = nf.result == nf.target;
  nf.trace.ok = nf.reached;
  return nf;
}

}  // namespace qrop
