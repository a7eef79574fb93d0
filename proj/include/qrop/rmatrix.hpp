#pragma once

// The R-operator R = Q^{1/2} g_b(e_N (x) f_N) ... g_b(e_1 (x) f_1) Q^{1/2} of a
// built-in positive representation, and mechanical verification of the
// braiding and quasi-triangularity relations by hypothesis-checked rewrites.
//
// The g_b factors stay formal. The Cartan prefactor Q^{1/2} never appears as
// an operator either: it is only used through its conjugation action, which
// on a product of weight vectors x (x) y is
//   Q^{1/2} (x (x) y) Q^{-1/2} = x K_{wt y}^{1/2} (x) K_{wt x}^{1/2} y.

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <optional>
#include <string>
#include <vector>

#include "qrop/gbconj.hpp"
#include "qrop/lusztig.hpp"
#include "qrop/posrep.hpp"
#include "qrop/rank1.hpp"

namespace qrop {

class CertificateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Weights and the Cartan prefactor
// ---------------------------------------------------------------------------

/// Inverse of the Cartan matrix over the rationals.
inline std::vector<std::vector<Rational>> cartan_inverse(const CartanData& cd) {
  const int n = cd.rank;
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n, Rational(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = Rational(cd.a[i][j]);
    m[i][n + i] = Rational(1);
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (m[piv][c] == Rational(0)) ++piv;
    std::swap(m[piv], m[c]);
    const Rational inv = Rational(1) / m[c][c];
    for (auto& x : m[c]) x = x * inv;
    for (int r = 0; r < n; ++r) {
      if (r == c || m[r][c] == Rational(0)) continue;
      const Rational f = m[r][c];
      for (int k = 0; k < 2 * n; ++k) m[r][k] = m[r][k] - f * m[c][k];
    }
  }
  std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = m[i][n + j];
  return out;
}

/// Root-lattice weight (coefficients on the simple roots) of a Weyl monomial of
/// a representation, read off from its exchange phases with the K_j.
inline std::optional<std::vector<Rational>> monomial_weight(const Rep& r, const ExponentForm& x) {
  const int n = r.rank();
  std::vector<Rational> s(n);
  for (int j = 0; j < n; ++j) {
    // K_j x K_j^{-1} = e^{2 pi i theta} x and q_j^{s_j} = e^{pi i qexp_j s_j}
    const Sym theta = exchange_phase(r.L[j], x) * Rational(2);
    if (theta.is_zero()) continue;
    auto ratio = detail::sym_ratio(theta, r.qexp[j]);
    if (!ratio) return std::nullopt;
    s[j] = *ratio;
  }
  const auto inv = cartan_inverse(r.cd);
  std::vector<Rational> w(n, Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w[i] = w[i] + inv[i][j] * s[j];
  return w;
}

/// K_mu^{p} for mu given on simple roots.
inline OpElement K_weight(const Rep& r, const std::vector<Rational>& mu, Rational p) {
  ExponentForm e(r.space.n(), r.space.m());
  for (int i = 0; i < r.rank(); ++i)
    if (!(mu[i] == Rational(0))) e = e + r.L[i] * (mu[i] * p);
  return expo(e);
}

/// Restriction of a tensor exponent to one leg.
inline ExponentForm leg_part(const TensorAlgebra& ta, int leg, const ExponentForm& e) {
  const auto& f = ta.factors.at(leg);
  ExponentForm r(f.n(), f.m());
  for (std::size_t k = 0; k < f.n(); ++k) {
    r.pos(k) = e.pos(ta.coord_off[leg] + k);
    r.mom(k) = e.mom(ta.coord_off[leg] + k);
  }
  for (std::size_t i = 0; i < f.m(); ++i) r.par(i) = e.par(ta.param_off[leg] + i);
  return r;
}

/// Q_{ab}^{s/2} x Q_{ab}^{-s/2} for s = +1 or -1, legs a and b of a tensor algebra.
inline OpElement conjugate_prefactor(const Rep& r, const TensorAlgebra& ta, const OpElement& x, int a, int b, int s) {
  OpElement out = OpElement::zero(ta.space);
  const Rational half(s, 2);
  for (const auto& t : x.terms()) {
    const ExponentForm xa = leg_part(ta, a, t.exp), xb = leg_part(ta, b, t.exp);
    auto wa = monomial_weight(r, xa), wb = monomial_weight(r, xb);
    if (!wa || !wb) throw std::invalid_argument("conjugate_prefactor: monomial without a root-lattice weight");
    ExponentForm rest = t.exp - ta.embed(a, xa) - ta.embed(b, xb);
    OpElement m = OpElement(rest, t.coeff) * (ta.embed(a, expo(xa)) * ta.embed(a, K_weight(r, *wb, half))) *
                  (ta.embed(b, K_weight(r, *wa, half)) * ta.embed(b, expo(xb)));
    out = out + m;
  }
  return out;
}

// ---------------------------------------------------------------------------
// The factorization
// ---------------------------------------------------------------------------

struct GbFactor {
  OpElement arg;
  Sym scale;  ///< b of this factor (b_s or b_l)
  bool star = false;
  std::string label;
  bool certified = false;
  std::string certificate;  ///< how positivity was established, or why it failed
};

struct RFactorization {
  Rep rep;
  ReducedWord word;
  TensorAlgebra ta;
  std::vector<std::vector<Rational>> prefactor;  ///< (A^{-1})_{ij}: Q = prod q_i^{(A^-1)_ij H_i (x) H_j}
  std::vector<RootVector> roots;                 ///< k = 1 .. N
  std::vector<GbFactor> factors;                 ///< product order, leftmost first (root N .. root 1)
  bool barred = false;

  [[nodiscard]] bool all_certified() const {
    for (const auto& f : factors)
      if (!f.certified) return false;
    return true;
  }
};

namespace detail {
inline std::string root_label(const Root& r) {
  std::string s = "e_";
  for (std::size_t i = 0; i < r.size(); ++i)
    for (int k = 0; k < r[i]; ++k) s += std::to_string(i + 1);
  return s;
}

inline std::pair<bool, std::string> certify_argument(const OpElement& x, const Space& legs) {
  if (manifest_positivity_certificate(x).ok) return {true, "q-chain"};
  auto c = certify_positive(x, legs);
  if (c.ok) return {true, "leg factorization"};
  std::string why;
  if (certify_positive_structure(x, &why)) return {true, "structural"};
  return {false, c.failure.empty() ? why : c.failure};
}
}  // namespace detail

/// Barred generators e-bar = q^{-1/2} K^{1/2} e, f-bar = q^{-1/2} K^{-1/2} f of a root vector pair.
inline std::pair<OpElement, OpElement> barred_pair(const Rep& r, const RootVector& rv) {
  const auto w = monomial_weight(r, rv.e.terms().at(0).exp);
  if (!w) throw std::invalid_argument("barred_pair: root vector without weight");
  const PhaseCoeff qm = PhaseCoeff::q_power(r.scale[rv.node], Rational(-1, 2));
  return {qm * (K_weight(r, *w, Rational(1, 2)) * rv.e), qm * (K_weight(r, *w, Rational(-1, 2)) * rv.f)};
}

/// R for a built-in representation and a reduced word of the longest element.
/// With `require_certificates` an uncertified argument throws CertificateError.
inline RFactorization build_R(const Rep& r, const ReducedWord& word, bool barred = false, bool require_certificates = false) {
  if (!is_longest_word(r.cd, word)) throw std::invalid_argument("build_R: " + word_str(word) + " is not a reduced word for w_0");
  RFactorization R{r, word, TensorAlgebra(r.space, 2), cartan_inverse(r.cd), root_vectors(r, word), {}, barred};
  for (std::size_t k = R.roots.size(); k-- > 0;) {
    const auto& rv = R.roots[k];
    auto [e, f] = barred ? barred_pair(r, rv) : std::make_pair(rv.e, rv.f);
    GbFactor g;
    g.arg = R.ta.embed(0, e) * R.ta.embed(1, f);
    g.scale = r.scale[rv.node];
    g.label = "g(" + detail::root_label(rv.root) + " (x) f)";
    std::tie(g.certified, g.certificate) = detail::certify_argument(g.arg, R.ta.space);
    if (require_certificates && !g.certified) throw CertificateError("build_R: argument " + g.label + " not certified: " + g.certificate);
    R.factors.push_back(std::move(g));
  }
  return R;
}

// ---------------------------------------------------------------------------
// Braiding
// ---------------------------------------------------------------------------

namespace detail {
/// The summands of Delta(g) (or Delta'(g)) kept apart.
inline std::vector<OpElement> coproduct_parts(const Rep& r, const TensorAlgebra& ta, const Gen& g, bool flip) {
  int a = 0, b = 1;
  if (flip) std::swap(a, b);
  const int i = g.node;
  if (g.kind == 'K') return {ta.embed(a, r.K[i]) * ta.embed(b, r.K[i])};
  const OpElement& x = r.gen(g);
  return {ta.embed(a, r.K_pow(i, Rational(-1, 2))) * ta.embed(b, x), ta.embed(a, x) * ta.embed(b, r.K_pow(i, Rational(1, 2)))};
}

inline RewriteStep prefactor_step(const RFactorization& R, std::vector<OpElement> before, int a, int b, int s, const std::string& what) {
  RewriteStep st;
  st.rule = "prefactor";
  st.hypothesis = what;
  st.conjugation = false;
  st.before = before;
  const Rep rep = R.rep;
  const TensorAlgebra ta = R.ta;
  st.map = [rep, ta, a, b, s](const OpElement& x) { return conjugate_prefactor(rep, ta, x, a, b, s); };
  for (const auto& p : before) st.after.push_back(conjugate_prefactor(R.rep, R.ta, p, a, b, s));
  return st;
}
}  // namespace detail

/// Delta'(x) R = R Delta(x) for a generator x, established by pushing
/// Q^{-1/2} Delta'(x) Q^{1/2} through the g_b factors one at a time and
/// comparing with Q^{1/2} Delta(x) Q^{-1/2}.
inline RewriteTrace verify_braiding(const RFactorization& R, const Gen& g) {
  RewriteTrace tr;
  tr.title = "braiding " + g.str() + " for " + R.rep.label;
  const Space& legs = R.ta.space;
  auto parts = detail::coproduct_parts(R.rep, R.ta, g, true);
  auto pre = detail::prefactor_step(R, parts, 0, 1, -1, "Q^{-1/2} Delta'(x) Q^{1/2} via weights");
  parts = pre.after;
  tr.steps.push_back(std::move(pre));
  for (const auto& f : R.factors) {
    RewriteStep st;
    try {
      parts = gb_conjugate_parts(parts, f.arg, f.scale, Side::Inverse, &st, &legs);
    } catch (const std::exception& e) {
      tr.failure = "factor " + f.label + ": " + e.what();
      return tr;
    }
    tr.steps.push_back(std::move(st));
  }
  auto target = detail::prefactor_step(R, detail::coproduct_parts(R.rep, R.ta, g, false), 0, 1, 1,
                                       "Q^{1/2} Delta(x) Q^{-1/2} via weights");
  RewriteStep eq;
  eq.rule = "equality";
  eq.conjugation = false;
  eq.before = parts;
  eq.after = target.after;
  eq.hypothesis = "result equals Q^{1/2} Delta(x) Q^{-1/2}";
  const bool same = sum_parts(parts) == sum_parts(target.after);
  tr.steps.push_back(std::move(eq));
  tr.ok = same;
  if (!same) tr.failure = "pushed expression differs from Q^{1/2} Delta(x) Q^{-1/2}";
  return tr;
}

/// Generators covered by the braiding verification of a representation.
inline std::vector<Gen> braiding_generators(const Rep& r) {
  if (r.cd.name() == "B2") return {{'e', 0}, {'f', 0}, {'K', 0}, {'K', 1}};
  return r.generators();
}

// ---------------------------------------------------------------------------
// Quasi-triangularity
// ---------------------------------------------------------------------------

/// One rewrite of a product of g_b factors: the window starting at `pos`
/// is replaced by `after`.
struct FactorStep {
  std::string rule;  ///< merge, commute-swap, genpenta
  std::string hypothesis;
  std::size_t pos = 0;
  std::vector<GbFactor> before;
  std::vector<GbFactor> after;
};

namespace detail {

inline bool same_factor(const GbFactor& x, const GbFactor& y) { return x.scale == y.scale && x.arg == y.arg; }

inline bool same_list(const std::vector<GbFactor>& x, const std::vector<GbFactor>& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (!same_factor(x[k], y[k])) return false;
  return true;
}

/// g(U + W) = g(U) g(W) for UW = q^2 WU. With `check_positive` false the
/// positivity of U and W is left to the caller (a side that is split again
/// later is positive as a sum of q^2-commuting positive operators).
inline bool merge_holds(const GbFactor& whole, const GbFactor& u, const GbFactor& w, const Space* legs, bool check_positive = true) {
  if (!(u.scale == whole.scale && w.scale == whole.scale && u.arg + w.arg == whole.arg && qrel(u.arg, w.arg, whole.scale, 2)))
    return false;
  return !check_positive || (positive(u.arg, legs) && positive(w.arg, legs));
}

inline bool commute_holds(const GbFactor& x, const GbFactor& y) { return x.arg * y.arg == y.arg * x.arg; }

/// g(U) g(c) g(V) = g(V) g(U) for c = [U,V]/(q - q^-1) with Uc = q^2 cU, Vc = q^-2 cV.
inline bool penta_holds(const GbFactor& U, const GbFactor& c, const GbFactor& V, const Space* legs) {
  const Sym& b = U.scale;
  if (!(c.scale == b) || !(V.scale == b)) return false;
  if ((qb(b, 1) - qb(b, -1)) * c.arg != U.arg * V.arg - V.arg * U.arg) return false;
  return qrel(U.arg, c.arg, b, 2) && qrel(V.arg, c.arg, b, -2) && positive(U.arg, legs) && positive(c.arg, legs) &&
         positive(V.arg, legs);
}

inline bool step_holds(const FactorStep& s, const Space* legs) {
  if (s.rule == "merge") return s.before.size() == 1 && s.after.size() == 2 && merge_holds(s.before[0], s.after[0], s.after[1], legs, false);
  if (s.rule == "commute-swap")
    return s.before.size() == 2 && s.after.size() == 2 && same_factor(s.before[0], s.after[1]) &&
           same_factor(s.before[1], s.after[0]) && commute_holds(s.before[0], s.before[1]);
  if (s.rule == "genpenta")
    return s.before.size() == 3 && s.after.size() == 2 && same_factor(s.before[2], s.after[0]) &&
           same_factor(s.before[0], s.after[1]) && penta_holds(s.before[0], s.before[1], s.before[2], legs);
  return false;
}

}  // namespace detail

struct FactorTrace {
  std::string title;
  std::vector<GbFactor> start;
  std::vector<GbFactor> goal;
  std::vector<FactorStep> steps;
  std::optional<Space> legs;
  bool ok = false;
  std::string failure;

  /// Replays every step from `start`, re-checking its hypotheses, and
  /// compares the end result with `goal`.
  [[nodiscard]] bool reverify(std::string* why = nullptr) const {
    std::vector<GbFactor> cur = start;
    const Space* sp = legs ? &*legs : nullptr;
    // merge sides whose positivity is still owed: discharged by a direct
    // certificate or by a later merge that splits them
    std::vector<GbFactor> owed;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const auto& s = steps[k];
      if (s.rule == "merge") {
        std::erase_if(owed, [&](const GbFactor& f) { return detail::same_factor(f, s.before[0]); });
        for (const auto& side : s.after)
          if (!detail::positive(side.arg, sp)) owed.push_back(side);
      }
      const bool window = s.pos + s.before.size() <= cur.size() &&
                          detail::same_list(std::vector<GbFactor>(cur.begin() + static_cast<long>(s.pos),
                                                                  cur.begin() + static_cast<long>(s.pos + s.before.size())),
                                            s.before);
      if (!window || !detail::step_holds(s, sp)) {
        if (why) *why = "step " + std::to_string(k) + " (" + s.rule + ") does not replay";
        return false;
      }
      cur.erase(cur.begin() + static_cast<long>(s.pos), cur.begin() + static_cast<long>(s.pos + s.before.size()));
      cur.insert(cur.begin() + static_cast<long>(s.pos), s.after.begin(), s.after.end());
    }
    if (!owed.empty()) {
      if (why) *why = "a merged factor has no positivity certificate";
      return false;
    }
    if (!detail::same_list(cur, goal)) {
      if (why) *why = "replayed product differs from the target";
      return false;
    }
    return ok;
  }
};

namespace detail {

/// Groups the monomials of a tensor element by their per-leg weights.
inline std::vector<OpElement> weight_pieces(const Rep& r, const TensorAlgebra& ta, const OpElement& x) {
  std::vector<std::pair<std::vector<std::vector<Rational>>, OpElement>> groups;
  for (const auto& t : x.terms()) {
    std::vector<std::vector<Rational>> key;
    for (int l = 0; l < ta.legs(); ++l) {
      auto w = monomial_weight(r, leg_part(ta, l, t.exp));
      if (!w) throw std::invalid_argument("weight_pieces: monomial without weight");
      key.push_back(*w);
    }
    OpElement m(t.exp, t.coeff);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == key; });
    if (it == groups.end())
      groups.emplace_back(key, m);
    else
      it->second = it->second + m;
  }
  std::vector<OpElement> out;
  for (auto& g : groups) out.push_back(std::move(g.second));
  return out;
}

/// Splits g(sum of pieces) into a product of single-piece factors by
/// repeated merge steps. Appends to `out`; returns false if no valid order exists.
inline bool split_factor(std::vector<GbFactor>& list, std::size_t pos, const std::vector<OpElement>& pieces, const Space* legs,
                         std::vector<FactorStep>& steps) {
  const std::size_t n = pieces.size();
  if (n <= 1) return true;
  const GbFactor whole = list[pos];
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<OpElement> pu, pw;
    OpElement u = OpElement::zero(*legs), w = OpElement::zero(*legs);
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (1u << k)) {
        pu.push_back(pieces[k]);
        u = u + pieces[k];
      } else {
        pw.push_back(pieces[k]);
        w = w + pieces[k];
      }
    }
    GbFactor fu = whole, fw = whole;
    fu.arg = u;
    fw.arg = w;
    fu.label = fw.label = "";
    if (!merge_holds(whole, fu, fw, legs, false)) continue;
    if ((pu.size() == 1 && !positive(u, legs)) || (pw.size() == 1 && !positive(w, legs))) continue;
    FactorStep st{"merge", "UW = q^2 WU, U and W positive", pos, {whole}, {fu, fw}};
    std::vector<GbFactor> trial = list;
    trial[pos] = fu;
    trial.insert(trial.begin() + static_cast<long>(pos) + 1, fw);
    std::vector<FactorStep> sub{st};
    if (!split_factor(trial, pos + 1, pw, legs, sub)) continue;
    if (!split_factor(trial, pos, pu, legs, sub)) continue;
    list = std::move(trial);
    steps.insert(steps.end(), sub.begin(), sub.end());
    return true;
  }
  return false;
}

/// Breadth-first search over commute swaps and pentagon collapses.
inline std::optional<std::vector<FactorStep>> reorder(const std::vector<GbFactor>& from, const std::vector<GbFactor>& to,
                                                       const Space* legs, std::size_t max_states) {
  std::vector<GbFactor> table;
  auto intern = [&](const GbFactor& f) {
    for (std::size_t k = 0; k < table.size(); ++k)
      if (same_factor(table[k], f)) return static_cast<int>(k);
    table.push_back(f);
    return static_cast<int>(table.size() - 1);
  };
  std::vector<int> start, goal;
  for (const auto& f : from) start.push_back(intern(f));
  for (const auto& f : to) goal.push_back(intern(f));
  std::map<std::pair<int, int>, bool> comm;
  std::map<std::tuple<int, int, int>, bool> penta;
  auto commutes = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = comm.find(key);
    if (it == comm.end()) it = comm.emplace(key, commute_holds(table[a], table[b])).first;
    return it->second;
  };
  auto collapses = [&](int a, int b, int c) {
    auto key = std::make_tuple(a, b, c);
    auto it = penta.find(key);
    if (it == penta.end()) it = penta.emplace(key, penta_holds(table[a], table[b], table[c], legs)).first;
    return it->second;
  };
  struct Node {
    std::vector<int> ids;
    int parent;
    FactorStep step;
  };
  std::vector<Node> nodes{{start, -1, {}}};
  std::set<std::vector<int>> seen{start};
  for (std::size_t head = 0; head < nodes.size() && nodes.size() < max_states; ++head) {
    if (nodes[head].ids == goal) {
      std::vector<FactorStep> path;
      for (int k = static_cast<int>(head); nodes[k].parent >= 0; k = nodes[k].parent) path.push_back(nodes[k].step);
      std::reverse(path.begin(), path.end());
      return path;
    }
    const std::vector<int> ids = nodes[head].ids;
    auto push = [&](std::vector<int> next, FactorStep st) {
      if (seen.insert(next).second) nodes.push_back({std::move(next), static_cast<int>(head), std::move(st)});
    };
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
      if (ids[i] != ids[i + 1] && commutes(ids[i], ids[i + 1])) {
        auto next = ids;
        std::swap(next[i], next[i + 1]);
        push(next, {"commute-swap", "XY = YX", i, {table[ids[i]], table[ids[i + 1]]}, {table[ids[i + 1]], table[ids[i]]}});
      }
      if (i + 2 < ids.size() && collapses(ids[i], ids[i + 1], ids[i + 2])) {
        std::vector<int> next(ids.begin(), ids.begin() + static_cast<long>(i));
        next.push_back(ids[i + 2]);
        next.push_back(ids[i]);
        next.insert(next.end(), ids.begin() + static_cast<long>(i + 3), ids.end());
        push(next, {"genpenta", "c = [U,V]/(q-q^-1) positive, Uc = q^2 cU, Vc = q^-2 cV", i,
                    {table[ids[i]], table[ids[i + 1]], table[ids[i + 2]]}, {table[ids[i + 2]], table[ids[i]]}});
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// (Delta (x) 1) R = R_13 R_23 for `leg` = 1, (1 (x) Delta) R = R_13 R_12 for `leg` = 2.
/// After cancelling the Cartan prefactors this is an identity between two
/// products of g_b factors; the left side is split along the weight pieces
/// of the coproduct and then reordered into the right side.
inline FactorTrace verify_quasitriangularity(const RFactorization& R, int leg, std::size_t max_states = 200000) {
  if (leg != 1 && leg != 2) throw std::invalid_argument("verify_quasitriangularity: leg must be 1 or 2");
  if (R.barred) throw std::invalid_argument("verify_quasitriangularity: only the unbarred factorization is supported");
  const Rep& r = R.rep;
  const TensorAlgebra ta(r.space, 3);
  FactorTrace tr;
  tr.title = std::string(leg == 1 ? "(Delta x 1)R = R13 R23" : "(1 x Delta)R = R13 R12") + " for " + r.label + word_str(R.word);
  tr.legs = ta.space;
  const Space* legs = &*tr.legs;
  const int a = leg == 1 ? 0 : 1, b = leg == 1 ? 1 : 2;
  auto base = [&](const Letter& l) -> OpElement {
    if (l.kind == 'K') return ta.embed(a, r.K_pow(l.node, l.power)) * ta.embed(b, r.K_pow(l.node, l.power));
    if (!(l.power == Rational(1))) throw std::invalid_argument("coproduct valuation: non-unit power of " + std::string(1, l.kind));
    return coproduct(r, ta, Gen{l.kind, l.node}, a, b);
  };
  std::vector<std::vector<OpElement>> pieces;
  for (std::size_t k = R.roots.size(); k-- > 0;) {
    const auto& rv = R.roots[k];
    GbFactor g;
    g.scale = r.scale[rv.node];
    g.label = R.factors[R.roots.size() - 1 - k].label;
    const Gen which{leg == 1 ? 'e' : 'f', rv.node};
    const OpElement d = LusztigEvaluator(r, rv.prefix, base, ta.one()).apply(which);
    g.arg = leg == 1 ? d * ta.embed(2, rv.f) : ta.embed(0, rv.e) * d;
    tr.start.push_back(g);
    pieces.push_back(detail::weight_pieces(r, ta, g.arg));
  }
  for (std::size_t k = R.roots.size(); k-- > 0;) {
    const auto& rv = R.roots[k];
    GbFactor g{R.factors[R.roots.size() - 1 - k]};
    g.arg = leg == 1 ? conjugate_prefactor(r, ta, ta.embed(0, rv.e) * ta.embed(2, rv.f), 1, 2, -1)
                     : conjugate_prefactor(r, ta, ta.embed(0, rv.e) * ta.embed(2, rv.f), 0, 1, -1);
    tr.goal.push_back(g);
  }
  for (std::size_t k = R.roots.size(); k-- > 0;) {
    const auto& rv = R.roots[k];
    GbFactor g{R.factors[R.roots.size() - 1 - k]};
    g.arg = leg == 1 ? conjugate_prefactor(r, ta, ta.embed(1, rv.e) * ta.embed(2, rv.f), 0, 2, 1)
                     : conjugate_prefactor(r, ta, ta.embed(0, rv.e) * ta.embed(1, rv.f), 0, 2, 1);
    tr.goal.push_back(g);
  }
  for (auto& g : tr.goal) std::tie(g.certified, g.certificate) = detail::certify_argument(g.arg, ta.space);

  std::vector<GbFactor> cur = tr.start;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    for (const auto& p : pieces[k])
      if (!detail::positive(p, legs)) {
        tr.failure = "coproduct piece of " + tr.start[k].label + " has no positivity certificate";
        return tr;
      }
    if (!detail::split_factor(cur, pos, pieces[k], legs, tr.steps)) {
      tr.failure = "no merge order splits " + tr.start[k].label + " into its weight pieces";
      return tr;
    }
    pos += pieces[k].size();
  }
  auto path = detail::reorder(cur, tr.goal, legs, max_states);
  if (!path) {
    tr.failure = "no sequence of commute swaps and pentagon collapses reaches the target within " + std::to_string(max_states) + " states";
    return tr;
  }
  tr.steps.insert(tr.steps.end(), path->begin(), path->end());
  tr.ok = true;
  return tr;
}

// ---------------------------------------------------------------------------
// Degenerate interchange relations
// ---------------------------------------------------------------------------

namespace detail {

/// Adds the A_2 interchange relations for one set of generators; `e12` and
/// `e21` are taken as given and checked against their defining q-commutators.
inline void interchange_items(CheckReport& rep, const Rep& r, const OpElement& e1, const OpElement& e2, const OpElement& e12,
                              const OpElement& e21, const std::string& tag) {
  const PhaseCoeff q = r.q(0), qi = r.q(0, -1), qh = r.q(0, Rational(1, 2)), qhi = r.q(0, Rational(-1, 2));
  const PhaseCoeff d = q - qi;
  rep.add(exact_check("e_12 definition" + tag, "(q-q^-1) e_12 = q^{1/2} e_2 e_1 - q^{-1/2} e_1 e_2",
                      d * e12 - (qh * (e2 * e1) - qhi * (e1 * e2)), r.space));
  rep.add(exact_check("e_21 definition" + tag, "(q-q^-1) e_21 = q^{1/2} e_1 e_2 - q^{-1/2} e_2 e_1",
                      d * e21 - (qh * (e1 * e2) - qhi * (e2 * e1)), r.space));
  rep.add(exact_check("interchange" + tag, "e_2 e_1 = q e_1 e_2 - (q-q^-1) q^{1/2} e_21",
                      e2 * e1 - (q * (e1 * e2) - d * qh * e21), r.space));
  rep.add(exact_check("e_12 from e_21" + tag, "e_12 = q^{1/2} e_1 e_2 - q e_21", e12 - (qh * (e1 * e2) - q * e21), r.space));
  // adjoints: e_i and e_ij are self-adjoint, phases conjugate
  rep.add(exact_check("self-adjoint e_12" + tag, "e_12^* = e_12", adjoint(e12) - e12, r.space));
  rep.add(exact_check("self-adjoint e_21" + tag, "e_21^* = e_21", adjoint(e21) - e21, r.space));
  rep.add(exact_check("interchange adjoint" + tag, "e_1 e_2 = q^-1 e_2 e_1 - (q^-1 - q) q^{-1/2} e_21",
                      adjoint(e2 * e1) - (qi * adjoint(e1 * e2) - (qi - q) * qhi * adjoint(e21)), r.space));
  rep.add(exact_check("e_12 from e_21 adjoint" + tag, "e_12 = q^{-1/2} e_2 e_1 - q^-1 e_21",
                      adjoint(e12) - (qhi * adjoint(e1 * e2) - qi * adjoint(e21)), r.space));
}

}  // namespace detail

/// e_2 e_1 = q e_1 e_2 - (q-q^-1) q^{1/2} e_21 and e_12 = q^{1/2} e_1 e_2 - q e_21
/// in an A_2 representation, with e_12 and e_21 the middle root vectors of the
/// two reduced words; also their adjoints and their images under b -> 1/b.
inline CheckReport degenerate_interchange_check(const Rep& r) {
  if (r.cd.name() != "A2") throw std::invalid_argument("degenerate_interchange_check: needs an A2 representation");
  CheckReport rep;
  const OpElement e1 = r.gen({'e', 0}), e2 = r.gen({'e', 1});
  const OpElement t1e2 = apply_T(r, {1}, Gen{'e', 1}), t2e1 = apply_T(r, {2}, Gen{'e', 0});
  // which of the two is e_12 is fixed by the defining q-commutator
  const PhaseCoeff d = r.q(0) - r.q(0, -1);
  const OpElement def12 = r.q(0, Rational(1, 2)) * (e2 * e1) - r.q(0, Rational(-1, 2)) * (e1 * e2);
  const bool direct = d * t1e2 == def12;
  const OpElement e12 = direct ? t1e2 : t2e1, e21 = direct ? t2e1 : t1e2;
  detail::interchange_items(rep, r, e1, e2, e12, e21, "");

  const Rep t = tilde_rep(r);
  const std::vector<Sym> scales = r.tilde ? std::vector<Sym>{Sym::bl_inv(), Sym::bs_inv()} : std::vector<Sym>{Sym::bl(), Sym::bs()};
  const Sym inv2 = r.scale[0].dual_swap() * r.scale[0].dual_swap();
  auto swap = [&](const OpElement& x, const std::string& name) {
    std::string why;
    auto p = termwise_power(x, inv2, scales, &why);
    if (!p) throw CertificateError("degenerate_interchange_check: " + name + " has no transcendental swap: " + why);
    return *p;
  };
  detail::interchange_items(rep, t, t.gen({'e', 0}), t.gen({'e', 1}), swap(e12, "e_12"), swap(e21, "e_21"), " (tilde)");
  return rep;
}

}  // namespace qrop
