#pragma once

// Conjugation of Weyl-exponential sums by quantum dilogarithms g_b(A),
// driven by hypothesis-checked rewrite rules. Each rule only fires after its
// commutation hypotheses are verified exactly on OpElements, so a successful
// rewrite is a proof step that can be replayed from the stored transcript.

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrop/weyl.hpp"

namespace qrop {

class UnsupportedConjugationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Forward: g_b(A) x g_b(A)^*.  Inverse: g_b(A)^* x g_b(A).
enum class Side { Forward, Inverse };

inline const char* side_str(Side s) { return s == Side::Forward ? "forward" : "inverse"; }

struct RewriteStep {
  std::string rule;        ///< commute, q2-conj, q4-conj, qn-conj, genpenta, gensum, rank1-braid, genexp-split, commute-swap, merge
  std::string hypothesis;  ///< human-readable transcript of the verified relations
  std::vector<OpElement> before;
  std::vector<OpElement> after;
  OpElement arg;  ///< the g_b argument (empty for algebraic steps)
  Sym scale;      ///< b of the factor
  Side side = Side::Forward;
  bool conjugation = true;  ///< false for plain algebraic steps (equalities checked directly)
  std::optional<Space> legs;  ///< tensor layout used for positivity of arguments
  std::optional<LinearSubstitution> substitution;  ///< set for change-of-variables steps
  /// Set for steps that apply a fixed algebra automorphism (such as conjugation
  /// by a Cartan prefactor); replay applies it to the sum of `before`.
  std::function<OpElement(const OpElement&)> map;
};

/// Sum of a list of parts.
inline OpElement sum_parts(const std::vector<OpElement>& parts) {
  OpElement s;
  for (const auto& p : parts) s = s + p;
  return s;
}

namespace detail {

struct Fired {
  bool ok = false;
  std::string rule;
  std::string hyp;
  std::vector<OpElement> out;
};

inline PhaseCoeff qb(const Sym& b, Rational k) { return PhaseCoeff::q_power(b, k); }

/// u w == q^k w u, with q = e^{pi i b^2}.
inline bool qrel(const OpElement& u, const OpElement& w, const Sym& b, Rational k) { return u * w == qb(b, k) * (w * u); }

inline bool positive(const OpElement& x, const Space* legs) {
  if (x.is_zero()) return false;
  if (manifest_positivity_certificate(x).ok) return true;
  if (legs && legs->legs > 1 && certify_positive(x, *legs).ok) return true;
  return certify_positive_structure(x);
}

inline std::string rel_str(const char* a, const char* c, int k) {
  std::ostringstream os;
  os << a << c << "=q^" << k << " " << c << a;
  return os.str();
}

/// Generalized pentagon, expanding form.
///   forward: g(A) P g(A)^* = P + c,  c = [P, A] / (q - q^-1),  P c = q^2 c P,  A c = q^-2 c A
///   inverse: g(A)^* P g(A) = P + c,  c = [A, P] / (q - q^-1),  A c = q^2 c A,  P c = q^-2 c P
inline Fired expand2(const OpElement& P, const OpElement& A, const Sym& b, Side side, const Space* legs) {
  Fired f;
  const PhaseCoeff den = qb(b, 1) - qb(b, -1);
  OpElement c = (side == Side::Forward ? commutator(P, A) : commutator(A, P)).divide(den);
  if (c.is_zero()) return f;
  const OpElement& first = side == Side::Forward ? P : A;
  const OpElement& second = side == Side::Forward ? A : P;
  if (!qrel(first, c, b, 2) || !qrel(second, c, b, -2) || !positive(c, legs)) return f;
  f.ok = true;
  f.rule = (P.is_monomial() && A.is_monomial()) ? "q2-conj" : "genpenta";
  f.hyp = std::string("c = ") + (side == Side::Forward ? "[U,V]" : "[V,U]") + "/(q-q^-1) positive; " +
          (side == Side::Forward ? "Uc=q^2 cU, Vc=q^-2 cV" : "Vc=q^2 cV, Uc=q^-2 cU") + " (U part, V argument)";
  f.out = {P, c};
  return f;
}

/// The q^4 analogue with two new terms.
///   forward: g(V) U g(V)^* = U + c + d,   c = [U,V]/(q-q^-1), d = (q^-1 c V - q V c)/(q^2-q^-2),
///            U c = q^4 c U, c d = q^4 d c, d V = q^4 V d
///   inverse: g(U)^* V g(U) = d' + c + V,  d' = (q^-1 U c - q c U)/(q^2-q^-2),
///            V c = q^-4 c V, c d' = q^-4 d' c, d' U = q^-4 U d'
inline Fired expand4(const OpElement& P, const OpElement& A, const Sym& b, Side side, const Space* legs) {
  Fired f;
  const PhaseCoeff den1 = qb(b, 1) - qb(b, -1);
  const PhaseCoeff den2 = qb(b, 2) - qb(b, -2);
  if (side == Side::Forward) {
    const OpElement &U = P, &V = A;
    OpElement c = commutator(U, V).divide(den1);
    if (c.is_zero()) return f;
    OpElement d = (qb(b, -1) * (c * V) - qb(b, 1) * (V * c)).divide(den2);
    if (d.is_zero() || !qrel(U, c, b, 4) || !qrel(c, d, b, 4) || !qrel(d, V, b, 4) || !positive(c, legs) || !positive(d, legs)) return f;
    f.out = {U, c, d};
    f.hyp = "c = [U,V]/(q-q^-1), d = (q^-1 cV - q Vc)/(q^2-q^-2) positive; Uc=q^4 cU, cd=q^4 dc, dV=q^4 Vd";
  } else {
    const OpElement &U = A, &V = P;
    OpElement c = commutator(U, V).divide(den1);
    if (c.is_zero()) return f;
    OpElement dp = (qb(b, -1) * (U * c) - qb(b, 1) * (c * U)).divide(den2);
    if (dp.is_zero() || !qrel(V, c, b, -4) || !qrel(c, dp, b, -4) || !qrel(dp, U, b, -4) || !positive(c, legs) || !positive(dp, legs)) return f;
    f.out = {dp, c, V};
    f.hyp = "c = [U,V]/(q-q^-1), d' = (q^-1 Uc - q cU)/(q^2-q^-2) positive; Vc=q^-4 cV, cd'=q^-4 d'c, d'U=q^-4 Ud'";
  }
  f.ok = true;
  f.rule = (P.is_monomial() && A.is_monomial()) ? "q4-conj" : "gensum";
  return f;
}

/// Monomial argument: U A = q^{2n} A U gives
///   forward (n >= 0): g(A) U g(A)^* = U prod_{k=1}^{n} (1 + q^{-(2k-1)} A)
///   inverse (n <= 0): g(A)^* U g(A) = U prod_{k=0}^{-n-1} (1 + q^{2k+1} A)
inline Fired monomial_rule(const OpElement& U, const OpElement& A, const Sym& b, Side side, const Space* /*legs*/) {
  Fired f;
  if (!U.is_monomial() || !A.is_monomial()) return f;
  const Sym theta = exchange_phase(U.terms()[0].exp, A.terms()[0].exp);
  const Sym n_sym = theta * (b.dual_swap() * b.dual_swap());
  if (!n_sym.is_constant() || !n_sym.constant_part().is_integer()) return f;
  const auto n = static_cast<int>(n_sym.constant_part().num());
  if (n == 0 || (side == Side::Forward && n < 0) || (side == Side::Inverse && n > 0)) return f;
  OpElement prod = OpElement::one(U.n(), U.m());
  if (side == Side::Forward)
    for (int k = 1; k <= n; ++k) prod = prod * (OpElement::one(U.n(), U.m()) + qb(b, -(2 * k - 1)) * A);
  else
    for (int k = 0; k < -n; ++k) prod = prod * (OpElement::one(U.n(), U.m()) + qb(b, 2 * k + 1) * A);
  OpElement out = U * prod;
  f.ok = true;
  const int an = n < 0 ? -n : n;
  f.rule = an == 1 ? "q2-conj" : an == 2 ? "q4-conj" : "qn-conj";
  f.hyp = "UV=q^" + std::to_string(2 * n) + " VU (U part, V argument)";
  // keep the original part separate so later collapses can see it
  f.out = {U, out - U};
  return f;
}

}  // namespace detail

/// Conjugate a list of parts by g_b(A) (forward) or g_b(A)^* (inverse). Parts
/// are tried in this order: commuting with A; collapsing with other parts
/// (P + c -> P when the opposite conjugation expands P to P + c); the
/// monomial q^{2n} rule; the pentagon-type expansions. A part that matches
/// nothing is retried term by term before the call gives up.
inline std::vector<OpElement> gb_conjugate_parts(const std::vector<OpElement>& parts, const OpElement& A, const Sym& b, Side side,
                                                 RewriteStep* log = nullptr, const Space* legs = nullptr) {
  if (!detail::positive(A, legs)) throw UnsupportedConjugationError("g_b argument has no positivity certificate");
  const Side opposite = side == Side::Forward ? Side::Inverse : Side::Forward;
  std::vector<OpElement> out;
  std::vector<std::string> rules, hyps;
  std::vector<bool> used(parts.size(), false);
  auto note = [&](const detail::Fired& f) {
    rules.push_back(f.rule);
    hyps.push_back(f.hyp);
  };
  auto is_part = [&](const OpElement& c, std::size_t skip) -> std::ptrdiff_t {
    for (std::size_t j = 0; j < parts.size(); ++j)
      if (!used[j] && j != skip && parts[j] == c) return static_cast<std::ptrdiff_t>(j);
    return -1;
  };

  // collapses first, so that the absorbed parts are not expanded on their own
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (used[i] || commute(parts[i], A)) continue;
    for (auto rule : {detail::expand2, detail::expand4}) {
      detail::Fired f = rule(parts[i], A, b, opposite, legs);
      if (!f.ok) continue;
      std::vector<std::size_t> hits;
      bool all = true;
      for (const auto& extra : f.out) {
        if (extra == parts[i]) continue;
        auto j = is_part(extra, i);
        if (j < 0 || std::find(hits.begin(), hits.end(), static_cast<std::size_t>(j)) != hits.end()) {
          all = false;
          break;
        }
        hits.push_back(static_cast<std::size_t>(j));
      }
      if (!all) continue;
      used[i] = true;
      for (auto j : hits) used[j] = true;
      out.push_back(parts[i]);
      rules.push_back(f.rule + " (collapse)");
      hyps.push_back(f.hyp);
      break;
    }
  }

  // Braiding pairs. With [A, X] = (q - q^-1)(Y - W), W A = q^2 A W and
  // Y A = q^-2 A Y one has (X + W) g(A) = g(A) (X + Y): the inverse side
  // turns {X, W} into {X, Y} and the forward side turns {X, Y} into {X, W}.
  const PhaseCoeff den = detail::qb(b, 1) - detail::qb(b, -1);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (used[i] || commute(parts[i], A)) continue;
    const OpElement& moving = parts[i];  // W (inverse) or Y (forward)
    if (!detail::qrel(moving, A, b, side == Side::Inverse ? 2 : -2)) continue;
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (j == i || used[j] || commute(parts[j], A)) continue;
      const OpElement& X = parts[j];
      OpElement c = commutator(A, X).divide(den);
      OpElement other = side == Side::Inverse ? moving + c : moving - c;
      if (other.is_zero() || !detail::qrel(other, A, b, side == Side::Inverse ? -2 : 2) || !detail::positive(other, legs)) continue;
      used[i] = used[j] = true;
      out.push_back(X);
      out.push_back(other);
      rules.emplace_back("rank1-braid");
      hyps.emplace_back(side == Side::Inverse ? "[V,X]=(q-q^-1)(Y-W), WV=q^2 VW, YV=q^-2 VY (V argument, {X,W} -> {X,Y})"
                                              : "[V,X]=(q-q^-1)(Y-W), WV=q^2 VW, YV=q^-2 VY (V argument, {X,Y} -> {X,W})");
      break;
    }
  }

  auto one_part = [&](const OpElement& P) -> bool {
    if (commute(P, A)) {
      out.push_back(P);
      rules.emplace_back("commute");
      hyps.emplace_back("[U,V]=0");
      return true;
    }
    for (auto rule : {detail::monomial_rule, detail::expand2, detail::expand4}) {
      detail::Fired f = rule(P, A, b, side, legs);
      if (!f.ok) continue;
      note(f);
      for (auto& o : f.out)
        if (!o.is_zero()) out.push_back(o);
      return true;
    }
    return false;
  };

  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (used[i]) continue;
    if (one_part(parts[i])) continue;
    bool ok = parts[i].size() > 1;
    if (ok)
      for (const auto& t : parts[i].terms())
        if (!one_part(OpElement::from_terms(parts[i].n(), parts[i].m(), {t}))) {
          ok = false;
          break;
        }
    if (!ok)
      throw UnsupportedConjugationError(std::string("no conjugation rule matches part ") + std::to_string(i) + " (" + side_str(side) + ")");
  }

  if (log) {
    log->before = parts;
    log->after = out;
    log->arg = A;
    log->scale = b;
    log->side = side;
    log->conjugation = true;
    log->legs = legs ? std::optional<Space>(*legs) : std::nullopt;
    std::string r, h;
    for (std::size_t k = 0; k < rules.size(); ++k) {
      if (rules[k] == "commute") continue;
      r += (r.empty() ? "" : ", ") + rules[k];
      h += (h.empty() ? "" : "; ") + hyps[k];
    }
    log->rule = r.empty() ? "commute" : r;
    log->hypothesis = h.empty() ? "[U,V]=0 for every part" : h;
  }
  return out;
}

inline OpElement gb_conjugate(const OpElement& x, const OpElement& A, const Sym& b, Side side, RewriteStep* log = nullptr,
                              const Space* legs = nullptr) {
  return sum_parts(gb_conjugate_parts({x}, A, b, side, log, legs));
}

/// A sequence of verified steps. Conjugation steps are replayed through the
/// rule engine; algebraic steps are re-checked as equalities of sums.
struct RewriteTrace {
  std::string title;
  std::vector<RewriteStep> steps;
  bool ok = false;
  std::string failure;

  [[nodiscard]] bool reverify(std::string* why = nullptr) const {
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const auto& s = steps[k];
      bool good = false;
      try {
        if (s.substitution)
          good = substitute_linear(sum_parts(s.before), *s.substitution) == sum_parts(s.after);
        else if (s.map)
          good = s.map(sum_parts(s.before)) == sum_parts(s.after);
        else if (s.conjugation)
          good = sum_parts(gb_conjugate_parts(s.before, s.arg, s.scale, s.side, nullptr, s.legs ? &*s.legs : nullptr)) == sum_parts(s.after);
        else
          good = sum_parts(s.before) == sum_parts(s.after);
      } catch (const std::exception& e) {
        if (why) *why = "step " + std::to_string(k) + ": " + e.what();
        return false;
      }
      if (!good) {
        if (why) *why = "step " + std::to_string(k) + " (" + s.rule + ") does not replay";
        return false;
      }
    }
    return ok;
  }
};

}  // namespace qrop
