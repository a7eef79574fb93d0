#pragma once

#include <cctype>
#include <complex>
#include <numbers>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrop/report.hpp"
#include "qrop/rootdata.hpp"
#include "qrop/weyl.hpp"

namespace qrop {

/// Generator symbol: kind is 'e', 'f' or 'K'; node is 0-based.
struct Gen {
  char kind = 'e';
  int node = 0;
  friend auto operator<=>(const Gen&, const Gen&) = default;
  [[nodiscard]] std::string str() const { return std::string(1, kind) + std::to_string(node + 1); }
};

/// Parse a linear combination such as "2l1 - 2t + u - v" or "-p_v + p_w - p_u"
/// into rational coefficients over the variables of `sp` (layout of ExponentForm).
inline std::vector<Rational> parse_linear(const std::string& text, const Space& sp) {
  std::vector<Rational> c(sp.dim());
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (i == text.size()) return c;
  while (i < text.size()) {
    int sign = 1;
    skip();
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      if (text[i] == '-') sign = -1;
      ++i;
      skip();
    }
    std::int64_t num = 1, den = 1;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      num = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) num = num * 10 + (text[i++] - '0');
      if (i < text.size() && text[i] == '/') {
        ++i;
        den = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) den = den * 10 + (text[i++] - '0');
      }
      skip();
      if (i < text.size() && text[i] == '*') ++i;
    }
    std::size_t start = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '^' || text[i] == '#')) ++i;
    const std::string name = text.substr(start, i - start);
    if (name.empty()) throw std::invalid_argument("parse_linear: expected variable in '" + text + "'");
    std::optional<std::size_t> v;
    for (std::size_t k = 0; k < sp.dim() && !v; ++k)
      if (sp.var_name(k) == name) v = k;
    if (!v) throw std::invalid_argument("parse_linear: unknown variable '" + name + "'");
    c[*v] += Rational(sign * num, den);
    skip();
  }
  return c;
}

/// A positive representation realised on a Weyl algebra. The relation data
/// (q-exponents and Cartan matrix) are stored explicitly so that the
/// transcendental (tilde) representation can carry the Langlands-dual data.
struct Rep {
  std::string label;
  CartanData cd;
  ReducedWord word;
  Space space;
  std::vector<int> coord_node;  ///< root index carried by each coordinate
  std::vector<std::optional<OpElement>> e;
  std::vector<OpElement> f;
  std::vector<OpElement> K;
  std::vector<ExponentForm> L;  ///< K_i = e^{pi L_i}
  std::vector<Sym> qexp;        ///< q_i = e^{pi i qexp_i}
  std::vector<Sym> scale;       ///< the b_i used in exponents (b_i or b_i^{-1})
  std::vector<std::vector<int>> a;
  bool tilde = false;

  [[nodiscard]] int rank() const { return cd.rank; }
  [[nodiscard]] bool has(const Gen& g) const { return g.kind != 'e' || e.at(g.node).has_value(); }
  [[nodiscard]] const OpElement& gen(const Gen& g) const {
    switch (g.kind) {
      case 'e':
        if (!e.at(g.node)) throw std::invalid_argument("generator " + g.str() + " is not available in this representation");
        return *e[g.node];
      case 'f': return f.at(g.node);
      case 'K': return K.at(g.node);
      default: throw std::invalid_argument("unknown generator kind");
    }
  }
  [[nodiscard]] PhaseCoeff q(int i, Rational k = 1) const { return PhaseCoeff::phase(qexp[i] * k); }
  [[nodiscard]] OpElement one() const { return OpElement::one(space); }
  /// K_i^r for rational r.
  [[nodiscard]] OpElement K_pow(int i, Rational r) const { return expo(L[i] * r); }
  [[nodiscard]] std::vector<Gen> generators() const {
    std::vector<Gen> g;
    for (int i = 0; i < rank(); ++i) {
      if (e[i]) g.push_back({'e', i});
      g.push_back({'f', i});
      g.push_back({'K', i});
    }
    return g;
  }
};

/// Builds exponent forms where each coordinate is scaled by the b of its root.
class RepBuilder {
public:
  RepBuilder(CartanData cd, Space sp, std::vector<int> coord_node) : cd_(std::move(cd)), sp_(std::move(sp)), node_(std::move(coord_node)) {}

  [[nodiscard]] const Space& space() const { return sp_; }

  /// Scaled form: sum_v c_v * b(v) * v for the linear combination `text`.
  [[nodiscard]] ExponentForm form(const std::string& text) const { return scaled(parse_linear(text, sp_)); }

  [[nodiscard]] ExponentForm scaled(const std::vector<Rational>& c) const {
    ExponentForm e(sp_.n(), sp_.m());
    for (std::size_t v = 0; v < c.size(); ++v) {
      if (c[v].is_zero()) continue;
      e[v] = cd_.b(node_of(v)) * c[v];
    }
    return e;
  }

  /// [X]e(Y) = e^{pi(-X + 2Y)} + e^{pi(X + 2Y)} with b-scaled variables.
  [[nodiscard]] OpElement block(const std::string& x, const std::string& y) const {
    ExponentForm X = form(x), Y = form(y) * Rational(2);
    return expo(Y - X) + expo(Y + X);
  }

private:
  [[nodiscard]] int node_of(std::size_t v) const {
    if (v < sp_.n()) return node_[v];
    if (v < 2 * sp_.n()) return node_[v - sp_.n()];
    return static_cast<int>(v - 2 * sp_.n());
  }
  CartanData cd_;
  Space sp_;
  std::vector<int> node_;
};

namespace detail {

inline Rep finish_rep(Rep r) {
  const int n = r.rank();
  r.qexp.resize(n);
  r.scale.resize(n);
  r.L.clear();
  for (int i = 0; i < n; ++i) {
    r.qexp[i] = r.cd.q_exponent(i);
    r.scale[i] = r.cd.b(i);
    if (!r.K[i].is_monomial() || !r.K[i].terms()[0].coeff.is_one()) throw std::logic_error("K_i must be a pure exponential");
    r.L.push_back(r.K[i].terms()[0].exp);
  }
  r.a = r.cd.a;
  return r;
}

}  // namespace detail

/// The canonical sl(2) representation on f(u).
inline Rep builtin_sl2() {
  Rep r;
  r.label = "sl2";
  r.cd = cartan_data(CartanType::A, 1);
  r.word = {1};
  r.space = Space::make({"u"}, {"l1"});
  r.coord_node = {0};
  RepBuilder B(r.cd, r.space, r.coord_node);
  r.e = {B.block("u - l1", "-p_u")};
  r.f = {B.block("-u - l1", "p_u")};
  r.K = {expo(B.form("-2u"))};
  return detail::finish_rep(std::move(r));
}

/// The sl(3) representation on f(u, v, w) for the word s2 s1 s2.
inline Rep builtin_a2() {
  Rep r;
  r.label = "A2";
  r.cd = cartan_data(CartanType::A, 2);
  r.word = {2, 1, 2};
  r.space = Space::make({"u", "v", "w"}, {"l1", "l2"});
  r.coord_node = {1, 0, 1};
  RepBuilder B(r.cd, r.space, r.coord_node);
  r.e = {B.block("v - w", "-p_v") + B.block("u", "-p_v + p_w - p_u"), B.block("w", "-p_w")};
  r.f = {B.block("-v + u - 2l1", "p_v"), B.block("-2u + v - w - 2l2", "p_w") + B.block("-u - 2l2", "p_u")};
  r.K = {expo(B.form("u - 2v + w - 2l1")), expo(B.form("-2u + v - 2w - 2l2"))};
  return detail::finish_rep(std::move(r));
}

/// The B2 representation on f(t, u, v, w) for the word s1 s2 s1 s2; t, v
/// belong to the short root.
inline Rep builtin_b2() {
  Rep r;
  r.label = "B2";
  r.cd = cartan_data(CartanType::B, 2);
  r.word = {1, 2, 1, 2};
  r.space = Space::make({"t", "u", "v", "w"}, {"l1", "l2"});
  r.coord_node = {0, 1, 0, 1};
  RepBuilder B(r.cd, r.space, r.coord_node);
  r.e = {B.block("t", "-p_t - p_u + p_w") + B.block("u - v", "-p_u - p_v + p_w") + B.block("v - w", "-p_v"),
         B.block("w", "-p_w")};
  r.f = {B.block("2l1 - t", "p_t") + B.block("2l1 - 2t + u - v", "p_v"),
         B.block("2l2 + 2t - u", "p_u") + B.block("2l2 + 2t - 2u + 2v - w", "p_w")};
  r.K = {expo(B.form("2l1 - 2t - 2v + u + w")), expo(B.form("2l2 - 2u - 2w + 2t + 2v"))};
  return detail::finish_rep(std::move(r));
}

/// Coordinate names u{i}_{k}: root i, k-th occurrence counted from the right.
inline Rep build_rep(const CartanData& cd, const ReducedWord& word) {
  require_supported(cd);
  if (!is_longest_word(cd, word)) throw ConfigError("build_rep: " + word_str(word) + " is not a reduced word for w0 of " + cd.name());
  const int N = static_cast<int>(word.size());
  const int n = cd.rank;
  std::vector<int> occ_from_right(N);
  std::map<int, int> count;
  for (int j = N - 1; j >= 0; --j) occ_from_right[j] = ++count[word[j]];
  std::vector<std::string> coords, params;
  std::vector<int> node(N);
  for (int j = 0; j < N; ++j) {
    coords.push_back("u" + std::to_string(word[j]) + "_" + std::to_string(occ_from_right[j]));
    node[j] = word[j] - 1;
  }
  for (int i = 0; i < n; ++i) params.push_back("l" + std::to_string(i + 1));

  Rep r;
  r.label = cd.name() + word_str(word);
  r.cd = cd;
  r.word = word;
  r.space = Space::make(coords, params);
  r.coord_node = node;
  RepBuilder B(cd, r.space, node);
  r.e.assign(n, std::nullopt);
  r.f.assign(n, OpElement::zero(r.space));
  r.K.clear();
  for (int i = 0; i < n; ++i) {
    // f_i: one block per occurrence of i; the bracket collects the weights of
    // the coordinates to the left (Cartan entries a_{r(j), i}).
    for (int j = 0; j < N; ++j) {
      if (word[j] - 1 != i) continue;
      std::vector<Rational> x(r.space.dim()), y(r.space.dim());
      for (int l = 0; l < j; ++l) x[l] = Rational(-cd.a[node[l]][i]);
      x[j] = Rational(-1);
      x[2 * N + i] = Rational(-2);
      y[N + j] = Rational(1);
      ExponentForm X = B.scaled(x), Y = B.scaled(y) * Rational(2);
      r.f[i] += expo(Y - X) + expo(Y + X);
    }
    std::vector<Rational> k(r.space.dim());
    for (int l = 0; l < N; ++l) k[l] = Rational(-cd.a[node[l]][i]);
    k[2 * N + i] = Rational(-2);
    r.K.push_back(expo(B.scaled(k)));
  }
  // e for the last letter: [u_i^1]e(-p_i^1)
  const int last = word.back() - 1;
  std::vector<Rational> x(r.space.dim()), y(r.space.dim());
  x[N - 1] = Rational(1);
  y[2 * N - 1] = Rational(-1);
  ExponentForm X = B.scaled(x), Y = B.scaled(y) * Rational(2);
  r.e[last] = expo(Y - X) + expo(Y + X);
  return detail::finish_rep(std::move(r));
}

/// Built-in representation for a Cartan type (sl2 = A1, A2, B2).
inline Rep builtin_rep(const std::string& name) {
  if (name == "sl2" || name == "A1") return builtin_sl2();
  if (name == "A2") return builtin_a2();
  if (name == "B2") return builtin_b2();
  throw ConfigError("no built-in representation named '" + name + "'");
}

// ---------------------------------------------------------------------------
// Relation checks
// ---------------------------------------------------------------------------

/// K_i e_j = q_i^{a_ij} e_j K_i, K_i f_j = q_i^{-a_ij} f_j K_i,
/// [e_i, f_j] = delta_ij (q_i - q_i^{-1})(K_i^{-1} - K_i), [K_i, K_j] = 0.
/// The commutator constant is that of the rescaled generators e = 2 sin(pi b_i^2) E.
inline CheckReport check_quantum_group_relations(const Rep& r) {
  CheckReport rep;
  const int n = r.rank();
  const auto& sp = r.space;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::string ij = std::to_string(i + 1) + std::to_string(j + 1);
      if (r.e[j]) {
        auto res = r.K[i] * *r.e[j] - r.q(i, r.a[i][j]) * (*r.e[j] * r.K[i]);
        rep.add(exact_check(r.label + " K" + ij + " e", "K_i e_j = q_i^{a_ij} e_j K_i", res, sp));
      }
      auto resf = r.K[i] * r.f[j] - r.q(i, -r.a[i][j]) * (r.f[j] * r.K[i]);
      rep.add(exact_check(r.label + " K" + ij + " f", "K_i f_j = q_i^{-a_ij} f_j K_i", resf, sp));
      auto resk = r.K[i] * r.K[j] - r.K[j] * r.K[i];
      rep.add(exact_check(r.label + " K" + ij + " K", "K_i K_j = K_j K_i", resk, sp));
      if (r.e[i]) {
        OpElement rhs = OpElement::zero(sp);
        if (i == j) rhs = (r.q(i) - r.q(i, -1)) * (r.K_pow(i, -1) - r.K[i]);
        auto res = commutator(*r.e[i], r.f[j]) - rhs;
        rep.add(exact_check(r.label + " [e" + std::to_string(i + 1) + ",f" + std::to_string(j + 1) + "]",
                            "[e_i, f_j] = delta_ij (q_i - q_i^-1)(K_i^-1 - K_i)", res, sp));
      }
    }
  return rep;
}

/// q_i-binomial coefficient [m choose k]_{q_i} as an exact PhaseCoeff.
inline PhaseCoeff q_binomial(const Sym& qexp_i, int m, int k) {
  // [n]_q with q = e^{pi i qexp}: reuse q_int via a pseudo-scale whose square is qexp
  auto qi = [&](int t) {
    PhaseCoeff s;
    for (int l = t - 1; l >= 1 - t; l -= 2) s += PhaseCoeff::phase(qexp_i * l);
    return s;
  };
  auto fact = [&](int t) {
    PhaseCoeff f = 1;
    for (int l = 2; l <= t; ++l) f = f * qi(l);
    return f;
  };
  return fact(m).divide(fact(k) * fact(m - k));
}

/// sum_k (-1)^k [1-a_ij choose k]_{q_i} x_i^k x_j x_i^{1-a_ij-k} for x = e or f.
inline OpElement serre_sum(const Rep& r, int i, int j, char kind) {
  const OpElement& xi = r.gen({kind, i});
  const OpElement& xj = r.gen({kind, j});
  const int m = 1 - r.a[i][j];
  OpElement sum = OpElement::zero(r.space);
  for (int k = 0; k <= m; ++k) {
    PhaseCoeff c = q_binomial(r.qexp[i], m, k);
    if (k % 2) c = -c;
    sum += c * (xi.pow_int(k) * xj * xi.pow_int(m - k));
  }
  return sum;
}

inline CheckReport check_serre(const Rep& r, int i, int j) {
  CheckReport rep;
  const std::string tag = std::to_string(i + 1) + std::to_string(j + 1);
  if (r.e[i] && r.e[j])
    rep.add(exact_check(r.label + " Serre e" + tag, "q-Serre relation for e_i, e_j", serre_sum(r, i, j, 'e'), r.space));
  rep.add(exact_check(r.label + " Serre f" + tag, "q-Serre relation for f_i, f_j", serre_sum(r, i, j, 'f'), r.space));
  return rep;
}

inline CheckReport check_all_serre(const Rep& r) {
  CheckReport rep;
  for (int i = 0; i < r.rank(); ++i)
    for (int j = 0; j < r.rank(); ++j)
      if (i != j) rep.merge(check_serre(r, i, j));
  return rep;
}

// ---------------------------------------------------------------------------
// Transcendental generators
// ---------------------------------------------------------------------------

/// Per-generator certificates: e_i and f_i must be q_i^2-chains.
inline CheckReport certify_generators(const Rep& r) {
  CheckReport rep;
  for (const auto& g : r.generators()) {
    auto cert = manifest_positivity_certificate(r.gen(g), r.qexp[g.node]);
    CheckResult c;
    c.name = r.label + " certificate " + g.str();
    c.anchor = "positive coefficients, pairwise q_i^2-commuting terms";
    c.status = cert.ok ? Status::Pass : Status::Fail;
    c.detail = cert.failure;
    rep.add(c);
  }
  return rep;
}

/// Transcendental generators x^{1/b_i^2}. On a q_i^2-chain the power acts term
/// by term (in the simply-laced case this is the swap b -> 1/b); sums whose
/// parts only q_i^4-commute are powered through recursive splits. The result
/// carries the Langlands-dual relation data.
inline Rep tilde_rep(const Rep& r) {
  Rep t = r;
  t.label = r.label + "~";
  t.tilde = !r.tilde;
  const int n = r.rank();
  std::vector<Sym> scales = {Sym::bl(), Sym::bs()};
  if (r.tilde) scales = {Sym::bl_inv(), Sym::bs_inv()};
  for (int i = 0; i < n; ++i) {
    const Sym s = r.scale[i];
    const Sym inv2 = s.dual_swap() * s.dual_swap();  // b_i^{-2}
    auto power = [&](const Gen& g) {
      std::string why;
      auto p = termwise_power(r.gen(g), inv2, scales, &why);
      if (!p) throw std::invalid_argument("tilde_rep: generator " + g.str() + " is not certified positive: " + why);
      return *p;
    };
    if (r.e[i]) t.e[i] = power({'e', i});
    t.f[i] = power({'f', i});
    t.K[i] = power({'K', i});
    t.L[i] = t.K[i].terms()[0].exp;
    t.qexp[i] = inv2;
    t.scale[i] = s.dual_swap();
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.a[i][j] = r.a[j][i];
  return t;
}

/// Every generator is a flat q_i^2-chain or splits recursively.
inline CheckReport certify_generators_recursive(const Rep& r) {
  CheckReport rep;
  std::vector<Sym> scales = {Sym::bl(), Sym::bs()};
  for (const auto& g : r.generators()) {
    std::string why;
    CheckResult c;
    c.name = r.label + " positive split " + g.str();
    c.anchor = "generator is a sum of q-commuting positive parts";
    const auto& x = r.gen(g);
    const Sym s = r.scale[g.node];
    bool ok = manifest_positivity_certificate(x, r.qexp[g.node]).ok ||
              termwise_power(x, s.dual_swap() * s.dual_swap(), scales, &why).has_value();
    c.status = ok ? Status::Pass : Status::Fail;
    c.detail = why;
    rep.add(c);
  }
  return rep;
}

inline CheckReport transcendental_check(const Rep& r) {
  CheckReport rep = certify_generators_recursive(r);
  if (!rep.all_pass()) return rep;
  Rep t = tilde_rep(r);
  rep.merge(check_quantum_group_relations(t));
  rep.merge(check_all_serre(t));
  return rep;
}

// ---------------------------------------------------------------------------
// Tensor products and Hopf structure
// ---------------------------------------------------------------------------

/// Several copies of a representation space with leg embeddings.
struct TensorAlgebra {
  Space space;
  std::vector<Space> factors;
  std::vector<std::size_t> coord_off;
  std::vector<std::size_t> param_off;

  explicit TensorAlgebra(const std::vector<Space>& fs) : space(tensor_space(fs)), factors(fs) {
    std::size_t c = 0, p = 0;
    for (const auto& f : fs) {
      coord_off.push_back(c);
      param_off.push_back(p);
      c += f.n();
      p += f.m();
    }
  }
  TensorAlgebra(const Space& s, int copies) : TensorAlgebra(std::vector<Space>(static_cast<std::size_t>(copies), s)) {}

  [[nodiscard]] int legs() const { return static_cast<int>(factors.size()); }

  [[nodiscard]] ExponentForm embed(int leg, const ExponentForm& e) const {
    ExponentForm r(space.n(), space.m());
    const auto& f = factors.at(leg);
    for (std::size_t k = 0; k < f.n(); ++k) {
      r.pos(coord_off[leg] + k) = e.pos(k);
      r.mom(coord_off[leg] + k) = e.mom(k);
    }
    for (std::size_t i = 0; i < f.m(); ++i) r.par(param_off[leg] + i) = e.par(i);
    return r;
  }
  [[nodiscard]] OpElement embed(int leg, const OpElement& x) const {
    if (x.is_zero()) return OpElement::zero(space);
    return x.map_exponents([&](const ExponentForm& e) { return embed(leg, e); });
  }
  /// x_1 (x) x_2 (x) ... with one element per leg.
  [[nodiscard]] OpElement tensor(const std::vector<OpElement>& xs) const {
    OpElement r = OpElement::one(space);
    for (int l = 0; l < legs(); ++l) r = r * embed(l, xs.at(l));
    return r;
  }
  [[nodiscard]] OpElement one() const { return OpElement::one(space); }
};

/// Delta(g) placed on legs (a, b) of a tensor algebra; `flip` gives Delta'.
inline OpElement coproduct(const Rep& r, const TensorAlgebra& ta, const Gen& g, int a = 0, int b = 1, bool flip = false) {
  if (flip) std::swap(a, b);
  const int i = g.node;
  if (g.kind == 'K') return ta.embed(a, r.K[i]) * ta.embed(b, r.K[i]);
  const OpElement& x = r.gen(g);
  return ta.embed(a, r.K_pow(i, Rational(-1, 2))) * ta.embed(b, x) + ta.embed(a, x) * ta.embed(b, r.K_pow(i, Rational(1, 2)));
}

/// Counit on generators: 0 for e_i, f_i and 1 for K_i.
inline int counit(const Gen& g) { return g.kind == 'K' ? 1 : 0; }

/// S(e_i) = -q_i e_i, S(f_i) = -q_i^{-1} f_i, S(K_i) = K_i^{-1}.
inline OpElement antipode(const Rep& r, const Gen& g) {
  switch (g.kind) {
    case 'e': return -(r.q(g.node) * r.gen(g));
    case 'f': return -(r.q(g.node, -1) * r.gen(g));
    default: return r.K_pow(g.node, -1);
  }
}

/// Scalar prefactor of the antipode on the complex power e^{i t / b}: e^{-pi Q t}.
inline std::complex<double> antipode_power_prefactor(std::complex<double> t, double b) {
  const double Q = b + 1.0 / b;
  return std::exp(-std::numbers::pi * Q * t);
}

}  // namespace qrop
