#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrop/phase.hpp"

namespace qrop {

/// Names and leg assignment of the variables of an operator algebra: canonical
/// pairs (u_k, p_k) and central parameters lambda_i. Tensor products of
/// representations concatenate spaces and remember which leg each variable
/// came from.
struct Space {
  std::vector<std::string> coords;  ///< position names; momenta are "p_" + name
  std::vector<std::string> params;  ///< central parameter names
  std::vector<int> coord_leg;
  std::vector<int> param_leg;
  int legs = 1;

  [[nodiscard]] std::size_t n() const { return coords.size(); }
  [[nodiscard]] std::size_t m() const { return params.size(); }
  [[nodiscard]] std::size_t dim() const { return 2 * n() + m(); }

  static Space make(std::vector<std::string> coords, std::vector<std::string> params) {
    Space s;
    s.coord_leg.assign(coords.size(), 0);
    s.param_leg.assign(params.size(), 0);
    s.coords = std::move(coords);
    s.params = std::move(params);
    return s;
  }

  /// Name of variable index v in the layout [u..., p..., lambda...].
  [[nodiscard]] std::string var_name(std::size_t v) const {
    if (v < n()) return coords[v];
    if (v < 2 * n()) return "p_" + coords[v - n()];
    return params[v - 2 * n()];
  }

  [[nodiscard]] std::optional<std::size_t> coord_index(const std::string& name) const {
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i] == name) return i;
    return std::nullopt;
  }
  [[nodiscard]] std::optional<std::size_t> param_index(const std::string& name) const {
    for (std::size_t i = 0; i < params.size(); ++i)
      if (params[i] == name) return i;
    return std::nullopt;
  }

  friend bool operator==(const Space&, const Space&) = default;
};

/// Tensor product of spaces; variables of leg k get the suffix "#k" (1-based).
inline Space tensor_space(const std::vector<Space>& factors) {
  Space s;
  int leg = 0;
  for (const auto& f : factors) {
    for (std::size_t i = 0; i < f.n(); ++i) {
      s.coords.push_back(f.coords[i] + "#" + std::to_string(leg + 1));
      s.coord_leg.push_back(leg);
    }
    for (std::size_t i = 0; i < f.m(); ++i) {
      s.params.push_back(f.params[i] + "#" + std::to_string(leg + 1));
      s.param_leg.push_back(leg);
    }
    ++leg;
  }
  s.legs = leg;
  return s;
}

/// Linear form a.u + c.p + l.lambda (coefficients in Sym), the body of a
/// Weyl-ordered exponential e^{pi(a.u + c.p + l.lambda)}. Layout of the
/// coefficient vector: [a_1..a_n, c_1..c_n, l_1..l_m].
class ExponentForm {
public:
  ExponentForm() = default;
  ExponentForm(std::size_t n, std::size_t m) : n_(n), c_(2 * n + m) {}

  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] std::size_t m() const { return c_.size() - 2 * n_; }
  [[nodiscard]] std::size_t dim() const { return c_.size(); }

  [[nodiscard]] const Sym& pos(std::size_t k) const { return c_[k]; }
  [[nodiscard]] const Sym& mom(std::size_t k) const { return c_[n_ + k]; }
  [[nodiscard]] const Sym& par(std::size_t i) const { return c_[2 * n_ + i]; }
  Sym& pos(std::size_t k) { return c_[k]; }
  Sym& mom(std::size_t k) { return c_[n_ + k]; }
  Sym& par(std::size_t i) { return c_[2 * n_ + i]; }
  [[nodiscard]] const Sym& operator[](std::size_t v) const { return c_[v]; }
  Sym& operator[](std::size_t v) { return c_[v]; }

  [[nodiscard]] bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Sym& s) { return s.is_zero(); });
  }
  [[nodiscard]] bool has_momentum() const {
    for (std::size_t k = 0; k < n_; ++k)
      if (!mom(k).is_zero()) return true;
    return false;
  }

  friend ExponentForm operator+(const ExponentForm& x, const ExponentForm& y) {
    check(x, y);
    ExponentForm r = x;
    for (std::size_t v = 0; v < r.c_.size(); ++v)
      if (!y.c_[v].is_zero()) r.c_[v] += y.c_[v];
    return r;
  }
  friend ExponentForm operator-(const ExponentForm& x) {
    ExponentForm r = x;
    for (auto& s : r.c_) s = -s;
    return r;
  }
  friend ExponentForm operator-(const ExponentForm& x, const ExponentForm& y) { return x + (-y); }
  friend ExponentForm operator*(const ExponentForm& x, const Rational& k) {
    ExponentForm r = x;
    for (auto& s : r.c_) s = s * k;
    return r;
  }
  friend ExponentForm operator*(const ExponentForm& x, const Sym& k) {
    ExponentForm r = x;
    for (auto& s : r.c_) s = s * k;
    return r;
  }

  friend bool operator==(const ExponentForm&, const ExponentForm&) = default;
  friend std::strong_ordering operator<=>(const ExponentForm& x, const ExponentForm& y) {
    return std::lexicographical_compare_three_way(x.c_.begin(), x.c_.end(), y.c_.begin(), y.c_.end());
  }

  /// Symplectic pairing omega(X, Y) = sum_k (a_k c'_k - c_k a'_k).
  friend Sym omega(const ExponentForm& x, const ExponentForm& y) {
    check(x, y);
    Sym r;
    for (std::size_t k = 0; k < x.n_; ++k) {
      if (!x.pos(k).is_zero() && !y.mom(k).is_zero()) r += x.pos(k) * y.mom(k);
      if (!x.mom(k).is_zero() && !y.pos(k).is_zero()) r -= x.mom(k) * y.pos(k);
    }
    return r;
  }

  [[nodiscard]] std::string str(const Space& sp) const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t v = 0; v < c_.size(); ++v) {
      if (c_[v].is_zero()) continue;
      std::string s = c_[v].str();
      const bool single = c_[v].terms().size() == 1;
      if (single && s[0] == '-') {
        os << (first ? "-" : " - ");
        s = s.substr(1);
      } else if (!first) {
        os << " + ";
      }
      if (!single) os << "(" << s << ")*" << sp.var_name(v);
      else if (s == "1") os << sp.var_name(v);
      else os << s << "*" << sp.var_name(v);
      first = false;
    }
    if (first) os << "0";
    return os.str();
  }

private:
  static void check(const ExponentForm& x, const ExponentForm& y) {
    if (x.n_ != y.n_ || x.c_.size() != y.c_.size()) throw std::invalid_argument("ExponentForm: space mismatch");
  }
  std::size_t n_ = 0;
  std::vector<Sym> c_;
};

struct Monomial {
  PhaseCoeff coeff;
  ExponentForm exp;
};

/// Phase exponent theta of the Weyl product: e^X e^Y = e^{pi i theta} e^{X+Y}.
inline Sym product_phase(const ExponentForm& x, const ExponentForm& y) { return omega(x, y) * Rational(1, 4); }

/// Exponent theta with e^X e^Y = e^{2 pi i theta} e^Y e^X.
inline Sym exchange_phase(const ExponentForm& x, const ExponentForm& y) { return omega(x, y) * Rational(1, 4); }

/// Finite sum of Weyl-ordered exponentials with PhaseCoeff coefficients, kept
/// sorted by exponent with equal exponents merged and zero terms dropped.
class OpElement {
public:
  OpElement() = default;
  OpElement(std::size_t n, std::size_t m) : n_(n), m_(m) {}
  explicit OpElement(const ExponentForm& e, PhaseCoeff c = 1) : n_(e.n()), m_(e.m()) {
    if (!c.is_zero()) terms_.push_back({std::move(c), e});
  }
  static OpElement one(std::size_t n, std::size_t m) { return OpElement(ExponentForm(n, m)); }
  static OpElement one(const Space& s) { return one(s.n(), s.m()); }
  static OpElement zero(const Space& s) { return OpElement(s.n(), s.m()); }

  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] std::size_t m() const { return m_; }
  [[nodiscard]] const std::vector<Monomial>& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] bool is_monomial() const { return terms_.size() == 1; }
  [[nodiscard]] OpElement term(std::size_t i) const { return OpElement(terms_[i].exp, terms_[i].coeff); }

  /// Build from an arbitrary list of monomials (merged and sorted).
  static OpElement from_terms(std::size_t n, std::size_t m, std::vector<Monomial> ts) {
    OpElement r(n, m);
    r.terms_ = std::move(ts);
    r.canonicalize();
    return r;
  }

  friend OpElement operator+(const OpElement& x, const OpElement& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    check(x, y);
    OpElement r(x.n_, x.m_);
    r.terms_.reserve(x.terms_.size() + y.terms_.size());
    auto i = x.terms_.begin();
    auto j = y.terms_.begin();
    while (i != x.terms_.end() || j != y.terms_.end()) {
      if (j == y.terms_.end() || (i != x.terms_.end() && i->exp < j->exp)) {
        r.terms_.push_back(*i++);
      } else if (i == x.terms_.end() || j->exp < i->exp) {
        r.terms_.push_back(*j++);
      } else {
        PhaseCoeff c = i->coeff + j->coeff;
        if (!c.is_zero()) r.terms_.push_back({std::move(c), i->exp});
        ++i;
        ++j;
      }
    }
    return r;
  }
  friend OpElement operator-(const OpElement& x) {
    OpElement r = x;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }
  friend OpElement operator-(const OpElement& x, const OpElement& y) { return x + (-y); }
  friend OpElement operator*(const PhaseCoeff& c, const OpElement& x) {
    if (c.is_zero()) return OpElement(x.n_, x.m_);
    OpElement r = x;
    for (auto& t : r.terms_) t.coeff = c * t.coeff;
    std::erase_if(r.terms_, [](const Monomial& t) { return t.coeff.is_zero(); });
    return r;
  }
  friend OpElement operator*(const OpElement& x, const PhaseCoeff& c) { return c * x; }
  friend OpElement operator*(const OpElement& x, const OpElement& y) {
    check(x, y);
    std::vector<Monomial> out;
    out.reserve(x.terms_.size() * y.terms_.size());
    for (const auto& a : x.terms_)
      for (const auto& b : y.terms_)
        out.push_back({a.coeff * b.coeff * PhaseCoeff::phase(product_phase(a.exp, b.exp)), a.exp + b.exp});
    return from_terms(x.n_, x.m_, std::move(out));
  }
  OpElement& operator+=(const OpElement& o) { return *this = *this + o; }
  OpElement& operator-=(const OpElement& o) { return *this = *this - o; }
  OpElement& operator*=(const OpElement& o) { return *this = *this * o; }

  friend bool operator==(const OpElement& x, const OpElement& y) {
    if (x.is_zero() && y.is_zero()) return true;
    if (x.terms_.size() != y.terms_.size()) return false;
    for (std::size_t i = 0; i < x.terms_.size(); ++i)
      if (!(x.terms_[i].exp == y.terms_[i].exp) || !(x.terms_[i].coeff == y.terms_[i].coeff)) return false;
    return true;
  }

  /// Divide every coefficient exactly by d.
  [[nodiscard]] OpElement divide(const PhaseCoeff& d) const {
    OpElement r = *this;
    for (auto& t : r.terms_) t.coeff = t.coeff.divide(d);
    return r;
  }

  /// Power with rational exponent; only defined for single monomials with
  /// trivial phase coefficient (e.g. K_i^{1/2}).
  [[nodiscard]] OpElement pow(Rational k) const {
    if (terms_.size() != 1 || !terms_[0].coeff.is_one())
      throw std::invalid_argument("OpElement::pow: only pure exponentials have rational powers");
    return OpElement(terms_[0].exp * k);
  }
  [[nodiscard]] OpElement pow_int(int k) const {
    if (k < 0) throw std::invalid_argument("OpElement::pow_int: negative power");
    OpElement r = one(n_, m_);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Numeric evaluation of all coefficients is not meaningful; this maps each
  /// exponent form through a function (used for substitutions).
  template <class F>
  [[nodiscard]] OpElement map_exponents(F&& f) const {
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({t.coeff, f(t.exp)});
    if (out.empty()) return *this;
    const std::size_t n = out[0].exp.n();
    const std::size_t m = out[0].exp.m();
    return from_terms(n, m, std::move(out));
  }

  [[nodiscard]] std::string str(const Space& sp) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) os << " + ";
      if (!terms_[i].coeff.is_one()) os << "(" << terms_[i].coeff.str() << ")*";
      os << "e^{pi(" << terms_[i].exp.str(sp) << ")}";
    }
    return os.str();
  }

private:
  static void check(const OpElement& x, const OpElement& y) {
    if (x.n_ != y.n_ || x.m_ != y.m_) throw std::invalid_argument("OpElement: space mismatch");
  }
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Monomial& a, const Monomial& b) { return a.exp < b.exp; });
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().exp == t.exp) out.back().coeff += t.coeff;
      else out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Monomial& t) { return t.coeff.is_zero(); });
    terms_ = std::move(out);
  }

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<Monomial> terms_;
};

/// Generic variable names u0.., p_u0.., l0.. for printing without a Space.
inline Space default_space(std::size_t n, std::size_t m) {
  std::vector<std::string> c, p;
  for (std::size_t i = 0; i < n; ++i) c.push_back("u" + std::to_string(i));
  for (std::size_t i = 0; i < m; ++i) p.push_back("l" + std::to_string(i));
  return Space::make(c, p);
}

inline std::ostream& operator<<(std::ostream& os, const OpElement& x) { return os << x.str(default_space(x.n(), x.m())); }

/// Convenience: single exponential e^{pi X}.
inline OpElement expo(const ExponentForm& x) { return OpElement(x); }

/// Star structure: conjugate the coefficients, keep the (real) exponents.
inline OpElement adjoint(const OpElement& x) {
  std::vector<Monomial> out;
  out.reserve(x.size());
  for (const auto& t : x.terms()) out.push_back({t.coeff.conj(), t.exp});
  return OpElement::from_terms(x.n(), x.m(), std::move(out));
}

inline OpElement commutator(const OpElement& x, const OpElement& y) { return x * y - y * x; }

/// (e^{pi i s} x y - e^{-pi i s} y x) / divisor, exact.
inline OpElement q_commutator_div(const OpElement& x, const OpElement& y, const Sym& s, const PhaseCoeff& divisor) {
  if (divisor.is_zero()) throw std::domain_error("q_commutator_div: zero divisor");
  OpElement num = PhaseCoeff::phase(s) * (x * y) - PhaseCoeff::phase(-s) * (y * x);
  return num.divide(divisor);
}

/// For monomials x, y: theta with x y = e^{2 pi i theta} y x.
inline Sym exchange_theta(const OpElement& x, const OpElement& y) {
  if (!x.is_monomial() || !y.is_monomial()) throw std::invalid_argument("exchange_theta: monomials expected");
  return exchange_phase(x.terms()[0].exp, y.terms()[0].exp);
}

/// True if theta is an integer (so e^{2 pi i theta} = 1).
inline bool is_integral_phase(const Sym& theta) { return theta.is_constant() && theta.constant_part().is_integer(); }

/// x y == e^{2 pi i theta} y x, checked exactly on whole elements.
inline bool q_commute(const OpElement& x, const OpElement& y, const Sym& theta) {
  return x * y == PhaseCoeff::phase(theta * 2) * (y * x);
}

inline bool commute(const OpElement& x, const OpElement& y) {
  // Fast path: every pair of monomials commutes.
  bool all = true;
  for (const auto& a : x.terms()) {
    for (const auto& b : y.terms())
      if (!is_integral_phase(exchange_phase(a.exp, b.exp) * 2)) {
        all = false;
        break;
      }
    if (!all) break;
  }
  return all || x * y == y * x;
}

/// Affine-linear substitution of variables: each variable v is replaced by the
/// linear form image(v). Parameters must map to themselves.
class LinearSubstitution {
public:
  explicit LinearSubstitution(const Space& sp) : n_(sp.n()), m_(sp.m()) {
    for (std::size_t v = 0; v < sp.dim(); ++v) {
      ExponentForm e(n_, m_);
      e[v] = Sym(1);
      image_.push_back(e);
    }
  }
  /// Replace variable v by the given form (in the same space).
  LinearSubstitution& set(std::size_t v, const ExponentForm& form) {
    image_.at(v) = form;
    return *this;
  }
  [[nodiscard]] const ExponentForm& image(std::size_t v) const { return image_.at(v); }
  [[nodiscard]] std::size_t dim() const { return image_.size(); }

  [[nodiscard]] ExponentForm apply(const ExponentForm& x) const {
    ExponentForm r(n_, m_);
    for (std::size_t v = 0; v < x.dim(); ++v) {
      if (x[v].is_zero()) continue;
      for (std::size_t w = 0; w < r.dim(); ++w)
        if (!image_[v][w].is_zero()) r[w] += x[v] * image_[v][w];
    }
    return r;
  }

  /// omega is preserved and parameters are fixed.
  [[nodiscard]] bool is_symplectic() const {
    for (std::size_t i = 2 * n_; i < image_.size(); ++i) {
      ExponentForm e(n_, m_);
      e[i] = Sym(1);
      if (!(image_[i] == e)) return false;
    }
    for (std::size_t a = 0; a < 2 * n_; ++a)
      for (std::size_t b = a + 1; b < 2 * n_; ++b) {
        ExponentForm ea(n_, m_), eb(n_, m_);
        ea[a] = Sym(1);
        eb[b] = Sym(1);
        if (!(omega(image_[a], image_[b]) == omega(ea, eb))) return false;
      }
    return true;
  }

  /// Composition: (this o other)(x) = this(other(x)) on forms.
  [[nodiscard]] LinearSubstitution then(const LinearSubstitution& next) const {
    LinearSubstitution r = *this;
    for (std::size_t v = 0; v < image_.size(); ++v) r.image_[v] = next.apply(image_[v]);
    return r;
  }

private:
  std::size_t n_;
  std::size_t m_;
  std::vector<ExponentForm> image_;
};

class InvalidSubstitutionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline OpElement substitute_linear(const OpElement& x, const LinearSubstitution& s) {
  if (!s.is_symplectic()) throw InvalidSubstitutionError("substitute_linear: map does not preserve omega");
  return x.map_exponents([&](const ExponentForm& e) { return s.apply(e); });
}

// ---------------------------------------------------------------------------
// Manifest positivity
// ---------------------------------------------------------------------------

/// Finite stand-in for "positive essentially self-adjoint": positive rational
/// coefficients on monomials that pairwise q-commute in a fixed order
/// (T_j T_k = e^{2 pi i q_power} T_k T_j for j < k), or a product of such
/// chains living on different tensor legs.
struct PositivityCertificate {
  bool ok = false;
  std::string failure;
  struct Chain {
    std::vector<std::size_t> order;  ///< indices into the monomials of `element`
    Sym q_power;
    OpElement element;
  };
  std::vector<Chain> factors;  ///< one chain, or one per tensor leg
};

namespace detail {

inline PositivityCertificate chain_certificate(const OpElement& x, const std::optional<Sym>& q_power) {
  PositivityCertificate cert;
  if (x.is_zero()) {
    cert.failure = "zero element";
    return cert;
  }
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x.terms()[i].coeff.is_positive_rational()) {
      cert.failure = "coefficient of term " + std::to_string(i) + " is not a positive rational: " + x.terms()[i].coeff.str();
      return cert;
    }
  const std::size_t n = x.size();
  if (n == 1) {
    cert.ok = true;
    cert.factors.push_back({{0}, q_power.value_or(Sym{}), x});
    return cert;
  }
  std::vector<std::vector<Sym>> th(n, std::vector<Sym>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (j != k) th[j][k] = exchange_phase(x.terms()[j].exp, x.terms()[k].exp);
  Sym qp;
  if (q_power) {
    qp = *q_power;
  } else {
    qp = th[0][1].eval(kOrderingB) > 0 ? th[0][1] : th[1][0];
  }
  auto matches = [&](const Sym& t) {
    Sym d = t - qp;
    return d.is_constant() && d.constant_part().is_integer();
  };
  std::vector<std::size_t> order(n);
  std::vector<int> wins(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    order[j] = j;
    for (std::size_t k = 0; k < n; ++k)
      if (j != k && matches(th[j][k])) ++wins[j];
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return wins[a] > wins[b]; });
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t c = a + 1; c < n; ++c)
      if (!matches(th[order[a]][order[c]])) {
        cert.failure = "terms " + std::to_string(order[a]) + " and " + std::to_string(order[c]) +
                       " violate the chain relation (theta = " + th[order[a]][order[c]].str() + ", expected " + qp.str() + ")";
        return cert;
      }
  cert.ok = true;
  cert.factors.push_back({order, qp, x});
  return cert;
}

}  // namespace detail

/// Chain certificate in the whole space.
inline PositivityCertificate manifest_positivity_certificate(const OpElement& x, const std::optional<Sym>& q_power = std::nullopt) {
  return detail::chain_certificate(x, q_power);
}

inline bool certify_positive_structure(const OpElement& x, std::string* why = nullptr);

/// Chain certificate, or a factorisation into per-leg positive factors of a
/// tensor space (each leg a chain or a structural certificate).
inline PositivityCertificate certify_positive(const OpElement& x, const Space& sp) {
  PositivityCertificate whole = detail::chain_certificate(x, std::nullopt);
  if (whole.ok || sp.legs <= 1) return whole;

  // Split exponents into leg projections and test for a rank-one coefficient tensor.
  auto project = [&](const ExponentForm& e, int leg) {
    ExponentForm r(e.n(), e.m());
    for (std::size_t k = 0; k < sp.n(); ++k)
      if (sp.coord_leg[k] == leg) {
        r.pos(k) = e.pos(k);
        r.mom(k) = e.mom(k);
      }
    for (std::size_t i = 0; i < sp.m(); ++i)
      if (sp.param_leg[i] == leg) r.par(i) = e.par(i);
    return r;
  };
  PositivityCertificate cert;
  OpElement rest = x;
  for (int leg = 0; leg < sp.legs; ++leg) {
    std::map<ExponentForm, std::vector<std::size_t>> by_proj;
    for (std::size_t i = 0; i < rest.size(); ++i) by_proj[project(rest.terms()[i].exp, leg)].push_back(i);
    // rest = sum_a y_a * z_a with z_a the complementary monomial sums; rank one
    // requires all z_a proportional.
    const ExponentForm& p0 = by_proj.begin()->first;
    std::map<ExponentForm, PhaseCoeff> base;  // complement exponent -> coeff for a0
    for (auto i : by_proj.begin()->second) base[rest.terms()[i].exp - p0] = rest.terms()[i].coeff;
    std::vector<Monomial> leg_terms;
    for (const auto& [p, idx] : by_proj) {
      if (idx.size() != base.size()) {
        cert.failure = "not a product across tensor legs";
        return cert;
      }
      std::optional<PhaseCoeff> ratio;
      for (auto i : idx) {
        auto it = base.find(rest.terms()[i].exp - p);
        if (it == base.end()) {
          cert.failure = "not a product across tensor legs";
          return cert;
        }
        PhaseCoeff r;
        try {
          r = rest.terms()[i].coeff.divide(it->second);
        } catch (const std::exception&) {
          cert.failure = "coefficient tensor is not rank one";
          return cert;
        }
        if (ratio && !(*ratio == r)) {
          cert.failure = "coefficient tensor is not rank one";
          return cert;
        }
        ratio = r;
      }
      leg_terms.push_back({*ratio, p});
    }
    OpElement leg_elem = OpElement::from_terms(x.n(), x.m(), std::move(leg_terms));
    std::vector<Monomial> rest_terms;
    for (const auto& [e, c] : base) rest_terms.push_back({c, e});
    rest = OpElement::from_terms(x.n(), x.m(), std::move(rest_terms));
    auto c = detail::chain_certificate(leg_elem, std::nullopt);
    if (c.ok) {
      cert.factors.push_back(c.factors[0]);
      continue;
    }
    std::string why;
    if (!certify_positive_structure(leg_elem, &why)) {
      c.failure = "leg " + std::to_string(leg + 1) + ": " + c.failure + "; " + why;
      return c;
    }
    cert.factors.push_back({{}, Sym(), leg_elem});
  }
  if (!(rest == OpElement::one(x.n(), x.m()))) {
    cert.failure = "leg factorisation left a remainder";
    return cert;
  }
  cert.ok = true;
  return cert;
}

// ---------------------------------------------------------------------------
// Recursive positivity splits and term-wise powers
// ---------------------------------------------------------------------------

/// A split x = U + V in which every term of U and every term of V satisfy
/// T_u T_v = e^{2 pi i theta} T_v T_u with one common theta (eval > 0). Flat
/// q^2-chains are the special case where U is a single term at each level.
struct PositivitySplit {
  bool ok = false;
  std::string failure;
  Sym theta;
  std::vector<std::size_t> left;   ///< indices of U in x
  std::vector<std::size_t> right;  ///< indices of V in x
};

/// Find a split with common exchange theta; components that cannot be
/// separated are merged until a source component exists.
inline PositivitySplit find_positive_split(const OpElement& x) {
  PositivitySplit sp;
  const std::size_t n = x.size();
  if (n < 2) {
    sp.failure = "nothing to split";
    return sp;
  }
  std::vector<std::vector<Sym>> th(n, std::vector<Sym>(n));
  std::vector<Sym> candidates;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      if (j == k) continue;
      th[j][k] = exchange_phase(x.terms()[j].exp, x.terms()[k].exp);
      if (th[j][k].eval(kOrderingB) > 1e-12 && std::find(candidates.begin(), candidates.end(), th[j][k]) == candidates.end())
        candidates.push_back(th[j][k]);
    }
  std::sort(candidates.begin(), candidates.end(), [](const Sym& a, const Sym& b) { return a.eval(kOrderingB) < b.eval(kOrderingB); });
  for (const Sym& c : candidates) {
    std::vector<std::size_t> comp(n);
    for (std::size_t i = 0; i < n; ++i) comp[i] = i;
    auto find = [&](std::size_t i) {
      while (comp[i] != i) i = comp[i] = comp[comp[i]];
      return i;
    };
    const Sym mc = -c;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (!(th[j][k] == c) && !(th[j][k] == mc)) comp[find(j)] = find(k);
    // merge components whose cross relations disagree in orientation
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t j = 0; j < n && !changed; ++j)
        for (std::size_t k = 0; k < n && !changed; ++k) {
          if (find(j) == find(k)) continue;
          for (std::size_t j2 = 0; j2 < n && !changed; ++j2)
            for (std::size_t k2 = 0; k2 < n && !changed; ++k2)
              if (find(j2) == find(j) && find(k2) == find(k) && !(th[j2][k2] == th[j][k])) {
                comp[find(j)] = find(k);
                changed = true;
              }
        }
    }
    // a source component: every cross relation from it is +c
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i)
      if (find(i) == i) roots.push_back(i);
    if (roots.size() < 2) continue;
    for (std::size_t r : roots) {
      bool source = true;
      for (std::size_t j = 0; j < n && source; ++j)
        for (std::size_t k = 0; k < n && source; ++k)
          if (find(j) == r && find(k) != r && !(th[j][k] == c)) source = false;
      if (!source) continue;
      sp.ok = true;
      sp.theta = c;
      for (std::size_t i = 0; i < n; ++i) (find(i) == r ? sp.left : sp.right).push_back(i);
      return sp;
    }
  }
  sp.failure = "no split with a common q-relation";
  return sp;
}

inline OpElement sub_element(const OpElement& x, const std::vector<std::size_t>& idx) {
  std::vector<Monomial> t;
  for (auto i : idx) t.push_back(x.terms()[i]);
  return OpElement::from_terms(x.n(), x.m(), std::move(t));
}

/// If x = y^2 for an element y with unit coefficients, return y. The unit
/// coefficient terms of a square are exactly the squares of the terms of y
/// (cross terms carry q^t + q^-t or 2), which pins down the candidate.
inline std::optional<OpElement> square_root(const OpElement& x) {
  std::vector<Monomial> diag;
  for (const auto& t : x.terms())
    if (t.coeff.is_one()) diag.push_back({PhaseCoeff(1), t.exp * Rational(1, 2)});
  if (diag.size() < 2 || diag.size() == x.size()) return std::nullopt;
  OpElement y = OpElement::from_terms(x.n(), x.m(), std::move(diag));
  if (!(y * y == x)) return std::nullopt;
  return y;
}

/// Structural positivity: x is a positive monomial, a split U + V into
/// positive parts with one common q-relation, or the square of such an
/// element. Extends the flat chain certificate to elements whose cross terms
/// carry q-integer coefficients.
inline bool certify_positive_structure(const OpElement& x, std::string* why) {
  if (x.is_zero()) {
    if (why) *why = "zero element";
    return false;
  }
  if (x.is_monomial()) {
    if (x.terms()[0].coeff.is_positive_rational()) return true;
    if (why) *why = "monomial coefficient is not a positive rational: " + x.terms()[0].coeff.str();
    return false;
  }
  if (manifest_positivity_certificate(x).ok) return true;
  PositivitySplit sp = find_positive_split(x);
  if (sp.ok && certify_positive_structure(sub_element(x, sp.left), why) && certify_positive_structure(sub_element(x, sp.right), why))
    return true;
  if (auto y = square_root(x)) return certify_positive_structure(*y, why);
  if (why && why->empty()) *why = sp.ok ? "split parts are not positive" : sp.failure;
  return false;
}

/// Power x^k of a positive element with unit coefficients, computed through
/// recursive splits: if U V = e^{2 pi i s^2} V U and k = r / s^2 with r a
/// positive integer, then (U + V)^k = (U^{1/s^2} + V^{1/s^2})^r. The scale s
/// is taken from `scales` (e.g. b_l and b_s).
inline std::optional<OpElement> termwise_power(const OpElement& x, const Sym& k, const std::vector<Sym>& scales, std::string* why = nullptr) {
  auto fail = [&](std::string msg) -> std::optional<OpElement> {
    if (why) *why = std::move(msg);
    return std::nullopt;
  };
  if (x.is_zero()) return fail("zero element");
  if (x.is_monomial()) {
    if (!x.terms()[0].coeff.is_one()) return fail("leaf coefficient is not 1: " + x.terms()[0].coeff.str());
    return OpElement(x.terms()[0].exp * k);
  }
  PositivitySplit sp = find_positive_split(x);
  bool unit = true;
  for (const auto& t : x.terms()) unit = unit && t.coeff.is_one();
  if (!unit || !sp.ok) {
    if (auto y = square_root(x)) return termwise_power(*y, k * Rational(2), scales, why);
    if (!sp.ok) return fail(sp.failure);
  }
  for (const Sym& s : scales) {
    const Sym s2 = s * s;
    if (!(sp.theta == s2)) continue;
    const Sym r = k * s2;
    if (!r.is_constant() || !r.constant_part().is_integer() || r.constant_part() < Rational(1))
      return fail("power " + k.str() + " is not a positive integer multiple of 1/" + s2.str());
    const Sym inv = Sym(1) * (s.dual_swap() * s.dual_swap());
    auto u = termwise_power(sub_element(x, sp.left), inv, scales, why);
    auto v = termwise_power(sub_element(x, sp.right), inv, scales, why);
    if (!u || !v) return std::nullopt;
    return (*u + *v).pow_int(static_cast<int>(r.constant_part().num()));
  }
  return fail("split relation " + sp.theta.str() + " is not q_s^2 for any known scale");
}

}  // namespace qrop
