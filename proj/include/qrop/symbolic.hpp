#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrop/rational.hpp"

namespace qrop {

/// Exponent key of a monomial b_l^l * b_s^s. In canonical form s is 0 or 1:
/// the relation b_s^2 = b_l^2 / 2 is always applied.
struct SymKey {
  int l = 0;
  int s = 0;
  friend auto operator<=>(const SymKey&, const SymKey&) = default;
};

/// Exact Laurent polynomial in the two root-length symbols b_l and b_s with
/// rational coefficients, reduced modulo b_s^2 = b_l^2/2.
///
/// Used both for the coefficients of exponent forms (degree +-1 in practice)
/// and for phase exponents (degree 0 and +-2).
class Sym {
public:
  using Term = std::pair<SymKey, Rational>;

  Sym() = default;
  Sym(Rational c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) terms_.push_back({SymKey{0, 0}, c});
  }
  Sym(std::int64_t c) : Sym(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static Sym monomial(int l, int s, Rational c = 1) {
    Sym r;
    r.add_term(l, s, c);
    r.canonicalize();
    return r;
  }
  static Sym bl(Rational c = 1) { return monomial(1, 0, c); }
  static Sym bs(Rational c = 1) { return monomial(0, 1, c); }
  static Sym bl_inv(Rational c = 1) { return monomial(-1, 0, c); }
  static Sym bs_inv(Rational c = 1) { return monomial(0, -1, c); }

  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first == SymKey{0, 0});
  }
  [[nodiscard]] Rational constant_part() const {
    for (const auto& [k, c] : terms_)
      if (k == SymKey{0, 0}) return c;
    return 0;
  }
  [[nodiscard]] Sym without_constant() const {
    Sym r;
    for (const auto& t : terms_)
      if (!(t.first == SymKey{0, 0})) r.terms_.push_back(t);
    return r;
  }

  /// Numeric value with b_l = b and b_s = b / sqrt(2).
  [[nodiscard]] double eval(double b) const {
    const double bs = b / std::sqrt(2.0);
    double v = 0;
    for (const auto& [k, c] : terms_) v += c.to_double() * std::pow(b, k.l) * std::pow(bs, k.s);
    return v;
  }

  friend Sym operator+(const Sym& a, const Sym& b) {
    Sym r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
        r.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || j->first < i->first) {
        r.terms_.push_back(*j++);
      } else {
        Rational c = i->second + j->second;
        if (!c.is_zero()) r.terms_.push_back({i->first, c});
        ++i;
        ++j;
      }
    }
    return r;
  }
  friend Sym operator-(const Sym& a) {
    Sym r = a;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }
  friend Sym operator-(const Sym& a, const Sym& b) { return a + (-b); }
  friend Sym operator*(const Sym& a, const Sym& b) {
    Sym r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) r.add_term(ka.l + kb.l, ka.s + kb.s, ca * cb);
    r.canonicalize();
    return r;
  }
  friend Sym operator*(const Sym& a, const Rational& c) {
    if (c.is_zero()) return {};
    Sym r = a;
    for (auto& t : r.terms_) t.second *= c;
    return r;
  }
  friend Sym operator*(const Rational& c, const Sym& a) { return a * c; }
  friend Sym operator/(const Sym& a, const Rational& c) { return a * (Rational(1) / c); }
  friend Sym operator*(const Sym& a, int c) { return a * Rational(c); }
  friend Sym operator*(int c, const Sym& a) { return a * Rational(c); }
  Sym& operator+=(const Sym& o) { return *this = *this + o; }
  Sym& operator-=(const Sym& o) { return *this = *this - o; }
  Sym& operator*=(const Sym& o) { return *this = *this * o; }

  friend bool operator==(const Sym& a, const Sym& b) { return a.terms_ == b.terms_; }
  friend std::strong_ordering operator<=>(const Sym& a, const Sym& b) {
    const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (auto c = a.terms_[i].first <=> b.terms_[i].first; c != 0) return c;
      if (auto c = a.terms_[i].second <=> b.terms_[i].second; c != 0) return c;
    }
    return a.terms_.size() <=> b.terms_.size();
  }

  /// The modular-double exchange b_l -> 1/b_l, b_s -> 1/b_s on linear
  /// coefficients (degree +-1). Throws on anything else, where the exchange is
  /// not compatible with the root-length relation.
  [[nodiscard]] Sym dual_swap() const {
    Sym r;
    for (const auto& [k, c] : terms_) {
      if (k == SymKey{1, 0}) {
        r += monomial(-1, 0, c);
      } else if (k == SymKey{-1, 0}) {
        r += monomial(1, 0, c);
      } else if (k == SymKey{0, 1}) {
        r += monomial(0, -1, c);
      } else if (k == SymKey{-2, 1}) {  // c * b_l^-2 b_s = (c/2) b_s^-1
        r += monomial(0, 1, c / 2);
      } else {
        throw std::invalid_argument("Sym::dual_swap: only linear b-coefficients can be exchanged");
      }
    }
    return r;
  }

  [[nodiscard]] std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c0] : terms_) {
      Rational c = c0;
      std::string mono;
      if (k.s == 1 && k.l == -2) {
        c = c * 2;
        mono = "b_s^-1";
      } else {
        if (k.l == 1) mono = "b";
        else if (k.l != 0) mono = "b^" + std::to_string(k.l);
        if (k.s == 1) mono += mono.empty() ? "b_s" : "*b_s";
      }
      const bool neg = c < Rational(0);
      Rational a = neg ? -c : c;
      if (first) os << (neg ? "-" : "");
      else os << (neg ? " - " : " + ");
      if (mono.empty()) os << a.str();
      else if (a == Rational(1)) os << mono;
      else os << a.str() << "*" << mono;
      first = false;
    }
    return os.str();
  }

private:
  void add_term(int l, int s, Rational c) {
    if (c.is_zero()) return;
    // b_s^(2k+r) = 2^-k b_l^(2k) b_s^r
    int r = ((s % 2) + 2) % 2;
    int k = (s - r) / 2;
    Rational f = 1;
    if (k > 0) f = Rational(1, std::int64_t{1} << k);
    else if (k < 0) f = Rational(std::int64_t{1} << (-k));
    terms_.push_back({SymKey{l + 2 * k, r}, c * f});
  }
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    std::vector<Term> out;
    for (const auto& t : terms_) {
      if (!out.empty() && out.back().first == t.first) out.back().second += t.second;
      else out.push_back(t);
    }
    std::erase_if(out, [](const Term& t) { return t.second.is_zero(); });
    terms_ = std::move(out);
  }

  std::vector<Term> terms_;
};

}  // namespace qrop
