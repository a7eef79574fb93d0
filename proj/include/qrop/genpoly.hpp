#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qrop/posrep.hpp"

namespace qrop {

/// Letter of a generator word: e_i, f_i (power 1) or K_i^r.
struct Letter {
  char kind = 'e';
  int node = 0;
  Rational power = 1;
  friend bool operator==(const Letter&, const Letter&) = default;
  friend std::strong_ordering operator<=>(const Letter& a, const Letter& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.node <=> b.node; c != 0) return c;
    return a.power <=> b.power;
  }
  [[nodiscard]] std::string str() const {
    std::string s = std::string(1, kind) + std::to_string(node + 1);
    if (kind == 'K' && !(power == Rational(1))) s += "^" + (power.is_integer() ? power.str() : "(" + power.str() + ")");
    return s;
  }
};

using Word = std::vector<Letter>;

/// Noncommutative polynomial in generator letters with PhaseCoeff
/// coefficients over one common PhaseCoeff denominator. Words are kept with
/// adjacent powers of the same K merged.
class GenPoly {
public:
  GenPoly() = default;
  static GenPoly letter(char kind, int node, Rational power = 1) {
    GenPoly p;
    p.terms_[{Letter{kind, node, power}}] = PhaseCoeff(1);
    return p;
  }
  static GenPoly scalar(PhaseCoeff c) {
    GenPoly p;
    if (!c.is_zero()) p.terms_[Word{}] = std::move(c);
    return p;
  }
  static GenPoly gen(const Gen& g) { return letter(g.kind, g.node); }

  [[nodiscard]] const std::map<Word, PhaseCoeff>& terms() const { return terms_; }
  [[nodiscard]] const PhaseCoeff& den() const { return den_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

  friend GenPoly operator+(const GenPoly& a, const GenPoly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    GenPoly r;
    if (a.den_ == b.den_) {
      r = a;
      for (const auto& [w, c] : b.terms_) r.add(w, c);
    } else {
      r.den_ = a.den_ * b.den_;
      for (const auto& [w, c] : a.terms_) r.add(w, c * b.den_);
      for (const auto& [w, c] : b.terms_) r.add(w, c * a.den_);
    }
    return r;
  }
  friend GenPoly operator-(const GenPoly& a) {
    GenPoly r = a;
    for (auto& [w, c] : r.terms_) c = -c;
    return r;
  }
  friend GenPoly operator-(const GenPoly& a, const GenPoly& b) { return a + (-b); }
  friend GenPoly operator*(const GenPoly& a, const GenPoly& b) {
    GenPoly r;
    r.den_ = a.den_ * b.den_;
    for (const auto& [wa, ca] : a.terms_)
      for (const auto& [wb, cb] : b.terms_) r.add(concat(wa, wb), ca * cb);
    return r;
  }
  friend GenPoly operator*(const PhaseCoeff& c, const GenPoly& a) {
    GenPoly r;
    r.den_ = a.den_;
    for (const auto& [w, x] : a.terms_) r.add(w, c * x);
    return r;
  }
  /// Divide by a scalar (kept symbolic in the denominator).
  [[nodiscard]] GenPoly over(const PhaseCoeff& d) const {
    GenPoly r = *this;
    r.den_ = den_ * d;
    return r;
  }

  /// Evaluate with a valuation on letters; numerators are summed and the
  /// common denominator divided out exactly at the end.
  template <class Valuation>
  [[nodiscard]] OpElement evaluate(Valuation&& val, const OpElement& one) const {
    OpElement sum = one - one;
    for (const auto& [w, c] : terms_) {
      OpElement prod = one;
      for (const auto& l : w) prod = prod * val(l);
      sum += c * prod;
    }
    return sum.divide(den_);
  }

  [[nodiscard]] std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [w, c] : terms_) {
      if (!first) s += " + ";
      first = false;
      s += "(" + c.str() + ")";
      for (const auto& l : w) s += "*" + l.str();
    }
    if (!den_.is_one()) s = "[" + s + "] / (" + den_.str() + ")";
    return s;
  }

private:
  static Word concat(const Word& a, const Word& b) {
    Word w = a;
    for (const auto& l : b) {
      if (!w.empty() && l.kind == 'K' && w.back().kind == 'K' && w.back().node == l.node) {
        w.back().power += l.power;
        if (w.back().power.is_zero()) w.pop_back();
      } else {
        w.push_back(l);
      }
    }
    return w;
  }
  void add(const Word& w, const PhaseCoeff& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  std::map<Word, PhaseCoeff> terms_;
  PhaseCoeff den_ = 1;
};

/// (e^{pi i s} x y - e^{-pi i s} y x)
inline GenPoly q_commutator(const GenPoly& x, const GenPoly& y, const Sym& s) {
  return PhaseCoeff::phase(s) * (x * y) - PhaseCoeff::phase(-s) * (y * x);
}

/// Valuation of letters by the representation's own generators.
inline auto rep_valuation(const Rep& r) {
  return [&r](const Letter& l) -> OpElement {
    if (l.kind == 'K') return r.K_pow(l.node, l.power);
    return r.gen({l.kind, l.node});
  };
}

inline OpElement evaluate(const GenPoly& p, const Rep& r) { return p.evaluate(rep_valuation(r), r.one()); }

}  // namespace qrop
