#pragma once

#include <algorithm>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrop/symbolic.hpp"

namespace qrop {

/// Reference value of b used to order phases during long division.
inline constexpr double kOrderingB = 0.7;

/// Raised when an exact division leaves a remainder.
class NonDivisibleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Finite rational combination of unit phases e^{pi i theta}, with theta a
/// PhaseExponent (a reduced Sym). The constant part of every theta is kept in
/// [0,1); e^{pi i} is folded into the sign of the rational coefficient.
class PhaseCoeff {
public:
  using Term = std::pair<Sym, Rational>;

  PhaseCoeff() = default;
  PhaseCoeff(Rational c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) terms_.push_back({Sym{}, c});
  }
  PhaseCoeff(std::int64_t c) : PhaseCoeff(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  /// c * e^{pi i theta}
  static PhaseCoeff phase(const Sym& theta, Rational c = 1) {
    PhaseCoeff r;
    r.add(theta, c);
    r.canonicalize();
    return r;
  }
  /// q_i^k with q_i = e^{pi i b_i^2}; pass b_i as a linear Sym.
  static PhaseCoeff q_power(const Sym& bi, Rational k) { return phase(bi * bi * k); }
  /// The simply-laced q = e^{pi i b_l^2} raised to k.
  static PhaseCoeff q(Rational k = 1) { return q_power(Sym::bl(), k); }

  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] bool is_one() const { return terms_.size() == 1 && terms_[0].first.is_zero() && terms_[0].second == Rational(1); }
  /// A single term with trivial phase and positive coefficient.
  [[nodiscard]] bool is_positive_rational() const {
    return terms_.size() == 1 && terms_[0].first.is_zero() && terms_[0].second > Rational(0);
  }
  /// If this is a single pure phase c*e^{pi i theta}, returns it.
  [[nodiscard]] std::optional<Term> single() const {
    if (terms_.size() != 1) return std::nullopt;
    return terms_[0];
  }

  friend PhaseCoeff operator+(const PhaseCoeff& a, const PhaseCoeff& b) {
    PhaseCoeff r = a;
    r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
    r.merge();
    return r;
  }
  friend PhaseCoeff operator-(const PhaseCoeff& a) {
    PhaseCoeff r = a;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }
  friend PhaseCoeff operator-(const PhaseCoeff& a, const PhaseCoeff& b) { return a + (-b); }
  friend PhaseCoeff operator*(const PhaseCoeff& a, const PhaseCoeff& b) {
    PhaseCoeff r;
    r.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ta, ca] : a.terms_)
      for (const auto& [tb, cb] : b.terms_) r.add(ta + tb, ca * cb);
    r.canonicalize();
    return r;
  }
  PhaseCoeff& operator+=(const PhaseCoeff& o) { return *this = *this + o; }
  PhaseCoeff& operator-=(const PhaseCoeff& o) { return *this = *this - o; }
  PhaseCoeff& operator*=(const PhaseCoeff& o) { return *this = *this * o; }

  friend bool operator==(const PhaseCoeff& a, const PhaseCoeff& b) { return a.terms_ == b.terms_; }

  [[nodiscard]] PhaseCoeff conj() const {
    PhaseCoeff r;
    for (const auto& [t, c] : terms_) r.add(-t, c);
    r.canonicalize();
    return r;
  }

  /// Numeric value at b_l = b.
  [[nodiscard]] std::complex<double> eval(double b) const {
    std::complex<double> v = 0;
    for (const auto& [t, c] : terms_) v += c.to_double() * std::exp(std::complex<double>(0, std::numbers::pi * t.eval(b)));
    return v;
  }

  /// Exact quotient in the group ring; throws NonDivisibleError when the
  /// division leaves a remainder. Long division is ordered by the numeric value
  /// of the non-constant part of each phase at b = kOrderingB.
  [[nodiscard]] PhaseCoeff divide(const PhaseCoeff& d) const {
    if (d.is_zero()) throw std::domain_error("PhaseCoeff: division by zero");
    if (is_zero()) return {};
    if (auto s = d.single()) return *this * phase(-s->first, Rational(1) / s->second);

    auto key = [](const Sym& t) { return t.without_constant().eval(kOrderingB); };
    const auto lead_of = [&](const PhaseCoeff& p) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < p.terms_.size(); ++i)
        if (key(p.terms_[i].first) > key(p.terms_[best].first)) best = i;
      return best;
    };
    const auto low_of = [&](const PhaseCoeff& p) {
      double v = key(p.terms_[0].first);
      for (const auto& t : p.terms_) v = std::min(v, key(t.first));
      return v;
    };
    const std::size_t dl = lead_of(d);
    const double dlead = key(d.terms_[dl].first);
    for (std::size_t i = 0; i < d.terms_.size(); ++i)
      if (i != dl && std::abs(key(d.terms_[i].first) - dlead) < 1e-12)
        throw std::invalid_argument("PhaseCoeff::divide: divisor has no unique leading phase");
    const Term lead_d = d.terms_[dl];
    const double bound = low_of(*this) - low_of(d) - 1e-9;

    PhaseCoeff quotient;
    PhaseCoeff rem = *this;
    for (int guard = 0; !rem.is_zero(); ++guard) {
      if (guard > 100000) throw NonDivisibleError("PhaseCoeff::divide: no termination");
      const Term lr = rem.terms_[lead_of(rem)];
      PhaseCoeff t = phase(lr.first - lead_d.first, lr.second / lead_d.second);
      if (key(t.terms_[0].first) < bound) throw NonDivisibleError("PhaseCoeff::divide: nonzero remainder");
      quotient += t;
      rem -= t * d;
    }
    return quotient;
  }

  [[nodiscard]] std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [t, c] : terms_) {
      const bool neg = c < Rational(0);
      Rational a = neg ? -c : c;
      if (first) os << (neg ? "-" : "");
      else os << (neg ? " - " : " + ");
      if (t.is_zero()) {
        os << a.str();
      } else {
        if (!(a == Rational(1))) os << a.str() << "*";
        os << "e^{pi i (" << t.str() << ")}";
      }
      first = false;
    }
    return os.str();
  }

private:
  void add(Sym theta, Rational c) {
    if (c.is_zero()) return;
    Rational k = theta.constant_part();
    std::int64_t fl = k.floor();
    if (fl != 0) {
      theta -= Sym(Rational(fl));
      if (fl % 2 != 0) c = -c;
    }
    terms_.push_back({std::move(theta), c});
  }
  void merge() {
    std::vector<Term> raw = std::move(terms_);
    terms_.clear();
    for (auto& [t, c] : raw) add(std::move(t), c);
    canonicalize();
  }
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    std::vector<Term> out;
    for (auto& t : terms_) {
      if (!out.empty() && out.back().first == t.first) out.back().second += t.second;
      else out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Term& t) { return t.second.is_zero(); });
    terms_ = std::move(out);
  }

  std::vector<Term> terms_;
};

/// Symmetric quantum integer [n]_{q} with q = e^{pi i b_i^2}.
inline PhaseCoeff q_int(const Sym& bi, int n) {
  PhaseCoeff r;
  for (int k = n - 1; k >= 1 - n; k -= 2) r += PhaseCoeff::q_power(bi, k);
  return r;
}

inline PhaseCoeff q_factorial(const Sym& bi, int n) {
  PhaseCoeff r = 1;
  for (int k = 2; k <= n; ++k) r *= q_int(bi, k);
  return r;
}

/// q_i^k - q_i^{-k}
inline PhaseCoeff q_diff(const Sym& bi, Rational k) {
  return PhaseCoeff::q_power(bi, k) - PhaseCoeff::q_power(bi, -k);
}

}  // namespace qrop
