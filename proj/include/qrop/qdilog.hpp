#pragma once

// Numerical quantum dilogarithm G_b and its relatives g_b, S_b, together with
// residual checks for the scalar and integral identities they satisfy.
//
// G_b is computed from its integral representation inside the strip
// 0.05Q <= Re z <= 0.95Q and continued outside by the functional equation.
// Far up (or down) the imaginary direction the integral is replaced by its
// asymptotic value once the correction drops below double precision.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrop/report.hpp"

namespace qrop::qdilog {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

class QDilogError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct QDilogParams {
  double b = 0.7;
  double tolerance = 1e-13;   ///< relative tolerance handed to the adaptive quadrature
  double strip_margin = 0.05; ///< direct quadrature for margin*Q <= Re z <= (1-margin)*Q
  double pole_radius = 1e-6;  ///< in units of Q
  double delta = 0;           ///< contour lift for identity integrals; 0 selects min(b,1/b)/4
  unsigned max_depth = 12;    ///< bisection depth per unit chunk

  [[nodiscard]] double Q() const { return b + 1.0 / b; }
  [[nodiscard]] double lift() const { return delta > 0 ? delta : std::min(b, 1.0 / b) / 4.0; }
};

/// Adaptive Gauss-Kronrod (7/15) over [a, c] for complex integrands. Long
/// ranges are cut into chunks of length at most `chunk` so that oscillation
/// never forces deep bisection; the depth cap bounds the cost when the
/// tolerance sits at rounding level.
template <class F>
cplx integrate(F&& f, double a, double c, double tol, unsigned depth = 12, double* err = nullptr, double chunk = 1.0) {
  const int pieces = std::max(1, static_cast<int>(std::ceil((c - a) / chunk)));
  const double h = (c - a) / pieces;
  cplx v = 0;
  double e_total = 0;
  for (int k = 0; k < pieces; ++k) {
    double e = 0;
    const double lo = a + k * h, hi = k + 1 == pieces ? c : lo + h;
    v += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, depth, tol, &e);
    e_total += e;
  }
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw QDilogError("quadrature produced a non-finite value");
  if (err) *err = e_total;
  return v;
}

class Evaluator {
public:
  explicit Evaluator(QDilogParams p = {}) : p_(p) {
    if (!(p_.b > 0) || !std::isfinite(p_.b)) throw std::invalid_argument("qdilog: b must be positive");
    Q_ = p_.Q();
    const double bmin = std::min(p_.b, 1.0 / p_.b);
    // corrections to the asymptotic value are O(exp(-2 pi bmin |Im z|))
    y_asym_ = 40.0 / (2 * kPi * bmin);
  }

  [[nodiscard]] const QDilogParams& params() const { return p_; }
  [[nodiscard]] double b() const { return p_.b; }
  [[nodiscard]] double Q() const { return Q_; }

  [[nodiscard]] cplx zeta() const {
    const double b2 = p_.b * p_.b;
    return std::exp(kI * (kPi / 2) * ((b2 + 1 / b2) / 6 + 0.5));
  }

  /// The log-integral I(z) along R with a semicircle of radius r above 0,
  /// so that G_b(z) = conj(zeta_b) exp(-I(z)). The two half-lines beyond the
  /// semicircle are turned onto the directions where the exponential is real
  /// and decaying (angles capped at pi/3). The kernel's poles all sit on the
  /// imaginary axis, so the rotation crosses none of them.
  [[nodiscard]] cplx log_integral_semicircle(cplx z) const {
    const double r = std::min(p_.b, 1.0 / p_.b) / 2;
    const double cap = kPi / 3;
    const double phi = std::clamp(std::atan2(z.imag(), Q_ - z.real()), -cap, cap);
    const double psi = std::clamp(-std::atan2(z.imag(), z.real()), -cap, cap);
    const cplx dr = std::exp(kI * phi), dl = std::exp(kI * psi);
    const double rate_r = -kPi * (dr * (z - Q_)).real(), rate_l = kPi * (dl * z).real();
    if (!(rate_r > 0) || !(rate_l > 0)) throw QDilogError("G_b: integral representation used outside 0 < Re z < Q");
    const double Tr = 40.0 / rate_r + 1, Tl = 40.0 / rate_l + 1;
    cplx total = integrate([&](double s) { return kernel(r + s * dr, z) * dr; }, 0.0, Tr, p_.tolerance, p_.max_depth);
    total += integrate([&](double s) { return kernel(-r - s * dl, z) * dl; }, 0.0, Tl, p_.tolerance, p_.max_depth);
    // t = r e^{i phi}, phi running from pi down to 0
    total -= integrate(
        [&](double a) {
          const cplx w = r * std::exp(kI * a);
          return kernel(w, z) * kI * w;
        },
        0.0, kPi, p_.tolerance, p_.max_depth);
    return total;
  }

  /// The same integral along the shifted line R + i*lift.
  [[nodiscard]] cplx log_integral_line(cplx z, double lift) const {
    const double T = truncation(z);
    return integrate([&](double t) { return kernel(cplx(t, lift), z); }, -T, T, p_.tolerance, p_.max_depth);
  }

  /// Direct quadrature; z must lie in the closed strip 0 < Re z < Q.
  [[nodiscard]] cplx G_direct(cplx z) const { return std::conj(zeta()) * std::exp(-log_integral_semicircle(z)); }

  [[nodiscard]] cplx G(cplx z) const {
    check_pole(z);
    return G_unchecked(z);
  }

  /// g_b(x) = conj(zeta_b) / G_b(Q/2 + log x / (2 pi i b)), x > 0.
  [[nodiscard]] cplx g(double x) const {
    if (!(x > 0)) throw std::invalid_argument("g_b: argument must be positive");
    return std::conj(zeta()) / G(Q_ / 2 + std::log(x) / (2 * kPi * kI * p_.b));
  }

  [[nodiscard]] cplx S(cplx z) const { return G(z) * std::exp(kI * (kPi / 2) * z * (Q_ - z)); }

  /// Evaluator for the dual parameter 1/b with the same settings.
  [[nodiscard]] Evaluator dual() const {
    QDilogParams q = p_;
    q.b = 1.0 / p_.b;
    return Evaluator(q);
  }

private:
  QDilogParams p_;
  double Q_ = 0;
  double y_asym_ = 0;

  // e^{pi t z} / ((e^{pi b t}-1)(e^{pi t/b}-1) t), written to avoid overflow
  [[nodiscard]] cplx kernel(cplx t, cplx z) const {
    const double b = p_.b;
    if (t.real() > 0) {
      const cplx num = std::exp(kPi * t * (z - Q_));
      return num / ((1.0 - std::exp(-kPi * b * t)) * (1.0 - std::exp(-kPi * t / b)) * t);
    }
    return std::exp(kPi * t * z) / ((std::exp(kPi * b * t) - 1.0) * (std::exp(kPi * t / b) - 1.0) * t);
  }

  // the integrand decays like exp(-pi Re z |t|) on the left and
  // exp(-pi (Q - Re z) t) on the right
  [[nodiscard]] double truncation(cplx z) const {
    const double rate = kPi * std::min(z.real(), Q_ - z.real());
    if (!(rate > 0)) throw QDilogError("G_b: integral representation used outside 0 < Re z < Q");
    return std::max(4.0, 40.0 / rate);
  }

  void check_pole(cplx z) const {
    const double b = p_.b, bi = 1.0 / p_.b, rad = p_.pole_radius * Q_;
    const double reach = std::abs(z.real()) + 1;
    for (int n = 0; n * b <= reach; ++n)
      for (int m = 0; n * b + m * bi <= reach; ++m)
        if (std::abs(z + n * b + m * bi) < rad)
          throw QDilogError("G_b: argument within the pole radius of -" + std::to_string(n) + "b-" + std::to_string(m) + "/b");
  }

  [[nodiscard]] cplx G_unchecked(cplx z) const {
    const double lo = p_.strip_margin * Q_, hi = (1 - p_.strip_margin) * Q_;
    const double s = p_.b < hi - lo ? p_.b : 1.0 / p_.b;  // shift that cannot jump over the strip
    if (z.real() > hi) return (1.0 - std::exp(2 * kPi * kI * s * (z - s))) * G_unchecked(z - s);
    if (z.real() < lo) {
      const cplx f = 1.0 - std::exp(2 * kPi * kI * s * z);
      if (std::abs(f) < 1e-300) throw QDilogError("G_b: pole");
      return G_unchecked(z + s) / f;
    }
    if (z.imag() > y_asym_) return std::conj(zeta());
    if (z.imag() < -y_asym_) return zeta() * std::exp(kPi * kI * z * (z - Q_));
    return G_direct(z);
  }
};

/// Contour made of two rays leaving `base`: one towards +infinity along
/// `right` and one towards -infinity along `left` (both unit complex numbers,
/// `left` pointing outwards). The integral runs from the left end to the
/// right end.
struct Contour {
  cplx base{0, 0};
  cplx left{-1, 0};
  cplx right{1, 0};

  static Contour line(double lift) { return {cplx(0, lift), cplx(-1, 0), cplx(1, 0)}; }
};

/// Integral of f along the contour. Each ray is integrated in unit pieces
/// until two consecutive pieces are negligible against the running total.
template <class F>
cplx contour_integral(F&& f, const Contour& c, double tol = 1e-10, double max_length = 400) {
  auto ray = [&](cplx dir) {
    cplx total = 0;
    int quiet = 0;
    for (double s = 0; s < max_length; s += 1.0) {
      const cplx piece = integrate([&](double u) { return f(c.base + u * dir) * dir; }, s, s + 1.0, tol);
      total += piece;
      quiet = std::abs(piece) <= 1e-14 * std::max(1.0, std::abs(total)) ? quiet + 1 : 0;
      if (quiet >= 2) return total;
    }
    throw QDilogError("contour integral did not converge within the truncation length");
  };
  return ray(c.right) - ray(c.left);
}

namespace detail {
inline CheckResult residual_check(std::string name, std::string anchor, cplx lhs, cplx rhs, double tol) {
  CheckResult r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.tolerance = tol;
  r.residual = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
  if (!std::isfinite(r.residual)) {
    r.status = Status::Error;
    r.detail = "non-finite residual";
    return r;
  }
  r.status = r.residual <= tol ? Status::Pass : Status::Fail;
  std::ostringstream os;
  os.precision(15);
  os << "lhs=" << lhs << " rhs=" << rhs;
  r.detail = os.str();
  return r;
}
}  // namespace detail

/// int_C e^{-2 pi tau beta} G(alpha + i tau) / G(Q + i tau) d tau
///   = G(alpha) G(beta) / G(alpha + beta),
/// on the horizontal line Im tau = lift (above 0, below i alpha).
inline CheckResult check_tau_beta(const Evaluator& ev, cplx alpha, cplx beta, double tol = 1e-6) {
  const double Q = ev.Q(), lift = ev.params().lift();
  if (!(beta.real() > 0) || !((alpha + beta).real() < Q))
    throw std::invalid_argument("tau-beta: need Re(beta) > 0 and Re(alpha + beta) < Q");
  if (!(lift < alpha.real())) throw std::invalid_argument("tau-beta: contour lift must stay below the pole at i*alpha");
  const cplx lhs = contour_integral(
      [&](cplx t) { return std::exp(-2 * kPi * t * beta) * ev.G(alpha + kI * t) / ev.G(Q + kI * t); }, Contour::line(lift));
  const cplx rhs = ev.G(alpha) * ev.G(beta) / ev.G(alpha + beta);
  return detail::residual_check("tau-beta", "int e^{-2 pi tau beta} G(a+i tau)/G(Q+i tau) = G(a)G(b)/G(a+b)", lhs, rhs, tol);
}

/// The 3-2 relation
///   int G(a + i tau) G(b - i tau) G(c - i tau) e^{-2 pi i (b - i tau)(c - i tau)} d tau = G(a + c) G(a + b).
/// The left tail carries a factor e^{pi i tau^2}; that ray is tilted into the
/// third quadrant where it decays, without crossing a pole.
inline CheckResult check_three_two(const Evaluator& ev, cplx a, cplx b, cplx c, double tol = 1e-6) {
  const double Q = ev.Q();
  if (!((a - b - c).real() < Q / 2)) throw std::invalid_argument("3-2 relation: need Re(a - b - c) < Q/2");
  if (!(a.real() > 0 && b.real() > 0 && c.real() > 0)) throw std::invalid_argument("3-2 relation: the real line must separate the poles");
  const Contour k{0, -std::exp(kI * (kPi / 8)), 1};
  const cplx lhs = contour_integral(
      [&](cplx t) {
        const cplx B = b - kI * t, C = c - kI * t;
        return ev.G(a + kI * t) * ev.G(B) * ev.G(C) * std::exp(-2 * kPi * kI * B * C);
      },
      k);
  const cplx rhs = ev.G(a + c) * ev.G(a + b);
  return detail::residual_check("3-2", "int G(a+i t)G(b-i t)G(c-i t)e^{-2 pi i(b-i t)(c-i t)} = G(a+c)G(a+b)", lhs, rhs, tol);
}

/// Fourier transform of 1/G: int e^{-pi i t^2} / G(Q + i t) x^{i t / b} dt = g_b(x),
/// contour above t = 0. The right ray is tilted downwards to make e^{-pi i t^2} decay.
inline CheckResult check_fourier_g(const Evaluator& ev, double x, double tol = 1e-6) {
  const double Q = ev.Q(), lift = ev.params().lift();
  const Contour k{cplx(0, lift), -1, std::exp(-kI * (kPi / 8))};
  const double lx = std::log(x);
  const cplx lhs = contour_integral(
      [&](cplx t) { return std::exp(-kPi * kI * t * t) / ev.G(Q + kI * t) * std::exp(kI * t * lx / ev.b()); }, k);
  return detail::residual_check("fourier", "int e^{-pi i t^2}/G(Q+it) x^{it/b} dt = g_b(x)", lhs, ev.g(x), tol);
}

/// Same transform with e^{-pi Q t} in place of the Gaussian: gives conj(g_b(x)).
/// Here it is the left tail that behaves like e^{pi i t^2}, so that ray is tilted.
inline CheckResult check_fourier_g_star(const Evaluator& ev, double x, double tol = 1e-6) {
  const double Q = ev.Q(), lift = ev.params().lift();
  const double lx = std::log(x);
  const cplx lhs = contour_integral(
      [&](cplx t) { return std::exp(-kPi * Q * t) / ev.G(Q + kI * t) * std::exp(kI * t * lx / ev.b()); },
      Contour{cplx(0, lift), -std::exp(kI * (kPi / 8)), 1});
  return detail::residual_check("fourier-star", "int e^{-pi Q t}/G(Q+it) x^{it/b} dt = conj(g_b(x))", lhs, std::conj(ev.g(x)), tol);
}

// ---------------------------------------------------------------------------
// Scalar identities
// ---------------------------------------------------------------------------

inline CheckResult check_unitarity(const Evaluator& ev, double x, double tol = 1e-10) {
  return detail::residual_check("unitarity", "|G(Q/2 + i x)| = 1", std::abs(ev.G(ev.Q() / 2 + kI * x)), 1.0, tol);
}

inline CheckResult check_reflection(const Evaluator& ev, cplx x, double tol = 1e-9) {
  const double Q = ev.Q();
  return detail::residual_check("reflection", "G(x) G(Q-x) = e^{pi i x (x-Q)}", ev.G(x) * ev.G(Q - x),
                                std::exp(kPi * kI * x * (x - Q)), tol);
}

/// G(x + s) = (1 - e^{2 pi i s x}) G(x) for s = b (dual = false) or 1/b.
inline CheckResult check_functional(const Evaluator& ev, cplx x, bool dual, double tol = 1e-9) {
  const double s = dual ? 1.0 / ev.b() : ev.b();
  return detail::residual_check(dual ? "functional-1/b" : "functional-b", "G(x+s) = (1 - e^{2 pi i s x}) G(x)", ev.G(x + s),
                                (1.0 - std::exp(2 * kPi * kI * s * x)) * ev.G(x), tol);
}

inline CheckResult check_conjugation(const Evaluator& ev, cplx x, double tol = 1e-9) {
  return detail::residual_check("conjugation", "conj G(x) = 1 / G(Q - conj x)", std::conj(ev.G(x)), 1.0 / ev.G(ev.Q() - std::conj(x)), tol);
}

inline CheckResult check_self_duality(const Evaluator& ev, cplx x, double tol = 1e-8) {
  return detail::residual_check("self-duality", "G_b(x) = G_{1/b}(x)", ev.G(x), ev.dual().G(x), tol);
}

/// g_b(x) = g_{1/b}(x^{1/b^2}) for x > 0.
inline CheckResult check_g_self_duality(const Evaluator& ev, double x, double tol = 1e-8) {
  return detail::residual_check("g-self-duality", "g_b(x) = g_{1/b}(x^{1/b^2})", ev.g(x),
                                ev.dual().g(std::pow(x, 1.0 / (ev.b() * ev.b()))), tol);
}

inline CheckResult check_g_unitarity(const Evaluator& ev, double x, double tol = 1e-10) {
  return detail::residual_check("g-unitarity", "|g_b(x)| = 1", std::abs(ev.g(x)), 1.0, tol);
}

/// G(Q/2)^2 = e^{-pi i Q^2 / 4}.
inline CheckResult check_half_point(const Evaluator& ev, double tol = 1e-10) {
  const double Q = ev.Q();
  const cplx g = ev.G(Q / 2);
  return detail::residual_check("half-point", "G(Q/2)^2 = e^{-pi i Q^2/4}", g * g, std::exp(-kPi * kI * Q * Q / 4.0), tol);
}

/// Im x -> +inf: G -> conj(zeta); Im x -> -inf: G ~ zeta e^{pi i x (x-Q)}.
inline CheckResult check_asymptotics(const Evaluator& ev, double re, double im, double tol = 1e-3) {
  const cplx x(re, im);
  if (im > 0) return detail::residual_check("asymptotics+", "G(x) ~ conj(zeta_b), Im x -> +inf", ev.G(x), std::conj(ev.zeta()), tol);
  return detail::residual_check("asymptotics-", "G(x) ~ zeta_b e^{pi i x(x-Q)}, Im x -> -inf", ev.G(x),
                                ev.zeta() * std::exp(kPi * kI * x * (x - ev.Q())), tol);
}

/// Semicircle contour against the shifted line R + i*lift.
inline CheckResult check_contour_shift(const Evaluator& ev, cplx z, double tol = 1e-9) {
  return detail::residual_check("contour", "semicircle contour = line R + i delta", ev.log_integral_line(z, 2 * ev.params().lift()),
                                ev.log_integral_semicircle(z), tol);
}

/// Direct quadrature against functional-equation continuation at the same point.
inline CheckResult check_continuation(const Evaluator& ev, cplx z, double tol = 1e-9) {
  QDilogParams wide = ev.params();
  wide.strip_margin = 0.3;
  return detail::residual_check("continuation", "strip quadrature = continued value", Evaluator(wide).G(z), ev.G(z), tol);
}

inline CheckResult check_zeta(const Evaluator& ev, double tol = 1e-14) {
  const double b2 = ev.b() * ev.b();
  // zeta_b = e^{pi i (b^2 + b^-2) / 12} e^{pi i / 4}
  const cplx expect = std::polar(1.0, kPi * (b2 + 1 / b2) / 12) * std::polar(1.0, kPi / 4);
  return detail::residual_check("zeta", "zeta_b = e^{(pi i/2)((b^2+b^-2)/6 + 1/2)}", ev.zeta(), expect, tol);
}

/// Plancherel density |S_b(Q + 2 i gamma)|^2 of the rank-one branching rule,
/// gamma >= 0 the imaginary offset of the spectral parameter.
inline double plancherel_density(double gamma, double b) {
  QDilogParams p;
  p.b = b;
  const Evaluator ev(p);
  return std::norm(ev.S(ev.Q() + 2.0 * kI * gamma));
}

/// Names accepted by verify_identity.
inline std::vector<std::string> identity_names() {
  return {"zeta",         "unitarity",      "half-point",   "reflection",   "functional-b", "functional-1/b", "conjugation",
          "self-duality", "g-unitarity",    "g-self-duality", "asymptotics+", "asymptotics-", "contour",      "continuation",
          "tau-beta",     "3-2",            "fourier",      "fourier-star"};
}

/// Residual of a named identity at its reference parameters.
inline CheckResult verify_identity(const Evaluator& ev, const std::string& name) {
  const double Q = ev.Q();
  if (name == "zeta") return check_zeta(ev);
  if (name == "unitarity") return check_unitarity(ev, 0.7);
  if (name == "half-point") return check_half_point(ev);
  if (name == "reflection") return check_reflection(ev, 0.3 * Q + 0.1 * kI);
  if (name == "functional-b") return check_functional(ev, 0.4 * Q + 0.3 * kI, false);
  if (name == "functional-1/b") return check_functional(ev, 0.2 * Q - 0.4 * kI, true);
  if (name == "conjugation") return check_conjugation(ev, 0.35 * Q + 0.8 * kI);
  if (name == "self-duality") return check_self_duality(ev, 0.37 * Q + 0.2 * kI);
  if (name == "g-unitarity") return check_g_unitarity(ev, 7.0);
  if (name == "g-self-duality") return check_g_self_duality(ev, 1.3);
  if (name == "asymptotics+") return check_asymptotics(ev, 0.5 * Q, 8.0);
  if (name == "asymptotics-") return check_asymptotics(ev, 0.5 * Q, -8.0);
  if (name == "contour") return check_contour_shift(ev, 0.3 * Q + 0.1 * kI);
  if (name == "continuation") return check_continuation(ev, 0.1 * Q + 0.25 * kI);
  if (name == "tau-beta") return check_tau_beta(ev, 0.4 * Q, 0.3 * Q);
  if (name == "3-2") return check_three_two(ev, 0.3 * Q, 0.25 * Q, 0.2 * Q);
  if (name == "fourier") return check_fourier_g(ev, 2.0);
  if (name == "fourier-star") return check_fourier_g_star(ev, 2.0);
  throw std::invalid_argument("verify_identity: unknown identity '" + name + "'");
}

/// Every named identity, each wrapped so that an evaluation error becomes an
/// Error entry instead of aborting the table.
inline CheckReport qdilog_suite(const Evaluator& ev) {
  CheckReport rep;
  for (const auto& n : identity_names()) {
    rep.add(timed([&] {
      try {
        return verify_identity(ev, n);
      } catch (const std::exception& e) {
        CheckResult r;
        r.name = n;
        r.status = Status::Error;
        r.detail = e.what();
        return r;
      }
    }));
  }
  return rep;
}

/// CSV rows "re,im,ReG,ImG" over a rectangular grid.
inline std::string G_table_csv(const Evaluator& ev, double re0, double re1, double im0, double im1, int n_re, int n_im) {
  std::ostringstream os;
  os.precision(17);
  os << "re,im,re_G,im_G\n";
  for (int i = 0; i < n_re; ++i)
    for (int j = 0; j < n_im; ++j) {
      const double re = n_re == 1 ? re0 : re0 + (re1 - re0) * i / (n_re - 1);
      const double im = n_im == 1 ? im0 : im0 + (im1 - im0) * j / (n_im - 1);
      const cplx g = ev.G(cplx(re, im));
      os << re << "," << im << "," << g.real() << "," << g.imag() << "\n";
    }
  return os.str();
}

}  // namespace qrop::qdilog
