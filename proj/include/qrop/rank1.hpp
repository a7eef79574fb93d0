#pragma once

// Numerical checks of the sl(2) R-operator, the u-element and the Weyl element
// on the canonical positive representation
//   e = e^{pi b(-x+lambda-2p)} + e^{pi b(x-lambda-2p)},
//   f = e^{pi b(x+lambda+2p)} + e^{pi b(-x-lambda+2p)},   K = e^{-2 pi b x},
// with e^{2 pi b p} phi(x) = phi(x - i b).
//
// Test vectors are entire functions (products of Gaussians), so every
// operator can be applied exactly at complex shifts. R F is evaluated
// pointwise from the integral representation of g_b(e (x) f) with the
// closed-form action of complex powers of e and f, and Q^{1/2} = q^{H (x) H / 4}
// is multiplication by e^{-pi i x_1 x_2} (K = q^H gives H = 2 i x / b).

#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "qrop/qdilog.hpp"
#include "qrop/report.hpp"

namespace qrop::rank1 {

using qdilog::cplx;
using qdilog::kI;
using qdilog::kPi;

using Vector2 = std::function<cplx(cplx, cplx)>;
using Vector1 = std::function<cplx(cplx)>;

/// e^{-alpha x^2 + beta x}, alpha > 0.
struct Gaussian {
  double alpha = 1;
  cplx beta = 0;
  cplx operator()(cplx x) const { return std::exp(-alpha * x * x + beta * x); }
};

inline Vector2 product(Gaussian g1, Gaussian g2) {
  return [g1, g2](cplx x, cplx y) { return g1(x) * g2(y); };
}

struct Params {
  double b = 0.7;
  double lambda1 = 0.3;
  double lambda2 = 0.45;
  double lift = 0.15;         ///< Im t of the integration line; shifted actions keep poles above Q/2 - min(b, 1/b)
  double grid_lo = -2, grid_hi = 2;
  int grid_n = 64;
  int substeps = 5;           ///< t-steps per grid spacing (keeps G_b arguments on a lattice)
  double t_half_width = 10;   ///< |Re t| cut-off; Gaussian test vectors make the tail negligible
};

/// Coefficient functions of the generators: e phi(x) = ce(x) phi(x + i b) etc.
struct Generators {
  double b, lambda;
  [[nodiscard]] cplx ce(cplx x) const {
    return std::exp(kPi * b * (-x + lambda) - kPi * kI * b * b / 2.0) + std::exp(kPi * b * (x - lambda) + kPi * kI * b * b / 2.0);
  }
  [[nodiscard]] cplx cf(cplx x) const {
    return std::exp(kPi * b * (x + lambda) - kPi * kI * b * b / 2.0) + std::exp(-kPi * b * (x + lambda) + kPi * kI * b * b / 2.0);
  }
  [[nodiscard]] cplx K(cplx x, double power = 1) const { return std::exp(-2 * kPi * b * power * x); }
  [[nodiscard]] Vector1 e(Vector1 phi) const {
    return [*this, phi](cplx x) { return ce(x) * phi(x + kI * b); };
  }
  [[nodiscard]] Vector1 f(Vector1 phi) const {
    return [*this, phi](cplx x) { return cf(x) * phi(x - kI * b); };
  }
};

class ROperator {
public:
  explicit ROperator(Params p) : p_(p), ev_(make_params(p.b)), Q_(p.b + 1 / p.b) {
    if (!(p.lift > 0 && p.lift < Q_ / 2 - std::min(p.b, 1 / p.b)))
      throw std::invalid_argument("rank1: lift must lie in (0, Q/2 - b)");
    h_ = spacing() / p.substeps;
  }

  [[nodiscard]] const Params& params() const { return p_; }
  [[nodiscard]] double Q() const { return Q_; }
  [[nodiscard]] double spacing() const { return (p_.grid_hi - p_.grid_lo) / (p_.grid_n - 1); }
  [[nodiscard]] Generators leg(int k) const { return {p_.b, k == 1 ? p_.lambda1 : p_.lambda2}; }
  [[nodiscard]] const qdilog::Evaluator& evaluator() const { return ev_; }

  /// (R F)(z1, z2) for an entire F, at complex points.
  [[nodiscard]] cplx apply(const Vector2& F, cplx z1, cplx z2) const {
    const double l1 = p_.lambda1, l2 = p_.lambda2;
    const cplx a1 = Q_ / 2 + kI * (z1 - l1), a2 = Q_ / 2 + kI * (z2 + l2);
    const cplx ge = G(a1), gf = G(a2);
    const int n = static_cast<int>(std::lround(2 * p_.t_half_width / h_));
    cplx sum = 0;
    for (int k = 0; k <= n; ++k) {
      const cplx t(-p_.t_half_width + k * h_, p_.lift);
      const cplx w1 = z1 - t, w2 = z2 + t;
      // g_b(e (x) f) = int e^{-pi i t^2} / G(Q + i t) e^{i t/b} (x) f^{i t/b} dt
      // with the Gaussian factors e^{-+ pi i t^2 / 2} of the two actions cancelling
      sum += std::exp(-kPi * kI * t * t) / G(Q_ + kI * t) * std::exp(kPi * kI * t * (z1 - l1 + z2 + l2)) * ge / G(a1 - kI * t) *
             G(a2 + kI * t) / gf * std::exp(-kPi * kI * w1 * w2) * F(w1, w2);
    }
    return std::exp(-kPi * kI * z1 * z2) * sum * h_;
  }

  /// The operator as a new vector (evaluated lazily).
  [[nodiscard]] Vector2 operator()(const Vector2& F) const {
    return [this, F](cplx z1, cplx z2) { return apply(F, z1, z2); };
  }

  [[nodiscard]] std::size_t cache_size() const { return cache_.size(); }

private:
  static qdilog::QDilogParams make_params(double b) {
    qdilog::QDilogParams q;
    q.b = b;
    return q;
  }
  cplx G(cplx z) const {
    const long long key = std::llround(z.real() * 1e7) * 1000000007LL + std::llround(z.imag() * 1e7);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    return cache_.emplace(key, ev_.G(z)).first->second;
  }

  Params p_;
  qdilog::Evaluator ev_;
  double Q_;
  double h_;
  mutable std::unordered_map<long long, cplx> cache_;
};

/// Values of a vector on the square grid of the parameters (row-major, x1 outer).
struct GridValues {
  std::vector<double> axis;
  std::vector<cplx> values;
  [[nodiscard]] cplx at(int i, int j) const { return values[static_cast<std::size_t>(i) * axis.size() + static_cast<std::size_t>(j)]; }
};

inline GridValues sample(const Params& p, const Vector2& F) {
  GridValues g;
  const double d = (p.grid_hi - p.grid_lo) / (p.grid_n - 1);
  for (int i = 0; i < p.grid_n; ++i) g.axis.push_back(p.grid_lo + i * d);
  for (double x : g.axis)
    for (double y : g.axis) g.values.push_back(F(x, y));
  return g;
}

/// R applied to a product of Gaussians, sampled on the grid.
inline GridValues rank1_apply_R(const Params& p, Gaussian g1, Gaussian g2) {
  const ROperator R(p);
  return sample(p, R(product(g1, g2)));
}

namespace detail {

inline CheckResult grid_check(std::string name, std::string anchor, const GridValues& lhs, const GridValues& rhs, double tol) {
  CheckResult r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.tolerance = tol;
  double worst = 0, scale = 0;
  for (std::size_t k = 0; k < lhs.values.size(); ++k) {
    worst = std::max(worst, std::abs(lhs.values[k] - rhs.values[k]));
    scale = std::max(scale, std::abs(rhs.values[k]));
  }
  r.residual = worst;
  r.status = !std::isfinite(worst) ? Status::Error : (worst <= tol ? Status::Pass : Status::Fail);
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << "max |lhs - rhs| = " << worst << " over " << lhs.values.size()
     << " grid points, max |rhs| = " << scale;
  r.detail = os.str();
  return r;
}

inline CheckResult scalar_check(std::string name, std::string anchor, cplx lhs, cplx rhs, double tol) {
  return qdilog::detail::residual_check(std::move(name), std::move(anchor), lhs, rhs, tol);
}

}  // namespace detail

/// Delta'(X) R F = R Delta(X) F on the grid, X = e, f or K, with
/// Delta(X) = K^{-1/2} (x) X + X (x) K^{1/2} and Delta(K) = K (x) K.
inline CheckResult braiding_check(const ROperator& R, char which, const Vector2& F, double tol = 1e-3) {
  const Generators g1 = R.leg(1), g2 = R.leg(2);
  const double b = R.params().b;
  Vector2 RF = R(F);
  Vector2 lhs, DF;
  if (which == 'K') {
    DF = [=](cplx x, cplx y) { return g1.K(x) * g2.K(y) * F(x, y); };
    lhs = [=](cplx x, cplx y) { return g1.K(x) * g2.K(y) * RF(x, y); };
  } else {
    const cplx shift = which == 'e' ? kI * b : -kI * b;
    auto c1 = [=](cplx x) { return which == 'e' ? g1.ce(x) : g1.cf(x); };
    auto c2 = [=](cplx y) { return which == 'e' ? g2.ce(y) : g2.cf(y); };
    DF = [=](cplx x, cplx y) { return g1.K(x, -0.5) * c2(y) * F(x, y + shift) + c1(x) * F(x + shift, y) * g2.K(y, 0.5); };
    lhs = [=](cplx x, cplx y) { return c1(x) * RF(x + shift, y) * g2.K(y, -0.5) + g1.K(x, 0.5) * c2(y) * RF(x, y + shift); };
  }
  const auto& p = R.params();
  return detail::grid_check(std::string("rank-1 braiding ") + which, "Delta'(X) R F = R Delta(X) F", sample(p, lhs), sample(p, R(DF)),
                            tol);
}

/// ||R F|| / ||F|| - 1 with both norms taken as grid sums.
inline CheckResult unitarity_check(const ROperator& R, const Vector2& F, double tol = 1e-3) {
  const auto& p = R.params();
  const GridValues rf = sample(p, R(F)), f = sample(p, F);
  double nr = 0, nf = 0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    nr += std::norm(rf.values[k]);
    nf += std::norm(f.values[k]);
  }
  CheckResult r;
  r.name = "rank-1 unitarity";
  r.anchor = "||R F|| = ||F||";
  r.tolerance = tol;
  r.residual = std::abs(std::sqrt(nr / nf) - 1);
  r.status = r.residual <= tol ? Status::Pass : Status::Fail;
  r.detail = "norm ratio " + std::to_string(std::sqrt(nr / nf));
  return r;
}

/// Rank-1 R checks at the given parameters: braiding for e, f and K,
/// unitarity, all with one Gaussian test vector.
inline CheckReport rank1_R_suite(const Params& p, double tolerance = 1e-3) {
  const ROperator R(p);
  const Vector2 F = product({1.0, cplx(0.3, 0)}, {1.0, cplx(0, -0.2)});
  CheckReport rep;
  rep.add(timed([&] { return braiding_check(R, 'e', F, tolerance); }));
  rep.add(timed([&] { return braiding_check(R, 'f', F, tolerance); }));
  rep.add(timed([&] { return braiding_check(R, 'K', F, 1e-6); }));
  Params wide = p;
  wide.grid_lo = -4;
  wide.grid_hi = 4;
  const ROperator Rw(wide);
  rep.add(timed([&] { return unitarity_check(Rw, F, tolerance); }));
  return rep;
}

// ---------------------------------------------------------------------------
// u and v
// ---------------------------------------------------------------------------

/// e^{2 pi i (lambda^2 + Q^2/4)}.
inline cplx ribbon_constant(double lambda, double b) {
  const double Q = b + 1 / b;
  return std::exp(2 * kPi * kI * (lambda * lambda + Q * Q / 4));
}

/// u acting on a multiplication-invariant test function: the factor u f(x) / f(x),
/// from the integral representation obtained after applying m^op (1 (x) S) to R.
inline cplx u_factor(const qdilog::Evaluator& ev, double lambda, double x) {
  const double Q = ev.Q();
  const cplx a = Q / 2 + kI * x + kI * lambda, c = Q / 2 + kI * x - kI * lambda;
  // the right tail oscillates like e^{2 pi i t^2}; tilting it upwards makes it decay
  const qdilog::Contour k{cplx(0, 0.2), -1.0, std::exp(kI * (kPi / 8))};
  const cplx I = qdilog::contour_integral(
      [&](cplx t) {
        return std::exp(2 * kPi * kI * (x + t) * (x + t) + 2 * kPi * Q * t) * ev.G(a + kI * t) * ev.G(c + kI * t) * ev.G(-kI * t);
      },
      k);
  return I / (ev.G(a) * ev.G(c));
}

inline CheckReport verify_u_element(double lambda, double b = 0.7, double tol = 1e-4) {
  qdilog::QDilogParams qp;
  qp.b = b;
  const qdilog::Evaluator ev(qp);
  const double Q = ev.Q();
  const cplx v = ribbon_constant(lambda, b);
  CheckReport rep;
  const Gaussian f{1.0, cplx(0.2, 0.1)};
  for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    rep.add(timed([&] {
      const cplx lhs = u_factor(ev, lambda, x) * f(x);
      return detail::scalar_check("u-element x=" + std::to_string(x), "u f = e^{2 pi i (lambda^2 + Q^2/4)} K^{Q/b} f", lhs,
                                  v * std::exp(-2 * kPi * Q * x) * f(x), tol);
    }));
  }
  rep.add(timed([&] {
    const cplx constant = u_factor(ev, lambda, 0.3) / std::exp(-2 * kPi * Q * 0.3);
    return detail::scalar_check("ribbon phase", "u K^{-Q/b} = e^{2 pi i (lambda^2 + Q^2/4)}", constant, v, 1e-6);
  }));
  // S^2(e^{i t/b}) = e^{-2 pi Q t} e^{i t/b} equals conjugation by K^{Q/b}
  rep.add(timed([&] {
    const Gaussian phi{0.8, cplx(0.1, 0.3)};
    double worst = 0;
    for (double t : {-0.7, 0.4, 1.1})
      for (double x : {-0.3, 0.6}) {
        auto power_e = [&](const Vector1& psi, double y) {
          const cplx z = Q / 2 + kI * (y - lambda);
          return std::exp(kPi * kI * (y - lambda) * t) * std::exp(-kPi * kI * t * t / 2.0) * ev.G(z) / ev.G(z - kI * t) * psi(y - t);
        };
        const Vector1 Kinv = [&](cplx y) { return std::exp(2 * kPi * Q * y) * phi(y); };
        const cplx lhs = std::exp(-2 * kPi * Q * t) * power_e(phi, x);
        const cplx rhs = std::exp(-2 * kPi * Q * x) * power_e(Kinv, x);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
      }
    CheckResult r;
    r.name = "S^2 = Ad u";
    r.anchor = "e^{-2 pi Q t} e^{i t/b} = K^{Q/b} e^{i t/b} K^{-Q/b}";
    r.tolerance = 1e-10;
    r.residual = worst;
    r.status = worst <= r.tolerance ? Status::Pass : Status::Fail;
    return r;
  }));
  return rep;
}

// ---------------------------------------------------------------------------
// Weyl element
// ---------------------------------------------------------------------------

/// w phi(x) = e^{pi i (lambda^2 + Q^2/4)} phi(-x).
inline Vector1 weyl(double lambda, double b, Vector1 phi, int power = 1) {
  const double Q = b + 1 / b;
  const cplx c = std::exp(kPi * kI * (lambda * lambda + Q * Q / 4) * static_cast<double>(power));
  if (power == 1 || power == -1) return [c, phi](cplx x) { return c * phi(-x); };
  throw std::invalid_argument("weyl: power must be +-1");
}

inline CheckReport rank1_weyl_element_check(double lambda, double b = 0.7, double tol = 1e-8) {
  const Generators g{b, lambda};
  const std::vector<Gaussian> vectors{{1.0, cplx(0.3, 0)}, {0.6, cplx(-0.2, 0.5)}, {1.7, cplx(0, -0.4)}};
  const std::vector<double> xs{-1.1, -0.2, 0.4, 1.3};
  auto compare = [&](const std::string& name, const std::string& anchor, auto lhs_op, auto rhs_op, double t) {
    double worst = 0;
    for (const auto& v : vectors) {
      const Vector1 phi = v;
      const Vector1 l = lhs_op(phi), r = rhs_op(phi);
      for (double x : xs) worst = std::max(worst, std::abs(l(x) - r(x)) / std::max(std::abs(r(x)), 1e-300));
    }
    CheckResult c;
    c.name = name;
    c.anchor = anchor;
    c.tolerance = t;
    c.residual = worst;
    c.status = worst <= t ? Status::Pass : Status::Fail;
    return c;
  };
  auto conj = [&](auto op) {
    return [&, op](const Vector1& phi) { return weyl(lambda, b, op(weyl(lambda, b, phi, -1)), 1); };
  };
  auto Kop = [&](double pw) {
    return [&, pw](const Vector1& phi) -> Vector1 { return [=](cplx x) { return g.K(x, pw) * phi(x); }; };
  };
  auto eop = [&](const Vector1& phi) { return g.e(phi); };
  auto fop = [&](const Vector1& phi) { return g.f(phi); };
  CheckReport rep;
  rep.add(compare("w e w^-1 = f", "w e w^-1 = f", conj(eop), fop, tol));
  rep.add(compare("w f w^-1 = e", "w f w^-1 = e", conj(fop), eop, tol));
  rep.add(compare("w K w^-1 = K^-1", "w K w^-1 = K^-1", conj(Kop(1)), Kop(-1), tol));
  const cplx v = ribbon_constant(lambda, b);
  rep.add(compare(
      "w^2 = v", "w^2 = e^{2 pi i (lambda^2 + Q^2/4)}",
      [&](const Vector1& phi) { return weyl(lambda, b, weyl(lambda, b, phi)); },
      [&](const Vector1& phi) -> Vector1 { return [=](cplx x) { return v * phi(x); }; }, tol));
  return rep;
}

}  // namespace qrop::rank1
