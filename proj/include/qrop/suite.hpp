#pragma once

// Named check groups used by the command-line front end and the acceptance
// runner. Each group returns a CheckReport; nothing here adds mathematics.

#include <array>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qdilog.hpp"
#include "rmatrix.hpp"

namespace qrop {

struct RunConfig {
  double b = 0.7;
  double second_b = 0.683;
  std::vector<double> lambdas{0.3, 0.45};
  double tolerance_scale = 1;
  int grid_n = 64;
  unsigned seed = 20261016;
  int random_points = 100;

  /// 0 < b < 1 is a parse-time invariant (so that 0 < b^2 < 1).
  void validate() const {
    if (!(b > 0 && b < 1)) throw std::invalid_argument("config: b must satisfy 0 < b < 1");
    if (!(second_b > 0 && second_b < 1)) throw std::invalid_argument("config: second_b must satisfy 0 < second_b < 1");
    if (lambdas.size() != 2) throw std::invalid_argument("config: lambdas needs exactly two values");
    if (!(tolerance_scale > 0)) throw std::invalid_argument("config: tolerance_scale must be positive");
    if (grid_n < 4) throw std::invalid_argument("config: grid_n must be at least 4");
    if (random_points < 1) throw std::invalid_argument("config: random_points must be positive");
  }
};

namespace detail {

inline CheckResult guarded(const std::string& name, const std::function<CheckResult()>& f) {
  return timed([&] {
    try {
      return f();
    } catch (const std::exception& e) {
      CheckResult r;
      r.name = name;
      r.status = Status::Error;
      r.detail = e.what();
      return r;
    }
  });
}

inline CheckResult flag(std::string name, std::string anchor, bool ok, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.status = ok ? Status::Pass : Status::Fail;
  r.residual = ok ? 0 : 1;
  r.detail = std::move(detail);
  return r;
}

inline void add_guarded_report(CheckReport& into, const std::string& name, const std::function<CheckReport()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  try {
    CheckReport r = f();
    if (r.items.size() == 1 && r.items[0].seconds == 0)
      r.items[0].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    into.merge(r);
  } catch (const std::exception& e) {
    CheckResult r;
    r.name = name;
    r.status = Status::Error;
    r.detail = e.what();
    into.add(r);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Symbolic groups
// ---------------------------------------------------------------------------

inline CheckReport relations_suite(const Rep& r) {
  CheckReport rep = check_quantum_group_relations(r);
  rep.merge(check_all_serre(r));
  return rep;
}

/// One entry per generator: the trace closes and replays step by step.
inline CheckReport braiding_suite(const Rep& r, const ReducedWord& w) {
  CheckReport rep;
  const auto R = build_R(r, w);
  for (const auto& g : braiding_generators(r)) {
    const std::string name = r.label + " word " + word_str(w) + " braiding " + g.str();
    rep.add(qrop::detail::guarded(name, [&] {
      const auto t = verify_braiding(R, g);
      std::string why;
      const bool replay = t.ok && t.reverify(&why);
      return qrop::detail::flag(name, "Delta'(x) R = R Delta(x)", replay,
                          t.ok ? (replay ? std::to_string(t.steps.size()) + " steps" : "replay: " + why) : t.failure);
    }));
  }
  return rep;
}

inline CheckReport qt_suite(const Rep& r, const ReducedWord& w) {
  CheckReport rep;
  const auto R = build_R(r, w);
  for (int leg : {1, 2}) {
    const std::string name = r.label + " word " + word_str(w) + (leg == 1 ? " (Delta x 1)R = R13 R23" : " (1 x Delta)R = R13 R12");
    rep.add(qrop::detail::guarded(name, [&] {
      const auto t = verify_quasitriangularity(R, leg);
      std::string why;
      const bool replay = t.ok && t.reverify(&why);
      return qrop::detail::flag(name, "quasi-triangularity of R", replay,
                          t.ok ? (replay ? std::to_string(t.steps.size()) + " steps" : "replay: " + why) : t.failure);
    }));
  }
  return rep;
}

/// Root vector e_ij is positive: a flat q_i^2-chain, or a recursive split
/// whose outermost exchange relation is q_i^2 or q_j^2 (the short one in
/// type B).
inline CheckResult root_vector_certificate(const Rep& r, int i, int j) {
  const std::string name = r.label + " e_" + std::to_string(i + 1) + std::to_string(j + 1) + " positivity";
  return qrop::detail::guarded(name, [&] {
    const OpElement x = e_ij(r, i, j);
    auto chain = manifest_positivity_certificate(x, r.qexp[i]);
    if (chain.ok) return qrop::detail::flag(name, "q_i^2-chain", true, std::to_string(x.size()) + "-term chain");
    std::string why;
    if (!certify_positive_structure(x, &why)) return qrop::detail::flag(name, "q_i^2-chain or positive split", false, chain.failure + "; " + why);
    const auto top = find_positive_split(x);
    int at = -1;
    for (int k : {i, j})
      if (top.ok && top.theta == r.qexp[k]) at = k;
    return qrop::detail::flag(name, "recursive positive split", at >= 0,
                              at >= 0 ? "split at q_" + std::to_string(at + 1) : "outer exchange " + top.theta.str());
  });
}

inline CheckReport casimir_suite() {
  CheckReport rep;
  rep.merge(check_casimir_central(builtin_sl2(), 0));
  rep.merge(check_casimir_central(builtin_a2(), 1));
  rep.add(qrop::detail::guarded("A2 Casimir c_2 normal form", [] {
    const auto nf = casimir_normal_form(builtin_a2(), 1);
    std::string why;
    const bool ok = nf.reached && nf.trace.reverify(&why);
    return qrop::detail::flag("A2 Casimir c_2 normal form", "c_2 ~ e^{2 pi b u} + e^{-2 pi b u} + e^{2 pi b p}", ok,
                        ok ? std::to_string(nf.trace.steps.size()) + " steps" : nf.trace.failure + why);
  }));
  return rep;
}

inline CheckReport a3_suite() {
  Rep r = build_rep(cartan_data(CartanType::A, 3), {3, 2, 1, 3, 2, 3});
  return relations_suite(r);
}

// ---------------------------------------------------------------------------
// Numeric groups
// ---------------------------------------------------------------------------

/// Identities of G_b at random strip points plus the integral identities at
/// several admissible parameter sets. The seed is recorded in the names.
inline CheckReport qdilog_battery(const RunConfig& c) {
  using namespace qdilog;
  QDilogParams p;
  p.b = c.b;
  const Evaluator ev(p);
  const double Q = ev.Q(), ts = c.tolerance_scale;
  CheckReport rep;
  std::mt19937 rng(c.seed);
  std::uniform_real_distribution<double> re(0.05 * Q, 0.95 * Q), im(-3, 3), xs(-4, 4);

  auto worst_of = [&](const std::string& name, const std::string& anchor, double tol, auto&& one) {
    rep.add(qrop::detail::guarded(name, [&] {
      CheckResult w;
      w.name = name;
      w.anchor = anchor;
      w.tolerance = tol;
      for (int k = 0; k < c.random_points; ++k) {
        const CheckResult r = one(cplx(re(rng), im(rng)));
        if (r.status == Status::Error) return r;
        if (r.residual >= w.residual) {
          w.residual = r.residual;
          w.detail = r.detail;
        }
      }
      w.status = w.residual <= tol ? Status::Pass : Status::Fail;
      w.detail = "seed " + std::to_string(c.seed) + ", " + std::to_string(c.random_points) + " points; worst: " + w.detail;
      return w;
    }));
  };
  worst_of("functional equation (b)", "G(z+ib^{+-1}) = (1 - e^{2 pi i b^{+-1} z}) G(z)", 1e-9 * ts,
           [&](cplx z) { return check_functional(ev, z, false, 1e-9 * ts); });
  worst_of("functional equation (1/b)", "dual shift", 1e-9 * ts, [&](cplx z) { return check_functional(ev, z, true, 1e-9 * ts); });
  worst_of("reflection", "G(z) G(Q - z) = e^{pi i z (z - Q)}", 1e-9 * ts, [&](cplx z) { return check_reflection(ev, z, 1e-9 * ts); });
  worst_of("conjugation", "conj G(z) = 1/G(Q - conj z)", 1e-9 * ts, [&](cplx z) { return check_conjugation(ev, z, 1e-9 * ts); });
  worst_of("self-duality", "G_b = G_{1/b}", 1e-9 * ts, [&](cplx z) { return check_self_duality(ev, z, 1e-9 * ts); });
  rep.add(qrop::detail::guarded("unit modulus on Q/2 + iR", [&] {
    CheckResult w;
    w.name = "unit modulus on Q/2 + iR";
    w.anchor = "|G(Q/2 + i x)| = 1";
    w.tolerance = 1e-10 * ts;
    for (int k = 0; k < c.random_points; ++k) w.residual = std::max(w.residual, check_unitarity(ev, xs(rng)).residual);
    w.status = w.residual <= w.tolerance ? Status::Pass : Status::Fail;
    return w;
  }));

  const std::vector<std::pair<cplx, cplx>> tb{{0.4 * Q, 0.3 * Q},
                                              {0.3 * Q, 0.5 * Q},
                                              {0.5 * Q + 0.2 * kI, 0.2 * Q - 0.1 * kI},
                                              {0.25 * Q, 0.6 * Q},
                                              {0.6 * Q - 0.3 * kI, 0.25 * Q + 0.4 * kI}};
  for (std::size_t k = 0; k < tb.size(); ++k) {
    std::ostringstream nm;
    nm << "tau-beta #" << k + 1 << " a=" << tb[k].first << " b=" << tb[k].second;
    rep.add(qrop::detail::guarded(nm.str(), [&] {
      auto r = check_tau_beta(ev, tb[k].first, tb[k].second, 1e-6 * ts);
      r.name = nm.str();
      return r;
    }));
  }
  const std::vector<std::array<cplx, 3>> tt{{0.3 * Q, 0.25 * Q, 0.2 * Q},
                                            {0.5 * Q, 0.1 * Q, 0.15 * Q},
                                            {0.2 * Q + 0.3 * kI, 0.3 * Q, 0.3 * Q - 0.2 * kI},
                                            {0.6 * Q, 0.2 * Q, 0.1 * Q + 0.5 * kI},
                                            {0.1 * Q - 0.4 * kI, 0.4 * Q + 0.1 * kI, 0.35 * Q}};
  for (std::size_t k = 0; k < tt.size(); ++k) {
    std::ostringstream nm;
    nm << "3-2 #" << k + 1 << " a=" << tt[k][0] << " b=" << tt[k][1] << " c=" << tt[k][2];
    rep.add(qrop::detail::guarded(nm.str(), [&] {
      auto r = check_three_two(ev, tt[k][0], tt[k][1], tt[k][2], 1e-6 * ts);
      r.name = nm.str();
      return r;
    }));
  }
  for (double x : {0.5, 2.0}) {
    rep.add(qrop::detail::guarded("fourier", [&] { return check_fourier_g(ev, x, 1e-6 * ts); }));
    rep.add(qrop::detail::guarded("fourier-star", [&] { return check_fourier_g_star(ev, x, 1e-6 * ts); }));
  }
  return rep;
}

inline CheckReport rank1_battery(const RunConfig& c) {
  rank1::Params p;
  p.b = c.b;
  p.lambda1 = c.lambdas[0];
  p.lambda2 = c.lambdas[1];
  p.grid_n = c.grid_n;
  CheckReport rep;
  qrop::detail::add_guarded_report(rep, "rank-1 R", [&] { return rank1::rank1_R_suite(p, 1e-3 * c.tolerance_scale); });
  for (double l : c.lambdas) {
    qrop::detail::add_guarded_report(rep, "u-element", [&] { return rank1::verify_u_element(l, c.b, 1e-4 * c.tolerance_scale); });
    qrop::detail::add_guarded_report(rep, "Weyl element", [&] { return rank1::rank1_weyl_element_check(l, c.b, 1e-8 * c.tolerance_scale); });
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Selectors
// ---------------------------------------------------------------------------

using SuiteFn = std::function<CheckReport(const RunConfig&)>;

/// Atomic groups in a fixed order.
inline const std::vector<std::pair<std::string, SuiteFn>>& suite_groups() {
  static const std::vector<std::pair<std::string, SuiteFn>> groups{
      {"relations",
       [](const RunConfig&) {
         CheckReport r = relations_suite(builtin_sl2());
         r.merge(relations_suite(builtin_a2()));
         r.merge(relations_suite(builtin_b2()));
         return r;
       }},
      {"positivity",
       [](const RunConfig&) {
         CheckReport r;
         r.add(root_vector_certificate(builtin_a2(), 0, 1));
         r.add(root_vector_certificate(builtin_a2(), 1, 0));
         r.add(root_vector_certificate(builtin_b2(), 1, 0));
         r.add(root_vector_certificate(builtin_b2(), 0, 1));
         return r;
       }},
      {"lusztig",
       [](const RunConfig&) {
         CheckReport r = check_braid_relations(builtin_a2());
         r.merge(check_braid_relations(builtin_b2()));
         return r;
       }},
      {"transcendental",
       [](const RunConfig&) {
         CheckReport r;
         for (const Rep& x : {builtin_sl2(), builtin_a2(), builtin_b2()})
           qrop::detail::add_guarded_report(r, x.label + " transcendental", [&] { return transcendental_check(x); });
         return r;
       }},
      {"braiding",
       [](const RunConfig&) {
         CheckReport r = braiding_suite(builtin_sl2(), {1});
         r.merge(braiding_suite(builtin_a2(), {1, 2, 1}));
         r.merge(braiding_suite(builtin_a2(), {2, 1, 2}));
         r.merge(braiding_suite(builtin_b2(), builtin_b2().word));
         return r;
       }},
      {"qt",
       [](const RunConfig&) {
         CheckReport r = qt_suite(builtin_sl2(), {1});
         r.merge(qt_suite(builtin_a2(), {1, 2, 1}));
         r.merge(qt_suite(builtin_a2(), {2, 1, 2}));
         r.merge(qt_suite(builtin_b2(), builtin_b2().word));
         return r;
       }},
      {"interchange", [](const RunConfig&) { return degenerate_interchange_check(builtin_a2()); }},
      {"casimir", [](const RunConfig&) { return casimir_suite(); }},
      {"a3", [](const RunConfig&) { return a3_suite(); }},
      {"qdilog", [](const RunConfig& c) { return qdilog_battery(c); }},
      {"rank1", [](const RunConfig& c) { return rank1_battery(c); }},
  };
  return groups;
}

/// Expand a comma-separated selector into group names. "symbolic" means all
/// exact groups, "numeric" the quadrature ones, "all" everything.
inline std::vector<std::string> expand_selector(const std::string& selector) {
  std::set<std::string> want;
  std::stringstream ss(selector);
  std::string tok;
  const std::set<std::string> numeric{"qdilog", "rank1"};
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    bool known = false;
    for (const auto& [n, f] : suite_groups()) {
      const bool hit = tok == n || tok == "all" || (tok == "symbolic" && !numeric.count(n)) || (tok == "numeric" && numeric.count(n));
      if (hit) want.insert(n);
      known = known || hit;
    }
    if (!known) throw std::invalid_argument("unknown selector '" + tok + "'");
  }
  if (want.empty()) throw std::invalid_argument("empty selector");
  std::vector<std::string> out;
  for (const auto& [n, f] : suite_groups())
    if (want.count(n)) out.push_back(n);
  return out;
}

inline CheckReport run_suite(const RunConfig& c, const std::string& selector,
                             const std::function<void(const std::string&, const CheckReport&)>& on_group = {}) {
  c.validate();
  CheckReport all;
  for (const auto& name : expand_selector(selector)) {
    for (const auto& [n, f] : suite_groups())
      if (n == name) {
        CheckReport g;
        qrop::detail::add_guarded_report(g, name, [&] { return f(c); });
        if (on_group) on_group(name, g);
        all.merge(g);
      }
  }
  return all;
}

}  // namespace qrop
