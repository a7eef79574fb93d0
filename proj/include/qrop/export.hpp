#pragma once

// JSON and text serialization of reports, rewrite traces and R factorizations.
// Elements are written in their human-readable exponent form.

#include <json.hpp>
#include <sstream>
#include <string>

#include "suite.hpp"

namespace qrop {

using json = nlohmann::ordered_json;

/// Bumped whenever a field changes meaning or disappears.
inline constexpr const char* kReportSchema = "qrop-report/1";
inline constexpr const char* kTraceSchema = "qrop-trace/1";
inline constexpr const char* kFactorizationSchema = "qrop-factorization/1";

inline json to_json(const CheckResult& c) {
  return json{{"name", c.name},         {"anchor", c.anchor},   {"status", status_str(c.status)}, {"residual", c.residual},
              {"tolerance", c.tolerance}, {"seconds", c.seconds}, {"detail", c.detail}};
}

inline json to_json(const RunConfig& c) {
  return json{{"b", c.b},
              {"second_b", c.second_b},
              {"lambdas", c.lambdas},
              {"tolerance_scale", c.tolerance_scale},
              {"grid_n", c.grid_n},
              {"seed", c.seed},
              {"random_points", c.random_points}};
}

inline json report_json(const CheckReport& rep, const RunConfig& c, const std::string& selector) {
  json items = json::array();
  std::size_t pass = 0, fail = 0, err = 0;
  for (const auto& i : rep.items) {
    items.push_back(to_json(i));
    (i.status == Status::Pass ? pass : i.status == Status::Fail ? fail : err)++;
  }
  return json{{"schema", kReportSchema},
              {"selector", selector},
              {"config", to_json(c)},
              {"summary", {{"total", rep.items.size()}, {"pass", pass}, {"fail", fail}, {"error", err}}},
              {"checks", items}};
}

namespace detail {
inline json elements(const std::vector<OpElement>& xs, const Space& sp) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(x.str(sp));
  return a;
}
}  // namespace detail

inline json trace_json(const RewriteTrace& t, const Space& sp) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    json j{{"rule", s.rule}, {"hypothesis", s.hypothesis}, {"before", detail::elements(s.before, sp)}, {"after", detail::elements(s.after, sp)}};
    if (s.conjugation && !s.map && !s.substitution) {
      j["argument"] = s.arg.str(sp);
      j["scale"] = s.scale.str();
      j["side"] = side_str(s.side);
    }
    steps.push_back(std::move(j));
  }
  std::string why;
  const bool replay = t.reverify(&why);
  return json{{"schema", kTraceSchema}, {"title", t.title}, {"ok", t.ok}, {"replays", replay}, {"failure", t.ok ? why : t.failure}, {"steps", steps}};
}

inline json factor_json(const GbFactor& f, const Space& sp) {
  return json{{"label", f.label},         {"argument", f.arg.str(sp)}, {"scale", f.scale.str()}, {"star", f.star},
              {"certified", f.certified}, {"certificate", f.certificate}};
}

inline json trace_json(const FactorTrace& t, const Space& sp) {
  auto list = [&](const std::vector<GbFactor>& fs) {
    json a = json::array();
    for (const auto& f : fs) a.push_back(factor_json(f, sp));
    return a;
  };
  json steps = json::array();
  for (const auto& s : t.steps)
    steps.push_back(json{{"rule", s.rule}, {"hypothesis", s.hypothesis}, {"position", s.pos}, {"before", list(s.before)}, {"after", list(s.after)}});
  std::string why;
  const bool replay = t.reverify(&why);
  return json{{"schema", kTraceSchema}, {"title", t.title}, {"ok", t.ok},         {"replays", replay},
              {"failure", t.ok ? why : t.failure}, {"start", list(t.start)}, {"goal", list(t.goal)}, {"steps", steps}};
}

inline json factorization_json(const RFactorization& R) {
  json factors = json::array();
  for (const auto& f : R.factors) factors.push_back(factor_json(f, R.ta.space));
  json pre = json::array();
  for (const auto& row : R.prefactor) {
    json r = json::array();
    for (const auto& x : row) r.push_back(x.str());
    pre.push_back(r);
  }
  json roots = json::array();
  for (const auto& rv : R.roots) {
    json rt = json::array();
    for (int c : rv.root) rt.push_back(c);
    roots.push_back(json{{"root", rt}, {"node", rv.node + 1}, {"e", rv.e.str(R.rep.space)}, {"f", rv.f.str(R.rep.space)}});
  }
  return json{{"schema", kFactorizationSchema},
              {"rep", R.rep.label},
              {"word", R.word},
              {"barred", R.barred},
              {"prefactor_inverse_cartan", pre},
              {"roots", roots},
              {"factors", factors},
              {"all_certified", R.all_certified()}};
}

/// Generators one per line, in the order e, f, K by node.
inline std::string generators_text(const Rep& r) {
  std::ostringstream os;
  os << r.label << " on L^2(R^" << r.space.n() << "), coordinates";
  for (const auto& c : r.space.coords) os << " " << c;
  os << "\n";
  for (const char kind : {'e', 'f', 'K'})
    for (int i = 0; i < r.rank(); ++i) {
      if (kind == 'e' && !r.e[i]) continue;
      os << "  " << kind << i + 1 << " = " << r.gen({kind, i}).str(r.space) << "\n";
    }
  return os.str();
}

inline json generators_json(const Rep& r) {
  json g = json::object();
  for (const char kind : {'e', 'f', 'K'})
    for (int i = 0; i < r.rank(); ++i)
      if (kind != 'e' || r.e[i]) g[std::string(1, kind) + std::to_string(i + 1)] = r.gen({kind, i}).str(r.space);
  return json{{"rep", r.label}, {"word", r.word}, {"coordinates", r.space.coords}, {"parameters", r.space.params}, {"generators", g}};
}

}  // namespace qrop
