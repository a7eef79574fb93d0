// rop: command-line front end for the verification suites.
//
// Exit codes: 0 when every executed check passes, 1 when a check fails,
// 2 for usage or configuration errors.

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "qrop/export.hpp"

using namespace qrop;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

/// key = value lines; '#' starts a comment. Unknown keys are errors so that
/// typos do not silently fall back to defaults.
void load_config(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    try {
      if (key == "b") c.b = std::stod(val);
      else if (key == "second_b") c.second_b = std::stod(val);
      else if (key == "lambdas") c.lambdas = parse_list(val);
      else if (key == "tolerance_scale") c.tolerance_scale = std::stod(val);
      else if (key == "grid_n") c.grid_n = std::stoi(val);
      else if (key == "seed") c.seed = static_cast<unsigned>(std::stoul(val));
      else if (key == "random_points") c.random_points = std::stoi(val);
      else throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    } catch (const std::logic_error&) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
}

/// "sl2", "A2", "B2", or "<type><rank>:<word>" such as "A3:3,2,1,3,2,3".
Rep parse_rep(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return builtin_rep(spec);
  const std::string t = spec.substr(0, colon);
  if (t.size() < 2) throw UsageError("bad representation '" + spec + "'");
  ReducedWord w;
  for (double x : parse_list(spec.substr(colon + 1))) w.push_back(static_cast<int>(x));
  return build_rep(cartan_data(parse_cartan_type(t[0]), std::stoi(t.substr(1))), w);
}

ReducedWord parse_word(const std::string& text, const Rep& r) {
  if (text.empty()) return r.word;
  ReducedWord w;
  for (double x : parse_list(text)) w.push_back(static_cast<int>(x));
  return w;
}

Gen parse_gen(const std::string& s) {
  if (s.size() < 2 || std::string("efK").find(s[0]) == std::string::npos) throw UsageError("bad generator '" + s + "' (expected e1, f2, K1, ...)");
  return Gen{s[0], std::stoi(s.substr(1)) - 1};
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

void print_table(const CheckReport& rep) {
  std::size_t w = 4;
  for (const auto& c : rep.items) w = std::max(w, c.name.size());
  w = std::min<std::size_t>(w, 70);
  for (const auto& c : rep.items) {
    std::cout << std::left << std::setw(static_cast<int>(w)) << c.name << "  " << std::setw(5) << status_str(c.status) << "  " << std::scientific
              << std::setprecision(2) << c.residual;
    if (c.tolerance > 0) std::cout << " <= " << c.tolerance;
    std::cout << std::defaultfloat;
    if (!c.pass() && !c.detail.empty()) std::cout << "  " << c.detail.substr(0, 160);
    std::cout << "\n";
  }
  std::cout << rep.items.size() - rep.failures() << "/" << rep.items.size() << " passed\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive representations, quantum dilogarithm and universal R-operator checks"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  RunConfig cfg;
  std::string config_path, out_path;
  std::optional<double> b_flag, tol_scale_flag;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--b", b_flag, "quantum parameter b, 0 < b < 1");
  app.add_option("--tolerance-scale", tol_scale_flag, "multiplier applied to all numeric tolerances");
  app.add_option("--out", out_path, "output file (JSON or CSV); '-' for stdout");

  std::string rep_name = "A2", word_text;
  bool barred = false;
  auto* build = app.add_subcommand("build", "build the factorized R-operator for a reduced word");
  build->add_option("--rep", rep_name, "sl2, A2, B2");
  build->add_option("--word", word_text, "reduced word of the longest element, e.g. 1,2,1");
  build->add_flag("--barred", barred, "use the rescaled generators in the factors");

  std::vector<std::string> gens;
  auto* braid = app.add_subcommand("verify-braiding", "derive Delta'(x) R = R Delta(x) for generators");
  braid->add_option("--rep", rep_name, "sl2, A2, B2");
  braid->add_option("--word", word_text, "reduced word");
  braid->add_option("--gen", gens, "generators such as e1 K2 (default: all)");

  int leg = 0;
  auto* qt = app.add_subcommand("verify-qt", "derive both quasi-triangularity identities");
  qt->add_option("--rep", rep_name, "sl2, A2, B2");
  qt->add_option("--word", word_text, "reduced word");
  qt->add_option("--leg", leg, "1 for (Delta x 1)R, 2 for (1 x Delta)R, 0 for both")->check(CLI::Range(0, 2));

  double lambda1 = 0.3, lambda2 = 0.45, tolerance = 1e-3;
  int grid_n = 0;
  auto* r1 = app.add_subcommand("rank1", "numerical checks of the rank-one R-operator");
  r1->add_option("--lambda1", lambda1, "parameter of the first factor");
  r1->add_option("--lambda2", lambda2, "parameter of the second factor");
  r1->add_option("--tolerance", tolerance, "max-norm tolerance for the braiding checks");
  r1->add_option("--grid", grid_n, "grid points per axis (default from config)");

  std::string selector;
  auto* suite = app.add_subcommand("run_suite", "run check groups: symbolic, numeric, all, or a comma list of groups");
  suite->alias("run-suite");
  suite->add_option("--select", selector, "relations, positivity, lusztig, transcendental, braiding, qt, interchange, casimir, a3, qdilog, rank1")
      ->required();

  std::string entity, format = "text";
  double re0 = 0, re1 = 0, im0 = -2, im1 = 2;
  int n_re = 9, n_im = 9;
  auto* dump = app.add_subcommand("dump", "write generators, root vectors, the R factorization or a G_b table");
  dump->add_option("entity", entity, "generators, roots, R, gb-table")->required();
  dump->add_option("--format", format, "text, json or csv");
  dump->add_option("--rep", rep_name, "sl2, A2, B2 or type:word");
  dump->add_option("--word", word_text, "reduced word");
  dump->add_option("--re", re0, "real part range start (default 0)");
  dump->add_option("--re-end", re1, "real part range end (default Q)");
  dump->add_option("--im", im0, "imaginary part range start");
  dump->add_option("--im-end", im1, "imaginary part range end");
  dump->add_option("--n-re", n_re, "samples along the real range")->check(CLI::PositiveNumber);
  dump->add_option("--n-im", n_im, "samples along the imaginary range")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (!config_path.empty()) load_config(config_path, cfg);
    if (b_flag) cfg.b = *b_flag;
    if (tol_scale_flag) cfg.tolerance_scale = *tol_scale_flag;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }

    if (*build) {
      const Rep r = parse_rep(rep_name);
      const auto R = build_R(r, parse_word(word_text, r), barred);
      if (!out_path.empty()) write_out(out_path, factorization_json(R).dump(2) + "\n");
      std::cout << r.label << " word " << word_str(R.word) << ": " << R.factors.size() << " factors\n";
      for (const auto& f : R.factors)
        std::cout << "  " << f.label << "  " << (f.certified ? "certified" : "UNCERTIFIED") << "  " << f.certificate << "\n";
      return R.all_certified() ? 0 : kExitFail;
    }

    if (*braid) {
      const Rep r = parse_rep(rep_name);
      const auto R = build_R(r, parse_word(word_text, r));
      std::vector<Gen> list;
      for (const auto& g : gens) list.push_back(parse_gen(g));
      if (list.empty()) list = braiding_generators(r);
      json traces = json::array();
      bool all = true;
      for (const auto& g : list) {
        const auto t = verify_braiding(R, g);
        std::string why;
        const bool ok = t.ok && t.reverify(&why);
        all = all && ok;
        std::cout << std::left << std::setw(6) << g.str() << (ok ? "pass" : "FAIL") << "  " << t.steps.size() << " steps"
                  << (ok ? "" : "  " + (t.ok ? why : t.failure)) << "\n";
        traces.push_back(trace_json(t, R.ta.space));
      }
      if (!out_path.empty()) write_out(out_path, traces.dump(2) + "\n");
      return all ? 0 : kExitFail;
    }

    if (*qt) {
      const Rep r = parse_rep(rep_name);
      const auto R = build_R(r, parse_word(word_text, r));
      json traces = json::array();
      bool all = true;
      for (int l : {1, 2}) {
        if (leg != 0 && l != leg) continue;
        const auto t = verify_quasitriangularity(R, l);
        std::string why;
        const bool ok = t.ok && t.reverify(&why);
        all = all && ok;
        std::cout << t.title << ": " << (ok ? "pass" : "FAIL") << "  " << t.steps.size() << " steps" << (ok ? "" : "  " + (t.ok ? why : t.failure)) << "\n";
        for (const auto& s : t.steps) std::cout << "  " << s.rule << " @" << s.pos << "\n";
        traces.push_back(trace_json(t, TensorAlgebra(r.space, 3).space));
      }
      if (!out_path.empty()) write_out(out_path, traces.dump(2) + "\n");
      return all ? 0 : kExitFail;
    }

    if (*r1) {
      cfg.lambdas = {lambda1, lambda2};
      if (grid_n > 0) cfg.grid_n = grid_n;
      cfg.tolerance_scale *= tolerance / 1e-3;
      cfg.validate();
      const auto rep = rank1_battery(cfg);
      print_table(rep);
      if (!out_path.empty()) write_out(out_path, report_json(rep, cfg, "rank1").dump(2) + "\n");
      return rep.all_pass() ? 0 : kExitFail;
    }

    if (*suite) {
      std::vector<std::string> groups;
      try {
        groups = expand_selector(selector);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto rep = run_suite(cfg, selector, [](const std::string& g, const CheckReport& r) {
        std::cerr << "[" << g << "] " << r.items.size() - r.failures() << "/" << r.items.size() << "\n";
      });
      print_table(rep);
      if (!out_path.empty()) write_out(out_path, report_json(rep, cfg, selector).dump(2) + "\n");
      return rep.all_pass() ? 0 : kExitFail;
    }

    if (*dump) {
      if (entity == "gb-table") {
        if (format != "csv" && format != "text") throw UsageError("gb-table supports csv only");
        qdilog::QDilogParams p;
        p.b = cfg.b;
        const qdilog::Evaluator ev(p);
        write_out(out_path, qdilog::G_table_csv(ev, re0, re1 == 0 ? ev.Q() : re1, im0, im1, n_re, n_im));
        return 0;
      }
      const Rep r = parse_rep(rep_name);
      if (entity == "generators") {
        if (format == "text") write_out(out_path, generators_text(r));
        else if (format == "json") write_out(out_path, generators_json(r).dump(2) + "\n");
        else throw UsageError("generators support text or json");
        return 0;
      }
      const auto R = build_R(r, parse_word(word_text, r));
      if (entity == "roots") {
        if (format == "json") {
          write_out(out_path, factorization_json(R)["roots"].dump(2) + "\n");
        } else if (format == "text") {
          std::ostringstream os;
          for (const auto& rv : R.roots) {
            os << "root (";
            for (std::size_t k = 0; k < rv.root.size(); ++k) os << (k ? "," : "") << rv.root[k];
            os << ")\n  e = " << rv.e.str(r.space) << "\n  f = " << rv.f.str(r.space) << "\n";
          }
          write_out(out_path, os.str());
        } else {
          throw UsageError("roots support text or json");
        }
        return 0;
      }
      if (entity == "R") {
        if (format != "json" && format != "text") throw UsageError("R supports json");
        write_out(out_path, factorization_json(R).dump(2) + "\n");
        return 0;
      }
      throw UsageError("unknown entity '" + entity + "' (generators, roots, R, gb-table)");
    }
  } catch (const UsageError& e) {
    std::cerr << "rop: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "rop: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    // rejected input such as a non-reduced word or an unknown node
    std::cerr << "rop: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "rop: error: " << e.what() << "\n";
    return kExitFail;
  }
  return 0;
}
