// Command-line driver: enumerate, gorenstein, verify-lemmas, pullback.
// Exit codes: 0 ok, 1 invalid input, 2 budget, 3 invariant violation.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "CLI11.hpp"
#include "json.hpp"
#include "tautring/enumerate.hpp"
#include "tautring/gcover.hpp"
#include "tautring/gorenstein.hpp"
#include "tautring/verify.hpp"

using namespace tautring;
using nlohmann::json;

namespace {

struct RunConfig {
  std::optional<int> g, n, max_edges, codim, loops;
  std::optional<long> budget;
  int threads = 1;
  unsigned long seed = kDefaultSeed;
  std::string out;
  std::string format = "json";
  bool inject_sign_error = false;
};

long budget_or(const RunConfig& c, long fallback) {
  const long b = c.budget.value_or(fallback);
  if (b <= 0) throw InvalidInput("budget must be positive");
  return b;
}

std::pair<int, int> require_gn(const RunConfig& c) {
  if (!c.g || !c.n) throw InvalidInput("--g and --n are required");
  if (!stable_type(*c.g, *c.n))
    throw InvalidInput("unstable (g,n) = (" + std::to_string(*c.g) + "," + std::to_string(*c.n) + ")");
  return {*c.g, *c.n};
}

void emit(const RunConfig& c, const json& j, const std::string& table) {
  std::string text = c.format == "json" ? j.dump(2) + "\n" : table;
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw InvalidInput("cannot open output file " + c.out);
  f << text;
}

int cmd_enumerate(const RunConfig& c) {
  auto [g, n] = require_gn(c);
  const long budget = budget_or(c, kDefaultGraphBudget);
  const int d = moduli_dimension(g, n);
  std::ostringstream t;
  json j{{"g", g}, {"n", n}};
  if (c.codim) {
    if (*c.codim < 0 || *c.codim > d) throw InvalidInput("--codim must lie in 0..3g-3+n");
    auto gens = generator_basis(g, n, *c.codim, budget);
    j["codim"] = *c.codim;
    j["count"] = gens.size();
    j["generators"] = json::array();
    t << "codim " << *c.codim << " generators of (" << g << "," << n << "): " << gens.size() << "\n";
    size_t i = 0;
    for (const auto& s : gens) {
      j["generators"].push_back(to_json(s, Rational(1)));
      t << ++i << "\t" << to_json(s.graph).dump() << "\tkappa=" << json(s.decoration.kappa).dump()
        << "\tpsi=" << json(s.decoration.psi_leg).dump() << json(s.decoration.psi_half_edge).dump() << "\n";
    }
  } else {
    const int e = c.max_edges.value_or(d);
    auto graphs = enumerate_stable_graphs(g, n, e, budget);
    j["max_edges"] = e;
    j["count"] = graphs.size();
    j["graphs"] = json::array();
    t << "stable graphs of (" << g << "," << n << ") with at most " << e << " edges: " << graphs.size() << "\n";
    t << "#\tedges\t|Aut|\tgraph\n";
    size_t i = 0;
    for (const auto& G : graphs) {
      const Integer aut = graph_automorphisms(G);
      json gj = to_json(G);
      gj["automorphisms"] = aut.get_str();
      j["graphs"].push_back(gj);
      t << ++i << "\t" << G.num_edges() << "\t" << aut.get_str() << "\t" << to_json(G).dump() << "\n";
    }
  }
  emit(c, j, t.str());
  return 0;
}

int cmd_gorenstein(const RunConfig& c) {
  auto [g, n] = require_gn(c);
  const long budget = budget_or(c, kDefaultGeneratorBudget);
  const auto status = known_status(g, n);
  try {
    if (c.codim) {
      auto P = pairing_matrix(g, n, *c.codim, budget, c.threads);
      const long rk = rank_exact(P);
      json j{{"g", g}, {"n", n}, {"codim", *c.codim}, {"rows", P.rows.size()},
             {"cols", P.cols.size()}, {"rank", rk}, {"status", to_json(status)}};
      std::ostringstream t;
      t << "pairing (" << g << "," << n << ") codim " << *c.codim << ": " << P.rows.size() << " x "
        << P.cols.size() << ", rank " << rk << "\n";
      emit(c, j, t.str());
      return 0;
    }
    const auto dims = betti_oracle(g, n);
    const auto r = gorenstein_report(g, n, dims, budget, c.threads);
    json j = to_json(r);
    j["dimension_oracle"] = dims ? json(*dims) : json(nullptr);
    std::ostringstream t;
    t << "tautological pairing report for (" << g << "," << n << ")\n";
    t << "degree\trank\tdim\n";
    for (size_t k = 0; k < r.degree_ranks.size(); ++k)
      t << k << "\t" << r.degree_ranks[k] << "\t" << (dims ? std::to_string((*dims)[k]) : "-") << "\n";
    t << "socle: " << (r.socle ? "rank 1" : "FAILED") << "\n";
    t << "defects: " << json(r.defects).dump() << "\n";
    t << "known status: " << to_string(status.verdict) << " (" << status.source << ")\n";
    emit(c, j, t.str());
    return 0;
  } catch (const BudgetExceeded& e) {
    json j{{"error", "budget"},
           {"message", std::string("pairing computation is not feasible within budget: ") + e.what()},
           {"known_status", to_json(status)}};
    std::ostringstream t;
    t << "error: pairing computation is not feasible within budget: " << e.what() << "\n"
      << "known status: " << to_string(status.verdict) << " (" << status.source << ")\n";
    emit(c, j, t.str());
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  }
}

int cmd_verify(const RunConfig& c) {
  std::vector<Check> checks;
  GluingOptions opt;
  if (c.inject_sign_error) opt.excess_sign = 1;
  if (c.g || c.n) {
    auto [g, n] = require_gn(c);
    for (auto& k : forgetful_psi_checks(g, n)) checks.push_back(k);
    if (g >= 2)
      for (auto& k : elliptic_tail_checks(g, opt)) checks.push_back(k);
  } else {
    for (auto [g, n] : {std::pair{1, 1}, {0, 4}})
      for (auto& k : forgetful_psi_checks(g, n)) checks.push_back(k);
    for (auto& k : elliptic_tail_checks(2, opt)) checks.push_back(k);
    const auto pr = projection_formula_check(40, c.seed);
    checks.push_back({"projection formula, " + std::to_string(pr.pairs) + " seeded pairs", pr.mismatches == 0,
                      pr.mismatches ? std::to_string(pr.mismatches) + " mismatches" : ""});
  }
  bool all = true;
  json j{{"checks", json::array()}, {"seed", c.seed}};
  std::ostringstream t;
  for (const auto& k : checks) {
    all = all && k.pass;
    j["checks"].push_back(to_json(k));
    t << (k.pass ? "PASS  " : "FAIL  ") << k.name << (k.detail.empty() ? "" : "  [" + k.detail + "]") << "\n";
  }
  j["all_pass"] = all;
  t << (all ? "all identities hold\n" : "some identities FAILED\n");
  emit(c, j, t.str());
  return all ? 0 : 3;
}

int cmd_pullback(const RunConfig& c) {
  const int k = c.loops.value_or(1);
  if (k < 0) throw InvalidInput("--loops must be nonnegative");
  const int g = 2 + k;
  if (c.g && *c.g != g) throw InvalidInput("--g must equal 2 + loops for the loop tower");
  const long budget = budget_or(c, 5'000'000);
  const auto p = pullback_hurwitz(loop_tower(k), g, MonodromyData::bielliptic(g), budget);
  std::ostringstream t;
  t << "pullback of the bielliptic cycle along a genus-2 vertex with " << k << " loops (g=" << g << ")\n";
  t << "#\tverts\tedges\texcess\tclassification\tcoefficient\n";
  std::map<std::string, int> summary;
  size_t i = 0;
  for (const auto& term : p.terms) {
    const auto& G = term.structure.source.graph;
    const auto rule = term.classification.rule();
    ++summary[rule];
    t << ++i << "\t" << G.num_vertices() << "\t" << G.num_edges() << "\t" << term.structure.excess_edges.size()
      << "\t" << rule << "\t"
      << (term.classification.tautological() ? "tautological" : to_fraction_string(term.classification.multiplicity))
      << "\n";
  }
  t << "summary:\n";
  for (const auto& [rule, count] : summary) t << "  " << rule << "\t" << count << "\n";
  t << "c = " << to_fraction_string(p.c) << "\n";
  emit(c, to_json(p), t.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tautological ring computations on moduli of stable curves"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags win");
  RunConfig cfg;
  app.add_option("--g", cfg.g, "genus");
  app.add_option("--n", cfg.n, "number of markings");
  app.add_option("--max-edges", cfg.max_edges, "edge bound for enumeration");
  app.add_option("--codim", cfg.codim, "codimension (generator list or one pairing matrix)");
  app.add_option("--loops", cfg.loops, "loops on the genus-2 vertex of the tower");
  app.add_option("--budget", cfg.budget, "resource budget (env TAUTRING_BUDGET)");
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1, 256));
  app.add_option("--seed", cfg.seed, "seed for randomized suites");
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--format", cfg.format, "json or table")->check(CLI::IsMember({"json", "table"}));
  app.add_flag("--inject-sign-error", cfg.inject_sign_error, "flip the excess sign (test mode)");
  auto* enumerate = app.add_subcommand("enumerate", "list stable graphs or decorated generators")->fallthrough();
  auto* gorenstein = app.add_subcommand("gorenstein", "pairing ranks and Gorenstein report")->fallthrough();
  auto* verify = app.add_subcommand("verify-lemmas", "run the identity suites")->fallthrough();
  auto* pullback = app.add_subcommand("pullback", "pull back the bielliptic cycle to a loop tower")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  // precedence: flag, then environment, then config file
  bool budget_flag = false;
  for (int i = 1; i < argc; ++i) budget_flag = budget_flag || std::string_view(argv[i]).starts_with("--budget");
  if (const char* env = std::getenv("TAUTRING_BUDGET"); env && !budget_flag) {
    try {
      cfg.budget = std::stol(env);
    } catch (const std::exception&) {
      std::cerr << "invalid input: TAUTRING_BUDGET is not an integer\n";
      return 1;
    }
  }

  try {
    if (*enumerate) return cmd_enumerate(cfg);
    if (*gorenstein) return cmd_gorenstein(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*pullback) return cmd_pullback(cfg);
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::bad_alloc&) {
    std::cerr << "out of memory\n";
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
