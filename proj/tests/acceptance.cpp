// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "tautring/correlators.hpp"
#include "tautring/gcover.hpp"
#include "tautring/gorenstein.hpp"
#include "tautring/verify.hpp"

using namespace tautring;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) note = what;
    pass = pass && ok;
  }
};

Rational tau(int g, std::vector<int> a) { return psi_intersection({g, std::move(a)}); }

Outcome forgetful_psi() {
  Outcome o;
  int n = 0;
  for (auto [g, m] : {std::pair{1, 1}, {0, 4}})
    for (const auto& c : forgetful_psi_checks(g, m)) {
      o.require(c.pass, c.name);
      ++n;
    }
  if (o.pass) o.note = std::to_string(n) + " generators";
  return o;
}

Outcome elliptic_tail() {
  Outcome o;
  for (const auto& c : elliptic_tail_checks(2)) o.require(c.pass, c.name + " " + c.detail);
  if (o.pass) o.note = "expansion term-for-term, projection -1/24";
  return o;
}

Outcome correlators() {
  Outcome o;
  o.require(tau(0, {0, 0, 0}) == 1, "<tau_0^3>_0");
  o.require(tau(1, {1}) == Rational(1) / 24, "<tau_1>_1");
  int checked = 0;
  for (int g = 0; g <= 3; ++g)
    for (int n = 1; n <= 11; ++n) {
      if (!stable_type(g, n) || moduli_dimension(g, n) > 8) continue;
      std::vector<int> a;
      std::function<void(int, int)> rec = [&](int left, int lo) {
        if (static_cast<int>(a.size()) == n) {
          if (left != 0) return;
          const Rational whole = tau(g, a);
          if (n >= 2 && stable_type(g, n - 1))
            for (int pos = 0; pos < n; ++pos) {
              std::vector<int> rest(a);
              rest.erase(rest.begin() + pos);
              if (a[pos] == 0) {
                Rational s = 0;
                for (size_t j = 0; j < rest.size(); ++j)
                  if (rest[j] > 0) {
                    auto b = rest;
                    --b[j];
                    s += tau(g, b);
                  }
                o.require(whole == s, "string equation");
                ++checked;
              } else if (a[pos] == 1) {
                o.require(whole == Rational(2 * g - 2 + n - 1) * tau(g, rest), "dilaton equation");
                ++checked;
              }
            }
          return;
        }
        for (int x = lo; x <= left; ++x) {
          a.push_back(x);
          rec(left - x, x);
          a.pop_back();
        }
      };
      rec(moduli_dimension(g, n), 0);
    }
  if (o.pass) o.note = std::to_string(checked) + " string/dilaton instances";
  return o;
}

Outcome gorenstein_ranks() {
  Outcome o;
  std::vector<std::pair<int, int>> cases = {{0, 3}, {0, 4}, {0, 5}, {0, 6}, {1, 1}, {1, 2}, {1, 3}};
  for (auto [g, n] : cases) {
    const auto dims = betti_oracle(g, n);
    const auto r = gorenstein_report(g, n, dims, kDefaultGeneratorBudget, 2);
    const std::string at = "(" + std::to_string(g) + "," + std::to_string(n) + ")";
    o.require(dims && r.degree_ranks == *dims, "ranks differ from dimension oracle at " + at);
    o.require(r.socle, "socle at " + at);
    o.require(r.defects.empty(), "defects at " + at);
  }
  if (o.pass) o.note = std::to_string(cases.size()) + " spaces full rank";
  return o;
}

Outcome known_status_tables() {
  // rows: genus -> first n outside the tabulated range
  const std::map<int, int> c = {{2, 20}, {3, 9}, {4, 7}, {5, 5}, {6, 3}, {7, 1}};
  const std::map<int, int> d = {{2, 20}, {3, 12}, {4, 10}, {5, 8}, {6, 6}, {7, 4}, {8, 1}};
  const std::map<int, int> e = {{1, 11}, {2, 10}, {3, 9}, {4, 7}, {5, 5}, {6, 3}, {7, 1}};
  auto below = [](const std::map<int, int>& t, int g, int n) {
    auto it = t.find(g);
    return it != t.end() && n < it->second;
  };
  Outcome o;
  int cells = 0;
  for (int g = 0; g <= 12; ++g)
    for (int n = 0; n <= 40; ++n) {
      if (!stable_type(g, n)) continue;
      const auto s = known_status(g, n);
      Verdict expected = Verdict::ConjecturedGorenstein;
      if (g <= 1) expected = Verdict::GorensteinProven;
      else if (2 * g + n >= 24) expected = Verdict::NotGorensteinProven;
      else if (below(c, g, n) || below(d, g, n)) expected = Verdict::GorensteinProven;
      const std::string at = "(" + std::to_string(g) + "," + std::to_string(n) + ")";
      o.require(s.verdict == expected, "verdict at " + at);
      o.require(s.odd_cohomology_vanishes == (g == 0 || below(e, g, n)), "odd cohomology at " + at);
      ++cells;
    }
  if (o.pass) o.note = std::to_string(cells) + " cells";
  return o;
}

Outcome one_loop_partition() {
  Outcome o;
  const auto p = pullback_hurwitz(loop_tower(1), 3, MonodromyData::bielliptic(3), 5'000'000);
  const std::set<std::string> rules = {"property-1", "property-2", "property-3", "property-4",
                                       "property-5", "property-6", "property-7", "boundary-supported",
                                       "bielliptic-multiple"};
  Rational total = 0;
  for (const auto& t : p.terms) {
    const auto props = tautological_properties(t.structure);
    const auto rule = t.classification.rule();
    o.require(rules.count(rule) == 1, "unexpected rule " + rule);
    if (t.classification.kind == TermKind::Property)
      o.require(!props.empty() && props.front() == t.classification.property, "property mismatch");
    if (t.classification.kind == TermKind::BiellipticMultiple) {
      o.require(props.empty(), "bielliptic term also satisfies a property");
      o.require(t.classification.multiplicity > 0, "nonpositive multiplicity");
      total += t.classification.multiplicity;
    }
  }
  o.require(total == p.c, "c differs from the sum of multiplicities");
  o.require(p.c > 0, "c is not positive");
  if (o.pass) o.note = std::to_string(p.terms.size()) + " structures, c = " + to_fraction_string(p.c);
  return o;
}

Outcome bielliptic_shape() {
  Outcome o;
  std::ostringstream note;
  for (int k = 0; k <= 2; ++k) {
    const int g = 2 + k;
    const auto p = pullback_hurwitz(loop_tower(k), g, MonodromyData::bielliptic(g), 5'000'000);
    int residue = 0;
    for (const auto& t : p.terms)
      if (!t.classification.tautological()) {
        ++residue;
        o.require(t.classification.kind == TermKind::BiellipticMultiple, "non-bielliptic residue");
        o.require(detail::bielliptic_shape_ok(t.structure), "residue term of the wrong orbit shape");
      }
    o.require(residue > 0 && p.c > 0, "empty residue at " + std::to_string(k) + " loops");
    note << k << " loops: c = " << to_fraction_string(p.c) << "; ";
  }
  bool gated = false;
  try {
    pullback_hurwitz(loop_tower(10), 12, MonodromyData::bielliptic(12), 1'000'000);
  } catch (const BudgetExceeded&) {
    gated = true;
  }
  o.require(gated, "ten loops did not hit the budget");
  if (o.pass) o.note = note.str() + "10 loops: budget exceeded";
  return o;
}

Outcome projection_formula() {
  Outcome o;
  const auto r = projection_formula_check(500, kDefaultSeed);
  o.require(r.pairs == 500, "pair count");
  o.require(r.mismatches == 0, std::to_string(r.mismatches) + " mismatches");
  if (o.pass) o.note = "500 pairs, " + std::to_string(r.nonzero) + " nonzero";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_seconds;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"forgetful-psi identity on (1,1) and (0,4)", 1, forgetful_psi},
      {"elliptic-tail self-intersection at g=2", 5, elliptic_tail},
      {"correlator anchors and string/dilaton, sum <= 8", 10, correlators},
      {"pairing ranks match dimensions, socle rank 1", 600, gorenstein_ranks},
      {"known status matches the frozen tables", 1, known_status_tables},
      {"one-loop partition with positive c", 120, one_loop_partition},
      {"bielliptic residue shape on loop towers", 600, bielliptic_shape},
      {"projection formula on 500 seeded pairs", 120, projection_formula},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.note += " (over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit)";
    }
    failures += !o.pass;
    std::printf("%s criterion %d: %s [%.2f s] %s\n", o.pass ? "PASS" : "FAIL", index, c.name, secs, o.note.c_str());
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
