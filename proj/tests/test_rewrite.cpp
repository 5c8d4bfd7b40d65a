#include <catch_amalgamated.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "oracles.hpp"
#include "polyrw/catalog.hpp"
#include "polyrw/rewrite.hpp"

using namespace polyrw;

namespace {

Path path(const PolygraphSpec& s, const std::string& at, std::initializer_list<const char*> edges) {
  Path p = empty_path(*s.find_object(at));
  for (const char* e : edges) p.edges.push_back(*s.find_edge(e));
  return p;
}

Path ws(const PolygraphSpec& s, int n) {
  Path p = empty_path(0);
  p.edges.assign(n, *s.find_edge(s.name == "ass" ? "w" : "c"));
  return p;
}

std::vector<std::string> show(const PolygraphSpec& s, const std::vector<WordRedex>& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs) out.push_back(s.gens2[r.rule].name + "@" + std::to_string(r.offset));
  return out;
}

// Every normal form reachable from w, by plain substring replacement.
std::set<std::vector<EdgeId>> all_normal_forms(const PolygraphSpec& s, const std::vector<EdgeId>& w) {
  std::set<std::vector<EdgeId>> seen{w}, out;
  std::deque<std::vector<EdgeId>> q{w};
  while (!q.empty()) {
    auto cur = q.front();
    q.pop_front();
    bool any = false;
    for (const auto& g : s.gens2)
      for (std::size_t o = 0; o + g.src.size() <= cur.size(); ++o) {
        if (!std::equal(g.src.edges.begin(), g.src.edges.end(), cur.begin() + o)) continue;
        any = true;
        std::vector<EdgeId> n(cur.begin(), cur.begin() + o);
        n.insert(n.end(), g.tgt.edges.begin(), g.tgt.edges.end());
        n.insert(n.end(), cur.begin() + o + g.src.size(), cur.end());
        if (seen.insert(n).second) q.push_back(n);
      }
    if (!any) out.insert(cur);
  }
  return out;
}

// Sinks of the level-3 reduction graph from d, explored through every redex.
std::set<std::string> all_diagram_sinks(const PolygraphSpec& s, const Diagram& d) {
  std::map<std::string, Diagram> seen{{diagram_expr(s, canonicalize(s, d)), canonicalize(s, d)}};
  std::deque<Diagram> q{canonicalize(s, d)};
  std::set<std::string> sinks;
  while (!q.empty()) {
    const Diagram cur = q.front();
    q.pop_front();
    const auto rs = find_diagram_redexes(s, cur);
    if (rs.empty()) sinks.insert(diagram_expr(s, cur));
    for (const auto& r : rs)
      if (seen.emplace(diagram_expr(s, r.result), r.result).second) q.push_back(r.result);
  }
  return sinks;
}

}  // namespace

TEST_CASE("word redexes") {
  const PolygraphSpec ass = build("ass"), pp = build("pntrans_pp");
  CHECK(show(ass, find_word_redexes(ass, ws(ass, 3))) == std::vector<std::string>{"prodC@0", "prodC@1"});
  CHECK(show(pp, find_word_redexes(pp, path(pp, "•C", {"c", "eG"}))) ==
        std::vector<std::string>{"fonctG@0", "transfo@1"});
  CHECK(find_word_redexes(pp, path(pp, "•C", {"eF"})).empty());
}

TEST_CASE("empty-source generators match at every position") {
  const PolygraphSpec b = build("bicat");
  const auto rs = find_word_redexes(b, ws(b, 2));
  // unitC at 0, 1, 2 and prodC at 0, sorted by offset then name.
  CHECK(show(b, rs) == std::vector<std::string>{"prodC@0", "unitC@0", "unitC@1", "unitC@2"});
}

TEST_CASE("word steps") {
  const PolygraphSpec ass = build("ass"), pp = build("pntrans_pp");
  CHECK(apply_word_step(ass, ws(ass, 3), {*ass.find_gen("prodC"), 0}) == ws(ass, 2));
  const Path ceg = path(pp, "•C", {"c", "eG"});
  CHECK(apply_word_step(pp, ceg, {*pp.find_gen("transfo"), 1}) == path(pp, "•C", {"c", "eF", "d"}));
  CHECK(apply_word_step(pp, ceg, {*pp.find_gen("fonctG"), 0}) == path(pp, "•C", {"eG", "d"}));
  CHECK_THROWS_AS(apply_word_step(pp, ceg, {*pp.find_gen("prodC"), 0}), TypeError);
}

TEST_CASE("word normalization") {
  const PolygraphSpec ass = build("ass"), pp = build("pntrans_pp"), b = build("bicat");
  const auto [nf, seq] = normalize_path(ass, ws(ass, 4), 100);
  CHECK(nf == ws(ass, 1));
  CHECK(seq.steps.size() == 3);

  const Path ceg = path(pp, "•C", {"c", "eG"});
  const Path want = path(pp, "•C", {"eF", "d"});
  CHECK(normalize_path(pp, ceg, 100).first == want);
  CHECK(all_normal_forms(pp, ceg.edges) == std::set<std::vector<EdgeId>>{want.edges});

  CHECK_THROWS_AS(normalize_path(b, ws(b, 1), 10), BudgetExhausted);
  try {
    normalize_path(b, ws(b, 1), 10);
  } catch (const BudgetExhausted& e) {
    CHECK(std::string(e.what()).find("termination not established") != std::string::npos);
  }
}

TEST_CASE("word normalization properties") {
  const PolygraphSpec ass = build("ass"), pp = build("pntrans_pp");
  for (int n = 1; n <= 12; ++n) {
    const auto [nf, seq] = normalize_path(ass, ws(ass, n), 1000);
    CHECK(seq.steps.size() == std::size_t(n - 1));
    CHECK(replay(ass, seq) == nf);
  }
  // Every composable path of length <= 5 over c, eF, eG, d.
  std::vector<Path> paths;
  std::function<void(Path)> grow = [&](Path p) {
    paths.push_back(p);
    if (p.size() == 5) return;
    for (EdgeId e = 0; e < EdgeId(pp.edges.size()); ++e)
      if (pp.edges[e].src == pp.end(p)) {
        Path q = p;
        q.edges.push_back(e);
        grow(q);
      }
  };
  for (ObjId o = 0; o < ObjId(pp.objects.size()); ++o) grow(empty_path(o));
  for (const auto& p : paths) {
    const auto [nf, seq] = normalize_path(pp, p, 1000);
    INFO(path_to_string(pp, p));
    CHECK(find_word_redexes(pp, nf).empty());
    CHECK(replay(pp, seq) == nf);
    CHECK(pp.start(nf) == pp.start(p));
    CHECK(pp.end(nf) == pp.end(p));
    CHECK(all_normal_forms(pp, p.edges) == std::set<std::vector<EdgeId>>{nf.edges});
  }
}

TEST_CASE("diagram redexes") {
  const PolygraphSpec b = build("bicat"), pn = build("pntrans");
  const Diagram penta_src = elaborate_cell(b, "(prodC *0 2) *1 (prodC *0 1) *1 prodC", ws(b, 4));
  const RuleSubset assoc = std::vector<int>{*b.find_rule("assocC")};
  CHECK(find_diagram_redexes(b, penta_src, assoc).size() == 2);
  CHECK(find_diagram_redexes(b, id_diagram(ws(b, 3))).empty());

  const Diagram nat_src = elaborate_cell(pn, "(1 *0 transfo) *1 (fonctF *0 1) *1 (1 *0 prodD)",
                                         path(pn, "•C", {"c", "eG"}));
  const auto rs = find_diagram_redexes(pn, nat_src, std::vector<int>{*pn.find_rule("transfo_nat")});
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].nodes.size() == 3);
  CHECK(rs[0].step.top.length() == 0);
  CHECK(rs[0].step.bottom.length() == 0);
}

TEST_CASE("a rule source is found under any interleaving of the host") {
  const PolygraphSpec b = build("bicat");
  // assocC's source beside an unrelated prodC, written with the unrelated
  // layer between the two layers of the match.
  const Diagram host = elaborate_cell(b, "(prodC *0 3) *1 (2 *0 prodC) *1 (prodC *0 1)", ws(b, 5));
  const auto rs = find_diagram_redexes(b, host, std::vector<int>{*b.find_rule("assocC")});
  CHECK(rs.size() == 1);
}

TEST_CASE("diagram steps") {
  const PolygraphSpec b = build("bicat"), pf = build("pfonct");
  const Diagram penta_src = elaborate_cell(b, "(prodC *0 2) *1 (prodC *0 1) *1 prodC", ws(b, 4));
  std::set<std::string> results;
  for (const auto& r : find_diagram_redexes(b, penta_src)) {
    results.insert(diagram_expr(b, apply_diagram_step(b, penta_src, r.step)));
    CHECK(diagrams_equal(b, apply_diagram_step(b, penta_src, r.step), r.result));
    // Forwards then backwards at the same place.
    Step3 back = r.step;
    back.inverse = true;
    CHECK(diagrams_equal(b, apply_diagram_step(b, r.result, back), penta_src));
  }
  CHECK(results == std::set<std::string>{
                       diagram_expr(b, canonicalize(b, elaborate_cell(b, "(prodC *0 2) *1 (1 *0 prodC) *1 prodC", ws(b, 4)))),
                       diagram_expr(b, canonicalize(b, elaborate_cell(b, "(1 *0 prodC *0 1) *1 (prodC *0 1) *1 prodC", ws(b, 4))))});

  const Path cce = path(pf, "•C", {"c", "c", "eF"});
  const Diagram img_src = elaborate_cell(pf, "(prodC *0 1) *1 fonctF", cce);
  const auto rs = find_diagram_redexes(pf, img_src, std::vector<int>{*pf.find_rule("img_prodF")});
  REQUIRE(rs.size() == 1);
  CHECK(diagrams_equal(pf, apply_diagram_step(pf, img_src, rs[0].step),
                       elaborate_cell(pf, "(1 *0 fonctF) *1 (fonctF *0 1) *1 (1 *0 prodD)", cce)));
  CHECK_THROWS_AS(apply_diagram_step(pf, id_diagram(cce), rs[0].step), TypeError);
}

TEST_CASE("diagram normalization") {
  const PolygraphSpec b = build("bicat");
  const Diagram penta_src = elaborate_cell(b, "(prodC *0 2) *1 (prodC *0 1) *1 prodC", ws(b, 4));
  const Diagram comb = elaborate_cell(b, "(2 *0 prodC) *1 (1 *0 prodC) *1 prodC", ws(b, 4));
  const auto [nf, seq] = normalize_diagram(b, penta_src, 1000);
  CHECK(diagrams_equal(b, nf, comb));
  CHECK(all_diagram_sinks(b, penta_src) == std::set<std::string>{diagram_expr(b, canonicalize(b, comb))});
  CHECK(diagrams_equal(b, replay(b, seq), nf));

  const auto [same, none] = normalize_diagram(b, comb, 1000);
  CHECK(diagrams_equal(b, same, comb));
  CHECK(none.steps.empty());
}

TEST_CASE("diagram normalization properties on random BiCat 2-cells") {
  const PolygraphSpec b = build("bicat");
  std::mt19937 rng(17);
  for (int i = 0; i < 150; ++i) {
    const Diagram d = oracle::random_diagram_from(b, rng, ws(b, std::uniform_int_distribution<int>(0, 3)(rng)), 5);
    const auto [nf, seq] = normalize_diagram(b, d, 10000);
    INFO(diagram_summary(b, d));
    CHECK(find_diagram_redexes(b, nf).empty());
    CHECK(diagrams_equal(b, replay(b, seq), nf));
    CHECK(nf.src == d.src);
    CHECK(target(b, nf) == target(b, d));
    // Each step keeps both boundaries.
    Diagram cur = d;
    for (const auto& s : seq.steps) {
      const Diagram next = apply_diagram_step(b, cur, s);
      CHECK(next.src == cur.src);
      CHECK(target(b, next) == target(b, cur));
      cur = next;
    }
    CHECK(all_diagram_sinks(b, d).size() == 1);
  }
}

TEST_CASE("the default budget can be overridden from the environment") {
  CHECK(kDefaultBudget == 100000);
  ::setenv("POLYRW_BUDGET", "77", 1);
  CHECK(default_budget() == 77);
  ::setenv("POLYRW_BUDGET", "not a number", 1);
  CHECK(default_budget() == kDefaultBudget);
  ::unsetenv("POLYRW_BUDGET");
  CHECK(default_budget() == kDefaultBudget);
}
