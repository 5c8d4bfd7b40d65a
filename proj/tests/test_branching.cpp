#include <catch_amalgamated.hpp>

#include <algorithm>

#include "oracles.hpp"
#include "polyrw/branching.hpp"
#include "polyrw/catalog.hpp"

using namespace polyrw;

namespace {

Path repeat(const Signature& s, const std::string& edge, int n) {
  Path p = empty_path(s.edges[*s.find_edge(edge)].src);
  p.edges.assign(n, *s.find_edge(edge));
  return p;
}

WordRedex at(const Signature& s, const std::string& gen, std::size_t offset) { return {*s.find_gen(gen), offset}; }

}  // namespace

TEST_CASE("word branchings are classified by their footprints") {
  const PolygraphSpec ass = build("ass");
  const Path w3 = repeat(ass, "w", 3), w4 = repeat(ass, "w", 4);
  CHECK(classify_word_branching(ass, {at(ass, "prodC", 0), at(ass, "prodC", 0)}) == BranchClass::Aspherical);
  CHECK(classify_word_branching(ass, {at(ass, "prodC", 0), at(ass, "prodC", 1)}) == BranchClass::Overlapping);
  CHECK(classify_word_branching(ass, {at(ass, "prodC", 0), at(ass, "prodC", 2)}) == BranchClass::Peiffer);
  CHECK(word_branching_minimal(ass, w3, {at(ass, "prodC", 0), at(ass, "prodC", 1)}));
  CHECK_FALSE(word_branching_minimal(ass, w4, {at(ass, "prodC", 0), at(ass, "prodC", 1)}));

  // Different objects: c.c.eF.d.d, products on either side of the functor.
  const PolygraphSpec pn = build("pntrans");
  CHECK(classify_word_branching(pn, {at(pn, "prodC", 0), at(pn, "prodD", 3)}) == BranchClass::Peiffer);
  CHECK(classify_word_branching(pn, {at(pn, "prodC", 0), at(pn, "fonctF", 1)}) == BranchClass::Overlapping);
  // A unit inserted between the two inputs of a product overlaps it; at
  // either end it does not.
  CHECK(classify_word_branching(pn, {at(pn, "prodC", 0), at(pn, "unitC", 1)}) == BranchClass::Overlapping);
  CHECK(classify_word_branching(pn, {at(pn, "prodC", 0), at(pn, "unitC", 2)}) == BranchClass::Peiffer);
}

TEST_CASE("classification does not depend on the order of the steps") {
  const PolygraphSpec pn = build("pntrans");
  for (int k = 0; k <= 3; ++k)
    for (const char* mixed : {"eF", "eG"})
      for (int m = 0; m <= 3; ++m) {
        Path p = repeat(pn, "c", k);
        p.edges.push_back(*pn.find_edge(mixed));
        for (int i = 0; i < m; ++i) p.edges.push_back(*pn.find_edge("d"));
        const auto rs = find_word_redexes(pn, p);
        for (const auto& a : rs)
          for (const auto& b : rs) CHECK(classify_word_branching(pn, {a, b}) == classify_word_branching(pn, {b, a}));
      }
}

TEST_CASE("diagram branchings are classified by their matched layers") {
  const PolygraphSpec b = build("bicat");
  const Diagram penta = elaborate_cell(b, "(prodC *0 2) *1 (prodC *0 1) *1 prodC", repeat(b, "c", 4));
  const auto rs = find_diagram_redexes(b, penta);
  REQUIRE(rs.size() == 2);
  CHECK(classify_diagram_branching(b, penta, rs[0], rs[0]) == BranchClass::Aspherical);
  CHECK(classify_diagram_branching(b, penta, rs[0], rs[1]) == BranchClass::Overlapping);
  CHECK(diagram_branching_minimal(b, penta, {rs[0], rs[1]}));

  // Two associators side by side.
  const Diagram two =
      canonicalize(b, elaborate_cell(b, "(prodC *0 1 *0 prodC *0 1) *1 (prodC *0 prodC)", repeat(b, "c", 6)));
  const auto qs = find_diagram_redexes(b, two);
  bool peiffer = false;
  for (const auto& x : qs)
    for (const auto& y : qs) {
      std::vector<int> common;
      std::set_intersection(x.nodes.begin(), x.nodes.end(), y.nodes.begin(), y.nodes.end(),
                            std::back_inserter(common));
      if (!common.empty()) continue;
      CHECK(classify_diagram_branching(b, two, x, y) == BranchClass::Peiffer);
      // Together they cover the diagram from border to border.
      CHECK(diagram_branching_minimal(b, two, {x, y}));
      peiffer = true;
    }
  CHECK(peiffer);
}

TEST_CASE("critical branching counts of the catalog") {
  struct Row {
    const char* id;
    std::size_t pairs2, triples2, pairs3;
  };
  for (const Row& r : {Row{"ass", 1, 1, 1}, Row{"bicat", 2, 3, 5}, Row{"pfonct", 6, 0, 13},
                       Row{"pntrans_pp", 5, 5, 6}, Row{"pntrans", 9, 0, 19}}) {
    INFO(r.id);
    const PolygraphSpec s = build(r.id);
    CHECK(critical_pairs_word(s).size() == r.pairs2);
    if (r.triples2) CHECK(critical_triples_word(s).size() == r.triples2);
    CHECK(critical_pairs_diagram(s).size() == r.pairs3);
  }
}

TEST_CASE("critical branchings of Ass") {
  const PolygraphSpec ass = build("ass");
  const auto pairs = critical_pairs_word(ass);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].source == repeat(ass, "w", 3));
  CHECK(pairs[0].steps == std::vector<WordRedex>{at(ass, "prodC", 0), at(ass, "prodC", 1)});
  CHECK(pairs[0].minimal);
  const auto triples = critical_triples_word(ass);
  REQUIRE(triples.size() == 1);
  CHECK(triples[0].source == repeat(ass, "w", 4));
  CHECK(critical_pairs_word(ass, std::vector<int>{}).empty());
  CHECK(critical_triples_word(ass, std::vector<int>{}).empty());
  CHECK(critical_pairs_diagram(ass, std::vector<int>{}).empty());
}

TEST_CASE("critical branchings are minimal and overlapping") {
  for (const char* id : {"bicat", "pntrans"}) {
    const PolygraphSpec s = build(id);
    for (const auto& b : critical_pairs_word(s)) {
      CHECK(b.cls == BranchClass::Overlapping);
      CHECK(b.minimal);
      CHECK(word_branching_minimal(s, b.source, b.steps));
      const auto rs = find_word_redexes(s, b.source);
      for (const auto& st : b.steps) CHECK(std::find(rs.begin(), rs.end(), st) != rs.end());
    }
    for (const auto& b : critical_pairs_diagram(s)) {
      REQUIRE(b.steps.size() == 2);
      CHECK(b.cls == BranchClass::Overlapping);
      CHECK(b.source == canonicalize(s, b.source));
      CHECK(diagram_branching_minimal(s, b.source, b.steps));
      CHECK(classify_diagram_branching(s, b.source, b.steps[1], b.steps[0]) == BranchClass::Overlapping);
    }
  }
}

TEST_CASE("word critical pairs and triples agree with brute force", "[oracle]") {
  const auto p = oracle::word_pairs_vs_bruteforce(7, 30);
  INFO(p.summary());
  CHECK(p.ok());
  const auto t = oracle::word_triples_vs_bruteforce(8, 15);
  INFO(t.summary());
  CHECK(t.ok());
}

TEST_CASE("diagram critical pairs agree with brute force", "[oracle]") {
  const auto r = oracle::diagram_pairs_vs_bruteforce(9, 40);
  INFO(r.summary());
  CHECK(r.ok());
}

TEST_CASE("canonical fillings") {
  const PolygraphSpec ass = build("ass");
  const Filling peiffer = canonical_filling(ass, repeat(ass, "w", 4), at(ass, "prodC", 0), at(ass, "prodC", 2));
  CHECK(peiffer.kind == Filling::Identity);
  const Filling same = canonical_filling(ass, repeat(ass, "w", 2), at(ass, "prodC", 0), at(ass, "prodC", 0));
  CHECK(same.kind == Filling::Identity);
  const Filling crit = canonical_filling(ass, repeat(ass, "w", 3), at(ass, "prodC", 0), at(ass, "prodC", 1));
  CHECK(crit.kind == Filling::Rule);
  CHECK(crit.rule == 0);
  CHECK_FALSE(crit.inverse);
  const Filling back = canonical_filling(ass, repeat(ass, "w", 3), at(ass, "prodC", 1), at(ass, "prodC", 0));
  CHECK(back.kind == Filling::Rule);
  CHECK(back.inverse);
  CHECK(rule_fills(ass, 0, repeat(ass, "w", 3), at(ass, "prodC", 0), at(ass, "prodC", 1)));
  CHECK_FALSE(rule_fills(ass, 0, repeat(ass, "w", 3), at(ass, "prodC", 1), at(ass, "prodC", 0)));
  // Critical pair with no rule at all.
  PolygraphSpec bare = ass;
  bare.rules3.clear();
  bare.cells4.clear();
  CHECK_THROWS(canonical_filling(bare, repeat(ass, "w", 3), at(ass, "prodC", 0), at(ass, "prodC", 1)));
}

TEST_CASE("confluence") {
  const auto ass = check_confluence_word(build("ass"), 1000, true);
  CHECK(ass.confluent);
  CHECK(ass.pairs == 1);
  const auto bicat = check_confluence_diagram(build("bicat"), 10000, true);
  CHECK(bicat.confluent);
  CHECK(bicat.verdict() == "confluent");
  CHECK(bicat.pairs == 5);
  const auto pn = check_confluence_diagram(build("pntrans"), 10000, true);
  CHECK_FALSE(pn.confluent);
  CHECK(pn.pairs == 19);
  CHECK(std::count_if(pn.joins.begin(), pn.joins.end(), [](const JoinResult& j) { return !j.joinable; }) == 2);
  // Without a termination certificate joining pairs only shows local
  // confluence.
  CHECK(check_confluence_diagram(build("bicat"), 10000, false).verdict() != "confluent");
}

TEST_CASE("the non-joinable PNTrans pair has distinct normal forms") {
  const PolygraphSpec pn = build("pntrans");
  const Path src = parse_path_expr(pn, R"({at:"•C",edges:["c","c","eG"]})");
  const Diagram witness = elaborate_cell(pn, "(prodC *0 transfo) *1 (fonctF *0 1) *1 (1 *0 prodD)", src);
  const auto rep = check_confluence_diagram(pn, 10000, true);
  bool found = false;
  for (const auto& j : rep.joins) {
    if (j.joinable) continue;
    const Diagram s = parse_diag_expr(pn, j.source_expr);
    if (!diagrams_equal(pn, s, witness)) continue;
    found = true;
    REQUIRE(j.normal_form_exprs.size() == 2);
    CHECK_FALSE(diagrams_equal(pn, parse_diag_expr(pn, j.normal_form_exprs[0]),
                               parse_diag_expr(pn, j.normal_form_exprs[1])));
  }
  CHECK(found);
}

TEST_CASE("Squier conditions") {
  SquierOptions opt;
  opt.terminating = true;
  SECTION("Ass at level 2 and depth 2") {
    const PolygraphSpec ass = build("ass");
    const auto r = check_squier(ass, 2, opt);
    CHECK(r.pass());
    REQUIRE(r.pairings.size() == 1);
    CHECK(r.pairings[0].cell == "assocC");
    CHECK(check_squier_depth2(ass, opt).pass());
  }
  SECTION("BiCat at level 3 needs composite fillings") {
    const PolygraphSpec b = build("bicat");
    const auto strict = check_squier(b, 3, opt);
    CHECK_FALSE(strict.pass());
    CHECK(strict.unmatched_branchings.size() == 3);
    CHECK(strict.unmatched_cells.empty());
    SquierOptions with = opt;
    with.supplement = builtin_supplement(b, opt.budget);
    CHECK(check_squier(b, 3, with).pass(true));
  }
  SECTION("PNTrans++") {
    const PolygraphSpec pp = build("pntrans_pp");
    CHECK(check_squier(pp, 2, opt).pass());
    const auto d2 = check_squier_depth2(pp, opt);
    CHECK(d2.pass());
    CHECK(d2.pairings.size() == 5);
    for (const auto& p : d2.pairings) CHECK(p.verdict == "shape verified");
  }
  SECTION("without termination the conditions are not established") {
    CHECK_FALSE(check_squier(build("ass"), 2, SquierOptions{}).pass());
    CHECK(check_squier(build("ass"), 2, SquierOptions{}).qualified);
  }
}

TEST_CASE("removing a 4-cell from PNTrans++ leaves one critical triple unmatched") {
  SquierOptions opt;
  opt.terminating = true;
  for (std::size_t k = 0; k < build("pntrans_pp").cells4.size(); ++k) {
    PolygraphSpec pp = build("pntrans_pp");
    INFO(pp.cells4[k].name);
    pp.cells4.erase(pp.cells4.begin() + static_cast<std::ptrdiff_t>(k));
    const auto r = check_squier_depth2(pp, opt);
    CHECK_FALSE(r.pass());
    CHECK(r.unmatched_branchings.size() == 1);
  }
}
