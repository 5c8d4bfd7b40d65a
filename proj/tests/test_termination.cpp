#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "polyrw/catalog.hpp"
#include "polyrw/termination.hpp"

using namespace polyrw;

namespace {

AffineForm form(long long c, std::map<int, long long> coeffs) {
  AffineForm f = AffineForm::constant_form(c);
  f.coeffs = std::move(coeffs);
  return f;
}

std::vector<std::string> texts(const CertReport& r) {
  std::vector<std::string> out;
  for (const auto& l : r.lines) out.push_back(l.text());
  return out;
}

bool has_line(const CertReport& r, const std::string& text) {
  const auto t = texts(r);
  return std::find(t.begin(), t.end(), text) != t.end();
}

Path cs(const PolygraphSpec& s, int n) {
  Path p = empty_path(0);
  p.edges.assign(n, *s.find_edge(s.name == "ass" ? "w" : "c"));
  return p;
}

}  // namespace

TEST_CASE("affine dominance examples") {
  // i, j, k, l are variables 0..3.
  const AffineForm lhs = form(2, {{0, 2}, {1, 1}, {3, 2}}), rhs = form(2, {{0, 1}, {1, 1}, {3, 2}});
  CHECK(render(lhs) == "2i+j+2l+2");
  CHECK(render(rhs) == "i+j+2l+2");
  CHECK(affine_dominates(lhs, rhs, true));
  CHECK(affine_dominates(form(0, {{0, 1}, {1, 1}}), form(0, {{0, 1}, {1, 1}}), false));
  CHECK_FALSE(affine_dominates(form(0, {{0, 1}, {1, 1}}), form(0, {{0, 1}, {1, 1}}), true));
  CHECK_FALSE(affine_dominates(AffineForm::var(0), form(1, {{0, 1}}), true));
  // Fine on small inputs, wrong for large ones.
  CHECK_FALSE(affine_dominates(AffineForm::constant_form(10), AffineForm::var(0), false));
  CHECK(render(AffineForm{}) == "0");
}

TEST_CASE("affine dominance agrees with evaluation on a grid", "[oracle]") {
  const auto r = oracle::affine_vs_grid(99, 500);
  INFO(r.summary());
  CHECK(r.cases == 500);
  CHECK(r.ok());
}

TEST_CASE("variable names") {
  CHECK(variable_name(0) == "i");
  CHECK(variable_name(3) == "l");
  CHECK(variable_index("l") == 3);
  CHECK(variable_index(variable_name(30)) == 30);
}

TEST_CASE("weight certificates") {
  SECTION("the lexicographic weight on PNTrans++") {
    const CertReport r = check_cert(build("pntrans_pp"), builtin_cert("pntrans_pp_tau"));
    CHECK(r.pass);
    for (const char* line : {"prodC: (2,0,0) > (1,0,0)", "prodD: (0,0,2) > (0,0,1)", "fonctF: (1,1,0) > (0,1,1)",
                             "fonctG: (1,2,0) > (0,2,1)", "transfo: (0,2,0) > (0,1,1)"}) {
      INFO(line);
      CHECK(has_line(r, line));
    }
    CHECK(r.lines.size() == 5);
  }
  SECTION("length on Ass") {
    const CertReport r = check_cert(build("ass"), builtin_cert("builtin:ass_length"));
    CHECK(r.pass);
    CHECK(has_line(r, "prodC: (2) > (1)"));
  }
  SECTION("no additive weight orients unitC") {
    const PolygraphSpec b = build("bicat");
    for (WeightOrder o : {WeightOrder::Lex, WeightOrder::Product})
      for (std::vector<long long> v : {std::vector<long long>{0}, {1}, {5}, {0, 1}, {3, 0, 2}}) {
        const CertReport r = check_weight_cert(b, WeightCert{"try", o, {{"c", v}}});
        CHECK_FALSE(r.pass);
        const auto bad = std::find_if(r.lines.begin(), r.lines.end(), [](const CertCheckLine& l) { return !l.ok; });
        REQUIRE(bad != r.lines.end());
        CHECK(std::any_of(r.lines.begin(), r.lines.end(),
                          [](const CertCheckLine& l) { return l.subject == "unitC" && !l.ok; }));
      }
  }
  SECTION("a weight missing an edge is an error") {
    CHECK_THROWS_AS(check_weight_cert(build("pntrans_pp"), WeightCert{"partial", WeightOrder::Lex, {{"c", {1}}}}),
                    CertificateError);
  }
  SECTION("orders") {
    CHECK(weight_greater({1, 0}, {0, 9}, WeightOrder::Lex));
    CHECK_FALSE(weight_greater({1, 0}, {0, 9}, WeightOrder::Product));
    CHECK(weight_greater({2, 9}, {1, 9}, WeightOrder::Product));
    CHECK_FALSE(weight_greater({1, 1}, {1, 1}, WeightOrder::Lex));
  }
}

TEST_CASE("derivation evaluation") {
  const PolygraphSpec b = build("bicat");
  const auto cert = std::get<DerivationCert>(builtin_cert("bicat"));
  SECTION("source of the pentagon") {
    const DerivationValue v = eval_derivation(b, elaborate_cell(b, "(prodC *0 1) *1 prodC", cs(b, 3)), cert);
    CHECK(render(v.d) == "2i+j+2l+2");
    CHECK(v.x_vars == 3);
    CHECK(v.y_vars == 1);
  }
  SECTION("identity") {
    const DerivationValue v = eval_derivation(b, id_diagram(cs(b, 2)), cert);
    CHECK(render(v.d) == "0");
    REQUIRE(v.X.size() == 2);
    CHECK(v.X[0] == AffineForm::var(0));
    CHECK(v.X[1] == AffineForm::var(1));
  }
  SECTION("unitC alone") {
    const DerivationValue v = eval_derivation(b, gen_diagram(b, *b.find_gen("unitC")), cert);
    REQUIRE(v.X.size() == 1);
    CHECK(v.X[0] == AffineForm::constant_form(1));
    CHECK(render(v.d) == "i");
  }
}

TEST_CASE("derivation certificates of the catalog") {
  const CertReport bicat = check_cert(build("bicat"), builtin_cert("bicat"));
  CHECK(bicat.pass);
  CHECK(has_line(bicat, "assocC: d: 2i+j+2l+2 > i+j+2l+2"));
  const CertReport pfonct = check_cert(build("pfonct"), builtin_cert("pfonct"));
  CHECK(pfonct.pass);
  CHECK(has_line(pfonct, "img_prodF: d: 2i+j+3k+3 > 2i+j+3k+2"));
  const CertReport pntrans = check_cert(build("pntrans"), builtin_cert("pntrans"));
  CHECK(pntrans.pass);
  CHECK(has_line(pntrans, "transfo_nat: d: 2i+3j+1 > i+3j+1"));
  // Each rule gives an X, a Y and a d line.
  CHECK(bicat.lines.size() == 3 * build("bicat").rules3.size());
}

TEST_CASE("builtin certificate values") {
  const auto b = std::get<DerivationCert>(builtin_cert("builtin:bicat"));
  CHECK(render(b.gens.at("prodC").d) == "i+k+1");
  CHECK(render_tuple(b.gens.at("prodC").X) == "i+j");
  const auto p = std::get<DerivationCert>(builtin_cert("pntrans"));
  CHECK(render(p.gens.at("transfo").d) == "i");
  CHECK(p.gens.count("fonctF"));
  const auto w = std::get<WeightCert>(builtin_cert("ass_length"));
  CHECK(w.edges.at("w") == std::vector<long long>{1});
  CHECK_THROWS(builtin_cert("nope"));
}

TEST_CASE("a derivation missing a generator is an error") {
  auto cert = std::get<DerivationCert>(builtin_cert("bicat"));
  cert.gens.erase("unitC");
  CHECK_THROWS_AS(check_derivation_cert(build("bicat"), cert), CertificateError);
}

TEST_CASE("certificates survive a file round-trip") {
  for (const auto& name : builtin_cert_names()) {
    INFO(name);
    const Certificate c = builtin_cert(name);
    const Certificate back = parse_certificate(serialize_certificate(c));
    CHECK(serialize_certificate(back) == serialize_certificate(c));
  }
}

TEST_CASE("the derivation of a vertical composite follows the composition law") {
  const PolygraphSpec b = build("bicat");
  const auto cert = std::get<DerivationCert>(builtin_cert("bicat"));
  std::mt19937 rng(23);
  for (int i = 0; i < 200; ++i) {
    const Diagram d = oracle::random_diagram_from(b, rng, cs(b, std::uniform_int_distribution<int>(0, 3)(rng)), 5);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, d.length())(rng);
    const std::vector<Slot> all = slots(d);
    const Diagram d1 = from_slots(b, d.src, std::vector<Slot>(all.begin(), all.begin() + k));
    const Diagram d2 = from_slots(b, target(b, d1), std::vector<Slot>(all.begin() + k, all.end()));
    const DerivationValue v = eval_derivation(b, d, cert), v1 = eval_derivation(b, d1, cert),
                          v2 = eval_derivation(b, d2, cert);
    REQUIRE(v1.x_vars == v.x_vars);
    REQUIRE(v2.y_vars == v.y_vars);
    // Variables of the parts, written over the variables of the whole.
    std::vector<AffineForm> outer_y;  // Y(d2) over the whole's target variables
    std::vector<AffineForm> d2_vars(v2.x_vars + v2.y_vars);
    for (int t = 0; t < v2.y_vars; ++t) d2_vars[v2.x_vars + t] = AffineForm::var(v.x_vars + t);
    for (const auto& y : v2.Y) outer_y.push_back(y.substitute(d2_vars));
    std::vector<AffineForm> d1_vars;
    for (int s = 0; s < v1.x_vars; ++s) d1_vars.push_back(AffineForm::var(s));
    for (const auto& y : outer_y) d1_vars.push_back(y);
    std::vector<AffineForm> inner_x;  // X(d1) over the whole's source variables
    for (const auto& x : v1.X) inner_x.push_back(x.substitute(d1_vars));
    for (int s = 0; s < v2.x_vars; ++s) d2_vars[s] = inner_x[s];

    INFO(diagram_summary(b, d) << " split at " << k);
    CHECK(v.d == v1.d.substitute(d1_vars) + v2.d.substitute(d2_vars));
    REQUIRE(v.X.size() == v2.X.size());
    for (std::size_t c = 0; c < v.X.size(); ++c) CHECK(v.X[c] == v2.X[c].substitute(d2_vars));
    REQUIRE(v.Y.size() == v1.Y.size());
    for (std::size_t c = 0; c < v.Y.size(); ++c) CHECK(v.Y[c] == v1.Y[c].substitute(d1_vars));
  }
}

TEST_CASE("multiset order examples") {
  const BaseOrder gt = [](int a, int b) { return a > b; };  // a = 1 > b = 0
  CHECK(multiset_compare({{1, 1}}, {}, gt) == Cmp::Greater);
  CHECK(multiset_compare({{1, 1}}, {{0, 3}}, gt) == Cmp::Greater);
  CHECK(multiset_compare({{0, 3}}, {{1, 1}}, gt) == Cmp::Less);
  CHECK(multiset_compare({{0, 1}, {1, 1}}, {{0, 1}, {1, 1}}, gt) == Cmp::Equal);
  const BaseOrder none = [](int, int) { return false; };
  CHECK(multiset_compare({{0, 1}}, {{1, 1}}, none) == Cmp::Incomparable);
}

TEST_CASE("multiset order properties", "[oracle]") {
  const auto r = oracle::multiset_properties(42, 1000);
  INFO(r.summary());
  CHECK(r.cases == 1000);
  CHECK(r.ok());
  const auto s = oracle::multiset_singleton_characterization(43, 60);
  INFO(s.summary());
  CHECK(s.ok());
}

TEST_CASE("reachability order on 1-cells") {
  const PolygraphSpec ass = build("ass");
  CHECK(one_cell_reach_order(ass, cs(ass, 4), cs(ass, 1), 1000));
  CHECK_FALSE(one_cell_reach_order(ass, cs(ass, 1), cs(ass, 2), 1000));
  CHECK_FALSE(one_cell_reach_order(ass, cs(ass, 3), cs(ass, 3), 1000));
  // Units make the search space infinite, and c never reaches the empty path.
  const PolygraphSpec b = build("bicat");
  CHECK(one_cell_reach_order(b, cs(b, 1), cs(b, 3), 1000));
  CHECK_THROWS_AS(one_cell_reach_order(b, cs(b, 1), cs(b, 0), 50), BudgetExhausted);
}
