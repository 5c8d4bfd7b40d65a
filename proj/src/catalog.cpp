#include "polyrw/catalog.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <set>

namespace polyrw {

// ---------------------------------------------------------------------------
// Composition expressions

namespace {

struct Expr {
  enum Kind { Num, Name, V, H } kind = Num;
  int n = 0;
  std::string name;
  bool inverse = false;
  std::vector<Expr> kids;
};

class ExprParser {
 public:
  explicit ExprParser(const std::string& s) : s_(s) {}

  Expr parse() {
    Expr e = vexpr();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool op(char level) {
    skip();
    if (i_ + 1 < s_.size() && s_[i_] == '*' && s_[i_ + 1] == level) {
      i_ += 2;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& m) const {
    throw ParseError("cell expression '" + s_ + "': " + m, i_);
  }

  Expr vexpr() {
    Expr e;
    e.kind = Expr::V;
    e.kids.push_back(hexpr());
    while (op('1')) e.kids.push_back(hexpr());
    return e.kids.size() == 1 ? e.kids[0] : e;
  }
  Expr hexpr() {
    Expr e;
    e.kind = Expr::H;
    e.kids.push_back(atom());
    while (op('0')) e.kids.push_back(atom());
    return e.kids.size() == 1 ? e.kids[0] : e;
  }
  Expr atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    if (s_[i_] == '(') {
      ++i_;
      Expr e = vexpr();
      skip();
      if (i_ >= s_.size() || s_[i_] != ')') fail("expected ')'");
      ++i_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      std::size_t b = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      Expr e;
      e.n = std::stoi(s_.substr(b, i_ - b));
      return e;
    }
    std::size_t b = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (b == i_) fail("expected a name");
    Expr e;
    e.kind = Expr::Name;
    e.name = s_.substr(b, i_ - b);
    if (s_.compare(i_, 2, "^-") == 0) {
      e.inverse = true;
      i_ += 2;
    }
    return e;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

bool in_family(const std::string& name, const std::string& base) {
  return name == base || (name.size() > base.size() && name.compare(0, base.size(), base) == 0 && name[base.size()] == '_');
}

// One elaborated subterm: a 2-cell, or a 3-step when it contains a rule.
struct Elab {
  bool is_step = false;
  Diagram d;  // when !is_step
  Step3 s;    // when is_step
};

class Elaborator {
 public:
  explicit Elaborator(const PolygraphSpec& spec) : spec_(spec) {}

  std::size_t width(const Expr& e) const {
    switch (e.kind) {
      case Expr::Num: return static_cast<std::size_t>(e.n);
      case Expr::V: return width(e.kids[0]);
      case Expr::H: {
        std::size_t w = 0;
        for (const Expr& k : e.kids) w += width(k);
        return w;
      }
      case Expr::Name: {
        for (const Gen2& g : spec_.gens2)
          if (in_family(g.name, e.name)) return g.src.size();
        for (const Rule3& r : spec_.rules3)
          if (in_family(r.name, e.name)) return r.src.src.size();
        throw TypeError("unknown generator or rule family '" + e.name + "'");
      }
    }
    return 0;
  }

  Elab run(const Expr& e, const Path& slice) const {
    switch (e.kind) {
      case Expr::Num:
        if (slice.size() != static_cast<std::size_t>(e.n)) throw TypeError("identity width mismatch");
        return Elab{false, id_diagram(slice), {}};
      case Expr::Name: return atom(e, slice);
      case Expr::H: {
        std::size_t pos = 0;
        std::optional<Elab> cur;
        for (const Expr& k : e.kids) {
          const std::size_t w = width(k);
          Elab x = run(k, sub_path(spec_, slice, pos, w));
          pos += w;
          cur = cur ? beside(*cur, x) : x;
        }
        if (pos != slice.size()) throw TypeError("horizontal composite does not cover its 1-source");
        return *cur;
      }
      case Expr::V: {
        Elab cur = run(e.kids[0], slice);
        for (std::size_t k = 1; k < e.kids.size(); ++k) cur = below(cur, run(e.kids[k], tgt(cur)));
        return cur;
      }
    }
    throw TypeError("bad expression");
  }

 private:
  Path tgt(const Elab& x) const {
    return x.is_step ? target(spec_, x.s.bottom) : target(spec_, x.d);
  }

  Elab atom(const Expr& e, const Path& slice) const {
    std::vector<GenId> gens;
    for (GenId g = 0; g < static_cast<GenId>(spec_.gens2.size()); ++g)
      if (in_family(spec_.gens2[g].name, e.name) && spec_.gens2[g].src == slice) gens.push_back(g);
    std::vector<RuleId> rules;
    for (RuleId r = 0; r < static_cast<RuleId>(spec_.rules3.size()); ++r)
      if (in_family(spec_.rules3[r].name, e.name) && spec_.rules3[r].src.src == slice) rules.push_back(r);
    if (gens.size() + rules.size() != 1)
      throw TypeError("'" + e.name + "' has " + std::to_string(gens.size() + rules.size()) + " instances on " +
                      path_to_string(spec_, slice));
    if (!gens.empty()) {
      if (e.inverse) throw TypeError("2-generators have no inverse");
      return Elab{false, gen_diagram(spec_, gens[0]), {}};
    }
    const Rule3& r = spec_.rules3[rules[0]];
    Elab x{true, {}, {}};
    x.s.top = id_diagram(slice);
    x.s.left = empty_path(slice.at);
    x.s.rule = rules[0];
    x.s.inverse = e.inverse;
    x.s.right = empty_path(spec_.end(slice));
    x.s.bottom = id_diagram(target(spec_, r.src));
    return x;
  }

  Elab beside(const Elab& a, const Elab& b) const {
    if (a.is_step && b.is_step) throw TypeError("a step expression may contain only one rule");
    if (!a.is_step && !b.is_step) return Elab{false, hcomp_left_first(spec_, a.d, b.d), {}};
    Elab out{true, {}, {}};
    if (a.is_step) {
      const Path tx = target(spec_, b.d);
      out.s = a.s;
      out.s.top = hcomp_left_first(spec_, a.s.top, b.d);
      out.s.right = path_concat(spec_, a.s.right, tx);
      out.s.bottom = whisker(spec_, empty_path(a.s.bottom.src.at), a.s.bottom, tx);
    } else {
      const Path tx = target(spec_, a.d);
      out.s = b.s;
      out.s.top = hcomp_left_first(spec_, a.d, b.s.top);
      out.s.left = path_concat(spec_, tx, b.s.left);
      out.s.bottom = whisker(spec_, tx, b.s.bottom, empty_path(spec_.end(b.s.bottom.src)));
    }
    return out;
  }

  Elab below(const Elab& a, const Elab& b) const {
    if (a.is_step && b.is_step) throw TypeError("a step expression may contain only one rule");
    if (!a.is_step && !b.is_step) return Elab{false, vcomp(spec_, a.d, b.d), {}};
    Elab out{true, {}, {}};
    if (a.is_step) {
      out.s = a.s;
      out.s.bottom = vcomp(spec_, a.s.bottom, b.d);
    } else {
      out.s = b.s;
      out.s.top = vcomp(spec_, a.d, b.s.top);
    }
    return out;
  }

  const PolygraphSpec& spec_;
};

}  // namespace

Diagram elaborate_cell(const PolygraphSpec& spec, const std::string& expr, const Path& src) {
  Elab e = Elaborator(spec).run(ExprParser(expr).parse(), src);
  if (e.is_step) throw TypeError("'" + expr + "' mentions a 3-rule where a 2-cell is expected");
  return e.d;
}

Step3 elaborate_step(const PolygraphSpec& spec, const std::string& expr, const Path& src) {
  Elab e = Elaborator(spec).run(ExprParser(expr).parse(), src);
  if (!e.is_step) throw TypeError("'" + expr + "' mentions no 3-rule");
  return e.s;
}

// ---------------------------------------------------------------------------
// Family instantiation

namespace {

class Builder {
 public:
  PolygraphSpec spec;

  ObjId object(const std::string& n) {
    if (spec.find_object(n)) throw CatalogError("duplicate object name '" + n + "'");
    spec.objects.push_back(n);
    return static_cast<ObjId>(spec.objects.size() - 1);
  }

  // One edge per (src, tgt) pair listed.
  void edges(const std::string& base, const std::vector<std::pair<ObjId, ObjId>>& ends, const std::string& tag) {
    for (auto [s, t] : ends) {
      EdgeGen e;
      e.name = ends.size() == 1 ? base : base + "_" + spec.objects[s] + "_" + spec.objects[t];
      e.src = s;
      e.tgt = t;
      if (!tag.empty()) e.tags.insert(tag);
      edge_base_[static_cast<EdgeId>(spec.edges.size())] = base;
      spec.edges.push_back(e);
    }
  }

  // Every path whose i-th edge belongs to family fams[i]. Empty families
  // yield the empty path at each of `anchors`.
  std::vector<Path> paths(const std::vector<std::string>& fams, const std::vector<ObjId>& anchors = {}) const {
    std::vector<Path> out;
    if (fams.empty()) {
      for (ObjId a : anchors) out.push_back(empty_path(a));
      return out;
    }
    std::function<void(Path&)> go = [&](Path& p) {
      if (p.size() == fams.size()) {
        out.push_back(p);
        return;
      }
      for (EdgeId e = 0; e < static_cast<EdgeId>(spec.edges.size()); ++e) {
        if (edge_base_.at(e) != fams[p.size()]) continue;
        if (p.empty() ? false : spec.edges[e].src != spec.end(p)) continue;
        if (p.empty()) p.at = spec.edges[e].src;
        p.edges.push_back(e);
        go(p);
        p.edges.pop_back();
      }
    };
    Path p;
    go(p);
    return out;
  }

  void gen2(const std::string& base, const std::vector<std::string>& src, const std::vector<std::string>& tgt,
            const std::vector<ObjId>& anchors = {}) {
    const auto srcs = paths(src, anchors);
    for (const Path& s : srcs) {
      std::vector<Path> ts;
      for (const Path& t : paths(tgt, {s.at}))
        if (t.at == s.at && spec.end(t) == spec.end(s)) ts.push_back(t);
      if (ts.size() != 1) throw CatalogError("target of " + base + " is not determined by its source");
      spec.gens2.push_back(Gen2{instance_name(base, s, srcs.size()), s, ts[0]});
    }
  }

  void rule3(const std::string& base, const std::vector<std::string>& src, const std::string& s_expr,
             const std::string& t_expr) {
    const auto srcs = paths(src);
    for (const Path& p : srcs)
      spec.rules3.push_back(
          Rule3{instance_name(base, p, srcs.size()), elaborate_cell(spec, s_expr, p), elaborate_cell(spec, t_expr, p)});
  }

  void cell4(const std::string& base, const std::vector<std::string>& src, const std::vector<std::string>& s_steps,
             const std::vector<std::string>& t_steps) {
    const auto srcs = paths(src);
    for (const Path& p : srcs) {
      Cell4Decl c{instance_name(base, p, srcs.size()), {}, {}};
      for (const auto& e : s_steps) c.src.push_back(elaborate_step(spec, e, p));
      for (const auto& e : t_steps) c.tgt.push_back(elaborate_step(spec, e, p));
      spec.cells4.push_back(c);
    }
  }

 private:
  std::string instance_name(const std::string& base, const Path& p, std::size_t count) const {
    if (count == 1) return base;
    std::string n = base + "_" + spec.objects[p.at];
    for (EdgeId e : p.edges) n += "_" + spec.objects[spec.edges[e].tgt];
    return n;
  }

  std::map<EdgeId, std::string> edge_base_;
};

std::string subst(std::string s, char from, char to) {
  // Rewrites family suffixes: prodC -> prodD, fonctF -> fonctG, ...
  static const std::vector<std::string> stems = {"prod", "unit", "assoc", "lunit", "runit", "penta", "trian",
                                                 "fonct", "img_prod", "img_unit", "img_assoc", "img_runit",
                                                 "img_lunit"};
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    bool done = false;
    for (const auto& st : stems) {
      if (s.compare(i, st.size(), st) == 0 && i + st.size() < s.size() && s[i + st.size()] == from &&
          (i + st.size() + 1 == s.size() || !std::isalnum(static_cast<unsigned char>(s[i + st.size() + 1])))) {
        out += st;
        out += to;
        i += st.size() + 1;
        done = true;
        break;
      }
    }
    if (!done) out += s[i++];
  }
  return out;
}

std::vector<std::string> subst_all(const std::vector<std::string>& v, char from, char to) {
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(subst(s, from, to));
  return out;
}

std::vector<std::pair<ObjId, ObjId>> all_pairs(const std::vector<ObjId>& a, const std::vector<ObjId>& b) {
  std::vector<std::pair<ObjId, ObjId>> out;
  for (ObjId x : a)
    for (ObjId y : b) out.emplace_back(x, y);
  return out;
}

struct Parts {
  bool bicat_units = true;
  bool product_3 = true, unit_3 = true;
  bool cells4 = true;
};

// BiCat[X] on objects xs with edge family e; X is the suffix letter.
void add_bicat_2(Builder& b, char X, const std::string& e, const std::vector<ObjId>& xs, bool units) {
  const std::string sx(1, X);
  b.gen2("prod" + sx, {e, e}, {e});
  if (units) b.gen2("unit" + sx, {}, {e}, xs);
}

void add_bicat_3(Builder& b, char X, const std::string& e, bool product, bool units) {
  const std::string sx(1, X);
  if (product) b.rule3("assoc" + sx, {e, e, e}, subst("(prodC *0 1) *1 prodC", 'C', X),
                       subst("(1 *0 prodC) *1 prodC", 'C', X));
  if (units) {
    b.rule3("lunit" + sx, {e}, subst("(unitC *0 1) *1 prodC", 'C', X), "1");
    b.rule3("runit" + sx, {e}, subst("(1 *0 unitC) *1 prodC", 'C', X), "1");
  }
}

void add_bicat_4(Builder& b, char X, const std::string& e, bool product, bool units) {
  if (product)
    b.cell4(subst("pentaC", 'C', X), {e, e, e, e},
            subst_all({"(assocC *0 1) *1 prodC", "(1 *0 prodC *0 1) *1 assocC", "(1 *0 assocC) *1 prodC"}, 'C', X),
            subst_all({"(prodC *0 2) *1 assocC", "(2 *0 prodC) *1 assocC"}, 'C', X));
  if (units)
    b.cell4(subst("trianC", 'C', X), {e, e},
            subst_all({"(1 *0 unitC *0 1) *1 assocC", "(1 *0 lunitC) *1 prodC"}, 'C', X),
            subst_all({"(runitC *0 1) *1 prodC"}, 'C', X));
}

// The pseudofunctor part for F (X = 'F', edge eF) or G.
void add_fonct_2(Builder& b, char X) {
  const std::string e = std::string("e") + X;
  b.gen2(subst("fonctF", 'F', X), {"c", e}, {e, "d"});
}

void add_fonct_3(Builder& b, char X, bool product, bool units) {
  const std::string e = std::string("e") + X;
  if (product)
    b.rule3(subst("img_prodF", 'F', X), {"c", "c", e}, subst("(prodC *0 1) *1 fonctF", 'F', X),
            subst("(1 *0 fonctF) *1 (fonctF *0 1) *1 (1 *0 prodD)", 'F', X));
  if (units)
    b.rule3(subst("img_unitF", 'F', X), {e}, subst("(unitC *0 1) *1 fonctF", 'F', X), "1 *1 (1 *0 unitD)");
}

void add_fonct_4(Builder& b, char X, bool product, bool units) {
  const std::string e = std::string("e") + X;
  auto s = [&](std::vector<std::string> v) { return subst_all(v, 'F', X); };
  if (product)
    b.cell4(subst("img_assocF", 'F', X), {"c", "c", "c", e},
            s({"(assocC *0 1) *1 fonctF", "(1 *0 prodC *0 1) *1 img_prodF",
               "(1 *0 img_prodF) *1 (fonctF *0 1) *1 (1 *0 prodD)"}),
            s({"(prodC *0 2) *1 img_prodF", "(2 *0 fonctF) *1 (img_prodF *0 1) *1 (1 *0 prodD)",
               "(2 *0 fonctF) *1 (1 *0 fonctF *0 1) *1 (fonctF *0 2) *1 (1 *0 assocD)"}));
  if (units) {
    b.cell4(subst("img_runitF", 'F', X), {"c", e},
            s({"(1 *0 unitC *0 1) *1 img_prodF", "(1 *0 img_unitF) *1 (fonctF *0 1) *1 (1 *0 prodD)",
               "fonctF *1 (1 *0 runitD)"}),
            s({"(runitC *0 1) *1 fonctF"}));
    b.cell4(subst("img_lunitF", 'F', X), {"c", e},
            s({"(unitC *0 2) *1 img_prodF", "fonctF *1 (img_unitF *0 1) *1 (1 *0 prodD)", "fonctF *1 (1 *0 lunitD)"}),
            s({"(lunitC *0 1) *1 fonctF"}));
  }
}

void add_transfo_3(Builder& b) {
  b.rule3("transfo_nat", {"c", "eG"}, "(1 *0 transfo) *1 (fonctF *0 1) *1 (1 *0 prodD)",
          "fonctG *1 (transfo *0 1) *1 (1 *0 prodD)");
}

void add_transfo_4(Builder& b, bool product, bool units) {
  if (product)
    // Both legs start at (prodC *0 1) *1 fonctG *1 (transfo *0 1) *1 (1 *0 prodD)
    // and end at (2 *0 transfo) *1 (1 *0 fonctF *0 1) *1 (fonctF *0 prodD) *1 (1 *0 prodD).
    b.cell4("transfo_prod", {"c", "c", "eG"},
            {"img_prodG *1 (transfo *0 1) *1 (1 *0 prodD)",
             "(1 *0 fonctG) *1 (fonctG *0 1) *1 (transfo *0 2) *1 (1 *0 assocD^-)",
             "(1 *0 fonctG) *1 (transfo_nat^- *0 1) *1 (1 *0 prodD)",
             "(1 *0 fonctG) *1 (1 *0 transfo *0 1) *1 (fonctF *0 2) *1 (1 *0 assocD)",
             "(1 *0 transfo_nat^-) *1 (fonctF *0 1) *1 (1 *0 prodD)"},
            {"(prodC *0 1) *1 transfo_nat^-", "(2 *0 transfo) *1 (img_prodF *0 1) *1 (1 *0 prodD)",
             "(2 *0 transfo) *1 (1 *0 fonctF *0 1) *1 (fonctF *0 2) *1 (1 *0 assocD)"});
  if (units)
    b.cell4("transfo_unit", {"eG"},
            {"(unitC *0 1) *1 transfo_nat", "img_unitG *1 (transfo *0 1) *1 (1 *0 prodD)",
             "transfo *1 (1 *0 runitD)"},
            {"transfo *1 (img_unitF *0 1) *1 (1 *0 prodD)", "transfo *1 (1 *0 lunitD)"});
}

std::vector<ObjId> add_objects(Builder& b, const std::vector<std::string>& names, const std::string& dflt) {
  std::vector<ObjId> ids;
  if (names.empty()) ids.push_back(b.object(dflt));
  for (const auto& n : names) ids.push_back(b.object(n));
  return ids;
}

std::vector<int> the_map(const std::vector<int>& m, std::size_t nc, std::size_t nd, const char* which) {
  if (m.empty()) return std::vector<int>(nc, 0);
  if (m.size() != nc) throw CatalogError(std::string("map ") + which + " must have one entry per object of C");
  for (int x : m)
    if (x < 0 || x >= static_cast<int>(nd)) throw CatalogError(std::string("map ") + which + " leaves D");
  return m;
}

enum class Kind { PFonct, PFonctPair, PNTrans, PNTransPP, PNTransP, PNTransU };

PolygraphSpec build_pn(const std::string& id, Kind k, const CatalogParams& p) {
  Builder b;
  b.spec.name = id;
  const auto cs = add_objects(b, p.C, "•C");
  const auto ds = add_objects(b, p.D, "•D");
  const bool with_g = k != Kind::PFonct;
  const auto f = the_map(p.f, cs.size(), ds.size(), "f");
  const auto g = the_map(p.g, cs.size(), ds.size(), "g");

  b.edges("c", all_pairs(cs, cs), "C-internal");
  b.edges("d", all_pairs(ds, ds), "D-internal");
  std::vector<std::pair<ObjId, ObjId>> ef, eg;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    ef.emplace_back(cs[i], ds[f[i]]);
    eg.emplace_back(cs[i], ds[g[i]]);
  }
  b.edges("eF", ef, "f-mixed");
  if (with_g) b.edges("eG", eg, "g-mixed");

  const bool product_only = k == Kind::PNTransPP || k == Kind::PNTransP;
  const bool units2 = k != Kind::PNTransPP;
  const bool transfo = k == Kind::PNTrans || k == Kind::PNTransPP || k == Kind::PNTransP || k == Kind::PNTransU;
  const bool product3 = k != Kind::PNTransU;
  const bool unit3 = !product_only;
  const bool cells4 = k != Kind::PNTransU;

  add_bicat_2(b, 'C', "c", cs, units2);
  add_bicat_2(b, 'D', "d", ds, units2);
  add_fonct_2(b, 'F');
  if (with_g) add_fonct_2(b, 'G');
  if (transfo) b.gen2("transfo", {"eG"}, {"eF", "d"});

  add_bicat_3(b, 'C', "c", product3, unit3);
  add_bicat_3(b, 'D', "d", product3, unit3);
  add_fonct_3(b, 'F', product3, unit3);
  if (with_g) add_fonct_3(b, 'G', product3, unit3);
  if (transfo && product3) add_transfo_3(b);

  if (cells4) {
    add_bicat_4(b, 'C', "c", true, unit3);
    add_bicat_4(b, 'D', "d", true, unit3);
    add_fonct_4(b, 'F', true, unit3);
    if (with_g) add_fonct_4(b, 'G', true, unit3);
    if (transfo) add_transfo_4(b, true, unit3);
  }
  return b.spec;
}

}  // namespace

const std::vector<CatalogInfo>& catalog() {
  static const std::vector<CatalogInfo> entries = {
      {"ass", "monoid presentation of associativity, with the pentagon", "ass_length", std::nullopt},
      {"bicat", "bicategories BiCat[C]", std::nullopt, "bicat"},
      {"pfonct", "pseudofunctors PFonct[f]", std::nullopt, "pfonct"},
      {"pfonct_pair", "PFonct[f,g], the union of PFonct[f] and PFonct[g]", std::nullopt, "pntrans"},
      {"pntrans", "pseudonatural transformations PNTrans[f,g]", std::nullopt, "pntrans"},
      {"pntrans_pp", "product cells of PNTrans[f,g]", "pntrans_pp_tau", "pntrans"},
      {"pntrans_p", "product cells of PNTrans[f,g] with the unit 2-cells", std::nullopt, "pntrans"},
      {"pntrans_u", "PNTrans[f,g] with the unit 3-cells only", std::nullopt, "pntrans"},
  };
  return entries;
}

const CatalogInfo& catalog_info(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  throw CatalogError("unknown catalog id '" + id + "'");
}

PolygraphSpec build(const std::string& id, const CatalogParams& p) {
  (void)catalog_info(id);
  if (id == "ass" || id == "bicat") {
    if (!p.D.empty() || !p.f.empty() || !p.g.empty()) throw CatalogError(id + " takes only the object set C");
    Builder b;
    b.spec.name = id;
    const auto cs = add_objects(b, p.C, "•");
    const bool ass = id == "ass";
    const std::string e = ass ? "w" : "c";
    b.edges(e, all_pairs(cs, cs), ass ? "" : "C-internal");
    add_bicat_2(b, 'C', e, cs, !ass);
    add_bicat_3(b, 'C', e, true, !ass);
    add_bicat_4(b, 'C', e, true, !ass);
    return b.spec;
  }
  static const std::map<std::string, Kind> kinds = {
      {"pfonct", Kind::PFonct},       {"pfonct_pair", Kind::PFonctPair}, {"pntrans", Kind::PNTrans},
      {"pntrans_pp", Kind::PNTransPP}, {"pntrans_p", Kind::PNTransP},     {"pntrans_u", Kind::PNTransU}};
  if (id == "pfonct" && !p.g.empty()) throw CatalogError("pfonct takes a single map f");
  return build_pn(id, kinds.at(id), p);
}

// ---------------------------------------------------------------------------
// Certificates

namespace {

AffineForm lin(std::initializer_list<std::pair<int, long long>> terms, long long c = 0) {
  AffineForm f = AffineForm::constant_form(c);
  for (auto [v, k] : terms) f += AffineForm::var(v, k);
  return f;
}

DerivationCert bicat_cert() {
  DerivationCert c;
  c.name = "bicat";
  c.arity = {{"c", 1}};
  // prodC: X inputs i, j; Y input k.
  c.gens["prodC"] = GenValuation{{lin({{0, 1}, {1, 1}})}, {lin({{0, 1}}), lin({{0, 1}})}, lin({{0, 1}, {2, 1}}, 1)};
  c.gens["unitC"] = GenValuation{{lin({}, 1)}, {}, lin({{0, 1}})};
  return c;
}

DerivationCert pfonct_cert() {
  DerivationCert c = bicat_cert();
  c.name = "pfonct";
  c.arity["d"] = 1;
  c.arity["eF"] = 0;
  c.gens["prodD"] = GenValuation{{lin({{0, 1}, {1, 1}})}, {lin({{0, 1}}), lin({{0, 1}})}, lin({{0, 1}, {2, 1}})};
  c.gens["unitD"] = GenValuation{{lin({}, 1)}, {}, lin({{0, 1}})};
  c.gens["fonctF"] = GenValuation{{lin({{0, 1}})}, {lin({{0, 2}}, 1)}, lin({{0, 1}, {1, 1}}, 1)};
  return c;
}

DerivationCert pntrans_cert() {
  DerivationCert c = pfonct_cert();
  c.name = "pntrans";
  c.arity["eG"] = 0;
  c.gens["fonctG"] = GenValuation{{lin({{0, 1}})}, {lin({{0, 2}}, 1)}, lin({{0, 1}, {1, 1}})};
  c.gens["transfo"] = GenValuation{{lin({}, 1)}, {}, lin({{0, 1}})};
  return c;
}

}  // namespace

std::vector<std::string> builtin_cert_names() { return {"ass_length", "bicat", "pfonct", "pntrans", "pntrans_pp_tau"}; }

Certificate builtin_cert(const std::string& raw) {
  const std::string name = raw.rfind("builtin:", 0) == 0 ? raw.substr(8) : raw;
  if (name == "ass_length") return WeightCert{"ass_length", WeightOrder::Lex, {{"w", {1}}}};
  if (name == "pntrans_pp_tau")
    return WeightCert{"pntrans_pp_tau",
                      WeightOrder::Lex,
                      {{"c", {1, 0, 0}}, {"eF", {0, 1, 0}}, {"eG", {0, 2, 0}}, {"d", {0, 0, 1}}}};
  if (name == "bicat") return bicat_cert();
  if (name == "pfonct") return pfonct_cert();
  if (name == "pntrans") return pntrans_cert();
  throw CatalogError("unknown builtin certificate '" + raw + "'");
}

// ---------------------------------------------------------------------------
// Classifiers

namespace {

enum class EdgeClass { Internal, FMixed, GMixed };

EdgeClass classify_edge(const Signature& sig, EdgeId e) {
  const auto& t = sig.edges.at(e).tags;
  if (t.count("C-internal") || t.count("D-internal")) return EdgeClass::Internal;
  if (t.count("f-mixed")) return EdgeClass::FMixed;
  if (t.count("g-mixed")) return EdgeClass::GMixed;
  throw TypeError("edge " + sig.edges.at(e).name + " carries no classifier tag");
}

}  // namespace

unsigned weight_w(const Signature& sig, const Path& p) {
  unsigned w = 0;
  for (EdgeId e : p.edges) w += classify_edge(sig, e) == EdgeClass::Internal ? 1 : 0;
  return w;
}

bool target_shape_ok(const Signature& sig, const Path& p) {
  for (EdgeId e : p.edges) (void)classify_edge(sig, e);
  std::size_t i = 0;
  while (i < p.size() && sig.edges[p.edges[i]].tags.count("C-internal")) ++i;
  if (i == p.size() || !sig.edges[p.edges[i]].tags.count("f-mixed")) return false;
  ++i;
  if (i == p.size()) return false;
  for (; i < p.size(); ++i)
    if (!sig.edges[p.edges[i]].tags.count("D-internal")) return false;
  return true;
}

}  // namespace polyrw
