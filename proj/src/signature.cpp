#include "polyrw/signature.hpp"

#include <cctype>
#include <map>
#include <set>

#include "json.hpp"

namespace polyrw {

using nlohmann::json;

std::optional<RuleId> PolygraphSpec::find_rule(const std::string& n) const {
  for (std::size_t i = 0; i < rules3.size(); ++i)
    if (rules3[i].name == n) return static_cast<RuleId>(i);
  return std::nullopt;
}

bool PolygraphSpec::operator==(const PolygraphSpec& o) const {
  auto edges_eq = [](const EdgeGen& a, const EdgeGen& b) {
    return a.name == b.name && a.src == b.src && a.tgt == b.tgt && a.tags == b.tags;
  };
  auto gens_eq = [](const Gen2& a, const Gen2& b) { return a.name == b.name && a.src == b.src && a.tgt == b.tgt; };
  return name == o.name && objects == o.objects &&
         std::equal(edges.begin(), edges.end(), o.edges.begin(), o.edges.end(), edges_eq) &&
         std::equal(gens2.begin(), gens2.end(), o.gens2.begin(), o.gens2.end(), gens_eq) && rules3 == o.rules3 &&
         cells4 == o.cells4;
}

const Diagram& step_redex_side(const PolygraphSpec& spec, const Step3& s) {
  const Rule3& r = spec.rules3.at(s.rule);
  return s.inverse ? r.tgt : r.src;
}

const Diagram& step_result_side(const PolygraphSpec& spec, const Step3& s) {
  const Rule3& r = spec.rules3.at(s.rule);
  return s.inverse ? r.src : r.tgt;
}

namespace {

Diagram framed(const PolygraphSpec& spec, const Step3& s, const Diagram& mid) {
  Diagram w = whisker(spec, s.left, mid, s.right);
  return vcomp(spec, vcomp(spec, s.top, w), s.bottom);
}

}  // namespace

Diagram step_source(const PolygraphSpec& spec, const Step3& s) {
  return framed(spec, s, step_redex_side(spec, s));
}

Diagram step_target(const PolygraphSpec& spec, const Step3& s) {
  return framed(spec, s, step_result_side(spec, s));
}

ValidationError::ValidationError(ValidationReport r)
    : std::runtime_error([&] {
        std::string m = "validation failed:";
        for (const auto& e : r) m += " [" + e.constraint + "] " + e.subject + ": " + e.message + ";";
        return m;
      }()),
      report(std::move(r)) {}

namespace {

template <class Range, class NameOf>
void check_unique(ValidationReport& rep, const std::string& dim, const Range& r, NameOf name_of) {
  std::set<std::string> seen;
  for (const auto& x : r) {
    const std::string& n = name_of(x);
    if (!seen.insert(n).second) rep.push_back({"name collision", n, "duplicate " + dim + " name"});
  }
}

void validate_steps(const PolygraphSpec& spec, const std::string& cell, const char* side,
                    const std::vector<Step3>& steps, ValidationReport& rep, std::optional<Diagram>& start,
                    std::optional<Diagram>& end) {
  if (steps.empty()) {
    rep.push_back({"4-cell boundary", cell, std::string(side) + " sequence is empty"});
    return;
  }
  std::optional<Diagram> prev;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Step3& s = steps[k];
    if (s.rule < 0 || s.rule >= static_cast<RuleId>(spec.rules3.size())) {
      rep.push_back({"unknown reference", cell, "step refers to an undeclared rule"});
      return;
    }
    Diagram a, b;
    try {
      a = step_source(spec, s);
      b = step_target(spec, s);
    } catch (const TypeError& e) {
      rep.push_back({"typing", cell, std::string(side) + " step " + std::to_string(k) + ": " + e.what()});
      return;
    }
    if (prev && !diagrams_equal(spec, *prev, a)) {
      rep.push_back({"4-cell boundary", cell,
                     std::string(side) + " step " + std::to_string(k) + " does not start where the previous ended"});
      return;
    }
    if (!prev) start = a;
    prev = b;
  }
  end = prev;
}

}  // namespace

ValidationReport validate(const PolygraphSpec& spec) {
  ValidationReport rep;
  {
    std::set<std::string> seen;
    for (const auto& o : spec.objects)
      if (!seen.insert(o).second) rep.push_back({"name collision", o, "duplicate object name"});
  }
  check_unique(rep, "edge", spec.edges, [](const EdgeGen& e) -> const std::string& { return e.name; });
  check_unique(rep, "gen2", spec.gens2, [](const Gen2& g) -> const std::string& { return g.name; });
  check_unique(rep, "rule3", spec.rules3, [](const Rule3& r) -> const std::string& { return r.name; });
  check_unique(rep, "cell4", spec.cells4, [](const Cell4Decl& c) -> const std::string& { return c.name; });

  const ObjId nobj = static_cast<ObjId>(spec.objects.size());
  bool edges_ok = true;
  for (const EdgeGen& e : spec.edges)
    if (e.src < 0 || e.src >= nobj || e.tgt < 0 || e.tgt >= nobj) {
      rep.push_back({"unknown reference", e.name, "edge endpoint is not a declared object"});
      edges_ok = false;
    }
  if (!edges_ok) return rep;

  bool gens_ok = true;
  for (const Gen2& g : spec.gens2) {
    if (!path_well_typed(spec, g.src) || !path_well_typed(spec, g.tgt)) {
      rep.push_back({"typing", g.name, "boundary path is not composable"});
      gens_ok = false;
      continue;
    }
    if (g.src.at != g.tgt.at || spec.end(g.src) != spec.end(g.tgt)) {
      rep.push_back({"globularity", g.name, "source " + path_to_string(spec, g.src) + " and target " +
                                                path_to_string(spec, g.tgt) + " do not share endpoints"});
      gens_ok = false;
    }
    if (g.tgt.empty()) {
      rep.push_back({"empty target", g.name, "2-generators with an empty target are unsupported"});
      gens_ok = false;
    }
  }
  if (!gens_ok) return rep;

  for (const Rule3& r : spec.rules3) {
    if (!diagram_well_typed(spec, r.src) || !diagram_well_typed(spec, r.tgt)) {
      rep.push_back({"typing", r.name, "boundary diagram is ill-typed"});
      continue;
    }
    if (r.src.src != r.tgt.src || target(spec, r.src) != target(spec, r.tgt))
      rep.push_back({"parallelism", r.name, "source and target diagrams are not parallel"});
    // An identity source would match everywhere and never terminate.
    if (r.src.layers.empty()) rep.push_back({"identity source", r.name, "3-rule source has no layers"});
  }

  for (const Cell4Decl& c : spec.cells4) {
    std::optional<Diagram> s0, s1, t0, t1;
    const std::size_t before = rep.size();
    validate_steps(spec, c.name, "source", c.src, rep, s0, s1);
    validate_steps(spec, c.name, "target", c.tgt, rep, t0, t1);
    if (rep.size() != before) continue;
    if (!diagrams_equal(spec, *s0, *t0) || !diagrams_equal(spec, *s1, *t1))
      rep.push_back({"parallelism", c.name, "source and target rewrite sequences are not parallel"});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Expression syntax

namespace {

class Reader {
 public:
  explicit Reader(const std::string& t, std::size_t base = 0) : text_(t), base_(base) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& m) const { throw ParseError(m, base_ + pos_); }

  std::string atom() {
    skip_ws();
    std::size_t b = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '{' || c == '}' || c == ',' ||
          c == ':' || c == '[' || c == ']' || c == '"')
        break;
      ++pos_;
    }
    if (b == pos_) fail("expected a name");
    return text_.substr(b, pos_ - b);
  }

  std::string string_lit() {
    expect('"');
    std::string s;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      s += text_[pos_++];
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    return s;
  }

  std::string key() { return peek() == '"' ? string_lit() : atom(); }

  std::size_t pos() const { return base_ + pos_; }

 private:
  const std::string& text_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

Path read_path(const Signature& sig, Reader& r) {
  std::optional<std::string> at;
  std::vector<std::string> edges;
  bool have_edges = false;
  r.expect('{');
  while (true) {
    std::string k = r.key();
    r.expect(':');
    if (k == "at") {
      at = r.string_lit();
    } else if (k == "edges") {
      have_edges = true;
      r.expect('[');
      if (r.peek() != ']') {
        while (true) {
          edges.push_back(r.string_lit());
          if (r.peek() == ',') {
            r.expect(',');
            continue;
          }
          break;
        }
      }
      r.expect(']');
    } else {
      r.fail("unknown path field '" + k + "'");
    }
    if (r.peek() == ',') {
      r.expect(',');
      continue;
    }
    break;
  }
  r.expect('}');
  if (!at || !have_edges) r.fail("path needs both 'at' and 'edges'");
  auto o = sig.find_object(*at);
  if (!o) throw TypeError("unknown object '" + *at + "'");
  Path p{*o, {}};
  for (const auto& e : edges) {
    auto id = sig.find_edge(e);
    if (!id) throw TypeError("unknown edge '" + e + "'");
    p.edges.push_back(*id);
  }
  check_path(sig, p);
  return p;
}

Diagram read_diag(const Signature& sig, Reader& r) {
  if (r.peek() != '(') {
    std::string n = r.atom();
    auto g = sig.find_gen(n);
    if (!g) throw TypeError("unknown 2-generator '" + n + "'");
    return gen_diagram(sig, *g);
  }
  r.expect('(');
  std::string op = r.atom();
  Diagram out;
  if (op == "id") {
    out = id_diagram(read_path(sig, r));
  } else if (op == "v" || op == "h") {
    Diagram a = read_diag(sig, r);
    Diagram b = read_diag(sig, r);
    out = op == "v" ? vcomp(sig, a, b) : hcomp(sig, a, b);
  } else {
    r.fail("unknown diagram operator '" + op + "'");
  }
  r.expect(')');
  return out;
}

}  // namespace

Path parse_path_expr(const Signature& sig, const std::string& text) {
  Reader r(text);
  Path p = read_path(sig, r);
  if (!r.at_end()) r.fail("trailing input after path");
  return p;
}

Diagram parse_diag_expr(const Signature& sig, const std::string& text) {
  Reader r(text);
  Diagram d = read_diag(sig, r);
  if (!r.at_end()) r.fail("trailing input after diagram");
  return d;
}

// ---------------------------------------------------------------------------
// JSON document

namespace {

json path_json(const Signature& sig, const Path& p) {
  json e = json::array();
  for (EdgeId id : p.edges) e.push_back(sig.edges.at(id).name);
  return json{{"at", sig.objects.at(p.at)}, {"edges", e}};
}

Path path_from_json(const Signature& sig, const json& j) {
  if (j.is_string()) return parse_path_expr(sig, j.get<std::string>());
  return parse_path_expr(sig, j.dump());
}

json step_json(const PolygraphSpec& spec, const Step3& s) {
  return json{{"top", diagram_expr(spec, s.top)},
              {"left", path_json(spec, s.left)},
              {"rule", spec.rules3.at(s.rule).name},
              {"dir", s.inverse ? "-" : "+"},
              {"right", path_json(spec, s.right)},
              {"bottom", diagram_expr(spec, s.bottom)}};
}

Step3 step_from_json(const PolygraphSpec& spec, const json& j) {
  Step3 s;
  s.top = parse_diag_expr(spec, j.at("top").get<std::string>());
  s.left = path_from_json(spec, j.at("left"));
  const std::string rn = j.at("rule").get<std::string>();
  auto r = spec.find_rule(rn);
  if (!r) throw TypeError("unknown rule '" + rn + "'");
  s.rule = *r;
  const std::string dir = j.value("dir", "+");
  if (dir != "+" && dir != "-") throw TypeError("step direction must be \"+\" or \"-\"");
  s.inverse = dir == "-";
  s.right = path_from_json(spec, j.at("right"));
  s.bottom = parse_diag_expr(spec, j.at("bottom").get<std::string>());
  return s;
}

}  // namespace

std::string serialize_polygraph(const PolygraphSpec& spec, int indent) {
  json doc;
  doc["name"] = spec.name;
  doc["objects"] = spec.objects;
  doc["edges"] = json::array();
  for (const EdgeGen& e : spec.edges) {
    json je{{"name", e.name}, {"src", spec.objects.at(e.src)}, {"tgt", spec.objects.at(e.tgt)}};
    if (!e.tags.empty()) je["tags"] = std::vector<std::string>(e.tags.begin(), e.tags.end());
    doc["edges"].push_back(je);
  }
  doc["gens2"] = json::array();
  for (const Gen2& g : spec.gens2)
    doc["gens2"].push_back(json{{"name", g.name}, {"src", path_json(spec, g.src)}, {"tgt", path_json(spec, g.tgt)}});
  doc["rules3"] = json::array();
  for (const Rule3& r : spec.rules3)
    doc["rules3"].push_back(
        json{{"name", r.name}, {"src", diagram_expr(spec, r.src)}, {"tgt", diagram_expr(spec, r.tgt)}});
  doc["cells4"] = json::array();
  for (const Cell4Decl& c : spec.cells4) {
    json src = json::array(), tgt = json::array();
    for (const Step3& s : c.src) src.push_back(step_json(spec, s));
    for (const Step3& s : c.tgt) tgt.push_back(step_json(spec, s));
    doc["cells4"].push_back(json{{"name", c.name}, {"src", src}, {"tgt", tgt}});
  }
  return doc.dump(indent);
}

PolygraphSpec parse_polygraph(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed polygraph document: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ParseError("polygraph document must be a JSON object", 0);

  PolygraphSpec spec;
  ValidationReport rep;
  auto get_array = [&](const char* k) -> json {
    if (!doc.contains(k)) return json::array();
    if (!doc[k].is_array()) throw ParseError(std::string("field '") + k + "' must be an array", 0);
    return doc[k];
  };
  try {
    spec.name = doc.value("name", std::string("unnamed"));
    for (const auto& o : get_array("objects")) spec.objects.push_back(o.get<std::string>());

    for (const auto& je : get_array("edges")) {
      EdgeGen e;
      e.name = je.at("name").get<std::string>();
      auto s = spec.find_object(je.at("src").get<std::string>());
      auto t = spec.find_object(je.at("tgt").get<std::string>());
      e.src = s.value_or(-1);
      e.tgt = t.value_or(-1);
      if (je.contains("tags"))
        for (const auto& tag : je["tags"]) e.tags.insert(tag.get<std::string>());
      spec.edges.push_back(e);
    }
    for (const EdgeGen& e : spec.edges)
      if (e.src < 0 || e.tgt < 0) rep.push_back({"unknown reference", e.name, "edge endpoint is not a declared object"});
    if (!rep.empty()) throw ValidationError(rep);

    for (const auto& jg : get_array("gens2")) {
      Gen2 g;
      g.name = jg.at("name").get<std::string>();
      try {
        g.src = path_from_json(spec, jg.at("src"));
        g.tgt = path_from_json(spec, jg.at("tgt"));
      } catch (const TypeError& e) {
        rep.push_back({"typing", g.name, e.what()});
      }
      spec.gens2.push_back(g);
    }
    if (!rep.empty()) throw ValidationError(rep);
    // Later dimensions elaborate against the generators, so these must hold first.
    for (const auto& e : validate(spec))
      if (e.constraint != "name collision") rep.push_back(e);
    if (!rep.empty()) throw ValidationError(rep);

    for (const auto& jr : get_array("rules3")) {
      Rule3 r;
      r.name = jr.at("name").get<std::string>();
      try {
        r.src = parse_diag_expr(spec, jr.at("src").get<std::string>());
        r.tgt = parse_diag_expr(spec, jr.at("tgt").get<std::string>());
      } catch (const TypeError& e) {
        rep.push_back({"typing", r.name, e.what()});
      }
      spec.rules3.push_back(r);
    }
    if (!rep.empty()) throw ValidationError(rep);

    for (const auto& jc : get_array("cells4")) {
      Cell4Decl c;
      c.name = jc.at("name").get<std::string>();
      try {
        for (const auto& js : jc.at("src")) c.src.push_back(step_from_json(spec, js));
        for (const auto& js : jc.at("tgt")) c.tgt.push_back(step_from_json(spec, js));
      } catch (const TypeError& e) {
        rep.push_back({"typing", c.name, e.what()});
      }
      spec.cells4.push_back(c);
    }
    if (!rep.empty()) throw ValidationError(rep);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed polygraph document: ") + e.what(), 0);
  }
  rep = validate(spec);
  if (!rep.empty()) throw ValidationError(rep);
  return spec;
}

std::string step_summary(const PolygraphSpec& spec, const Step3& s) {
  return spec.rules3.at(s.rule).name + (s.inverse ? "^-" : "") + " at left " + std::to_string(s.left.size()) +
         " below " + std::to_string(s.top.layers.size()) + " layer(s)";
}

std::string step_expr(const PolygraphSpec& spec, const Step3& s) { return step_json(spec, s).dump(); }

}  // namespace polyrw
