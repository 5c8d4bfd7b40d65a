// polyrw: command-line front end.
//
// Exit codes: 0 pass, 1 property failure (including "termination not
// established" when a rewriting budget runs out), 2 input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyrw/branching.hpp"
#include "polyrw/catalog.hpp"
#include "polyrw/rewrite.hpp"
#include "polyrw/signature.hpp"
#include "polyrw/termination.hpp"

using nlohmann::json;
using namespace polyrw;

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Loaded {
  PolygraphSpec spec;
  std::optional<CatalogInfo> info;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Loaded load(const std::string& arg) {
  for (const CatalogInfo& c : catalog())
    if (c.id == arg) return Loaded{build(arg), c};
  try {
    return Loaded{parse_polygraph(read_file(arg)), std::nullopt};
  } catch (const ParseError& e) {
    throw InputError(arg + ": " + e.what());
  } catch (const ValidationError& e) {
    throw InputError(arg + ": " + e.what());
  } catch (const TypeError& e) {
    throw InputError(arg + ": " + e.what());
  }
}

Certificate load_cert(const std::string& arg) {
  try {
    if (arg.rfind("builtin:", 0) == 0) return builtin_cert(arg);
    for (const std::string& n : builtin_cert_names())
      if (n == arg) return builtin_cert(arg);
    return parse_certificate(read_file(arg));
  } catch (const CatalogError& e) {
    throw InputError(e.what());
  } catch (const CertificateError& e) {
    throw InputError(arg + ": " + e.what());
  }
}

int cert_level(const Certificate& c) { return std::holds_alternative<WeightCert>(c) ? 2 : 3; }

std::optional<std::string> default_cert(const Loaded& l, int level) {
  if (!l.info) return std::nullopt;
  return level == 2 ? l.info->level2_cert : l.info->level3_cert;
}

// ---------------------------------------------------------------------------
// JSON views of the library reports

json path_json(const Signature& sig, const Path& p) {
  json e = json::array();
  for (EdgeId id : p.edges) e.push_back(sig.edges[id].name);
  return {{"at", sig.objects[p.at]}, {"edges", e}};
}

json word_branching_json(const Signature& sig, const WordBranching& b) {
  json steps = json::array();
  for (const WordRedex& r : b.steps) steps.push_back({{"gen", sig.gens2[r.rule].name}, {"offset", r.offset}});
  return {{"source", path_expr(sig, b.source)},
          {"summary", describe(sig, b)},
          {"steps", steps},
          {"class", to_string(b.cls)},
          {"minimal", b.minimal}};
}

json diagram_branching_json(const PolygraphSpec& spec, const DiagramBranching& b) {
  json steps = json::array();
  for (const DiagramRedex& r : b.steps)
    steps.push_back({{"rule", spec.rules3[r.step.rule].name},
                     {"nodes", r.nodes},
                     {"step", json::parse(step_expr(spec, r.step))}});
  return {{"source", diagram_expr(spec, b.source)},
          {"summary", describe(spec, b)},
          {"steps", steps},
          {"class", to_string(b.cls)},
          {"minimal", b.minimal}};
}

json confluence_json(const ConfluenceReport& r) {
  json joins = json::array();
  for (const JoinResult& j : r.joins)
    joins.push_back({{"source", j.source},
                     {"source_expr", j.source_expr},
                     {"legs", j.legs},
                     {"normal_forms", j.normal_forms},
                     {"normal_form_exprs", j.normal_form_exprs},
                     {"joinable", j.joinable}});
  return {{"level", r.level},
          {"terminating_established", r.terminating_established},
          {"confluent", r.confluent},
          {"verdict", r.verdict()},
          {"pairs", r.pairs},
          {"joins", joins}};
}

json squier_json(const SquierReport& r, bool allow_composite) {
  json pairings = json::array();
  for (const SquierPairing& p : r.pairings)
    pairings.push_back({{"cell", p.cell},
                        {"branching", p.branching},
                        {"verdict", p.verdict},
                        {"ok", p.ok},
                        {"witness", p.witness}});
  return {{"level", r.level},
          {"depth", r.depth},
          {"qualified", r.qualified},
          {"qualification", r.qualification},
          {"bijection", r.bijection},
          {"fillable", r.fillable},
          {"allow_composite", allow_composite},
          {"pass", r.pass(allow_composite)},
          {"pairings", pairings},
          {"unmatched_branchings", r.unmatched_branchings},
          {"unmatched_cells", r.unmatched_cells}};
}

json cert_json(const CertReport& r) {
  json lines = json::array();
  for (const CertCheckLine& l : r.lines)
    lines.push_back({{"subject", l.subject},
                     {"what", l.what},
                     {"lhs", l.lhs},
                     {"rhs", l.rhs},
                     {"strict", l.strict},
                     {"ok", l.ok},
                     {"text", l.text()}});
  return {{"cert", r.cert}, {"pass", r.pass}, {"lines", lines}};
}

std::string squier_verdict(const SquierReport& r, bool allow_composite) {
  if (r.qualified) return "qualified (" + r.qualification + ")";
  if (r.pass(allow_composite)) return r.bijection ? "pass" : "pass with composite fillings";
  if (r.fillable && !r.bijection) return "fail (strict bijection; every branching fillable by composites)";
  return "fail";
}

void print_squier(std::ostream& os, const SquierReport& r, const std::string& indent) {
  for (const SquierPairing& p : r.pairings) {
    os << indent << p.cell << " <-> " << p.branching << ": " << p.verdict;
    if (!p.witness.empty()) os << " [" << p.witness << "]";
    os << "\n";
  }
  for (const std::string& b : r.unmatched_branchings) os << indent << "unmatched branching: " << b << "\n";
  for (const std::string& c : r.unmatched_cells) os << indent << "unmatched cell: " << c << "\n";
}

struct CommonOpts {
  std::string poly;
  int level = 0;  // 0: command default
  int depth = 1;
  std::string cert;
  bool json_out = false;
  bool allow_composite = false;
  std::optional<std::size_t> budget;
};

std::size_t budget_of(const CommonOpts& o) { return o.budget ? *o.budget : default_budget(); }

// Termination at a level: runs the given or default certificate. nullopt
// when there is none to run.
std::optional<CertReport> termination(const Loaded& l, int level, const std::string& explicit_cert) {
  std::string name = explicit_cert;
  if (name.empty()) {
    auto d = default_cert(l, level);
    if (!d) return std::nullopt;
    name = "builtin:" + *d;
  }
  const Certificate c = load_cert(name);
  if (cert_level(c) != level) return std::nullopt;
  try {
    return check_cert(l.spec, c);
  } catch (const CertificateError& e) {
    throw InputError(e.what());
  }
}

// ---------------------------------------------------------------------------
// commands

int cmd_list() {
  for (const CatalogInfo& c : catalog()) {
    std::cout << c.id << "  " << c.title << "  (level 2 cert: " << c.level2_cert.value_or("none")
              << "; level 3 cert: " << c.level3_cert.value_or("none") << ")\n";
  }
  return 0;
}

int cmd_show(const CommonOpts& o) {
  const Loaded l = load(o.poly);
  const PolygraphSpec& s = l.spec;
  if (o.json_out) {
    std::cout << serialize_polygraph(s) << "\n";
    return 0;
  }
  std::cout << "polygraph " << s.name << "\n";
  std::cout << "objects:";
  for (const std::string& x : s.objects) std::cout << " " << x;
  std::cout << "\nedges:\n";
  for (const EdgeGen& e : s.edges) {
    std::cout << "  " << e.name << ": " << s.objects[e.src] << " -> " << s.objects[e.tgt];
    for (const std::string& t : e.tags) std::cout << " [" << t << "]";
    std::cout << "\n";
  }
  std::cout << "gens2:\n";
  for (const Gen2& g : s.gens2)
    std::cout << "  " << g.name << ": " << path_to_string(s, g.src) << " => " << path_to_string(s, g.tgt) << "\n";
  std::cout << "rules3:\n";
  for (const Rule3& r : s.rules3)
    std::cout << "  " << r.name << ": " << diagram_summary(s, r.src) << " => " << diagram_summary(s, r.tgt) << "\n";
  std::cout << "cells4:\n";
  for (const Cell4Decl& c : s.cells4) {
    auto seq = [&](const std::vector<Step3>& v) {
      std::string t;
      for (std::size_t i = 0; i < v.size(); ++i) t += (i ? " ; " : "") + s.rules3[v[i].rule].name + (v[i].inverse ? "^-" : "");
      return t;
    };
    std::cout << "  " << c.name << ": " << seq(c.src) << " => " << seq(c.tgt) << "\n";
  }
  return 0;
}

int cmd_normalize(const CommonOpts& o, const std::string& level, const std::string& cell, bool trace) {
  const Loaded l = load(o.poly);
  const PolygraphSpec& s = l.spec;
  try {
    if (level == "1cell") {
      const Path p = parse_path_expr(s, cell);
      auto [nf, seq] = normalize_path(s, p, budget_of(o));
      json steps = json::array();
      Path cur = p;
      for (const WordRedex& r : seq.steps) {
        const Gen2& g = s.gens2[r.rule];
        steps.push_back({{"left", path_json(s, sub_path(s, cur, 0, r.offset))},
                         {"gen", g.name},
                         {"right", path_json(s, sub_path(s, cur, r.offset + g.src.size(),
                                                         cur.size() - r.offset - g.src.size()))}});
        cur = apply_word_step(s, cur, r);
      }
      if (o.json_out) {
        json out{{"normal_form", path_expr(s, nf)}, {"steps", seq.steps.size()}};
        if (trace) out["trace"] = steps;
        std::cout << out.dump(2) << "\n";
      } else {
        std::cout << path_expr(s, nf) << "\n";
        if (trace)
          for (const json& st : steps) std::cout << st.dump() << "\n";
      }
    } else {
      const Diagram d = parse_diag_expr(s, cell);
      auto [nf, seq] = normalize_diagram(s, d, budget_of(o));
      if (o.json_out) {
        json out{{"normal_form", diagram_expr(s, nf)}, {"steps", seq.steps.size()}};
        if (trace) {
          out["trace"] = json::array();
          for (const Step3& st : seq.steps) out["trace"].push_back(json::parse(step_expr(s, st)));
        }
        std::cout << out.dump(2) << "\n";
      } else {
        std::cout << diagram_expr(s, nf) << "\n";
        if (trace)
          for (const Step3& st : seq.steps) std::cout << step_expr(s, st) << "\n";
      }
    }
  } catch (const ParseError& e) {
    throw InputError(std::string("cell: ") + e.what());
  } catch (const TypeError& e) {
    throw InputError(std::string("cell: ") + e.what());
  }
  return 0;
}

int cmd_pairs(const CommonOpts& o) {
  const Loaded l = load(o.poly);
  const int level = o.level ? o.level : 2;
  if (level == 2) {
    const auto ps = critical_pairs_word(l.spec);
    if (o.json_out) {
      json arr = json::array();
      for (const auto& b : ps) arr.push_back(word_branching_json(l.spec, b));
      std::cout << json{{"level", 2}, {"count", ps.size()}, {"pairs", arr}}.dump(2) << "\n";
    } else {
      std::cout << "critical pairs (level 2): " << ps.size() << "\n";
      for (const auto& b : ps) std::cout << "  " << describe(l.spec, b) << "\n";
    }
  } else {
    const auto ps = critical_pairs_diagram(l.spec);
    if (o.json_out) {
      json arr = json::array();
      for (const auto& b : ps) arr.push_back(diagram_branching_json(l.spec, b));
      std::cout << json{{"level", 3}, {"count", ps.size()}, {"pairs", arr}}.dump(2) << "\n";
    } else {
      std::cout << "critical pairs (level 3): " << ps.size() << "\n";
      for (const auto& b : ps) std::cout << "  " << describe(l.spec, b) << "\n";
    }
  }
  return 0;
}

int cmd_triples(const CommonOpts& o) {
  if (o.level == 3) throw InputError("critical triples are enumerated at level 2 only");
  const Loaded l = load(o.poly);
  const auto ts = critical_triples_word(l.spec);
  if (o.json_out) {
    json arr = json::array();
    for (const auto& b : ts) arr.push_back(word_branching_json(l.spec, b));
    std::cout << json{{"level", 2}, {"count", ts.size()}, {"triples", arr}}.dump(2) << "\n";
  } else {
    std::cout << "critical triples (level 2): " << ts.size() << "\n";
    for (const auto& b : ts) std::cout << "  " << describe(l.spec, b) << "\n";
  }
  return 0;
}

bool terminating_at(const Loaded& l, int level, const std::string& cert) {
  auto r = termination(l, level, cert);
  return r && r->pass;
}

int cmd_confluence(const CommonOpts& o) {
  const Loaded l = load(o.poly);
  const int level = o.level ? o.level : 2;
  const bool term = terminating_at(l, level, o.cert);
  ConfluenceReport r;
  try {
    r = level == 2 ? check_confluence_word(l.spec, budget_of(o), term)
                   : check_confluence_diagram(l.spec, budget_of(o), term);
  } catch (const BudgetExhausted& e) {
    if (o.json_out)
      std::cout << json{{"level", level}, {"verdict", "termination not established"}, {"error", e.what()}}.dump(2)
                << "\n";
    else
      std::cout << "confluence (level " << level << "): " << e.what() << "\n";
    return 1;
  }
  if (o.json_out) {
    std::cout << confluence_json(r).dump(2) << "\n";
  } else {
    std::cout << "confluence (level " << level << "): " << r.verdict() << ", " << r.pairs << " critical pair(s)\n";
    for (const JoinResult& j : r.joins) {
      std::cout << "  " << (j.joinable ? "joins " : "DOES NOT JOIN ") << j.source << "\n";
      if (!j.joinable)
        for (std::size_t k = 0; k < j.legs.size(); ++k)
          std::cout << "    leg " << k + 1 << ": " << j.legs[k] << " ~> " << j.normal_forms[k] << "\n";
    }
  }
  return r.confluent ? 0 : 1;
}

int cmd_termination(const CommonOpts& o) {
  const Loaded l = load(o.poly);
  std::string name = o.cert;
  if (name.empty()) {
    std::optional<std::string> d;
    if (o.level) d = default_cert(l, o.level);
    else d = default_cert(l, 3) ? default_cert(l, 3) : default_cert(l, 2);
    if (!d) throw InputError("no certificate given and no builtin certificate for this polygraph; use --cert");
    name = "builtin:" + *d;
  }
  const Certificate c = load_cert(name);
  if (o.level && cert_level(c) != o.level)
    throw InputError("certificate kind does not match --level " + std::to_string(o.level));
  CertReport r;
  try {
    r = check_cert(l.spec, c);
  } catch (const CertificateError& e) {
    throw InputError(e.what());
  }
  if (o.json_out) {
    json out = cert_json(r);
    out["level"] = cert_level(c);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "termination (level " << cert_level(c) << ", certificate " << r.cert << "): "
              << (r.pass ? "pass" : "FAIL") << "\n";
    for (const CertCheckLine& line : r.lines) std::cout << "  " << line.text() << "\n";
  }
  return r.pass ? 0 : 1;
}

int cmd_squier(const CommonOpts& o) {
  if (o.depth == 2 && o.level == 3) throw InputError("--depth 2 applies to level 2 only");
  const Loaded l = load(o.poly);
  const int level = o.level ? o.level : 2;
  SquierOptions so;
  so.terminating = terminating_at(l, level, o.cert);
  so.budget = budget_of(o);
  if (level == 3 && o.allow_composite) {
    try {
      so.supplement = builtin_supplement(l.spec, so.budget);
    } catch (const BudgetExhausted&) {
    }
  }
  const SquierReport r = o.depth == 2 ? check_squier_depth2(l.spec, so) : check_squier(l.spec, level, so);
  if (o.json_out) {
    std::cout << squier_json(r, o.allow_composite).dump(2) << "\n";
  } else {
    std::cout << "squier (level " << r.level << ", depth " << r.depth << "): " << squier_verdict(r, o.allow_composite)
              << "\n";
    print_squier(std::cout, r, "  ");
  }
  return r.pass(o.allow_composite) ? 0 : 1;
}

int cmd_report(const CommonOpts& o) {
  const Loaded l = load(o.poly);
  const PolygraphSpec& s = l.spec;
  const std::size_t budget = budget_of(o);
  bool failed = false;
  json out;
  std::ostringstream txt;

  out["polygraph"] = s.name;
  out["counts"] = {{"objects", s.objects.size()},
                   {"edges", s.edges.size()},
                   {"gens2", s.gens2.size()},
                   {"rules3", s.rules3.size()},
                   {"cells4", s.cells4.size()}};
  out["counts_convention"] = "instances";
  txt << "polygraph " << s.name << ": " << s.objects.size() << " object(s), " << s.edges.size() << " edge(s), "
      << s.gens2.size() << " 2-generator(s), " << s.rules3.size() << " 3-rule(s), " << s.cells4.size()
      << " 4-cell(s); counts are instances\n";
  const ValidationReport v = validate(s);
  out["validation"] = v.empty() ? "ok" : "invalid";
  txt << "validation: " << (v.empty() ? "ok" : "invalid") << "\n";

  for (int level = 2; level <= 3; ++level) {
    json L;
    const std::string p = "level " + std::to_string(level) + ": ";
    std::optional<CertReport> cert = termination(l, level, "");
    if (cert) {
      L["termination"] = cert_json(*cert);
      txt << p << "termination: " << (cert->pass ? "pass" : "FAIL") << " (" << cert->cert << ")\n";
      for (const CertCheckLine& line : cert->lines) txt << "    " << line.text() << "\n";
      failed = failed || !cert->pass;
    } else {
      L["termination"] = nullptr;
      txt << p << "termination: not established (no certificate)\n";
    }
    const bool term = cert && cert->pass;

    if (level == 2) {
      const auto ps = critical_pairs_word(s);
      const auto ts = critical_triples_word(s);
      L["critical_pairs"] = json::array();
      for (const auto& b : ps) L["critical_pairs"].push_back(word_branching_json(s, b));
      L["critical_triples"] = json::array();
      for (const auto& b : ts) L["critical_triples"].push_back(word_branching_json(s, b));
      txt << p << "critical pairs: " << ps.size() << "\n";
      for (const auto& b : ps) txt << "    " << describe(s, b) << "\n";
      txt << p << "critical triples: " << ts.size() << "\n";
      for (const auto& b : ts) txt << "    " << describe(s, b) << "\n";
    } else {
      const auto ps = critical_pairs_diagram(s);
      L["critical_pairs"] = json::array();
      for (const auto& b : ps) L["critical_pairs"].push_back(diagram_branching_json(s, b));
      txt << p << "critical pairs: " << ps.size() << "\n";
      for (const auto& b : ps) txt << "    " << describe(s, b) << "\n";
    }

    try {
      const ConfluenceReport c =
          level == 2 ? check_confluence_word(s, budget, term) : check_confluence_diagram(s, budget, term);
      L["confluence"] = confluence_json(c);
      txt << p << "confluence: " << c.verdict() << "\n";
      for (const JoinResult& j : c.joins)
        if (!j.joinable) {
          txt << "    does not join: " << j.source << "\n";
          for (std::size_t k = 0; k < j.legs.size(); ++k)
            txt << "      leg " << k + 1 << ": " << j.legs[k] << " ~> " << j.normal_forms[k] << "\n";
        }
      failed = failed || !c.confluent;
    } catch (const BudgetExhausted& e) {
      L["confluence"] = {{"verdict", "termination not established"}, {"error", e.what()}};
      txt << p << "confluence: not established (" << e.what() << ")\n";
    }

    SquierOptions so;
    so.terminating = term;
    so.budget = budget;
    if (level == 3) {
      try {
        so.supplement = builtin_supplement(s, budget);
      } catch (const BudgetExhausted&) {
      }
    }
    const SquierReport sq = check_squier(s, level, so);
    L["squier"] = squier_json(sq, true);
    txt << p << "squier: " << squier_verdict(sq, true) << "\n";
    print_squier(txt, sq, "    ");
    failed = failed || (!sq.qualified && !sq.pass(true));

    if (level == 2) {
      const SquierReport d2 = check_squier_depth2(s, so);
      L["squier_depth2"] = squier_json(d2, false);
      txt << p << "squier depth 2: " << squier_verdict(d2, false) << "\n";
      print_squier(txt, d2, "    ");
      failed = failed || (!d2.qualified && !d2.pass());
    }
    out["level" + std::to_string(level)] = L;
  }
  out["result"] = failed ? "property failure" : "ok";
  txt << "result: " << (failed ? "property failure" : "ok") << "\n";
  if (o.json_out)
    std::cout << out.dump(2) << "\n";
  else
    std::cout << txt.str();
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyrw: rewriting workbench for polygraphs up to dimension 4"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string level_name, cell;
  bool trace = false;

  auto add_poly = [&](CLI::App* c) { c->add_option("poly", o.poly, "catalog id or polygraph file")->required(); };
  auto add_budget = [&](CLI::App* c) {
    c->add_option("--budget", o.budget, "rewriting step budget (default from POLYRW_BUDGET or 100000)");
  };

  auto* list = app.add_subcommand("list", "list catalog polygraphs");
  auto* show = app.add_subcommand("show", "print a polygraph");
  add_poly(show);
  show->add_flag("--json", o.json_out, "emit the polygraph file format");
  auto* report = app.add_subcommand("report", "run every analysis");
  add_poly(report);
  report->add_flag("--json", o.json_out);
  add_budget(report);
  auto* normalize = app.add_subcommand("normalize", "normal form of a 1-cell or 2-cell");
  add_poly(normalize);
  normalize->add_option("--level", level_name, "1cell or 2cell")->required()->check(CLI::IsMember({"1cell", "2cell"}));
  normalize->add_option("--cell", cell, "cell expression")->required();
  normalize->add_flag("--trace", trace, "print each rewriting step");
  normalize->add_flag("--json", o.json_out);
  add_budget(normalize);

  auto* check = app.add_subcommand("check", "check one property");
  check->require_subcommand(1);
  std::vector<CLI::App*> checks;
  for (const char* name : {"pairs", "triples", "confluence", "termination", "squier"}) {
    auto* c = check->add_subcommand(name);
    add_poly(c);
    c->add_option("--level", o.level, "2 or 3")->check(CLI::IsMember({2, 3}));
    c->add_flag("--json", o.json_out);
    add_budget(c);
    checks.push_back(c);
  }
  checks[3]->add_option("--cert", o.cert, "certificate file or builtin:NAME");
  checks[2]->add_option("--cert", o.cert, "certificate establishing termination");
  checks[4]->add_option("--cert", o.cert, "certificate establishing termination");
  checks[4]->add_option("--depth", o.depth, "1 or 2")->check(CLI::IsMember({1, 2}));
  checks[4]->add_flag("--allow-composite", o.allow_composite,
                      "let normalization-built composite cells fill level-3 pairs no 4-cell fills");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list->parsed()) return cmd_list();
    if (show->parsed()) return cmd_show(o);
    if (report->parsed()) return cmd_report(o);
    if (normalize->parsed()) return cmd_normalize(o, level_name, cell, trace);
    if (checks[0]->parsed()) return cmd_pairs(o);
    if (checks[1]->parsed()) return cmd_triples(o);
    if (checks[2]->parsed()) return cmd_confluence(o);
    if (checks[3]->parsed()) return cmd_termination(o);
    if (checks[4]->parsed()) return cmd_squier(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
