#include "polyrw/termination.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "json.hpp"

namespace polyrw {

using nlohmann::json;

AffineForm AffineForm::var(int v, long long c) {
  AffineForm f;
  if (c != 0) f.coeffs[v] = c;
  return f;
}

AffineForm AffineForm::constant_form(long long c) {
  AffineForm f;
  f.constant = c;
  return f;
}

AffineForm& AffineForm::operator+=(const AffineForm& o) {
  constant += o.constant;
  for (auto [v, c] : o.coeffs) {
    long long& slot = coeffs[v];
    slot += c;
    if (slot == 0) coeffs.erase(v);
  }
  return *this;
}

AffineForm AffineForm::operator+(const AffineForm& o) const {
  AffineForm r = *this;
  r += o;
  return r;
}

AffineForm AffineForm::scaled(long long k) const {
  if (k == 0) return AffineForm{};
  AffineForm r;
  r.constant = constant * k;
  for (auto [v, c] : coeffs) r.coeffs[v] = c * k;
  return r;
}

AffineForm AffineForm::operator-(const AffineForm& o) const { return *this + o.scaled(-1); }

AffineForm AffineForm::substitute(const std::vector<AffineForm>& args) const {
  AffineForm r = constant_form(constant);
  for (auto [v, c] : coeffs) {
    if (v < 0 || v >= static_cast<int>(args.size()))
      throw CertificateError("affine form mentions variable " + variable_name(v) + " outside its " +
                             std::to_string(args.size()) + " inputs");
    r += args[v].scaled(c);
  }
  return r;
}

long long AffineForm::eval(const std::vector<long long>& x) const {
  long long s = constant;
  for (auto [v, c] : coeffs) s += c * x.at(v);
  return s;
}

int AffineForm::max_var() const { return coeffs.empty() ? -1 : coeffs.rbegin()->first; }

bool AffineForm::operator==(const AffineForm& o) const { return constant == o.constant && coeffs == o.coeffs; }

namespace {
const std::string kLetters = "ijklmnpqrstuvwyzabcdefgh";
}

std::string variable_name(int v) {
  if (v >= 0 && v < static_cast<int>(kLetters.size())) return std::string(1, kLetters[v]);
  return "x" + std::to_string(v);
}

std::optional<int> variable_index(const std::string& name) {
  if (name.size() == 1) {
    auto p = kLetters.find(name[0]);
    if (p != std::string::npos) return static_cast<int>(p);
  }
  if (name.size() > 1 && name[0] == 'x' && std::all_of(name.begin() + 1, name.end(), ::isdigit))
    return std::stoi(name.substr(1));
  if (!name.empty() && std::all_of(name.begin(), name.end(), ::isdigit)) return std::stoi(name);
  return std::nullopt;
}

std::string render(const AffineForm& f) {
  std::string s;
  auto term = [&](long long c, const std::string& v) {
    if (c == 0) return;
    if (c < 0) {
      s += "-";
      c = -c;
    } else if (!s.empty()) {
      s += "+";
    }
    if (c != 1 || v.empty()) s += std::to_string(c);
    s += v;
  };
  for (auto [v, c] : f.coeffs) term(c, variable_name(v));
  term(f.constant, "");
  return s.empty() ? "0" : s;
}

std::string render_tuple(const std::vector<AffineForm>& t) {
  if (t.size() == 1) return render(t[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + render(t[i]);
  return s + ")";
}

bool affine_dominates(const AffineForm& e1, const AffineForm& e2, bool strict) {
  const AffineForm delta = e1 - e2;
  long long at_ones = delta.constant;
  for (auto [v, c] : delta.coeffs) {
    if (c < 0) return false;
    at_ones += c;
  }
  return strict ? at_ones > 0 : at_ones >= 0;
}

// ---------------------------------------------------------------------------

std::string CertCheckLine::text() const {
  std::string s = subject + ": ";
  if (what != "weight") s += what + ": ";
  s += lhs + (strict ? " > " : " >= ") + rhs;
  if (!ok) s += "  FAILS";
  return s;
}

namespace {

std::string render_vec(const std::vector<long long>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

}  // namespace

std::vector<long long> path_weight(const Signature& sig, const WeightCert& c, const Path& p) {
  std::size_t k = c.edges.empty() ? 0 : c.edges.begin()->second.size();
  std::vector<long long> w(k, 0);
  for (EdgeId e : p.edges) {
    const auto* v = cert_lookup(c.edges, sig.edges.at(e).name);
    if (!v) throw CertificateError("weight certificate has no value for edge " + sig.edges.at(e).name);
    if (v->size() != k) throw CertificateError("weight certificate mixes dimensions");
    for (std::size_t i = 0; i < k; ++i) w[i] += (*v)[i];
  }
  return w;
}

bool weight_greater(const std::vector<long long>& a, const std::vector<long long>& b, WeightOrder o) {
  if (o == WeightOrder::Lex) return a > b;
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

CertReport check_weight_cert(const Signature& sig, const WeightCert& c) {
  for (const EdgeGen& e : sig.edges)
    if (!cert_lookup(c.edges, e.name)) throw CertificateError("weight certificate has no value for edge " + e.name);
  CertReport rep{c.name, true, {}};
  for (const Gen2& g : sig.gens2) {
    auto ws = path_weight(sig, c, g.src);
    auto wt = path_weight(sig, c, g.tgt);
    CertCheckLine l{g.name, "weight", render_vec(ws), render_vec(wt), true, weight_greater(ws, wt, c.order)};
    rep.pass = rep.pass && l.ok;
    rep.lines.push_back(l);
  }
  return rep;
}

namespace {

int edge_arity(const Signature& sig, const DerivationCert& c, EdgeId e) {
  const auto* a = cert_lookup(c.arity, sig.edges.at(e).name);
  if (!a) throw CertificateError("derivation certificate has no arity for edge " + sig.edges.at(e).name);
  return *a;
}

const GenValuation& gen_val(const Signature& sig, const DerivationCert& c, GenId g) {
  const auto* v = cert_lookup(c.gens, sig.gens2.at(g).name);
  if (!v) throw CertificateError("derivation certificate has no valuation for " + sig.gens2.at(g).name);
  return *v;
}

using Tuples = std::vector<std::vector<AffineForm>>;  // one tuple per wire

std::vector<AffineForm> flatten(const Tuples& t, std::size_t from, std::size_t len) {
  std::vector<AffineForm> out;
  for (std::size_t k = from; k < from + len; ++k) out.insert(out.end(), t[k].begin(), t[k].end());
  return out;
}

Tuples split(const Signature& sig, const DerivationCert& c, const Path& p, const std::vector<AffineForm>& flat,
             const std::string& who) {
  Tuples out;
  std::size_t pos = 0;
  for (EdgeId e : p.edges) {
    const int a = edge_arity(sig, c, e);
    if (pos + a > flat.size()) throw CertificateError(who + ": arity mismatch");
    out.emplace_back(flat.begin() + pos, flat.begin() + pos + a);
    pos += a;
  }
  if (pos != flat.size()) throw CertificateError(who + ": arity mismatch");
  return out;
}

}  // namespace

DerivationValue eval_derivation(const Signature& sig, const Diagram& d, const DerivationCert& c) {
  const std::vector<Path> bd = boundaries(sig, d);
  const Path& tgt = bd.back();
  DerivationValue out;
  int next = 0;
  Tuples X;
  for (EdgeId e : d.src.edges) {
    X.emplace_back();
    for (int k = 0; k < edge_arity(sig, c, e); ++k) X.back().push_back(AffineForm::var(next++));
  }
  out.x_vars = next;
  Tuples Y;
  for (EdgeId e : tgt.edges) {
    Y.emplace_back();
    for (int k = 0; k < edge_arity(sig, c, e); ++k) Y.back().push_back(AffineForm::var(next++));
  }
  out.y_vars = next - out.x_vars;

  const std::size_t n = d.layers.size();
  std::vector<std::vector<AffineForm>> x_in(n), y_in(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Layer& l = d.layers[i];
    const Gen2& g = sig.gens2.at(l.gen);
    const GenValuation& v = gen_val(sig, c, l.gen);
    x_in[i] = flatten(X, l.offset(), g.src.size());
    std::vector<AffineForm> img;
    for (const AffineForm& f : v.X) img.push_back(f.substitute(x_in[i]));
    Tuples outw = split(sig, c, g.tgt, img, "X(" + g.name + ")");
    X.erase(X.begin() + l.offset(), X.begin() + l.offset() + g.src.size());
    X.insert(X.begin() + l.offset(), outw.begin(), outw.end());
  }
  for (std::size_t i = n; i-- > 0;) {
    const Layer& l = d.layers[i];
    const Gen2& g = sig.gens2.at(l.gen);
    const GenValuation& v = gen_val(sig, c, l.gen);
    y_in[i] = flatten(Y, l.offset(), g.tgt.size());
    std::vector<AffineForm> img;
    for (const AffineForm& f : v.Y) img.push_back(f.substitute(y_in[i]));
    Tuples outw = split(sig, c, g.src, img, "Y(" + g.name + ")");
    Y.erase(Y.begin() + l.offset(), Y.begin() + l.offset() + g.tgt.size());
    Y.insert(Y.begin() + l.offset(), outw.begin(), outw.end());
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<AffineForm> args = x_in[i];
    args.insert(args.end(), y_in[i].begin(), y_in[i].end());
    out.d += gen_val(sig, c, d.layers[i].gen).d.substitute(args);
  }
  out.X = flatten(X, 0, X.size());
  out.Y = flatten(Y, 0, Y.size());
  return out;
}

CertReport check_derivation_cert(const PolygraphSpec& spec, const DerivationCert& c) {
  for (GenId g = 0; g < static_cast<GenId>(spec.gens2.size()); ++g) (void)gen_val(spec, c, g);
  for (EdgeId e = 0; e < static_cast<EdgeId>(spec.edges.size()); ++e) (void)edge_arity(spec, c, e);
  CertReport rep{c.name, true, {}};
  for (const Rule3& r : spec.rules3) {
    const DerivationValue s = eval_derivation(spec, r.src, c);
    const DerivationValue t = eval_derivation(spec, r.tgt, c);
    auto tuple_line = [&](const char* what, const std::vector<AffineForm>& a, const std::vector<AffineForm>& b) {
      if (a.empty() && b.empty()) return;
      bool ok = a.size() == b.size();
      for (std::size_t k = 0; ok && k < a.size(); ++k) ok = affine_dominates(a[k], b[k], false);
      rep.lines.push_back(CertCheckLine{r.name, what, render_tuple(a), render_tuple(b), false, ok});
      rep.pass = rep.pass && ok;
    };
    tuple_line("X", s.X, t.X);
    tuple_line("Y", s.Y, t.Y);
    const bool ok = affine_dominates(s.d, t.d, true);
    rep.lines.push_back(CertCheckLine{r.name, "d", render(s.d), render(t.d), true, ok});
    rep.pass = rep.pass && ok;
  }
  return rep;
}

CertReport check_cert(const PolygraphSpec& spec, const Certificate& c) {
  if (const auto* w = std::get_if<WeightCert>(&c)) return check_weight_cert(spec, *w);
  return check_derivation_cert(spec, std::get<DerivationCert>(c));
}

// ---------------------------------------------------------------------------

namespace {

json form_json(const AffineForm& f) {
  json co = json::object();
  for (auto [v, c] : f.coeffs) co[variable_name(v)] = c;
  return json{{"const", f.constant}, {"coeffs", co}};
}

AffineForm form_from(const json& j) {
  AffineForm f;
  f.constant = j.value("const", 0LL);
  if (j.contains("coeffs"))
    for (auto& [k, v] : j["coeffs"].items()) {
      auto idx = variable_index(k);
      if (!idx) throw CertificateError("unknown variable name '" + k + "'");
      const long long c = v.get<long long>();
      if (c < 0) throw CertificateError("negative coefficient in certificate");
      if (c) f.coeffs[*idx] = c;
    }
  if (f.constant < 0) throw CertificateError("negative constant in certificate");
  return f;
}

std::vector<AffineForm> forms_from(const json& j) {
  std::vector<AffineForm> v;
  for (const auto& x : j) v.push_back(form_from(x));
  return v;
}

}  // namespace

Certificate parse_certificate(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CertificateError(std::string("malformed certificate: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "weight") {
      WeightCert c;
      c.name = j.value("name", std::string("weight"));
      const std::string order = j.value("order", std::string("lex"));
      if (order != "lex" && order != "product") throw CertificateError("order must be lex or product");
      c.order = order == "lex" ? WeightOrder::Lex : WeightOrder::Product;
      for (auto& [k, v] : j.at("edges").items()) c.edges[k] = v.get<std::vector<long long>>();
      return c;
    }
    if (kind == "derivation") {
      DerivationCert c;
      c.name = j.value("name", std::string("derivation"));
      for (auto& [k, v] : j.at("arity").items()) c.arity[k] = v.get<int>();
      for (auto& [k, v] : j.at("gens").items())
        c.gens[k] = GenValuation{forms_from(v.value("X", json::array())), forms_from(v.value("Y", json::array())),
                                 form_from(v.at("d"))};
      return c;
    }
    throw CertificateError("unknown certificate kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw CertificateError(std::string("malformed certificate: ") + e.what());
  }
}

std::string serialize_certificate(const Certificate& c) {
  json j;
  if (const auto* w = std::get_if<WeightCert>(&c)) {
    j = json{{"kind", "weight"}, {"name", w->name}, {"order", w->order == WeightOrder::Lex ? "lex" : "product"}};
    j["edges"] = json::object();
    for (const auto& [k, v] : w->edges) j["edges"][k] = v;
  } else {
    const auto& d = std::get<DerivationCert>(c);
    j = json{{"kind", "derivation"}, {"name", d.name}, {"arity", d.arity}};
    j["gens"] = json::object();
    for (const auto& [k, v] : d.gens) {
      json x = json::array(), y = json::array();
      for (const auto& f : v.X) x.push_back(form_json(f));
      for (const auto& f : v.Y) y.push_back(form_json(f));
      j["gens"][k] = json{{"X", x}, {"Y", y}, {"d", form_json(v.d)}};
    }
  }
  return j.dump(2);
}

// ---------------------------------------------------------------------------

const char* to_string(Cmp c) {
  switch (c) {
    case Cmp::Less: return "less";
    case Cmp::Equal: return "equal";
    case Cmp::Greater: return "greater";
    case Cmp::Incomparable: return "incomparable";
  }
  return "?";
}

Multiset multiset_sum(const Multiset& a, const Multiset& b) {
  Multiset r = a;
  for (auto [e, n] : b) r[e] += n;
  return r;
}

bool multiset_greater(const Multiset& m1, const Multiset& m2, const BaseOrder& gt) {
  if (m1 == m2) return false;
  auto count = [](const Multiset& m, int e) {
    auto it = m.find(e);
    return it == m.end() ? 0 : it->second;
  };
  std::set<int> support;
  for (auto [e, n] : m1) support.insert(e);
  for (auto [e, n] : m2) support.insert(e);
  for (int e : support) {
    if (count(m1, e) >= count(m2, e)) continue;
    bool dominated = false;
    for (int e2 : support)
      if (gt(e2, e) && count(m1, e2) > count(m2, e2)) {
        dominated = true;
        break;
      }
    if (!dominated) return false;
  }
  return true;
}

Cmp multiset_compare(const Multiset& m1, const Multiset& m2, const BaseOrder& gt) {
  if (m1 == m2) return Cmp::Equal;
  if (multiset_greater(m1, m2, gt)) return Cmp::Greater;
  if (multiset_greater(m2, m1, gt)) return Cmp::Less;
  return Cmp::Incomparable;
}

bool one_cell_reach_order(const Signature& sig, const Path& u, const Path& v, std::size_t budget) {
  std::set<Path> seen;
  std::deque<Path> queue;
  auto push_successors = [&](const Path& p) {
    for (const WordRedex& r : find_word_redexes(sig, p)) {
      Path q = apply_word_step(sig, p, r);
      if (seen.insert(q).second) {
        if (seen.size() > budget) throw BudgetExhausted(budget);
        queue.push_back(std::move(q));
      }
    }
  };
  push_successors(u);
  while (!queue.empty()) {
    Path p = std::move(queue.front());
    queue.pop_front();
    if (p == v) return true;
    push_successors(p);
  }
  return false;
}

}  // namespace polyrw
