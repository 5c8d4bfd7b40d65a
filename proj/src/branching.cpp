#include "polyrw/branching.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace polyrw {

const char* to_string(BranchClass c) {
  switch (c) {
    case BranchClass::Aspherical: return "aspherical";
    case BranchClass::Peiffer: return "Peiffer";
    case BranchClass::Overlapping: return "overlapping";
  }
  return "?";
}

namespace {

std::vector<int> selected(const RuleSubset& rules, std::size_t total) {
  if (rules) return *rules;
  std::vector<int> all(total);
  std::iota(all.begin(), all.end(), 0);
  return all;
}

std::uint64_t bit(int i) { return std::uint64_t{1} << i; }
std::uint64_t full_mask(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : bit(static_cast<int>(n)) - 1; }

std::uint64_t mask_of(const std::vector<int>& nodes) {
  std::uint64_t m = 0;
  for (int i : nodes) m |= bit(i);
  return m;
}

// ---------------------------------------------------------------------------
// words

std::size_t word_end(const Signature& sig, const WordRedex& r) { return r.offset + sig.gens2.at(r.rule).src.size(); }

bool word_less(const Signature& sig, const WordRedex& a, const WordRedex& b) {
  return std::tie(a.offset, sig.gens2[a.rule].name, a.rule) < std::tie(b.offset, sig.gens2[b.rule].name, b.rule);
}

void sort_steps(const Signature& sig, std::vector<WordRedex>& s) {
  std::sort(s.begin(), s.end(), [&](const WordRedex& a, const WordRedex& b) { return word_less(sig, a, b); });
}

// Lays s over w at offset o, extending w to the right. False when the
// letters or objects disagree.
bool overlay(const Signature& sig, Path& w, const Path& s, std::size_t o) {
  if (o > w.size() || sig.object_at(w, o) != s.at) return false;
  const std::size_t shared = std::min(s.size(), w.size() - o);
  if (!std::equal(s.edges.begin(), s.edges.begin() + shared, w.edges.begin() + o)) return false;
  w.edges.insert(w.edges.end(), s.edges.begin() + shared, s.edges.end());
  return true;
}

using WordKey = std::pair<Path, std::vector<std::pair<std::size_t, GenId>>>;

// Steps sorted by offset; each new step starts no later than the current
// right end, otherwise a split separates the prefix from it.
void grow_words(const Signature& sig, const std::vector<int>& R, const Path& w, std::vector<WordRedex>& steps,
                std::size_t arity, std::set<WordKey>& seen, std::vector<WordBranching>& out) {
  if (steps.size() == arity) {
    for (std::size_t i = 0; i < arity; ++i)
      for (std::size_t j = i + 1; j < arity; ++j)
        if (steps[i] == steps[j]) return;
    WordBranching b = make_word_branching(sig, w, steps);
    if (b.cls != BranchClass::Overlapping || !b.minimal) return;
    WordKey key{w, {}};
    for (const WordRedex& r : b.steps) key.second.emplace_back(r.offset, r.rule);
    if (seen.insert(key).second) out.push_back(std::move(b));
    return;
  }
  for (int r : R) {
    const Path& s = sig.gens2.at(r).src;
    if (steps.empty()) {
      steps.push_back(WordRedex{r, 0});
      grow_words(sig, R, s, steps, arity, seen, out);
      steps.pop_back();
      continue;
    }
    for (std::size_t o = steps.back().offset; o <= w.size(); ++o) {
      Path w2 = w;
      if (!overlay(sig, w2, s, o)) continue;
      steps.push_back(WordRedex{r, o});
      grow_words(sig, R, w2, steps, arity, seen, out);
      steps.pop_back();
    }
  }
}

std::vector<WordBranching> critical_word(const Signature& sig, const RuleSubset& rules, std::size_t arity) {
  std::vector<int> R = selected(rules, sig.gens2.size());
  std::set<WordKey> seen;
  std::vector<WordBranching> out;
  std::vector<WordRedex> steps;
  grow_words(sig, R, Path{}, steps, arity, seen, out);
  std::sort(out.begin(), out.end(), [&](const WordBranching& a, const WordBranching& b) {
    const std::string sa = path_to_string(sig, a.source), sb = path_to_string(sig, b.source);
    if (sa != sb) return sa < sb;
    return std::lexicographical_compare(a.steps.begin(), a.steps.end(), b.steps.begin(), b.steps.end(),
                                        [&](const WordRedex& x, const WordRedex& y) { return word_less(sig, x, y); });
  });
  return out;
}

}  // namespace

BranchClass classify_word_branching(const Signature& sig, const std::vector<WordRedex>& steps) {
  const std::size_t k = steps.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (steps[i] == steps[j]) return BranchClass::Aspherical;
  if (k < 2) return BranchClass::Overlapping;
  std::size_t right = 0;
  for (const WordRedex& r : steps) right = std::max(right, word_end(sig, r));
  // A split point s separates the steps into two nonempty groups, each
  // entirely on its own side.
  for (std::size_t s = 0; s <= right; ++s) {
    std::size_t left_only = 0, right_only = 0;
    bool fits = true;
    for (const WordRedex& r : steps) {
      const bool l = word_end(sig, r) <= s, rr = r.offset >= s;
      if (!l && !rr) {
        fits = false;
        break;
      }
      if (l && !rr) ++left_only;
      if (rr && !l) ++right_only;
    }
    if (fits && left_only != k && right_only != k) return BranchClass::Peiffer;
  }
  return BranchClass::Overlapping;
}

bool word_branching_minimal(const Signature& sig, const Path& source, const std::vector<WordRedex>& steps) {
  if (steps.empty()) return false;
  std::size_t lo = source.size(), hi = 0;
  for (const WordRedex& r : steps) {
    lo = std::min(lo, r.offset);
    hi = std::max(hi, word_end(sig, r));
  }
  return lo == 0 && hi == source.size();
}

WordBranching make_word_branching(const Signature& sig, const Path& source, std::vector<WordRedex> steps) {
  sort_steps(sig, steps);
  WordBranching b;
  b.source = source;
  b.cls = classify_word_branching(sig, steps);
  b.minimal = word_branching_minimal(sig, source, steps);
  b.steps = std::move(steps);
  return b;
}

std::vector<WordBranching> critical_pairs_word(const Signature& sig, const RuleSubset& rules) {
  return critical_word(sig, rules, 2);
}

std::vector<WordBranching> critical_triples_word(const Signature& sig, const RuleSubset& rules) {
  return critical_word(sig, rules, 3);
}

// ---------------------------------------------------------------------------
// diagrams

namespace {

// Wire ids of the target boundary; source wires are numbered 0..|src|-1.
std::vector<int> final_wires(const Signature& sig, const Diagram& d) {
  std::vector<int> cut(d.src.size());
  std::iota(cut.begin(), cut.end(), 0);
  int next = static_cast<int>(cut.size());
  for (const Layer& l : d.layers) {
    const Gen2& g = sig.gens2.at(l.gen);
    const auto a = static_cast<std::ptrdiff_t>(l.left.size());
    cut.erase(cut.begin() + a, cut.begin() + a + static_cast<std::ptrdiff_t>(g.src.size()));
    std::vector<int> fresh(g.tgt.size());
    std::iota(fresh.begin(), fresh.end(), next);
    next += static_cast<int>(fresh.size());
    cut.insert(cut.begin() + a, fresh.begin(), fresh.end());
  }
  return cut;
}

// A wire running untouched along the left or right border.
bool strippable(const Signature& sig, const Diagram& d) {
  const int n = static_cast<int>(d.src.size());
  if (n == 0) return false;
  const std::vector<int> cut = final_wires(sig, d);
  return !cut.empty() && (cut.front() == 0 || cut.back() == n - 1);
}

std::uint64_t ancestors(const Poset& P, std::uint64_t S) {
  std::uint64_t up = 0;
  for (int i = 0; i < P.n; ++i)
    if (S >> i & 1) up |= P.below[i];
  return up;
}

BranchClass classify_masks(const Poset& P, const DiagramRedex& a, const DiagramRedex& b) {
  if (a.step.rule == b.step.rule && a.nodes == b.nodes && a.step.left.size() == b.step.left.size())
    return BranchClass::Aspherical;
  const std::uint64_t s1 = mask_of(a.nodes), s2 = mask_of(b.nodes);
  if ((s1 & s2) == 0 && ((ancestors(P, s1) & s2) == 0 || (ancestors(P, s2) & s1) == 0)) return BranchClass::Peiffer;
  return BranchClass::Overlapping;
}

std::vector<int> diagram_key(const Diagram& d) {
  std::vector<int> k{d.src.at, static_cast<int>(d.src.size())};
  k.insert(k.end(), d.src.edges.begin(), d.src.edges.end());
  for (const Layer& l : d.layers) {
    k.push_back(l.gen);
    k.push_back(static_cast<int>(l.left.size()));
  }
  return k;
}

using Multi = std::vector<int>;  // count per generator

// Every way of adding one generator on top of or below `cur` so that it
// shares wires with the current boundary or sits right next to it. Wires
// the new generator needs beyond the boundary are whiskered onto cur.
void attach(const Signature& sig, const Diagram& cur, GenId g, std::vector<Diagram>& out) {
  const Gen2& G = sig.gens2.at(g);
  const Diagram gd = gen_diagram(sig, g);
  for (int side = 0; side < 2; ++side) {
    const bool top = side == 0;
    const Path& face = top ? G.tgt : G.src;
    const Path bound = top ? cur.src : target(sig, cur);
    const long n = static_cast<long>(bound.size()), t = static_cast<long>(face.size());
    for (long p = -t; p <= n; ++p) {
      try {
        const long lh = p < 0 ? -p : 0;
        const long rh = std::max(0L, p + t - n);
        Path L = lh ? sub_path(sig, face, 0, lh) : empty_path(cur.src.at);
        Path R = rh ? sub_path(sig, face, t - rh, rh) : empty_path(sig.end(cur.src));
        const Diagram W = whisker(sig, L, cur, R);
        const Path wb = top ? W.src : target(sig, W);
        const std::size_t at = static_cast<std::size_t>(std::max(0L, p));
        const Diagram piece = whisker(sig, sub_path(sig, wb, 0, at), gd,
                                      sub_path(sig, wb, at + face.size(), wb.size() - at - face.size()));
        out.push_back(canonicalize(sig, top ? vcomp(sig, piece, W) : vcomp(sig, W, piece)));
      } catch (const TypeError&) {
      }
    }
  }
}

struct RedexKey {
  RuleId rule;
  std::vector<int> nodes;
  std::size_t left;
  auto operator<=>(const RedexKey&) const = default;
};

RedexKey redex_key(const DiagramRedex& r) { return RedexKey{r.step.rule, r.nodes, r.step.left.size()}; }

}  // namespace

BranchClass classify_diagram_branching(const Signature& sig, const Diagram& source, const DiagramRedex& a,
                                       const DiagramRedex& b) {
  return classify_masks(dependency_poset(sig, canonicalize(sig, source)), a, b);
}

bool diagram_branching_minimal(const Signature& sig, const Diagram& source, const std::vector<DiagramRedex>& steps) {
  const Diagram host = canonicalize(sig, source);
  std::uint64_t u = 0;
  for (const DiagramRedex& r : steps) u |= mask_of(r.nodes);
  return u == full_mask(host.layers.size()) && !strippable(sig, host);
}

std::vector<DiagramBranching> critical_pairs_diagram(const PolygraphSpec& spec, const RuleSubset& rules) {
  const std::vector<int> R = selected(rules, spec.rules3.size());
  const std::size_t ng = spec.gens2.size();
  std::set<std::pair<std::vector<int>, std::pair<RedexKey, RedexKey>>> seen;
  std::set<std::pair<std::vector<int>, std::vector<int>>> verified;  // (candidate, rule subset)
  std::vector<std::pair<std::string, DiagramBranching>> out;

  auto verify = [&](const Diagram& c, const std::vector<int>& sub) {
    if (!verified.insert({diagram_key(c), sub}).second) return;
    if (strippable(spec, c)) return;
    const auto reds = find_diagram_redexes(spec, c, sub);
    if (reds.size() < 2) return;
    const Poset P = dependency_poset(spec, c);
    const std::uint64_t all = full_mask(c.layers.size());
    for (std::size_t i = 0; i < reds.size(); ++i)
      for (std::size_t j = i + 1; j < reds.size(); ++j) {
        if ((mask_of(reds[i].nodes) | mask_of(reds[j].nodes)) != all) continue;
        if (classify_masks(P, reds[i], reds[j]) != BranchClass::Overlapping) continue;
        RedexKey ka = redex_key(reds[i]), kb = redex_key(reds[j]);
        const bool swap = kb < ka;
        if (!seen.insert({diagram_key(c), swap ? std::pair(kb, ka) : std::pair(ka, kb)}).second) continue;
        DiagramBranching b;
        b.source = c;
        b.steps = swap ? std::vector{reds[j], reds[i]} : std::vector{reds[i], reds[j]};
        b.cls = BranchClass::Overlapping;
        b.minimal = true;
        out.emplace_back(diagram_expr(spec, c), std::move(b));
      }
  };

  for (RuleId r1 : R)
    for (RuleId r2 : R) {
      const Rule3& A = spec.rules3.at(r1);
      const Rule3& B = spec.rules3.at(r2);
      if (A.src.layers.empty() || B.src.layers.empty()) continue;
      if (A.src.layers.size() + B.src.layers.size() > 64) continue;
      std::vector<int> sub{r1};
      if (r2 != r1) sub.push_back(r2);
      std::sort(sub.begin(), sub.end());
      Multi ga(ng, 0), gb(ng, 0);
      for (const Layer& l : A.src.layers) ++ga[l.gen];
      for (const Layer& l : B.src.layers) ++gb[l.gen];

      // E: the layers of B's source not shared with A's; what is shared
      // must fit among A's layers. E may be everything: B then interleaves
      // with A without sharing a layer.
      std::vector<Multi> extras{Multi(ng, 0)};
      for (std::size_t g = 0; g < ng; ++g) {
        std::vector<Multi> next;
        for (const Multi& e : extras)
          for (int c = std::max(0, gb[g] - ga[g]); c <= gb[g]; ++c) {
            Multi e2 = e;
            e2[g] = c;
            next.push_back(std::move(e2));
          }
        extras = std::move(next);
      }

      const Diagram start = canonicalize(spec, A.src);
      for (const Multi& E : extras) {
        std::map<std::vector<int>, std::pair<Diagram, Multi>> level{{diagram_key(start), {start, E}}};
        int remaining = std::accumulate(E.begin(), E.end(), 0);
        for (; remaining > 0; --remaining) {
          std::map<std::vector<int>, std::pair<Diagram, Multi>> next;
          for (const auto& [key, state] : level) {
            const auto& [d, left] = state;
            for (std::size_t g = 0; g < ng; ++g) {
              if (left[g] == 0) continue;
              Multi left2 = left;
              --left2[g];
              std::vector<Diagram> grown;
              attach(spec, d, static_cast<GenId>(g), grown);
              for (Diagram& x : grown) {
                std::vector<int> k = diagram_key(x);
                k.insert(k.end(), left2.begin(), left2.end());
                next.try_emplace(std::move(k), std::move(x), left2);
              }
            }
          }
          level = std::move(next);
        }
        for (const auto& [key, state] : level) verify(state.first, sub);
      }
    }

  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<DiagramBranching> res;
  res.reserve(out.size());
  for (auto& [k, b] : out) res.push_back(std::move(b));
  return res;
}

// ---------------------------------------------------------------------------
// confluence

std::string ConfluenceReport::verdict() const {
  if (!confluent) return "not confluent";
  if (!terminating_established) return "locally confluent (termination not established)";
  return "confluent";
}

std::string describe(const Signature& sig, const WordBranching& b) {
  std::string s = path_to_string(sig, b.source) + " :: ";
  for (std::size_t i = 0; i < b.steps.size(); ++i) {
    if (i) s += " / ";
    s += sig.gens2.at(b.steps[i].rule).name + "@" + std::to_string(b.steps[i].offset);
  }
  return s;
}

std::string describe(const PolygraphSpec& spec, const DiagramBranching& b) {
  std::string s = diagram_summary(spec, b.source) + " :: ";
  for (std::size_t i = 0; i < b.steps.size(); ++i) {
    if (i) s += " / ";
    s += spec.rules3.at(b.steps[i].step.rule).name + "[";
    for (std::size_t k = 0; k < b.steps[i].nodes.size(); ++k) s += (k ? "," : "") + std::to_string(b.steps[i].nodes[k]);
    s += "]";
  }
  return s;
}

ConfluenceReport check_confluence_word(const Signature& sig, std::size_t budget, bool terminating) {
  ConfluenceReport rep;
  rep.level = 2;
  rep.terminating_established = terminating;
  rep.confluent = true;
  for (const WordBranching& b : critical_pairs_word(sig)) {
    JoinResult j;
    j.source = describe(sig, b);
    j.source_expr = path_expr(sig, b.source);
    std::vector<Path> nfs;
    for (const WordRedex& r : b.steps) {
      const Path t = apply_word_step(sig, b.source, r);
      const Path nf = normalize_path(sig, t, budget).first;
      j.legs.push_back(sig.gens2[r.rule].name + "@" + std::to_string(r.offset) + " -> " + path_to_string(sig, t));
      j.normal_forms.push_back(path_to_string(sig, nf));
      j.normal_form_exprs.push_back(path_expr(sig, nf));
      nfs.push_back(nf);
    }
    j.joinable = nfs[0] == nfs[1];
    rep.confluent = rep.confluent && j.joinable;
    rep.joins.push_back(std::move(j));
  }
  rep.pairs = rep.joins.size();
  return rep;
}

ConfluenceReport check_confluence_diagram(const PolygraphSpec& spec, std::size_t budget, bool terminating) {
  ConfluenceReport rep;
  rep.level = 3;
  rep.terminating_established = terminating;
  rep.confluent = true;
  for (const DiagramBranching& b : critical_pairs_diagram(spec)) {
    JoinResult j;
    j.source = describe(spec, b);
    j.source_expr = diagram_expr(spec, b.source);
    std::vector<Diagram> nfs;
    for (const DiagramRedex& r : b.steps) {
      const Diagram nf = normalize_diagram(spec, r.result, budget).first;
      j.legs.push_back(spec.rules3[r.step.rule].name + " -> " + diagram_summary(spec, r.result));
      j.normal_forms.push_back(diagram_summary(spec, nf));
      j.normal_form_exprs.push_back(diagram_expr(spec, nf));
      nfs.push_back(nf);
    }
    j.joinable = diagrams_equal(spec, nfs[0], nfs[1]);
    rep.confluent = rep.confluent && j.joinable;
    rep.joins.push_back(std::move(j));
  }
  rep.pairs = rep.joins.size();
  return rep;
}

// ---------------------------------------------------------------------------
// Squier

std::string Filling::describe(const PolygraphSpec& spec) const {
  if (kind == Identity) return "identity";
  return spec.rules3.at(rule).name + (inverse ? "^-" : "") + " at left " + std::to_string(left);
}

bool rule_fills(const PolygraphSpec& spec, RuleId r, const Path& source, const WordRedex& f, const WordRedex& g) {
  const Rule3& A = spec.rules3.at(r);
  return A.src.src == source && starts_with(spec, A.src, Slot{f.rule, f.offset}) &&
         starts_with(spec, A.tgt, Slot{g.rule, g.offset});
}

Filling canonical_filling(const PolygraphSpec& spec, const Path& source, const WordRedex& f, const WordRedex& g) {
  Filling fill;
  if (classify_word_branching(spec, {f, g}) != BranchClass::Overlapping) return fill;
  const std::size_t lo = std::min(f.offset, g.offset);
  const std::size_t hi = std::max(word_end(spec, f), word_end(spec, g));
  const Path w = sub_path(spec, source, lo, hi - lo);
  const WordRedex f2{f.rule, f.offset - lo}, g2{g.rule, g.offset - lo};
  for (RuleId r = 0; r < static_cast<RuleId>(spec.rules3.size()); ++r) {
    const bool plus = rule_fills(spec, r, w, f2, g2);
    if (plus || rule_fills(spec, r, w, g2, f2)) {
      fill.kind = Filling::Rule;
      fill.rule = r;
      fill.inverse = !plus;
      fill.left = lo;
      return fill;
    }
  }
  throw std::runtime_error("branching not covered: no 3-cell fills " + spec.gens2[f.rule].name + "@" +
                           std::to_string(f.offset) + " / " + spec.gens2[g.rule].name + "@" +
                           std::to_string(g.offset) + " on " + path_to_string(spec, source));
}

namespace {

// Indices in canonicalize(step_source(s)) of the layers the step rewrites.
std::vector<int> step_nodes(const PolygraphSpec& spec, const Step3& s, Diagram* canonical_source) {
  std::vector<int> perm;
  Diagram c = canonicalize(spec, step_source(spec, s), &perm);
  const int t = static_cast<int>(s.top.layers.size());
  const int m = static_cast<int>(step_redex_side(spec, s).layers.size());
  std::vector<int> nodes;
  for (int k = 0; k < static_cast<int>(perm.size()); ++k)
    if (perm[k] >= t && perm[k] < t + m) nodes.push_back(k);
  if (canonical_source) *canonical_source = std::move(c);
  return nodes;
}

bool step_is(const PolygraphSpec& spec, const Step3& s, const Diagram& source, const DiagramRedex& r) {
  if (s.inverse || s.rule != r.step.rule) return false;
  Diagram c;
  const std::vector<int> nodes = step_nodes(spec, s, &c);
  return c == source && nodes == r.nodes;
}

// Canonical 2-cells visited by a step sequence, or nullopt when the chain
// breaks.
std::optional<std::vector<Diagram>> visited(const PolygraphSpec& spec, const std::vector<Step3>& steps) {
  if (steps.empty()) return std::nullopt;
  try {
    std::vector<Diagram> ds{canonicalize(spec, step_source(spec, steps[0]))};
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (i > 0 && canonicalize(spec, step_source(spec, steps[i])) != ds.back()) return std::nullopt;
      ds.push_back(canonicalize(spec, step_target(spec, steps[i])));
    }
    return ds;
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

bool parallel_sequences(const PolygraphSpec& spec, const std::vector<Step3>& a, const std::vector<Step3>& b) {
  auto da = visited(spec, a), db = visited(spec, b);
  return da && db && da->front() == db->front() && da->back() == db->back();
}

}  // namespace

std::vector<Cell4Decl> builtin_supplement(const PolygraphSpec& spec, std::size_t budget) {
  std::vector<Cell4Decl> out;
  int k = 0;
  for (const DiagramBranching& b : critical_pairs_diagram(spec)) {
    bool filled = false;
    for (const Cell4Decl& c : spec.cells4) {
      if (c.src.empty() || c.tgt.empty()) continue;
      if ((step_is(spec, c.src[0], b.source, b.steps[0]) && step_is(spec, c.tgt[0], b.source, b.steps[1])) ||
          (step_is(spec, c.src[0], b.source, b.steps[1]) && step_is(spec, c.tgt[0], b.source, b.steps[0])))
        filled = true;
    }
    if (filled) continue;
    Cell4Decl cell;
    cell.name = "omega_" + std::to_string(++k);
    std::vector<Diagram> nfs;
    for (int leg = 0; leg < 2; ++leg) {
      auto [nf, seq] = normalize_diagram(spec, b.steps[leg].result, budget);
      std::vector<Step3>& side = leg == 0 ? cell.src : cell.tgt;
      side.push_back(b.steps[leg].step);
      side.insert(side.end(), seq.steps.begin(), seq.steps.end());
      nfs.push_back(nf);
    }
    if (diagrams_equal(spec, nfs[0], nfs[1]))
      out.push_back(std::move(cell));
    else
      --k;
  }
  return out;
}

SquierReport check_squier(const PolygraphSpec& spec, int level, const SquierOptions& opt) {
  if (level != 2 && level != 3) throw std::invalid_argument("check_squier: level must be 2 or 3");
  SquierReport rep;
  rep.level = level;
  rep.depth = 1;

  bool confluent = false;
  try {
    confluent = level == 2 ? check_confluence_word(spec, opt.budget, opt.terminating).confluent
                           : check_confluence_diagram(spec, opt.budget, opt.terminating).confluent;
  } catch (const BudgetExhausted& e) {
    rep.qualification = e.what();
  }
  if (!opt.terminating || !confluent) {
    rep.qualified = true;
    if (rep.qualification.empty())
      rep.qualification = !opt.terminating ? "termination not established at level " + std::to_string(level)
                                           : "not confluent at level " + std::to_string(level);
  }

  // matches[i]: cells filling branching i, with orientation and whether
  // they come from the supplement.
  struct Match {
    std::string cell;
    bool plus;
    bool composite;
    bool ok;
  };
  std::vector<std::string> names;
  std::vector<std::vector<Match>> matches;
  std::vector<int> cell_uses;

  if (level == 2) {
    const auto pairs = critical_pairs_word(spec);
    matches.resize(pairs.size());
    cell_uses.assign(spec.rules3.size(), 0);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      names.push_back(describe(spec, pairs[i]));
      const auto& [w, st, cls, min] = pairs[i];
      for (RuleId r = 0; r < static_cast<RuleId>(spec.rules3.size()); ++r) {
        const bool plus = rule_fills(spec, r, w, st[0], st[1]);
        if (plus || rule_fills(spec, r, w, st[1], st[0])) {
          matches[i].push_back(Match{spec.rules3[r].name, plus, false, true});
          ++cell_uses[r];
        }
      }
    }
    for (std::size_t r = 0; r < spec.rules3.size(); ++r)
      if (cell_uses[r] == 0) rep.unmatched_cells.push_back(spec.rules3[r].name);
    rep.bijection = std::all_of(cell_uses.begin(), cell_uses.end(), [](int u) { return u == 1; });
  } else {
    const auto pairs = critical_pairs_diagram(spec);
    matches.resize(pairs.size());
    cell_uses.assign(spec.cells4.size(), 0);
    auto try_cell = [&](const Cell4Decl& c, std::size_t i, bool composite) -> bool {
      if (c.src.empty() || c.tgt.empty()) return false;
      const DiagramBranching& b = pairs[i];
      const bool plus = step_is(spec, c.src[0], b.source, b.steps[0]) && step_is(spec, c.tgt[0], b.source, b.steps[1]);
      const bool minus =
          !plus && step_is(spec, c.src[0], b.source, b.steps[1]) && step_is(spec, c.tgt[0], b.source, b.steps[0]);
      if (!plus && !minus) return false;
      matches[i].push_back(Match{c.name, plus, composite, parallel_sequences(spec, c.src, c.tgt)});
      return true;
    };
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      names.push_back(describe(spec, pairs[i]));
      for (std::size_t c = 0; c < spec.cells4.size(); ++c)
        if (try_cell(spec.cells4[c], i, false)) ++cell_uses[c];
      for (const Cell4Decl& c : opt.supplement) try_cell(c, i, true);
    }
    for (std::size_t c = 0; c < spec.cells4.size(); ++c)
      if (cell_uses[c] == 0) rep.unmatched_cells.push_back(spec.cells4[c].name);
    rep.bijection = std::all_of(cell_uses.begin(), cell_uses.end(), [](int u) { return u == 1; });
  }

  rep.fillable = true;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    int generators = 0;
    bool filled = false;
    for (const Match& m : matches[i]) {
      if (!m.composite) ++generators;
      filled = filled || m.ok;
    }
    if (generators != 1) rep.bijection = false;
    if (!filled) rep.fillable = false;
    if (generators == 0) rep.unmatched_branchings.push_back(names[i]);
    for (const Match& m : matches[i]) {
      SquierPairing p;
      p.cell = m.cell;
      p.branching = names[i];
      p.ok = m.ok && (m.composite || generators == 1);
      if (!m.ok)
        p.verdict = "not parallel";
      else if (m.composite)
        p.verdict = std::string("composite fill ") + (m.plus ? "+" : "-");
      else if (generators > 1)
        p.verdict = "ambiguous";
      else
        p.verdict = std::string("fills ") + (m.plus ? "+" : "-");
      rep.pairings.push_back(std::move(p));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// depth 2

namespace {

// The step is the filling f whiskered only on the sides: the layers it
// rewrites have no ancestors outside, and the block starts at f.left.
bool step_is_filling(const PolygraphSpec& spec, const Step3& s, const Filling& f) {
  if (f.kind != Filling::Rule || s.rule != f.rule || s.inverse != f.inverse) return false;
  const Diagram& side = step_redex_side(spec, s);
  if (side.layers.empty()) return s.top.layers.empty() && s.left.size() == f.left;
  Diagram c;
  const std::vector<int> nodes = step_nodes(spec, s, &c);
  const Poset P = dependency_poset(spec, c);
  const std::uint64_t S = mask_of(nodes);
  if (ancestors(P, S) & ~S) return false;
  std::vector<int> order = nodes;
  for (int i = 0; i < P.n; ++i)
    if (!(S >> i & 1)) order.push_back(i);
  const Diagram L = reorder(spec, c, order);
  std::size_t block_min = SIZE_MAX, side_min = SIZE_MAX;
  for (std::size_t k = 0; k < nodes.size(); ++k) block_min = std::min(block_min, L.layers[k].left.size());
  for (const Layer& l : side.layers) side_min = std::min(side_min, l.left.size());
  return block_min - side_min == f.left;
}

struct Phase {
  std::vector<int> positions;  // vertex k at 2k, step t (1-based) at 2t-1
};

// Where the canonical filling of (x, y) may sit along a sequence.
std::vector<int> transitions(const PolygraphSpec& spec, const Path& w, const std::vector<Step3>& steps,
                             const std::vector<Diagram>& ds, const WordRedex& x, const WordRedex& y) {
  const Filling f = canonical_filling(spec, w, x, y);
  std::vector<int> pos;
  if (f.kind == Filling::Identity) {
    for (std::size_t k = 0; k < ds.size(); ++k)
      if (starts_with(spec, ds[k], Slot{x.rule, x.offset}) && starts_with(spec, ds[k], Slot{y.rule, y.offset}))
        pos.push_back(static_cast<int>(2 * k));
  } else {
    for (std::size_t t = 1; t <= steps.size(); ++t)
      if (step_is_filling(spec, steps[t - 1], f)) pos.push_back(static_cast<int>(2 * t - 1));
  }
  return pos;
}

std::string where(int pos) {
  return pos % 2 == 0 ? "vertex " + std::to_string(pos / 2) : "step " + std::to_string((pos + 1) / 2);
}

// Witness text when cell fills (f, g, h), empty otherwise.
std::string fills_triple(const PolygraphSpec& spec, const Path& w, const Cell4Decl& cell, const WordRedex& f,
                         const WordRedex& g, const WordRedex& h) {
  const auto ds = visited(spec, cell.src);
  const auto dt = visited(spec, cell.tgt);
  if (!ds || !dt || ds->front().src != w || ds->front() != dt->front() || ds->back() != dt->back()) return {};
  auto starts = [&](const std::vector<Diagram>& d, const WordRedex& x) {
    std::vector<bool> v;
    for (const Diagram& e : d) v.push_back(starts_with(spec, e, Slot{x.rule, x.offset}));
    return v;
  };
  const auto sf = starts(*ds, f), sg = starts(*ds, g), sh = starts(*ds, h);
  const auto tf = starts(*dt, f), th = starts(*dt, h);

  std::vector<int> t_fg, t_gh, t_fh;
  try {
    t_fg = transitions(spec, w, cell.src, *ds, f, g);
    t_gh = transitions(spec, w, cell.src, *ds, g, h);
    t_fh = transitions(spec, w, cell.tgt, *dt, f, h);
  } catch (const std::runtime_error&) {
    return {};
  }

  std::string src_part;
  for (int p1 : t_fg) {
    for (int p2 : t_gh) {
      if (p1 > p2 || (p1 == p2 && p1 % 2 == 1)) continue;
      bool ok = true;
      for (std::size_t k = 0; ok && k < ds->size(); ++k) {
        const int at = static_cast<int>(2 * k);
        if (at <= p1 && !sf[k]) ok = false;
        if (at >= p1 && at <= p2 && !sg[k]) ok = false;
        if (at >= p2 && !sh[k]) ok = false;
      }
      if (ok) {
        src_part = "source: (f,g) at " + where(p1) + ", (g,h) at " + where(p2);
        break;
      }
    }
    if (!src_part.empty()) break;
  }
  if (src_part.empty()) return {};
  for (int p : t_fh) {
    bool ok = true;
    for (std::size_t k = 0; ok && k < dt->size(); ++k) {
      const int at = static_cast<int>(2 * k);
      if (at <= p && !tf[k]) ok = false;
      if (at >= p && !th[k]) ok = false;
    }
    if (ok) return src_part + "; target: (f,h) at " + where(p);
  }
  return {};
}

std::string word_step(const Signature& sig, const WordRedex& r) {
  return sig.gens2.at(r.rule).name + "@" + std::to_string(r.offset);
}

}  // namespace

SquierReport check_squier_depth2(const PolygraphSpec& spec, const SquierOptions& opt) {
  const SquierReport base = check_squier(spec, 2, opt);
  SquierReport rep;
  rep.level = 2;
  rep.depth = 2;
  if (!base.pass()) {
    rep.qualified = true;
    rep.qualification = base.qualified ? base.qualification : "Squier condition fails at level 2";
  }

  const auto triples = critical_triples_word(spec);
  std::vector<int> triple_uses(triples.size(), 0);
  bool all_cells_ok = true;
  for (const Cell4Decl& cell : spec.cells4) {
    const auto ds = visited(spec, cell.src);
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < triples.size(); ++i)
      if (ds && ds->front().src == triples[i].source) candidates.push_back(i);
    SquierPairing p;
    p.cell = cell.name;
    for (std::size_t i : candidates) {
      std::vector<WordRedex> st = triples[i].steps;
      std::vector<int> idx{0, 1, 2};
      do {
        const std::string wit = fills_triple(spec, triples[i].source, cell, st[idx[0]], st[idx[1]], st[idx[2]]);
        if (!wit.empty()) {
          p.witness = "(f,g,h) = (" + word_step(spec, st[idx[0]]) + ", " + word_step(spec, st[idx[1]]) + ", " +
                      word_step(spec, st[idx[2]]) + "); " + wit;
          break;
        }
      } while (std::next_permutation(idx.begin(), idx.end()));
      if (!p.witness.empty()) {
        p.branching = describe(spec, triples[i]);
        p.verdict = "shape verified";
        p.ok = true;
        ++triple_uses[i];
        break;
      }
    }
    if (!p.ok) {
      all_cells_ok = false;
      if (candidates.empty()) {
        rep.unmatched_cells.push_back(cell.name);
        continue;
      }
      p.branching = describe(spec, triples[candidates.front()]);
      p.verdict = "shape violation";
    }
    rep.pairings.push_back(std::move(p));
  }
  bool unique = true;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (triple_uses[i] == 0) rep.unmatched_branchings.push_back(describe(spec, triples[i]));
    if (triple_uses[i] != 1) unique = false;
  }
  rep.bijection = all_cells_ok && unique && rep.unmatched_cells.empty();
  rep.fillable = rep.bijection;
  return rep;
}

}  // namespace polyrw
