#include "polyrw/rewrite.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>
#include <tuple>

namespace polyrw {

std::size_t default_budget() {
  if (const char* env = std::getenv("POLYRW_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<std::size_t>(v);
  }
  return kDefaultBudget;
}

namespace {

std::vector<int> selected(const RuleSubset& rules, std::size_t total) {
  if (rules) return *rules;
  std::vector<int> all(total);
  for (std::size_t i = 0; i < total; ++i) all[i] = static_cast<int>(i);
  return all;
}

}  // namespace

std::vector<WordRedex> find_word_redexes(const Signature& sig, const Path& p, const RuleSubset& rules) {
  std::vector<WordRedex> out;
  for (GenId g : selected(rules, sig.gens2.size())) {
    const Path& s = sig.gens2.at(g).src;
    if (s.size() > p.size()) continue;
    for (std::size_t k = 0; k + s.size() <= p.size(); ++k)
      if (sig.object_at(p, k) == s.at && std::equal(s.edges.begin(), s.edges.end(), p.edges.begin() + k))
        out.push_back(WordRedex{g, k});
  }
  std::sort(out.begin(), out.end(), [&](const WordRedex& a, const WordRedex& b) {
    return std::tie(a.offset, sig.gens2[a.rule].name) < std::tie(b.offset, sig.gens2[b.rule].name);
  });
  return out;
}

Path apply_word_step(const Signature& sig, const Path& p, const WordRedex& r) {
  const Gen2& g = sig.gens2.at(r.rule);
  if (r.offset + g.src.size() > p.size() || sig.object_at(p, r.offset) != g.src.at ||
      !std::equal(g.src.edges.begin(), g.src.edges.end(), p.edges.begin() + r.offset))
    throw TypeError("apply_word_step: " + g.name + " does not occur at offset " + std::to_string(r.offset));
  return splice(sig, p, r.offset, g.src.size(), g.tgt);
}

std::pair<Path, WordSequence> normalize_path(const Signature& sig, const Path& p, std::size_t budget,
                                             const RuleSubset& rules) {
  WordSequence seq{p, {}};
  Path cur = p;
  while (true) {
    auto rs = find_word_redexes(sig, cur, rules);
    if (rs.empty()) return {cur, seq};
    if (seq.steps.size() >= budget) throw BudgetExhausted(budget);
    cur = apply_word_step(sig, cur, rs.front());
    seq.steps.push_back(rs.front());
  }
}

Path replay(const Signature& sig, const WordSequence& s) {
  Path cur = s.start;
  for (const WordRedex& r : s.steps) cur = apply_word_step(sig, cur, r);
  return cur;
}

// ---------------------------------------------------------------------------

namespace {

int popcount(std::uint64_t x) { return __builtin_popcountll(x); }

// Chooses, for each generator needed, distinct layers carrying it.
void choose_subsets(const std::vector<int>& gens_of_layer, std::map<GenId, int>& need, int idx,
                    std::uint64_t cur, std::vector<std::uint64_t>& out) {
  bool done = true;
  for (auto& [g, c] : need)
    if (c > 0) done = false;
  if (done) {
    out.push_back(cur);
    return;
  }
  if (idx >= static_cast<int>(gens_of_layer.size())) return;
  auto it = need.find(gens_of_layer[idx]);
  if (it != need.end() && it->second > 0) {
    --it->second;
    choose_subsets(gens_of_layer, need, idx + 1, cur | (std::uint64_t{1} << idx), out);
    ++it->second;
  }
  choose_subsets(gens_of_layer, need, idx + 1, cur, out);
}

}  // namespace

std::vector<DiagramRedex> find_diagram_redexes(const PolygraphSpec& spec, const Diagram& d, const RuleSubset& rules) {
  std::vector<int> perm;
  const Diagram host = canonicalize(spec, d, &perm);
  const int n = static_cast<int>(host.layers.size());
  if (n == 0) return {};
  const Poset P = dependency_poset(spec, host);
  std::vector<int> layer_gen(n);
  for (int i = 0; i < n; ++i) layer_gen[i] = host.layers[i].gen;

  std::vector<DiagramRedex> out;
  std::map<std::tuple<RuleId, std::vector<int>, std::size_t>, bool> seen;
  for (RuleId r : selected(rules, spec.rules3.size())) {
    const Rule3& rule = spec.rules3.at(r);
    const int m = static_cast<int>(rule.src.layers.size());
    if (m == 0 || m > n) continue;
    std::map<GenId, int> need;
    for (const Layer& l : rule.src.layers) ++need[l.gen];
    std::vector<std::uint64_t> subsets;
    choose_subsets(layer_gen, need, 0, 0, subsets);
    const Diagram rule_src = canonicalize(spec, rule.src);

    for (std::uint64_t S : subsets) {
      std::uint64_t up = 0, down = 0;
      for (int i = 0; i < n; ++i)
        if (S >> i & 1) {
          up |= P.below[i];
          down |= P.above[i];
        }
      if (up & down & ~S) continue;  // not convex
      const std::uint64_t B0 = up & ~S;
      std::vector<int> order;
      for (int i = 0; i < n; ++i)
        if (B0 >> i & 1) order.push_back(i);
      for (int i = 0; i < n; ++i)
        if (S >> i & 1) order.push_back(i);
      for (int i = 0; i < n; ++i)
        if (!((B0 | S) >> i & 1)) order.push_back(i);
      const Diagram lin = reorder(spec, host, order);
      const int t = popcount(B0);
      const std::vector<Path> bd = boundaries(spec, lin);
      const Path& cut = bd[t];
      const Path& rs = rule.src.src;
      if (rs.size() > cut.size()) continue;

      Diagram block{cut, {lin.layers.begin() + t, lin.layers.begin() + t + m}};
      const Diagram block_c = canonicalize(spec, block);
      for (std::size_t L = 0; L + rs.size() <= cut.size(); ++L) {
        if (spec.object_at(cut, L) != rs.at || !std::equal(rs.edges.begin(), rs.edges.end(), cut.edges.begin() + L))
          continue;
        Path left = sub_path(spec, cut, 0, L);
        Path right = sub_path(spec, cut, L + rs.size(), cut.size() - L - rs.size());
        if (canonicalize(spec, whisker(spec, left, rule_src, right)) != block_c) continue;

        std::vector<int> nodes;
        for (int i = 0; i < n; ++i)
          if (S >> i & 1) nodes.push_back(i);
        if (seen[{r, nodes, L}]) continue;
        seen[{r, nodes, L}] = true;

        DiagramRedex red;
        red.step.top = Diagram{host.src, {lin.layers.begin(), lin.layers.begin() + t}};
        red.step.left = left;
        red.step.rule = r;
        red.step.inverse = false;
        red.step.right = right;
        red.step.bottom = Diagram{bd[t + m], {lin.layers.begin() + t + m, lin.layers.end()}};
        red.nodes = nodes;
        red.witness = order;
        red.result = canonicalize(spec, step_target(spec, red.step));
        out.push_back(std::move(red));
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](const DiagramRedex& a, const DiagramRedex& b) {
    return std::tuple(a.nodes.front(), a.step.left.size(), spec.rules3[a.step.rule].name) <
           std::tuple(b.nodes.front(), b.step.left.size(), spec.rules3[b.step.rule].name);
  });
  return out;
}

Diagram apply_diagram_step(const PolygraphSpec& spec, const Diagram& d, const Step3& s) {
  if (!diagrams_equal(spec, d, step_source(spec, s)))
    throw TypeError("apply_diagram_step: diagram is not the source of the " + spec.rules3.at(s.rule).name + " step");
  return canonicalize(spec, step_target(spec, s));
}

std::pair<Diagram, DiagramSequence> normalize_diagram(const PolygraphSpec& spec, const Diagram& d,
                                                      std::size_t budget, const RuleSubset& rules) {
  DiagramSequence seq{d, {}};
  Diagram cur = canonicalize(spec, d);
  while (true) {
    auto rs = find_diagram_redexes(spec, cur, rules);
    if (rs.empty()) return {cur, seq};
    if (seq.steps.size() >= budget) throw BudgetExhausted(budget);
    seq.steps.push_back(rs.front().step);
    cur = rs.front().result;
  }
}

Diagram replay(const PolygraphSpec& spec, const DiagramSequence& s) {
  Diagram cur = canonicalize(spec, s.start);
  for (const Step3& st : s.steps) cur = apply_diagram_step(spec, cur, st);
  return cur;
}

}  // namespace polyrw
