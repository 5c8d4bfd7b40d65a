#include "polyrw/diagram.hpp"

#include <algorithm>
#include <numeric>

namespace polyrw {

Diagram id_diagram(const Path& p) { return Diagram{p, {}}; }

Diagram gen_diagram(const Signature& sig, GenId g) {
  const Gen2& gen = sig.gens2.at(g);
  Diagram d;
  d.src = gen.src;
  d.layers.push_back(Layer{empty_path(gen.src.at), g, empty_path(sig.end(gen.src))});
  return d;
}

namespace {

// Applies one layer to boundary p, checking that it fits.
Path apply_layer(const Signature& sig, const Path& p, const Layer& l) {
  const Gen2& g = sig.gens2.at(l.gen);
  const std::size_t a = l.left.size();
  if (a + g.src.size() > p.size()) throw TypeError("layer " + g.name + " overhangs its boundary");
  if (sig.object_at(p, a) != g.src.at)
    throw TypeError("layer " + g.name + " anchored at the wrong object");
  if (!std::equal(g.src.edges.begin(), g.src.edges.end(), p.edges.begin() + a))
    throw TypeError("layer " + g.name + " does not match boundary " + path_to_string(sig, p));
  if (l.left != sub_path(sig, p, 0, a) ||
      l.right != sub_path(sig, p, a + g.src.size(), p.size() - a - g.src.size()))
    throw TypeError("layer " + g.name + " has inconsistent whisker paths");
  return splice(sig, p, a, g.src.size(), g.tgt);
}

Path apply_slot(const Signature& sig, const Path& p, Slot s, Layer* out) {
  const Gen2& g = sig.gens2.at(s.gen);
  if (s.offset + g.src.size() > p.size()) throw TypeError("slot " + g.name + " overhangs");
  if (sig.object_at(p, s.offset) != g.src.at) throw TypeError("slot " + g.name + " anchored wrongly");
  if (!std::equal(g.src.edges.begin(), g.src.edges.end(), p.edges.begin() + s.offset))
    throw TypeError("slot " + g.name + " does not match " + path_to_string(sig, p));
  if (out) {
    out->gen = s.gen;
    out->left = sub_path(sig, p, 0, s.offset);
    out->right = sub_path(sig, p, s.offset + g.src.size(), p.size() - s.offset - g.src.size());
  }
  return splice(sig, p, s.offset, g.src.size(), g.tgt);
}

}  // namespace

std::vector<Path> boundaries(const Signature& sig, const Diagram& d) {
  std::vector<Path> out{d.src};
  for (const Layer& l : d.layers) out.push_back(apply_layer(sig, out.back(), l));
  return out;
}

Path target(const Signature& sig, const Diagram& d) {
  Path p = d.src;
  for (const Layer& l : d.layers) p = apply_layer(sig, p, l);
  return p;
}

void check_diagram(const Signature& sig, const Diagram& d) {
  check_path(sig, d.src);
  (void)target(sig, d);
}

bool diagram_well_typed(const Signature& sig, const Diagram& d) {
  try {
    check_diagram(sig, d);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

std::vector<Slot> slots(const Diagram& d) {
  std::vector<Slot> s;
  s.reserve(d.layers.size());
  for (const Layer& l : d.layers) s.push_back(Slot{l.gen, l.left.size()});
  return s;
}

Diagram from_slots(const Signature& sig, const Path& src, const std::vector<Slot>& s) {
  Diagram d{src, {}};
  d.layers.resize(s.size());
  Path p = src;
  for (std::size_t i = 0; i < s.size(); ++i) p = apply_slot(sig, p, s[i], &d.layers[i]);
  return d;
}

Diagram whisker(const Signature& sig, const Path& left, const Diagram& d, const Path& right) {
  if (sig.end(left) != d.src.at) throw TypeError("whisker: left context does not compose");
  if (sig.end(d.src) != right.at) throw TypeError("whisker: right context does not compose");
  Diagram r;
  r.src = path_concat(sig, path_concat(sig, left, d.src), right);
  r.layers.reserve(d.layers.size());
  for (const Layer& l : d.layers)
    r.layers.push_back(Layer{path_concat(sig, left, l.left), l.gen, path_concat(sig, l.right, right)});
  return r;
}

Diagram vcomp(const Signature& sig, const Diagram& d1, const Diagram& d2) {
  if (target(sig, d1) != d2.src)
    throw TypeError("vcomp: target " + path_to_string(sig, target(sig, d1)) + " differs from source " +
                    path_to_string(sig, d2.src));
  Diagram r = d1;
  r.layers.insert(r.layers.end(), d2.layers.begin(), d2.layers.end());
  return r;
}

Diagram hcomp_left_first(const Signature& sig, const Diagram& d1, const Diagram& d2) {
  if (sig.end(d1.src) != d2.src.at) throw TypeError("hcomp: object mismatch");
  return vcomp(sig, whisker(sig, empty_path(d1.src.at), d1, d2.src),
               whisker(sig, target(sig, d1), d2, empty_path(sig.end(d2.src))));
}

Diagram hcomp_right_first(const Signature& sig, const Diagram& d1, const Diagram& d2) {
  if (sig.end(d1.src) != d2.src.at) throw TypeError("hcomp: object mismatch");
  return vcomp(sig, whisker(sig, d1.src, d2, empty_path(sig.end(d2.src))),
               whisker(sig, empty_path(d1.src.at), d1, target(sig, d2)));
}

Diagram hcomp(const Signature& sig, const Diagram& d1, const Diagram& d2) {
  return canonicalize(sig, hcomp_left_first(sig, d1, d2));
}

bool left_independent(const Signature& sig, Slot top, Slot bottom) {
  return bottom.offset + sig.gens2.at(bottom.gen).src.size() <= top.offset;
}

std::optional<std::pair<Slot, Slot>> swap_slots(const Signature& sig, Slot top, Slot bottom) {
  const Gen2& g1 = sig.gens2.at(top.gen);
  const Gen2& g2 = sig.gens2.at(bottom.gen);
  if (bottom.offset + g2.src.size() <= top.offset)
    return std::make_pair(Slot{bottom.gen, bottom.offset},
                          Slot{top.gen, top.offset - g2.src.size() + g2.tgt.size()});
  if (bottom.offset >= top.offset + g1.tgt.size())
    return std::make_pair(Slot{bottom.gen, bottom.offset - g1.tgt.size() + g1.src.size()},
                          Slot{top.gen, top.offset});
  return std::nullopt;
}

Diagram canonicalize(const Signature& sig, const Diagram& d, std::vector<int>* perm) {
  std::vector<Slot> s = slots(d);
  std::vector<int> ids(s.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::size_t i = 0;
  while (i + 1 < s.size()) {
    if (left_independent(sig, s[i], s[i + 1])) {
      auto sw = swap_slots(sig, s[i], s[i + 1]);
      s[i] = sw->first;
      s[i + 1] = sw->second;
      std::swap(ids[i], ids[i + 1]);
      if (i > 0) --i;
    } else {
      ++i;
    }
  }
  if (perm) *perm = ids;
  return from_slots(sig, d.src, s);
}

bool diagrams_equal(const Signature& sig, const Diagram& d1, const Diagram& d2) {
  if (d1.src != d2.src || d1.layers.size() != d2.layers.size()) return false;
  return canonicalize(sig, d1) == canonicalize(sig, d2);
}

Poset dependency_poset(const Signature& sig, const Diagram& d) {
  const int n = static_cast<int>(d.layers.size());
  if (n > 64) throw TypeError("dependency_poset: more than 64 layers");
  Poset P;
  P.n = n;
  P.pred.assign(n, 0);
  P.below.assign(n, 0);
  P.above.assign(n, 0);

  struct Wire {
    int producer;  // -1 for source wires
    std::size_t index;
    std::size_t count;
  };
  std::vector<Wire> wires;
  std::vector<int> cut;
  for (std::size_t k = 0; k < d.src.size(); ++k) {
    cut.push_back(static_cast<int>(wires.size()));
    wires.push_back(Wire{-1, 0, 0});
  }
  for (int j = 0; j < n; ++j) {
    const Gen2& g = sig.gens2.at(d.layers[j].gen);
    const std::size_t a = d.layers[j].left.size();
    const std::size_t s = g.src.size();
    for (std::size_t k = a; k < a + s; ++k) {
      const Wire& w = wires[cut[k]];
      if (w.producer >= 0) P.pred[j] |= std::uint64_t{1} << w.producer;
    }
    if (s == 0) {
      if (a > 0) {
        const Wire& x = wires[cut[a - 1]];
        if (x.producer >= 0 && x.index + 1 != x.count) P.pred[j] |= std::uint64_t{1} << x.producer;
      }
      if (a < cut.size()) {
        const Wire& y = wires[cut[a]];
        if (y.producer >= 0 && y.index != 0) P.pred[j] |= std::uint64_t{1} << y.producer;
      }
    }
    std::vector<int> out;
    for (std::size_t k = 0; k < g.tgt.size(); ++k) {
      out.push_back(static_cast<int>(wires.size()));
      wires.push_back(Wire{j, k, g.tgt.size()});
    }
    cut.erase(cut.begin() + a, cut.begin() + a + s);
    cut.insert(cut.begin() + a, out.begin(), out.end());
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (P.pred[j] >> i & 1) P.below[j] |= (std::uint64_t{1} << i) | P.below[i];
  for (int j = n - 1; j >= 0; --j)
    for (int i = 0; i < j; ++i)
      if (P.below[j] >> i & 1) P.above[i] |= std::uint64_t{1} << j;
  return P;
}

Diagram reorder(const Signature& sig, const Diagram& d, const std::vector<int>& order) {
  const std::size_t n = d.layers.size();
  if (order.size() != n) throw TypeError("reorder: wrong permutation size");
  std::vector<Slot> s = slots(d);
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    auto it = std::find(ids.begin() + k, ids.end(), order[k]);
    if (it == ids.end()) throw TypeError("reorder: not a permutation");
    for (std::size_t j = it - ids.begin(); j > k; --j) {
      auto sw = swap_slots(sig, s[j - 1], s[j]);
      if (!sw) throw TypeError("reorder: order violates layer dependencies");
      s[j - 1] = sw->first;
      s[j] = sw->second;
      std::swap(ids[j - 1], ids[j]);
    }
  }
  return from_slots(sig, d.src, s);
}

std::optional<std::size_t> initial_offset(const Signature& sig, const Diagram& d, int i) {
  const Poset P = dependency_poset(sig, d);
  if (P.pred.at(i) != 0) return std::nullopt;
  std::vector<int> order{i};
  for (int k = 0; k < P.n; ++k)
    if (k != i) order.push_back(k);
  return reorder(sig, d, order).layers.front().left.size();
}

bool starts_with(const Signature& sig, const Diagram& d, Slot s) {
  for (int i = 0; i < static_cast<int>(d.layers.size()); ++i) {
    if (d.layers[i].gen != s.gen) continue;
    auto off = initial_offset(sig, d, i);
    if (off && *off == s.offset) return true;
  }
  return false;
}

std::string path_expr(const Signature& sig, const Path& p) {
  std::string s = "{at:\"" + sig.objects.at(p.at) + "\",edges:[";
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (i) s += ',';
    s += "\"" + sig.edges.at(p.edges[i]).name + "\"";
  }
  return s + "]}";
}

namespace {

std::string layer_expr(const Signature& sig, const Layer& l) {
  return "(h (id " + path_expr(sig, l.left) + ") (h " + sig.gens2.at(l.gen).name + " (id " +
         path_expr(sig, l.right) + ")))";
}

}  // namespace

std::string diagram_expr(const Signature& sig, const Diagram& d) {
  if (d.layers.empty()) return "(id " + path_expr(sig, d.src) + ")";
  std::string s = layer_expr(sig, d.layers.back());
  for (std::size_t i = d.layers.size() - 1; i-- > 0;) s = "(v " + layer_expr(sig, d.layers[i]) + " " + s + ")";
  return s;
}

std::string diagram_summary(const Signature& sig, const Diagram& d) {
  if (d.layers.empty()) return "id(" + path_to_string(sig, d.src) + ")";
  std::string s;
  for (std::size_t i = 0; i < d.layers.size(); ++i) {
    if (i) s += " ; ";
    s += sig.gens2.at(d.layers[i].gen).name + "@" + std::to_string(d.layers[i].left.size());
  }
  return s;
}

}  // namespace polyrw
