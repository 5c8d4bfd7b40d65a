#include "polyrw/path.hpp"

namespace polyrw {

namespace {

template <class T>
std::optional<int> find_named(const std::vector<T>& v, const std::string& n) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].name == n) return static_cast<int>(i);
  return std::nullopt;
}

}  // namespace

std::optional<ObjId> Signature::find_object(const std::string& n) const {
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (objects[i] == n) return static_cast<ObjId>(i);
  return std::nullopt;
}

std::optional<EdgeId> Signature::find_edge(const std::string& n) const {
  return find_named(edges, n);
}

std::optional<GenId> Signature::find_gen(const std::string& n) const {
  return find_named(gens2, n);
}

ObjId Signature::end(const Path& p) const {
  return p.edges.empty() ? p.at : edges.at(p.edges.back()).tgt;
}

ObjId Signature::object_at(const Path& p, std::size_t k) const {
  if (k > p.edges.size()) throw TypeError("object_at: position out of range");
  return k == 0 ? p.at : edges.at(p.edges[k - 1]).tgt;
}

Path empty_path(ObjId at) { return Path{at, {}}; }

Path edge_path(const Signature& sig, EdgeId e) {
  return Path{sig.edges.at(e).src, {e}};
}

void check_path(const Signature& sig, const Path& p) {
  if (p.at < 0 || p.at >= static_cast<ObjId>(sig.objects.size()))
    throw TypeError("path anchored at an undeclared object");
  ObjId cur = p.at;
  for (EdgeId e : p.edges) {
    if (e < 0 || e >= static_cast<EdgeId>(sig.edges.size()))
      throw TypeError("path mentions an undeclared edge");
    if (sig.edges[e].src != cur)
      throw TypeError("non-composable edges in path " + path_to_string(sig, p));
    cur = sig.edges[e].tgt;
  }
}

bool path_well_typed(const Signature& sig, const Path& p) {
  try {
    check_path(sig, p);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

Path path_concat(const Signature& sig, const Path& p, const Path& q) {
  if (sig.end(p) != q.at)
    throw TypeError("path_concat: endpoint mismatch (" + sig.objects.at(sig.end(p)) + " vs " +
                    sig.objects.at(q.at) + ")");
  Path r = p;
  r.edges.insert(r.edges.end(), q.edges.begin(), q.edges.end());
  return r;
}

Path sub_path(const Signature& sig, const Path& p, std::size_t from, std::size_t len) {
  if (from + len > p.edges.size()) throw TypeError("sub_path: range out of bounds");
  Path r{sig.object_at(p, from), {}};
  r.edges.assign(p.edges.begin() + from, p.edges.begin() + from + len);
  return r;
}

Path splice(const Signature& sig, const Path& p, std::size_t from, std::size_t len, const Path& r) {
  Path left = sub_path(sig, p, 0, from);
  Path right = sub_path(sig, p, from + len, p.edges.size() - from - len);
  return path_concat(sig, path_concat(sig, left, r), right);
}

std::string path_to_string(const Signature& sig, const Path& p) {
  if (p.edges.empty()) return "1_" + sig.objects.at(p.at);
  std::string s;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (i) s += '.';
    s += sig.edges.at(p.edges[i]).name;
  }
  return s;
}

}  // namespace polyrw
