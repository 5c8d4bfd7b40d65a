// Objects, edge generators, paths and 2-generators: the low skeleton of a
// polygraph. Generators are referred to by index everywhere below this
// header; names only matter at the file-format boundary.
#pragma once

#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyrw {

using ObjId = int;
using EdgeId = int;
using GenId = int;
using RuleId = int;

// Ill-typed composition or boundary mismatch.
class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EdgeGen {
  std::string name;
  ObjId src = 0;
  ObjId tgt = 0;
  std::set<std::string> tags;
};

// A 1-cell. `at` is the start object; it is the only typing information an
// empty path carries.
struct Path {
  ObjId at = 0;
  std::vector<EdgeId> edges;

  std::size_t size() const { return edges.size(); }
  bool empty() const { return edges.empty(); }
  auto operator<=>(const Path&) const = default;
  bool operator==(const Path&) const = default;
};

struct Gen2 {
  std::string name;
  Path src;
  Path tgt;
};

// Dimensions 0..2. Everything that types a diagram lives here.
struct Signature {
  std::string name;
  std::vector<std::string> objects;
  std::vector<EdgeGen> edges;
  std::vector<Gen2> gens2;

  std::optional<ObjId> find_object(const std::string& n) const;
  std::optional<EdgeId> find_edge(const std::string& n) const;
  std::optional<GenId> find_gen(const std::string& n) const;

  ObjId start(const Path& p) const { return p.at; }
  ObjId end(const Path& p) const;
  // Object sitting at wire boundary k, 0 <= k <= |p|.
  ObjId object_at(const Path& p, std::size_t k) const;
};

Path empty_path(ObjId at);
Path edge_path(const Signature& sig, EdgeId e);

// Throws TypeError if some adjacent edges do not compose or `at` disagrees
// with the first edge.
void check_path(const Signature& sig, const Path& p);
bool path_well_typed(const Signature& sig, const Path& p);

Path path_concat(const Signature& sig, const Path& p, const Path& q);
// p[from, from+len), anchored at the object at position `from`.
Path sub_path(const Signature& sig, const Path& p, std::size_t from, std::size_t len);
// p[0,from) ++ r ++ p[from+len, |p|) with typing checked.
Path splice(const Signature& sig, const Path& p, std::size_t from, std::size_t len, const Path& r);

std::string path_to_string(const Signature& sig, const Path& p);

}  // namespace polyrw
