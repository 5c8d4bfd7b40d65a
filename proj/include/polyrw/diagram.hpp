// 2-cells of the free 2-category on a Signature, as a source path plus a
// vertical list of whiskered generators. Equality is decided on the
// interchange normal form produced by canonicalize().
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyrw/path.hpp"

namespace polyrw {

struct Layer {
  Path left;
  GenId gen = 0;
  Path right;

  std::size_t offset() const { return left.size(); }
  bool operator==(const Layer&) const = default;
};

struct Diagram {
  Path src;
  std::vector<Layer> layers;

  std::size_t length() const { return layers.size(); }
  bool operator==(const Diagram&) const = default;
};

// A layer reduced to what the host boundary does not already determine.
struct Slot {
  GenId gen = 0;
  std::size_t offset = 0;
  auto operator<=>(const Slot&) const = default;
  bool operator==(const Slot&) const = default;
};

Diagram id_diagram(const Path& p);
Diagram gen_diagram(const Signature& sig, GenId g);

// p_0 = src, p_i = boundary below layer i.
std::vector<Path> boundaries(const Signature& sig, const Diagram& d);
Path target(const Signature& sig, const Diagram& d);
void check_diagram(const Signature& sig, const Diagram& d);
bool diagram_well_typed(const Signature& sig, const Diagram& d);

std::vector<Slot> slots(const Diagram& d);
// Rebuilds whisker paths; throws TypeError when a slot does not fit.
Diagram from_slots(const Signature& sig, const Path& src, const std::vector<Slot>& s);

Diagram whisker(const Signature& sig, const Path& left, const Diagram& d, const Path& right);
Diagram vcomp(const Signature& sig, const Diagram& d1, const Diagram& d2);
// d1 then d2 side by side; the left copy is applied first. Not canonical.
Diagram hcomp_left_first(const Signature& sig, const Diagram& d1, const Diagram& d2);
Diagram hcomp_right_first(const Signature& sig, const Diagram& d1, const Diagram& d2);
// Canonical form of either interleaving.
Diagram hcomp(const Signature& sig, const Diagram& d1, const Diagram& d2);

// Adjacent layers (top, bottom) that may be exchanged; returns the new
// (top, bottom) pair. Left-independent swaps are the ones canonicalize uses.
std::optional<std::pair<Slot, Slot>> swap_slots(const Signature& sig, Slot top, Slot bottom);
bool left_independent(const Signature& sig, Slot top, Slot bottom);

// perm, when given, receives for each canonical layer the index it had in d.
// Requires every generator to have a nonempty target, as validate enforces:
// a generator with no outputs can slide past a unit either way, and the
// bubble below does not settle that ambiguity.
Diagram canonicalize(const Signature& sig, const Diagram& d, std::vector<int>* perm = nullptr);
bool diagrams_equal(const Signature& sig, const Diagram& d1, const Diagram& d2);

// Causal order of the layers of a diagram; bit i of pred[j] set iff layer j
// must stay below layer i. Limited to 64 layers.
struct Poset {
  int n = 0;
  std::vector<std::uint64_t> pred;   // direct
  std::vector<std::uint64_t> below;  // strict ancestors (layers above in the picture)
  std::vector<std::uint64_t> above;  // strict descendants
};
Poset dependency_poset(const Signature& sig, const Diagram& d);

// Realizes a linear extension of dependency_poset(d); order[k] is the index
// in d of the layer placed k-th. Throws TypeError when order is not one.
Diagram reorder(const Signature& sig, const Diagram& d, const std::vector<int>& order);

// Offset of layer i when moved as high as possible, measured on d.src, or
// nullopt when layer i has a predecessor.
std::optional<std::size_t> initial_offset(const Signature& sig, const Diagram& d, int i);
// True iff d can be reordered so that its first layer is (gen, offset).
bool starts_with(const Signature& sig, const Diagram& d, Slot s);

std::string path_expr(const Signature& sig, const Path& p);
std::string diagram_expr(const Signature& sig, const Diagram& d);
// Short human form: "prodC@0 ; prodC@0" (top first), or "id(c.c)".
std::string diagram_summary(const Signature& sig, const Diagram& d);

}  // namespace polyrw
