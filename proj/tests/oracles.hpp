// Independent reference implementations used by the property tests and the
// acceptance runner. Nothing here calls the code it checks except to obtain
// the answer under test; the expected side is recomputed from definitions.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "polyrw/diagram.hpp"
#include "polyrw/signature.hpp"

namespace polyrw::oracle {

struct Result {
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::size_t items = 0;  // expected objects compared, where that means something
  std::string first_failure;  // empty when violations == 0
  void fail(const std::string& what);
  bool ok() const { return violations == 0; }
  std::string summary() const;
};

struct LengthRange {
  int lo = 0, hi = 2;
};

// One object, edges a, b, ...; generator boundaries are random words over
// those edges. Keep tgt.lo >= 1 wherever diagrams get canonicalized.
Signature random_signature(std::mt19937& rng, int n_edges, int n_gens, LengthRange src, LengthRange tgt);
// Between min_layers and max_layers layers (fewer if nothing fits) drawn
// among the generators that fit, starting from `src`.
Diagram random_diagram_from(const Signature& sig, std::mt19937& rng, const Path& src, int max_layers,
                            int min_layers = 0);
Diagram random_diagram(const Signature& sig, std::mt19937& rng, int max_src, int max_layers);

// Every layer list reachable from d by exchanging adjacent independent
// layers, both leftward and rightward.
std::vector<std::vector<Slot>> swap_closure(const Signature& sig, const Diagram& d);

// canonicalize idempotent and landing in the swap closure, closure members
// sharing one canonical form, hcomp interleavings agreeing, and the exchange
// law (f1 *0 g1) *1 (f2 *0 g2) = (f1 *1 f2) *0 (g1 *1 g2).
Result interchange_model(std::uint32_t seed, std::size_t cases);

// Word-level critical pairs against brute force over all short words.
Result word_pairs_vs_bruteforce(std::uint32_t seed, std::size_t systems);
// Same for triples, on smaller systems.
Result word_triples_vs_bruteforce(std::uint32_t seed, std::size_t systems);
// Diagram-level critical pairs against brute force over all diagrams of at
// most 4 layers.
Result diagram_pairs_vs_bruteforce(std::uint32_t seed, std::size_t systems);

// Multiset order against the subset-exchange definition, plus
// irreflexivity, transitivity and compatibility with sums.
Result multiset_properties(std::uint32_t seed, std::size_t cases);
// {f : f < {a}} equals {f : every element of f is below a}.
Result multiset_singleton_characterization(std::uint32_t seed, std::size_t orders);
// affine_dominates against evaluation on {1,2,3}^vars.
Result affine_vs_grid(std::uint32_t seed, std::size_t cases);

// weight_w and target_shape_ok against pattern definitions on every path of
// length <= 4 of the singleton PNTrans polygraph. `weight_one_shapes`
// receives the paths of weight 1 with the target shape.
Result pntrans_classifiers(std::vector<std::string>* weight_one_shapes = nullptr);

}  // namespace polyrw::oracle
