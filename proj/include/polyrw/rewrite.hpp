// Rewriting of 1-cells by 2-generators (words) and of 2-cells by 3-rules
// (diagrams, matched modulo interchange).
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "polyrw/diagram.hpp"
#include "polyrw/signature.hpp"

namespace polyrw {

class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(std::size_t budget)
      : std::runtime_error("rewriting budget of " + std::to_string(budget) +
                           " steps exhausted; termination not established"),
        budget(budget) {}
  std::size_t budget;
};

inline constexpr std::size_t kDefaultBudget = 100000;
// kDefaultBudget unless POLYRW_BUDGET holds a number.
std::size_t default_budget();

// Optional restriction of a rewriting system to some of its generators or
// rules; nullopt means all of them.
using RuleSubset = std::optional<std::vector<int>>;

// ---------------------------------------------------------------------------
// Level 2

struct WordRedex {
  GenId rule = 0;
  std::size_t offset = 0;
  bool operator==(const WordRedex&) const = default;
};

struct WordSequence {
  Path start;
  std::vector<WordRedex> steps;
};

// Sorted by (offset, rule name).
std::vector<WordRedex> find_word_redexes(const Signature& sig, const Path& p, const RuleSubset& rules = {});
Path apply_word_step(const Signature& sig, const Path& p, const WordRedex& r);
// Leftmost redex first. Throws BudgetExhausted after `budget` steps.
std::pair<Path, WordSequence> normalize_path(const Signature& sig, const Path& p, std::size_t budget,
                                             const RuleSubset& rules = {});
Path replay(const Signature& sig, const WordSequence& s);

// ---------------------------------------------------------------------------
// Level 3

struct DiagramRedex {
  Step3 step;               // context around the rule source, inverse = false
  std::vector<int> nodes;   // matched layers, as indices into canonicalize(host)
  std::vector<int> witness; // ordering of canonicalize(host) in which the match is contiguous
  Diagram result;           // canonical
};

struct DiagramSequence {
  Diagram start;
  std::vector<Step3> steps;
};

// Every occurrence of a rule source as a vertical factor of some
// interchange-equivalent ordering of d. Sorted by (first matched layer,
// left whisker length, rule name).
std::vector<DiagramRedex> find_diagram_redexes(const PolygraphSpec& spec, const Diagram& d,
                                               const RuleSubset& rules = {});
// Rewrites d along s, backwards when s.inverse. The result is canonical.
// Throws TypeError when d is not the source of s.
Diagram apply_diagram_step(const PolygraphSpec& spec, const Diagram& d, const Step3& s);
std::pair<Diagram, DiagramSequence> normalize_diagram(const PolygraphSpec& spec, const Diagram& d,
                                                      std::size_t budget, const RuleSubset& rules = {});
Diagram replay(const PolygraphSpec& spec, const DiagramSequence& s);

}  // namespace polyrw
