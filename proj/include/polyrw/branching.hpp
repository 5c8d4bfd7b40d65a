// Local branchings, critical pairs and triples, confluence, and the Squier
// conditions at depth 1 (levels 2 and 3) and depth 2.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polyrw/rewrite.hpp"
#include "polyrw/signature.hpp"

namespace polyrw {

enum class BranchClass { Aspherical, Peiffer, Overlapping };
const char* to_string(BranchClass c);

// ---------------------------------------------------------------------------
// Level 2: branchings of 1-cells

struct WordBranching {
  Path source;
  std::vector<WordRedex> steps;  // sorted by (offset, rule)
  BranchClass cls = BranchClass::Overlapping;
  bool minimal = false;
};

BranchClass classify_word_branching(const Signature& sig, const std::vector<WordRedex>& steps);
// No common whisker strips every step: some step starts at 0 and some
// step ends at |source|.
bool word_branching_minimal(const Signature& sig, const Path& source, const std::vector<WordRedex>& steps);
WordBranching make_word_branching(const Signature& sig, const Path& source, std::vector<WordRedex> steps);

// Minimal overlapping branchings of arity 2 (resp. 3, pairwise distinct
// steps), sorted by source then steps.
std::vector<WordBranching> critical_pairs_word(const Signature& sig, const RuleSubset& rules = {});
std::vector<WordBranching> critical_triples_word(const Signature& sig, const RuleSubset& rules = {});

// ---------------------------------------------------------------------------
// Level 3: branchings of 2-cells

struct DiagramBranching {
  Diagram source;  // canonical
  std::vector<DiagramRedex> steps;
  BranchClass cls = BranchClass::Overlapping;
  bool minimal = false;
};

BranchClass classify_diagram_branching(const Signature& sig, const Diagram& source, const DiagramRedex& a,
                                       const DiagramRedex& b);
// Every layer is matched by some step, and no wire runs untouched along
// the left or right border.
bool diagram_branching_minimal(const Signature& sig, const Diagram& source, const std::vector<DiagramRedex>& steps);

// Found by gluing every ordered pair of rule sources along shared layers.
// Assumes every rule source is connected.
std::vector<DiagramBranching> critical_pairs_diagram(const PolygraphSpec& spec, const RuleSubset& rules = {});

// ---------------------------------------------------------------------------
// Confluence

struct JoinResult {
  std::string source;       // printable branching
  std::string source_expr;  // cell expression of the common source
  std::vector<std::string> legs;
  std::vector<std::string> normal_forms;  // short form, one per leg
  std::vector<std::string> normal_form_exprs;
  bool joinable = false;
};

struct ConfluenceReport {
  int level = 2;
  bool terminating_established = false;
  bool confluent = false;  // every critical pair joins
  std::size_t pairs = 0;
  std::vector<JoinResult> joins;  // all pairs, in enumeration order
  std::string verdict() const;    // "confluent", "not confluent", "locally confluent only", ...
};

ConfluenceReport check_confluence_word(const Signature& sig, std::size_t budget, bool terminating);
ConfluenceReport check_confluence_diagram(const PolygraphSpec& spec, std::size_t budget, bool terminating);

// ---------------------------------------------------------------------------
// Squier

// A signed 3-step on a 1-cell branching: the rule that fills it, whiskered.
struct Filling {
  enum Kind { Identity, Rule } kind = Identity;
  RuleId rule = 0;
  bool inverse = false;
  std::size_t left = 0;  // whisker length
  std::string describe(const PolygraphSpec& spec) const;
};

// True iff rule r fills the critical pair (f, g) in this orientation: its
// source starts with f and its target with g.
bool rule_fills(const PolygraphSpec& spec, RuleId r, const Path& source, const WordRedex& f, const WordRedex& g);

// Throws std::runtime_error when a critical pair has no filling rule.
Filling canonical_filling(const PolygraphSpec& spec, const Path& source, const WordRedex& f, const WordRedex& g);

struct SquierPairing {
  std::string cell;       // Rule3 or Cell4 name; empty when unmatched
  std::string branching;  // printable branching
  std::string verdict;    // "fills +", "fills -", "shape verified", "composite fill", "shape violation", ...
  bool ok = false;
  std::string witness;
};

struct SquierReport {
  int level = 2;
  int depth = 1;
  bool qualified = false;  // preconditions not established
  std::string qualification;
  bool bijection = false;  // strict bijection with generators
  bool fillable = false;   // every critical branching filled, counting composites
  std::vector<SquierPairing> pairings;
  std::vector<std::string> unmatched_branchings;
  std::vector<std::string> unmatched_cells;
  // With allow_composite, supplementary fillings stand in for missing
  // generators.
  bool pass(bool allow_composite = false) const { return !qualified && (allow_composite ? fillable : bijection); }
};

struct SquierOptions {
  bool terminating = false;  // certified by the caller
  std::size_t budget = kDefaultBudget;
  // Extra cells allowed to fill critical branchings at level 3; they are
  // not counted towards the bijection.
  std::vector<Cell4Decl> supplement;
};

SquierReport check_squier(const PolygraphSpec& spec, int level, const SquierOptions& opt);
// Composite fillings for the level-3 critical pairs no 4-cell fills: each
// leg followed by its normalization. Only parallel when the pair joins.
std::vector<Cell4Decl> builtin_supplement(const PolygraphSpec& spec, std::size_t budget);

SquierReport check_squier_depth2(const PolygraphSpec& spec, const SquierOptions& opt);

std::string describe(const Signature& sig, const WordBranching& b);
std::string describe(const PolygraphSpec& spec, const DiagramBranching& b);

}  // namespace polyrw
