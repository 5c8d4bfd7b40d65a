// Full polygraph presentations up to dimension 4, their validation, and the
// JSON file format.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyrw/diagram.hpp"
#include "polyrw/path.hpp"

namespace polyrw {

struct Rule3 {
  std::string name;
  Diagram src;
  Diagram tgt;
  bool operator==(const Rule3&) const = default;
};

// One signed rewriting step top *1 (left *0 A *0 right) *1 bottom, where A
// is the rule read forwards, or backwards when `inverse`.
struct Step3 {
  Diagram top;
  Path left;
  RuleId rule = 0;
  bool inverse = false;
  Path right;
  Diagram bottom;
  bool operator==(const Step3&) const = default;
};

struct Cell4Decl {
  std::string name;
  std::vector<Step3> src;
  std::vector<Step3> tgt;
  bool operator==(const Cell4Decl&) const = default;
};

struct PolygraphSpec : Signature {
  std::vector<Rule3> rules3;
  std::vector<Cell4Decl> cells4;

  std::optional<RuleId> find_rule(const std::string& n) const;
  bool operator==(const PolygraphSpec& o) const;
};

// Diagram read off the rule side a step rewrites from / to.
const Diagram& step_redex_side(const PolygraphSpec& spec, const Step3& s);
const Diagram& step_result_side(const PolygraphSpec& spec, const Step3& s);
Diagram step_source(const PolygraphSpec& spec, const Step3& s);
Diagram step_target(const PolygraphSpec& spec, const Step3& s);

struct ValidationEntry {
  std::string constraint;  // "name collision", "globularity", "parallelism", ...
  std::string subject;
  std::string message;
};
using ValidationReport = std::vector<ValidationEntry>;

ValidationReport validate(const PolygraphSpec& spec);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
  std::size_t position;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport r);
  ValidationReport report;
};

PolygraphSpec parse_polygraph(const std::string& text);
std::string serialize_polygraph(const PolygraphSpec& spec, int indent = 2);

// Accepts both strict JSON and the relaxed {at:"x",edges:["a"]} form.
Path parse_path_expr(const Signature& sig, const std::string& text);
Diagram parse_diag_expr(const Signature& sig, const std::string& text);

std::string step_summary(const PolygraphSpec& spec, const Step3& s);
// One-line JSON object {top, left, rule, dir, right, bottom}, as in files.
std::string step_expr(const PolygraphSpec& spec, const Step3& s);

}  // namespace polyrw
