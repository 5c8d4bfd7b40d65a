// Built-in polygraphs for bicategories, pseudofunctors and pseudonatural
// transformations, with their termination certificates.
//
// Cells are written in a small composition language: "*0" and "*1" are the
// horizontal and vertical compositions, a number n is the identity on n
// wires, and a name is a generator family resolved against the wires it
// sits on. In a 4-cell step exactly one name is a 3-rule, optionally
// suffixed "^-" when the step runs backwards.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polyrw/signature.hpp"
#include "polyrw/termination.hpp"

namespace polyrw {

struct CatalogParams {
  std::vector<std::string> C;  // empty: one object
  std::vector<std::string> D;
  std::vector<int> f;  // f[i] indexes D; empty: everything to D[0]
  std::vector<int> g;
};

struct CatalogInfo {
  std::string id;
  std::string title;
  std::optional<std::string> level2_cert;
  std::optional<std::string> level3_cert;
};

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<CatalogInfo>& catalog();
const CatalogInfo& catalog_info(const std::string& id);
PolygraphSpec build(const std::string& id, const CatalogParams& params = {});

// Accepts "bicat" as well as "builtin:bicat".
Certificate builtin_cert(const std::string& name);
std::vector<std::string> builtin_cert_names();

// 1 for edges tagged C-internal or D-internal, 0 for f-mixed or g-mixed.
unsigned weight_w(const Signature& sig, const Path& p);
// (C-internal)* (f-mixed) (D-internal)+
bool target_shape_ok(const Signature& sig, const Path& p);

// Elaborates a composition expression on a given 1-source. Exposed for
// tests and for writing custom polygraphs in code.
Diagram elaborate_cell(const PolygraphSpec& spec, const std::string& expr, const Path& src);
Step3 elaborate_step(const PolygraphSpec& spec, const std::string& expr, const Path& src);

}  // namespace polyrw
