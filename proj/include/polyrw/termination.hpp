// Termination certificates: additive weights into N^k for 1-cells, and
// (X, Y, d) derivations with nonnegative affine valuations for 2-cells.
// Also the multiset extension of a strict order.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "polyrw/rewrite.hpp"
#include "polyrw/signature.hpp"

namespace polyrw {

// constant + sum coeffs[v] * x_v. Certificates only hold nonnegative
// coefficients; differences of forms may be negative.
struct AffineForm {
  long long constant = 0;
  std::map<int, long long> coeffs;

  static AffineForm var(int v, long long c = 1);
  static AffineForm constant_form(long long c);
  AffineForm& operator+=(const AffineForm& o);
  AffineForm operator+(const AffineForm& o) const;
  AffineForm operator-(const AffineForm& o) const;
  AffineForm scaled(long long k) const;
  // Substitutes args[v] for x_v.
  AffineForm substitute(const std::vector<AffineForm>& args) const;
  long long eval(const std::vector<long long>& x) const;
  int max_var() const;  // -1 when constant
  bool operator==(const AffineForm& o) const;
};

// i, j, k, l, m, n, p, q, ... then x26, x27, ...
std::string variable_name(int v);
std::optional<int> variable_index(const std::string& name);
// "2i+j+2l+2", "0".
std::string render(const AffineForm& f);
std::string render_tuple(const std::vector<AffineForm>& t);

// e1 >= e2 (strict: e1 > e2) for every assignment of values >= 1.
bool affine_dominates(const AffineForm& e1, const AffineForm& e2, bool strict);

// ---------------------------------------------------------------------------

enum class WeightOrder { Lex, Product };

struct WeightCert {
  std::string name;
  WeightOrder order = WeightOrder::Lex;
  std::map<std::string, std::vector<long long>> edges;  // by edge name or family
};

struct GenValuation {
  std::vector<AffineForm> X;  // over the X-variables of the source wires
  std::vector<AffineForm> Y;  // over the Y-variables of the target wires
  AffineForm d;               // X-variables of the source, then Y-variables of the target
};

struct DerivationCert {
  std::string name;
  std::map<std::string, int> arity;  // per edge name or family; 0 is the terminal ordered set
  std::map<std::string, GenValuation> gens;
};

using Certificate = std::variant<WeightCert, DerivationCert>;

// Looks a generator or edge name up exactly, then by its family name (the
// part before the first '_').
template <class Map>
const typename Map::mapped_type* cert_lookup(const Map& m, const std::string& name) {
  if (auto it = m.find(name); it != m.end()) return &it->second;
  auto cut = name.find('_');
  if (cut != std::string::npos)
    if (auto it = m.find(name.substr(0, cut)); it != m.end()) return &it->second;
  return nullptr;
}

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CertCheckLine {
  std::string subject;  // generator or rule name
  std::string what;     // "weight", "X", "Y", "d"
  std::string lhs, rhs;
  bool strict = false;
  bool ok = false;
  std::string text() const;  // "transfo: (0,2,0) > (0,1,1)"
};

struct CertReport {
  std::string cert;
  bool pass = false;
  std::vector<CertCheckLine> lines;
};

std::vector<long long> path_weight(const Signature& sig, const WeightCert& c, const Path& p);
bool weight_greater(const std::vector<long long>& a, const std::vector<long long>& b, WeightOrder o);
CertReport check_weight_cert(const Signature& sig, const WeightCert& c);

struct DerivationValue {
  std::vector<AffineForm> X;  // per component of the target boundary
  std::vector<AffineForm> Y;  // per component of the source boundary
  AffineForm d;
  int x_vars = 0;  // variables 0..x_vars-1 are the source X-components
  int y_vars = 0;  // followed by the target Y-components
};

DerivationValue eval_derivation(const Signature& sig, const Diagram& d, const DerivationCert& c);
CertReport check_derivation_cert(const PolygraphSpec& spec, const DerivationCert& c);
CertReport check_cert(const PolygraphSpec& spec, const Certificate& c);

Certificate parse_certificate(const std::string& json_text);
std::string serialize_certificate(const Certificate& c);

// ---------------------------------------------------------------------------

enum class Cmp { Less, Equal, Greater, Incomparable };
const char* to_string(Cmp c);

using Multiset = std::map<int, int>;  // element -> multiplicity >= 1
using BaseOrder = std::function<bool(int, int)>;  // strict "a > b"

Multiset multiset_sum(const Multiset& a, const Multiset& b);
bool multiset_greater(const Multiset& m1, const Multiset& m2, const BaseOrder& gt);
Cmp multiset_compare(const Multiset& m1, const Multiset& m2, const BaseOrder& gt);

// v reachable from u in at least one level-2 step. Throws BudgetExhausted
// after `budget` visited 1-cells.
bool one_cell_reach_order(const Signature& sig, const Path& u, const Path& v, std::size_t budget);

}  // namespace polyrw
