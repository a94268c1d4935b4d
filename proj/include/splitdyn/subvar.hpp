#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "splitdyn/bipoly.hpp"
#include "splitdyn/dynsys.hpp"

namespace splitdyn {

/// A point of P^1(Q): a rational or infinity.
class ProjPoint {
 public:
  ProjPoint() : value_(Rational(0)) {}
  ProjPoint(const Rational& q) : value_(q) {}  // NOLINT: implicit on purpose
  ProjPoint(long q) : value_(Rational(q)) {}   // NOLINT
  static ProjPoint infinity() {
    ProjPoint p;
    p.value_.reset();
    return p;
  }

  bool is_infinity() const { return !value_; }
  const Rational& value() const { return *value_; }

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.value_ == b.value_; }
  std::string str() const;

 private:
  std::optional<Rational> value_;
};

ProjPoint parse_proj_point(std::string_view text);
/// Nonconstant polynomials fix infinity.
ProjPoint apply(const UniPoly& g, const ProjPoint& p);

/// Type (A): x_axis = zeta. Axes are 1-based.
struct VertA {
  int axis;
  ProjPoint zeta;
};

/// Type (B): x_to = g(x_from).
struct LinkB {
  int from;
  int to;
  UniPoly g;
};

using Equation = std::variant<VertA, LinkB>;

class StructuredVariety {
 public:
  /// Validates indices and rejects the inconsistent shapes that can be
  /// detected exactly (conflicting pins after propagation, two links between
  /// the same axes differing by a nonzero constant, 2-cycles h o g - X equal
  /// to a nonzero constant).
  StructuredVariety(int n, std::vector<Equation> equations);

  int n() const { return n_; }
  const std::vector<Equation>& equations() const { return equations_; }
  /// Pins forced by the equations: VertA, pushed forward along links, and
  /// infinity pulled back along links. Indexed 1..n (entry 0 unused).
  const std::vector<std::optional<ProjPoint>>& pins() const { return pins_; }

  bool contains(const std::vector<ProjPoint>& p) const;

  nlohmann::json to_json() const;
  static StructuredVariety from_json(const nlohmann::json& j);

 private:
  int n_;
  std::vector<Equation> equations_;
  std::vector<std::optional<ProjPoint>> pins_;
};

bool membership(const StructuredVariety& v, const std::vector<ProjPoint>& p);

/// Least N <= n_max with f^N fixing every zeta and commuting with every g.
std::optional<unsigned> check_periodic(const StructuredVariety& v, const PolyDS& ds, unsigned n_max);

/// Copy of v with each zeta replaced by f^k(zeta).
StructuredVariety push_vertical(const StructuredVariety& v, const PolyDS& ds, unsigned k);

struct PreperiodicWitness {
  unsigned k;
  unsigned n;
};

/// (k, N) with the pushed variety V_k periodic of period N. With links
/// present, k runs over multiples of their common period so that
/// phi^k(V) lies in V_k. Throws unsupported when the links are not periodic.
std::optional<PreperiodicWitness> check_preperiodic(const StructuredVariety& v, const PolyDS& ds, unsigned k_max,
                                                    unsigned n_max);

struct PrecRelation {
  std::set<int> pinned;  // I_V
  /// (i, j) -> g with x_j = g(x_i) on V; i == j entries carry X.
  std::vector<std::pair<std::pair<int, int>, UniPoly>> pairs;

  bool has(int i, int j) const;
  const UniPoly* witness(int i, int j) const;
  std::set<std::pair<int, int>> as_set() const;
};

/// The relation i < j generated by the links and closed under transitivity,
/// upper chain extension (left factors) and lower chain extension where the
/// equations imply it (a linear witness). Requires check_periodic.
PrecRelation prec_relation(const StructuredVariety& v, const PolyDS& ds, unsigned n_max);

struct Chain {
  std::vector<int> axes;
  /// links[t]: x_{axes[t+1]} = links[t](x_{axes[t]}), absent when the
  /// consecutive pair is not related (reducible inputs only).
  std::vector<std::optional<UniPoly>> links;
  /// Raw equations living on this chain (pinned axes substituted).
  std::vector<Equation> equations;
};

struct ChainDecomposition {
  int n = 0;
  std::vector<std::pair<int, ProjPoint>> pinned;  // I_V with values
  std::vector<Chain> chains;

  /// Membership through the product description.
  bool contains(const std::vector<ProjPoint>& p) const;
  nlohmann::json to_json() const;
};

ChainDecomposition chain_decompose(const StructuredVariety& v, const PolyDS& ds, unsigned n_max);

/// F(x, g(x)) times the least positive integer clearing its denominators.
/// Throws contained_in_v when it vanishes identically.
UniPoly intersect_with_curve(const BiPoly& f, const UniPoly& g);

}  // namespace splitdyn
