#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "splitdyn/int_poly.hpp"
#include "splitdyn/poly.hpp"

namespace splitdyn {

/// x -> a*x + b with a != 0.
struct Affine {
  Rational a = 1;
  Rational b = 0;

  UniPoly poly() const { return UniPoly::affine(a, b); }
  Rational operator()(const Rational& x) const { return a * x + b; }
  Affine inverse() const { return {1 / a, -b / a}; }
  bool is_identity() const { return a == 1 && b == 0; }
  friend bool operator==(const Affine&, const Affine&) = default;
};

/// this o other
Affine compose(const Affine& outer, const Affine& inner);

/// A polynomial f of degree d >= 2 with a shared, lock-protected cache of
/// its iterates. Copies share the cache.
class PolyDS {
 public:
  explicit PolyDS(UniPoly f);

  const UniPoly& f() const { return f_; }
  int degree() const { return d_; }
  /// f^k, computed once and cached.
  UniPoly iterate(unsigned k) const;
  /// Constant C_f with |h(f(x)) - d h(x)| <= C_f on all of Qbar.
  double escape_constant() const { return escape_constant_; }
  /// E(f) = C_f/(d-1) + 1: above this height orbits strictly climb.
  double escape_bound() const { return escape_constant_ / (d_ - 1) + 1.0; }

 private:
  struct Cache {
    std::mutex mu;
    std::map<unsigned, UniPoly> iterates;
  };
  UniPoly f_;
  int d_;
  double escape_constant_;
  std::shared_ptr<Cache> cache_;
};

/// C_d, the polynomial with C_d(X + 1/X) = X^d + 1/X^d.
UniPoly chebyshev(int d);

enum class SpecialKind { power, chebyshev };

struct SpecialVerdict {
  SpecialKind kind;
  int sign = 1;          // target is sign * C_d for Chebyshev
  Affine conjugator;     // L with L^{-1} o f o L equal to the target
};

struct DisintegratedVerdict {
  UniPoly critical_factor;      // minimal polynomial of the critical point
  std::vector<double> heights;  // h(f^k(c)) for k = 0..escape_step
  unsigned escape_step = 0;
  double escape_bound = 0;
};

struct UnknownVerdict {
  std::string reason;
};

struct Classification {
  std::variant<SpecialVerdict, DisintegratedVerdict, UnknownVerdict> verdict;
  std::vector<std::string> transcript;

  bool is_special() const { return std::holds_alternative<SpecialVerdict>(verdict); }
  bool is_disintegrated() const { return std::holds_alternative<DisintegratedVerdict>(verdict); }
  nlohmann::json to_json() const;
};

Classification classify(const PolyDS& ds, int max_iterations = limits::kClassifyMaxIterations);

/// Least N <= n_max with g o f^N = f^N o g.
std::optional<unsigned> commutes_with_iterate(const UniPoly& g, const PolyDS& ds, unsigned n_max);

struct SymmetryGroup {
  std::vector<Affine> elements;         // identity first
  std::vector<unsigned> witness_n;      // least N with L o f^N = f^N o L
  std::optional<int> exponent;          // D with f o L = L^D o f for the generator

  const Affine& generator() const { return elements.size() > 1 ? elements[1] : elements[0]; }
  nlohmann::json to_json() const;
};

/// Every affine map over Q commuting with some f^N, N <= n_max.
SymmetryGroup rational_symmetries(const PolyDS& ds, unsigned n_max);

/// L^k under composition.
Affine affine_power(const Affine& l, int k);

struct CommutingCatalog {
  UniPoly root;  // least-degree nonlinear commuter found (f itself when prime)
  std::vector<UniPoly> members;
};

/// All L o root^m (m >= 0, L a rational symmetry) of degree <= deg_bound that
/// are verified to commute with an iterate f^N, N <= n_max. Requires a
/// Disintegrated classification.
CommutingCatalog enumerate_commuting(const PolyDS& ds, int deg_bound, unsigned n_max);

bool verify_semiconjugacy(const UniPoly& f1, const UniPoly& f2, const UniPoly& q, const UniPoly& p1,
                          const UniPoly& p2);

struct PreperiodicResult {
  bool preperiodic = false;
  std::vector<Rational> orbit;  // forward orbit until the first repeat or escape
  std::optional<std::size_t> cycle_start;  // index of the repeated value
  double escape_bound = 0;
};

PreperiodicResult is_preperiodic_rational(const PolyDS& ds, const Rational& alpha);

/// Exact period of a periodic point, or nullopt when alpha is not periodic.
std::optional<unsigned> exact_period(const PolyDS& ds, const Rational& alpha);

}  // namespace splitdyn
