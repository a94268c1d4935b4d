#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "splitdyn/constants.hpp"
#include "splitdyn/rational.hpp"

namespace splitdyn {

struct IntegerFactorization {
  /// (prime, exponent) in ascending prime order. When `complete` is false the
  /// last entries may include composite cofactors listed in `unfactored`.
  std::vector<std::pair<BigInt, unsigned>> factors;
  std::vector<BigInt> unfactored;
  bool complete = true;
};

struct FactorBudget {
  std::uint64_t trial_bound = limits::kTrialDivisionBound;
  std::uint64_t rho_iterations = limits::kRhoIterationCap;
};

bool is_probable_prime(const BigInt& n);

/// Factors |n| (n != 0). Trial division up to the budget bound, then
/// Pollard-Brent rho; cofactors that defeat rho are reported in
/// `unfactored` and the result is flagged incomplete.
IntegerFactorization factor_integer(const BigInt& n, const FactorBudget& budget = {});

/// Primes below `bound`, ascending.
std::vector<std::uint64_t> primes_below(std::uint64_t bound);

}  // namespace splitdyn
