#include "splitdyn/integer_factor.hpp"

#include <algorithm>
#include <map>

#include "splitdyn/error.hpp"

namespace splitdyn {

bool is_probable_prime(const BigInt& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

std::vector<std::uint64_t> primes_below(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (bound < 3) return out;
  std::vector<bool> composite(bound, false);
  for (std::uint64_t i = 2; i < bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j < bound; j += i) composite[j] = true;
  }
  return out;
}

namespace {

// Brent's variant of Pollard rho with batched gcds. Returns a nontrivial
// factor or 0 when the iteration budget runs out.
BigInt brent_rho(const BigInt& n, std::uint64_t budget) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  std::uint64_t used = 0;
  for (unsigned long c = 1; used < budget; ++c) {
    BigInt y = 2, x, ys, q = 1, g = 1;
    std::uint64_t r = 1;
    const std::uint64_t m = 128;
    auto step = [&](BigInt& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    while (g == 1 && used < budget) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) step(y);
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        std::uint64_t lim = std::min(m, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          step(y);
          BigInt diff = x - y;
          q = q * abs(diff);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += lim;
        used += lim;
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time from the saved position.
      do {
        step(ys);
        BigInt diff = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
  return 0;
}

}  // namespace

IntegerFactorization factor_integer(const BigInt& n, const FactorBudget& budget) {
  require(n != 0, "factor_integer: n must be nonzero");
  IntegerFactorization out;
  std::map<BigInt, unsigned> acc;
  BigInt m = abs(n);
  for (unsigned long p = 2; p <= budget.trial_bound && m > 1; p += (p == 2 ? 1 : 2)) {
    if (BigInt(p) * p > m) break;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++acc[BigInt(p)];
    }
  }
  std::vector<BigInt> stack;
  if (m > 1) stack.push_back(m);
  std::uint64_t remaining = budget.rho_iterations;
  while (!stack.empty()) {
    BigInt c = stack.back();
    stack.pop_back();
    if (is_probable_prime(c)) {
      ++acc[c];
      continue;
    }
    BigInt root;
    if (mpz_perfect_square_p(c.get_mpz_t())) {
      mpz_sqrt(root.get_mpz_t(), c.get_mpz_t());
      stack.push_back(root);
      stack.push_back(root);
      continue;
    }
    BigInt d = remaining > 0 ? brent_rho(c, remaining) : BigInt(0);
    // rho consumes at most its budget; charge a fixed share per attempt
    remaining = remaining > budget.rho_iterations / 8 ? remaining - budget.rho_iterations / 8 : 0;
    if (d == 0) {
      out.unfactored.push_back(c);
      out.complete = false;
      continue;
    }
    stack.push_back(d);
    stack.push_back(c / d);
  }
  for (auto& [p, e] : acc) out.factors.emplace_back(p, e);
  std::sort(out.unfactored.begin(), out.unfactored.end());
  return out;
}

}  // namespace splitdyn
