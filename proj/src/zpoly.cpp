#include "zpoly.hpp"

#include <algorithm>

namespace splitdyn::detail {

void trim(ZVec& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

namespace {

std::size_t max_bits(const ZVec& v) {
  std::size_t b = 0;
  for (const auto& c : v) b = std::max(b, mpz_sizeinbase(c.get_mpz_t(), 2));
  return b;
}

// Kronecker substitution: evaluate at 2^k, multiply as integers, unpack with
// signed digits. Handles negative coefficients through borrow propagation.
ZVec mul_kronecker(const ZVec& a, const ZVec& b) {
  std::size_t bits = max_bits(a) + max_bits(b) +
                     mpz_sizeinbase(mpz_class(std::min(a.size(), b.size())).get_mpz_t(), 2) + 2;
  auto pack = [bits](const ZVec& v) {
    mpz_class r = 0;
    for (std::size_t i = v.size(); i-- > 0;) {
      r <<= bits;
      r += v[i];
    }
    return r;
  };
  mpz_class prod = pack(a) * pack(b);
  std::size_t n = a.size() + b.size() - 1;
  ZVec out(n);
  mpz_class half = mpz_class(1) << (bits - 1);
  mpz_class base = mpz_class(1) << bits;
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class digit;
    mpz_fdiv_r_2exp(digit.get_mpz_t(), prod.get_mpz_t(), bits);
    mpz_fdiv_q_2exp(prod.get_mpz_t(), prod.get_mpz_t(), bits);
    if (digit >= half) {
      digit -= base;
      prod += 1;
    }
    out[i] = digit;
  }
  return out;
}

}  // namespace

ZVec mul(const ZVec& a, const ZVec& b) {
  if (a.empty() || b.empty()) return {};
  if (std::min(a.size(), b.size()) >= 24) {
    ZVec out = mul_kronecker(a, b);
    trim(out);
    return out;
  }
  ZVec out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  trim(out);
  return out;
}

mpz_class content(const ZVec& v) {
  mpz_class g = 0;
  for (const auto& c : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

bool exact_div(const ZVec& a, const ZVec& b, ZVec& quotient) {
  quotient.clear();
  if (b.empty()) return false;
  if (a.empty()) return true;
  if (a.size() < b.size()) return false;
  ZVec r = a;
  std::size_t db = b.size() - 1;
  quotient.assign(a.size() - db, 0);
  const mpz_class& lb = b.back();
  for (std::size_t k = a.size() - b.size() + 1; k-- > 0;) {
    const mpz_class& top = r[k + db];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t())) return false;
    mpz_class q = top / lb;
    for (std::size_t j = 0; j <= db; ++j)
      mpz_submul(r[k + j].get_mpz_t(), q.get_mpz_t(), b[j].get_mpz_t());
    quotient[k] = q;
  }
  for (const auto& c : r)
    if (c != 0) return false;
  trim(quotient);
  return true;
}

}  // namespace splitdyn::detail
