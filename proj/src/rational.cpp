#include "splitdyn/rational.hpp"

#include <cmath>
#include <numbers>

#include "splitdyn/error.hpp"

namespace splitdyn {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw ParseError(0, "empty rational");
  auto valid = [](const std::string& part) {
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (num.empty() || !valid(num)) throw ParseError(0, "bad numerator '" + s + "'");
  if (den.empty() || !valid(den)) throw ParseError(slash, "bad denominator '" + s + "'");
  if (num[0] == '+') num.erase(num.begin());
  if (den[0] == '+') den.erase(den.begin());
  BigInt n(num, 10), d(den, 10);
  if (d == 0) throw ParseError(slash, "zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const BigInt& z) { return z.get_str(); }

double log_abs(const BigInt& z) {
  if (z == 0) return -INFINITY;
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::numbers::ln2;
}

BigInt lcm_of_denominators(const Rational* first, const Rational* last) {
  BigInt l = 1;
  for (; first != last; ++first) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), first->get_den_mpz_t());
  }
  return l;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::precondition: return "Precondition";
    case ErrorCode::parse: return "ParseError";
    case ErrorCode::degree_cap: return "DegreeCap";
    case ErrorCode::budget: return "BudgetExhausted";
    case ErrorCode::unsupported: return "Unsupported";
    case ErrorCode::orbit_meets_v: return "OrbitMeetsV";
    case ErrorCode::contained_in_v: return "ContainedInV";
    case ErrorCode::preperiodic_curve: return "PreperiodicCurve";
    case ErrorCode::semiconjugacy_fails: return "SemiconjugacyFails";
    case ErrorCode::precision: return "IncreasePrecision";
    case ErrorCode::non_convergence: return "NonConvergence";
  }
  return "Unknown";
}

}  // namespace splitdyn
