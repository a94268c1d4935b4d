#include "splitdyn/bipoly.hpp"

#include <algorithm>
#include <cctype>

#include "splitdyn/error.hpp"

namespace splitdyn {

BiPoly::BiPoly(std::vector<std::vector<Rational>> rows) : rows_(std::move(rows)) {
  normalize();
}

BiPoly BiPoly::constant(const Rational& c) { return BiPoly({{c}}); }
BiPoly BiPoly::var_x() { return BiPoly({{0}, {1}}); }
BiPoly BiPoly::var_y() { return BiPoly({{0, 1}}); }

void BiPoly::normalize() {
  for (auto& r : rows_) {
    for (auto& c : r) c.canonicalize();
    while (!r.empty() && r.back() == 0) r.pop_back();
  }
  while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
}

int BiPoly::deg_x() const { return static_cast<int>(rows_.size()) - 1; }

int BiPoly::deg_y() const {
  int d = -1;
  for (const auto& r : rows_) d = std::max(d, static_cast<int>(r.size()) - 1);
  return d;
}

Rational BiPoly::coeff(std::size_t i, std::size_t j) const {
  if (i >= rows_.size() || j >= rows_[i].size()) return 0;
  return rows_[i][j];
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
  if (o.rows_.size() > rows_.size()) rows_.resize(o.rows_.size());
  for (std::size_t i = 0; i < o.rows_.size(); ++i) {
    auto& r = rows_[i];
    if (o.rows_[i].size() > r.size()) r.resize(o.rows_[i].size(), Rational(0));
    for (std::size_t j = 0; j < o.rows_[i].size(); ++j) r[j] += o.rows_[i][j];
  }
  normalize();
  return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& o) { return *this += o.scaled(-1); }

BiPoly BiPoly::scaled(const Rational& c) const {
  BiPoly r = *this;
  for (auto& row : r.rows_)
    for (auto& a : row) a *= c;
  r.normalize();
  return r;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<std::vector<Rational>> out(a.rows_.size() + b.rows_.size() - 1);
  for (std::size_t i = 0; i < a.rows_.size(); ++i)
    for (std::size_t k = 0; k < b.rows_.size(); ++k) {
      auto& row = out[i + k];
      const auto& ra = a.rows_[i];
      const auto& rb = b.rows_[k];
      if (ra.empty() || rb.empty()) continue;
      if (row.size() < ra.size() + rb.size() - 1) row.resize(ra.size() + rb.size() - 1, Rational(0));
      for (std::size_t j = 0; j < ra.size(); ++j)
        for (std::size_t l = 0; l < rb.size(); ++l) row[j + l] += ra[j] * rb[l];
    }
  return BiPoly(std::move(out));
}

UniPoly BiPoly::substitute_y(const UniPoly& g) const {
  // Horner in y with polynomial-in-x coefficients.
  int dy = deg_y();
  if (dy < 0) return {};
  auto column = [&](int j) {
    std::vector<Rational> c(rows_.size(), Rational(0));
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (static_cast<std::size_t>(j) < rows_[i].size()) c[i] = rows_[i][j];
    return UniPoly(std::move(c));
  };
  UniPoly acc = column(dy);
  for (int j = dy - 1; j >= 0; --j) acc = acc * g + column(j);
  return acc;
}

UniPoly BiPoly::as_univariate() const {
  std::vector<Rational> c(rows_.size(), Rational(0));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() > 1) fail(ErrorCode::precondition, "polynomial involves y");
    if (!rows_[i].empty()) c[i] = rows_[i][0];
  }
  return UniPoly(std::move(c));
}

std::string BiPoly::str() const {
  struct Term {
    std::size_t i, j;
  };
  std::vector<Term> terms;
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (std::size_t j = 0; j < rows_[i].size(); ++j)
      if (rows_[i][j] != 0) terms.push_back({i, j});
  if (terms.empty()) return "0";
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.i + a.j != b.i + b.j) return a.i + a.j > b.i + b.j;
    return a.i > b.i;
  });
  std::string s;
  bool first = true;
  for (const auto& t : terms) {
    const Rational& c = rows_[t.i][t.j];
    bool neg = c < 0;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    Rational a = abs(c);
    std::string mono;
    auto var = [&](const char* v, std::size_t e) {
      if (e == 0) return;
      if (!mono.empty()) mono += "*";
      mono += v;
      if (e > 1) mono += "^" + std::to_string(e);
    };
    var("x", t.i);
    var("y", t.j);
    if (mono.empty()) {
      s += a.get_str();
    } else {
      if (a != 1) s += a.get_str() + "*";
      s += mono;
    }
  }
  return s;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view t) : text_(t) {}

  BiPoly parse() {
    skip();
    if (pos_ >= text_.size()) throw ParseError(pos_, "empty polynomial");
    BiPoly r = expr();
    skip();
    if (pos_ < text_.size())
      throw ParseError(pos_, std::string("unexpected character '") + text_[pos_] + "'");
    return r;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  BiPoly expr() {
    BiPoly acc = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        acc += term();
      } else if (c == '-') {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  static bool starts_factor(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == 'x' || c == 'y' || c == '(';
  }

  BiPoly term() {
    BiPoly acc = unary();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        acc = acc * unary();
      } else if (c == '/') {
        std::size_t at = ++pos_;
        BiPoly d = unary();
        if (d.deg_x() != 0 || d.deg_y() != 0)
          throw ParseError(at, "division only by nonzero constants");
        acc = acc.scaled(1 / d.coeff(0, 0));
      } else if (starts_factor(c)) {
        acc = acc * unary();
      } else {
        return acc;
      }
    }
  }

  BiPoly unary() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      return unary().scaled(-1);
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  BiPoly power() {
    BiPoly base = primary();
    if (peek() == '^') {
      ++pos_;
      skip();
      std::size_t start = pos_;
      unsigned long e = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        e = e * 10 + static_cast<unsigned long>(text_[pos_] - '0');
        if (e > 100000) throw ParseError(start, "exponent too large");
        ++pos_;
      }
      if (pos_ == start) throw ParseError(start, "expected nonnegative integer exponent");
      BiPoly r = BiPoly::constant(1);
      for (unsigned long i = 0; i < e; ++i) r = r * base;
      return r;
    }
    return base;
  }

  BiPoly primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      BiPoly inner = expr();
      if (peek() != ')') throw ParseError(pos_, "expected ')'");
      ++pos_;
      return inner;
    }
    if (c == 'x') {
      ++pos_;
      return BiPoly::var_x();
    }
    if (c == 'y') {
      ++pos_;
      return BiPoly::var_y();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      BigInt v(std::string(text_.substr(start, pos_ - start)), 10);
      return BiPoly::constant(Rational(v));
    }
    if (c == '\0') throw ParseError(pos_, "unexpected end of input");
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

BiPoly parse_bipoly(std::string_view text) { return Parser(text).parse(); }

}  // namespace splitdyn
