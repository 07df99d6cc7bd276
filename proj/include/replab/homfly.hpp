#pragma once

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "replab/repcount.hpp"
#include "replab/sqrtq.hpp"

namespace replab {

// Dense polynomial in s = q^{1/2} with rational coefficients.
struct PolyS {
  std::vector<Rat> c;  // c[i] is the coefficient of s^i

  PolyS() = default;
  explicit PolyS(Rat r) {
    if (r != 0) c.push_back(std::move(r));
  }
  static PolyS monomial(Rat r, int e) {
    PolyS p;
    if (r != 0) {
      p.c.assign(e + 1, Rat(0));
      p.c[e] = std::move(r);
    }
    return p;
  }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero

  friend PolyS operator+(const PolyS& x, const PolyS& y) {
    PolyS r;
    r.c.assign(std::max(x.c.size(), y.c.size()), Rat(0));
    for (size_t i = 0; i < x.c.size(); ++i) r.c[i] += x.c[i];
    for (size_t i = 0; i < y.c.size(); ++i) r.c[i] += y.c[i];
    r.trim();
    return r;
  }
  friend PolyS operator-(const PolyS& x, const PolyS& y) {
    PolyS r;
    r.c.assign(std::max(x.c.size(), y.c.size()), Rat(0));
    for (size_t i = 0; i < x.c.size(); ++i) r.c[i] += x.c[i];
    for (size_t i = 0; i < y.c.size(); ++i) r.c[i] -= y.c[i];
    r.trim();
    return r;
  }
  friend PolyS operator*(const PolyS& x, const PolyS& y) {
    if (x.is_zero() || y.is_zero()) return {};
    PolyS r;
    r.c.assign(x.c.size() + y.c.size() - 1, Rat(0));
    for (size_t i = 0; i < x.c.size(); ++i)
      for (size_t j = 0; j < y.c.size(); ++j) r.c[i + j] += x.c[i] * y.c[j];
    r.trim();
    return r;
  }
  friend bool operator==(const PolyS& x, const PolyS& y) { return x.c == y.c; }

  // remainder of x modulo y (y nonzero)
  static PolyS rem(PolyS x, const PolyS& y) {
    while (!x.is_zero() && x.degree() >= y.degree()) {
      Rat f = x.c.back() / y.c.back();
      int shift = x.degree() - y.degree();
      for (size_t i = 0; i < y.c.size(); ++i) x.c[i + shift] -= f * y.c[i];
      x.trim();
    }
    return x;
  }
  static PolyS gcd(PolyS x, PolyS y) {
    while (!y.is_zero()) {
      PolyS r = rem(std::move(x), y);
      x = std::move(y);
      y = std::move(r);
    }
    if (!x.is_zero()) {
      Rat lead = x.c.back();
      for (auto& v : x.c) v /= lead;
    }
    return x;
  }
  // exact quotient (throws if the division leaves a remainder)
  static PolyS quot(PolyS x, const PolyS& y) {
    if (y.is_zero()) throw std::domain_error("PolyS: division by zero");
    PolyS q;
    if (x.degree() >= y.degree()) q.c.assign(x.degree() - y.degree() + 1, Rat(0));
    while (!x.is_zero() && x.degree() >= y.degree()) {
      Rat f = x.c.back() / y.c.back();
      int shift = x.degree() - y.degree();
      q.c[shift] = f;
      for (size_t i = 0; i < y.c.size(); ++i) x.c[i + shift] -= f * y.c[i];
      x.trim();
    }
    if (!x.is_zero()) throw std::domain_error("PolyS: inexact division");
    q.trim();
    return q;
  }

  SqrtQ eval(const SqrtQ& s) const {
    SqrtQ acc{Rat(0)};
    for (size_t i = c.size(); i-- > 0;) acc = acc * s + SqrtQ(c[i]);
    return acc;
  }
};

// Reduced rational function in s = q^{1/2}: num/den with monic denominator
// and gcd(num, den) = 1.  Negative powers of s live in the denominator.
struct RatFuncS {
  PolyS num, den{Rat(1)};

  RatFuncS() = default;
  explicit RatFuncS(Rat r) : num(std::move(r)) {}
  RatFuncS(PolyS n, PolyS d) : num(std::move(n)), den(std::move(d)) { reduce(); }

  void reduce() {
    if (den.is_zero()) throw std::domain_error("RatFuncS: zero denominator");
    if (num.is_zero()) {
      den = PolyS(Rat(1));
      return;
    }
    PolyS g = PolyS::gcd(num, den);
    if (g.degree() > 0) {
      num = PolyS::quot(std::move(num), g);
      den = PolyS::quot(std::move(den), g);
    }
    Rat lead = den.c.back();
    if (lead != 1) {
      for (auto& v : num.c) v /= lead;
      for (auto& v : den.c) v /= lead;
    }
  }
  bool is_zero() const { return num.is_zero(); }

  friend RatFuncS operator+(const RatFuncS& x, const RatFuncS& y) {
    return {x.num * y.den + y.num * x.den, x.den * y.den};
  }
  friend RatFuncS operator-(const RatFuncS& x, const RatFuncS& y) {
    return {x.num * y.den - y.num * x.den, x.den * y.den};
  }
  friend RatFuncS operator*(const RatFuncS& x, const RatFuncS& y) {
    return {x.num * y.num, x.den * y.den};
  }
  friend RatFuncS operator/(const RatFuncS& x, const RatFuncS& y) {
    return {x.num * y.den, x.den * y.num};
  }
  friend bool operator==(const RatFuncS& x, const RatFuncS& y) {
    return x.num == y.num && x.den == y.den;
  }

  SqrtQ eval_at_q(long long q) const {
    SqrtQ s = q_half_pow(q, 1);
    SqrtQ d = den.eval(s);
    if (d == SqrtQ(Rat(0))) throw std::domain_error("RatFuncS: denominator vanishes at q");
    return num.eval(s) / d;
  }
};

// Laurent polynomial in a with rational-function-in-s coefficients.
struct TwoVarPoly {
  std::map<int, RatFuncS> c;  // keyed by the power of a

  void set(int e, RatFuncS v) {
    if (v.is_zero())
      c.erase(e);
    else
      c[e] = std::move(v);
  }
  RatFuncS get(int e) const {
    auto it = c.find(e);
    return it == c.end() ? RatFuncS() : it->second;
  }
  bool is_zero() const { return c.empty(); }
  bool a_free() const { return c.empty() || (c.size() == 1 && c.begin()->first == 0); }
  int deg_a() const {
    if (c.empty()) throw std::domain_error("deg_a of the zero polynomial");
    return c.rbegin()->first;
  }

  friend TwoVarPoly operator+(const TwoVarPoly& x, const TwoVarPoly& y) {
    TwoVarPoly r = x;
    for (const auto& [e, v] : y.c) r.set(e, r.get(e) + v);
    return r;
  }
  friend TwoVarPoly operator-(const TwoVarPoly& x, const TwoVarPoly& y) {
    TwoVarPoly r = x;
    for (const auto& [e, v] : y.c) r.set(e, r.get(e) - v);
    return r;
  }
  friend TwoVarPoly operator*(const TwoVarPoly& x, const TwoVarPoly& y) {
    TwoVarPoly r;
    for (const auto& [e1, v1] : x.c)
      for (const auto& [e2, v2] : y.c) r.set(e1 + e2, r.get(e1 + e2) + v1 * v2);
    return r;
  }
  friend bool operator==(const TwoVarPoly& x, const TwoVarPoly& y) { return x.c == y.c; }

  // reciprocal of a monomial c*a^e or of an a-free rational function
  TwoVarPoly recip() const {
    if (c.size() != 1) throw std::domain_error("reciprocal of a non-monomial in a");
    TwoVarPoly r;
    r.set(-c.begin()->first, RatFuncS(Rat(1)) / c.begin()->second);
    return r;
  }
  TwoVarPoly pow(long long e) const {
    TwoVarPoly base = e < 0 ? recip() : *this;
    if (e < 0) e = -e;
    TwoVarPoly acc;
    acc.set(0, RatFuncS(Rat(1)));
    for (; e > 0; --e) acc = acc * base;
    return acc;
  }
};

namespace homfly_detail {

struct Parser {
  std::string_view s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool eat(char ch) {
    if (peek() != ch) return false;
    ++pos;
    return true;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("parse_poly: " + what + " at offset " + std::to_string(pos));
  }

  long long integer() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
      fail("expected integer");
    return std::strtoll(s.data() + start, nullptr, 10);
  }

  // exponent: integer, or (p/2) half-integral form; returns twice the value
  long long exponent_doubled() {
    if (eat('(')) {
      long long p = integer();
      long long twice = 2 * p;
      if (eat('/')) {
        long long d = integer();
        if (d != 2) fail("only halves allowed in fractional exponents");
        twice = p;
      }
      if (!eat(')')) fail("expected ')' after exponent");
      return twice;
    }
    return 2 * integer();
  }

  TwoVarPoly atom(bool& is_q) {
    is_q = false;
    char ch = peek();
    TwoVarPoly r;
    if (ch == '(') {
      ++pos;
      r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (ch == 'a') {
      ++pos;
      r.set(1, RatFuncS(Rat(1)));
      return r;
    }
    if (ch == 'q') {
      ++pos;
      is_q = true;
      r.set(0, RatFuncS{PolyS::monomial(Rat(1), 2), PolyS(Rat(1))});
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      long long v = integer();
      r.set(0, RatFuncS(Rat(v)));
      return r;
    }
    fail("unexpected character");
  }

  TwoVarPoly factor() {
    bool is_q = false;
    TwoVarPoly base = atom(is_q);
    if (!eat('^')) return base;
    long long e2 = exponent_doubled();
    if (e2 % 2 == 0) return base.pow(e2 / 2);
    if (!is_q) fail("fractional exponents apply only to q");
    TwoVarPoly r;
    if (e2 >= 0)
      r.set(0, RatFuncS{PolyS::monomial(Rat(1), static_cast<int>(e2)), PolyS(Rat(1))});
    else
      r.set(0, RatFuncS{PolyS(Rat(1)), PolyS::monomial(Rat(1), static_cast<int>(-e2))});
    return r;
  }

  TwoVarPoly term() {
    TwoVarPoly r = factor();
    for (;;) {
      if (eat('*'))
        r = r * factor();
      else if (eat('/')) {
        TwoVarPoly d = factor();
        r = r * d.recip();
      } else
        return r;
    }
  }

  TwoVarPoly expr() {
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    TwoVarPoly r = term();
    if (neg) r = TwoVarPoly{} - r;
    for (;;) {
      if (eat('+'))
        r = r + term();
      else if (eat('-'))
        r = r - term();
      else
        return r;
    }
  }
};

}  // namespace homfly_detail

inline TwoVarPoly parse_poly(std::string_view text) {
  homfly_detail::Parser p{text};
  TwoVarPoly r = p.expr();
  p.skip_ws();
  if (p.pos != p.s.size()) p.fail("trailing input");
  return r;
}

// Data file: '#'-prefixed header lines (key: value), then one expression
// which may span multiple lines.
struct PolyFile {
  std::map<std::string, std::string> header;
  TwoVarPoly poly;
};

inline PolyFile parse_poly_file(std::istream& in) {
  PolyFile out;
  std::string line, body;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      std::string rest = line.substr(1);
      auto colon = rest.find(':');
      if (colon != std::string::npos) {
        auto strip = [](std::string v) {
          size_t a = v.find_first_not_of(" \t");
          size_t b = v.find_last_not_of(" \t");
          return a == std::string::npos ? std::string() : v.substr(a, b - a + 1);
        };
        out.header[strip(rest.substr(0, colon))] = strip(rest.substr(colon + 1));
      }
      continue;
    }
    body += line;
    body += ' ';
  }
  out.poly = parse_poly(body);
  return out;
}

// Coefficient of a^0 after setting a^{-1} = 0; positive powers of a violate
// the Legendrian degree bound and make the specialization undefined.
inline RatFuncS specialize_a_inv_zero(const TwoVarPoly& P) {
  if (!P.is_zero() && P.deg_a() > 0)
    throw std::domain_error("specialize: positive a-degree " + std::to_string(P.deg_a()) +
                            " violates deg_a <= -n|r|");
  return P.get(0);
}

struct HomflyCompareRow {
  long long q = 0;
  SqrtQ specialization;
  SqrtQ rep_count;
  bool equal = false;
};
struct HomflyCompareReport {
  std::vector<HomflyCompareRow> rows;
  bool all_equal = true;
};

// eq (a^{-1} = 0 specialization) vs Rep_2(K, F_{q^n}) at each q
inline HomflyCompareReport compare_with_rep(const TwoVarPoly& P, const Dga& K, unsigned n,
                                            const std::vector<long long>& qs,
                                            RepCountOptions opt = {}) {
  RatFuncS spec = specialize_a_inv_zero(P);
  HomflyCompareReport rep;
  for (long long q : qs) {
    HomflyCompareRow row;
    row.q = q;
    row.specialization = spec.eval_at_q(q);
    row.rep_count = total_rep_number(K, n, 2, q, opt);
    row.equal = row.specialization == row.rep_count;
    rep.all_equal = rep.all_equal && row.equal;
    rep.rows.push_back(row);
  }
  return rep;
}

struct KnotMeta {
  std::optional<long long> tb;
  long long rotation = 0;
};

struct DegreeBoundReport {
  int deg_a = 0;
  long long spec_bound = 0;  // -n|r|
  bool spec_bound_ok = false;
  std::optional<long long> phat_deg_a;  // deg_a of (a^n q^{n(n-1)/2})^{-tb} P
  std::optional<bool> tb_bound_ok;      // tb + |r| <= -phat_deg_a / n
  std::optional<bool> sharp;            // tb == -phat_deg_a / n
};

inline DegreeBoundReport check_degree_bounds(const TwoVarPoly& P, const KnotMeta& meta,
                                             unsigned n) {
  DegreeBoundReport rep;
  rep.deg_a = P.deg_a();
  rep.spec_bound = -static_cast<long long>(n) * std::abs(meta.rotation);
  rep.spec_bound_ok = rep.deg_a <= rep.spec_bound;
  if (meta.tb) {
    long long d = rep.deg_a - static_cast<long long>(n) * *meta.tb;
    rep.phat_deg_a = d;
    rep.tb_bound_ok = static_cast<long long>(n) * (*meta.tb + std::abs(meta.rotation)) <= -d;
    rep.sharp = static_cast<long long>(n) * *meta.tb == -d;
  }
  return rep;
}

}  // namespace replab
