#pragma once

#include <ostream>
#include <stdexcept>

#include "replab/rational.hpp"

namespace replab {

inline long long isqrt_ll(long long n) {
  long long r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline bool is_square(long long n) {
  long long r = isqrt_ll(n);
  return r * r == n;
}

// Exact value a + b*sqrt(q) with rational a, b.  If q is a perfect square the
// irrational part is folded into a, so b == 0 is then an invariant.
struct SqrtQ {
  Rat a, b;
  long long q = 0;  // 0 marks a plain rational (no sqrt part)

  SqrtQ() = default;
  SqrtQ(Rat rational) : a(std::move(rational)) {}
  SqrtQ(long long n) : a(n) {}
  SqrtQ(Rat ra, Rat rb, long long qq) : a(std::move(ra)), b(std::move(rb)), q(qq) {
    normalize();
  }

  void normalize() {
    if (q != 0 && is_square(q)) {
      a += b * isqrt_ll(q);
      b = 0;
    }
    if (b == 0) q = 0;
  }

  bool is_rational() const { return b == 0; }

  static long long merge_q(const SqrtQ& x, const SqrtQ& y) {
    if (x.q == 0) return y.q;
    if (y.q == 0 || x.q == y.q) return x.q;
    throw std::domain_error("SqrtQ: mixing sqrt of different q");
  }

  friend SqrtQ operator+(const SqrtQ& x, const SqrtQ& y) {
    return SqrtQ(x.a + y.a, x.b + y.b, merge_q(x, y));
  }
  friend SqrtQ operator-(const SqrtQ& x, const SqrtQ& y) {
    return SqrtQ(x.a - y.a, x.b - y.b, merge_q(x, y));
  }
  SqrtQ operator-() const { return SqrtQ(-a, -b, q); }
  friend SqrtQ operator*(const SqrtQ& x, const SqrtQ& y) {
    long long qq = merge_q(x, y);
    return SqrtQ(x.a * y.a + x.b * y.b * qq, x.a * y.b + x.b * y.a, qq);
  }
  SqrtQ inv() const {
    Rat n = a * a - b * b * q;
    if (n == 0) throw std::domain_error("SqrtQ: inverse of zero");
    return SqrtQ(a / n, -b / n, q);
  }
  friend SqrtQ operator/(const SqrtQ& x, const SqrtQ& y) { return x * y.inv(); }
  friend bool operator==(const SqrtQ& x, const SqrtQ& y) {
    return x.a == y.a && x.b == y.b && (x.b == 0 || x.q == y.q);
  }
  friend bool operator!=(const SqrtQ& x, const SqrtQ& y) { return !(x == y); }

  SqrtQ pow(long long e) const {
    SqrtQ base = *this, r(Rat(1));
    if (e < 0) { base = inv(); e = -e; }
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  friend std::ostream& operator<<(std::ostream& os, const SqrtQ& x) {
    if (x.b == 0) return os << x.a;
    return os << x.a << " + (" << x.b << ")*sqrt(" << x.q << ")";
  }
};

// q^(e/2) for integer e (e may be negative or odd).
inline SqrtQ q_half_pow(long long q, long long e) {
  if (e % 2 == 0) return SqrtQ(rat_pow(Rat(q), e / 2));
  long long f = (e - (e % 2 + 2) % 2) / 2;  // floor(e/2)
  return SqrtQ(Rat(0), rat_pow(Rat(q), f), q);
}

// z = q^(1/2) - q^(-1/2) as an element of Q(sqrt q).
inline SqrtQ z_of_q(long long q) {
  return q_half_pow(q, 1) - q_half_pow(q, -1);
}

}  // namespace replab
