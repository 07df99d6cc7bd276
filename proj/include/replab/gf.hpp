#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace replab {

// Finite field F_q, q = p^k <= 256, with full lookup tables.
// Elements are indices 0..q-1; index encodes the coefficient vector of the
// residue polynomial in base p (coefficient of x^i is digit i).
class Field {
public:
  unsigned q() const { return q_; }
  unsigned p() const { return p_; }
  unsigned k() const { return k_; }

  unsigned add(unsigned a, unsigned b) const { return add_[a * q_ + b]; }
  unsigned sub(unsigned a, unsigned b) const { return add_[a * q_ + neg_[b]]; }
  unsigned mul(unsigned a, unsigned b) const { return mul_[a * q_ + b]; }
  unsigned neg(unsigned a) const { return neg_[a]; }
  unsigned inv(unsigned a) const {
    if (a == 0) throw std::domain_error("Field::inv of zero");
    return inv_[a];
  }
  unsigned div(unsigned a, unsigned b) const { return mul(a, inv(b)); }

  unsigned pow(unsigned a, long long e) const {
    if (a == 0) {
      if (e < 0) throw std::domain_error("Field::pow of zero to negative");
      return e == 0 ? 1u : 0u;
    }
    if (e < 0) { a = inv(a); e = -e; }
    unsigned r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  // Image of an integer under Z -> F_p subset F_q.
  unsigned from_int(long long n) const {
    long long r = n % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<unsigned>(r);
  }

  // Multiplicative order of a nonzero element.
  unsigned order(unsigned a) const {
    if (a == 0) throw std::domain_error("Field::order of zero");
    unsigned o = 1, x = a;
    while (x != 1) { x = mul(x, a); ++o; }
    return o;
  }

  unsigned frobenius(unsigned a) const { return pow(a, p_); }

  // Modulus polynomial coefficients, degree k, monic (index i = coeff of x^i).
  const std::vector<unsigned>& modulus() const { return modulus_; }

  std::string to_string(unsigned a) const;

  static const Field& get(unsigned q);

private:
  explicit Field(unsigned q);

  unsigned q_, p_, k_;
  std::vector<unsigned> modulus_;
  std::vector<uint8_t> add_, mul_, neg_, inv_;
};

// Checked element wrapper; mixed-field operations throw.
struct Fel {
  const Field* F = nullptr;
  unsigned v = 0;

  Fel() = default;
  Fel(const Field& f, unsigned val) : F(&f), v(val) {
    if (val >= f.q()) throw std::domain_error("Fel: value out of range");
  }

  static void same(const Fel& a, const Fel& b) {
    if (a.F != b.F) throw std::domain_error("Fel: mixed fields");
  }

  friend Fel operator+(Fel a, Fel b) { same(a, b); return Fel(*a.F, a.F->add(a.v, b.v)); }
  friend Fel operator-(Fel a, Fel b) { same(a, b); return Fel(*a.F, a.F->sub(a.v, b.v)); }
  friend Fel operator*(Fel a, Fel b) { same(a, b); return Fel(*a.F, a.F->mul(a.v, b.v)); }
  friend Fel operator/(Fel a, Fel b) { same(a, b); return Fel(*a.F, a.F->div(a.v, b.v)); }
  Fel operator-() const { return Fel(*F, F->neg(v)); }
  Fel inv() const { return Fel(*F, F->inv(v)); }
  friend bool operator==(const Fel& a, const Fel& b) { return a.F == b.F && a.v == b.v; }
  friend bool operator!=(const Fel& a, const Fel& b) { return !(a == b); }
};

namespace detail {

// Dense polynomial over F_p, index = degree.
using PolyP = std::vector<unsigned>;

inline PolyP poly_trim(PolyP a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

inline PolyP poly_mod(PolyP a, const PolyP& m, unsigned p) {
  a = poly_trim(std::move(a));
  const size_t dm = m.size() - 1;
  while (a.size() > dm) {
    unsigned lead = a.back();
    size_t shift = a.size() - 1 - dm;
    if (lead != 0) {
      // m is monic
      for (size_t i = 0; i < m.size(); ++i) {
        unsigned t = (a[shift + i] + p - (lead * m[i]) % p) % p;
        a[shift + i] = t;
      }
    }
    a.pop_back();
    a = poly_trim(std::move(a));
    if (a.empty()) break;
  }
  return a;
}

inline PolyP poly_mul_mod(const PolyP& a, const PolyP& b, const PolyP& m, unsigned p) {
  if (a.empty() || b.empty()) return {};
  PolyP c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(c), m, p);
}

inline bool poly_divides(const PolyP& d, PolyP a, unsigned p) {
  // d monic
  PolyP m = d;
  return poly_mod(std::move(a), m, p).empty();
}

inline bool is_irreducible(const PolyP& f, unsigned p) {
  // trial division by all monic polys of degree 1..deg(f)/2
  size_t deg = f.size() - 1;
  for (size_t d = 1; d <= deg / 2; ++d) {
    unsigned long long count = 1;
    for (size_t i = 0; i < d; ++i) count *= p;
    for (unsigned long long c = 0; c < count; ++c) {
      PolyP g(d + 1, 0);
      unsigned long long cc = c;
      for (size_t i = 0; i < d; ++i) { g[i] = cc % p; cc /= p; }
      g[d] = 1;
      if (poly_divides(g, f, p)) return false;
    }
  }
  return deg >= 1;
}

}  // namespace detail

inline Field::Field(unsigned q) : q_(q) {
  if (q < 2 || q > 256) throw std::domain_error("Field: q must be in [2,256]");
  unsigned p = 2;
  while (q % p != 0) {
    ++p;
    if (p > q) throw std::domain_error("Field: q not a prime power");
  }
  unsigned k = 0, t = q;
  while (t > 1) {
    if (t % p != 0) throw std::domain_error("Field: q not a prime power");
    t /= p;
    ++k;
  }
  p_ = p;
  k_ = k;

  // Lexicographically least irreducible monic modulus: scan lower-coefficient
  // vectors in ascending base-p value.
  if (k == 1) {
    modulus_ = {0, 1};  // x - 0 placeholder; unused for prime fields
    modulus_[0] = 0;
  } else {
    for (unsigned c = 0;; ++c) {
      if (c >= q_) throw std::logic_error("Field: no irreducible modulus found");
      detail::PolyP f(k + 1, 0);
      unsigned cc = c;
      for (unsigned i = 0; i < k; ++i) { f[i] = cc % p; cc /= p; }
      f[k] = 1;
      if (detail::is_irreducible(f, p)) { modulus_ = f; break; }
    }
  }

  auto digits = [&](unsigned a) {
    detail::PolyP d;
    while (a) { d.push_back(a % p); a /= p; }
    return d;
  };
  auto undigits = [&](const detail::PolyP& d) {
    unsigned a = 0;
    for (size_t i = d.size(); i-- > 0;) a = a * p + d[i];
    return a;
  };

  add_.resize(size_t(q) * q);
  mul_.resize(size_t(q) * q);
  neg_.resize(q);
  inv_.assign(q, 0);
  for (unsigned a = 0; a < q; ++a) {
    auto da = digits(a);
    detail::PolyP dn(da.size());
    for (size_t i = 0; i < da.size(); ++i) dn[i] = (p - da[i]) % p;
    neg_[a] = static_cast<uint8_t>(undigits(detail::poly_trim(dn)));
    for (unsigned b = 0; b < q; ++b) {
      auto db = digits(b);
      detail::PolyP ds(std::max(da.size(), db.size()), 0);
      for (size_t i = 0; i < ds.size(); ++i) {
        unsigned x = (i < da.size() ? da[i] : 0) + (i < db.size() ? db[i] : 0);
        ds[i] = x % p;
      }
      add_[size_t(a) * q + b] = static_cast<uint8_t>(undigits(detail::poly_trim(ds)));
      if (k == 1) {
        mul_[size_t(a) * q + b] = static_cast<uint8_t>((a * b) % p);
      } else {
        auto dm = detail::poly_mul_mod(da, db, modulus_, p);
        mul_[size_t(a) * q + b] = static_cast<uint8_t>(undigits(dm));
      }
    }
  }
  for (unsigned a = 1; a < q; ++a)
    for (unsigned b = 1; b < q; ++b)
      if (mul_[size_t(a) * q + b] == 1) { inv_[a] = static_cast<uint8_t>(b); break; }
  for (unsigned a = 1; a < q; ++a)
    if (inv_[a] == 0) throw std::logic_error("Field: missing inverse, q not a prime power?");
}

inline std::string Field::to_string(unsigned a) const { return std::to_string(a); }

inline const Field& Field::get(unsigned q) {
  static std::mutex mu;
  static std::map<unsigned, std::unique_ptr<Field>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it == cache.end())
    it = cache.emplace(q, std::unique_ptr<Field>(new Field(q))).first;
  return *it->second;
}

}  // namespace replab
