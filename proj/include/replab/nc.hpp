#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace replab {

// Generator table of a free unital algebra.  Invertible generators (basepoint
// letters) may appear with exponent -1 in words.
struct GenInfo {
  std::string name;
  int degree = 0;
  bool invertible = false;
};

struct Algebra {
  std::vector<GenInfo> gens;

  int add_gen(const std::string& name, int degree, bool invertible = false) {
    if (find(name) >= 0) throw std::invalid_argument("Algebra: duplicate generator " + name);
    gens.push_back({name, degree, invertible});
    return static_cast<int>(gens.size()) - 1;
  }
  int find(const std::string& name) const {
    for (size_t i = 0; i < gens.size(); ++i)
      if (gens[i].name == name) return static_cast<int>(i);
    return -1;
  }
  int size() const { return static_cast<int>(gens.size()); }
};

// A letter is a generator id with exponent +1 or -1, packed into one int.
using Letter = int32_t;
inline Letter make_letter(int gen, bool inverse = false) {
  return (static_cast<Letter>(gen) << 1) | (inverse ? 1 : 0);
}
inline int letter_gen(Letter l) { return l >> 1; }
inline bool letter_inverse(Letter l) { return l & 1; }

using Word = std::vector<Letter>;

inline int word_degree(const Algebra& A, const Word& w) {
  int d = 0;
  for (Letter l : w)
    d += letter_inverse(l) ? -A.gens[letter_gen(l)].degree : A.gens[letter_gen(l)].degree;
  return d;
}

// Free reduction: cancel adjacent g g^-1 / g^-1 g pairs.
inline Word word_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    if (!out.empty() && letter_gen(out.back()) == letter_gen(l) &&
        letter_inverse(out.back()) != letter_inverse(l))
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

// Length-lex order on reduced words.
inline bool word_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

struct NcTerm {
  long long c = 0;
  Word w;
};

// Integer-coefficient noncommutative Laurent polynomial, kept canonical:
// words freely reduced, like terms merged, zero terms dropped, length-lex order.
class NcPoly {
public:
  NcPoly() = default;

  static NcPoly zero() { return NcPoly(); }
  static NcPoly constant(long long c) {
    NcPoly p;
    if (c) p.terms_.push_back({c, {}});
    return p;
  }
  static NcPoly gen(int id, bool inverse = false, long long c = 1) {
    NcPoly p;
    if (c) p.terms_.push_back({c, {make_letter(id, inverse)}});
    return p;
  }
  static NcPoly term(long long c, Word w) {
    NcPoly p;
    if (c) p.terms_.push_back({c, word_reduce(w)});
    p.canonicalize();
    return p;
  }

  const std::vector<NcTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend NcPoly operator+(const NcPoly& x, const NcPoly& y) {
    NcPoly r;
    r.terms_.reserve(x.terms_.size() + y.terms_.size());
    r.terms_ = x.terms_;
    r.terms_.insert(r.terms_.end(), y.terms_.begin(), y.terms_.end());
    r.canonicalize();
    return r;
  }
  friend NcPoly operator-(const NcPoly& x, const NcPoly& y) { return x + y.scaled(-1); }
  NcPoly operator-() const { return scaled(-1); }
  NcPoly scaled(long long s) const {
    NcPoly r;
    if (!s) return r;
    r.terms_ = terms_;
    for (auto& t : r.terms_) t.c *= s;
    return r;
  }
  friend NcPoly operator*(const NcPoly& x, const NcPoly& y) {
    NcPoly r;
    r.terms_.reserve(x.terms_.size() * y.terms_.size());
    for (const auto& tx : x.terms_)
      for (const auto& ty : y.terms_) {
        Word w = tx.w;
        w.insert(w.end(), ty.w.begin(), ty.w.end());
        r.terms_.push_back({tx.c * ty.c, word_reduce(w)});
      }
    r.canonicalize();
    return r;
  }
  friend bool operator==(const NcPoly& x, const NcPoly& y) {
    if (x.terms_.size() != y.terms_.size()) return false;
    for (size_t i = 0; i < x.terms_.size(); ++i)
      if (x.terms_[i].c != y.terms_[i].c || x.terms_[i].w != y.terms_[i].w) return false;
    return true;
  }
  friend bool operator!=(const NcPoly& x, const NcPoly& y) { return !(x == y); }

  // Degree if homogeneous, nullopt otherwise (zero counts as any degree).
  std::optional<int> homogeneous_degree(const Algebra& A) const {
    if (terms_.empty()) return std::nullopt;
    int d = word_degree(A, terms_[0].w);
    for (const auto& t : terms_)
      if (word_degree(A, t.w) != d) return std::nullopt;
    return d;
  }

  std::string str(const Algebra& A) const {
    if (terms_.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < terms_.size(); ++i) {
      long long c = terms_[i].c;
      if (i == 0) {
        if (c < 0) { s += "-"; c = -c; }
      } else {
        s += c < 0 ? " - " : " + ";
        if (c < 0) c = -c;
      }
      const Word& w = terms_[i].w;
      bool need_coeff = (c != 1) || w.empty();
      if (need_coeff) s += std::to_string(c);
      for (size_t j = 0; j < w.size(); ++j) {
        if (need_coeff || j > 0) s += "*";
        s += A.gens[letter_gen(w[j])].name;
        if (letter_inverse(w[j])) s += "^-1";
      }
    }
    return s;
  }

private:
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const NcTerm& a, const NcTerm& b) { return word_less(a.w, b.w); });
    std::vector<NcTerm> out;
    for (auto& t : terms_) {
      if (!out.empty() && out.back().w == t.w)
        out.back().c += t.c;
      else
        out.push_back(std::move(t));
    }
    terms_.clear();
    for (auto& t : out)
      if (t.c) terms_.push_back(std::move(t));
  }

  std::vector<NcTerm> terms_;
};

}  // namespace replab
