#pragma once

#include <map>
#include <string>
#include <vector>

#include "replab/nc.hpp"

namespace replab {

// Unital Z-graded DGA with degree -1 differential and invertible basepoint
// generators.  components lists basepoint generators per link component in
// orientation order, starting at the chosen initial basepoint.
struct Dga {
  std::string name;
  Algebra alg;
  std::vector<NcPoly> diff;                 // indexed by generator id
  std::vector<std::vector<int>> components; // basepoint generator ids
  int rot = 0;                              // rotation number r
  std::string note;

  int add_chord(const std::string& gname, int degree) {
    int id = alg.add_gen(gname, degree, false);
    diff.resize(alg.size());
    return id;
  }
  int add_basepoint(const std::string& gname, int degree = 0) {
    int id = alg.add_gen(gname, degree, true);
    diff.resize(alg.size());
    return id;
  }
  void set_diff(int id, NcPoly p) { diff[id] = std::move(p); }

  std::vector<int> chord_ids() const {
    std::vector<int> out;
    for (int i = 0; i < alg.size(); ++i)
      if (!alg.gens[i].invertible) out.push_back(i);
    return out;
  }
};

// Signed Leibniz extension of the generator differentials to any element.
inline NcPoly apply_diff(const Dga& D, const NcPoly& p) {
  NcPoly out;
  for (const auto& t : p.terms()) {
    int sign = 1;
    for (size_t i = 0; i < t.w.size(); ++i) {
      Letter l = t.w[i];
      int g = letter_gen(l);
      const NcPoly& dg = D.diff[g];
      if (!dg.is_zero() && !letter_inverse(l)) {
        NcPoly pre = NcPoly::term(t.c * sign, Word(t.w.begin(), t.w.begin() + i));
        NcPoly post = NcPoly::term(1, Word(t.w.begin() + i + 1, t.w.end()));
        out = out + pre * dg * post;
      }
      int deg = D.alg.gens[g].degree * (letter_inverse(l) ? -1 : 1);
      if (deg % 2 != 0) sign = -sign;
    }
  }
  return out;
}

struct DgaCheck {
  bool ok = true;
  std::vector<std::string> errors;
  void fail(std::string msg) {
    ok = false;
    errors.push_back(std::move(msg));
  }
};

// Structural gate: homogeneous differentials of degree -1, d^2 = 0,
// invertible generators closed and of even degree.
inline DgaCheck check_dga(const Dga& D) {
  DgaCheck r;
  for (int g = 0; g < D.alg.size(); ++g) {
    const GenInfo& gi = D.alg.gens[g];
    if (gi.invertible) {
      if (!D.diff[g].is_zero()) r.fail("basepoint " + gi.name + " has nonzero differential");
      if (gi.degree % 2 != 0) r.fail("basepoint " + gi.name + " has odd degree");
      continue;
    }
    if (!D.diff[g].is_zero()) {
      auto hd = D.diff[g].homogeneous_degree(D.alg);
      if (!hd)
        r.fail("d " + gi.name + " is not homogeneous");
      else if (*hd != gi.degree - 1)
        r.fail("d " + gi.name + " has degree " + std::to_string(*hd) +
               ", expected " + std::to_string(gi.degree - 1));
    }
    if (!apply_diff(D, D.diff[g]).is_zero()) r.fail("d^2 " + gi.name + " != 0");
  }
  for (const auto& comp : D.components)
    for (int id : comp)
      if (!D.alg.gens[id].invertible) r.fail("component lists non-basepoint generator");
  return r;
}

// Chord degree multiset (basepoints excluded).
inline std::map<int, long long> degree_distribution(const Dga& D) {
  std::map<int, long long> m;
  for (int g : D.chord_ids()) ++m[D.alg.gens[g].degree];
  return m;
}

// Substitute each occurrence of generator `id` by `pos` and of its inverse by
// `neg` throughout all differentials.
inline void substitute_gen(Dga& D, int id, const NcPoly& pos, const NcPoly& neg) {
  for (auto& dp : D.diff) {
    NcPoly out;
    for (const auto& t : dp.terms()) {
      NcPoly acc = NcPoly::constant(t.c);
      for (Letter l : t.w) {
        if (letter_gen(l) == id)
          acc = acc * (letter_inverse(l) ? neg : pos);
        else
          acc = acc * NcPoly::gen(letter_gen(l), letter_inverse(l));
      }
      out = out + acc;
    }
    dp = out;
  }
}

// Algebraic stabilization in degree k: adjoin a (deg k) and b (deg k-1) with
// d a = b.
inline void stabilize(Dga& D, int k, const std::string& suffix = "") {
  int a = D.add_chord("stab_a" + suffix, k);
  int b = D.add_chord("stab_b" + suffix, k - 1);
  D.set_diff(a, NcPoly::gen(b));
}

// Split the basepoint at position `pos` of component `comp` in two:
// t -> t * t_new, with t_new inserted after t in the component order.
inline int split_basepoint(Dga& D, int comp, int pos, const std::string& new_name) {
  int told = D.components[comp][pos];
  if (D.alg.gens[told].degree != 0)
    throw std::invalid_argument("split_basepoint: only degree-0 basepoints supported");
  int tnew = D.add_basepoint(new_name, 0);
  NcPoly prod = NcPoly::gen(told) * NcPoly::gen(tnew);
  NcPoly prod_inv = NcPoly::gen(tnew, true) * NcPoly::gen(told, true);
  substitute_gen(D, told, prod, prod_inv);
  D.components[comp].insert(D.components[comp].begin() + pos + 1, tnew);
  return tnew;
}

}  // namespace replab
