#pragma once

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "replab/dga.hpp"

namespace replab {

// ---- built-in presentations ----

inline Dga builtin_knot(const std::string& name) {
  Dga D;
  D.name = name;
  D.rot = 0;
  if (name == "unknot") {
    D.note = "1-crossing Lagrangian presentation of the standard unknot";
    int b = D.add_chord("b", 1);
    int t = D.add_basepoint("t", 0);
    D.components = {{t}};
    D.set_diff(b, NcPoly::gen(t) + NcPoly::constant(1));
  } else if (name == "trefoil") {
    D.note = "5-chord presentation of the left-handed trefoil";
    int a1 = D.add_chord("a1", 0);
    D.add_chord("a2", 0);
    int a3 = D.add_chord("a3", 0);
    int a4 = D.add_chord("a4", 1);
    int a5 = D.add_chord("a5", 1);
    int t = D.add_basepoint("t", 0);
    D.components = {{t}};
    int a2 = a1 + 1;
    auto G = [](int id) { return NcPoly::gen(id); };
    D.set_diff(a4, NcPoly::gen(t, true) + G(a1) + G(a3) + G(a1) * G(a2) * G(a3));
    D.set_diff(a5, NcPoly::constant(1) - G(a1) - G(a3) - G(a3) * G(a2) * G(a1));
  } else if (name == "m52") {
    D.note = "9-chord presentation of the 5_2 knot mirror";
    int b = D.add_chord("b", -2);
    int c1 = D.add_chord("c1", 0);
    int c2 = D.add_chord("c2", 0);
    int c3 = D.add_chord("c3", 0);
    int e1 = D.add_chord("e1", 1);
    int e2 = D.add_chord("e2", 1);
    int e3 = D.add_chord("e3", 1);
    int e4 = D.add_chord("e4", 1);
    int a = D.add_chord("a", 2);
    int t = D.add_basepoint("t", 0);
    D.components = {{t}};
    auto G = [](int id) { return NcPoly::gen(id); };
    // d e1 = t + (-c3)(1 + b a), stored expanded
    D.set_diff(e1, G(t) - G(c3) - G(c3) * G(b) * G(a));
    D.set_diff(e2, NcPoly::constant(1) + G(c1) + G(a) * G(b) * G(c1));
    D.set_diff(e3, NcPoly::constant(1) + G(c1) * G(c2));
    D.set_diff(e4, NcPoly::constant(1) + G(c2) * G(c3));
  } else {
    throw std::invalid_argument("builtin_knot: unknown name " + name);
  }
  return D;
}

// ---- text format ----
//
//   knot <name>
//   rot <int>
//   gen <name> <deg>
//   inv <name> <deg>
//   component <inv-names...> initial <name>
//   d <gen> = <signed-term +/- signed-term ...>    terms like 2*a1*t^-1*a3
//   # comments

namespace detail {

inline std::vector<std::string> dga_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string t;
  while (is >> t) {
    if (t[0] == '#') break;
    out.push_back(t);
  }
  return out;
}

inline NcPoly parse_dga_term(const Dga& D, const std::string& text) {
  // [int *] factor [* factor ...], factor = name or name^-1
  long long coeff = 1;
  Word w;
  size_t i = 0;
  auto fail = [&](const std::string& m) {
    throw std::invalid_argument("parse_dga: bad term '" + text + "': " + m);
  };
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == '*') { parts.push_back(cur); cur.clear(); }
    else cur += c;
  }
  parts.push_back(cur);
  for (std::string part : parts) {
    if (part.empty()) fail("empty factor");
    if (std::isdigit(static_cast<unsigned char>(part[0])) ||
        (part[0] == '-' && part.size() > 1 && std::isdigit(static_cast<unsigned char>(part[1])))) {
      coeff *= std::stoll(part);
      continue;
    }
    if (part[0] == '-') {
      coeff = -coeff;
      part = part.substr(1);
      if (part.empty()) fail("dangling sign");
    }
    std::string gname = part;
    bool inverse = false;
    auto caret = part.find('^');
    if (caret != std::string::npos) {
      gname = part.substr(0, caret);
      std::string exp = part.substr(caret + 1);
      if (exp == "-1") inverse = true;
      else if (exp != "1") fail("only exponents 1 and -1 are supported");
    }
    int id = D.alg.find(gname);
    if (id < 0) fail("unknown generator " + gname);
    if (inverse && !D.alg.gens[id].invertible) fail(gname + " is not invertible");
    w.push_back(make_letter(id, inverse));
  }
  (void)i;
  return NcPoly::term(coeff, w);
}

inline NcPoly parse_dga_rhs(const Dga& D, const std::vector<std::string>& toks, size_t from) {
  NcPoly p;
  int sign = 1;
  bool expecting_term = true;
  for (size_t i = from; i < toks.size(); ++i) {
    const std::string& t = toks[i];
    if (t == "+" || t == "-") {
      if (expecting_term) throw std::invalid_argument("parse_dga: dangling sign");
      sign = (t == "-") ? -1 : 1;
      expecting_term = true;
    } else {
      if (!expecting_term) throw std::invalid_argument("parse_dga: missing +/- between terms");
      p = p + parse_dga_term(D, t).scaled(sign);
      sign = 1;
      expecting_term = false;
    }
  }
  if (expecting_term && from < toks.size())
    throw std::invalid_argument("parse_dga: trailing sign");
  return p;
}

}  // namespace detail

inline Dga parse_dga(const std::string& text) {
  Dga D;
  std::istringstream is(text);
  std::string line;
  std::vector<std::pair<int, std::vector<std::string>>> pending_diffs;
  while (std::getline(is, line)) {
    auto toks = detail::dga_tokens(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    if (kw == "knot") {
      if (toks.size() != 2) throw std::invalid_argument("parse_dga: knot wants one name");
      D.name = toks[1];
    } else if (kw == "rot") {
      D.rot = std::stoi(toks.at(1));
    } else if (kw == "gen" || kw == "inv") {
      if (toks.size() != 3) throw std::invalid_argument("parse_dga: " + kw + " wants name and degree");
      int deg = std::stoi(toks[2]);
      if (kw == "inv") {
        if (deg % 2 != 0)
          throw std::invalid_argument("parse_dga: invertible generator with odd degree");
        D.add_basepoint(toks[1], deg);
      } else {
        D.add_chord(toks[1], deg);
      }
    } else if (kw == "component") {
      auto init_kw = std::find(toks.begin(), toks.end(), "initial");
      if (init_kw == toks.end() || init_kw + 2 != toks.end())
        throw std::invalid_argument("parse_dga: component wants 'initial <name>'");
      std::vector<int> ids;
      for (auto it = toks.begin() + 1; it != init_kw; ++it) {
        int id = D.alg.find(*it);
        if (id < 0 || !D.alg.gens[id].invertible)
          throw std::invalid_argument("parse_dga: component member " + *it + " is not invertible");
        ids.push_back(id);
      }
      int init = D.alg.find(*(init_kw + 1));
      auto at = std::find(ids.begin(), ids.end(), init);
      if (at == ids.end()) throw std::invalid_argument("parse_dga: initial basepoint not in component");
      std::rotate(ids.begin(), at, ids.end());
      D.components.push_back(ids);
    } else if (kw == "d") {
      if (toks.size() < 4 || toks[2] != "=")
        throw std::invalid_argument("parse_dga: differential wants 'd <gen> = ...'");
      int id = D.alg.find(toks[1]);
      if (id < 0) throw std::invalid_argument("parse_dga: unknown generator " + toks[1]);
      pending_diffs.push_back({id, toks});
    } else {
      throw std::invalid_argument("parse_dga: unknown keyword " + kw);
    }
  }
  for (auto& [id, toks] : pending_diffs) {
    NcPoly p = (toks.size() == 4 && toks[3] == "0")
                   ? NcPoly::zero()
                   : detail::parse_dga_rhs(D, toks, 3);
    auto hd = p.homogeneous_degree(D.alg);
    if (!p.is_zero() && (!hd || *hd != D.alg.gens[id].degree - 1))
      throw std::invalid_argument("parse_dga: degree mismatch in d " + D.alg.gens[id].name);
    D.set_diff(id, std::move(p));
  }
  return D;
}

namespace detail {

// File rendering lists words that touch a basepoint letter first; round-trip
// equality is on canonical form, not on term order in the file.
inline std::string format_diff(const Algebra& A, const NcPoly& p) {
  if (p.is_zero()) return "0";
  std::vector<NcTerm> ordered;
  for (const auto& t : p.terms()) {
    bool base = false;
    for (Letter l : t.w)
      if (A.gens[letter_gen(l)].invertible) base = true;
    if (base) ordered.push_back(t);
  }
  for (const auto& t : p.terms()) {
    bool base = false;
    for (Letter l : t.w)
      if (A.gens[letter_gen(l)].invertible) base = true;
    if (!base) ordered.push_back(t);
  }
  std::string s;
  for (size_t i = 0; i < ordered.size(); ++i) {
    long long c = ordered[i].c;
    if (i == 0) {
      if (c < 0) { s += "-"; c = -c; }
    } else {
      s += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    }
    const Word& w = ordered[i].w;
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

}  // namespace detail

inline std::string serialize_dga(const Dga& D) {
  std::ostringstream os;
  os << "knot " << D.name << "\n";
  os << "rot " << D.rot << "\n";
  for (const auto& g : D.alg.gens)
    os << (g.invertible ? "inv " : "gen ") << g.name << " " << g.degree << "\n";
  for (const auto& comp : D.components) {
    os << "component";
    for (int id : comp) os << " " << D.alg.gens[id].name;
    os << " initial " << D.alg.gens[comp.front()].name << "\n";
  }
  for (int g = 0; g < D.alg.size(); ++g) {
    if (D.alg.gens[g].invertible) continue;
    os << "d " << D.alg.gens[g].name << " = " << detail::format_diff(D.alg, D.diff[g]) << "\n";
  }
  return os.str();
}

}  // namespace replab
