#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace replab {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline std::string rat_str(const Rat& r) { return r.str(); }

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

inline Rat rat_pow(const Rat& base, long long e) {
  Rat b = base, r = 1;
  if (e < 0) { b = 1 / b; e = -e; }
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

}  // namespace replab
