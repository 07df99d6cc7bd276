#pragma once

#include <cstdlib>
#include <map>
#include <stdexcept>

namespace replab {

using DegreeDist = std::map<int, long long>;  // degree -> chord count

// Signed count chi^k = sum_{l>=0} (-1)^l r_{k+l} + sum_{l<0} (-1)^{l+1} r_{k+l}.
inline long long chi_k(const DegreeDist& dist, int k) {
  long long s = 0;
  for (const auto& [deg, r] : dist) {
    int l = deg - k;
    int sign = (l % 2 == 0) ? 1 : -1;
    if (l < 0) sign = -sign;
    s += sign * r;
  }
  return s;
}

inline int mod_pos(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

// Degree d lands in the zero class mod m (m = 0 means d must vanish).
inline bool degree_zero_mod(long long d, int m) {
  return m == 0 ? d == 0 : mod_pos(static_cast<int>(d % m), m) == 0;
}

// sigma_m in closed form.
inline long long sigma_m_closed(const DegreeDist& dist, int m) {
  if (m < 0) throw std::invalid_argument("sigma_m: m >= 0");
  if (m == 0) return chi_k(dist, 0);
  long long s = 0;
  if (m % 2 == 0) {
    // sum_k (2k+1) s_k with s_k = sum_{l=0}^{m-1} (-1)^l r_{mk+l}
    if (dist.empty()) return 0;
    int lo = dist.begin()->first, hi = dist.rbegin()->first;
    int kmin = lo >= 0 ? lo / m : -((-lo + m - 1) / m);
    int kmax = hi >= 0 ? hi / m : -((-hi + m - 1) / m);
    for (int k = kmin - 1; k <= kmax + 1; ++k) {
      long long sk = 0;
      for (int l = 0; l < m; ++l) {
        auto it = dist.find(m * k + l);
        if (it != dist.end()) sk += (l % 2 == 0 ? 1 : -1) * it->second;
      }
      s += (2LL * k + 1) * sk;
    }
  } else {
    for (const auto& [deg, r] : dist)
      s += (mod_pos(deg, m) % 2 == 0 ? 1 : -1) * r;
  }
  return s;
}

// sigma_m as the stabilized partial sum of chi^k over k = 0 (mod m).
inline long long sigma_m_partial(const DegreeDist& dist, int m) {
  if (m == 0) return chi_k(dist, 0);
  int span = 1;
  if (!dist.empty())
    span = std::max(std::abs(dist.begin()->first), std::abs(dist.rbegin()->first)) + 1;
  int N = (span + m + 2) * m;
  long long s = chi_k(dist, 0);
  for (int k = m; k <= N; k += m) s += chi_k(dist, k) + chi_k(dist, -k);
  return s;
}

inline long long sigma_m(const DegreeDist& dist, int m) { return sigma_m_closed(dist, m); }

// nu^r_m = sum_{l=0}^{m-1} (-1)^l |{chords with deg = r + l (mod 2m)}| (odd m).
inline long long nu_r_m(const DegreeDist& dist, int m, int r) {
  long long s = 0;
  for (const auto& [deg, cnt] : dist)
    for (int l = 0; l < m; ++l)
      if (mod_pos(deg - r - l, 2 * m) == 0) s += (l % 2 == 0 ? 1 : -1) * cnt;
  return s;
}

}  // namespace replab
