#pragma once

#include <cstdint>
#include <vector>

#include "srlab/common.hpp"

namespace srlab {

// C(n, k) saturating at cap+1 so callers can test "too many" without overflow.
inline std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // r fits because we saturate before it can overflow at desk scales
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    if (r > cap) return cap + 1;
  }
  return r;
}

// rank -> k-subset of {0..n-1} in lexicographic order. rank 0 is {0,1,..,k-1}.
inline void unrank_combination(std::uint64_t rank, int n, int k, std::vector<int>& out) {
  out.clear();
  out.reserve(k);
  int a = 0;
  for (int slot = 0; slot < k; ++slot) {
    for (int c = a; c <= n - (k - slot); ++c) {
      const std::uint64_t block = binomial_capped(n - c - 1, k - slot - 1, UINT64_MAX - 2);
      if (rank < block) {
        out.push_back(c);
        a = c + 1;
        break;
      }
      rank -= block;
    }
  }
}

// Serial lexicographic enumeration; f receives the subset as a const ref.
template <class F>
void for_each_combination(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  std::vector<int> s(k);
  for (int i = 0; i < k; ++i) s[i] = i;
  while (true) {
    f(static_cast<const std::vector<int>&>(s));
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i) --i;
    if (i < 0) return;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

}  // namespace srlab
