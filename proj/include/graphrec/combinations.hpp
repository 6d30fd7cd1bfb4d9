#pragma once

#include <vector>

namespace graphrec {

/// Calls fn(subset) for every k-subset of {0, ..., n-1} in lexicographic
/// order; stops early when fn returns false. Returns the number of subsets
/// visited.
template <typename Fn>
long long for_each_combination(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return 0;
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[i] = i;
  long long visited = 0;
  while (true) {
    ++visited;
    if (!fn(static_cast<const std::vector<int>&>(c))) return visited;
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return visited;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

/// Binomial coefficient as a double (exact for the small sizes used here).
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::vector<int> complement(int n, const std::vector<int>& subset) {
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (int v : subset) in[v] = 1;
  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if (!in[v]) out.push_back(v);
  return out;
}

}  // namespace graphrec
