#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <map>
#include <stdexcept>
#include <vector>

namespace stc {

// Nondecreasing multi-index of length k with entries in [0, n).
using MIdx = std::vector<int>;

inline long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Shared lookup table for the compressed basis of S^k on n dimensions.
// Positions follow the lex order of the sorted representatives and are
// computed by combinatorial ranking.
struct MITable {
  int n = 0, k = 0;
  std::vector<MIdx> idx;        // sorted representatives, lex order
  std::vector<long long> mult;  // number of distinct orderings
  // cnt[m][v]: nondecreasing sequences of length m with entries in [v, n)
  std::vector<std::vector<int>> cnt;

  int size() const { return int(idx.size()); }

  int position(const MIdx& sorted) const {
    int r = 0, prev = 0;
    for (int i = 0; i < k; ++i) {
      const auto& c = cnt[k - i - 1];
      for (int v = prev; v < sorted[i]; ++v) r += c[v];
      prev = sorted[i];
    }
    return r;
  }

  // full_pos[lin]: position of the tuple with linear code lin (base n),
  // precomputed when n^k is small enough.
  std::vector<int> full_pos;

  // Position of an arbitrarily ordered index tuple.
  int position_unsorted(const MIdx& m) const {
    if (!full_pos.empty()) {
      size_t lin = 0;
      for (int i = 0; i < k; ++i) lin = lin * n + m[i];
      return full_pos[lin];
    }
    int buf[16];
    for (int i = 0; i < k; ++i) buf[i] = m[i];
    for (int i = 1; i < k; ++i) {  // insertion sort, k is small
      int x = buf[i], j = i - 1;
      while (j >= 0 && buf[j] > x) { buf[j + 1] = buf[j]; --j; }
      buf[j + 1] = x;
    }
    int r = 0, prev = 0;
    for (int i = 0; i < k; ++i) {
      const auto& c = cnt[k - i - 1];
      for (int v = prev; v < buf[i]; ++v) r += c[v];
      prev = buf[i];
    }
    return r;
  }
};

inline std::shared_ptr<const MITable> mi_table(int n, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MITable>> cache;
  if (n < 1 || n > 15 || k < 0 || k > 15)
    throw std::invalid_argument("unsupported (dim, rank)");
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  auto tab = std::make_shared<MITable>();
  tab->n = n;
  tab->k = k;
  tab->cnt.resize(k);
  for (int m = 0; m < k; ++m) {
    tab->cnt[m].resize(n);
    for (int v = 0; v < n; ++v) tab->cnt[m][v] = int(binom(n - v + m - 1, m));
  }
  MIdx cur(k, 0);
  long long kfact = 1;
  for (int i = 2; i <= k; ++i) kfact *= i;
  while (true) {
    long long m = kfact;
    int run = 1;
    for (int i = 1; i < k; ++i) {
      if (cur[i] == cur[i - 1]) { ++run; m /= run; }
      else run = 1;
    }
    tab->idx.push_back(cur);
    tab->mult.push_back(m);
    // next nondecreasing tuple
    int i = k - 1;
    while (i >= 0 && cur[i] == n - 1) --i;
    if (i < 0) break;
    int v = cur[i] + 1;
    for (int j = i; j < k; ++j) cur[j] = v;
  }
  double fullsz = 1;
  for (int i = 0; i < k; ++i) fullsz *= n;
  if (k >= 1 && fullsz <= 4e6) {
    const size_t N = size_t(fullsz + 0.5);
    tab->full_pos.resize(N);
    MIdx dig(k, 0);
    int buf[16];
    for (size_t lin = 0; lin < N; ++lin) {
      for (int i = 0; i < k; ++i) buf[i] = dig[i];
      for (int i = 1; i < k; ++i) {
        int x = buf[i], j = i - 1;
        while (j >= 0 && buf[j] > x) { buf[j + 1] = buf[j]; --j; }
        buf[j + 1] = x;
      }
      int r = 0, prev = 0;
      for (int i = 0; i < k; ++i) {
        const auto& c = tab->cnt[k - i - 1];
        for (int v = prev; v < buf[i]; ++v) r += c[v];
        prev = buf[i];
      }
      tab->full_pos[lin] = r;
      int s = k - 1;
      while (s >= 0 && dig[s] == n - 1) dig[s--] = 0;
      if (s >= 0) ++dig[s];
    }
  }
  cache[key] = tab;
  return tab;
}

}  // namespace stc
