#pragma once

#include "stc/symtensor.hpp"

namespace stc {

inline int pair_count(int n) { return n * (n - 1) / 2; }

// Index of the unordered pair {i, j}, i < j, in lex order.
inline int pair_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

inline std::pair<int, int> pair_unindex(int n, int p) {
  for (int i = 0; i < n; ++i) {
    int row = n - 1 - i;
    if (p < row) return {i, i + 1 + p};
    p -= row;
  }
  throw std::out_of_range("pair index");
}

// Tensor phi_{ij i1...i_{k-1}}, antisymmetric in the leading pair and
// symmetric in the trailing block; the target type of the K operator.
template <class T>
struct PreCod {
  int n = 0, ks = 0;  // ks = rank of the symmetric block
  std::vector<SymTensor<T>> block;  // one per pair index

  PreCod() = default;
  PreCod(int dim, int sym_rank) : n(dim), ks(sym_rank) {
    block.assign(pair_count(dim), SymTensor<T>(dim, sym_rank));
  }

  // Component with arbitrary (i, j); antisymmetry supplies the sign.
  T at(int i, int j, const MIdx& I) const {
    if (i == j) return scalar_traits<T>::zero();
    T v = block[pair_index(n, i, j)].get(I);
    return i < j ? v : -v;
  }

  PreCod& operator+=(const PreCod& o) {
    for (size_t p = 0; p < block.size(); ++p) block[p] += o.block[p];
    return *this;
  }
  PreCod& operator-=(const PreCod& o) {
    for (size_t p = 0; p < block.size(); ++p) block[p] -= o.block[p];
    return *this;
  }
  friend PreCod operator+(PreCod a, const PreCod& b) { a += b; return a; }
  friend PreCod operator-(PreCod a, const PreCod& b) { a -= b; return a; }
  friend PreCod operator*(const T& s, PreCod a) {
    for (auto& bl : a.block) bl = s * bl;
    return a;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& bl : block) m = std::max(m, bl.max_abs());
    return m;
  }
};

// Raises the antisymmetric pair of each block: phi^{ij}_{I}.
template <class T>
PreCod<T> raise_pair(const PreCod<T>& phi, const Metric<T>& h) {
  if (h.identity) return phi;
  PreCod<T> out(phi.n, phi.ks);
  for (int p = 0; p < pair_count(phi.n); ++p) {
    auto [i, j] = pair_unindex(phi.n, p);
    SymTensor<T> acc(phi.n, phi.ks);
    for (int q = 0; q < pair_count(phi.n); ++q) {
      auto [a, b] = pair_unindex(phi.n, q);
      T w = h.ginv(i, a) * h.ginv(j, b) - h.ginv(i, b) * h.ginv(j, a);
      if (!is_zero(w)) acc += w * phi.block[q];
    }
    out.block[p] = acc;
  }
  return out;
}

// Complete contraction over ordered tuples, all k+1 slots.
template <class T>
T inner(const PreCod<T>& a, const PreCod<T>& b, const Metric<T>& h) {
  PreCod<T> ar = raise_pair(a, h);
  T acc = scalar_traits<T>::zero();
  for (int p = 0; p < pair_count(a.n); ++p)
    acc = acc + inner(ar.block[p], b.block[p], h);
  return scalar_traits<T>::from_long(2) * acc;
}

template <class T>
T norm2(const PreCod<T>& a, const Metric<T>& h) { return inner(a, a, h); }

// kcons-type contraction: out_i = om^{p P} phi_{i p P}.
template <class T>
std::vector<T> contract_sym(const PreCod<T>& phi, const SymTensor<T>& om,
                            const Metric<T>& h) {
  if (om.k != phi.ks + 1) throw std::invalid_argument("rank mismatch");
  SymTensor<T> omr = raise_all(om, h);
  auto ptab = mi_table(phi.n, phi.ks);
  std::vector<T> out(phi.n, scalar_traits<T>::zero());
  MIdx full(om.k);
  for (int i = 0; i < phi.n; ++i) {
    T acc = scalar_traits<T>::zero();
    for (int p = 0; p < phi.n; ++p) {
      if (p == i) continue;
      for (int pi = 0; pi < ptab->size(); ++pi) {
        const MIdx& P = ptab->idx[pi];
        full[0] = p;
        std::copy(P.begin(), P.end(), full.begin() + 1);
        T term = omr.get(full) * phi.at(i, p, P);
        if (!is_zero(term))
          acc = acc + scalar_traits<T>::from_long(long(ptab->mult[pi])) * term;
      }
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace stc
