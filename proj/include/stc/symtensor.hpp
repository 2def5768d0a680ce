#pragma once

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "stc/linalg.hpp"
#include "stc/multiindex.hpp"
#include "stc/scalar.hpp"

namespace stc {

// Dense symmetric tensor of rank k on an n-dimensional space, stored on the
// compressed basis of nondecreasing multi-indices.
template <class T>
struct SymTensor {
  int n = 0, k = 0;
  std::shared_ptr<const MITable> tab;
  std::vector<T> c;

  SymTensor() = default;
  SymTensor(int dim, int rank)
      : n(dim), k(rank), tab(mi_table(dim, rank)),
        c(tab->size(), scalar_traits<T>::zero()) {}

  int size() const { return int(c.size()); }

  const T& get(const MIdx& unsorted) const { return c[tab->position_unsorted(unsorted)]; }
  void set(const MIdx& unsorted, T v) { c[tab->position_unsorted(unsorted)] = std::move(v); }

  SymTensor& operator+=(const SymTensor& o) {
    check_shape(o);
    for (int i = 0; i < size(); ++i) c[i] = c[i] + o.c[i];
    return *this;
  }
  SymTensor& operator-=(const SymTensor& o) {
    check_shape(o);
    for (int i = 0; i < size(); ++i) c[i] = c[i] - o.c[i];
    return *this;
  }
  friend SymTensor operator+(SymTensor a, const SymTensor& b) { a += b; return a; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { a -= b; return a; }
  friend SymTensor operator*(const T& s, SymTensor a) {
    for (auto& v : a.c) v = s * v;
    return a;
  }

  void check_shape(const SymTensor& o) const {
    if (n != o.n || k != o.k) throw std::invalid_argument("tensor shape mismatch");
  }

  double max_abs() const {
    double m = 0;
    for (const auto& v : c) m = std::max(m, std::abs(to_double(v)));
    return m;
  }
};

template <class T>
SymTensor<T> sym_from_matrix(const Mat<T>& A) {
  SymTensor<T> t(A.n, 2);
  for (int i = 0; i < A.n; ++i)
    for (int j = i; j < A.n; ++j) t.set({i, j}, A(i, j));
  return t;
}

// Applies the matrix A to every slot: out_{i1..ik} = A_{i1 j1}..A_{ik jk} in_{j1..jk}.
// Works on the dense n^k expansion slot by slot when that fits in memory,
// falling back to the direct per-entry sum otherwise.
template <class T>
SymTensor<T> apply_all_slots(const SymTensor<T>& t, const Mat<T>& A) {
  if (t.k == 0 || A.is_identity()) return t;
  SymTensor<T> out(t.n, t.k);
  const int n = t.n, k = t.k;
  double fullsz = std::pow(double(n), k);
  if (fullsz <= 4e6) {
    const size_t N = size_t(fullsz + 0.5);
    std::vector<T> full(N, scalar_traits<T>::zero());
    std::vector<T> tmp(N, scalar_traits<T>::zero());
    MIdx dig(k, 0);
    for (size_t lin = 0; lin < N; ++lin) {
      full[lin] = t.c[t.tab->position_unsorted(dig)];
      int s = k - 1;
      while (s >= 0 && dig[s] == n - 1) dig[s--] = 0;
      if (s >= 0) ++dig[s];
    }
    size_t stride = 1;
    for (int s = k - 1; s >= 0; --s) {
      const size_t block = stride * n;
      for (size_t base = 0; base < N; base += block)
        for (size_t r = 0; r < stride; ++r) {
          const size_t o = base + r;
          for (int i = 0; i < n; ++i) {
            T acc = scalar_traits<T>::zero();
            for (int j = 0; j < n; ++j) acc = acc + A(i, j) * full[o + j * stride];
            tmp[o + i * stride] = acc;
          }
        }
      std::swap(full, tmp);
      stride *= n;
    }
    for (int pi = 0; pi < out.size(); ++pi) {
      const MIdx& I = t.tab->idx[pi];
      size_t lin = 0;
      for (int s = 0; s < k; ++s) lin = lin * n + I[s];
      out.c[pi] = full[lin];
    }
    return out;
  }
  MIdx j(k, 0);
  for (int pi = 0; pi < out.size(); ++pi) {
    const MIdx& I = t.tab->idx[pi];
    T acc = scalar_traits<T>::zero();
    std::fill(j.begin(), j.end(), 0);
    while (true) {
      T prod = t.c[t.tab->position_unsorted(j)];
      if (!is_zero(prod)) {
        for (int s = 0; s < k; ++s) prod = prod * A(I[s], j[s]);
        acc = acc + prod;
      }
      int s = k - 1;
      while (s >= 0 && j[s] == n - 1) { j[s] = 0; --s; }
      if (s < 0) break;
      ++j[s];
    }
    out.c[pi] = acc;
  }
  return out;
}

template <class T>
SymTensor<T> raise_all(const SymTensor<T>& t, const Metric<T>& h) {
  return h.identity ? t : apply_all_slots(t, h.ginv);
}

template <class T>
SymTensor<T> lower_all(const SymTensor<T>& t, const Metric<T>& h) {
  return h.identity ? t : apply_all_slots(t, h.g);
}

// Complete contraction over ordered index tuples.
template <class T>
T inner(const SymTensor<T>& a, const SymTensor<T>& b, const Metric<T>& h) {
  a.check_shape(b);
  SymTensor<T> ar = raise_all(a, h);
  T acc = scalar_traits<T>::zero();
  for (int i = 0; i < a.size(); ++i)
    acc = acc + scalar_traits<T>::from_long(long(a.tab->mult[i])) * ar.c[i] * b.c[i];
  return acc;
}

// Projection-normalized symmetric product: evaluates on the diagonal to the
// product of the evaluations.
template <class T>
SymTensor<T> sym_product(const SymTensor<T>& a, const SymTensor<T>& b) {
  if (a.n != b.n) throw std::invalid_argument("dimension mismatch");
  const int k = a.k, l = b.k, r = k + l;
  SymTensor<T> out(a.n, r);
  // enumerate position subsets of size k once
  std::vector<std::vector<int>> subsets;
  std::vector<int> comb(k);
  for (int i = 0; i < k; ++i) comb[i] = i;
  if (k == 0) subsets.push_back({});
  else
    while (true) {
      subsets.push_back(comb);
      int i = k - 1;
      while (i >= 0 && comb[i] == r - k + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
  T norm = scalar_traits<T>::from_long(long(binom(r, k)));
  MIdx ia(k), ib(l);
  for (int pi = 0; pi < out.size(); ++pi) {
    const MIdx& I = out.tab->idx[pi];
    T acc = scalar_traits<T>::zero();
    for (const auto& S : subsets) {
      int pa = 0, pb = 0, si = 0;
      for (int pos = 0; pos < r; ++pos) {
        if (si < k && S[si] == pos) ia[pa++] = I[pos], ++si;
        else ib[pb++] = I[pos];
      }
      acc = acc + a.get(ia) * b.get(ib);
    }
    out.c[pi] = acc / norm;
  }
  return out;
}

// Trace: contraction of two slots with the inverse metric.
template <class T>
SymTensor<T> trace(const SymTensor<T>& t, const Metric<T>& h) {
  if (t.k < 2) throw std::invalid_argument("trace needs rank >= 2");
  SymTensor<T> out(t.n, t.k - 2);
  MIdx full(t.k);
  for (int pi = 0; pi < out.size(); ++pi) {
    const MIdx& I = out.tab->idx[pi];
    std::copy(I.begin(), I.end(), full.begin() + 2);
    T acc = scalar_traits<T>::zero();
    for (int p = 0; p < t.n; ++p)
      for (int q = 0; q < t.n; ++q) {
        if (h.identity && p != q) continue;
        full[0] = p; full[1] = q;
        T g = h.identity ? scalar_traits<T>::from_long(1) : h.ginv(p, q);
        acc = acc + g * t.get(full);
      }
    out.c[pi] = acc;
  }
  return out;
}

template <class T>
SymTensor<T> met(const SymTensor<T>& t, const Metric<T>& h) {
  return sym_product(sym_from_matrix(h.g), t);
}

// Iterated trace, i-fold.
template <class T>
SymTensor<T> trace_pow(SymTensor<T> t, const Metric<T>& h, int i) {
  for (int s = 0; s < i; ++s) t = trace(t, h);
  return t;
}

// Trace-free projection. Solves tr(met(psi)) = tr(t) for psi in S^{k-2} and
// subtracts met(psi); the complement of the pure-trace summand is found from
// the metric itself rather than from closed-form coefficients.
template <class T>
SymTensor<T> tf(const SymTensor<T>& t, const Metric<T>& h) {
  if (t.k < 2) return t;
  SymTensor<T> rhs = trace(t, h);
  const int m = rhs.size();
  Mat<T> L(m);
  for (int j = 0; j < m; ++j) {
    SymTensor<T> e(t.n, t.k - 2);
    e.c[j] = scalar_traits<T>::from_long(1);
    SymTensor<T> col = trace(met(e, h), h);
    for (int i = 0; i < m; ++i) L(i, j) = col.c[i];
  }
  std::vector<std::vector<T>> b{rhs.c};
  try {
    b = solve_linear(L, std::move(b));
  } catch (const std::domain_error&) {
    throw std::domain_error("trace-free projection degenerate for this metric");
  }
  SymTensor<T> psi(t.n, t.k - 2);
  psi.c = std::move(b[0]);
  return t - met(psi, h);
}

template <class T>
SymTensor<T> cartan_product(const SymTensor<T>& a, const SymTensor<T>& b, const Metric<T>& h) {
  return tf(sym_product(a, b), h);
}

// Contraction i(Z): Zup are contravariant components.
template <class T>
SymTensor<T> contract_vec(const SymTensor<T>& t, const std::vector<T>& Zup) {
  if (t.k < 1) throw std::invalid_argument("contract_vec needs rank >= 1");
  SymTensor<T> out(t.n, t.k - 1);
  MIdx full(t.k);
  for (int pi = 0; pi < out.size(); ++pi) {
    const MIdx& I = out.tab->idx[pi];
    std::copy(I.begin(), I.end(), full.begin() + 1);
    T acc = scalar_traits<T>::zero();
    for (int p = 0; p < t.n; ++p) {
      full[0] = p;
      acc = acc + Zup[p] * t.get(full);
    }
    out.c[pi] = acc;
  }
  return out;
}

// Two-group tensor, symmetric within each group; used as an intermediate for
// partial contractions before full symmetrization.
template <class T>
struct BiSym {
  int n = 0, r1 = 0, r2 = 0;
  std::shared_ptr<const MITable> tab1, tab2;
  std::vector<T> c;

  BiSym() = default;
  BiSym(int dim, int ra, int rb)
      : n(dim), r1(ra), r2(rb), tab1(mi_table(dim, ra)), tab2(mi_table(dim, rb)),
        c(size_t(tab1->size()) * tab2->size(), scalar_traits<T>::zero()) {}

  T& at(int i1, int i2) { return c[size_t(i1) * tab2->size() + i2]; }
  const T& at(int i1, int i2) const { return c[size_t(i1) * tab2->size() + i2]; }
};

// R_{(U)(V)} = a_{U P} b_{V}{}^{P}, contracting m slots with the metric.
template <class T>
BiSym<T> contract_bisym(const SymTensor<T>& a, const SymTensor<T>& b, int m,
                        const Metric<T>& h) {
  if (a.n != b.n || a.k < m || b.k < m) throw std::invalid_argument("bad contraction");
  const int r1 = a.k - m, r2 = b.k - m;
  BiSym<T> out(a.n, r1, r2);
  SymTensor<T> br = raise_all(b, h);
  auto ptab = mi_table(a.n, m);
  MIdx ia(a.k), ib(b.k);
  for (int u = 0; u < out.tab1->size(); ++u) {
    const MIdx& U = out.tab1->idx[u];
    for (int v = 0; v < out.tab2->size(); ++v) {
      const MIdx& V = out.tab2->idx[v];
      T acc = scalar_traits<T>::zero();
      for (int p = 0; p < ptab->size(); ++p) {
        const MIdx& P = ptab->idx[p];
        std::copy(U.begin(), U.end(), ia.begin());
        std::copy(P.begin(), P.end(), ia.begin() + r1);
        std::copy(V.begin(), V.end(), ib.begin());
        std::copy(P.begin(), P.end(), ib.begin() + r2);
        T term = a.get(ia) * br.get(ib);
        if (!is_zero(term))
          acc = acc + scalar_traits<T>::from_long(long(ptab->mult[p])) * term;
      }
      out.at(u, v) = acc;
    }
  }
  if (!h.identity && r2 > 0) {
    // the V block was raised along with the contracted slots; lower it back
    for (int u = 0; u < out.tab1->size(); ++u) {
      SymTensor<T> row(a.n, r2);
      for (int v = 0; v < out.tab2->size(); ++v) row.c[v] = out.at(u, v);
      row = apply_all_slots(row, h.g);
      for (int v = 0; v < out.tab2->size(); ++v) out.at(u, v) = row.c[v];
    }
  }
  return out;
}

// Full symmetrization of a BiSym into S^{r1+r2}.
template <class T>
SymTensor<T> symmetrize(const BiSym<T>& B) {
  const int r = B.r1 + B.r2;
  SymTensor<T> out(B.n, r);
  std::vector<std::vector<int>> subsets;
  std::vector<int> comb(B.r1);
  for (int i = 0; i < B.r1; ++i) comb[i] = i;
  if (B.r1 == 0) subsets.push_back({});
  else
    while (true) {
      subsets.push_back(comb);
      int i = B.r1 - 1;
      while (i >= 0 && comb[i] == r - B.r1 + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < B.r1; ++j) comb[j] = comb[j - 1] + 1;
    }
  T norm = scalar_traits<T>::from_long(long(binom(r, B.r1)));
  MIdx u(B.r1), v(B.r2);
  for (int pi = 0; pi < out.size(); ++pi) {
    const MIdx& I = out.tab->idx[pi];
    T acc = scalar_traits<T>::zero();
    for (const auto& S : subsets) {
      int pu = 0, pv = 0, si = 0;
      for (int pos = 0; pos < r; ++pos) {
        if (si < int(S.size()) && S[si] == pos) u[pu++] = I[pos], ++si;
        else v[pv++] = I[pos];
      }
      MIdx us = u, vs = v;
      std::sort(us.begin(), us.end());
      std::sort(vs.begin(), vs.end());
      acc = acc + B.at(B.tab1->position(us), B.tab2->position(vs));
    }
    out.c[pi] = acc / norm;
  }
  return out;
}

// Seeded random trace-free tensor with standard normal compressed entries
// before projection.
inline SymTensor<double> random_tracefree(int n, int k, std::mt19937_64& rng,
                                          const Metric<double>& h) {
  SymTensor<double> t(n, k);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (auto& v : t.c) v = dist(rng);
  return tf(t, h);
}

}  // namespace stc
