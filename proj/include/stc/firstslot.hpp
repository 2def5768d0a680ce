#pragma once

#include "stc/precod.hpp"
#include "stc/symtensor.hpp"

namespace stc {

// Tensor T_{i, i1...ik} with no symmetry between the leading slot and the
// symmetric block; the shape of a covariant derivative of a symmetric tensor.
template <class T>
struct Rank1Sym {
  int n = 0, k = 0;
  std::vector<SymTensor<T>> slot;  // slot[i] = T_{i, .}

  Rank1Sym() = default;
  Rank1Sym(int dim, int rank) : n(dim), k(rank) {
    slot.assign(dim, SymTensor<T>(dim, rank));
  }

  Rank1Sym& operator+=(const Rank1Sym& o) {
    for (int i = 0; i < n; ++i) slot[i] += o.slot[i];
    return *this;
  }
  Rank1Sym& operator-=(const Rank1Sym& o) {
    for (int i = 0; i < n; ++i) slot[i] -= o.slot[i];
    return *this;
  }
  friend Rank1Sym operator+(Rank1Sym a, const Rank1Sym& b) { a += b; return a; }
  friend Rank1Sym operator-(Rank1Sym a, const Rank1Sym& b) { a -= b; return a; }
  friend Rank1Sym operator*(const T& s, Rank1Sym a) {
    for (auto& t : a.slot) t = s * t;
    return a;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& t : slot) m = std::max(m, t.max_abs());
    return m;
  }
};

template <class T>
T inner(const Rank1Sym<T>& a, const Rank1Sym<T>& b, const Metric<T>& h) {
  T acc = scalar_traits<T>::zero();
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      if (h.identity && i != j) continue;
      T g = h.identity ? scalar_traits<T>::from_long(1) : h.ginv(i, j);
      acc = acc + g * inner(a.slot[i], b.slot[j], h);
    }
  return acc;
}

template <class T>
T norm2(const Rank1Sym<T>& a, const Metric<T>& h) { return inner(a, a, h); }

// div-type contraction: out_I = h^{pq} T_{p, q I}.
template <class T>
SymTensor<T> first_slot_div(const Rank1Sym<T>& t, const Metric<T>& h) {
  SymTensor<T> out(t.n, t.k - 1);
  MIdx full(t.k);
  for (int pi = 0; pi < out.size(); ++pi) {
    const MIdx& I = out.tab->idx[pi];
    std::copy(I.begin(), I.end(), full.begin() + 1);
    T acc = scalar_traits<T>::zero();
    for (int p = 0; p < t.n; ++p)
      for (int q = 0; q < t.n; ++q) {
        if (h.identity && p != q) continue;
        T g = h.identity ? scalar_traits<T>::from_long(1) : h.ginv(p, q);
        full[0] = q;
        acc = acc + g * t.slot[p].get(full);
      }
    out.c[pi] = acc;
  }
  return out;
}

// Full symmetrization over all k+1 indices.
template <class T>
SymTensor<T> first_slot_sym(const Rank1Sym<T>& t) {
  SymTensor<T> out(t.n, t.k + 1);
  MIdx rest(t.k);
  for (int pi = 0; pi < out.size(); ++pi) {
    const MIdx& I = out.tab->idx[pi];
    T acc = scalar_traits<T>::zero();
    for (int s = 0; s <= t.k; ++s) {
      int r = 0;
      for (int pos = 0; pos <= t.k; ++pos)
        if (pos != s) rest[r++] = I[pos];
      acc = acc + t.slot[I[s]].get(rest);
    }
    out.c[pi] = acc / scalar_traits<T>::from_long(t.k + 1);
  }
  return out;
}

// Conformal Killing part: tf-symmetrized derivative,
// L_I = sym(T) - (k/(n+2(k-1))) h odot div(T).
template <class T>
SymTensor<T> first_slot_clie(const Rank1Sym<T>& t, const Metric<T>& h) {
  SymTensor<T> s = first_slot_sym(t);
  if (t.k == 0) return s;
  T c = scalar_traits<T>::from_ratio(t.k, t.n + 2 * (t.k - 1));
  return s - c * met(first_slot_div(t, h), h);
}

// Codazzi-type part:
// K_{ij I} = T_{[i, j] I}
//            - (k-1)/(2(n+k-3)) ( h_{i(i1} d_{i2...ik-1)j} - h_{j(i1} d_{i2...ik-1)i} )
// with d = div(T).
template <class T>
PreCod<T> first_slot_klie(const Rank1Sym<T>& t, const Metric<T>& h) {
  const int n = t.n, k = t.k;
  PreCod<T> out(n, k - 1);
  SymTensor<T> d = (k >= 2) ? first_slot_div(t, h) : SymTensor<T>();
  T c = (k >= 2) ? scalar_traits<T>::from_ratio(k - 1, 2 * (n + k - 3))
                 : scalar_traits<T>::zero();
  auto tab = mi_table(n, k - 1);
  MIdx tupA(k), dIdx(k >= 2 ? k - 1 : 0);
  for (int p = 0; p < pair_count(n); ++p) {
    auto [i, j] = pair_unindex(n, p);
    SymTensor<T>& blk = out.block[p];
    for (int pi = 0; pi < tab->size(); ++pi) {
      const MIdx& I = tab->idx[pi];
      std::copy(I.begin(), I.end(), tupA.begin() + 1);
      tupA[0] = j;
      T v = t.slot[i].get(tupA);
      tupA[0] = i;
      v = v - t.slot[j].get(tupA);
      v = v / scalar_traits<T>::from_long(2);
      if (k >= 2) {
        // sym over I of h_{a I_s} d_{(I minus s) b}
        auto tterm = [&](int a, int b) {
          T acc = scalar_traits<T>::zero();
          for (int s = 0; s < k - 1; ++s) {
            int r = 0;
            for (int pos = 0; pos < k - 1; ++pos)
              if (pos != s) dIdx[r++] = I[pos];
            dIdx[k - 2] = b;
            acc = acc + h.g(a, I[s]) * d.get(dIdx);
          }
          return acc / scalar_traits<T>::from_long(k - 1);
        };
        v = v - c * (tterm(i, j) - tterm(j, i));
      }
      blk.c[pi] = v;
    }
  }
  return out;
}

// tlie: symmetrized K, tlie_{i,(J)} = (2k/(k+1)) K_{i(j J')}.
template <class T>
Rank1Sym<T> tlie_from_precod(const PreCod<T>& phi, int k) {
  const int n = phi.n;
  Rank1Sym<T> out(n, k);
  auto tab = mi_table(n, k);
  MIdx rest(k - 1);
  T c = scalar_traits<T>::from_ratio(2 * k, k + 1);
  for (int i = 0; i < n; ++i) {
    for (int pi = 0; pi < tab->size(); ++pi) {
      const MIdx& J = tab->idx[pi];
      T acc = scalar_traits<T>::zero();
      for (int s = 0; s < k; ++s) {
        int r = 0;
        for (int pos = 0; pos < k; ++pos)
          if (pos != s) rest[r++] = J[pos];
        acc = acc + phi.at(i, J[s], rest);
      }
      out.slot[i].c[pi] = c * (acc / scalar_traits<T>::from_long(k));
    }
  }
  return out;
}

// The embedding of S^{k-1}_0 into the first-slot space along the trace
// directions:
// ih(w)_{i i1...ik} = c1 h_{i(i1} w_{i2...ik)} + c2 h_{(i1 i2} w_{i3...ik)i}.
template <class T>
Rank1Sym<T> ih_map(const SymTensor<T>& w, const Metric<T>& h) {
  const int n = w.n, k = w.k + 1;
  T c1, c2;
  if (k == 1) {  // limiting case: (1/n) f h_ij
    c1 = scalar_traits<T>::from_ratio(1, n);
    c2 = scalar_traits<T>::zero();
  } else {
    long den = long(n + k - 3) * (n + 2 * (k - 1));
    c1 = scalar_traits<T>::from_ratio(long(k) * (n + 2 * (k - 2)), den);
    c2 = scalar_traits<T>::from_ratio(long(k) * (1 - k), den);
  }
  Rank1Sym<T> out(n, k);
  auto tab = mi_table(n, k);
  MIdx rest(k - 1);
  for (int i = 0; i < n; ++i) {
    for (int pi = 0; pi < tab->size(); ++pi) {
      const MIdx& I = tab->idx[pi];
      // term 1: sym over I, one index paired with h against i
      T t1 = scalar_traits<T>::zero();
      for (int s = 0; s < k; ++s) {
        int r = 0;
        for (int pos = 0; pos < k; ++pos)
          if (pos != s) rest[r++] = I[pos];
        t1 = t1 + h.g(i, I[s]) * w.get(rest);
      }
      t1 = t1 / scalar_traits<T>::from_long(k);
      T v = c1 * t1;
      if (k >= 2 && !is_zero(c2)) {
        // term 2: sym over I, two indices into h, i appended to w
        T t2 = scalar_traits<T>::zero();
        MIdx rest2(k - 1);
        for (int s = 0; s < k; ++s)
          for (int tpos = s + 1; tpos < k; ++tpos) {
            int r = 0;
            for (int pos = 0; pos < k; ++pos)
              if (pos != s && pos != tpos) rest2[r++] = I[pos];
            rest2[k - 2] = i;
            t2 = t2 + h.g(I[s], I[tpos]) * w.get(rest2);
          }
        t2 = t2 / scalar_traits<T>::from_long(long(k) * (k - 1) / 2);
        v = v + c2 * t2;
      }
      out.slot[i].c[pi] = v;
    }
  }
  return out;
}

// Decomposition of an arbitrary first-slot tensor with trace-free symmetric
// block: T = clie-part (symmetrized into slots) + tlie(K) + ih(div).
template <class T>
struct FirstSlotSplit {
  SymTensor<T> L;   // rank k+1, trace-free symmetric part
  PreCod<T> K;      // pair-antisymmetric part
  SymTensor<T> d;   // rank k-1 contraction
};

template <class T>
FirstSlotSplit<T> split_first_slot(const Rank1Sym<T>& t, const Metric<T>& h) {
  FirstSlotSplit<T> out;
  out.L = first_slot_clie(t, h);
  out.K = first_slot_klie(t, h);
  out.d = (t.k >= 1) ? first_slot_div(t, h) : SymTensor<T>();
  return out;
}

// Embeds the fully symmetric part back into first-slot shape.
template <class T>
Rank1Sym<T> embed_sym(const SymTensor<T>& s) {
  Rank1Sym<T> out(s.n, s.k - 1);
  auto tab = mi_table(s.n, s.k - 1);
  MIdx full(s.k);
  for (int i = 0; i < s.n; ++i)
    for (int pi = 0; pi < tab->size(); ++pi) {
      const MIdx& I = tab->idx[pi];
      full[0] = i;
      std::copy(I.begin(), I.end(), full.begin() + 1);
      out.slot[i].c[pi] = s.get(full);
    }
  return out;
}

}  // namespace stc
