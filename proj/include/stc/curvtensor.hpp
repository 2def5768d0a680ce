#pragma once

#include <functional>

#include "stc/precod.hpp"
#include "stc/symtensor.hpp"

namespace stc {

// Tensor with the algebraic symmetries of curvature: antisymmetric in the
// leading and trailing pairs, symmetric under pair exchange, first Bianchi
// identity. Stored as a symmetric matrix over antisymmetric pair indices;
// the Bianchi identity is enforced by construction/projection.
template <class T>
struct CurvTensor {
  int n = 0;
  int P = 0;
  std::vector<T> m;  // P x P, row major, kept symmetric

  CurvTensor() = default;
  explicit CurvTensor(int dim)
      : n(dim), P(pair_count(dim)), m(size_t(P) * P, scalar_traits<T>::zero()) {}

  T& pm(int p, int q) { return m[size_t(p) * P + q]; }
  const T& pm(int p, int q) const { return m[size_t(p) * P + q]; }

  T at(int i, int j, int k, int l) const {
    if (i == j || k == l) return scalar_traits<T>::zero();
    T v = pm(pair_index(n, i, j), pair_index(n, k, l));
    bool neg = (i > j) != (k > l);
    return neg ? -v : v;
  }

  CurvTensor& operator+=(const CurvTensor& o) {
    for (size_t i = 0; i < m.size(); ++i) m[i] = m[i] + o.m[i];
    return *this;
  }
  CurvTensor& operator-=(const CurvTensor& o) {
    for (size_t i = 0; i < m.size(); ++i) m[i] = m[i] - o.m[i];
    return *this;
  }
  friend CurvTensor operator+(CurvTensor a, const CurvTensor& b) { a += b; return a; }
  friend CurvTensor operator-(CurvTensor a, const CurvTensor& b) { a -= b; return a; }
  friend CurvTensor operator*(const T& s, CurvTensor a) {
    for (auto& v : a.m) v = s * v;
    return a;
  }

  double max_abs() const {
    double r = 0;
    for (const auto& v : m) r = std::max(r, std::abs(to_double(v)));
    return r;
  }
};

// Metric on the pair space: G2_{(ij)(ab)} = h_ia h_jb - h_ib h_ja (or with the
// inverse metric when inv is set).
template <class T>
std::vector<T> pair_space_matrix(const Metric<T>& h, bool inv) {
  const int n = h.dim(), P = pair_count(n);
  const Mat<T>& g = inv ? h.ginv : h.g;
  std::vector<T> G(size_t(P) * P);
  for (int p = 0; p < P; ++p) {
    auto [i, j] = pair_unindex(n, p);
    for (int q = 0; q < P; ++q) {
      auto [a, b] = pair_unindex(n, q);
      G[size_t(p) * P + q] = g(i, a) * g(j, b) - g(i, b) * g(j, a);
    }
  }
  return G;
}

// Complete contraction over ordered quadruples.
template <class T>
T inner(const CurvTensor<T>& Y, const CurvTensor<T>& Z, const Metric<T>& h) {
  const int P = Y.P;
  T acc = scalar_traits<T>::zero();
  if (h.identity) {
    for (size_t i = 0; i < Y.m.size(); ++i) acc = acc + Y.m[i] * Z.m[i];
  } else {
    auto G = pair_space_matrix(h, true);
    // Ysharp = G * Y * G
    std::vector<T> tmp(size_t(P) * P, scalar_traits<T>::zero());
    for (int p = 0; p < P; ++p)
      for (int q = 0; q < P; ++q) {
        T s = scalar_traits<T>::zero();
        for (int r = 0; r < P; ++r) s = s + G[size_t(p) * P + r] * Y.pm(r, q);
        tmp[size_t(p) * P + q] = s;
      }
    for (int p = 0; p < P; ++p)
      for (int q = 0; q < P; ++q) {
        T s = scalar_traits<T>::zero();
        for (int r = 0; r < P; ++r) s = s + tmp[size_t(p) * P + r] * G[size_t(r) * P + q];
        acc = acc + s * Z.pm(p, q);
      }
  }
  return scalar_traits<T>::from_long(4) * acc;
}

template <class T>
T norm2(const CurvTensor<T>& Y, const Metric<T>& h) { return inner(Y, Y, h); }

// Ricci-type trace: rictr(Y)_{ij} = Y_{pij}{}^{p}.
template <class T>
SymTensor<T> rictr(const CurvTensor<T>& Y, const Metric<T>& h) {
  SymTensor<T> out(Y.n, 2);
  for (int i = 0; i < Y.n; ++i)
    for (int j = i; j < Y.n; ++j) {
      T acc = scalar_traits<T>::zero();
      for (int p = 0; p < Y.n; ++p)
        for (int q = 0; q < Y.n; ++q) {
          if (h.identity && p != q) continue;
          T g = h.identity ? scalar_traits<T>::from_long(1) : h.ginv(p, q);
          T v = Y.at(p, i, j, q);
          if (!is_zero(v)) acc = acc + g * v;
        }
      out.set({i, j}, acc);
    }
  return out;
}

template <class T>
T scal(const CurvTensor<T>& Y, const Metric<T>& h) {
  SymTensor<T> r = rictr(Y, h);
  T acc = scalar_traits<T>::zero();
  for (int p = 0; p < Y.n; ++p)
    for (int q = 0; q < Y.n; ++q) {
      if (h.identity && p != q) continue;
      T g = h.identity ? scalar_traits<T>::from_long(1) : h.ginv(p, q);
      acc = acc + g * r.get({p, q});
    }
  return acc;
}

// Wedge of two symmetric rank-k tensors into the curvature symmetry class,
// contracting k-2 indices. Symmetric and bilinear in its arguments.
template <class T>
CurvTensor<T> kwedge(const SymTensor<T>& a, const SymTensor<T>& b, const Metric<T>& h);

// The unique curvature-type tensor with vanishing Weyl-type part whose
// Ricci-type trace is the given symmetric 2-tensor. Needs n >= 3.
template <class T>
CurvTensor<T> mcurv_from_ricci(const SymTensor<T>& r, const Metric<T>& h) {
  const int n = r.n;
  if (n < 3) throw std::invalid_argument("mcurv_from_ricci needs n >= 3");
  SymTensor<T> hh = sym_from_matrix(h.g);
  T trr = scalar_traits<T>::zero();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (h.identity && p != q) continue;
      T g = h.identity ? scalar_traits<T>::from_long(1) : h.ginv(p, q);
      trr = trr + g * r.get({p, q});
    }
  T c1 = scalar_traits<T>::from_ratio(-2, n - 2);
  T c2 = trr / scalar_traits<T>::from_long(long(n - 1) * (n - 2));
  return c1 * kwedge(r, hh, h) + c2 * kwedge(hh, hh, h);
}

template <class T>
CurvTensor<T> kwedge(const SymTensor<T>& a, const SymTensor<T>& b, const Metric<T>& h) {
  a.check_shape(b);
  const int k = a.k, n = a.n;
  if (k < 1) throw std::invalid_argument("kwedge needs rank >= 1");
  if (k == 1) return mcurv_from_ricci(sym_product(a, b), h);
  BiSym<T> B1 = contract_bisym(a, b, k - 2, h);
  BiSym<T> B2 = contract_bisym(b, a, k - 2, h);
  CurvTensor<T> Y(n);
  auto C = [&](int x, int y, int u, int v) {
    MIdx m1{std::min(x, y), std::max(x, y)}, m2{std::min(u, v), std::max(u, v)};
    int p1 = B1.tab1->position(m1), p2 = B1.tab2->position(m2);
    return (B1.at(p1, p2) + B2.at(p1, p2)) / scalar_traits<T>::from_long(2);
  };
  for (int p = 0; p < Y.P; ++p) {
    auto [i, j] = pair_unindex(n, p);
    for (int q = p; q < Y.P; ++q) {
      auto [kk, l] = pair_unindex(n, q);
      T v = C(i, kk, j, l) - C(j, kk, i, l);
      Y.pm(p, q) = v;
      Y.pm(q, p) = v;
    }
  }
  return Y;
}

// Weyl-type projection: the completely trace-free part within the symmetry class.
template <class T>
CurvTensor<T> tf_curv(const CurvTensor<T>& Y, const Metric<T>& h) {
  const int n = Y.n;
  if (n < 3) throw std::invalid_argument("tf_curv needs n >= 3");
  SymTensor<T> r = rictr(Y, h);
  T sc = scal(Y, h);
  SymTensor<T> hh = sym_from_matrix(h.g);
  T c1 = scalar_traits<T>::from_ratio(2, n - 2);
  T c2 = sc / scalar_traits<T>::from_long(long(n - 2) * (n - 1));
  return Y + c1 * kwedge(r, hh, h) - c2 * kwedge(hh, hh, h);
}

// Orthogonal projection of an arbitrary rank-4 array onto the curvature
// symmetry class: antisymmetrize both pairs, symmetrize pair exchange, then
// remove the cyclic (fully antisymmetric) part.
template <class T>
CurvTensor<T> project_mcurv(int n, const std::function<T(int, int, int, int)>& f) {
  CurvTensor<T> A(n);
  T quarter = scalar_traits<T>::from_ratio(1, 4);
  for (int p = 0; p < A.P; ++p) {
    auto [i, j] = pair_unindex(n, p);
    for (int q = p; q < A.P; ++q) {
      auto [k, l] = pair_unindex(n, q);
      T v1 = quarter * (f(i, j, k, l) - f(j, i, k, l) - f(i, j, l, k) + f(j, i, l, k));
      T v2 = quarter * (f(k, l, i, j) - f(l, k, i, j) - f(k, l, j, i) + f(l, k, j, i));
      T v = (v1 + v2) / scalar_traits<T>::from_long(2);
      A.pm(p, q) = v;
      A.pm(q, p) = v;
    }
  }
  // remove the cyclic part b(T)_{ijkl} = (T_{ijkl}+T_{jkil}+T_{kijl})/3
  CurvTensor<T> out(n);
  T third = scalar_traits<T>::from_ratio(1, 3);
  for (int p = 0; p < A.P; ++p) {
    auto [i, j] = pair_unindex(n, p);
    for (int q = p; q < A.P; ++q) {
      auto [k, l] = pair_unindex(n, q);
      T b = third * (A.at(i, j, k, l) + A.at(j, k, i, l) + A.at(k, i, j, l));
      T v = A.at(i, j, k, l) - b;
      out.pm(p, q) = v;
      out.pm(q, p) = v;
    }
  }
  return out;
}

// Curvature action on trace-free symmetric k-tensors:
// op_Y(om) = rictr(Y)_{p(i1} om_{i2...ik)}{}^{p}
//            + (1-k) Y_{p(i1 i2}{}^{q} om_{i3...ik)q}{}^{p}.
template <class T>
SymTensor<T> op_curv(const CurvTensor<T>& Y, const SymTensor<T>& om, const Metric<T>& h) {
  const int k = om.k, n = om.n;
  if (k < 1) throw std::invalid_argument("op_curv needs rank >= 1");
  SymTensor<T> r = rictr(Y, h);
  SymTensor<T> term1 = symmetrize(contract_bisym(r, om, 1, h));
  if (k == 1) return term1;
  SymTensor<T> omr = raise_all(om, h);
  BiSym<T> B(n, 2, k - 2);
  MIdx full(k);
  for (int u = 0; u < B.tab1->size(); ++u) {
    const MIdx& U = B.tab1->idx[u];  // (i1 <= i2)
    for (int v = 0; v < B.tab2->size(); ++v) {
      const MIdx& V = B.tab2->idx[v];
      std::copy(V.begin(), V.end(), full.begin());
      T acc = scalar_traits<T>::zero();
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          T y = Y.at(p, U[0], U[1], q);
          if (is_zero(y)) continue;
          full[k - 2] = q;
          full[k - 1] = p;
          acc = acc + y * omr.get(full);
        }
      B.at(u, v) = acc;
    }
  }
  if (!h.identity && k > 2) {
    for (int u = 0; u < B.tab1->size(); ++u) {
      SymTensor<T> row(n, k - 2);
      for (int v = 0; v < B.tab2->size(); ++v) row.c[v] = B.at(u, v);
      row = apply_all_slots(row, h.g);
      for (int v = 0; v < B.tab2->size(); ++v) B.at(u, v) = row.c[v];
    }
  }
  T c = scalar_traits<T>::from_long(1 - k);
  return term1 + c * symmetrize(B);
}

// Quadratic form q_Y(om) = <om, op_Y(om)>.
template <class T>
T q_curv(const CurvTensor<T>& Y, const SymTensor<T>& om, const Metric<T>& h) {
  return inner(om, op_curv(Y, om, h), h);
}

}  // namespace stc
