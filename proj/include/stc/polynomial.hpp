#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "stc/linalg.hpp"
#include "stc/scalar.hpp"
#include "stc/symtensor.hpp"

namespace stc {

// Sparse multivariate polynomial; exponent vectors of fixed length n.
template <class T>
struct Polynomial {
  int n = 0;
  std::map<std::vector<int>, T> terms;

  Polynomial() = default;
  explicit Polynomial(int vars) : n(vars) {}

  static Polynomial constant(int vars, T v) {
    Polynomial p(vars);
    if (!is_zero(v)) p.terms[std::vector<int>(vars, 0)] = std::move(v);
    return p;
  }
  static Polynomial variable(int vars, int i) {
    Polynomial p(vars);
    std::vector<int> e(vars, 0);
    e[i] = 1;
    p.terms[e] = scalar_traits<T>::from_long(1);
    return p;
  }

  void add_term(std::vector<int> e, T v) {
    auto it = terms.find(e);
    if (it == terms.end()) {
      if (!is_zero(v)) terms.emplace(std::move(e), std::move(v));
    } else {
      it->second = it->second + v;
      if (is_zero(it->second)) terms.erase(it);
    }
  }

  bool is_zero_poly() const { return terms.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [e, v] : terms) {
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  bool homogeneous(int g) const {
    for (const auto& [e, v] : terms) {
      int s = 0;
      for (int x : e) s += x;
      if (s != g) return false;
    }
    return true;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (const auto& [e, v] : b.terms) r.add_term(e, v);
    return r;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (const auto& [e, v] : b.terms) r.add_term(e, -v);
    return r;
  }
  friend Polynomial operator*(const T& s, const Polynomial& a) {
    Polynomial r(a.n);
    if (is_zero(s)) return r;
    for (const auto& [e, v] : a.terms) r.terms[e] = s * v;
    return r;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r(a.n);
    std::vector<int> e(a.n);
    for (const auto& [ea, va] : a.terms)
      for (const auto& [eb, vb] : b.terms) {
        for (int i = 0; i < a.n; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, va * vb);
      }
    return r;
  }

  Polynomial diff(int i) const {
    Polynomial r(n);
    for (const auto& [e, v] : terms) {
      if (e[i] == 0) continue;
      std::vector<int> e2 = e;
      --e2[i];
      r.add_term(e2, scalar_traits<T>::from_long(e[i]) * v);
    }
    return r;
  }

  T eval(const std::vector<T>& x) const {
    T acc = scalar_traits<T>::zero();
    for (const auto& [e, v] : terms) {
      T t = v;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < e[i]; ++j) t = t * x[i];
      acc = acc + t;
    }
    return acc;
  }

  double eval_double(const std::vector<double>& x) const {
    double acc = 0;
    for (const auto& [e, v] : terms) {
      double t = to_double(v);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < e[i]; ++j) t *= x[i];
      acc += t;
    }
    return acc;
  }
};

template <class T>
Polynomial<T> poly_E(int n) {
  Polynomial<T> p(n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 2;
    p.terms[e] = scalar_traits<T>::from_long(1);
  }
  return p;
}

template <class T>
Polynomial<T> laplacian(const Polynomial<T>& p, const Metric<T>& h) {
  Polynomial<T> r(p.n);
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j) {
      if (h.identity && i != j) continue;
      T g = h.identity ? scalar_traits<T>::from_long(1) : h.ginv(i, j);
      r = r + g * p.diff(i).diff(j);
    }
  return r;
}

template <class T>
Polynomial<T> grad_norm2(const Polynomial<T>& p, const Metric<T>& h) {
  std::vector<Polynomial<T>> d;
  for (int i = 0; i < p.n; ++i) d.push_back(p.diff(i));
  Polynomial<T> r(p.n);
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j) {
      if (h.identity && i != j) continue;
      T g = h.identity ? scalar_traits<T>::from_long(1) : h.ginv(i, j);
      r = r + g * (d[i] * d[j]);
    }
  return r;
}

// Symmetric tensor of m-th partial derivatives; entries are polynomials.
template <class T>
struct PolyTensor {
  int n = 0, k = 0;
  std::shared_ptr<const MITable> tab;
  std::vector<Polynomial<T>> comp;
};

template <class T>
PolyTensor<T> deriv_tensor(const Polynomial<T>& p, int m) {
  PolyTensor<T> out;
  out.n = p.n;
  out.k = m;
  out.tab = mi_table(p.n, m);
  out.comp.resize(out.tab->size(), Polynomial<T>(p.n));
  for (int pi = 0; pi < out.tab->size(); ++pi) {
    Polynomial<T> q = p;
    for (int s : out.tab->idx[pi]) q = q.diff(s);
    out.comp[pi] = q;
  }
  return out;
}

// |D^(m) P|^2 over ordered tuples, Euclidean metric.
template <class T>
Polynomial<T> poly_tensor_norm2(const PolyTensor<T>& t) {
  Polynomial<T> r(t.n);
  for (int pi = 0; pi < t.tab->size(); ++pi)
    r = r + scalar_traits<T>::from_long(long(t.tab->mult[pi])) * (t.comp[pi] * t.comp[pi]);
  return r;
}

// A constant PolyTensor as a SymTensor.
template <class T>
SymTensor<T> poly_tensor_constant(const PolyTensor<T>& t) {
  SymTensor<T> out(t.n, t.k);
  std::vector<int> zero(t.n, 0);
  for (int pi = 0; pi < t.tab->size(); ++pi) {
    const auto& terms = t.comp[pi].terms;
    for (const auto& [e, v] : terms)
      if (e != zero) throw std::invalid_argument("tensor is not constant");
    auto it = terms.find(zero);
    if (it != terms.end()) out.c[pi] = it->second;
  }
  return out;
}

// Coefficients of a homogeneous degree-k polynomial as a symmetric tensor
// with P(x) = om(x, ..., x).
template <class T>
SymTensor<T> polarize(const Polynomial<T>& p, int k) {
  if (!p.homogeneous(k)) throw std::invalid_argument("polarize needs homogeneity");
  SymTensor<T> out(p.n, k);
  for (const auto& [e, v] : p.terms) {
    MIdx m;
    for (int i = 0; i < p.n; ++i)
      for (int j = 0; j < e[i]; ++j) m.push_back(i);
    int pos = out.tab->position(m);
    out.c[pos] = v / scalar_traits<T>::from_long(long(out.tab->mult[pos]));
  }
  return out;
}

template <class T>
Polynomial<T> depolarize(const SymTensor<T>& om) {
  Polynomial<T> p(om.n);
  for (int pi = 0; pi < om.size(); ++pi) {
    if (is_zero(om.c[pi])) continue;
    std::vector<int> e(om.n, 0);
    for (int s : om.tab->idx[pi]) ++e[s];
    p.add_term(e, scalar_traits<T>::from_long(long(om.tab->mult[pi])) * om.c[pi]);
  }
  return p;
}

// Decomposition P = sum_i E^i Q_i with each Q_i harmonic (Euclidean metric).
template <class T>
std::vector<Polynomial<T>> harmonic_decompose(const Polynomial<T>& p, int g) {
  if (!p.homogeneous(g)) throw std::invalid_argument("harmonic_decompose needs homogeneity");
  const int n = p.n;
  Metric<T> id = Metric<T>::standard(n);
  std::vector<Polynomial<T>> out;
  Polynomial<T> cur = p;
  Polynomial<T> E = poly_E<T>(n);
  int deg = g;
  while (true) {
    if (cur.is_zero_poly()) {
      out.push_back(Polynomial<T>(n));
      if (deg < 2) break;
      deg -= 2;
      continue;
    }
    // harmonic projection Q = sum_s c_s E^s Lap^s cur. Writing
    // cur = sum_j E^j Q_{deg-2j} with Q_m harmonic and using
    // Lap(E^a Q_m) = 2a(n + 2(a-1) + 2m) E^{a-1} Q_m gives the triangular
    // system sum_{s<=j} c_s a(j,s) = delta_{j0} with
    // a(j,s) = prod_{t<s} 2(j-t)(n + 2(deg - j - t - 1)).
    std::vector<Polynomial<T>> laps{cur};
    while (!laps.back().is_zero_poly()) laps.push_back(laplacian(laps.back(), id));
    const int S = int(laps.size()) - 1;  // laps[S] vanishes
    auto a = [&](int j, int s) {
      T v = scalar_traits<T>::from_long(1);
      for (int t = 0; t < s; ++t)
        v = v * scalar_traits<T>::from_long(2L * (j - t) *
                                            (n + 2L * (deg - j - t - 1)));
      return v;
    };
    std::vector<T> c(S, scalar_traits<T>::zero());
    c[0] = scalar_traits<T>::from_long(1);
    for (int j = 1; j < S; ++j) {
      T acc = scalar_traits<T>::zero();
      for (int s = 0; s < j; ++s) acc = acc + c[s] * a(j, s);
      T ajj = a(j, j);
      if (is_zero(ajj)) throw std::domain_error("degenerate harmonic projection");
      c[j] = -(acc / ajj);
    }
    // the complement cur - Q is divisible by E with quotient
    // rem = -sum_{s>=1} c_s E^{s-1} Lap^s cur
    Polynomial<T> Q = cur, rem(n);
    Polynomial<T> EsM1 = Polynomial<T>::constant(n, scalar_traits<T>::from_long(1));
    for (int s = 1; s < S; ++s) {
      Q = Q + c[s] * (EsM1 * E * laps[s]);
      rem = rem - c[s] * (EsM1 * laps[s]);
      EsM1 = EsM1 * E;
    }
    if constexpr (scalar_traits<T>::exact) {
      if (!laplacian(Q, id).is_zero_poly())
        throw std::domain_error("harmonic projection failed");
    }
    out.push_back(Q);
    if (deg < 2) break;
    cur = rem;
    deg -= 2;
  }
  return out;
}

}  // namespace stc
