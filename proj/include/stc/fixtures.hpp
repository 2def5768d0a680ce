#pragma once

#include <functional>
#include <string>

#include "stc/chart.hpp"
#include "stc/graph.hpp"
#include "stc/polynomial.hpp"

namespace stc {

// ---------------------------------------------------------------------------
// Isoparametric polynomial fixtures
// ---------------------------------------------------------------------------

// Cartan's cubic on R^5, coordinates (x, y, z, v, u):
// F = u^3 - 3 u v^2 + (3/2) u (x^2 + y^2 - 2 z^2)
//     + (3 sqrt3 / 2) v (x^2 - y^2) + 3 sqrt3 x y z.
// Satisfies |dF|^2 = 9 E^2 and Lap F = 0 (certified at load by the callers).
inline Polynomial<Q3> cartan_cubic() {
  Polynomial<Q3> p(5);
  auto t = [&](int a, int b, int c, int d, int e, Q3 v) {
    p.add_term({a, b, c, d, e}, v);
  };
  Q3 th(Rat(3) / 2);
  t(0, 0, 0, 0, 3, Q3(1));
  t(0, 0, 0, 2, 1, Q3(-3));
  t(2, 0, 0, 0, 1, th);
  t(0, 2, 0, 0, 1, th);
  t(0, 0, 2, 0, 1, Q3(-3));
  t(2, 0, 0, 1, 0, Q3::sqrt3(Rat(3) / 2));
  t(0, 2, 0, 1, 0, Q3::sqrt3(Rat(-3) / 2));
  t(1, 1, 1, 0, 0, Q3::sqrt3(Rat(3)));
  return p;
}

// Degree-4 isoparametric polynomial of Clifford type on R^8 = R^4 x R^4,
// with x = (u, v):
// P = (|u|^2 + |v|^2)^2 - 2 (|u|^2 - |v|^2)^2 - 8 <u, v>^2,
// multiplicities (m1, m2) = (1, 2).
inline Polynomial<Rat> clifford_quartic() {
  const int n = 8;
  Polynomial<Rat> nu(n), nv(n), uv(n);
  for (int i = 0; i < 4; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 2;
    nu.add_term(e, Rat(1));
    std::vector<int> f(n, 0);
    f[i + 4] = 2;
    nv.add_term(f, Rat(1));
    std::vector<int> g(n, 0);
    g[i] = 1;
    g[i + 4] = 1;
    uv.add_term(g, Rat(1));
  }
  Polynomial<Rat> s = nu + nv, d = nu - nv;
  return s * s - Rat(2) * (d * d) - Rat(8) * (uv * uv);
}

// ---------------------------------------------------------------------------
// Regular-graph edge lists
// ---------------------------------------------------------------------------

inline std::string k4_edges() {
  return "# complete graph on 4 vertices\n"
         "1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
}

inline std::string petersen_edges() {
  return "# Petersen graph: outer 5-cycle, spokes, inner pentagram\n"
         "1 2\n2 3\n3 4\n4 5\n5 1\n"
         "1 6\n2 7\n3 8\n4 9\n5 10\n"
         "6 8\n8 10\n10 7\n7 9\n9 6\n";
}

// ---------------------------------------------------------------------------
// Hypersurface immersions into round spheres
// ---------------------------------------------------------------------------

// Immersion of an n-manifold into the unit sphere S^{n+1} in R^{n+2}.
struct Immersion {
  int n = 0;                                   // hypersurface dimension
  int ambient = 0;                             // n + 2
  double scal_ambient = 0;                     // scalar curvature of S^{n+1}
  std::function<Vec(const Vec&)> f;            // chart point -> R^{n+2}
  Vec base;                                    // sample-domain center
  double radius = 0.4;                         // sample-domain half width
};

inline Immersion clifford_torus() {
  Immersion im;
  im.n = 2;
  im.ambient = 4;
  im.scal_ambient = 3.0 * 2.0;  // unit S^3
  double r = 1.0 / std::sqrt(2.0);
  im.f = [r](const Vec& x) {
    return Vec{r * std::cos(x[0]), r * std::sin(x[0]),
               r * std::cos(x[1]), r * std::sin(x[1])};
  };
  im.base = {0.3, 0.7};
  return im;
}

// Minimal S^2(sqrt(2/3)) x S^1(sqrt(1/3)) in the unit S^4.
inline Immersion sphere_circle_torus() {
  Immersion im;
  im.n = 3;
  im.ambient = 5;
  im.scal_ambient = 4.0 * 3.0;  // unit S^4
  double r1 = std::sqrt(2.0 / 3.0), r2 = std::sqrt(1.0 / 3.0);
  im.f = [r1, r2](const Vec& x) {
    return Vec{r1 * std::sin(x[0]) * std::cos(x[1]),
               r1 * std::sin(x[0]) * std::sin(x[1]),
               r1 * std::cos(x[0]),
               r2 * std::cos(x[2]), r2 * std::sin(x[2])};
  };
  im.base = {1.1, 0.4, 0.6};
  return im;
}

// Totally geodesic equator S^n in S^{n+1} (here n = 2).
inline Immersion equator() {
  Immersion im;
  im.n = 2;
  im.ambient = 4;
  im.scal_ambient = 3.0 * 2.0;
  im.f = [](const Vec& x) {
    return Vec{std::sin(x[0]) * std::cos(x[1]),
               std::sin(x[0]) * std::sin(x[1]),
               std::cos(x[0]), 0.0};
  };
  im.base = {1.0, 0.5};
  return im;
}

inline Immersion make_immersion(const std::string& id) {
  if (id == "clifford-torus") return clifford_torus();
  if (id == "sphere-circle") return sphere_circle_torus();
  if (id == "equator") return equator();
  throw std::invalid_argument("unknown immersion fixture: " + id);
}

// ---------------------------------------------------------------------------
// Polynomial tensor fields on flat space (exact derivatives), used as kernel
// fixtures for the refined Kato suites.
// ---------------------------------------------------------------------------

struct PolyField {
  int n = 0, k = 0;
  PolyTensor<Rat> comp;  // components as polynomials

  SymTensor<double> eval(const Vec& x) const {
    SymTensor<double> t(n, k);
    for (int pi = 0; pi < t.size(); ++pi) t.c[pi] = comp.comp[pi].eval_double(x);
    return t;
  }

  Rank1Sym<double> deriv(const Vec& x) const {
    Rank1Sym<double> out(n, k);
    for (int i = 0; i < n; ++i)
      for (int pi = 0; pi < int(comp.comp.size()); ++pi)
        out.slot[i].c[pi] = comp.comp[pi].diff(i).eval_double(x);
    return out;
  }
};

// ker klie & ker div: k-th derivative tensor of a harmonic polynomial.
inline PolyField codazzi_field(int n, int k) {
  // harmonic polynomial of degree k + 2: Re/Im-style mixtures plus a
  // harmonic projection to be safe
  Polynomial<Rat> p(n);
  std::vector<int> e(n, 0);
  e[0] = k + 2;
  p.add_term(e, Rat(1));
  std::fill(e.begin(), e.end(), 0);
  e[0] = k;
  e[1] = 2;
  p.add_term(e, Rat(2));
  std::fill(e.begin(), e.end(), 0);
  e[0] = 1;
  e[1] = k + 1;
  p.add_term(e, Rat(1));
  auto parts = harmonic_decompose(p, k + 2);
  PolyField f;
  f.n = n;
  f.k = k;
  f.comp = deriv_tensor(parts[0], k);
  return f;
}

// ker clie & ker div on R^4: product of anticommuting rotation fields
// (k = 1 uses a single rotation field on R^n).
inline PolyField killing_field(int n, int k) {
  if (k == 1) {
    PolyField f;
    f.n = n;
    f.k = 1;
    f.comp.n = n;
    f.comp.k = 1;
    f.comp.tab = mi_table(n, 1);
    f.comp.comp.assign(n, Polynomial<Rat>(n));
    // om_i = (A x)_i with A the rotation in the (1,2) plane plus, when
    // available, the (3,4) plane
    f.comp.comp[0] = Rat(-1) * Polynomial<Rat>::variable(n, 1);
    f.comp.comp[1] = Polynomial<Rat>::variable(n, 0);
    if (n >= 4) {
      f.comp.comp[2] = Rat(-1) * Polynomial<Rat>::variable(n, 3);
      f.comp.comp[3] = Polynomial<Rat>::variable(n, 2);
    }
    return f;
  }
  if (k != 2 || n != 4)
    throw std::invalid_argument("killing fixture defined for k=1 or (k,n)=(2,4)");
  // alpha = J1 x, beta = J2 x with J1 J2 + J2 J1 = 0; om = alpha sym beta is
  // trace-free with vanishing clie and div
  auto var = [&](int i) { return Polynomial<Rat>::variable(4, i); };
  std::vector<Polynomial<Rat>> a{Rat(-1) * var(1), var(0), Rat(-1) * var(3), var(2)};
  std::vector<Polynomial<Rat>> b{Rat(-1) * var(2), var(3), var(0), Rat(-1) * var(1)};
  PolyField f;
  f.n = 4;
  f.k = 2;
  f.comp.n = 4;
  f.comp.k = 2;
  f.comp.tab = mi_table(4, 2);
  f.comp.comp.resize(f.comp.tab->size(), Polynomial<Rat>(4));
  for (int pi = 0; pi < f.comp.tab->size(); ++pi) {
    const MIdx& I = f.comp.tab->idx[pi];
    Polynomial<Rat> s = a[I[0]] * b[I[1]] + a[I[1]] * b[I[0]];
    f.comp.comp[pi] = Rat(1) / 2 * s;
  }
  return f;
}

// ker clie & ker klie: trace-free part of the k-th symmetric power of the
// position covector.
inline PolyField radial_field(int n, int k) {
  SymTensor<Rat> basis(n, k);
  Metric<Rat> id = Metric<Rat>::standard(n);
  PolyField f;
  f.n = n;
  f.k = k;
  f.comp.n = n;
  f.comp.k = k;
  f.comp.tab = mi_table(n, k);
  f.comp.comp.resize(f.comp.tab->size(), Polynomial<Rat>(n));
  // components of tf(x^{sym k}) as polynomials: project the monomial basis
  for (int j = 0; j < basis.size(); ++j) {
    SymTensor<Rat> e(n, k);
    e.c[j] = Rat(1);
    SymTensor<Rat> pe = tf(e, id);
    // (x^{sym k})_J = prod x_{J_s}
    Polynomial<Rat> mono(n);
    std::vector<int> exps(n, 0);
    for (int s : f.comp.tab->idx[j]) ++exps[s];
    mono.add_term(exps, Rat(1));
    for (int i = 0; i < basis.size(); ++i)
      if (!is_zero(pe.c[i])) f.comp.comp[i] = f.comp.comp[i] + pe.c[i] * mono;
  }
  return f;
}

}  // namespace stc
