#pragma once

#include <string>

#include "stc/curvtensor.hpp"
#include "stc/polynomial.hpp"
#include "stc/symtensor.hpp"

namespace stc {

// Compact Lie algebra given by structure constants with respect to a basis
// orthogonal for the Killing form; [e_i, e_j] = f_{ij}^p e_p.
struct LieAlgebra {
  std::string name;
  int dim = 0;
  std::vector<Q3> f;  // f[(i*dim + j)*dim + k], totally antisymmetric here

  Q3 fc(int i, int j, int k) const { return f[(size_t(i) * dim + j) * dim + k]; }
  void set_f(int i, int j, int k, const Q3& v) {
    // total antisymmetry of f_{ijk} for the bases used here
    int p[3] = {i, j, k};
    Q3 vals[2] = {v, -v};
    const int perm[6][4] = {{0, 1, 2, 0}, {1, 2, 0, 0}, {2, 0, 1, 0},
                            {1, 0, 2, 1}, {0, 2, 1, 1}, {2, 1, 0, 1}};
    for (const auto& pr : perm)
      f[(size_t(p[pr[0]]) * dim + p[pr[1]]) * dim + p[pr[2]]] = vals[pr[3]];
  }

  Mat<Q3> killing() const {
    // B_ij = tr(ad_i ad_j) = f_{ip}^q f_{jq}^p
    Mat<Q3> B(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        Q3 s;
        for (int p = 0; p < dim; ++p)
          for (int q = 0; q < dim; ++q) s += fc(i, p, q) * fc(j, q, p);
        B(i, j) = s;
      }
    return B;
  }

  double jacobi_residual() const {
    // [[e_i,e_j],e_k] + cyclic = 0
    double r = 0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
          for (int m = 0; m < dim; ++m) {
            Q3 s;
            for (int p = 0; p < dim; ++p)
              s += fc(i, j, p) * fc(p, k, m) + fc(j, k, p) * fc(p, i, m) +
                   fc(k, i, p) * fc(p, j, m);
            r = std::max(r, std::abs(to_double(s)));
          }
    return r;
  }
};

inline LieAlgebra su2() {
  LieAlgebra L;
  L.name = "su2";
  L.dim = 3;
  L.f.assign(27, Q3());
  L.set_f(0, 1, 2, Q3(1));
  return L;
}

inline LieAlgebra su3() {
  LieAlgebra L;
  L.name = "su3";
  L.dim = 8;
  L.f.assign(512, Q3());
  auto half = Q3(Rat(1) / 2);
  auto s32 = Q3::sqrt3(Rat(1) / 2);  // sqrt(3)/2
  L.set_f(0, 1, 2, Q3(1));
  L.set_f(0, 3, 6, half);
  L.set_f(0, 4, 5, -half);
  L.set_f(1, 3, 5, half);
  L.set_f(1, 4, 6, half);
  L.set_f(2, 3, 4, half);
  L.set_f(2, 5, 6, -half);
  L.set_f(3, 4, 7, s32);
  L.set_f(5, 6, 7, s32);
  return L;
}

// The symmetric invariant cubic of su(3) (the d-tensor), as an element of
// S^3 of the dual of the algebra.
inline SymTensor<Q3> su3_cubic() {
  SymTensor<Q3> d(8, 3);
  auto set = [&](int i, int j, int k, Q3 v) { d.set({i, j, k}, v); };
  Q3 half(Rat(1) / 2);
  Q3 is3 = Q3::sqrt3(Rat(1) / 3);      // 1/sqrt(3)
  Q3 mis32 = Q3::sqrt3(Rat(-1) / 6);   // -1/(2 sqrt(3))
  set(0, 0, 7, is3);
  set(1, 1, 7, is3);
  set(2, 2, 7, is3);
  set(7, 7, 7, -is3);
  set(3, 3, 7, mis32);
  set(4, 4, 7, mis32);
  set(5, 5, 7, mis32);
  set(6, 6, 7, mis32);
  set(0, 3, 5, half);
  set(0, 4, 6, half);
  set(1, 3, 6, -half);
  set(1, 4, 5, half);
  set(2, 3, 3, half);
  set(2, 4, 4, half);
  set(2, 5, 5, -half);
  set(2, 6, 6, -half);
  return d;
}

// Residual of ad-invariance of a symmetric tensor:
// sum_s f_{i I_s}^q om_{(I \ s) q} = 0 for all i, I.
inline double ad_invariance_residual(const LieAlgebra& L, const SymTensor<Q3>& om) {
  double r = 0;
  const int k = om.k;
  MIdx idx(k);
  for (int i = 0; i < L.dim; ++i)
    for (int pi = 0; pi < om.size(); ++pi) {
      const MIdx& I = om.tab->idx[pi];
      Q3 acc;
      for (int s = 0; s < k; ++s) {
        idx = I;
        for (int q = 0; q < L.dim; ++q) {
          Q3 c = L.fc(i, I[s], q);
          if (c.is_zero()) continue;
          idx[s] = q;
          acc += c * om.get(idx);
        }
      }
      r = std::max(r, std::abs(to_double(acc)));
    }
  return r;
}

// Curvature of the bi-invariant metric h = c * delta (c > 0):
// R_ijkl = -(c/4) f_{ij}^p f_{pk}^q delta_{ql}, in the convention for which the
// round sphere satisfies R = -(h wedge h).
inline CurvTensor<Q3> biinvariant_curvature(const LieAlgebra& L, const Q3& c) {
  Q3 m = -c / Q3(4);
  auto f = [&](int i, int j, int k, int l) {
    Q3 s;
    for (int p = 0; p < L.dim; ++p) s += L.fc(i, j, p) * L.fc(p, k, l);
    return m * s;
  };
  return project_mcurv<Q3>(L.dim, f);
}

}  // namespace stc
