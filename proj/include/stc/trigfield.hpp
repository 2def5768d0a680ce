#pragma once

#include <cmath>
#include <random>

#include "stc/firstslot.hpp"
#include "stc/symtensor.hpp"

namespace stc {

// Band-limited trigonometric function on the 2 pi torus; derivatives are exact,
// so equal-weight grid sums integrate products of these without truncation error.
struct TrigPoly {
  struct Term {
    double a = 0;
    std::vector<int> m;
    double ph = 0;
  };
  int n = 0;
  std::vector<Term> terms;

  explicit TrigPoly(int vars = 0) : n(vars) {}

  double eval(const std::vector<double>& x) const {
    double s = 0;
    for (const auto& t : terms) {
      double arg = t.ph;
      for (int i = 0; i < n; ++i) arg += t.m[i] * x[i];
      s += t.a * std::sin(arg);
    }
    return s;
  }

  TrigPoly diff(int i) const {
    TrigPoly d(n);
    for (const auto& t : terms) {
      if (t.m[i] == 0) continue;
      Term u = t;
      u.a = t.a * t.m[i];
      u.ph = t.ph + 1.5707963267948966;  // sin -> cos
      d.terms.push_back(u);
    }
    return d;
  }

  TrigPoly& axpy(double c, const TrigPoly& o) {
    for (const auto& t : o.terms) {
      Term u = t;
      u.a *= c;
      if (u.a != 0) terms.push_back(u);
    }
    return *this;
  }
};

// Symmetric tensor field with trigonometric components and exact derivatives.
struct TrigSymField {
  int n = 0, k = 0;
  std::shared_ptr<const MITable> tab;
  std::vector<TrigPoly> comp;

  TrigSymField(int dim, int rank)
      : n(dim), k(rank), tab(mi_table(dim, rank)), comp(tab->size(), TrigPoly(dim)) {}

  SymTensor<double> eval(const std::vector<double>& x) const {
    SymTensor<double> t(n, k);
    for (int i = 0; i < t.size(); ++i) t.c[i] = comp[i].eval(x);
    return t;
  }

  // Flat-metric covariant derivative: plain partials, exact.
  Rank1Sym<double> deriv(const std::vector<double>& x) const {
    Rank1Sym<double> out(n, k);
    for (int i = 0; i < n; ++i)
      for (int pi = 0; pi < int(comp.size()); ++pi)
        out.slot[i].c[pi] = comp[pi].diff(i).eval(x);
    return out;
  }
};

// Seeded random trace-free trigonometric field (flat metric). The trace-free
// projection is a constant-coefficient linear map on components, so the result
// stays band-limited.
inline TrigSymField random_trig_field(int n, int k, std::uint64_t seed) {
  TrigSymField raw(n, k);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> freq(-2, 2);
  for (auto& c : raw.comp)
    for (int t = 0; t < 3; ++t) {
      TrigPoly::Term tm;
      tm.a = amp(rng);
      tm.m.resize(n);
      for (int d = 0; d < n; ++d) tm.m[d] = freq(rng);
      tm.ph = amp(rng);
      c.terms.push_back(tm);
    }
  if (k < 2) return raw;
  Metric<double> id = Metric<double>::standard(n);
  const int N = raw.tab->size();
  TrigSymField out(n, k);
  for (int j = 0; j < N; ++j) {
    SymTensor<double> e(n, k);
    e.c[j] = 1.0;
    SymTensor<double> pe = tf(e, id);
    for (int i = 0; i < N; ++i)
      if (pe.c[i] != 0) out.comp[i].axpy(pe.c[i], raw.comp[j]);
  }
  return out;
}

}  // namespace stc
