#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "stc/curvtensor.hpp"
#include "stc/expr.hpp"
#include "stc/firstslot.hpp"
#include "stc/precod.hpp"
#include "stc/symtensor.hpp"

namespace stc {

using Vec = std::vector<double>;

// arithmetic on flat double buffers, used by the generic stencil helper
inline Vec operator+(Vec a, const Vec& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
inline Vec operator-(Vec a, const Vec& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
inline Vec operator*(double s, Vec a) {
  for (auto& v : a) v *= s;
  return a;
}

struct FDConfig {
  double step = 1e-3;
  int order = 2;  // 2 or 4 point central stencils
};

// Chart metric: pointwise matrix, optional closed-form Christoffel symbols
// (flattened as chris[(k*n + i)*n + j] = Gamma^k_ij).
struct MetricField {
  int n = 0;
  std::function<Mat<double>(const Vec&)> g;
  std::function<std::vector<double>(const Vec&)> chris;  // may be empty
};

struct SymField {
  int n = 0, k = 0;
  std::function<SymTensor<double>(const Vec&)> eval;
};

struct ChartContext {
  MetricField mf;
  FDConfig fd;

  int dim() const { return mf.n; }

  Metric<double> metric(const Vec& x) const { return Metric<double>(mf.g(x)); }

  template <class F>  // F: Vec -> V with V supporting a*(x-y) arithmetic
  auto fd_partial(const F& f, Vec x, int i) const {
    double h = fd.step;
    if (fd.order == 4) {
      double xi = x[i];
      x[i] = xi + 2 * h; auto f2p = f(x);
      x[i] = xi + h;     auto f1p = f(x);
      x[i] = xi - h;     auto f1m = f(x);
      x[i] = xi - 2 * h; auto f2m = f(x);
      return (1.0 / (12 * h)) * (8.0 * (f1p - f1m) - (f2p - f2m));
    }
    double xi = x[i];
    x[i] = xi + h; auto fp = f(x);
    x[i] = xi - h; auto fm = f(x);
    return (1.0 / (2 * h)) * (fp - fm);
  }

  double fd_partial_scalar(const std::function<double(const Vec&)>& f, Vec x, int i) const {
    double h = fd.step;
    if (fd.order == 4) {
      double xi = x[i];
      x[i] = xi + 2 * h; double f2p = f(x);
      x[i] = xi + h;     double f1p = f(x);
      x[i] = xi - h;     double f1m = f(x);
      x[i] = xi - 2 * h; double f2m = f(x);
      return (8 * (f1p - f1m) - (f2p - f2m)) / (12 * h);
    }
    double xi = x[i];
    x[i] = xi + h; double fp = f(x);
    x[i] = xi - h; double fm = f(x);
    return (fp - fm) / (2 * h);
  }

  std::vector<double> christoffel_fd(const Vec& x) const {
    const int n = dim();
    Metric<double> h = metric(x);
    // dg[l][i][j] = partial_l g_ij
    std::vector<double> dg(size_t(n) * n * n);
    for (int l = 0; l < n; ++l) {
      Mat<double> d = fd_partial(mf.g, x, l);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dg[(size_t(l) * n + i) * n + j] = d(i, j);
    }
    std::vector<double> G(size_t(n) * n * n, 0.0);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0;
          for (int l = 0; l < n; ++l)
            s += h.ginv(k, l) * (dg[(size_t(i) * n + j) * n + l] +
                                 dg[(size_t(j) * n + i) * n + l] -
                                 dg[(size_t(l) * n + i) * n + j]);
          G[(size_t(k) * n + i) * n + j] = 0.5 * s;
        }
    return G;
  }

  std::vector<double> christoffel(const Vec& x) const {
    if (mf.chris) return mf.chris(x);
    return christoffel_fd(x);
  }

  // Curvature with the sign convention 2 D_[i D_j] om_k = -R_{ijk}^p om_p,
  // fixed so the round sphere chart has R = -(h wedge h).
  CurvTensor<double> riemann(const Vec& x) const {
    const int n = dim();
    Metric<double> h = metric(x);
    auto chris_fn = [this](const Vec& y) { return christoffel(y); };
    std::vector<std::vector<double>> dG(n);
    for (int l = 0; l < n; ++l) dG[l] = fd_partial(chris_fn, x, l);
    std::vector<double> G = christoffel(x);
    auto Gm = [&](int k, int i, int j) { return G[(size_t(k) * n + i) * n + j]; };
    auto dGm = [&](int l, int k, int i, int j) { return dG[l][(size_t(k) * n + i) * n + j]; };
    auto Rmixed = [&](int i, int j, int k, int m) {
      double s = dGm(i, m, j, k) - dGm(j, m, i, k);
      for (int p = 0; p < n; ++p)
        s += Gm(m, i, p) * Gm(p, j, k) - Gm(m, j, p) * Gm(p, i, k);
      return s;
    };
    auto Rlow = [&](int i, int j, int k, int l) {
      double s = 0;
      for (int m = 0; m < n; ++m) s += Rmixed(i, j, k, m) * h.g(m, l);
      return s;
    };
    return project_mcurv<double>(n, Rlow);
  }

  SymTensor<double> ricci(const Vec& x) const {
    return rictr(riemann(x), metric(x));
  }

  double scalar_curv(const Vec& x) const {
    return scal(riemann(x), metric(x));
  }

  // Covariant derivative of a symmetric tensor field, derivative slot first.
  Rank1Sym<double> cov_deriv(const SymField& f, const Vec& x) const {
    const int n = dim(), k = f.k;
    Rank1Sym<double> out(n, k);
    for (int i = 0; i < n; ++i) out.slot[i] = fd_partial(f.eval, x, i);
    if (k == 0) return out;
    std::vector<double> G = christoffel(x);
    SymTensor<double> om = f.eval(x);
    auto tab = om.tab;
    MIdx idx(k);
    for (int i = 0; i < n; ++i)
      for (int pi = 0; pi < om.size(); ++pi) {
        const MIdx& I = tab->idx[pi];
        double corr = 0;
        for (int s = 0; s < k; ++s) {
          idx = I;
          for (int p = 0; p < n; ++p) {
            double g = G[(size_t(p) * n + i) * n + I[s]];
            if (g == 0) continue;
            idx[s] = p;
            corr += g * om.get(idx);
          }
        }
        out.slot[i].c[pi] -= corr;
      }
    return out;
  }
};

// --- first-order operator fields -------------------------------------------

inline SymField clie_field(const ChartContext& ctx, const SymField& om) {
  return {om.n, om.k + 1, [&ctx, om](const Vec& x) {
            return first_slot_clie(ctx.cov_deriv(om, x), ctx.metric(x));
          }};
}

inline SymField div_field(const ChartContext& ctx, const SymField& om) {
  return {om.n, om.k - 1, [&ctx, om](const Vec& x) {
            return first_slot_div(ctx.cov_deriv(om, x), ctx.metric(x));
          }};
}

struct PreCodField {
  int n = 0, ks = 0;
  std::function<PreCod<double>(const Vec&)> eval;
};

inline PreCodField klie_field(const ChartContext& ctx, const SymField& om) {
  return {om.n, om.k - 1, [&ctx, om](const Vec& x) {
            return first_slot_klie(ctx.cov_deriv(om, x), ctx.metric(x));
          }};
}

inline Rank1Sym<double> tlie_at(const ChartContext& ctx, const SymField& om, const Vec& x) {
  return tlie_from_precod(first_slot_klie(ctx.cov_deriv(om, x), ctx.metric(x)), om.k);
}

// --- second-order operators -------------------------------------------------

// Divergence (leading-slot contraction) of a Rank1Sym-valued field.
inline SymTensor<double> div_rank1sym_field(
    const ChartContext& ctx, int k,
    const std::function<Rank1Sym<double>(const Vec&)>& f, const Vec& x) {
  const int n = ctx.dim();
  Metric<double> h = ctx.metric(x);
  std::vector<double> G = ctx.christoffel(x);
  std::vector<Rank1Sym<double>> dF(n);
  for (int m = 0; m < n; ++m) dF[m] = ctx.fd_partial(f, x, m);
  Rank1Sym<double> F = f(x);
  auto tab = mi_table(n, k);
  SymTensor<double> out(n, k);
  MIdx idx(k);
  for (int pi = 0; pi < tab->size(); ++pi) {
    const MIdx& I = tab->idx[pi];
    double acc = 0;
    for (int m = 0; m < n; ++m)
      for (int p = 0; p < n; ++p) {
        if (h.identity && m != p) continue;
        double gmp = h.identity ? 1.0 : h.ginv(m, p);
        // (D F)_{m, p, I}
        double v = dF[m].slot[p].c[pi];
        for (int q = 0; q < n; ++q) {
          double gam = G[(size_t(q) * n + m) * n + p];
          if (gam != 0) v -= gam * F.slot[q].c[pi];
        }
        for (int s = 0; s < k; ++s) {
          idx = I;
          for (int q = 0; q < n; ++q) {
            double gam = G[(size_t(q) * n + m) * n + I[s]];
            if (gam == 0) continue;
            idx[s] = q;
            v -= gam * F.slot[p].get(idx);
          }
        }
        acc += gmp * v;
      }
    out.c[pi] = acc;
  }
  return out;
}

inline SymTensor<double> div_clie_at(const ChartContext& ctx, const SymField& om, const Vec& x) {
  SymField cf = clie_field(ctx, om);
  return first_slot_div(ctx.cov_deriv(cf, x), ctx.metric(x));
}

inline SymTensor<double> clie_div_at(const ChartContext& ctx, const SymField& om, const Vec& x) {
  SymField df = div_field(ctx, om);
  return first_slot_clie(ctx.cov_deriv(df, x), ctx.metric(x));
}

// K* K om = -D^p (K om)_{p (i1...ik)}.
inline SymTensor<double> kk_at(const ChartContext& ctx, const SymField& om, const Vec& x) {
  const int n = ctx.dim(), k = om.k;
  Metric<double> h = ctx.metric(x);
  std::vector<double> G = ctx.christoffel(x);
  PreCodField pf = klie_field(ctx, om);
  std::vector<PreCod<double>> dphi(n);
  for (int m = 0; m < n; ++m) dphi[m] = ctx.fd_partial(pf.eval, x, m);
  PreCod<double> phi = pf.eval(x);
  auto tab = mi_table(n, k - 1);
  // v_{j, I} = D^p phi_{p j I}
  Rank1Sym<double> v(n, k - 1);
  MIdx idx(k >= 1 ? k - 1 : 0);
  for (int j = 0; j < n; ++j)
    for (int pi = 0; pi < tab->size(); ++pi) {
      const MIdx& I = tab->idx[pi];
      double acc = 0;
      for (int m = 0; m < n; ++m)
        for (int p = 0; p < n; ++p) {
          if (h.identity && m != p) continue;
          double gmp = h.identity ? 1.0 : h.ginv(m, p);
          if (p == j) continue;  // phi_{pjI} = 0 at p == j
          double t = dphi[m].at(p, j, I);
          // connection corrections on the pair slots
          for (int q = 0; q < n; ++q) {
            double g1 = G[(size_t(q) * n + m) * n + p];
            if (g1 != 0) t -= g1 * phi.at(q, j, I);
            double g2 = G[(size_t(q) * n + m) * n + j];
            if (g2 != 0) t -= g2 * phi.at(p, q, I);
          }
          // corrections on the symmetric block
          for (int s = 0; s < k - 1; ++s) {
            idx = I;
            for (int q = 0; q < n; ++q) {
              double gam = G[(size_t(q) * n + m) * n + I[s]];
              if (gam == 0) continue;
              idx[s] = q;
              t -= gam * phi.at(p, j, idx);
            }
          }
          acc += gmp * t;
        }
      v.slot[j].c[pi] = acc;
    }
  SymTensor<double> out = first_slot_sym(v);
  return -1.0 * out;
}

// Connection Laplacian D^p D_p om.
inline SymTensor<double> laplacian_at(const ChartContext& ctx, const SymField& om, const Vec& x) {
  auto f = [&ctx, om](const Vec& y) { return ctx.cov_deriv(om, y); };
  return div_rank1sym_field(ctx, om.k, f, x);
}

inline SymTensor<double> op_curv_at(const ChartContext& ctx, const SymField& om, const Vec& x) {
  return op_curv(ctx.riemann(x), om.eval(x), ctx.metric(x));
}

// Schouten bracket of symmetric tensor fields (covariant components):
// {X,Y}^{i1...} = kx X^{p(...} D_p Y^{...)} - ky Y^{p(...} D_p X^{...)}.
inline SymTensor<double> schouten_at(const ChartContext& ctx, const SymField& X,
                                     const SymField& Y, const Vec& x) {
  const int n = ctx.dim(), kx = X.k, ky = Y.k;
  Metric<double> h = ctx.metric(x);
  SymTensor<double> Xv = X.eval(x), Yv = Y.eval(x);
  Rank1Sym<double> DX = ctx.cov_deriv(X, x), DY = ctx.cov_deriv(Y, x);
  auto half = [&](const SymTensor<double>& A, const Rank1Sym<double>& DB, int ka, int kb) {
    BiSym<double> B(n, ka - 1, kb);
    MIdx full(ka);
    for (int u = 0; u < B.tab1->size(); ++u) {
      const MIdx& U = B.tab1->idx[u];
      std::copy(U.begin(), U.end(), full.begin() + 1);
      for (int vv = 0; vv < B.tab2->size(); ++vv) {
        double acc = 0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) {
            if (h.identity && p != q) continue;
            double g = h.identity ? 1.0 : h.ginv(p, q);
            full[0] = p;
            acc += g * A.get(full) * DB.slot[q].c[vv];
          }
        B.at(u, vv) = acc;
      }
    }
    return symmetrize(B);
  };
  SymTensor<double> t1 = half(Xv, DY, kx, ky);
  SymTensor<double> t2 = half(Yv, DX, ky, kx);
  return double(kx) * t1 - double(ky) * t2;
}

// --- chart fixtures ---------------------------------------------------------

inline MetricField conformal_round_metric(int n, int sign) {
  // h = 4 delta / (1 + sign |x|^2)^2 : sign +1 sphere, -1 hyperbolic
  MetricField mf;
  mf.n = n;
  mf.g = [n, sign](const Vec& x) {
    double r2 = 0;
    for (double v : x) r2 += v * v;
    double f = 2.0 / (1.0 + sign * r2);
    Mat<double> g(n);
    for (int i = 0; i < n; ++i) g(i, i) = f * f;
    return g;
  };
  mf.chris = [n, sign](const Vec& x) {
    double r2 = 0;
    for (double v : x) r2 += v * v;
    std::vector<double> sig(n);
    for (int i = 0; i < n; ++i) sig[i] = -2.0 * sign * x[i] / (1.0 + sign * r2);
    std::vector<double> G(size_t(n) * n * n, 0.0);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          G[(size_t(k) * n + i) * n + j] =
              (k == i ? sig[j] : 0.0) + (k == j ? sig[i] : 0.0) - (i == j ? sig[k] : 0.0);
    return G;
  };
  return mf;
}

inline MetricField flat_metric(int n) {
  MetricField mf;
  mf.n = n;
  mf.g = [n](const Vec&) { return Mat<double>::identity(n); };
  mf.chris = [n](const Vec&) { return std::vector<double>(size_t(n) * n * n, 0.0); };
  return mf;
}

inline MetricField perturbed_metric(int n, std::uint64_t seed, double eps) {
  struct Term { double a; std::vector<int> m; double ph; };
  auto terms = std::make_shared<std::vector<std::vector<Term>>>();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> freq(-2, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<Term> ts;
      for (int t = 0; t < 2; ++t) {
        Term tm;
        tm.a = 0.25 * amp(rng);
        tm.m.resize(n);
        for (int d = 0; d < n; ++d) tm.m[d] = freq(rng);
        tm.ph = amp(rng);
        ts.push_back(tm);
      }
      terms->push_back(std::move(ts));
    }
  MetricField mf;
  mf.n = n;
  mf.g = [n, eps, terms](const Vec& x) {
    Mat<double> g = Mat<double>::identity(n);
    int c = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++c) {
        double s = 0;
        for (const auto& tm : (*terms)[c]) {
          double arg = tm.ph;
          for (int d = 0; d < n; ++d) arg += tm.m[d] * x[d];
          s += tm.a * std::sin(arg);
        }
        g(i, j) += eps * s;
        if (i != j) g(j, i) += eps * s;
      }
    return g;
  };
  return mf;
}

inline MetricField conformal_expr_metric(int n, const std::string& expr) {
  auto f = Expr::parse(expr);
  MetricField mf;
  mf.n = n;
  mf.g = [n, f](const Vec& x) {
    double v = f(x);
    Mat<double> g(n);
    for (int i = 0; i < n; ++i) g(i, i) = v;
    return g;
  };
  return mf;
}

// Fixture ids: flat, torus, sphere, hyperbolic, conformal:<expr>,
// perturbed:<seed>,<eps>.
inline MetricField make_chart(const std::string& id, int n) {
  if (id == "flat" || id == "torus") return flat_metric(n);
  if (id == "sphere") return conformal_round_metric(n, +1);
  if (id == "hyperbolic") return conformal_round_metric(n, -1);
  if (id.rfind("conformal:", 0) == 0) return conformal_expr_metric(n, id.substr(10));
  if (id.rfind("perturbed:", 0) == 0) {
    std::string rest = id.substr(10);
    auto comma = rest.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("perturbed:<seed>,<eps>");
    std::uint64_t seed = std::stoull(rest.substr(0, comma));
    double eps = std::stod(rest.substr(comma + 1));
    return perturbed_metric(n, seed, eps);
  }
  throw std::invalid_argument("unknown chart fixture: " + id);
}

// Conformally rescaled metric f * g with f > 0 given pointwise.
inline MetricField rescale_metric(const MetricField& base,
                                  std::function<double(const Vec&)> f) {
  MetricField mf;
  mf.n = base.n;
  auto g0 = base.g;
  mf.g = [g0, f](const Vec& x) {
    Mat<double> g = g0(x);
    double v = f(x);
    for (auto& e : g.a) e *= v;
    return g;
  };
  return mf;
}

}  // namespace stc
