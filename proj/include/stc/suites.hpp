#pragma once

#include <cmath>
#include <map>
#include <random>
#include <string>

#include "stc/chart.hpp"
#include "stc/curvtensor.hpp"
#include "stc/fixtures.hpp"
#include "stc/report.hpp"
#include "stc/trigfield.hpp"
#include "stc/verify.hpp"

namespace stc {

// ---------------------------------------------------------------------------
// Seeded random inputs
// ---------------------------------------------------------------------------

template <class T>
T random_scalar(std::mt19937_64& rng) {
  if constexpr (scalar_traits<T>::exact) {
    std::uniform_int_distribution<int> d(-12, 12);
    return scalar_traits<T>::from_ratio(d(rng), 8);
  } else {
    std::normal_distribution<double> d(0.0, 1.0);
    return d(rng);
  }
}

template <class T>
Metric<T> random_metric(int n, std::mt19937_64& rng) {
  Mat<T> g = Mat<T>::identity(n);
  T eps = scalar_traits<T>::from_ratio(2, 5 * n);  // keeps eigenvalues near 1
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      T v = eps * random_scalar<T>(rng);
      g(i, j) = g(i, j) + v;
      if (i != j) g(j, i) = g(j, i) + v;
    }
  return Metric<T>(g);
}

template <class T>
SymTensor<T> random_sym(int n, int k, std::mt19937_64& rng) {
  SymTensor<T> t(n, k);
  for (auto& v : t.c) v = random_scalar<T>(rng);
  return t;
}

template <class T>
CurvTensor<T> random_curv(int n, std::mt19937_64& rng) {
  std::vector<T> raw(size_t(n) * n * n * n);
  for (auto& v : raw) v = random_scalar<T>(rng);
  std::function<T(int, int, int, int)> f = [&raw, n](int i, int j, int k, int l) {
    return raw[((size_t(i) * n + j) * n + k) * n + l];
  };
  return project_mcurv<T>(n, f);
}

// Fold: keep the worst residual per check id (tolerances must agree).
inline void fold_max(ReportSet& acc, const ReportSet& rs) {
  for (const auto& r : rs.reports) {
    bool found = false;
    for (auto& a : acc.reports)
      if (a.check == r.check) {
        if (r.residual > a.residual) {
          a.residual = r.residual;
          a.pass = r.pass;
          a.notes = r.notes;
        }
        found = true;
        break;
      }
    if (!found) acc.reports.push_back(r);
  }
}

// ---------------------------------------------------------------------------
// Algebra suite: pointwise multilinear identities on random data
// ---------------------------------------------------------------------------

// Principal symbols of clie / klie / div applied to the covector Z and the
// trace-free phi: the first-slot splitting maps applied to Z (x) phi.
template <class T>
Rank1Sym<T> symbol_tensor(const std::vector<T>& Z, const SymTensor<T>& phi) {
  Rank1Sym<T> t(phi.n, phi.k);
  for (int i = 0; i < phi.n; ++i) t.slot[i] = Z[i] * phi;
  return t;
}

// Pointwise multilinear identities on seeded random data. With an exact
// scalar type every residual is exactly zero; pass tol = 0 in that case.
template <class T>
ReportSet algebra_suite(int n, int k, int trials, std::uint64_t seed, double tol,
                        const std::string& prefix) {
  ReportSet acc;
  std::mt19937_64 rng(seed ^ (std::uint64_t(n) << 32) ^ (std::uint64_t(k) << 16));
  auto rel = [](double r, double s) { return r / std::max(1.0, s); };
  auto dabs = [](const T& v) { return std::abs(to_double(v)); };
  auto fr = [](long p, long q) { return scalar_traits<T>::from_ratio(p, q); };

  for (int t = 0; t < trials; ++t) {
    ReportSet rs;
    Metric<T> h = random_metric<T>(n, rng);
    SymTensor<T> hh = sym_from_matrix(h.g);

    // adjointness <met(psi), om> = <psi, tr(om)>
    {
      SymTensor<T> psi = random_sym<T>(n, k, rng);
      SymTensor<T> om = random_sym<T>(n, k + 2, rng);
      T lhs = inner(met(psi, h), om, h);
      T rhs = inner(psi, trace(om, h), h);
      rs.add(CheckReport::make(prefix + ".adjoint", rel(dabs(lhs - rhs), dabs(lhs)), tol));
    }

    // tf: idempotence and orthogonality to the pure-trace summand
    {
      SymTensor<T> om = random_sym<T>(n, k, rng);
      SymTensor<T> p = tf(om, h);
      rs.add(CheckReport::make(prefix + ".tf-idempotent",
                               rel((tf(p, h) - p).max_abs(), p.max_abs()), tol));
      if (k >= 2) {
        SymTensor<T> psi = random_sym<T>(n, k - 2, rng);
        T dot = inner(p, met(psi, h), h);
        rs.add(CheckReport::make(prefix + ".tf-orthogonal",
                                 rel(dabs(dot), dabs(inner(p, p, h))), tol));
      }
    }

    CurvTensor<T> Y = random_curv<T>(n, rng);

    // hycommute: (k+2) op(met om) = k met(op om); (k-2) op(tr om) = k tr(op om)
    {
      SymTensor<T> om = random_sym<T>(n, k, rng);
      SymTensor<T> lhs = fr(k + 2, 1) * op_curv(Y, met(om, h), h);
      SymTensor<T> rhs = fr(k, 1) * met(op_curv(Y, om, h), h);
      rs.add(CheckReport::make(prefix + ".hycommute-met",
                               rel((lhs - rhs).max_abs(), rhs.max_abs()), tol));
      if (k == 2) {
        SymTensor<T> tr_op = trace(op_curv(Y, om, h), h);
        rs.add(CheckReport::make(prefix + ".hycommute-tr",
                                 rel(tr_op.max_abs(), op_curv(Y, om, h).max_abs()), tol));
      } else if (k >= 3) {
        SymTensor<T> l2 = fr(k - 2, 1) * op_curv(Y, trace(om, h), h);
        SymTensor<T> r2 = fr(k, 1) * trace(op_curv(Y, om, h), h);
        rs.add(CheckReport::make(prefix + ".hycommute-tr",
                                 rel((l2 - r2).max_abs(), r2.max_abs()), tol));
      }
      // op commutes with the trace-free projection
      SymTensor<T> lt = op_curv(Y, tf(om, h), h);
      SymTensor<T> rt = tf(op_curv(Y, om, h), h);
      rs.add(CheckReport::make(prefix + ".hycommute-tf",
                               rel((lt - rt).max_abs(), rt.max_abs()), tol));
    }

    // op_Y(h^{sym m}) = 0 on pure powers of the metric (rank 2m; capped to
    // keep the rank bounded)
    {
      const int m = std::min(k, 2);
      SymTensor<T> hk = hh;
      for (int i = 1; i < m; ++i) hk = sym_product(hk, hh);
      SymTensor<T> z = op_curv(Y, hk, h);
      rs.add(CheckReport::make(prefix + ".op-trace-power",
                               rel(z.max_abs(), Y.max_abs() * hk.max_abs()), tol));
    }

    // qyalbe / qyalal, for trace-free arguments:
    // <al, op_Y(be)> = <rictr(al ^ be), rictr Y> + ((k-1)/2)<al ^ be, Y>
    if (k >= 2 || n >= 3) {
      SymTensor<T> al = tf(random_sym<T>(n, k, rng), h);
      SymTensor<T> be = tf(random_sym<T>(n, k, rng), h);
      auto q = [&](const SymTensor<T>& a, const SymTensor<T>& b) {
        CurvTensor<T> w = kwedge(a, b, h);
        return inner(rictr(w, h), rictr(Y, h), h) + fr(k - 1, 2) * inner(w, Y, h);
      };
      T lhs = inner(al, op_curv(Y, be, h), h);
      rs.add(CheckReport::make(prefix + ".qyalbe", rel(dabs(lhs - q(al, be)), dabs(lhs)), tol));
      T lhs2 = q_curv(Y, al, h);
      rs.add(CheckReport::make(prefix + ".qyalal", rel(dabs(lhs2 - q(al, al)), dabs(lhs2)), tol));
    }

    // rictralbe / scal(al ^ be) for general (non-trace-free) arguments
    if (k >= 2 || n >= 3) {
      SymTensor<T> al = random_sym<T>(n, k, rng), be = random_sym<T>(n, k, rng);
      CurvTensor<T> w = kwedge(al, be, h);
      SymTensor<T> want = symmetrize(contract_bisym(al, be, k - 1, h));
      if (k >= 2) {
        SymTensor<T> ta = trace(al, h), tb = trace(be, h);
        want -= fr(1, 2) * symmetrize(contract_bisym(al, tb, k - 2, h));
        want -= fr(1, 2) * symmetrize(contract_bisym(be, ta, k - 2, h));
        T sw = scal(w, h), se = inner(al, be, h) - inner(ta, tb, h);
        rs.add(CheckReport::make(prefix + ".scal-wedge", rel(dabs(sw - se), dabs(se)), tol));
      } else {
        T sw = scal(w, h), se = inner(al, be, h);
        rs.add(CheckReport::make(prefix + ".scal-wedge", rel(dabs(sw - se), dabs(se)), tol));
      }
      SymTensor<T> got = rictr(w, h);
      rs.add(CheckReport::make(prefix + ".rictr-wedge",
                               rel((got - want).max_abs(), want.max_abs()), tol));
    }

    // tfweylnorm: |Y|^2 = |tf Y|^2 + (4/(n-2))|tf rictr Y|^2 + (2/(n(n-1))) scal^2
    if (n >= 3) {
      T y2 = norm2(Y, h);
      SymTensor<T> tr_ = tf(rictr(Y, h), h);
      T sc = scal(Y, h);
      T rhs = norm2(tf_curv(Y, h), h) + fr(4, n - 2) * inner(tr_, tr_, h) +
              fr(2, long(n) * (n - 1)) * sc * sc;
      rs.add(CheckReport::make(prefix + ".tfweylnorm", rel(dabs(y2 - rhs), dabs(y2)), tol));
    }

    SymTensor<T> om0 = tf(random_sym<T>(n, k, rng), h);

    // tfomom decomposition for trace-free om
    if (n >= 3) {
      CurvTensor<T> W = kwedge(om0, om0, h);
      SymTensor<T> sig = rictr(W, h);
      T w2 = inner(om0, om0, h);
      T w4 = w2 * w2;
      T lhs = fr(k - 1, 2) * norm2(W, h) + inner(sig, sig, h);
      SymTensor<T> ts = tf(sig, h);
      T rhs = fr(k - 1, 2) * norm2(tf_curv(W, h), h) +
              fr(n + 2 * (k - 2), n - 2) * inner(ts, ts, h) +
              fr(n + k - 2, long(n) * (n - 1)) * w4;
      rs.add(CheckReport::make(prefix + ".tfomom", rel(dabs(lhs - rhs), dabs(lhs)), tol));
    }

    // qrom: qR = qW + ((n+2(k-2))/(n-2)) <sigma, Ric> + ((1-k)/((n-1)(n-2))) scal |om|^2
    if (n >= 3) {
      T qr = q_curv(Y, om0, h);
      T w2 = inner(om0, om0, h);
      T rhs = q_curv(tf_curv(Y, h), om0, h) +
              fr(n + 2 * (k - 2), n - 2) * inner(sigma_tensor(om0, h), rictr(Y, h), h) +
              fr(1 - k, long(n - 1) * (n - 2)) * scal(Y, h) * w2;
      rs.add(CheckReport::make(prefix + ".qrom", rel(dabs(qr - rhs), dabs(qr)), tol));
    }

    // principal-symbol norms of clie and klie
    if (n + k >= 4) {
      std::vector<T> Z(n, scalar_traits<T>::zero());
      for (auto& z : Z) z = random_scalar<T>(rng);
      Rank1Sym<T> tz = symbol_tensor(Z, om0);
      T z2 = scalar_traits<T>::zero();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z2 = z2 + h.ginv(i, j) * Z[i] * Z[j];
      std::vector<T> Zup(n, scalar_traits<T>::zero());
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Zup[i] = Zup[i] + h.ginv(i, j) * Z[j];
      T p2 = inner(om0, om0, h);
      SymTensor<T> iz = contract_vec(om0, Zup);
      T iz2 = inner(iz, iz, h);
      SymTensor<T> sl = first_slot_clie(tz, h);
      T want_l = fr(1, k + 1) * z2 * p2 +
                 fr(long(k) * (n + 2 * (k - 2)), long(k + 1) * (n + 2 * (k - 1))) * iz2;
      rs.add(CheckReport::make(prefix + ".symbol-clie",
                               rel(dabs(inner(sl, sl, h) - want_l), dabs(want_l)), tol));
      PreCod<T> sk = first_slot_klie(tz, h);
      T want_k = fr(1, 2) * (z2 * p2 - iz2) - fr(k - 1, 2 * (n + k - 3)) * iz2;
      rs.add(CheckReport::make(prefix + ".symbol-klie",
                               rel(dabs(norm2(sk, h) - want_k), dabs(want_k)), tol));
    }

    // first-slot decomposition on a synthetic derivative-shaped tensor
    if (n + k >= 4) {
      Rank1Sym<T> tsyn(n, k);
      for (int i = 0; i < n; ++i) tsyn.slot[i] = tf(random_sym<T>(n, k, rng), h);
      auto sp = split_first_slot(tsyn, h);
      Rank1Sym<T> rec = embed_sym(sp.L);
      rec += tlie_from_precod(sp.K, k);
      rec += ih_map(sp.d, h);
      rs.add(CheckReport::make(prefix + ".domkl",
                               rel((tsyn - rec).max_abs(), tsyn.max_abs()), tol));
      T t2 = norm2(tsyn, h);
      T rhs = inner(sp.L, sp.L, h) + fr(2 * k, k + 1) * norm2(sp.K, h) +
              fr(long(k) * (n + 2 * (k - 2)),
                 long(n + k - 3) * (n + 2 * (k - 1))) * inner(sp.d, sp.d, h);
      rs.add(CheckReport::make(prefix + ".normdom", rel(dabs(t2 - rhs), dabs(t2)), tol));
    }

    fold_max(acc, rs);
  }
  acc.sort();
  return acc;
}

// ---------------------------------------------------------------------------
// Inequality lab (pointwise norm inequalities + qR chains)
// ---------------------------------------------------------------------------

inline ReportSet inequality_suite(int trials, std::uint64_t seed,
                                  const std::string& prefix) {
  ReportSet acc;
  double tol_eq = 1e-11, tol_ineq = 1e-10, tol_chain = 1e-9;
  // k = 2 identity block
  {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dn(2, 6);
    for (int t = 0; t < trials; ++t) {
      int n = dn(rng);
      Metric<double> h = random_metric<double>(n, rng);
      SymTensor<double> om = random_tracefree(n, 2, rng, h);
      fold_max(acc, norm_inequality_suite(om, h, tol_eq, tol_ineq, prefix + ".k2"));
    }
  }
  // k = 3 block
  {
    std::mt19937_64 rng(seed + 1);
    std::uniform_int_distribution<int> dn(3, 6);
    for (int t = 0; t < trials; ++t) {
      int n = dn(rng);
      Metric<double> h = random_metric<double>(n, rng);
      SymTensor<double> om = random_tracefree(n, 3, rng, h);
      fold_max(acc, norm_inequality_suite(om, h, tol_eq, tol_ineq, prefix + ".k3"));
    }
  }
  // general k block
  {
    std::mt19937_64 rng(seed + 2);
    std::uniform_int_distribution<int> dn(3, 6), dk(2, 5);
    for (int t = 0; t < trials; ++t) {
      int n = dn(rng), k = dk(rng);
      Metric<double> h = random_metric<double>(n, rng);
      SymTensor<double> om = random_tracefree(n, k, rng, h);
      fold_max(acc, norm_inequality_suite(om, h, tol_eq, tol_ineq, prefix + ".gen"));
    }
  }
  // qR chains under the coupled ansatz
  {
    std::mt19937_64 rng(seed + 3);
    std::uniform_int_distribution<int> dn(3, 6);
    std::uniform_real_distribution<double> dc(0.2, 2.0), dk2(-3.0, 3.0);
    int m = std::max(1, trials / 50);
    for (int t = 0; t < m; ++t) {
      int n = dn(rng);
      Metric<double> h = random_metric<double>(n, rng);
      double kap = dk2(rng);
      for (int k : {1, 2, 3, 5}) {
        if (k > 1 && n < 3) continue;
        SymTensor<double> om = random_tracefree(n, k, rng, h);
        fold_max(acc, qr_chain_check(om, -dc(rng), kap, h, tol_chain,
                                     prefix + ".qr-neg.k" + std::to_string(k)));
        fold_max(acc, qr_chain_check(om, dc(rng), kap, h, tol_chain,
                                     prefix + ".qr-pos.k" + std::to_string(k)));
      }
    }
  }
  acc.sort();
  return acc;
}

// ---------------------------------------------------------------------------
// Chart identity suite
// ---------------------------------------------------------------------------

// Trace-free trig field projected pointwise with the chart metric.
inline SymField chart_test_field(const ChartContext& ctx, int k, std::uint64_t seed) {
  auto tfield = std::make_shared<TrigSymField>(random_trig_field(ctx.dim(), k, seed));
  const ChartContext* c = &ctx;
  return {ctx.dim(), k, [tfield, c](const Vec& x) {
            return tf(tfield->eval(x), c->metric(x));
          }};
}

// Non-trace-free trig field (for identities stated on all of S^k): a trig
// field plus a pure-trace part so the trace is genuinely nonzero.
inline SymField chart_raw_field(const ChartContext& ctx, int k, std::uint64_t seed) {
  const int n = ctx.dim();
  auto t1 = std::make_shared<TrigSymField>(random_trig_field(n, k, seed));
  if (k < 2) return {n, k, [t1](const Vec& x) { return t1->eval(x); }};
  auto t0 = std::make_shared<TrigSymField>(random_trig_field(n, k - 2, seed + 1));
  const ChartContext* c = &ctx;
  return {n, k, [t1, t0, c](const Vec& x) {
            return t1->eval(x) + met(t0->eval(x), c->metric(x));
          }};
}

struct ChartSuiteConfig {
  std::string fixture = "torus";
  int n = 3;
  double step = 1e-3;
  std::uint64_t seed = 1;
  int points = 2;
  double tol_first = 1e-5;   // first-order identities
  double tol_second = 1e-4;  // identities with nested derivatives
};

inline std::vector<Vec> chart_sample_points(const ChartSuiteConfig& cfg,
                                            std::mt19937_64& rng) {
  bool ball = cfg.fixture == "sphere" || cfg.fixture == "hyperbolic";
  std::uniform_real_distribution<double> dist(ball ? -0.35 : 0.0,
                                              ball ? 0.35 : 6.28);
  std::vector<Vec> pts;
  for (int t = 0; t < cfg.points; ++t) {
    Vec x(cfg.n);
    for (auto& v : x) v = dist(rng);
    pts.push_back(x);
  }
  return pts;
}

inline ReportSet chart_identity_suite(const ChartSuiteConfig& cfg) {
  const int n = cfg.n;
  ReportSet acc;
  std::mt19937_64 rng(cfg.seed);
  MetricField mf = make_chart(cfg.fixture, n);
  ChartContext ctx{mf, {cfg.step, 2}};
  std::string prefix = "chart." + cfg.fixture;
  auto rel = [](double r, double s) { return r / std::max(1.0, s); };
  std::vector<Vec> pts = chart_sample_points(cfg, rng);

  for (const Vec& x : pts) {
    ReportSet rs;
    Metric<double> h = ctx.metric(x);
    SymTensor<double> hh = sym_from_matrix(h.g);

    // curvature against closed forms
    if (cfg.fixture == "sphere" || cfg.fixture == "hyperbolic" ||
        cfg.fixture == "flat" || cfg.fixture == "torus") {
      CurvTensor<double> R = ctx.riemann(x);
      CurvTensor<double> want(n);
      double s_want = 0;
      if (cfg.fixture == "sphere") {
        want -= kwedge(hh, hh, h);
        s_want = n * double(n - 1);
      } else if (cfg.fixture == "hyperbolic") {
        want += kwedge(hh, hh, h);
        s_want = -n * double(n - 1);
      }
      rs.add(CheckReport::make(prefix + ".curvature",
                               rel((R - want).max_abs(), want.max_abs()), cfg.tol_first));
      rs.add(CheckReport::make(prefix + ".scal",
                               rel(std::abs(ctx.scalar_curv(x) - s_want), std::abs(s_want)),
                               cfg.tol_first));
    }

    // closed-form Christoffel symbols vs finite differences
    if (mf.chris) {
      auto a = ctx.christoffel_fd(x), b = mf.chris(x);
      double d = 0;
      for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
      rs.add(CheckReport::make(prefix + ".christoffel", d, cfg.tol_first));
    }

    // metricity: D h = 0
    {
      SymField hfield{n, 2, [&mf](const Vec& y) { return sym_from_matrix(mf.g(y)); }};
      // truncation error carries the (larger) Christoffel scale, so this
      // check gets the second-tier tolerance
      rs.add(CheckReport::make(prefix + ".metricity",
                               ctx.cov_deriv(hfield, x).max_abs(), cfg.tol_second));
    }

    for (int k = 1; k <= 3; ++k) {
      std::string kp = prefix + ".k" + std::to_string(k);
      SymField om = chart_test_field(ctx, k, cfg.seed + 10 * k);

      // first-slot decomposition of the covariant derivative
      {
        Rank1Sym<double> D = ctx.cov_deriv(om, x);
        auto sp = split_first_slot(D, h);
        Rank1Sym<double> rec = embed_sym(sp.L);
        rec += tlie_from_precod(sp.K, k);
        rec += ih_map(sp.d, h);
        rs.add(CheckReport::make(kp + ".domkl", rel((D - rec).max_abs(), D.max_abs()),
                                 cfg.tol_first));
        double t2 = norm2(D, h);
        double rhs = inner(sp.L, sp.L, h) + 2.0 * k / (k + 1) * norm2(sp.K, h) +
                     double(k) * (n + 2 * (k - 2)) /
                         (double(n + k - 3) * (n + 2 * (k - 1))) * inner(sp.d, sp.d, h);
        rs.add(CheckReport::make(kp + ".normdom", rel(std::abs(t2 - rhs), t2),
                                 cfg.tol_first));
      }

      // differentialr: D^p D_(i1 om ...)p - D_(i1 D^p om ...)p = op_R(om)
      {
        auto Bfield = [&ctx, &om, k, n](const Vec& y) {
          Rank1Sym<double> D = ctx.cov_deriv(om, y);
          Rank1Sym<double> B(n, k);  // slot[p], block I: D_(i1 om_{i2..ik)p}
          auto tab = mi_table(n, k);
          MIdx rest(k);
          for (int p = 0; p < n; ++p)
            for (int pi = 0; pi < tab->size(); ++pi) {
              const MIdx& I = tab->idx[pi];
              double acc2 = 0;
              for (int s = 0; s < k; ++s) {
                int r = 0;
                for (int pos = 0; pos < k; ++pos)
                  if (pos != s) rest[r++] = I[pos];
                rest[k - 1] = p;
                acc2 += D.slot[I[s]].get(rest);
              }
              B.slot[p].c[pi] = acc2 / k;
            }
          return B;
        };
        SymTensor<double> termA = div_rank1sym_field(ctx, k, Bfield, x);
        SymField dv = div_field(ctx, om);
        SymTensor<double> termB = first_slot_sym(ctx.cov_deriv(dv, x));
        SymTensor<double> opr = op_curv_at(ctx, om, x);
        double scale = std::max({termA.max_abs(), termB.max_abs(), opr.max_abs()});
        rs.add(CheckReport::make(kp + ".differentialr",
                                 rel((termA - termB - opr).max_abs(), scale),
                                 cfg.tol_second));
      }

      // divergence identities of the quadratic data
      {
        SymTensor<double> omv = om.eval(x);
        Rank1Sym<double> D = ctx.cov_deriv(om, x);
        auto sp = split_first_slot(D, h);
        PreCod<double> K = sp.K;
        // kcons_i = om^P klie_{iP}, ccons_i = om^P clie_{iP}, divcons_i = om_i^P div_P
        std::vector<double> kc = contract_sym(K, omv, h);
        BiSym<double> cc = contract_bisym(sp.L, omv, k, h);
        BiSym<double> dc2 = (k >= 1) ? contract_bisym(omv, sp.d, k - 1, h) : BiSym<double>();
        auto vec_of = [&](const BiSym<double>& b) {
          std::vector<double> v(n);
          for (int i = 0; i < n; ++i) v[i] = b.at(i, 0);
          return v;
        };
        std::vector<double> ccv = vec_of(cc), dcv = vec_of(dc2);
        // left sides by finite differences
        SymField sigf{n, 2, [&om, &ctx](const Vec& y) {
                        return sigma_tensor(om.eval(y), ctx.metric(y));
                      }};
        SymTensor<double> divsig = first_slot_div(ctx.cov_deriv(sigf, x), h);
        std::vector<double> dn2(n);
        auto norm2f = [&om, &ctx](const Vec& y) {
          SymTensor<double> v = om.eval(y);
          return inner(v, v, ctx.metric(y));
        };
        for (int i = 0; i < n; ++i) dn2[i] = ctx.fd_partial_scalar(norm2f, x, i);
        double A = double(n + k - 2) * (n + 2 * (k - 2)) + 2.0 * (n - 2);
        double den = double(n + k - 3) * (n + 2 * (k - 1));
        double r1 = 0, r2 = 0, r3 = 0, r4 = 0, sc = 0;
        for (int i = 0; i < n; ++i) {
          double ds = divsig.c[i], dn = 0.5 * dn2[i];
          r1 = std::max(r1, std::abs(ds - (-2.0 / (k + 1) * kc[i] + ccv[i] + A / den * dcv[i])));
          r2 = std::max(r2, std::abs(dn - (2.0 * k / (k + 1) * kc[i] + ccv[i] +
                                           k * double(n + 2 * (k - 2)) / den * dcv[i])));
          r3 = std::max(r3, std::abs(dn - ds -
                                     (2.0 * kc[i] - double(n - 2) / (n + k - 3) * dcv[i])));
          r4 = std::max(r4, std::abs(dn / k + ds -
                                     ((k + 1.0) / k * ccv[i] +
                                      double(n + 2 * k) / (n + 2 * (k - 1)) * dcv[i])));
          sc = std::max({sc, std::abs(ds), std::abs(dn)});
        }
        rs.add(CheckReport::make(kp + ".divrictr", rel(r1, sc), cfg.tol_first));
        rs.add(CheckReport::make(kp + ".divnorm", rel(r2, sc), cfg.tol_first));
        rs.add(CheckReport::make(kp + ".divrictrk", rel(r3, sc), cfg.tol_first));
        rs.add(CheckReport::make(kp + ".divrictrc", rel(r4, sc), cfg.tol_first));

        // divergences of the stress tensors
        SymField stpf{n, 2, [&om, &ctx](const Vec& y) {
                        return stp(om.eval(y), ctx.metric(y));
                      }};
        SymField stmf{n, 2, [&om, &ctx](const Vec& y) {
                        return stm(om.eval(y), ctx.metric(y));
                      }};
        SymTensor<double> dstp = first_slot_div(ctx.cov_deriv(stpf, x), h);
        SymTensor<double> dstm = first_slot_div(ctx.cov_deriv(stmf, x), h);
        double r5 = 0, r6 = 0;
        for (int i = 0; i < n; ++i) {
          r5 = std::max(r5, std::abs(dstp.c[i] -
                                     (-2.0 * kc[i] + double(n - 2) / (n + k - 3) * dcv[i])));
          r6 = std::max(r6, std::abs(dstm.c[i] -
                                     ((k + 1.0) / k * ccv[i] +
                                      double(n + 2 * k) / (n + 2 * (k - 1)) * dcv[i])));
        }
        rs.add(CheckReport::make(kp + ".divstp", rel(r5, sc), cfg.tol_first));
        rs.add(CheckReport::make(kp + ".divstm", rel(r6, sc), cfg.tol_first));

        // traces of stp/stm (algebraic)
        double w2 = inner(omv, omv, h);
        double t1 = trace(stp(omv, h), h).c[0] - (2.0 - n) / 2.0 * w2;
        double t2 = trace(stm(omv, h), h).c[0] - double(n + 2 * k) / (2.0 * k) * w2;
        rs.add(CheckReport::make(kp + ".trstp", rel(std::abs(t1), w2), 1e-10));
        rs.add(CheckReport::make(kp + ".trstm", rel(std::abs(t2), w2), 1e-10));
      }

      // conformal rescaling laws, f = e^{x_1}
      {
        auto f = [](const Vec& y) { return std::exp(y[0]); };
        MetricField mf2 = rescale_metric(mf, f);
        ChartContext ctx2{mf2, ctx.fd};
        double fv = f(x);
        auto scaled = [&om, f](double a) {
          return SymField{om.n, om.k, [om, f, a](const Vec& y) {
                            return std::pow(f(y), a) * om.eval(y);
                          }};
        };
        // clie
        SymField omk = scaled(double(k));
        SymTensor<double> lc = first_slot_clie(ctx2.cov_deriv(omk, x), ctx2.metric(x));
        SymTensor<double> rc = std::pow(fv, double(k)) *
                               first_slot_clie(ctx.cov_deriv(om, x), h);
        rs.add(CheckReport::make(kp + ".conf-clie", rel((lc - rc).max_abs(), rc.max_abs()),
                                 cfg.tol_first));
        // klie
        SymField omh = scaled((k - 1) / 2.0);
        PreCod<double> lk = first_slot_klie(ctx2.cov_deriv(omh, x), ctx2.metric(x));
        PreCod<double> rk = first_slot_klie(ctx.cov_deriv(om, x), h);
        rk = std::pow(fv, (k - 1) / 2.0) * rk;
        rs.add(CheckReport::make(kp + ".conf-klie", rel((lk - rk).max_abs(), rk.max_abs()),
                                 cfg.tol_first));
        // div
        SymField omd = scaled(1.0 - n / 2.0);
        SymTensor<double> ld = fv * first_slot_div(ctx2.cov_deriv(omd, x), ctx2.metric(x));
        SymTensor<double> rd = std::pow(fv, 1.0 - n / 2.0) *
                               first_slot_div(ctx.cov_deriv(om, x), h);
        rs.add(CheckReport::make(kp + ".conf-div", rel((ld - rd).max_abs(), rd.max_abs()),
                                 cfg.tol_first));
        // stp/stm scale as f^{2a+1-k} under om -> f^a om, h -> f h (algebraic)
        double a = 0.7;
        SymTensor<double> omv = om.eval(x);
        Metric<double> h2 = ctx2.metric(x);
        double ssc = std::pow(fv, 2 * a + 1 - k);
        SymTensor<double> e1 = stp(std::pow(fv, a) * omv, h2) - ssc * stp(omv, h);
        SymTensor<double> e2 = stm(std::pow(fv, a) * omv, h2) - ssc * stm(omv, h);
        rs.add(CheckReport::make(kp + ".conf-stp",
                                 rel(e1.max_abs(), stp(omv, h).max_abs()), 1e-10));
        rs.add(CheckReport::make(kp + ".conf-stm",
                                 rel(e2.max_abs(), stm(omv, h).max_abs()), 1e-10));
      }

      // trih (i = 1) on a non-trace-free field:
      // (k+1) tr(sym D al) = 2 div(al) + (k-1) sym D (tr al)
      if (k >= 2) {
        SymField al = chart_raw_field(ctx, k, cfg.seed + 100 * k);
        SymTensor<double> symd = first_slot_sym(ctx.cov_deriv(al, x));
        SymTensor<double> lhs = double(k + 1) * trace(symd, h);
        SymField tral{n, k - 2, [&al, &ctx](const Vec& y) {
                        return trace(al.eval(y), ctx.metric(y));
                      }};
        SymTensor<double> rhs = 2.0 * first_slot_div(ctx.cov_deriv(al, x), h);
        if (k >= 2) {
          SymTensor<double> sdt = first_slot_sym(ctx.cov_deriv(tral, x));
          rhs += double(k - 1) * sdt;
        }
        rs.add(CheckReport::make(kp + ".trih", rel((lhs - rhs).max_abs(), rhs.max_abs()),
                                 cfg.tol_first));
      }
    }

    // Schouten bracket: {h, X} = 2 sym(DX) for the metric bivector
    {
      int k = 2;
      SymField X = chart_raw_field(ctx, k, cfg.seed + 5);
      SymField H{n, 2, [&mf](const Vec& y) { return sym_from_matrix(mf.g(y)); }};
      SymTensor<double> br = schouten_at(ctx, H, X, x);
      SymTensor<double> want = 2.0 * first_slot_sym(ctx.cov_deriv(X, x));
      rs.add(CheckReport::make(prefix + ".schouten-h",
                               rel((br - want).max_abs(), want.max_abs()), cfg.tol_first));
    }

    // clie is a derivation for the Cartan product (rank 1 x rank 1)
    {
      SymField a = chart_test_field(ctx, 1, cfg.seed + 21);
      SymField b = chart_test_field(ctx, 1, cfg.seed + 22);
      SymField ab{n, 2, [&a, &b, &ctx](const Vec& y) {
                    return cartan_product(a.eval(y), b.eval(y), ctx.metric(y));
                  }};
      SymTensor<double> lhs = first_slot_clie(ctx.cov_deriv(ab, x), h);
      SymTensor<double> ca = first_slot_clie(ctx.cov_deriv(a, x), h);
      SymTensor<double> cb = first_slot_clie(ctx.cov_deriv(b, x), h);
      SymTensor<double> rhs = cartan_product(ca, b.eval(x), h) +
                              cartan_product(a.eval(x), cb, h);
      rs.add(CheckReport::make(prefix + ".derivation",
                               rel((lhs - rhs).max_abs(), rhs.max_abs()), cfg.tol_first));
    }

    fold_max(acc, rs);
  }
  acc.sort();
  return acc;
}

// ---------------------------------------------------------------------------
// Weitzenboeck identities with convergence-order gates
// ---------------------------------------------------------------------------

inline double weitzenbock_residual(const ChartContext& ctx, const SymField& om,
                                   const Vec& x, const std::string& which) {
  const int n = ctx.dim(), k = om.k;
  Metric<double> h = ctx.metric(x);
  SymTensor<double> lap = laplacian_at(ctx, om, x);
  SymTensor<double> opr = op_curv_at(ctx, om, x);
  SymTensor<double> dc = div_clie_at(ctx, om, x);
  SymTensor<double> cd = clie_div_at(ctx, om, x);
  SymTensor<double> kk = kk_at(ctx, om, x);
  double den = double(n + k - 3) * (n + 2 * (k - 1));
  SymTensor<double> res(n, k);
  if (which == "divlie") {
    res = lap + double(k) * opr - double(k + 1) * dc +
          (k * double(n + 2 * (k - 2)) / (n + 2 * (k - 1))) * cd;
  } else if (which == "lapom") {
    res = lap - dc - (k * double(n + 2 * (k - 2)) / den) * cd +
          (2.0 * k / (k + 1)) * kk;
  } else if (which == "klieweitzenbock") {
    res = opr - dc + (double(n + k - 2) * (n + 2 * (k - 2)) / den) * cd -
          (2.0 / (k + 1)) * kk;
  } else if (which == "lapom3") {
    res = lap - opr - (double(n + 2 * (k - 2)) / (n + k - 3)) * cd + 2.0 * kk;
  } else if (which == "lapom2") {
    res = lap + (double(k) / (n + k - 2)) * opr -
          (double(n + 2 * (k - 1)) / (n + k - 2)) * dc +
          (2.0 * k * (n + k - 3) / (double(k + 1) * (n + k - 2))) * kk;
  } else {
    throw std::invalid_argument("unknown identity: " + which);
  }
  double scale = std::max({1.0, lap.max_abs(), dc.max_abs(), cd.max_abs(), kk.max_abs()});
  return res.max_abs() / scale;
}

inline ReportSet weitzenbock_order_suite(int n, std::uint64_t seed, double base_step,
                                         const std::string& prefix) {
  ReportSet rs;
  MetricField mf = perturbed_metric(n, seed, 0.1);
  std::mt19937_64 rng(seed + 99);
  std::uniform_real_distribution<double> dist(0.0, 6.28);
  Vec x(n);
  for (auto& v : x) v = dist(rng);
  for (int k : {1, 2}) {
    for (const std::string which :
         {"divlie", "lapom", "klieweitzenbock", "lapom3", "lapom2"}) {
      ChartContext c1{mf, {base_step, 2}};
      ChartContext c2{mf, {base_step / 2, 2}};
      SymField om1 = chart_test_field(c1, k, seed + 7 * k);
      SymField om2 = chart_test_field(c2, k, seed + 7 * k);
      double r1 = weitzenbock_residual(c1, om1, x, which);
      double r2 = weitzenbock_residual(c2, om2, x, which);
      double ratio = r2 < 1e-13 ? 1e6 : r1 / r2;
      double order = std::log2(std::max(ratio, 1e-12));
      rs.add(CheckReport::make(
          prefix + ".k" + std::to_string(k) + "." + which,
          std::max(0.0, 3.5 - ratio), 0.0,
          {"residual(h) = " + std::to_string(r1),
           "residual(h/2) = " + std::to_string(r2),
           "observed order = " + std::to_string(order)}));
    }
  }
  rs.sort();
  return rs;
}

// ---------------------------------------------------------------------------
// Integrated Bochner identity on the flat torus
// ---------------------------------------------------------------------------

inline ReportSet bochner_suite(int fields, std::uint64_t seed, const std::string& prefix) {
  ReportSet rs;
  const int n = 3, N = 9;  // trapezoid rule, exact for the band-limited fields
  Metric<double> id = Metric<double>::standard(n);
  const double TWO_PI = 6.283185307179586;
  for (int k : {1, 2, 3}) {
    double worst = 0;
    for (int t = 0; t < fields; ++t) {
      TrigSymField om = random_trig_field(n, k, seed + 1000 * k + t);
      double acc = 0, scale = 0;
      Vec x(n);
      for (int a = 0; a < N; ++a) {
        x[0] = TWO_PI * a / N;
        for (int b = 0; b < N; ++b) {
          x[1] = TWO_PI * b / N;
          for (int c = 0; c < N; ++c) {
            x[2] = TWO_PI * c / N;
            Rank1Sym<double> D = om.deriv(x);
            auto sp = split_first_slot(D, id);
            double kk2 = norm2(sp.K, id);
            double dv2 = inner(sp.d, sp.d, id);
            double cl2 = inner(sp.L, sp.L, id);
            acc += 2.0 / (k + 1) * kk2 +
                   double(n + k - 2) * (n + 2 * (k - 2)) /
                       (double(n + k - 3) * (n + 2 * (k - 1))) * dv2 -
                   cl2;
            scale += cl2 + kk2 + dv2;
          }
        }
      }
      worst = std::max(worst, std::abs(acc) / std::max(1.0, scale));
    }
    rs.add(CheckReport::make(prefix + ".k" + std::to_string(k), worst, 1e-8,
                             {std::to_string(fields) + " band-limited fields"}));
  }
  return rs;
}

// ---------------------------------------------------------------------------
// Refined Kato inequalities on exact polynomial fixtures
// ---------------------------------------------------------------------------

struct KatoSample {
  std::string cls;  // codazzi | killing | both
  PolyField field;
  double constant = 0;
};

inline std::vector<KatoSample> kato_fixtures() {
  std::vector<KatoSample> out;
  auto cc = [](int n, int k) { return double(n + k - 2) / (n + 2 * (k - 1)); };
  auto ck = [](int k) { return double(k) / (k + 1); };
  auto cb = [](int n, int k) { return double(k) / (n + 2 * (k - 1)); };
  for (int n : {3, 4, 5})
    for (int k : {1, 2, 3}) out.push_back({"codazzi", codazzi_field(n, k), cc(n, k)});
  out.push_back({"killing", killing_field(3, 1), ck(1)});
  out.push_back({"killing", killing_field(4, 1), ck(1)});
  out.push_back({"killing", killing_field(4, 2), ck(2)});
  for (int n : {3, 4})
    for (int k : {2, 3}) out.push_back({"both", radial_field(n, k), cb(n, k)});
  return out;
}

inline ReportSet kato_suite(int points, std::uint64_t seed, const std::string& prefix) {
  ReportSet rs;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.3, 1.2);
  auto fixtures = kato_fixtures();
  int per = std::max(1, points / int(fixtures.size()));
  double worst_margin = 0;     // most negative refined margin (relative)
  double best_gap = 0;         // constant-1 slack: (1 - c)|Dom|^2, must be > 0 somewhere
  double worst_class = 0;      // kernel-class membership residual
  double worst_subharmonic = 0;
  int samples = 0;
  for (const auto& fx : fixtures) {
    const int n = fx.field.n, k = fx.field.k;
    Metric<double> id = Metric<double>::standard(n);
    for (int t = 0; t < per; ++t) {
      Vec x(n);
      for (auto& v : x) v = dist(rng) * (rng() % 2 ? 1.0 : -1.0);
      SymTensor<double> om = fx.field.eval(x);
      double w2 = inner(om, om, id);
      if (w2 < 1e-6) continue;
      Rank1Sym<double> D = fx.field.deriv(x);
      double d2 = norm2(D, id);
      if (d2 < 1e-10) continue;
      ++samples;
      auto sp = split_first_slot(D, id);
      // kernel-class membership
      double cres = 0;
      if (fx.cls == "codazzi")
        cres = std::max(sp.K.max_abs(), sp.d.max_abs());
      else if (fx.cls == "killing")
        cres = std::max(sp.L.max_abs(), sp.d.max_abs());
      else
        cres = std::max(sp.K.max_abs(), sp.L.max_abs());
      worst_class = std::max(worst_class, cres / std::max(1.0, std::sqrt(d2)));
      // |d|om||^2 = sum_i (<D_i om, om> / |om|)^2
      double g2 = 0;
      for (int i = 0; i < n; ++i) {
        double di = inner(D.slot[i], om, id) / std::sqrt(w2);
        g2 += di * di;
      }
      worst_margin = std::min(worst_margin, (fx.constant * d2 - g2) / d2);
      best_gap = std::max(best_gap, (1.0 - fx.constant) * d2);
      // subharmonicity of |om|^p, p = (n-2)/(n+k-2), for the codazzi class
      if (fx.cls == "codazzi" && w2 > 1e-3) {
        double p = double(n - 2) / (n + k - 2);
        double step = 1e-3, lap = 0;
        for (int i = 0; i < n; ++i) {
          Vec xp = x, xm = x;
          xp[i] += step;
          xm[i] -= step;
          auto val = [&](const Vec& y) {
            SymTensor<double> v = fx.field.eval(y);
            return std::pow(inner(v, v, id), p / 2);
          };
          lap += (val(xp) + val(xm) - 2 * val(x)) / (step * step);
        }
        worst_subharmonic = std::min(worst_subharmonic, lap / std::max(1.0, d2));
      }
    }
  }
  rs.add(CheckReport::make(prefix + ".class-membership", worst_class, 1e-6,
                           {std::to_string(samples) + " samples"}));
  rs.add(CheckReport::make(prefix + ".margin", std::max(0.0, -worst_margin - 1e-8), 0.0,
                           {"worst relative margin = " + std::to_string(worst_margin)}));
  rs.add(CheckReport::make(prefix + ".refinement-strict",
                           best_gap > 0 ? 0.0 : 1.0, 0.0,
                           {"constant 1 strictly looser on at least one sample"}));
  rs.add(CheckReport::make(prefix + ".subharmonic",
                           std::max(0.0, -worst_subharmonic - 1e-6), 0.0,
                           {"Lap |om|^((n-2)/(n+k-2)) >= 0 on the codazzi class"}));
  return rs;
}

}  // namespace stc
