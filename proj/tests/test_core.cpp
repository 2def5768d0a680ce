#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "stc/fixtures.hpp"
#include "stc/json_io.hpp"
#include "stc/suites.hpp"
#include "stc/symtensor.hpp"

using namespace stc;

TEST_CASE("binomial and multi-index tables") {
  CHECK(binom(4, 2) == 6);
  CHECK(binom(6, 3) == 20);
  CHECK(binom(5, 0) == 1);
  auto tab = mi_table(3, 2);
  CHECK(tab->size() == 6);  // C(3+2-1,2)
  auto tab4 = mi_table(4, 3);
  CHECK(tab4->size() == 20);
}

TEST_CASE("symmetric product of the metric with itself") {
  // identity metric, n = 3: (h . h)_{1122} = (2 perms of 4!/(2!2!)=6) / 6 = 1/3
  Metric<Rat> h = Metric<Rat>::standard(3);
  SymTensor<Rat> hh = sym_from_matrix(h.g);
  SymTensor<Rat> p = sym_product(hh, hh);
  CHECK(p.get({0, 0, 1, 1}) == Rat(1) / 3);
  CHECK(p.get({0, 0, 0, 0}) == Rat(1));
  CHECK(p.get({0, 1, 2, 2}) == Rat(0));
  // trace(h . h) = ((n+2)/3) h
  SymTensor<Rat> tr = trace(p, h);
  SymTensor<Rat> want = (Rat(3 + 2) / 3) * hh;
  CHECK((tr - want).max_abs() == 0.0);
}

TEST_CASE("trace-free projection properties (exact)") {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 4; ++n)
    for (int k = 2; k <= 4; ++k) {
      Metric<Rat> h = random_metric<Rat>(n, rng);
      SymTensor<Rat> t = random_sym<Rat>(n, k, rng);
      SymTensor<Rat> p = tf(t, h);
      CHECK(trace(p, h).max_abs() == 0.0);
      CHECK((tf(p, h) - p).max_abs() == 0.0);
      // tf annihilates the image of met
      SymTensor<Rat> psi = random_sym<Rat>(n, k - 2, rng);
      CHECK(tf(met(psi, h), h).max_abs() == 0.0);
      // adjointness of met and trace: <met(psi), t> = <psi, trace(t)>
      Rat lhs = inner(met(psi, h), t, h);
      Rat rhs = inner(psi, trace(t, h), h);
      CHECK(lhs == rhs);
    }
}

TEST_CASE("exact algebra suite cells pass with zero tolerance") {
  for (int n = 2; n <= 3; ++n)
    for (int k = 1; k <= 3; ++k) {
      ReportSet rs = algebra_suite<Rat>(n, k, 2, 11, 0.0, "x");
      INFO("n=" << n << " k=" << k);
      for (const auto& r : rs.reports) {
        INFO(r.check << " residual " << r.residual);
        CHECK(r.pass);
      }
    }
}

TEST_CASE("cartan product is associative") {
  // n = 3, ranks <= 2, tolerance 1e-12
  std::mt19937_64 rng(3);
  const int n = 3;
  Metric<double> h = random_metric<double>(n, rng);
  for (int ka = 1; ka <= 2; ++ka)
    for (int kb = 1; kb <= 2; ++kb)
      for (int kc = 1; kc <= 2; ++kc) {
        SymTensor<double> a = tf(random_sym<double>(n, ka, rng), h);
        SymTensor<double> b = tf(random_sym<double>(n, kb, rng), h);
        SymTensor<double> c = tf(random_sym<double>(n, kc, rng), h);
        SymTensor<double> lhs = cartan_product(cartan_product(a, b, h), c, h);
        SymTensor<double> rhs = cartan_product(a, cartan_product(b, c, h), h);
        double scale = std::max(1.0, std::max(lhs.max_abs(), rhs.max_abs()));
        INFO("ranks " << ka << kb << kc);
        CHECK((lhs - rhs).max_abs() / scale < 1e-12);
      }
}

TEST_CASE("curvature-type wedge traces (exact)") {
  for (int n = 3; n <= 5; ++n) {
    Metric<Rat> h = Metric<Rat>::standard(n);
    SymTensor<Rat> hh = sym_from_matrix(h.g);
    CurvTensor<Rat> hwh = kwedge(hh, hh, h);
    // rictr(h ^ h) = (1-n) h, scal(h ^ h) = -n(n-1)
    SymTensor<Rat> r = rictr(hwh, h);
    CHECK((r - Rat(1 - n) * hh).max_abs() == 0.0);
    CHECK(scal(hwh, h) == Rat(-n * (n - 1)));

    std::mt19937_64 rng(n);
    SymTensor<Rat> a = random_sym<Rat>(n, 2, rng);
    SymTensor<Rat> ra = rictr(kwedge(a, hh, h), h);
    // rictr(a ^ h) = ((2-n)/2)(a + tr(a)/(n-2) h)
    SymTensor<Rat> want =
        (Rat(2 - n) / 2) * a - (Rat(1) / 2) * met(trace(a, h), h);
    CHECK((ra - want).max_abs() == 0.0);
  }
}

TEST_CASE("polynomial calculus") {
  // E = sum x_i^2 on R^3: Lap E = 2n, |dE|^2 = 4E
  const int n = 3;
  Metric<Rat> id = Metric<Rat>::standard(n);
  Polynomial<Rat> E = poly_E<Rat>(n);
  Polynomial<Rat> lap = laplacian(E, id);
  CHECK(poly_max_abs(lap - Polynomial<Rat>::constant(n, Rat(2 * n))) == 0.0);
  CHECK(poly_max_abs(grad_norm2(E, id) - Rat(4) * E) == 0.0);

  // harmonic decomposition of x1^2: harmonic part + (1/n) E
  Polynomial<Rat> x1 = Polynomial<Rat>::variable(n, 0);
  Polynomial<Rat> p = x1 * x1;
  auto parts = harmonic_decompose(p, 2);
  Polynomial<Rat> rebuilt(n);
  Polynomial<Rat> Epow = Polynomial<Rat>::constant(n, Rat(1));
  for (size_t s = 0; s < parts.size(); ++s) {
    CHECK(poly_max_abs(laplacian(parts[s], id)) == 0.0);
    rebuilt = rebuilt + parts[s] * Epow;
    Epow = Epow * E;
  }
  CHECK(poly_max_abs(rebuilt - p) == 0.0);
  CHECK(poly_max_abs(parts[1] - Polynomial<Rat>::constant(n, Rat(1) / 3)) == 0.0);
}

TEST_CASE("polarize / depolarize roundtrip") {
  std::mt19937_64 rng(5);
  for (int k = 1; k <= 3; ++k) {
    SymTensor<Rat> t = random_sym<Rat>(3, k, rng);
    Polynomial<Rat> p = depolarize(t);
    SymTensor<Rat> back = polarize(p, k);
    CHECK((back - t).max_abs() == 0.0);
  }
}

TEST_CASE("quadratic extension arithmetic") {
  Q3 s = Q3::sqrt3();
  CHECK((s * s - Q3(3)).a == 0);
  CHECK((s * s - Q3(3)).b == 0);
  Q3 x(Rat(2), Rat(1) / 2);  // 2 + sqrt3/2
  Q3 y = x / x;
  CHECK(y.a == 1);
  CHECK(y.b == 0);
  CHECK(to_double(s) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("rational string roundtrip") {
  CHECK(parse_rational("3/4") == Rat(3) / 4);
  CHECK(parse_rational("-7") == Rat(-7));
  Rat r = Rat(-22) / 7;
  CHECK(parse_rational(rational_to_string(r)) == r);
}

TEST_CASE("json roundtrips") {
  std::mt19937_64 rng(9);
  SymTensor<Rat> t = random_sym<Rat>(3, 2, rng);
  CHECK((tensor_from_json<Rat>(tensor_json(t)) - t).max_abs() == 0.0);

  Metric<Rat> h = random_metric<Rat>(3, rng);
  Metric<Rat> h2 = metric_from_json<Rat>(metric_json(h));
  double dm = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      dm = std::max(dm, std::abs(to_double(Rat(h.g(i, j) - h2.g(i, j)))));
  CHECK(dm == 0.0);

  Polynomial<Rat> p = clifford_quartic();
  Polynomial<Rat> p2 = poly_from_json<Rat>(poly_json(p));
  CHECK(poly_max_abs(p - p2) == 0.0);

  CurvTensor<Rat> Y = kwedge(sym_from_matrix(h.g), sym_from_matrix(h.g), h);
  CurvTensor<Rat> Y2 = curv_from_json<Rat>(curv_json(Y));
  CHECK((Y - Y2).max_abs() == 0.0);
}

TEST_CASE("report serialization is deterministic") {
  ReportSet a, b;
  a.add(CheckReport::make("z.second", 0.5, 1.0));
  a.add(CheckReport::make("a.first", 2.0, 1.0));
  b.add(CheckReport::make("a.first", 2.0, 1.0));
  b.add(CheckReport::make("z.second", 0.5, 1.0));
  a.sort();
  b.sort();
  CHECK(a.ndjson() == b.ndjson());
  CHECK(!a.all_pass());
}
