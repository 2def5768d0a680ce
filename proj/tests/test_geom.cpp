#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stc/fixtures.hpp"
#include "stc/lie.hpp"
#include "stc/suites.hpp"
#include "stc/verify.hpp"

using namespace stc;

static const CheckReport& find_check(const ReportSet& rs, const std::string& id) {
  for (const auto& r : rs.reports)
    if (r.check == id) return r;
  static CheckReport missing = CheckReport::make("missing", 1.0, 0.0);
  FAIL("check not found: " << id);
  return missing;
}

TEST_CASE("sphere chart curvature matches the closed form") {
  FDConfig fd;
  fd.step = 1e-3;
  ChartContext ctx{make_chart("sphere", 3), fd};
  Vec x = {0.12, -0.2, 0.31};
  Metric<double> h = ctx.metric(x);
  SymTensor<double> hh = sym_from_matrix(h.g);
  CurvTensor<double> R = ctx.riemann(x);
  CurvTensor<double> want = CurvTensor<double>(3) - kwedge(hh, hh, h);
  CHECK((R - want).max_abs() / std::max(1.0, want.max_abs()) < 1e-5);
  CHECK(ctx.scalar_curv(x) == doctest::Approx(6.0).epsilon(1e-5));

  // finite-difference Christoffel symbols agree with the closed form
  auto cf = ctx.christoffel_fd(x);
  auto cc = ctx.christoffel(x);
  double d = 0;
  for (size_t i = 0; i < cf.size(); ++i) d = std::max(d, std::abs(cf[i] - cc[i]));
  CHECK(d < 5e-6);
}

TEST_CASE("hyperbolic chart curvature sign") {
  FDConfig fd;
  fd.step = 1e-3;
  ChartContext ctx{make_chart("hyperbolic", 3), fd};
  Vec x = {0.05, -0.1, 0.2};
  Metric<double> h = ctx.metric(x);
  SymTensor<double> hh = sym_from_matrix(h.g);
  CurvTensor<double> R = ctx.riemann(x);
  CurvTensor<double> want = kwedge(hh, hh, h);
  CHECK((R - want).max_abs() / std::max(1.0, want.max_abs()) < 1e-5);
  CHECK(ctx.scalar_curv(x) == doctest::Approx(-6.0).epsilon(1e-5));
}

TEST_CASE("flat chart identities at a point") {
  ChartSuiteConfig cfg;
  cfg.fixture = "flat";
  cfg.n = 3;
  cfg.points = 1;
  ReportSet rs = chart_identity_suite(cfg);
  for (const auto& r : rs.reports) {
    INFO(r.check << " residual " << r.residual << " tol " << r.tol);
    CHECK(r.pass);
  }
}

TEST_CASE("kernel fixture fields are in their declared class") {
  FDConfig fd;
  fd.step = 1e-4;
  ChartContext ctx{flat_metric(3), fd};
  Metric<double> id = Metric<double>::standard(3);
  Vec x = {0.4, -0.3, 0.7};

  PolyField cod = codazzi_field(3, 2);
  SymField f{cod.n, cod.k, [cod](const Vec& y) { return cod.eval(y); }};
  // codazzi class: klie = 0 and div = 0, exactly (polynomial derivatives)
  Rank1Sym<double> D = cod.deriv(x);
  PreCod<double> K = first_slot_klie(D, id);
  CHECK(K.max_abs() < 1e-12);
  CHECK(first_slot_div(D, id).max_abs() < 1e-12);

  PolyField kil = killing_field(3, 1);
  Rank1Sym<double> Dk = kil.deriv(x);
  SymTensor<double> C = first_slot_clie(Dk, id);
  CHECK(C.max_abs() < 1e-12);

  PolyField rad = radial_field(3, 2);
  Rank1Sym<double> Dr = rad.deriv(x);
  CHECK(first_slot_klie(Dr, id).max_abs() < 1e-12);
  CHECK(first_slot_clie(Dr, id).max_abs() < 1e-12);
}

TEST_CASE("graph parsing rejects bad inputs") {
  CHECK_THROWS(parse_graph("1 2\n2 3\n"));            // degree < 3
  CHECK_THROWS(parse_graph("1 2\n1 3\n1 4\n2 3\n"));  // not regular
  CHECK_THROWS(parse_graph(""));
}

TEST_CASE("complete graph K4 certificate") {
  RegularGraph g = parse_graph(k4_edges());
  CHECK(g.k == 3);
  CHECK(g.edges == 6);
  ReportSet rs = graph_verify(g, "g");
  for (const auto& r : rs.reports) {
    INFO(r.check);
    CHECK(r.pass);
  }
  // |om|^2 = k! V = 6 * 4 = 24, kappa = -24, sigma = (24/6) h = 4 h
  Polynomial<Rat> P = graph_polynomial<Rat>(g);
  Metric<Rat> id = Metric<Rat>::standard(6);
  SymTensor<Rat> om = poly_tensor_constant(deriv_tensor(P, 3));
  CHECK(inner(om, om, id) == Rat(24));
  SymTensor<Rat> sig = sigma_tensor(om, id);
  CHECK((sig - Rat(4) * sym_from_matrix(id.g)).max_abs() == 0.0);
}

TEST_CASE("Petersen graph certificate") {
  RegularGraph g = parse_graph(petersen_edges());
  CHECK(g.k == 3);
  CHECK(g.edges == 15);
  ReportSet rs = graph_verify(g, "p");
  for (const auto& r : rs.reports) {
    INFO(r.check);
    CHECK(r.pass);
  }
}

TEST_CASE("monomial flat solution x1 x2 x3") {
  Polynomial<Rat> F(3);
  F.add_term({1, 1, 1}, Rat(1));
  ReportSet rs = flat_algebraic_verify(F, "m");
  for (const auto& r : rs.reports) {
    INFO(r.check);
    CHECK(r.pass);
  }
  // c = |D^3 F|^2 / n = 6/3 = 2, and n c = 6 = |D^3 F|^2
  Metric<Rat> id = Metric<Rat>::standard(3);
  SymTensor<Rat> om = poly_tensor_constant(deriv_tensor(F, 3));
  CHECK(inner(om, om, id) == Rat(6));
}

TEST_CASE("cartan cubic is an isoparametric certificate") {
  ReportSet rs = cartan_munzner_verify<Q3>(cartan_cubic(), 3, 1, 1, 42, "c");
  for (const auto& r : rs.reports) {
    INFO(r.check << " residual " << r.residual);
    CHECK(r.pass);
  }
  const CheckReport& sig = find_check(rs, "c.sigma");
  CHECK(sig.tol == 0.0);
  // sigma constant: g * g! * prod_{j=1}^{g-2}(n+2j) = 3 * 6 * 7 = 126
  Polynomial<Q3> F = cartan_cubic();
  Metric<Q3> id = Metric<Q3>::standard(5);
  SymTensor<Q3> om = poly_tensor_constant(deriv_tensor(F, 3));
  SymTensor<Q3> d = sigma_tensor(om, id) - Q3(126) * sym_from_matrix(id.g);
  CHECK(d.max_abs() == 0.0);
}

TEST_CASE("clifford quartic satisfies both defining equations") {
  ReportSet rs = cartan_munzner_verify<Rat>(clifford_quartic(), 4, 1, 2, 42, "q");
  for (const auto& r : rs.reports) {
    INFO(r.check << " residual " << r.residual);
    CHECK(r.pass);
  }
}

TEST_CASE("su(3) with the cubic invariant certifies") {
  ReportSet rs = lie_group_verify(su3(), su3_cubic(), "l");
  CHECK(rs.reports.size() > 1);  // not an admissibility rejection
  for (const auto& r : rs.reports) {
    INFO(r.check << " residual " << r.residual);
    CHECK(r.pass);
  }
}

TEST_CASE("low-dimensional and trivial candidates are rejected") {
  // su(2): dimension 3 is not enough
  SymTensor<Q3> dummy(3, 3);
  auto r1 = lie_group_admissible(su2(), dummy);
  REQUIRE(r1.has_value());
  CHECK(*r1 == "group dimension must exceed 3");

  // P = E (rank 2) on su(3): degree too low
  SymTensor<Q3> E2(8, 2);
  for (int i = 0; i < 8; ++i) E2.set({i, i}, Q3(1));
  CHECK(lie_group_admissible(su3(), E2).has_value());

  // P a power of E: trace-free part vanishes
  Metric<Q3> h(Q3(-1) * su3().killing());
  SymTensor<Q3> hh = sym_from_matrix(h.g);
  SymTensor<Q3> E3 = sym_product(hh, met(hh, h));
  auto r3 = lie_group_admissible(su3(), met(hh, h));
  REQUIRE(r3.has_value());
}

TEST_CASE("equator hypersurface passes quickly") {
  FDConfig fd;
  fd.step = 1e-3;
  fd.order = 4;
  ReportSet rs = hypersurface_verify(equator(), fd, HypersurfaceTols{}, 1, 3, "e");
  for (const auto& r : rs.reports) {
    INFO(r.check << " residual " << r.residual);
    CHECK(r.pass);
  }
}

TEST_CASE("norm inequality suite on random tensors") {
  std::mt19937_64 rng(17);
  Metric<double> h = random_metric<double>(4, rng);
  SymTensor<double> om = tf(random_sym<double>(4, 3, rng), h);
  ReportSet rs = norm_inequality_suite(om, h, 1e-11, 1e-10, "n");
  for (const auto& r : rs.reports) {
    INFO(r.check << " residual " << r.residual);
    CHECK(r.pass);
  }
}
