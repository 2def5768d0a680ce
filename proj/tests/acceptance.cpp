// Acceptance harness: one pass/fail line per criterion, exit code = number of
// failed criteria. Each criterion pins its own tolerances.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "stc/fixtures.hpp"
#include "stc/lie.hpp"
#include "stc/suites.hpp"
#include "stc/verify.hpp"

using namespace stc;
using Clock = std::chrono::steady_clock;

static int failures = 0;

static void line(int num, bool pass, const std::string& details) {
  std::printf("criterion %d: %s (%s)\n", num, pass ? "PASS" : "FAIL",
              details.c_str());
  if (!pass) ++failures;
}

static bool all_pass_verbose(const ReportSet& rs, std::string& worst) {
  bool ok = true;
  double w = -1;
  for (const auto& r : rs.reports) {
    if (!r.pass) {
      ok = false;
      if (r.residual > w) {
        w = r.residual;
        worst = r.check + " residual " + std::to_string(r.residual) +
                " tol " + std::to_string(r.tol);
      }
    }
  }
  if (ok) worst = std::to_string(rs.reports.size()) + " checks";
  return ok;
}

static double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1: randomized algebra identities, 100 trials per (n,k) in {3..6}x{1..5},
//    relative residual < 1e-10, under 60 seconds.
static void criterion1() {
  auto t0 = Clock::now();
  ReportSet rs;
  for (int n = 3; n <= 6; ++n)
    for (int k = 1; k <= 5; ++k)
      rs.add(algebra_suite<double>(n, k, 100, 20260823,
                                   1e-10, "a.n" + std::to_string(n) + ".k" + std::to_string(k)));
  double dt = seconds_since(t0);
  std::string worst;
  bool ok = all_pass_verbose(rs, worst) && dt < 60.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, ", %.1fs", dt);
  line(1, ok, worst + buf);
}

// 2: K4 and Petersen certificates, exact; K4 has kappa = -24, sigma = 4h;
//    under 10 seconds.
static void criterion2() {
  auto t0 = Clock::now();
  RegularGraph k4 = parse_graph(k4_edges());
  RegularGraph pet = parse_graph(petersen_edges());
  ReportSet rs = graph_verify(k4, "k4");
  rs.add(graph_verify(pet, "petersen"));

  Polynomial<Rat> P = graph_polynomial<Rat>(k4);
  Metric<Rat> id = Metric<Rat>::standard(6);
  SymTensor<Rat> om = poly_tensor_constant(deriv_tensor(P, 3));
  Rat w2 = inner(om, om, id);
  bool vals = (w2 == Rat(24));  // kappa = -|om|^2 = -24
  SymTensor<Rat> ds = sigma_tensor(om, id) - Rat(4) * sym_from_matrix(id.g);
  vals = vals && ds.max_abs() == 0.0;

  double dt = seconds_since(t0);
  std::string worst;
  bool ok = all_pass_verbose(rs, worst) && vals && dt < 10.0;
  char buf[96];
  std::snprintf(buf, sizeof buf, ", kappa=-24 sigma=4h %s, %.1fs",
                vals ? "exact" : "WRONG", dt);
  line(2, ok, worst + buf);
}

// 3: monomial x1 x2 x3 with c = 2, n c = 6; the trace normalization
//    discrepancy between the two natural conventions is documented here.
static void criterion3() {
  Polynomial<Rat> F(3);
  F.add_term({1, 1, 1}, Rat(1));
  ReportSet rs = flat_algebraic_verify(F, "m");
  Metric<Rat> id = Metric<Rat>::standard(3);
  SymTensor<Rat> om = poly_tensor_constant(deriv_tensor(F, 3));
  Rat w2 = inner(om, om, id);
  Rat c = w2 / 3;
  bool vals = (c == Rat(2)) && (w2 == Rat(6));
  std::string worst;
  bool ok = all_pass_verbose(rs, worst) && vals;
  line(3, ok,
       worst + ", c=2 and |D^3F|^2 = n c = 6; the alternative convention "
               "c'=|D^3F|^2 differs by the factor n");
}

// 4: Cartan's cubic, exact eikonal/harmonicity, 500 sampled points < 1e-9,
//    sigma = 126 h exactly.
static void criterion4() {
  ReportSet rs = cartan_munzner_verify<Q3>(cartan_cubic(), 3, 1, 1, 20260823, "c");
  Metric<Q3> id = Metric<Q3>::standard(5);
  SymTensor<Q3> om = poly_tensor_constant(deriv_tensor(cartan_cubic(), 3));
  SymTensor<Q3> ds = sigma_tensor(om, id) - Q3(126) * sym_from_matrix(id.g);
  bool vals = ds.max_abs() == 0.0;
  std::string worst;
  bool ok = all_pass_verbose(rs, worst) && vals;
  line(4, ok, worst + std::string(", sigma=126h ") + (vals ? "exact" : "WRONG"));
}

// 5: su(3) with the cubic invariant certifies; su(2) and P = E are rejected
//    with explicit reasons.
static void criterion5() {
  ReportSet rs = lie_group_verify(su3(), su3_cubic(), "su3");
  std::string worst;
  bool ok = all_pass_verbose(rs, worst) && rs.reports.size() > 1;

  SymTensor<Q3> dummy(3, 3);
  bool rej2 = lie_group_admissible(su2(), dummy).has_value();
  SymTensor<Q3> E2(8, 2);
  for (int i = 0; i < 8; ++i) E2.set({i, i}, Q3(1));
  bool rejE = lie_group_admissible(su3(), E2).has_value();
  ok = ok && rej2 && rejE;
  line(5, ok, worst + std::string(", su2 ") + (rej2 ? "rejected" : "ACCEPTED") +
                  ", P=E " + (rejE ? "rejected" : "ACCEPTED"));
}

// 6: curved-chart suite on the sphere and hyperbolic fixtures (curvature
//    closed forms, inequality margins < 1e-5 at step 1e-3) and observed
//    convergence order >= 1.8 for the five second-order identities on a
//    perturbed-flat chart; under 5 minutes.
static void criterion6() {
  auto t0 = Clock::now();
  ReportSet rs;
  for (const char* fx : {"sphere", "hyperbolic"}) {
    ChartSuiteConfig cfg;
    cfg.fixture = fx;
    cfg.n = 3;
    cfg.step = 1e-3;
    cfg.points = 2;
    cfg.seed = 20260823;
    rs.add(chart_identity_suite(cfg));
  }
  rs.add(weitzenbock_order_suite(3, 20260823, 0.02, "orders"));
  double dt = seconds_since(t0);
  std::string worst;
  bool ok = all_pass_verbose(rs, worst) && dt < 300.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, ", %.1fs", dt);
  line(6, ok, worst + buf);
}

// 7: integrated vanishing-divergence identity on the flat torus, 20 random
//    trigonometric fields per rank, |integral| < 1e-8.
static void criterion7() {
  ReportSet rs = bochner_suite(20, 20260823, "bochner");
  std::string worst;
  bool ok = all_pass_verbose(rs, worst);
  line(7, ok, worst);
}

// 8: refined Kato margins at 200 points, margin >= -1e-8, and the refined
//    constant is strictly sharper than 1 somewhere.
static void criterion8() {
  ReportSet rs = kato_suite(200, 20260823, "kato");
  std::string worst;
  bool ok = all_pass_verbose(rs, worst);
  line(8, ok, worst);
}

// 9: Clifford torus in S^3 and S^2 x S^1 in S^4: Gauss, Codazzi, minimality
//    and the projective curvature form with c = -1,
//    kappa = ((n-1)/(n+1)) scal_ambient, residuals < 1e-3.
static void criterion9() {
  FDConfig fd;
  fd.step = 1e-3;
  fd.order = 4;
  HypersurfaceTols tols;
  ReportSet rs = hypersurface_verify(clifford_torus(), fd, tols, 20260823, 6, "clifford");
  rs.add(hypersurface_verify(sphere_circle_torus(), fd, tols, 20260823, 6, "s2xs1"));
  std::string worst;
  bool ok = all_pass_verbose(rs, worst);
  line(9, ok, worst);
}

// 10: norm inequalities: the rank-2 identity to 1e-11, the rank-3 and
//     general-rank bounds nonnegative to -1e-10, over 10^4 trials each,
//     plus the eigenvalue-bound chains.
static void criterion10() {
  ReportSet rs = inequality_suite(10000, 20260823, "ineq");
  std::string worst;
  bool ok = all_pass_verbose(rs, worst);
  line(10, ok, worst);
}

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures;
}
