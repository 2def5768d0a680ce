#include <atomic>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "stc/fixtures.hpp"
#include "stc/json_io.hpp"
#include "stc/lie.hpp"
#include "stc/suites.hpp"
#include "stc/verify.hpp"

using namespace stc;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_range(const std::string& s) {
  auto pos = s.find("..");
  try {
    if (pos == std::string::npos) {
      int v = std::stoi(s);
      return {v, v};
    }
    int a = std::stoi(s.substr(0, pos));
    int b = std::stoi(s.substr(pos + 2));
    if (a > b) throw ConfigError("malformed range (lower bound exceeds upper): " + s);
    return {a, b};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse range: " + s);
  }
}

int thread_count() {
  if (const char* e = std::getenv("STC_THREADS")) {
    int v = std::atoi(e);
    if (v >= 1) return v;
  }
  return 1;
}

int finish(ReportSet rs, const std::string& out) {
  rs.sort();
  if (!out.empty()) write_text_file(out, rs.ndjson());
  rs.table(std::cout);
  return rs.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// algebra
// ---------------------------------------------------------------------------

int run_algebra(const std::string& dims, const std::string& ranks, int trials,
                int ineq_trials, std::uint64_t seed, double tol, bool exact,
                const std::string& out) {
  auto [n0, n1] = parse_range(dims);
  auto [k0, k1] = parse_range(ranks);
  int nmax = exact ? 8 : 12, kmax = exact ? 6 : 8;
  if (n0 < 2 || n1 > nmax) throw ConfigError("dims out of supported range");
  if (k0 < 1 || k1 > kmax) throw ConfigError("ranks out of supported range");
  if (trials < 0 || ineq_trials < 0) throw ConfigError("trial counts must be nonnegative");
  if (tol < 0) tol = exact ? 0.0 : 1e-10;

  std::vector<std::pair<int, int>> cells;
  for (int n = n0; n <= n1; ++n)
    for (int k = k0; k <= k1; ++k) cells.emplace_back(n, k);
  std::vector<ReportSet> results(cells.size());

  auto work = [&](int idx) {
    auto [n, k] = cells[idx];
    std::string prefix = "algebra.n" + std::to_string(n) + ".k" + std::to_string(k);
    results[idx] = exact ? algebra_suite<Rat>(n, k, trials, seed, tol, prefix)
                         : algebra_suite<double>(n, k, trials, seed, tol, prefix);
  };

  int threads = std::min<int>(thread_count(), int(cells.size()) == 0 ? 1 : int(cells.size()));
  if (threads <= 1) {
    for (size_t i = 0; i < cells.size(); ++i) work(int(i));
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) work(int(i));
      });
    for (auto& t : pool) t.join();
  }

  ReportSet rs;
  for (auto& r : results) rs.add(r);
  if (ineq_trials > 0 && !exact) rs.add(inequality_suite(ineq_trials, seed, "algebra.ineq"));
  return finish(std::move(rs), out);
}

// ---------------------------------------------------------------------------
// chart
// ---------------------------------------------------------------------------

int run_chart(const std::string& fixture, int dim, double step, int points,
              std::uint64_t seed, double tol, bool orders, const std::string& out) {
  if (dim < 3 || dim > 6) throw ConfigError("chart dimension must be in 3..6");
  if (step <= 0) throw ConfigError("step must be positive");
  if (points < 1) throw ConfigError("points must be positive");
  make_chart(fixture, dim);  // validates the fixture id up front

  ChartSuiteConfig cfg;
  cfg.fixture = fixture;
  cfg.n = dim;
  cfg.step = step;
  cfg.seed = seed;
  cfg.points = points;
  if (tol >= 0) {
    cfg.tol_first = tol;
    cfg.tol_second = 10 * tol;
  }
  ReportSet rs = chart_identity_suite(cfg);
  if (orders) rs.add(weitzenbock_order_suite(dim, seed, 0.02, "chart.orders"));
  return finish(std::move(rs), out);
}

// ---------------------------------------------------------------------------
// solution
// ---------------------------------------------------------------------------

template <class T>
ReportSet certify_flat_candidate(const Candidate<T>& c, double tol,
                                 const std::string& prefix) {
  ReportSet rs;
  Metric<T> h = c.metric;
  std::vector<CoupledTerm<T>> terms;
  for (const auto& ct : c.tensors) terms.push_back({ct.coef, ct.side, ct.om});
  SymTensor<T> ric(c.dim, 2);  // flat background: Ric = 0, scal = 0
  auto se = stressenergy_residual<T>(ric, scalar_traits<T>::zero(), terms, h);
  rs.add(CheckReport::make(prefix + ".stressenergy",
                           rel_residual(se.residual.max_abs(), 1.0), tol,
                           {"kappa = " + std::to_string(to_double(se.kappa))}));
  if (c.has_kappa)
    rs.add(CheckReport::make(prefix + ".kappa-trace",
                             std::abs(to_double(T(c.kappa - se.kappa))),
                             tol, {"kappa recomputed from the trace identity"}));
  if (c.has_c && c.tensors.size() == 1) {
    CurvTensor<T> R(c.dim);
    rs.add(projectivehiggs_residual<T>(R, c.tensors[0].om, c.c, se.kappa, h, tol,
                                       prefix + ".higgs"));
  }
  return rs;
}

ReportSet certify_chart_candidate(const Candidate<double>& c, double step,
                                  std::uint64_t seed, int points, double tol,
                                  const std::string& prefix) {
  if (!c.has_c) throw ConfigError("chart candidate needs the coupling constant c");
  MetricField mf = make_chart(c.chart, c.dim);
  ChartContext ctx{mf, {step, 2}};
  ChartSuiteConfig scfg;
  scfg.fixture = c.chart;
  scfg.n = c.dim;
  scfg.points = points;
  std::mt19937_64 rng(seed);
  std::vector<Vec> pts = chart_sample_points(scfg, rng);

  ReportSet rs;
  double kmin = 0, kmax = 0, kscale = 1;
  ReportSet worst;
  for (size_t i = 0; i < pts.size(); ++i) {
    Metric<double> h = ctx.metric(pts[i]);
    CurvTensor<double> R = ctx.riemann(pts[i]);
    SymTensor<double> om =
        c.tensors.empty() ? SymTensor<double>(c.dim, 2) : c.tensors[0].om;
    double w2 = inner(om, om, h);
    double kap = scal(R, h) - c.c * w2;  // trace identity
    if (i == 0) kmin = kmax = kap;
    kmin = std::min(kmin, kap);
    kmax = std::max(kmax, kap);
    kscale = std::max(kscale, std::abs(kap));
    ReportSet ph = projectivehiggs_residual<double>(R, om, c.c, kap, h, tol,
                                                    prefix + ".higgs");
    fold_max(worst, ph);
  }
  rs.add(worst);
  rs.add(CheckReport::make(prefix + ".kappa-constant", (kmax - kmin) / kscale, tol,
                           {"kappa from the trace identity across sample points"}));
  if (c.has_kappa)
    rs.add(CheckReport::make(prefix + ".kappa-trace",
                             std::abs(to_double(c.kappa) - kmax) / kscale, tol,
                             {"kappa recomputed from the trace identity"}));
  return rs;
}

ReportSet certify_lie_candidate(const Json& j, const std::string& prefix) {
  std::string alg = j.value("algebra", std::string());
  LieAlgebra L;
  if (alg == "su2") L = su2();
  else if (alg == "su3") L = su3();
  else throw ConfigError("unknown lie algebra (supported: su2, su3): " + alg);
  std::string pkey = j.value("polynomial", std::string("cubic"));
  SymTensor<Q3> P;
  if (pkey == "cubic") {
    if (alg != "su3") throw ConfigError("cubic invariant is defined for su3");
    P = su3_cubic();
  } else if (pkey == "energy") {
    P = SymTensor<Q3>(L.dim, 2);
    for (int i = 0; i < L.dim; ++i) P.set({i, i}, Q3(1));
  } else {
    throw ConfigError("unknown invariant polynomial key: " + pkey);
  }
  return lie_group_verify(L, P, prefix);
}

int run_solution(const std::string& input, std::uint64_t seed, int points,
                 double step, double tol, bool exact, const std::string& out) {
  if (points < 1) throw ConfigError("points must be positive");
  if (step <= 0) throw ConfigError("step must be positive");
  if (tol < 0) tol = 1e-3;
  Json j;
  try {
    j = load_json_file(input);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  ReportSet rs;
  if (j.contains("fixture")) {
    std::string f = j.at("fixture").get<std::string>();
    if (f == "cartan-cubic")
      rs = cartan_munzner_verify<Q3>(cartan_cubic(), 3, 1, 1, seed, "solution.cartan");
    else
      throw ConfigError("unknown built-in fixture: " + f);
  } else if (j.contains("polynomial") && !j.contains("kind")) {
    Polynomial<Rat> P = poly_from_json<Rat>(j.at("polynomial"));
    if (j.contains("munzner")) {
      const Json& m = j.at("munzner");
      rs = cartan_munzner_verify<Rat>(P, m.at("g").get<int>(), m.at("m1").get<int>(),
                                      m.at("m2").get<int>(), seed, "solution.munzner");
    } else {
      rs = flat_algebraic_verify(P, "solution.flat");
    }
  } else if (j.contains("kind")) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "lie-group") {
      rs = certify_lie_candidate(j, "solution.lie");
    } else if (kind == "hypersurface") {
      auto c = candidate_from_json<double>(j);
      if (c.immersion.empty()) throw ConfigError("hypersurface candidate needs an immersion key");
      Immersion im = make_immersion(c.immersion);
      rs = hypersurface_verify(im, {step, 4}, {}, seed, points, "solution.hypersurface");
    } else if (kind == "chart") {
      auto c = candidate_from_json<double>(j);
      rs = certify_chart_candidate(c, step, seed, std::min(points, 16), tol, "solution.chart");
    } else if (kind == "flat-algebraic") {
      if (exact)
        rs = certify_flat_candidate<Rat>(candidate_from_json<Rat>(j), 0.0, "solution.flat");
      else
        rs = certify_flat_candidate<double>(candidate_from_json<double>(j), tol, "solution.flat");
    } else {
      throw ConfigError("unknown candidate kind: " + kind);
    }
  } else {
    throw ConfigError("candidate JSON needs a polynomial, fixture, or kind entry");
  }
  return finish(std::move(rs), out);
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

int run_construct(const std::string& what, const std::string& edges,
                  const std::string& out, const std::string& report) {
  if (what != "graph-poly") throw ConfigError("unknown construction: " + what);
  if (edges.empty()) throw ConfigError("graph-poly needs --edges");
  std::ifstream in(edges);
  if (!in) throw ConfigError("cannot open " + edges);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  RegularGraph g;
  try {
    g = parse_graph(text);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  ReportSet rs = graph_verify(g, "construct.graph");

  Polynomial<Rat> P = graph_polynomial<Rat>(g);
  SymTensor<Rat> om = poly_tensor_constant(deriv_tensor(P, g.k));
  Metric<Rat> id = Metric<Rat>::standard(g.edges);
  Rat w2 = inner(om, om, id);
  Rat coeff = w2 / g.edges;  // sigma = (|om|^2 / n) h
  Json doc;
  doc["polynomial"] = poly_json(P);
  doc["tensor"] = tensor_json(om);
  doc["sigma-coefficient"] = rational_to_string(coeff);
  doc["kappa"] = rational_to_string(-w2);
  Json cert = Json::array();
  ReportSet sorted = rs;
  sorted.sort();
  for (const auto& r : sorted.reports) cert.push_back(report_json(r));
  doc["certificate"] = cert;
  write_text_file(out, doc.dump(2) + "\n");
  return finish(std::move(rs), report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetric tensor calculus verification driver"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string out;
  double tol = -1;
  bool exact = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", out, "report output path (newline-delimited JSON)");
    sub->add_option("--tol", tol, "tolerance override");
    sub->add_flag("--exact", exact, "exact rational arithmetic");
  };

  auto* alg = app.add_subcommand("algebra", "pointwise identity suites on random data");
  std::string dims = "3..6", ranks = "1..5";
  int trials = 100, ineq_trials = 0;
  alg->add_option("--dims", dims, "dimension range a..b");
  alg->add_option("--ranks", ranks, "rank range a..b");
  alg->add_option("--trials", trials, "trials per (n,k) cell");
  alg->add_option("--ineq-trials", ineq_trials, "norm-inequality lab trials (0 = skip)");
  add_common(alg);

  auto* cha = app.add_subcommand("chart", "differential identities on chart fixtures");
  std::string fixture = "torus";
  int dim = 3, points = 2;
  double step = 1e-3;
  bool orders = false;
  cha->add_option("--fixture", fixture, "flat|torus|sphere|hyperbolic|conformal:<expr>|perturbed:<seed>,<eps>");
  cha->add_option("--dim", dim, "chart dimension");
  cha->add_option("--step", step, "finite-difference step");
  cha->add_option("--points", points, "sample points");
  cha->add_flag("--orders", orders, "convergence-order gates for the Weitzenboeck identities");
  add_common(cha);

  auto* sol = app.add_subcommand("solution", "certify a candidate solution bundle");
  std::string input;
  int spoints = 200;
  double sstep = 1e-3;
  sol->add_option("--input", input, "candidate JSON file")->required();
  sol->add_option("--points", spoints, "sample points");
  sol->add_option("--step", sstep, "finite-difference step");
  add_common(sol);

  auto* con = app.add_subcommand("construct", "construct a solution and certify it");
  std::string what, edges_path, tensor_out = "graph-poly.json";
  con->add_option("what", what, "construction id (graph-poly)")->required();
  con->add_option("--edges", edges_path, "edge list file");
  con->add_option("--tensor-out", tensor_out, "constructed tensor JSON path");
  add_common(con);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (alg->parsed())
      return run_algebra(dims, ranks, trials, ineq_trials, seed, tol, exact, out);
    if (cha->parsed()) {
      if (exact) throw ConfigError("the chart suite runs in floating point only");
      return run_chart(fixture, dim, step, points, seed, tol, orders, out);
    }
    if (sol->parsed()) {
      double t = tol < 0 ? 1e-3 : tol;
      return run_solution(input, seed, spoints, sstep, t, exact, out);
    }
    if (con->parsed()) return run_construct(what, edges_path, tensor_out, out);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
