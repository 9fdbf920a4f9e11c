#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>

#include <pcurl/energy.hpp>
#include <pcurl/grid.hpp>
#include <pcurl/operators.hpp>
#include <pcurl/solver.hpp>
#include <pcurl/sources.hpp>

#include "helpers.hpp"

using namespace pcurl;
using namespace pcurl::testing;

TEST_CASE("config validation") {
  SolverConfig cfg;
  cfg.p = 1.01;
  CHECK_THROWS_AS(cfg.validate_and_finalize(), std::invalid_argument);
  cfg.p = 2.0;
  cfg.eps_schedule = {1e-4, 1e-2};  // increasing
  CHECK_THROWS_AS(cfg.validate_and_finalize(), std::invalid_argument);
  cfg.p = 1.5;
  cfg.eps_schedule = {1e-2, 0.0};  // p < 2 cannot reach zero smoothing
  CHECK_THROWS_AS(cfg.validate_and_finalize(), std::invalid_argument);
  cfg.eps_schedule.clear();
  cfg.grad_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate_and_finalize(), std::invalid_argument);
  cfg.grad_tol = 1e-6;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate_and_finalize(), std::invalid_argument);

  SolverConfig ok;
  ok.p = 3.0;
  ok.validate_and_finalize();
  REQUIRE_FALSE(ok.eps_schedule.empty());
  CHECK(ok.eps_schedule.back() == 0.0);

  SolverConfig low;
  low.p = 1.5;
  low.validate_and_finalize();
  REQUIRE_FALSE(low.eps_schedule.empty());
  CHECK(low.eps_schedule.back() > 0.0);
}

TEST_CASE("unconstrained sources are rejected") {
  BoxDomain g(1, 1, 1, 6, 6, 6);
  EdgeField f(g);
  f.fill(1.0);  // nonzero on boundary edges
  SolverConfig cfg;
  CHECK_THROWS_AS(solve(f, cfg, g), std::invalid_argument);
}

TEST_CASE("zero source gives the zero minimizer immediately") {
  BoxDomain g(1, 1, 1, 8, 8, 8);
  EdgeField f(g);
  for (double p : {1.5, 2.0, 3.0}) {
    SolverConfig cfg;
    cfg.p = p;
    SolveResult res = solve(f, cfg, g);
    CHECK(res.converged);
    CHECK(res.total_iterations() == 0);
    CHECK(max_abs(res.u) == 0.0);
    CHECK(res.energy == 0.0);
  }
}

TEST_CASE("quadratic benchmark is reproduced") {
  BoxDomain g(1, 1, 1, 16, 16, 16);
  SolverConfig cfg;
  cfg.grad_tol = 1e-8;
  SolveResult res = solve(manufactured_source(g), cfg, g);
  REQUIRE(res.converged);

  const double pi = 3.14159265358979323846;
  CHECK(max_abs_cell(res.curl_mag) == doctest::Approx(pi).epsilon(0.02));
  CHECK(res.energy == doctest::Approx(-pi * pi / 4.0).epsilon(0.01));

  // Pointwise comparison against the closed form.
  EdgeField du = res.u;
  axpy(-1.0, manufactured_u(g), du);
  CHECK(max_abs(du) <= 0.02);
}

TEST_CASE("energy decreases monotonically within each stage") {
  BoxDomain g(1, 1, 1, 8, 8, 8);
  SolverConfig cfg;
  cfg.p = 3.0;
  cfg.grad_tol = 1e-7;
  cfg.validate_and_finalize();  // so the stage count below is meaningful
  SolveResult res = solve(make_random_divfree_source(g, 3, 2), cfg, g);
  REQUIRE(res.converged);
  REQUIRE(res.trace.size() >= 2);
  std::map<int, double> last_in_stage;
  for (const auto& rec : res.trace) {
    auto it = last_in_stage.find(rec.stage);
    if (it != last_in_stage.end())
      CHECK(rec.energy <= it->second + 1e-12 * (std::abs(it->second) + 1.0));
    last_in_stage[rec.stage] = rec.energy;
  }
  // One iteration count per scheduled stage.
  CHECK(res.iterations.size() == cfg.eps_schedule.size());
}

TEST_CASE("iterates honor both constraints at the minimizer") {
  BoxDomain g(1.0, 1.3, 0.7, 8, 7, 9);
  SolverConfig cfg;
  cfg.p = 3.0;
  SolveResult res = solve(make_random_divfree_source(g, 7, 2), cfg, g);
  REQUIRE(res.converged);
  CHECK(is_tangentially_constrained(res.u, g));
  double scale = max_abs(res.u) / g.hmin() + 1.0;
  CHECK(max_interior_divergence(res.u, g) <= 1e-9 * scale);
  CHECK(res.div_residual <= 1e-9 * scale);
}

TEST_CASE("weak form residual behaves like a residual") {
  BoxDomain g(1, 1, 1, 16, 16, 16);
  EdgeField f = manufactured_source(g);

  // At the reported minimizer the weak residual is bounded by the stop
  // tolerance times the source scale.
  SolverConfig cfg;
  cfg.grad_tol = 1e-8;
  SolveResult res = solve(f, cfg, g);
  REQUIRE(res.converged);
  CHECK(res.weak_residual >= 0.0);
  CHECK(res.weak_residual <= 10.0 * cfg.grad_tol * res.grad_scale);

  // Far from the minimizer it is emphatically not small.
  EdgeField zero(g);
  double at_zero = weak_residual(zero, f, 2.0, 0.0, g, 16);
  CHECK(at_zero > 1e3 * res.weak_residual);

  // And it tracks the gradient tolerance monotonically.
  double prev = at_zero;
  for (double tol : {1e-4, 1e-6, 1e-8}) {
    SolverConfig c;
    c.grad_tol = tol;
    SolveResult r = solve(f, c, g);
    REQUIRE(r.converged);
    CHECK(r.weak_residual < prev);
    prev = r.weak_residual;
  }
}

TEST_CASE("flat sources in z give flat solutions in z") {
  BoxDomain g(1, 1, 1, 12, 12, 12);
  EdgeField f = z_invariant_source(
      g, [](double x, double y) { return std::sin(3.14159265358979 * x) *
                                          std::sin(3.14159265358979 * y); });
  SolverConfig cfg;
  cfg.p = 3.0;
  cfg.grad_tol = 1e-8;
  SolveResult res = solve(f, cfg, g);
  REQUIRE(res.converged);
  double scale = max_abs(res.u) + 1e-30;
  CHECK(max_abs(res.u.x) <= 1e-7 * scale);
  CHECK(max_abs(res.u.y) <= 1e-7 * scale);
  double zdrift = 0.0;
  for (int k = 1; k < g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        zdrift = std::max(zdrift,
                          std::abs(res.u.z(i, j, k) - res.u.z(i, j, 0)));
  CHECK(zdrift <= 1e-7 * scale);
}

TEST_CASE("solution scales with the source at the quadratic exponent") {
  BoxDomain g(1, 1, 1, 8, 8, 8);
  EdgeField f = make_random_divfree_source(g, 9, 2);
  SolverConfig cfg;
  cfg.grad_tol = 1e-8;
  SolveResult r1 = solve(f, cfg, g);
  EdgeField f4 = f;
  scale(f4, 4.0);
  SolveResult r4 = solve(f4, cfg, g);
  REQUIRE(r1.converged);
  REQUIRE(r4.converged);
  EdgeField diff = r4.u;
  axpy(-4.0, r1.u, diff);
  CHECK(max_abs(diff) <= 1e-6 * max_abs(r4.u));
}

TEST_CASE("curl scaling below quadratic growth for a cubic exponent") {
  // For p = 3 multiplying the source by 4 multiplies the curl by exactly 2.
  BoxDomain g(1, 1, 1, 8, 8, 8);
  EdgeField f = make_random_divfree_source(g, 10, 2);
  SolverConfig cfg;
  cfg.p = 3.0;
  cfg.grad_tol = 1e-7;
  SolveResult r1 = solve(f, cfg, g);
  EdgeField f4 = f;
  scale(f4, 4.0);
  SolveResult r4 = solve(f4, cfg, g);
  REQUIRE(r1.converged);
  REQUIRE(r4.converged);
  double m1 = max_abs_cell(r1.curl_mag);
  double m4 = max_abs_cell(r4.curl_mag);
  CHECK(m4 / m1 == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("same minimizer from different feasible starts") {
  BoxDomain g(1, 1, 1, 8, 8, 8);
  EdgeField f = make_random_divfree_source(g, 11, 2);
  SolverConfig cfg;
  cfg.p = 3.0;
  cfg.grad_tol = 1e-8;
  cfg.max_iters = 40000;
  EdgeField a0 = random_constrained_field(g, 101, 0.1);
  EdgeField b0 = random_constrained_field(g, 202, 0.1);
  SolveResult ra = solve(f, cfg, g, &a0);
  SolveResult rb = solve(f, cfg, g, &b0);
  REQUIRE(ra.converged);
  REQUIRE(rb.converged);
  FaceField diff = ra.curl_u;
  axpy(-1.0, rb.curl_u, diff);
  CHECK(max_abs(diff) <= 1e-6 * max_abs(ra.curl_u));
}

TEST_CASE("hitting the iteration cap is reported, not hidden") {
  BoxDomain g(1, 1, 1, 12, 12, 12);
  SolverConfig cfg;
  cfg.max_iters = 3;
  SolveResult res = solve(manufactured_source(g), cfg, g);
  CHECK_FALSE(res.converged);
  CHECK(res.status.find("iteration") != std::string::npos);
  CHECK(std::isfinite(res.energy));
  CHECK(std::isfinite(max_abs(res.u)));
  CHECK(res.total_iterations() > 0);
}

TEST_CASE("terminal smoothing is reported") {
  BoxDomain g(1, 1, 1, 6, 6, 6);
  EdgeField f = make_random_divfree_source(g, 12, 1);
  SolverConfig a;
  a.p = 1.5;
  SolveResult ra = solve(f, a, g);
  CHECK(ra.terminal_eps == 1e-6);
  SolverConfig b;
  b.p = 3.0;
  SolveResult rb = solve(f, b, g);
  CHECK(rb.terminal_eps == 0.0);
}
