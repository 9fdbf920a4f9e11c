#include "pcurl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pcurl/energy.hpp"
#include "pcurl/leray.hpp"
#include "pcurl/operators.hpp"
#include "pcurl/util.hpp"

namespace pcurl {

std::vector<double> SolverConfig::default_schedule(double p) {
  if (p >= 2.0) return {1e-2, 1e-4, 1e-8, 0.0};
  // For p < 2 the weight is singular at vanishing curl, so continuation
  // stops at a small positive epsilon (reported with the results).
  return {1e-2, 1e-4, 1e-6};
}

void SolverConfig::validate_and_finalize() {
  if (!(p >= 1.05))
    throw std::invalid_argument(
        "SolverConfig: exponents below 1.05 are rejected; the problem is too "
        "close to the p = 1 degeneracy for this discretization");
  if (!std::isfinite(p))
    throw std::invalid_argument("SolverConfig: p must be finite");
  if (eps_schedule.empty()) eps_schedule = default_schedule(p);
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] >= 0.0) || !std::isfinite(eps_schedule[i]))
      throw std::invalid_argument("SolverConfig: eps values must be >= 0");
    if (i > 0 && eps_schedule[i] > eps_schedule[i - 1])
      throw std::invalid_argument(
          "SolverConfig: eps schedule must be non-increasing");
  }
  if (p < 2.0 && eps_schedule.back() == 0.0)
    throw std::invalid_argument(
        "SolverConfig: p < 2 requires a positive terminal eps");
  if (!(grad_tol > 0.0) || !(poisson_tol > 0.0))
    throw std::invalid_argument("SolverConfig: tolerances must be positive");
  if (max_iters < 1)
    throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  if (!(backtrack > 0.0 && backtrack < 1.0))
    throw std::invalid_argument("SolverConfig: backtrack factor must be in (0,1)");
  if (!(sufficient_decrease > 0.0 && sufficient_decrease < 0.5))
    throw std::invalid_argument(
        "SolverConfig: sufficient_decrease must be in (0, 0.5)");
  if (restart_interval < 1)
    throw std::invalid_argument("SolverConfig: restart_interval must be >= 1");
  if (weak_residual_trials < 0)
    throw std::invalid_argument("SolverConfig: weak_residual_trials must be >= 0");
}

int SolveResult::total_iterations() const {
  int t = 0;
  for (int n : iterations) t += n;
  return t;
}

namespace {

// One Armijo backtracking search with a doubling expansion when the first
// trial already satisfies the test.  phi(alpha) is evaluated through the
// cached curls, so a probe costs one cell sweep.
struct LineSearchResult {
  bool ok = false;
  double alpha = 0.0;
  double energy = 0.0;
};

LineSearchResult armijo_search(const FaceField& wu, const FaceField& wd,
                               double inner_fu, double inner_fd, double j0,
                               double slope, double alpha0, double shrink,
                               double c1, double p, double eps,
                               const BoxDomain& g) {
  auto value = [&](double a) {
    return curl_energy_value_shifted(wu, wd, a, p, eps, g) -
           (inner_fu + a * inner_fd);
  };
  double alpha = alpha0;
  double j = value(alpha);
  if (j <= j0 + c1 * alpha * slope) {
    // Accepted immediately: expand while the doubled step keeps both the
    // Armijo bound and a strictly better value.
    for (int e = 0; e < 40; ++e) {
      const double a2 = 2.0 * alpha;
      const double j2 = value(a2);
      if (!(j2 <= j0 + c1 * a2 * slope) || !(j2 < j)) break;
      alpha = a2;
      j = j2;
    }
    return {true, alpha, j};
  }
  for (int b = 0; b < 60; ++b) {
    alpha *= shrink;
    j = value(alpha);
    if (j <= j0 + c1 * alpha * slope) return {true, alpha, j};
  }
  return {false, alpha, j};
}

}  // namespace

SolveResult solve(const EdgeField& f_in, const SolverConfig& cfg_in,
                  const BoxDomain& g, const EdgeField* initial) {
  SolverConfig cfg = cfg_in;
  cfg.validate_and_finalize();
  require_edge_shape(f_in, g, "solve");
  if (!is_tangentially_constrained(f_in, g))
    throw std::invalid_argument("solve: source must be tangentially constrained");

  // Keep only the solenoidal part of the source.  For a properly projected
  // input this is numerically a no-op, but it pins down the divergence
  // drift budget of the whole iteration.
  const double source_tol = std::min(cfg.poisson_tol, 1e-12);
  EdgeField f = leray_project(f_in, g, source_tol);

  SolveResult res;
  res.grad_scale = std::max(1.0, norm(f, g));
  res.terminal_eps = cfg.eps_schedule.back();

  EdgeField u(g);
  if (initial) {
    require_edge_shape(*initial, g, "solve");
    if (!is_tangentially_constrained(*initial, g))
      throw std::invalid_argument(
          "solve: initial guess must be tangentially constrained");
    u = leray_project(*initial, g, cfg.poisson_tol);
  }

  // The discrete complex makes curl_adjoint output solenoidal at interior
  // nodes, and f is projected, so the raw gradient is already (to roundoff)
  // in the divergence-free subspace; the explicit projection below is a
  // periodic safety net rather than a per-iteration cost.
  auto projected_gradient = [&](const EdgeField& uu, double eps, bool project) {
    EdgeField grad = energy_gradient(uu, f, cfg.p, eps, g);
    if (project) grad = leray_project(grad, g, cfg.poisson_tol);
    return grad;
  };

  bool all_converged = true;
  std::string failure;
  double alpha_prev = 1.0;

  for (std::size_t stage = 0; stage < cfg.eps_schedule.size(); ++stage) {
    const double eps = cfg.eps_schedule[stage];
    const bool last_stage = stage + 1 == cfg.eps_schedule.size();
    const double stage_tol =
        last_stage ? cfg.grad_tol : std::max(cfg.grad_tol, cfg.interim_tol);

    FaceField wu = curl(u, g);
    double inner_fu = inner(f, u, g);
    double j = curl_energy_value(wu, cfg.p, eps, g) - inner_fu;
    EdgeField grad = projected_gradient(u, eps, true);
    double gn = norm(grad, g);

    EdgeField dir = grad;
    scale(dir, -1.0);
    FaceField wd = curl(dir, g);
    double inner_fd = inner(f, dir, g);

    int iters = 0;
    res.trace.push_back({static_cast<int>(stage), eps, 0, j, gn});

    while (gn > stage_tol * res.grad_scale && iters < cfg.max_iters) {
      double slope = inner(grad, dir, g);
      if (!(slope < 0.0)) {
        // Conjugacy went stale; fall back to steepest descent.
        dir = grad;
        scale(dir, -1.0);
        wd = curl(dir, g);
        inner_fd = inner(f, dir, g);
        slope = -gn * gn;
      }

      LineSearchResult ls =
          armijo_search(wu, wd, inner_fu, inner_fd, j, slope, alpha_prev,
                        cfg.backtrack, cfg.sufficient_decrease, cfg.p, eps, g);
      if (!ls.ok) {
        // Retry once along steepest descent before giving up on the stage.
        dir = grad;
        scale(dir, -1.0);
        wd = curl(dir, g);
        inner_fd = inner(f, dir, g);
        ls = armijo_search(wu, wd, inner_fu, inner_fd, j, -gn * gn, alpha_prev,
                           cfg.backtrack, cfg.sufficient_decrease, cfg.p, eps, g);
        if (!ls.ok) {
          all_converged = false;
          failure = "line search failed at stage eps = " + std::to_string(eps);
          break;
        }
      }

      axpy(ls.alpha, dir, u);
      axpy(ls.alpha, wd, wu);
      inner_fu += ls.alpha * inner_fd;
      j = ls.energy;
      alpha_prev = ls.alpha;
      ++iters;

      const bool restart_now = (iters % cfg.restart_interval) == 0;
      if (restart_now) {
        // Periodic cleanup: kill roundoff drift in the feasibility and in
        // the cached curl, then restart conjugacy.
        u = leray_project(u, g, cfg.poisson_tol);
        wu = curl(u, g);
        inner_fu = inner(f, u, g);
        j = curl_energy_value(wu, cfg.p, eps, g) - inner_fu;
      }

      EdgeField grad_new = projected_gradient(u, eps, restart_now);
      const double gn_new = norm(grad_new, g);

      double beta = 0.0;
      if (!restart_now) {
        // Polak-Ribiere+ on the projected gradients.
        EdgeField diff = grad_new;
        axpy(-1.0, grad, diff);
        beta = std::max(0.0, inner(grad_new, diff, g) / (gn * gn));
      }
      EdgeField dir_new = grad_new;
      scale(dir_new, -1.0);
      if (beta != 0.0) axpy(beta, dir, dir_new);
      dir = std::move(dir_new);
      wd = curl(dir, g);
      inner_fd = inner(f, dir, g);

      grad = std::move(grad_new);
      gn = gn_new;
      res.trace.push_back({static_cast<int>(stage), eps, iters, j, gn});
    }

    if (gn > stage_tol * res.grad_scale && iters >= cfg.max_iters) {
      all_converged = false;
      failure = "iteration cap reached at stage eps = " + std::to_string(eps);
    }
    res.iterations.push_back(iters);
    if (!all_converged) break;
  }

  // Final feasibility cleanup and honest re-measurement of everything we
  // report.
  u = leray_project(u, g, std::min(cfg.poisson_tol, 1e-12));
  res.u = std::move(u);
  res.curl_u = curl(res.u, g);
  res.curl_mag = cell_magnitude(res.curl_u, g);
  res.energy = curl_energy_value(res.curl_u, cfg.p, res.terminal_eps, g) -
               inner(f, res.u, g);
  EdgeField grad_final =
      leray_project(energy_gradient(res.u, f, cfg.p, res.terminal_eps, g), g,
                    std::min(cfg.poisson_tol, 1e-12));
  res.projected_grad_norm = norm(grad_final, g);
  res.div_residual = max_interior_divergence(res.u, g);
  res.converged =
      all_converged &&
      res.projected_grad_norm <= cfg.grad_tol * res.grad_scale * (1.0 + 1e-9);
  res.status = res.converged ? "converged" : (failure.empty()
      ? "projected gradient above tolerance after final projection"
      : failure);
  if (cfg.weak_residual_trials > 0)
    res.weak_residual = weak_residual(res.u, f, cfg.p, res.terminal_eps, g,
                                      cfg.weak_residual_trials, cfg.poisson_tol);
  return res;
}

double weak_residual(const EdgeField& u, const EdgeField& f, double p,
                     double eps, const BoxDomain& g, int trials,
                     double poisson_tol) {
  require_edge_shape(u, g, "weak_residual");
  require_edge_shape(f, g, "weak_residual");
  if (trials < 1)
    throw std::invalid_argument("weak_residual: trials must be >= 1");
  FaceField ww = weighted_curl(curl(u, g), p, eps, g);
  double worst = 0.0;
  Rng rng(0x51d7e57f1e1d5ULL);
  for (int t = 0; t < trials; ++t) {
    EdgeField phi(g);
    for (int k = 0; k <= g.nz; ++k)
      for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
          phi.x(i, j, k) = rng.uniform(-1.0, 1.0);
    for (int k = 0; k <= g.nz; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
          phi.y(i, j, k) = rng.uniform(-1.0, 1.0);
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
          phi.z(i, j, k) = rng.uniform(-1.0, 1.0);
    apply_tangential_constraint(phi, g);
    phi = leray_project(phi, g, poisson_tol);
    const double pn = norm(phi, g);
    if (pn == 0.0) continue;
    scale(phi, 1.0 / pn);
    const double r = inner(ww, curl(phi, g), g) - inner(f, phi, g);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace pcurl
