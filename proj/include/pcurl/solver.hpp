#ifndef PCURL_SOLVER_HPP
#define PCURL_SOLVER_HPP

#include <string>
#include <vector>

#include "pcurl/grid.hpp"

namespace pcurl {

struct SolverConfig {
  double p = 2.0;
  // Regularization continuation, non-increasing.  Empty = default for p.
  std::vector<double> eps_schedule;
  // Relative projected-gradient tolerance.  The default is conservative:
  // away from p = 2 the terminal continuation stage loses curvature where
  // the curl vanishes and first-order steps gain accuracy sublinearly
  // there, so tolerances much below 1e-6 can take tens of thousands of
  // iterations at fine grids.  Tighten per run when the extra digits are
  // actually consumed.
  double grad_tol = 1e-6;
  double interim_tol = 1e-6;    // floor used on all but the last stage
  int max_iters = 20000;        // per epsilon stage
  double backtrack = 0.5;       // line-search shrink factor
  double sufficient_decrease = 1e-4;  // Armijo constant
  double poisson_tol = 1e-10;   // inner projection tolerance
  int restart_interval = 50;    // conjugacy reset / drift cleanup period
  int weak_residual_trials = 16;  // 0 disables the weak-form check

  static std::vector<double> default_schedule(double p);
  // Throws std::invalid_argument on bad settings; fills in the default
  // schedule when none was given.
  void validate_and_finalize();
};

struct TraceRecord {
  int stage;
  double eps;
  int iter;
  double energy;
  double grad_norm;
};

struct SolveResult {
  EdgeField u;
  FaceField curl_u;
  CellField curl_mag;
  double energy = 0.0;
  double projected_grad_norm = 0.0;
  double grad_scale = 1.0;        // max(1, ||f||) used by the stop test
  double weak_residual = -1.0;    // -1 when the check was disabled
  double div_residual = 0.0;      // max interior |div u| at the end
  double terminal_eps = 0.0;
  std::vector<int> iterations;    // per epsilon stage
  bool converged = false;
  std::string status;
  std::vector<TraceRecord> trace;

  int total_iterations() const;
};

// Minimize the regularized convex energy over tangentially constrained,
// interior-divergence-free edge fields by projected nonlinear conjugate
// gradients (Polak-Ribiere with restarts, Armijo backtracking), warm
// starting each epsilon stage from the last.  f must be tangentially
// constrained; it is re-projected internally so only its solenoidal part
// drives the minimization.  Non-convergence is reported in the result
// (best iterate retained), never silently.
SolveResult solve(const EdgeField& f, const SolverConfig& cfg,
                  const BoxDomain& g, const EdgeField* initial = nullptr);

// Max over random unit test fields Phi (constrained, divergence-free) of
//   | <W(u) .* curl u, curl Phi> - <f, Phi> |,
// the residual of the discrete weak form at regularization eps.
double weak_residual(const EdgeField& u, const EdgeField& f, double p,
                     double eps, const BoxDomain& g, int trials,
                     double poisson_tol = 1e-10);

}  // namespace pcurl

#endif
