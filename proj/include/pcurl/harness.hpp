#ifndef PCURL_HARNESS_HPP
#define PCURL_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pcurl/grid.hpp"
#include "pcurl/solver.hpp"

namespace pcurl {

// One solved configuration together with both sides of the a-priori bounds:
// the curl norms and the L^{3,1} source norm, plus the empirical constants
//   c_emp_inf = norm_curl_inf / norm_f_31^{1/(p-1)}
//   c_emp_p   = norm_curl_p   / norm_f_31^{1/(p-1)}
// whose boundedness under refinement is what the sweep checks.
struct EstimateReport {
  double p = 0.0;
  int nx = 0, ny = 0, nz = 0;
  double lx = 1.0, ly = 1.0, lz = 1.0;
  std::uint64_t seed = 0;
  double lambda = 1.0;
  std::string source;  // "manufactured", "random-divfree", or a file path

  double norm_curl_inf = 0.0;        // max cell-centered curl magnitude
  double norm_curl_inf_faces = 0.0;  // diagnostic: max single face value
  double norm_curl_p = 0.0;          // L^p norm of the cell magnitudes
  double norm_f_31 = 0.0;            // L^{3,1} of the cell-sampled |f|
  bool ratio_defined = false;        // false when f == 0
  double c_emp_inf = 0.0;
  double c_emp_p = 0.0;

  long iterations = 0;
  double residual = 0.0;  // projected gradient norm relative to its scale
  bool converged = false;
  std::string status;

  bool refinement_flag = false;  // set on the finest report of a flagged group
  std::string flag_reason;
};

enum class SourceFamily { Manufactured, RandomDivFree, File };

SourceFamily source_family_from_string(const std::string& name);
std::string to_string(SourceFamily f);

// Cartesian sweep: every combination of p, resolution, seed, and lambda is
// one configuration (seeds collapse to one entry for non-random families).
struct SweepSpec {
  std::vector<double> p_values{2.0};
  std::vector<int> resolutions{16, 32};  // cubic N per entry
  SourceFamily family = SourceFamily::RandomDivFree;
  std::vector<double> lambdas{1.0};
  std::vector<std::uint64_t> seeds{1};
  int smoothness = 2;      // random-divfree mode count per axis
  double amplitude = 1.0;  // random-divfree base amplitude
  std::string source_file;  // family == File: edge-field dump, grid from header
  double lx = 1.0, ly = 1.0, lz = 1.0;
  SolverConfig solver;  // p and eps schedule are overridden per configuration

  void validate() const;  // throws std::invalid_argument
};

// The sweep used by the acceptance gate: p in {1.5, 2, 3}, N in {16, 32},
// seeds 1..5, lambda 1, random divergence-free sources on the unit cube.
SweepSpec default_acceptance_sweep();

// L^{3,1} norm of |f| sampled to cells (edge components averaged to cell
// centers component-wise, then the Euclidean magnitude), each cell carrying
// its volume as weight.  Exact for the step-function representation.
double source_lorentz31_norm(const EdgeField& f, const BoxDomain& g);

// (sum_cells V * mag^p)^{1/p} of a cell magnitude field.
double cell_lp_norm(const CellField& mag, double p, const BoxDomain& g);

// Solves every configuration the SweepSpec describes, one report each,
// sorted by (p, N, seed, lambda, source).  Solver failures are recorded in
// the report (converged = false, status) and the run continues.  threads > 1
// distributes configurations across that many workers; per-configuration
// arithmetic is unaffected, so results are identical at any thread count.
std::vector<EstimateReport> run_sweep(const SweepSpec& spec, int threads = 1);

struct EstimateVerification {
  std::vector<EstimateReport> reports;
  bool any_flag = false;
  bool all_converged = true;
  std::vector<std::string> flags;  // human-readable flag messages
};

// Runs the sweep and flags any (p, seed, lambda, source) group whose
// empirical constant grows by more than 10% between the two finest
// resolutions.  verify_linfty_estimate watches c_emp_inf;
// verify_lp_estimate watches c_emp_p and additionally flags any report
// violating c_emp_p <= c_emp_inf * |domain|^{1/p} beyond 1e-12 slack.
EstimateVerification verify_linfty_estimate(const SweepSpec& spec,
                                            int threads = 1);
EstimateVerification verify_lp_estimate(const SweepSpec& spec, int threads = 1);

// Both checks on a single sweep run (what the command-line verify does).
EstimateVerification verify_estimates(const SweepSpec& spec, int threads = 1);

// Manufactured-solution refinement study at p = 2 on the unit cube.
struct ConvergenceRow {
  int n = 0;
  double err_u_max = 0.0, err_u_l2 = 0.0;
  double err_curl_max = 0.0, err_curl_l2 = 0.0;
  // observed orders vs the previous row; NaN on the first row
  double order_u_max = 0.0, order_u_l2 = 0.0;
  double order_curl_max = 0.0, order_curl_l2 = 0.0;
  double curl_inf_value = 0.0;  // max cell magnitude (analytic limit: pi)
  double curl_l2_value = 0.0;   // cell-magnitude L2 (analytic: pi/sqrt(2))
  long iterations = 0;
};

// Resolutions must be strictly ascending.  grad_tol is relative in the
// sense of SolverConfig (to max(1, ||f||)); the default keeps a wide
// margin above the energy-difference roundoff floor of the line search
// (observed up to ~1.3e-8 at N = 32, and it moves with the descent
// trajectory) while staying far below the discretization errors the
// study measures.
std::vector<ConvergenceRow> convergence_study(
    const std::vector<int>& resolutions, double grad_tol = 1e-7,
    int max_iters = 50000);

// Tabular output, fixed header:
// p,Nx,Ny,Nz,seed,lambda,norm_curl_inf,norm_curl_p,norm_f_31,c_emp_inf,c_emp_p,iters,resid
extern const char* const kReportCsvHeader;
void write_reports_csv(const std::string& path,
                       const std::vector<EstimateReport>& reports);
std::string reports_csv(const std::vector<EstimateReport>& reports);

nlohmann::json report_to_json(const EstimateReport& r);
nlohmann::json verification_to_json(const EstimateVerification& v);
nlohmann::json convergence_to_json(const std::vector<ConvergenceRow>& rows);

}  // namespace pcurl

#endif
