#ifndef PCURL_PLAPLACE2D_HPP
#define PCURL_PLAPLACE2D_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "pcurl/grid.hpp"
#include "pcurl/solver.hpp"

namespace pcurl {

// Independent 2D Dirichlet p-Laplace solver used to cross-examine the 3D
// code on z-invariant problems.  It deliberately shares nothing with the
// 3D path: node-centered unknowns, piecewise-linear gradients on a
// triangulated grid, and Barzilai-Borwein descent instead of conjugate
// gradients.
struct Grid2D {
  double lx = 1.0, ly = 1.0;
  int nx = 2, ny = 2;

  Grid2D() = default;
  Grid2D(double lx_, double ly_, int nx_, int ny_);
  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
};

// Node-centered scalar with zero Dirichlet boundary, (nx+1) x (ny+1),
// x-fastest.
struct Scalar2DField {
  int nx = 0, ny = 0;
  std::vector<double> v;

  Scalar2DField() = default;
  explicit Scalar2DField(const Grid2D& g)
      : nx(g.nx), ny(g.ny),
        v(static_cast<std::size_t>(g.nx + 1) * (g.ny + 1), 0.0) {}
  double& at(int i, int j) { return v[static_cast<std::size_t>(j) * (nx + 1) + i]; }
  double at(int i, int j) const { return v[static_cast<std::size_t>(j) * (nx + 1) + i]; }
};

struct PLaplaceConfig {
  double p = 2.0;
  std::vector<double> eps_schedule;  // empty = same defaults as the 3D solver
  double grad_tol = 1e-10;
  int max_iters = 200000;
};

struct PLaplaceResult {
  Scalar2DField phi;
  double energy = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Minimize sum_T (area/p) |grad phi|_T^p - sum f phi over zero-boundary
// nodes; each grid cell is split into two triangles with constant
// gradients.  f is sampled at nodes.
PLaplaceResult solve_plaplace(const Scalar2DField& f, const PLaplaceConfig& cfg,
                              const Grid2D& g);

// Energy and exact gradient of the triangulated objective (exposed for the
// finite-difference check).
double plaplace_energy(const Scalar2DField& phi, const Scalar2DField& f,
                       double p, double eps, const Grid2D& g);
Scalar2DField plaplace_gradient(const Scalar2DField& phi, const Scalar2DField& f,
                                double p, double eps, const Grid2D& g);

// Cell-centered gradient magnitude of the oracle solution: square root of
// the mean of the two triangle |grad|^2 values per cell.
std::vector<double> plaplace_cell_gradient_magnitude(const Scalar2DField& phi,
                                                     const Grid2D& g);

// How well a z-invariant 3D solution reduces to the 2D oracle: relative
// max-norm discrepancies of (a) the z-averaged u_z node slice against phi
// and (b) the max cell curl magnitude against the max cell |grad phi|.
struct ReductionComparison {
  double slice_discrepancy = 0.0;
  double curl_discrepancy = 0.0;
  double max() const {
    return slice_discrepancy > curl_discrepancy ? slice_discrepancy
                                                : curl_discrepancy;
  }
};
ReductionComparison compare_reduction(const SolveResult& r3, const BoxDomain& g3,
                                      const PLaplaceResult& r2, const Grid2D& g2);

}  // namespace pcurl

#endif
