#ifndef PCURL_POISSON_HPP
#define PCURL_POISSON_HPP

#include <stdexcept>
#include <vector>

#include "pcurl/grid.hpp"

namespace pcurl {

// Thrown when conjugate gradients hits its iteration cap; carries the
// relative residual reached so callers can report it.
struct PoissonFailure : std::runtime_error {
  double relative_residual;
  PoissonFailure(const std::string& msg, double rr)
      : std::runtime_error(msg), relative_residual(rr) {}
};

// Solve the 7-point discrete Laplacian with homogeneous Dirichlet data:
// returns phi (zero on boundary nodes) with
//   || lap(phi) - rhs ||_2  <=  tol * || rhs ||_2  over interior nodes.
// Boundary entries of rhs are ignored.  'trace', when given, receives the
// CG quadratic-form value per iteration (monotonically decreasing).
NodeField poisson_solve(const NodeField& rhs, const BoxDomain& g, double tol,
                        int max_iters = 0,
                        std::vector<double>* trace = nullptr);

// 7-point Laplacian of a zero-boundary potential, interior nodes only.
NodeField laplacian(const NodeField& phi, const BoxDomain& g);

}  // namespace pcurl

#endif
