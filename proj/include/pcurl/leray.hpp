#ifndef PCURL_LERAY_HPP
#define PCURL_LERAY_HPP

#include "pcurl/grid.hpp"

namespace pcurl {

// Discrete Leray projection onto interior-divergence-free edge fields:
//   P v = v - gradient(poisson_solve(divergence(v))).
// Tangential constraints are preserved; gradients of zero-boundary
// potentials are annihilated; divergence-free inputs pass through.  The
// projection is orthogonal in the weighted edge inner product and
// idempotent up to the Poisson tolerance.
EdgeField leray_project(const EdgeField& v, const BoxDomain& g,
                        double poisson_tol);

// Projection of a source term that also reports how much was thrown away.
struct ProjectedSource {
  EdgeField field;
  double removed_norm;  // weighted L2 norm of the discarded gradient part
};
ProjectedSource project_source(const EdgeField& f_raw, const BoxDomain& g,
                               double poisson_tol);

}  // namespace pcurl

#endif
