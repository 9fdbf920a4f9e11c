#ifndef PCURL_ENERGY_HPP
#define PCURL_ENERGY_HPP

#include "pcurl/grid.hpp"

namespace pcurl {

// J_eps(u) = sum_cells V * ( (s_c + eps^2)^{p/2} - eps^p ) / p  -  <f, u>
// where s_c is the cell-averaged squared curl magnitude (see
// cell_magnitude).  The eps^p/p offset makes J_eps(0) = 0 for every eps
// and lets eps = 0 coincide with the raw convex objective.
double energy(const EdgeField& u, const EdgeField& f, double p, double eps,
              const BoxDomain& g);

// Riesz representative of dJ_eps(u) in the weighted edge inner product:
//   curl_adjoint( W(u) .* curl u ) - f
// where the cell weights (s_c + eps^2)^{(p-2)/2} are pushed to faces by the
// exact adjoint of the cell averaging.  Exact derivative of energy().
EdgeField energy_gradient(const EdgeField& u, const EdgeField& f, double p,
                          double eps, const BoxDomain& g);

// Internals shared with the solver so line searches can reuse a cached
// curl: value of the curl part of the energy, and the face-weighted curl
// W(u) .* curl u used by both the gradient and the weak-form residual.
double curl_energy_value(const FaceField& w, double p, double eps,
                         const BoxDomain& g);
double curl_energy_value_shifted(const FaceField& w, const FaceField& dw,
                                 double alpha, double p, double eps,
                                 const BoxDomain& g);
FaceField weighted_curl(const FaceField& w, double p, double eps,
                        const BoxDomain& g);

}  // namespace pcurl

#endif
