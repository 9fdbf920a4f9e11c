#ifndef PCURL_SOURCES_HPP
#define PCURL_SOURCES_HPP

#include <cstdint>

#include "pcurl/grid.hpp"

namespace pcurl {

// Closed-form benchmark for the quadratic case (p = 2) on a box:
//   u  = (0, 0, sin(pi x / lx) sin(pi y / ly))
//   curl u = (b sin(ax) cos(by), -a cos(ax) sin(by), 0),  a = pi/lx, b = pi/ly
//   f  = (0, 0, (a^2 + b^2) sin(ax) sin(by))
// u is tangentially constrained and divergence-free, and solves the p = 2
// problem with source f.  On the unit cube max |curl u| = pi and
// ||curl u||_{L^2}^2 = pi^2 / 2.
EdgeField manufactured_u(const BoxDomain& g);
FaceField manufactured_curl(const BoxDomain& g);
EdgeField manufactured_source(const BoxDomain& g);

// Pointwise evaluations of the same closed forms (for error studies).
void manufactured_u_at(const BoxDomain& g, double x, double y, double z,
                       double out[3]);
void manufactured_curl_at(const BoxDomain& g, double x, double y, double z,
                          double out[3]);

// Random smooth divergence-free source with zero tangential trace: a
// superposition of the box's solenoidal trigonometric modes
//   (cx cos(la x) sin(mb y) sin(nc z), cy sin cos sin, cz sin sin cos)
// with the coefficient vector projected orthogonal to the wavevector, for
// 1 <= l, m, n <= smoothness.  Sampled on edge midpoints and projected so
// the discrete divergence vanishes.  Bitwise deterministic per seed.
EdgeField make_random_divfree_source(const BoxDomain& g, std::uint64_t seed,
                                     int smoothness, double amplitude = 1.0);

// Uniform noise on interior edges, zero on boundary edges (test scaffolding
// and random feasible starts; not divergence-free).
EdgeField random_constrained_field(const BoxDomain& g, std::uint64_t seed,
                                   double amplitude = 1.0);

// z-invariant source (0, 0, f(x,y)) sampled on z-edges; f given as a
// callable of (x, y).  Boundary z-edges are zeroed (they never enter the
// weak form, which only pairs f with constrained test fields).
template <class F>
EdgeField z_invariant_source(const BoxDomain& g, F&& f) {
  EdgeField e(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 1; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i)
        e.z(i, j, k) = f(i * g.hx(), j * g.hy());
  return e;
}

}  // namespace pcurl

#endif
