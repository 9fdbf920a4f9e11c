#pragma once

// Shared helpers for the test suites: random field builders and a
// cell-based flux-divergence used only to verify structural identities.

#include <pcurl/grid.hpp>
#include <pcurl/operators.hpp>
#include <pcurl/util.hpp>

namespace pcurl::testing {

inline double uniform_pm1(Rng &rng) { return 2.0 * rng.uniform01() - 1.0; }

inline EdgeField random_edge_field(const BoxDomain &g, unsigned long long seed,
                                   bool constrained = false) {
  EdgeField u(g);
  Rng rng(seed);
  for (auto *a : {&u.x, &u.y, &u.z})
    for (double &v : a->v) v = uniform_pm1(rng);
  if (constrained) apply_tangential_constraint(u, g);
  return u;
}

inline FaceField random_face_field(const BoxDomain &g, unsigned long long seed) {
  FaceField w(g);
  Rng rng(seed);
  for (auto *a : {&w.x, &w.y, &w.z})
    for (double &v : a->v) v = uniform_pm1(rng);
  return w;
}

// zero_boundary makes the node function vanish on all boundary nodes.
inline NodeField random_node_field(const BoxDomain &g, unsigned long long seed,
                                   bool zero_boundary = false) {
  NodeField phi(g);
  Rng rng(seed);
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        double v = uniform_pm1(rng);
        if (zero_boundary && (i == 0 || i == g.nx || j == 0 || j == g.ny ||
                              k == 0 || k == g.nz))
          v = 0.0;
        phi.v(i, j, k) = v;
      }
  return phi;
}

// Net outward flux of a face field through each cell boundary, divided by
// the cell volume. Applied to a curl this must vanish identically; it is
// deliberately not part of the library because nothing in the solver needs it.
inline CellField face_divergence(const FaceField &w, const BoxDomain &g) {
  CellField d(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        d.v(i, j, k) = (w.x(i + 1, j, k) - w.x(i, j, k)) / g.hx() +
                       (w.y(i, j + 1, k) - w.y(i, j, k)) / g.hy() +
                       (w.z(i, j, k + 1) - w.z(i, j, k)) / g.hz();
  return d;
}

inline double max_abs_cell(const CellField &c) { return max_abs(c.v); }

}  // namespace pcurl::testing
