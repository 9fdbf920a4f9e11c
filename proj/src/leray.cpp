#include "pcurl/leray.hpp"

#include "pcurl/operators.hpp"
#include "pcurl/poisson.hpp"

namespace pcurl {

EdgeField leray_project(const EdgeField& v, const BoxDomain& g,
                        double poisson_tol) {
  require_edge_shape(v, g, "leray_project");
  NodeField d = divergence(v, g);
  // Boundary nodes carry one-sided diagnostics only; the Dirichlet Poisson
  // solve sees interior values.
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        if (i == 0 || i == g.nx || j == 0 || j == g.ny || k == 0 || k == g.nz)
          d.v(i, j, k) = 0.0;
  NodeField phi = poisson_solve(d, g, poisson_tol);
  EdgeField grad_phi = gradient(phi, g);
  EdgeField out = v;
  axpy(-1.0, grad_phi, out);
  return out;
}

ProjectedSource project_source(const EdgeField& f_raw, const BoxDomain& g,
                               double poisson_tol) {
  require_edge_shape(f_raw, g, "project_source");
  if (!is_tangentially_constrained(f_raw, g))
    throw std::invalid_argument(
        "project_source: source must be tangentially constrained");
  EdgeField projected = leray_project(f_raw, g, poisson_tol);
  EdgeField removed = f_raw;
  axpy(-1.0, projected, removed);
  return {std::move(projected), norm(removed, g)};
}

}  // namespace pcurl
