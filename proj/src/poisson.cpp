#include "pcurl/poisson.hpp"

#include <cmath>

#include "pcurl/util.hpp"

namespace pcurl {

namespace {

// Interior-node dot product (boundary nodes of both arguments are zero or
// ignored throughout the solver).
double dot_interior(const NodeField& a, const NodeField& b, const BoxDomain& g) {
  KahanSum s;
  for (int k = 1; k < g.nz; ++k)
    for (int j = 1; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i) s.add(a.v(i, j, k) * b.v(i, j, k));
  return s.value();
}

// y = -lap(x) on interior nodes (positive definite form).
void apply_neg_laplacian(const NodeField& x, NodeField& y, const BoxDomain& g) {
  const double ax = 1.0 / (g.hx() * g.hx());
  const double ay = 1.0 / (g.hy() * g.hy());
  const double az = 1.0 / (g.hz() * g.hz());
  const double diag = 2.0 * (ax + ay + az);
  for (int k = 1; k < g.nz; ++k)
    for (int j = 1; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i)
        y.v(i, j, k) = diag * x.v(i, j, k) -
                       ax * (x.v(i + 1, j, k) + x.v(i - 1, j, k)) -
                       ay * (x.v(i, j + 1, k) + x.v(i, j - 1, k)) -
                       az * (x.v(i, j, k + 1) + x.v(i, j, k - 1));
}

}  // namespace

NodeField laplacian(const NodeField& phi, const BoxDomain& g) {
  require_node_shape(phi, g, "laplacian");
  NodeField out(g);
  apply_neg_laplacian(phi, out, g);
  for (int k = 1; k < g.nz; ++k)
    for (int j = 1; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i) out.v(i, j, k) = -out.v(i, j, k);
  return out;
}

NodeField poisson_solve(const NodeField& rhs, const BoxDomain& g, double tol,
                        int max_iters, std::vector<double>* trace) {
  require_node_shape(rhs, g, "poisson_solve");
  if (!(tol > 0.0)) throw std::invalid_argument("poisson_solve: tol must be > 0");

  // Work on b = -rhs restricted to interior nodes so the operator is SPD.
  NodeField b(g);
  for (int k = 1; k < g.nz; ++k)
    for (int j = 1; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i) b.v(i, j, k) = -rhs.v(i, j, k);

  NodeField x(g), r = b, q(g);
  const double bnorm = std::sqrt(dot_interior(b, b, g));
  if (bnorm == 0.0) return x;

  NodeField p = r;
  double rr = dot_interior(r, r, g);
  if (max_iters <= 0) {
    // Dirichlet CG needs O(N) iterations per digit; this cap is generous.
    const long n = static_cast<long>(g.nx) + g.ny + g.nz;
    max_iters = static_cast<int>(40 * n + 200);
  }
  for (int it = 0; it < max_iters; ++it) {
    if (trace) {
      // Quadratic form 0.5 x'Ax - b'x = -0.5 x'(b + r); decreases every
      // CG step, which is what the regression trace asserts.
      KahanSum f;
      for (int k = 1; k < g.nz; ++k)
        for (int j = 1; j < g.ny; ++j)
          for (int i = 1; i < g.nx; ++i)
            f.add(x.v(i, j, k) * (b.v(i, j, k) + r.v(i, j, k)));
      trace->push_back(-0.5 * f.value());
    }
    if (std::sqrt(rr) <= tol * bnorm) return x;
    apply_neg_laplacian(p, q, g);
    const double pq = dot_interior(p, q, g);
    const double alpha = rr / pq;
    for (int k = 1; k < g.nz; ++k)
      for (int j = 1; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
          x.v(i, j, k) += alpha * p.v(i, j, k);
          r.v(i, j, k) -= alpha * q.v(i, j, k);
        }
    const double rr_new = dot_interior(r, r, g);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (int k = 1; k < g.nz; ++k)
      for (int j = 1; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
          p.v(i, j, k) = r.v(i, j, k) + beta * p.v(i, j, k);
  }
  if (std::sqrt(rr) <= tol * bnorm) return x;
  throw PoissonFailure("poisson_solve: conjugate gradients did not reach the "
                       "requested tolerance within the iteration cap",
                       std::sqrt(rr) / bnorm);
}

}  // namespace pcurl
