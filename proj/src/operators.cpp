#include "pcurl/operators.hpp"

#include <algorithm>
#include <cmath>

namespace pcurl {

FaceField curl(const EdgeField& u, const BoxDomain& g) {
  require_edge_shape(u, g, "curl");
  FaceField w(g);
  const double hx = g.hx(), hy = g.hy(), hz = g.hz();
  // x-faces: d(uz)/dy - d(uy)/dz
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        w.x(i, j, k) = (u.z(i, j + 1, k) - u.z(i, j, k)) / hy -
                       (u.y(i, j, k + 1) - u.y(i, j, k)) / hz;
  // y-faces: d(ux)/dz - d(uz)/dx
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        w.y(i, j, k) = (u.x(i, j, k + 1) - u.x(i, j, k)) / hz -
                       (u.z(i + 1, j, k) - u.z(i, j, k)) / hx;
  // z-faces: d(uy)/dx - d(ux)/dy
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        w.z(i, j, k) = (u.y(i + 1, j, k) - u.y(i, j, k)) / hx -
                       (u.x(i, j + 1, k) - u.x(i, j, k)) / hy;
  return w;
}

NodeField divergence(const EdgeField& u, const BoxDomain& g) {
  require_edge_shape(u, g, "divergence");
  NodeField d(g);
  const double hx = g.hx(), hy = g.hy(), hz = g.hz();
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        double s = 0.0;
        if (i < g.nx) s += u.x(i, j, k) / hx;
        if (i > 0) s -= u.x(i - 1, j, k) / hx;
        if (j < g.ny) s += u.y(i, j, k) / hy;
        if (j > 0) s -= u.y(i, j - 1, k) / hy;
        if (k < g.nz) s += u.z(i, j, k) / hz;
        if (k > 0) s -= u.z(i, j, k - 1) / hz;
        d.v(i, j, k) = s;
      }
  return d;
}

EdgeField gradient(const NodeField& phi, const BoxDomain& g) {
  require_node_shape(phi, g, "gradient");
  EdgeField e(g);
  const double hx = g.hx(), hy = g.hy(), hz = g.hz();
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        e.x(i, j, k) = (phi.v(i + 1, j, k) - phi.v(i, j, k)) / hx;
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        e.y(i, j, k) = (phi.v(i, j + 1, k) - phi.v(i, j, k)) / hy;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        e.z(i, j, k) = (phi.v(i, j, k + 1) - phi.v(i, j, k)) / hz;
  return e;
}

EdgeField curl_adjoint(const FaceField& w, const BoxDomain& g) {
  require_face_shape(w, g, "curl_adjoint");
  EdgeField a(g);
  const double hx = g.hx(), hy = g.hy(), hz = g.hz();
  // Transpose of the curl stencil, conjugated by the diagonal volume
  // weights: a_e = (1/m_e) * sum_f C_{f,e} m_f w_f.  Boundary-edge rows
  // stay zero so the identity holds against constrained edge fields.
  for (int k = 1; k < g.nz; ++k)
    for (int j = 1; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double me = edge_weight_x(g, i, j, k);
        a.x(i, j, k) =
            ((face_weight_z(g, i, j, k) * w.z(i, j, k) -
              face_weight_z(g, i, j - 1, k) * w.z(i, j - 1, k)) / hy +
             (face_weight_y(g, i, j, k - 1) * w.y(i, j, k - 1) -
              face_weight_y(g, i, j, k) * w.y(i, j, k)) / hz) / me;
      }
  for (int k = 1; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i) {
        const double me = edge_weight_y(g, i, j, k);
        a.y(i, j, k) =
            ((face_weight_x(g, i, j, k) * w.x(i, j, k) -
              face_weight_x(g, i, j, k - 1) * w.x(i, j, k - 1)) / hz +
             (face_weight_z(g, i - 1, j, k) * w.z(i - 1, j, k) -
              face_weight_z(g, i, j, k) * w.z(i, j, k)) / hx) / me;
      }
  for (int k = 0; k < g.nz; ++k)
    for (int j = 1; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i) {
        const double me = edge_weight_z(g, i, j, k);
        a.z(i, j, k) =
            ((face_weight_y(g, i, j, k) * w.y(i, j, k) -
              face_weight_y(g, i - 1, j, k) * w.y(i - 1, j, k)) / hx +
             (face_weight_x(g, i, j - 1, k) * w.x(i, j - 1, k) -
              face_weight_x(g, i, j, k) * w.x(i, j, k)) / hy) / me;
      }
  return a;
}

CellField cell_magnitude(const FaceField& w, const BoxDomain& g) {
  require_face_shape(w, g, "cell_magnitude");
  CellField m(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double sx =
            0.5 * (w.x(i, j, k) * w.x(i, j, k) + w.x(i + 1, j, k) * w.x(i + 1, j, k));
        const double sy =
            0.5 * (w.y(i, j, k) * w.y(i, j, k) + w.y(i, j + 1, k) * w.y(i, j + 1, k));
        const double sz =
            0.5 * (w.z(i, j, k) * w.z(i, j, k) + w.z(i, j, k + 1) * w.z(i, j, k + 1));
        m.v(i, j, k) = std::sqrt(sx + sy + sz);
      }
  return m;
}

CellField cell_magnitude_edges(const EdgeField& u, const BoxDomain& g) {
  require_edge_shape(u, g, "cell_magnitude_edges");
  CellField m(g);
  // Each cell sees four parallel edges per direction; their mean square is
  // a second-order sample of that component's square at the cell center.
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        double sx = 0.0, sy = 0.0, sz = 0.0;
        for (int b = 0; b <= 1; ++b)
          for (int a = 0; a <= 1; ++a) {
            sx += u.x(i, j + a, k + b) * u.x(i, j + a, k + b);
            sy += u.y(i + a, j, k + b) * u.y(i + a, j, k + b);
            sz += u.z(i + a, j + b, k) * u.z(i + a, j + b, k);
          }
        m.v(i, j, k) = std::sqrt(0.25 * (sx + sy + sz));
      }
  return m;
}

bool is_boundary_edge_x(const BoxDomain& g, int, int j, int k) {
  return j == 0 || j == g.ny || k == 0 || k == g.nz;
}
bool is_boundary_edge_y(const BoxDomain& g, int i, int, int k) {
  return i == 0 || i == g.nx || k == 0 || k == g.nz;
}
bool is_boundary_edge_z(const BoxDomain& g, int i, int j, int) {
  return i == 0 || i == g.nx || j == 0 || j == g.ny;
}

void apply_tangential_constraint(EdgeField& u, const BoxDomain& g) {
  require_edge_shape(u, g, "apply_tangential_constraint");
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (is_boundary_edge_x(g, i, j, k)) u.x(i, j, k) = 0.0;
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        if (is_boundary_edge_y(g, i, j, k)) u.y(i, j, k) = 0.0;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        if (is_boundary_edge_z(g, i, j, k)) u.z(i, j, k) = 0.0;
}

bool is_tangentially_constrained(const EdgeField& u, const BoxDomain& g) {
  require_edge_shape(u, g, "is_tangentially_constrained");
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (is_boundary_edge_x(g, i, j, k) && u.x(i, j, k) != 0.0) return false;
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        if (is_boundary_edge_y(g, i, j, k) && u.y(i, j, k) != 0.0) return false;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        if (is_boundary_edge_z(g, i, j, k) && u.z(i, j, k) != 0.0) return false;
  return true;
}

double max_interior_divergence(const EdgeField& u, const BoxDomain& g) {
  NodeField d = divergence(u, g);
  double m = 0.0;
  for (int k = 1; k < g.nz; ++k)
    for (int j = 1; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i) m = std::max(m, std::abs(d.v(i, j, k)));
  return m;
}

}  // namespace pcurl
