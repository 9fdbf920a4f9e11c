#include "pcurl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pcurl/util.hpp"

namespace pcurl {

BoxDomain::BoxDomain(double lx_, double ly_, double lz_, int nx_, int ny_,
                     int nz_)
    : lx(lx_), ly(ly_), lz(lz_), nx(nx_), ny(ny_), nz(nz_) {
  if (!(lx > 0.0) || !(ly > 0.0) || !(lz > 0.0) || !std::isfinite(lx) ||
      !std::isfinite(ly) || !std::isfinite(lz))
    throw std::invalid_argument("BoxDomain: side lengths must be positive and finite");
  if (nx < 2 || ny < 2 || nz < 2)
    throw std::invalid_argument("BoxDomain: resolutions must be at least 2");
}

double BoxDomain::hmin() const { return std::min({hx(), hy(), hz()}); }

namespace {

[[noreturn]] void shape_error(const char* op, const char* kind) {
  throw std::invalid_argument(std::string(op) + ": " + kind +
                              " field shape does not match grid");
}

}  // namespace

void require_edge_shape(const EdgeField& u, const BoxDomain& g, const char* op) {
  EdgeField ref(g);
  if (!u.same_shape(ref)) shape_error(op, "edge");
}

void require_face_shape(const FaceField& w, const BoxDomain& g, const char* op) {
  FaceField ref(g);
  if (!w.same_shape(ref)) shape_error(op, "face");
}

void require_node_shape(const NodeField& f, const BoxDomain& g, const char* op) {
  if (f.v.nx != g.nx + 1 || f.v.ny != g.ny + 1 || f.v.nz != g.nz + 1)
    shape_error(op, "node");
}

void require_cell_shape(const CellField& c, const BoxDomain& g, const char* op) {
  if (c.v.nx != g.nx || c.v.ny != g.ny || c.v.nz != g.nz)
    shape_error(op, "cell");
}

double inner(const EdgeField& a, const EdgeField& b, const BoxDomain& g) {
  require_edge_shape(a, g, "inner");
  if (!a.same_shape(b)) shape_error("inner", "edge");
  KahanSum s;
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        s.add(edge_weight_x(g, i, j, k) * a.x(i, j, k) * b.x(i, j, k));
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        s.add(edge_weight_y(g, i, j, k) * a.y(i, j, k) * b.y(i, j, k));
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        s.add(edge_weight_z(g, i, j, k) * a.z(i, j, k) * b.z(i, j, k));
  return s.value();
}

double inner(const FaceField& a, const FaceField& b, const BoxDomain& g) {
  require_face_shape(a, g, "inner");
  if (!a.same_shape(b)) shape_error("inner", "face");
  KahanSum s;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        s.add(face_weight_x(g, i, j, k) * a.x(i, j, k) * b.x(i, j, k));
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        s.add(face_weight_y(g, i, j, k) * a.y(i, j, k) * b.y(i, j, k));
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        s.add(face_weight_z(g, i, j, k) * a.z(i, j, k) * b.z(i, j, k));
  return s.value();
}

double inner(const NodeField& a, const NodeField& b, const BoxDomain& g) {
  require_node_shape(a, g, "inner");
  if (!a.same_shape(b)) shape_error("inner", "node");
  KahanSum s;
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        s.add(node_weight(g, i, j, k) * a.v(i, j, k) * b.v(i, j, k));
  return s.value();
}

double inner(const CellField& a, const CellField& b, const BoxDomain& g) {
  require_cell_shape(a, g, "inner");
  if (!a.same_shape(b)) shape_error("inner", "cell");
  KahanSum s;
  const double vol = g.cell_volume();
  for (std::size_t n = 0; n < a.v.size(); ++n) s.add(vol * a.v.v[n] * b.v.v[n]);
  return s.value();
}

double integrate(const CellField& c, const BoxDomain& g) {
  require_cell_shape(c, g, "integrate");
  KahanSum s;
  const double vol = g.cell_volume();
  for (double x : c.v.v) s.add(vol * x);
  return s.value();
}

double integrate(const NodeField& f, const BoxDomain& g) {
  require_node_shape(f, g, "integrate");
  KahanSum s;
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        s.add(node_weight(g, i, j, k) * f.v(i, j, k));
  return s.value();
}

double norm(const EdgeField& u, const BoxDomain& g) {
  return std::sqrt(std::max(0.0, inner(u, u, g)));
}

double norm(const FaceField& w, const BoxDomain& g) {
  return std::sqrt(std::max(0.0, inner(w, w, g)));
}

double max_abs(const Array3& a) {
  double m = 0.0;
  for (double x : a.v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const EdgeField& u) {
  return std::max({max_abs(u.x), max_abs(u.y), max_abs(u.z)});
}

double max_abs(const FaceField& w) {
  return std::max({max_abs(w.x), max_abs(w.y), max_abs(w.z)});
}

namespace {
void axpy_arr(double a, const Array3& x, Array3& y) {
  for (std::size_t n = 0; n < y.v.size(); ++n) y.v[n] += a * x.v[n];
}
}  // namespace

void axpy(double a, const EdgeField& x, EdgeField& y) {
  if (!x.same_shape(y)) shape_error("axpy", "edge");
  axpy_arr(a, x.x, y.x);
  axpy_arr(a, x.y, y.y);
  axpy_arr(a, x.z, y.z);
}

void axpy(double a, const FaceField& x, FaceField& y) {
  if (!x.same_shape(y)) shape_error("axpy", "face");
  axpy_arr(a, x.x, y.x);
  axpy_arr(a, x.y, y.y);
  axpy_arr(a, x.z, y.z);
}

void scale(EdgeField& u, double a) {
  for (double& v : u.x.v) v *= a;
  for (double& v : u.y.v) v *= a;
  for (double& v : u.z.v) v *= a;
}

}  // namespace pcurl
