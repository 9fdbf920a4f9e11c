#ifndef PCURL_GRID_HPP
#define PCURL_GRID_HPP

#include <cstddef>
#include <vector>

namespace pcurl {

// Axis-aligned box [0,lx] x [0,ly] x [0,lz] split into nx*ny*nz uniform
// cells.  Degrees of freedom are staggered: vector fields live on edges,
// their curls on faces, scalar potentials on nodes and magnitudes on cells.
struct BoxDomain {
  double lx = 1.0, ly = 1.0, lz = 1.0;
  int nx = 2, ny = 2, nz = 2;

  BoxDomain() = default;
  BoxDomain(double lx_, double ly_, double lz_, int nx_, int ny_, int nz_);

  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
  double hz() const { return lz / nz; }
  double hmin() const;
  double cell_volume() const { return hx() * hy() * hz(); }
  double volume() const { return lx * ly * lz; }
};

// Dense scalar array over a structured index box, x-fastest storage.
struct Array3 {
  int nx = 0, ny = 0, nz = 0;
  std::vector<double> v;

  Array3() = default;
  Array3(int nx_, int ny_, int nz_)
      : nx(nx_), ny(ny_), nz(nz_),
        v(static_cast<std::size_t>(nx_) * ny_ * nz_, 0.0) {}

  std::size_t idx(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(ny) * static_cast<std::size_t>(k));
  }
  double& operator()(int i, int j, int k) { return v[idx(i, j, k)]; }
  double operator()(int i, int j, int k) const { return v[idx(i, j, k)]; }

  std::size_t size() const { return v.size(); }
  bool same_shape(const Array3& o) const {
    return nx == o.nx && ny == o.ny && nz == o.nz;
  }
  void fill(double x) { v.assign(v.size(), x); }
};

// Tangential vector field sampled on edge midpoints.  Component d is
// stored on edges running in direction d.
struct EdgeField {
  Array3 x, y, z;

  EdgeField() = default;
  explicit EdgeField(const BoxDomain& g)
      : x(g.nx, g.ny + 1, g.nz + 1),
        y(g.nx + 1, g.ny, g.nz + 1),
        z(g.nx + 1, g.ny + 1, g.nz) {}
  bool same_shape(const EdgeField& o) const {
    return x.same_shape(o.x) && y.same_shape(o.y) && z.same_shape(o.z);
  }
  void fill(double v) { x.fill(v); y.fill(v); z.fill(v); }
};

// Normal flux-like field sampled on face centers; component d sits on the
// faces with normal d.
struct FaceField {
  Array3 x, y, z;

  FaceField() = default;
  explicit FaceField(const BoxDomain& g)
      : x(g.nx + 1, g.ny, g.nz),
        y(g.nx, g.ny + 1, g.nz),
        z(g.nx, g.ny, g.nz + 1) {}
  bool same_shape(const FaceField& o) const {
    return x.same_shape(o.x) && y.same_shape(o.y) && z.same_shape(o.z);
  }
  void fill(double v) { x.fill(v); y.fill(v); z.fill(v); }
};

struct NodeField {
  Array3 v;

  NodeField() = default;
  explicit NodeField(const BoxDomain& g) : v(g.nx + 1, g.ny + 1, g.nz + 1) {}
  bool same_shape(const NodeField& o) const { return v.same_shape(o.v); }
};

struct CellField {
  Array3 v;

  CellField() = default;
  explicit CellField(const BoxDomain& g) : v(g.nx, g.ny, g.nz) {}
  bool same_shape(const CellField& o) const { return v.same_shape(o.v); }
};

// Shape guards; ops throw std::invalid_argument via these on mismatch.
void require_edge_shape(const EdgeField& u, const BoxDomain& g, const char* op);
void require_face_shape(const FaceField& w, const BoxDomain& g, const char* op);
void require_node_shape(const NodeField& f, const BoxDomain& g, const char* op);
void require_cell_shape(const CellField& c, const BoxDomain& g, const char* op);

// Trapezoid end-point factor: DOFs sitting on the boundary of a transverse
// direction own half a cell there.
inline double end_half(int i, int n) { return (i == 0 || i == n) ? 0.5 : 1.0; }

// Volume share of each DOF.  Chosen so that constants integrate to the box
// volume and, crucially, every edge adjacent to an interior node carries
// the full cell volume -- that makes the edge<->node summation-by-parts
// exact, which the projection and the adjoint-curl identities rely on.
inline double edge_weight_x(const BoxDomain& g, int, int j, int k) {
  return g.cell_volume() * end_half(j, g.ny) * end_half(k, g.nz);
}
inline double edge_weight_y(const BoxDomain& g, int i, int, int k) {
  return g.cell_volume() * end_half(i, g.nx) * end_half(k, g.nz);
}
inline double edge_weight_z(const BoxDomain& g, int i, int j, int) {
  return g.cell_volume() * end_half(i, g.nx) * end_half(j, g.ny);
}
inline double face_weight_x(const BoxDomain& g, int i, int, int) {
  return g.cell_volume() * end_half(i, g.nx);
}
inline double face_weight_y(const BoxDomain& g, int, int j, int) {
  return g.cell_volume() * end_half(j, g.ny);
}
inline double face_weight_z(const BoxDomain& g, int, int, int k) {
  return g.cell_volume() * end_half(k, g.nz);
}
inline double node_weight(const BoxDomain& g, int i, int j, int k) {
  return g.cell_volume() * end_half(i, g.nx) * end_half(j, g.ny) *
         end_half(k, g.nz);
}

// Measure-weighted inner products and integrals.
double inner(const EdgeField& a, const EdgeField& b, const BoxDomain& g);
double inner(const FaceField& a, const FaceField& b, const BoxDomain& g);
double inner(const NodeField& a, const NodeField& b, const BoxDomain& g);
double inner(const CellField& a, const CellField& b, const BoxDomain& g);
double integrate(const CellField& c, const BoxDomain& g);
double integrate(const NodeField& f, const BoxDomain& g);

double norm(const EdgeField& u, const BoxDomain& g);
double norm(const FaceField& w, const BoxDomain& g);

double max_abs(const Array3& a);
double max_abs(const EdgeField& u);
double max_abs(const FaceField& w);

// y += a*x, elementwise, shapes must agree.
void axpy(double a, const EdgeField& x, EdgeField& y);
void axpy(double a, const FaceField& x, FaceField& y);
void scale(EdgeField& u, double a);

}  // namespace pcurl

#endif
