#ifndef PCURL_OPERATORS_HPP
#define PCURL_OPERATORS_HPP

#include "pcurl/grid.hpp"

namespace pcurl {

// Circulation-per-area curl: one value per face, exact for fields whose
// curl is constant across the face, second-order consistent otherwise.
FaceField curl(const EdgeField& u, const BoxDomain& g);

// Net flux per node.  Interior nodes carry the usual staggered divergence;
// at boundary nodes the stencil sums whatever edges exist (missing edges
// count as zero flux) and is reported for diagnostics only.
NodeField divergence(const EdgeField& u, const BoxDomain& g);

// Endpoint difference over spacing.  A zero-boundary potential yields a
// tangentially constrained edge field.
EdgeField gradient(const NodeField& phi, const BoxDomain& g);

// Exact adjoint of curl with respect to the measure-weighted edge/face
// inner products, restricted to tangentially constrained edge fields:
//   inner(curl(u), w) == inner(u, curl_adjoint(w))  for all constrained u.
// Rows belonging to boundary edges are zeroed.
EdgeField curl_adjoint(const FaceField& w, const BoxDomain& g);

// Pointwise magnitude of a face field seen from cell centers: per
// component, average the squares of the two adjacent face values, sum the
// three components, take the square root.
CellField cell_magnitude(const FaceField& w, const BoxDomain& g);

// Same idea for edge fields (used to sample |f| on cells): per component,
// average the squares of the four edges of that direction bounding the
// cell, sum components, square root.
CellField cell_magnitude_edges(const EdgeField& u, const BoxDomain& g);

// An edge lies in the domain boundary iff one of its transverse indices is
// extremal; such edges carry tangential components of the field.
bool is_boundary_edge_x(const BoxDomain& g, int i, int j, int k);
bool is_boundary_edge_y(const BoxDomain& g, int i, int j, int k);
bool is_boundary_edge_z(const BoxDomain& g, int i, int j, int k);

// Zero all boundary edges in place (the discrete u x nu = 0 constraint).
void apply_tangential_constraint(EdgeField& u, const BoxDomain& g);

// True iff every boundary edge is exactly zero.
bool is_tangentially_constrained(const EdgeField& u, const BoxDomain& g);

// Max |divergence| over interior nodes only.
double max_interior_divergence(const EdgeField& u, const BoxDomain& g);

}  // namespace pcurl

#endif
