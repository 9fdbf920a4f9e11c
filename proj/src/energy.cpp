#include "pcurl/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "pcurl/operators.hpp"
#include "pcurl/util.hpp"

namespace pcurl {

namespace {

void check_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("energy: exponent p must satisfy 1 < p < infinity");
}

// b^{p/2} with fast paths for the exponents exercised constantly.
inline double pow_half_p(double b, double p) {
  if (p == 2.0) return b;
  if (p == 3.0) return b * std::sqrt(b);
  if (p == 4.0) return b * b;
  if (p == 1.5) {
    const double r = std::sqrt(b);
    return r * std::sqrt(r);
  }
  return std::pow(b, 0.5 * p);
}

// b^{(p-2)/2}, same fast paths.
inline double pow_half_pm2(double b, double p) {
  if (p == 2.0) return 1.0;
  if (p == 3.0) return std::sqrt(b);
  if (p == 4.0) return b;
  if (p == 1.5) return 1.0 / std::sqrt(std::sqrt(b));
  return std::pow(b, 0.5 * (p - 2.0));
}

inline double cell_s(const FaceField& w, int i, int j, int k) {
  const double sx =
      0.5 * (w.x(i, j, k) * w.x(i, j, k) + w.x(i + 1, j, k) * w.x(i + 1, j, k));
  const double sy =
      0.5 * (w.y(i, j, k) * w.y(i, j, k) + w.y(i, j + 1, k) * w.y(i, j + 1, k));
  const double sz =
      0.5 * (w.z(i, j, k) * w.z(i, j, k) + w.z(i, j, k + 1) * w.z(i, j, k + 1));
  return sx + sy + sz;
}

}  // namespace

double curl_energy_value(const FaceField& w, double p, double eps,
                         const BoxDomain& g) {
  require_face_shape(w, g, "curl_energy_value");
  check_p(p);
  const double eps2 = eps * eps;
  const double offset = pow_half_p(eps2, p);  // eps^p
  const double vol = g.cell_volume();
  KahanSum acc;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        acc.add(vol * (pow_half_p(cell_s(w, i, j, k) + eps2, p) - offset) / p);
  return acc.value();
}

double curl_energy_value_shifted(const FaceField& w, const FaceField& dw,
                                 double alpha, double p, double eps,
                                 const BoxDomain& g) {
  require_face_shape(w, g, "curl_energy_value_shifted");
  if (!w.same_shape(dw))
    throw std::invalid_argument("curl_energy_value_shifted: shape mismatch");
  check_p(p);
  const double eps2 = eps * eps;
  const double offset = pow_half_p(eps2, p);
  const double vol = g.cell_volume();
  KahanSum acc;
  auto sq = [](double v) { return v * v; };
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double s =
            0.5 * (sq(w.x(i, j, k) + alpha * dw.x(i, j, k)) +
                   sq(w.x(i + 1, j, k) + alpha * dw.x(i + 1, j, k)) +
                   sq(w.y(i, j, k) + alpha * dw.y(i, j, k)) +
                   sq(w.y(i, j + 1, k) + alpha * dw.y(i, j + 1, k)) +
                   sq(w.z(i, j, k) + alpha * dw.z(i, j, k)) +
                   sq(w.z(i, j, k + 1) + alpha * dw.z(i, j, k + 1)));
        acc.add(vol * (pow_half_p(s + eps2, p) - offset) / p);
      }
  return acc.value();
}

FaceField weighted_curl(const FaceField& w, double p, double eps,
                        const BoxDomain& g) {
  require_face_shape(w, g, "weighted_curl");
  check_p(p);
  const double eps2 = eps * eps;
  const double half_vol = 0.5 * g.cell_volume();

  // chi_c = (s_c + eps^2)^{(p-2)/2} per cell ...
  CellField chi(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        chi.v(i, j, k) = pow_half_pm2(cell_s(w, i, j, k) + eps2, p);

  // ... pushed back to faces by the exact adjoint of the cell averaging:
  // each face accumulates V/2 * chi from its adjacent cells, normalized by
  // its own measure weight.  Interior faces see the mean of two cells,
  // boundary faces their single neighbor.
  FaceField out(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        double acc = 0.0;
        if (i > 0) acc += half_vol * chi.v(i - 1, j, k);
        if (i < g.nx) acc += half_vol * chi.v(i, j, k);
        out.x(i, j, k) = w.x(i, j, k) * acc / face_weight_x(g, i, j, k);
      }
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        double acc = 0.0;
        if (j > 0) acc += half_vol * chi.v(i, j - 1, k);
        if (j < g.ny) acc += half_vol * chi.v(i, j, k);
        out.y(i, j, k) = w.y(i, j, k) * acc / face_weight_y(g, i, j, k);
      }
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        double acc = 0.0;
        if (k > 0) acc += half_vol * chi.v(i, j, k - 1);
        if (k < g.nz) acc += half_vol * chi.v(i, j, k);
        out.z(i, j, k) = w.z(i, j, k) * acc / face_weight_z(g, i, j, k);
      }
  return out;
}

double energy(const EdgeField& u, const EdgeField& f, double p, double eps,
              const BoxDomain& g) {
  require_edge_shape(u, g, "energy");
  require_edge_shape(f, g, "energy");
  if (!(eps >= 0.0)) throw std::invalid_argument("energy: eps must be >= 0");
  FaceField w = curl(u, g);
  return curl_energy_value(w, p, eps, g) - inner(f, u, g);
}

EdgeField energy_gradient(const EdgeField& u, const EdgeField& f, double p,
                          double eps, const BoxDomain& g) {
  require_edge_shape(u, g, "energy_gradient");
  require_edge_shape(f, g, "energy_gradient");
  if (!(eps >= 0.0))
    throw std::invalid_argument("energy_gradient: eps must be >= 0");
  if (p < 2.0 && eps == 0.0)
    throw std::invalid_argument(
        "energy_gradient: p < 2 needs eps > 0 (weight is singular at zero curl)");
  FaceField w = curl(u, g);
  EdgeField grad = curl_adjoint(weighted_curl(w, p, eps, g), g);
  axpy(-1.0, f, grad);
  // f enters through the weighted pairing, so its Riesz representative is f
  // itself; boundary rows must still respect the constraint.
  apply_tangential_constraint(grad, g);
  return grad;
}

}  // namespace pcurl
