#include "pcurl/plaplace2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pcurl/util.hpp"

namespace pcurl {

Grid2D::Grid2D(double lx_, double ly_, int nx_, int ny_)
    : lx(lx_), ly(ly_), nx(nx_), ny(ny_) {
  if (!(lx > 0.0) || !(ly > 0.0))
    throw std::invalid_argument("Grid2D: side lengths must be positive");
  if (nx < 2 || ny < 2)
    throw std::invalid_argument("Grid2D: resolutions must be at least 2");
}

namespace {

void require_shape(const Scalar2DField& f, const Grid2D& g, const char* op) {
  if (f.nx != g.nx || f.ny != g.ny)
    throw std::invalid_argument(std::string(op) + ": field shape does not match grid");
}

inline double half_weight(int i, int n) { return (i == 0 || i == n) ? 0.5 : 1.0; }

inline double psi(double s, double p, double eps2) {
  // ((s + eps^2)^{p/2} - eps^p) / p
  const double b = s + eps2;
  double bp, ep;
  if (p == 2.0) {
    bp = b; ep = eps2;
  } else if (p == 3.0) {
    bp = b * std::sqrt(b); ep = eps2 * std::sqrt(eps2);
  } else {
    bp = std::pow(b, 0.5 * p); ep = std::pow(eps2, 0.5 * p);
  }
  return (bp - ep) / p;
}

inline double chi(double s, double p, double eps2) {
  // (s + eps^2)^{(p-2)/2}
  const double b = s + eps2;
  if (p == 2.0) return 1.0;
  if (p == 3.0) return std::sqrt(b);
  return std::pow(b, 0.5 * (p - 2.0));
}

// Triangle gradients for cell (i,j): lower-left triangle uses nodes
// (i,j),(i+1,j),(i,j+1); upper-right uses (i+1,j+1),(i,j+1),(i+1,j).
struct TriPair {
  double lx_, ly_;  // lower triangle gradient
  double ux_, uy_;  // upper triangle gradient
};

inline TriPair cell_gradients(const Scalar2DField& phi, int i, int j,
                              double hx, double hy) {
  const double p00 = phi.at(i, j), p10 = phi.at(i + 1, j);
  const double p01 = phi.at(i, j + 1), p11 = phi.at(i + 1, j + 1);
  return {(p10 - p00) / hx, (p01 - p00) / hy,
          (p11 - p01) / hx, (p11 - p10) / hy};
}

double node_source_sum(const Scalar2DField& phi, const Scalar2DField& f,
                       const Grid2D& g) {
  KahanSum s;
  const double a = g.hx() * g.hy();
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      s.add(a * half_weight(i, g.nx) * half_weight(j, g.ny) * f.at(i, j) *
            phi.at(i, j));
  return s.value();
}

}  // namespace

double plaplace_energy(const Scalar2DField& phi, const Scalar2DField& f,
                       double p, double eps, const Grid2D& g) {
  require_shape(phi, g, "plaplace_energy");
  require_shape(f, g, "plaplace_energy");
  const double eps2 = eps * eps;
  const double tri_area = 0.5 * g.hx() * g.hy();
  KahanSum acc;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const TriPair t = cell_gradients(phi, i, j, g.hx(), g.hy());
      acc.add(tri_area * psi(t.lx_ * t.lx_ + t.ly_ * t.ly_, p, eps2));
      acc.add(tri_area * psi(t.ux_ * t.ux_ + t.uy_ * t.uy_, p, eps2));
    }
  return acc.value() - node_source_sum(phi, f, g);
}

Scalar2DField plaplace_gradient(const Scalar2DField& phi, const Scalar2DField& f,
                                double p, double eps, const Grid2D& g) {
  require_shape(phi, g, "plaplace_gradient");
  require_shape(f, g, "plaplace_gradient");
  const double eps2 = eps * eps;
  const double hx = g.hx(), hy = g.hy();
  const double tri_area = 0.5 * hx * hy;
  Scalar2DField grad(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const TriPair t = cell_gradients(phi, i, j, hx, hy);
      const double cl = tri_area * chi(t.lx_ * t.lx_ + t.ly_ * t.ly_, p, eps2);
      const double cu = tri_area * chi(t.ux_ * t.ux_ + t.uy_ * t.uy_, p, eps2);
      // d/dphi of (1/2)|grad|^2 per triangle, times chi.
      grad.at(i, j) += cl * (-t.lx_ / hx - t.ly_ / hy);
      grad.at(i + 1, j) += cl * (t.lx_ / hx) + cu * (-t.uy_ / hy);
      grad.at(i, j + 1) += cl * (t.ly_ / hy) + cu * (-t.ux_ / hx);
      grad.at(i + 1, j + 1) += cu * (t.ux_ / hx + t.uy_ / hy);
    }
  const double a = hx * hy;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      if (i == 0 || i == g.nx || j == 0 || j == g.ny) {
        grad.at(i, j) = 0.0;  // Dirichlet rows
      } else {
        grad.at(i, j) -= a * f.at(i, j);
      }
    }
  return grad;
}

namespace {

double grad_norm2(const Scalar2DField& grad) {
  KahanSum s;
  for (double x : grad.v) s.add(x * x);
  return std::sqrt(s.value());
}

}  // namespace

PLaplaceResult solve_plaplace(const Scalar2DField& f, const PLaplaceConfig& cfg_in,
                              const Grid2D& g) {
  require_shape(f, g, "solve_plaplace");
  PLaplaceConfig cfg = cfg_in;
  if (!(cfg.p >= 1.05))
    throw std::invalid_argument("solve_plaplace: p must be at least 1.05");
  if (cfg.eps_schedule.empty())
    cfg.eps_schedule = SolverConfig::default_schedule(cfg.p);
  if (cfg.p < 2.0 && cfg.eps_schedule.back() == 0.0)
    throw std::invalid_argument("solve_plaplace: p < 2 needs positive terminal eps");

  PLaplaceResult res;
  res.phi = Scalar2DField(g);

  double fscale = 0.0;
  for (double x : f.v) fscale = std::max(fscale, std::abs(x));
  const double tol_scale = std::max(1.0, fscale);

  bool ok = true;
  int total = 0;
  // Barzilai-Borwein descent with a Grippo-style nonmonotone safeguard.
  for (double eps : cfg.eps_schedule) {
    Scalar2DField grad = plaplace_gradient(res.phi, f, cfg.p, eps, g);
    double gn = grad_norm2(grad);
    double j = plaplace_energy(res.phi, f, cfg.p, eps, g);
    std::vector<double> recent = {j};
    Scalar2DField phi_prev = res.phi, grad_prev = grad;
    double alpha = 1.0 / std::max(1.0, gn);
    int it = 0;
    while (gn > cfg.grad_tol * tol_scale && it < cfg.max_iters) {
      Scalar2DField trial(g);
      double jt = 0.0;
      const double jref = *std::max_element(recent.begin(), recent.end());
      bool accepted = false;
      double a = alpha;
      for (int bt = 0; bt < 60; ++bt) {
        for (std::size_t n = 0; n < trial.v.size(); ++n)
          trial.v[n] = res.phi.v[n] - a * grad.v[n];
        jt = plaplace_energy(trial, f, cfg.p, eps, g);
        if (jt <= jref - 1e-4 * a * gn * gn) {
          accepted = true;
          break;
        }
        a *= 0.5;
      }
      if (!accepted) break;
      phi_prev = res.phi;
      grad_prev = grad;
      res.phi = std::move(trial);
      j = jt;
      recent.push_back(j);
      if (recent.size() > 10) recent.erase(recent.begin());
      grad = plaplace_gradient(res.phi, f, cfg.p, eps, g);
      gn = grad_norm2(grad);
      // BB1 step from the accepted move.
      KahanSum ss, sy;
      for (std::size_t n = 0; n < grad.v.size(); ++n) {
        const double s = res.phi.v[n] - phi_prev.v[n];
        const double y = grad.v[n] - grad_prev.v[n];
        ss.add(s * s);
        sy.add(s * y);
      }
      alpha = (sy.value() > 0.0) ? std::min(1e8, std::max(1e-12, ss.value() / sy.value()))
                                 : 2.0 * a;
      ++it;
    }
    total += it;
    res.energy = plaplace_energy(res.phi, f, cfg.p, eps, g);
    res.grad_norm = gn;
    if (gn > cfg.grad_tol * tol_scale) {
      ok = false;
      break;
    }
  }
  res.iterations = total;
  res.converged = ok;
  return res;
}

std::vector<double> plaplace_cell_gradient_magnitude(const Scalar2DField& phi,
                                                     const Grid2D& g) {
  require_shape(phi, g, "plaplace_cell_gradient_magnitude");
  std::vector<double> out(static_cast<std::size_t>(g.nx) * g.ny, 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const TriPair t = cell_gradients(phi, i, j, g.hx(), g.hy());
      const double s = 0.5 * (t.lx_ * t.lx_ + t.ly_ * t.ly_ + t.ux_ * t.ux_ +
                              t.uy_ * t.uy_);
      out[static_cast<std::size_t>(j) * g.nx + i] = std::sqrt(s);
    }
  return out;
}

ReductionComparison compare_reduction(const SolveResult& r3, const BoxDomain& g3,
                                      const PLaplaceResult& r2, const Grid2D& g2) {
  if (g3.nx != g2.nx || g3.ny != g2.ny || g3.lx != g2.lx || g3.ly != g2.ly)
    throw std::invalid_argument(
        "compare_reduction: 3D and 2D resolutions/extents do not match");
  require_edge_shape(r3.u, g3, "compare_reduction");

  ReductionComparison cmp;

  // z-averaged u_z lives on the 2D node lattice, exactly like phi.
  double num = 0.0, den = 0.0;
  for (int j = 0; j <= g3.ny; ++j)
    for (int i = 0; i <= g3.nx; ++i) {
      KahanSum s;
      for (int k = 0; k < g3.nz; ++k) s.add(r3.u.z(i, j, k));
      const double slice = s.value() / g3.nz;
      num = std::max(num, std::abs(slice - r2.phi.at(i, j)));
      den = std::max(den, std::abs(r2.phi.at(i, j)));
    }
  cmp.slice_discrepancy = (den > 0.0) ? num / den : num;

  double m3 = 0.0;
  for (double x : r3.curl_mag.v.v) m3 = std::max(m3, x);
  double m2 = 0.0;
  for (double x : plaplace_cell_gradient_magnitude(r2.phi, g2))
    m2 = std::max(m2, x);
  cmp.curl_discrepancy = (m2 > 0.0) ? std::abs(m3 - m2) / m2 : m3;
  return cmp;
}

}  // namespace pcurl
