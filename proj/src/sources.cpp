#include "pcurl/sources.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pcurl/leray.hpp"
#include "pcurl/operators.hpp"
#include "pcurl/util.hpp"

namespace pcurl {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void manufactured_u_at(const BoxDomain& g, double x, double y, double,
                       double out[3]) {
  const double a = kPi / g.lx, b = kPi / g.ly;
  out[0] = 0.0;
  out[1] = 0.0;
  out[2] = std::sin(a * x) * std::sin(b * y);
}

void manufactured_curl_at(const BoxDomain& g, double x, double y, double,
                          double out[3]) {
  const double a = kPi / g.lx, b = kPi / g.ly;
  out[0] = b * std::sin(a * x) * std::cos(b * y);
  out[1] = -a * std::cos(a * x) * std::sin(b * y);
  out[2] = 0.0;
}

EdgeField manufactured_u(const BoxDomain& g) {
  EdgeField u = z_invariant_source(g, [&](double x, double y) {
    const double a = kPi / g.lx, b = kPi / g.ly;
    return std::sin(a * x) * std::sin(b * y);
  });
  return u;
}

FaceField manufactured_curl(const BoxDomain& g) {
  FaceField w(g);
  const double hx = g.hx(), hy = g.hy(), hz = g.hz();
  double c[3];
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        manufactured_curl_at(g, i * hx, (j + 0.5) * hy, (k + 0.5) * hz, c);
        w.x(i, j, k) = c[0];
      }
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        manufactured_curl_at(g, (i + 0.5) * hx, j * hy, (k + 0.5) * hz, c);
        w.y(i, j, k) = c[1];
      }
  // z-faces: the exact curl has no z-component here.
  return w;
}

EdgeField manufactured_source(const BoxDomain& g) {
  const double a = kPi / g.lx, b = kPi / g.ly;
  const double lam = a * a + b * b;
  return z_invariant_source(g, [&](double x, double y) {
    return lam * std::sin(a * x) * std::sin(b * y);
  });
}

EdgeField make_random_divfree_source(const BoxDomain& g, std::uint64_t seed,
                                     int smoothness, double amplitude) {
  if (smoothness < 1)
    throw std::invalid_argument(
        "make_random_divfree_source: smoothness must be >= 1");
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);

  struct Mode {
    double kx, ky, kz;  // wavevector
    double cx, cy, cz;  // solenoidal coefficient
  };
  std::vector<Mode> modes;
  for (int l = 1; l <= smoothness; ++l)
    for (int m = 1; m <= smoothness; ++m)
      for (int n = 1; n <= smoothness; ++n) {
        Mode md;
        md.kx = l * kPi / g.lx;
        md.ky = m * kPi / g.ly;
        md.kz = n * kPi / g.lz;
        double c[3] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                       rng.uniform(-1.0, 1.0)};
        // Project the coefficient orthogonal to the wavevector so each mode
        // is exactly divergence-free in the continuum.
        const double k2 = md.kx * md.kx + md.ky * md.ky + md.kz * md.kz;
        const double proj = (c[0] * md.kx + c[1] * md.ky + c[2] * md.kz) / k2;
        const double decay = 1.0 / (static_cast<double>(l) * l + m * m + n * n);
        md.cx = (c[0] - proj * md.kx) * decay;
        md.cy = (c[1] - proj * md.ky) * decay;
        md.cz = (c[2] - proj * md.kz) * decay;
        modes.push_back(md);
      }

  auto fx = [&](double x, double y, double z) {
    double s = 0.0;
    for (const Mode& md : modes)
      s += md.cx * std::cos(md.kx * x) * std::sin(md.ky * y) * std::sin(md.kz * z);
    return amplitude * s;
  };
  auto fy = [&](double x, double y, double z) {
    double s = 0.0;
    for (const Mode& md : modes)
      s += md.cy * std::sin(md.kx * x) * std::cos(md.ky * y) * std::sin(md.kz * z);
    return amplitude * s;
  };
  auto fz = [&](double x, double y, double z) {
    double s = 0.0;
    for (const Mode& md : modes)
      s += md.cz * std::sin(md.kx * x) * std::sin(md.ky * y) * std::cos(md.kz * z);
    return amplitude * s;
  };

  EdgeField f(g);
  const double hx = g.hx(), hy = g.hy(), hz = g.hz();
  for (int k = 1; k < g.nz; ++k)
    for (int j = 1; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        f.x(i, j, k) = fx((i + 0.5) * hx, j * hy, k * hz);
  for (int k = 1; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i)
        f.y(i, j, k) = fy(i * hx, (j + 0.5) * hy, k * hz);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 1; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i)
        f.z(i, j, k) = fz(i * hx, j * hy, (k + 0.5) * hz);

  // The trigonometric field is solenoidal in the continuum but only
  // second-order so on the grid; project the sampled field exactly.
  return project_source(f, g, 1e-12).field;
}

EdgeField random_constrained_field(const BoxDomain& g, std::uint64_t seed,
                                   double amplitude) {
  Rng rng(seed ^ 0xc2b2ae3d27d4eb4fULL);
  EdgeField u(g);
  for (int k = 1; k < g.nz; ++k)
    for (int j = 1; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        u.x(i, j, k) = amplitude * rng.uniform(-1.0, 1.0);
  for (int k = 1; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i)
        u.y(i, j, k) = amplitude * rng.uniform(-1.0, 1.0);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 1; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i)
        u.z(i, j, k) = amplitude * rng.uniform(-1.0, 1.0);
  return u;
}

}  // namespace pcurl
