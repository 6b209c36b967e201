#pragma once

// Dirichlet heat kernels of Brownian motion (generator Delta) on the domain
// catalog, the subordinate killed Green function R^a_D, and the capacity of
// concentric circles in the unit disk.

#include <cmath>
#include <map>
#include <vector>

#include "greenlab/bounds.hpp"
#include "greenlab/errors.hpp"
#include "greenlab/geometry.hpp"
#include "greenlab/levy.hpp"
#include "greenlab/special.hpp"

namespace greenlab {

namespace detail {

// Positive zeros of J_n in (0, upper], found by unit-step scan (consecutive
// zeros are more than pi apart) plus bisection; cached per order.
inline const std::vector<double>& bessel_zeros(int n, double upper) {
  struct Cache {
    std::vector<double> zeros;
    double scanned_to = 0.0;
  };
  thread_local std::map<int, Cache> cache;
  Cache& c = cache[n];
  if (c.scanned_to == 0.0) c.scanned_to = std::max(1.0, n + 0.5);
  while (c.scanned_to < upper) {
    double lo = c.scanned_to, hi = lo + 1.0;
    double flo = std::cyl_bessel_j(n, lo), fhi = std::cyl_bessel_j(n, hi);
    if ((flo < 0.0) != (fhi < 0.0)) {
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = std::cyl_bessel_j(n, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      c.zeros.push_back(0.5 * (lo + hi));
    }
    c.scanned_to += 1.0;
  }
  return c.zeros;
}

inline double gauss1(double t, double z) {
  return std::exp(-z * z / (4.0 * t)) / std::sqrt(4.0 * M_PI * t);
}

// exp(-j^2 t) truncation threshold for the eigenfunction series.
constexpr double kSeriesCut = 40.0;

// Heat kernel on (0, L); image sum below L^2/100, sine series above.
inline double interval_kernel(double L, double t, double x, double y) {
  if (t < L * L / 100.0) {
    const int K = static_cast<int>(std::sqrt(160.0 * t) / (2.0 * L)) + 1;
    double p = 0.0;
    for (int k = -K; k <= K; ++k)
      p += gauss1(t, x - y + 2.0 * k * L) - gauss1(t, x + y + 2.0 * k * L);
    return std::max(p, 0.0);
  }
  const int N = static_cast<int>(L / M_PI * std::sqrt(kSeriesCut / t)) + 1;
  double p = 0.0;
  for (int n = N; n >= 1; --n) {
    const double w = n * M_PI / L;
    p += std::sin(w * x) * std::sin(w * y) * std::exp(-w * w * t);
  }
  return std::max(2.0 * p / L, 0.0);
}

// Heat kernel on the unit disk. Bessel series above t = 0.01; below that,
// the free kernel with a symmetrized tangent-line image correction
// (relative error O(sqrt(t)) near the boundary, exponentially small inside).
inline double unit_disk_kernel(double t, const Vec& x, const Vec& y) {
  const double r1 = norm(x), r2 = norm(y);
  if (t < 0.01) {
    auto reflect = [](const Vec& z, const Vec& other) {
      const double r = norm(z);
      Vec unit = (r > 0.0) ? (1.0 / r) * z : other;
      const double ru = norm(unit);
      unit = (ru > 0.0) ? (1.0 / ru) * unit : Vec(1.0, 0.0);
      return z + (2.0 * (1.0 - r)) * unit;
    };
    const double direct = std::exp(-dist(x, y) * dist(x, y) / (4.0 * t));
    const double ix = std::exp(-std::pow(dist(reflect(x, y), y), 2) / (4.0 * t));
    const double iy = std::exp(-std::pow(dist(x, reflect(y, x)), 2) / (4.0 * t));
    return std::max(direct - 0.5 * (ix + iy), 0.0) / (4.0 * M_PI * t);
  }
  const double th1 = std::atan2(x[1], x[0]);
  const double th2 = std::atan2(y[1], y[0]);
  const double dth = th1 - th2;
  const double jmax = std::sqrt(kSeriesCut / t);
  double p = 0.0;
  for (int n = 0;; ++n) {
    const auto& zeros = detail::bessel_zeros(n, jmax);
    if (zeros.empty() || zeros.front() > jmax) break;
    double radial = 0.0;
    for (double j : zeros) {
      if (j > jmax) break;
      const double jn1 = std::cyl_bessel_j(n + 1, j);
      radial += std::cyl_bessel_j(n, j * r1) * std::cyl_bessel_j(n, j * r2) /
                (jn1 * jn1) * std::exp(-j * j * t);
    }
    p += (n == 0 ? 1.0 : 2.0 * std::cos(n * dth)) * radial;
  }
  return std::max(p / M_PI, 0.0);
}

}  // namespace detail

// Transition density of Brownian motion killed on leaving D; zero across
// components and for points outside D. Supported for interval unions and
// disk unions.
inline double killed_heat_kernel(const Domain& domain, double t, const Vec& x,
                                 const Vec& y) {
  if (!(t > 0.0)) throw std::domain_error("killed_heat_kernel: t must be > 0");
  const auto cx = domain.component_of(x);
  const auto cy = domain.component_of(y);
  if (!cx || !cy || *cx != *cy) return 0.0;
  if (domain.dim() == 1) {
    const Interval1D& iv = domain.intervals()[*cx];
    return detail::interval_kernel(iv.hi - iv.lo, t, x[0] - iv.lo,
                                   y[0] - iv.lo);
  }
  if (domain.dim() == 2 &&
      (domain.kind() == DomainKind::ball || domain.kind() == DomainKind::ball_union)) {
    const BallShape& b = domain.balls()[*cx];
    const double R = b.radius;
    return detail::unit_disk_kernel(t / (R * R), (1.0 / R) * (x - b.center),
                                    (1.0 / R) * (y - b.center)) /
           (R * R);
  }
  throw config_error("killed_heat_kernel: unsupported domain kind");
}

namespace detail {

// 16-point Gauss-Laguerre rule for the weight e^{-x} on (0, inf).
constexpr double kGL16x[16] = {
    0.08764941047892784, 0.46269632891508083, 1.1410577748312269,
    2.1292836450983806,  3.4370866338932066,  5.0780186145497679,
    7.0703385350482341,  9.4383143363919387,  12.214223368866158,
    15.441527368781617,  19.180156856753135,  23.515905693991909,
    28.578729742882140,  34.583398702286626,  41.940452647688333,
    51.701160339543318};
constexpr double kGL16w[16] = {
    2.0615171495780099e-01, 3.3105785495088417e-01, 2.6579577764421415e-01,
    1.3629693429637753e-01, 4.7328928694125219e-02, 1.1299900080339453e-02,
    1.8490709435263109e-03, 2.0427191530827846e-04, 1.4844586873981299e-05,
    6.8283193308711996e-07, 1.8810248410796732e-08, 2.8623502429738816e-10,
    2.1270790332241030e-12, 6.2979670025178678e-15, 5.0504737000355128e-18,
    4.1614623703728552e-22};

// int_{t0}^inf e^{-lam t} u^a(t) dt. For low modes u^a still varies over the
// e^{-lam t} window (its tail is algebraic), so integrate adaptively there;
// for high modes u^a is locally smooth and Gauss-Laguerre is accurate.
inline double subordinate_mode_integral(const ProcessSpec& spec, double lam,
                                        double t0) {
  if (spec.a == 0.0) return std::exp(-lam * t0) / lam;
  if (lam <= 300.0) {
    QuadSpec q;
    q.rel_tol = 1e-9;
    return integrate_adaptive(
        [&](double t) { return std::exp(-lam * t) * potential_density(spec, t); },
        t0, std::numeric_limits<double>::infinity(), q);
  }
  double s = 0.0;
  for (int i = 0; i < 16; ++i)
    s += kGL16w[i] * potential_density(spec, t0 + kGL16x[i] / lam);
  return std::exp(-lam * t0) / lam * s;
}

}  // namespace detail

// R^a_D(x,y) = int_0^inf p0_D(t,x,y) u^a(t) dt, the Green function of the
// subordinate killed Brownian motion. Split at t0 below which killing is
// negligible: a free-kernel quadrature on (0, t0) plus the eigenfunction
// series integrated term by term against u^a.
inline double subordinate_killed_green(const ProcessSpec& spec,
                                       const Domain& domain, const Vec& x,
                                       const Vec& y) {
  spec.validate();
  const auto cx = domain.component_of(x);
  const auto cy = domain.component_of(y);
  if (!cx || !cy)
    throw std::invalid_argument("subordinate_killed_green: points must lie in D");
  if (*cx != *cy) return 0.0;
  const int d = domain.dim();
  const double s = dist(x, y);
  if (s == 0.0)
    throw std::domain_error("subordinate_killed_green: coincident points");
  const double dx = domain.dist_to_boundary(x);
  const double dy = domain.dist_to_boundary(y);

  double scale;  // component length scale
  double L = 0.0, xoff = 0.0, yoff = 0.0;
  const BallShape* ball = nullptr;
  if (d == 1) {
    const Interval1D& iv = domain.intervals()[*cx];
    L = iv.hi - iv.lo;
    xoff = x[0] - iv.lo;
    yoff = y[0] - iv.lo;
    scale = L;
  } else if (d == 2 && (domain.kind() == DomainKind::ball ||
                        domain.kind() == DomainKind::ball_union)) {
    ball = &domain.balls()[*cx];
    scale = ball->radius;
  } else {
    throw config_error("subordinate_killed_green: unsupported domain kind");
  }

  const double m = std::min(s, std::min(dx, dy));
  const double t0 = std::max(std::min(m * m / 90.0, 0.009 * scale * scale),
                             1e-4 * scale * scale);

  auto free_kernel = [&](double t) {
    return std::pow(4.0 * M_PI * t, -0.5 * d) * std::exp(-s * s / (4.0 * t));
  };
  QuadSpec q;
  q.rel_tol = 1e-9;
  const double piece1 = integrate_finite(
      [&](double t) { return free_kernel(t) * potential_density(spec, t); },
      0.0, t0, q);

  double series = 0.0;
  if (d == 1) {
    const int N =
        static_cast<int>(L / M_PI * std::sqrt(detail::kSeriesCut / t0)) + 1;
    for (int n = N; n >= 1; --n) {
      const double w = n * M_PI / L;
      series += 2.0 / L * std::sin(w * xoff) * std::sin(w * yoff) *
                detail::subordinate_mode_integral(spec, w * w, t0);
    }
  } else {
    const double R = ball->radius;
    const Vec xu = (1.0 / R) * (x - ball->center);
    const Vec yu = (1.0 / R) * (y - ball->center);
    const double r1 = norm(xu), r2 = norm(yu);
    const double dth = std::atan2(xu[1], xu[0]) - std::atan2(yu[1], yu[0]);
    const double tu = t0 / (R * R);
    const double jmax = std::sqrt(detail::kSeriesCut / tu);
    for (int n = 0;; ++n) {
      const auto& zeros = detail::bessel_zeros(n, jmax);
      if (zeros.empty() || zeros.front() > jmax) break;
      const double ang = (n == 0 ? 1.0 : 2.0 * std::cos(n * dth)) / M_PI;
      for (double j : zeros) {
        if (j > jmax) break;
        const double jn1 = std::cyl_bessel_j(n + 1, j);
        const double coeff = ang * std::cyl_bessel_j(n, j * r1) *
                             std::cyl_bessel_j(n, j * r2) / (jn1 * jn1) /
                             (R * R);
        series += coeff *
                  detail::subordinate_mode_integral(spec, j * j / (R * R), t0);
      }
    }
  }
  return piece1 + series;
}

// Capacity of the circle |x| = r inside the unit disk with respect to the
// killed Brownian motion, computed from the uniform equilibrium candidate:
// Cap = [ (1/pi) int_0^pi G((r,0), (r cos phi, r sin phi)) dphi ]^{-1}.
inline double capacity_concentric(double r, double rel_tol = 1e-10) {
  if (!(r > 0.0 && r < 1.0))
    throw std::domain_error("capacity_concentric: require 0 < r < 1");
  const Vec x(r, 0.0);
  QuadSpec q;
  q.rel_tol = rel_tol;
  const double mean =
      integrate_finite(
          [&](double phi) {
            const Vec y(r * std::cos(phi), r * std::sin(phi));
            return disk_green_exact(x, y);
          },
          0.0, M_PI, q) /
      M_PI;
  return 1.0 / mean;
}

}  // namespace greenlab
