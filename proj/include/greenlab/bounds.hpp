#pragma once

// Closed-form comparison functions: f_D, the dimension-branch bound g_D^a,
// the 3G right-hand sides with the component multiplier, the Martin bound
// h_D^a, the exact unit-disk Green function, the heat-kernel lower-bound
// form, and the scaling transform.

#include <cmath>

#include "greenlab/errors.hpp"
#include "greenlab/geometry.hpp"
#include "greenlab/levy.hpp"

namespace greenlab {

enum class DimBranch { d1, d2, d3plus };

struct BoundEval {
  double value;
  bool same_component;
  DimBranch branch;
};

// f_D(x,y) = delta(x) delta(y) / |x-y|^2
inline double f_ratio(const Domain& domain, const Vec& x, const Vec& y) {
  if (!domain.contains(x) || !domain.contains(y))
    throw std::invalid_argument("f_ratio: points must lie in D");
  const double s = dist(x, y);
  if (s == 0.0) throw std::domain_error("f_ratio: coincident points");
  return domain.dist_to_boundary(x) * domain.dist_to_boundary(y) / (s * s);
}

// g_D^a(x,y), the two-sided comparison function of the main estimate;
// different-component pairs carry the factor a^alpha and are undefined at
// a = 0 (flagged, not silently zero).
inline BoundEval g_bound(const ProcessSpec& spec, const Domain& domain,
                         const Vec& x, const Vec& y) {
  spec.validate();
  const auto cx = domain.component_of(x);
  const auto cy = domain.component_of(y);
  if (!cx || !cy) throw std::invalid_argument("g_bound: points must lie in D");
  const double s = dist(x, y);
  if (s == 0.0) throw std::domain_error("g_bound: coincident points");
  const bool same = (*cx == *cy);
  if (!same && spec.a == 0.0)
    throw degenerate_bound_error(
        "g_bound: a = 0 across components is outside the estimate's validity");
  const double dx = domain.dist_to_boundary(x);
  const double dy = domain.dist_to_boundary(y);
  const double f = dx * dy / (s * s);
  double v;
  DimBranch branch;
  switch (domain.dim()) {
    case 1:
      v = std::min(std::sqrt(dx * dy), dx * dy / s);
      branch = DimBranch::d1;
      break;
    case 2:
      v = std::log1p(f);
      branch = DimBranch::d2;
      break;
    default:
      v = std::pow(s, 2.0 - domain.dim()) * std::min(1.0, f);
      branch = DimBranch::d3plus;
      break;
  }
  if (!same) v *= std::pow(spec.a, spec.alpha);
  return {v, same, branch};
}

struct ThreeGInput {
  DomainPoint x, y, z, w;
};

struct ComponentMultiplier {
  double exponent;  // 0, -alpha, alpha, or 2 alpha
  double value;     // a^exponent
};

// The five-case multiplier a(x,y,z,w); the cases coincide with
// a^{alpha (1[x !~ y] + 1[z !~ w] - 1[x !~ w])}, which also covers the
// component patterns the explicit table omits.
inline ComponentMultiplier component_multiplier(const ProcessSpec& spec,
                                                const Domain& domain,
                                                const Vec& x, const Vec& y,
                                                const Vec& z, const Vec& w) {
  const auto cx = domain.component_of(x);
  const auto cy = domain.component_of(y);
  const auto cz = domain.component_of(z);
  const auto cw = domain.component_of(w);
  if (!cx || !cy || !cz || !cw)
    throw std::invalid_argument("component_multiplier: points must lie in D");
  const int e = (*cx != *cy) + (*cz != *cw) - (*cx != *cw);
  const double exponent = e * spec.alpha;
  if (spec.a == 0.0 && e != 0)
    throw degenerate_bound_error(
        "component_multiplier: a = 0 with cross-component points");
  return {exponent, std::pow(spec.a, exponent)};
}

// RHS of the generalized 3G display for d >= 3 (without its constant):
// a(x,y,z,w) (|x-w| ^ |y-z| / |x-y| v 1)(|x-w| ^ |y-z| / |z-w| v 1)
//   |x-w|^{d-2} / (|x-y|^{d-2} |z-w|^{d-2}).
inline double threeg_rhs_highd(const ProcessSpec& spec, const Domain& domain,
                               const ThreeGInput& q) {
  const int d = domain.dim();
  if (d < 3) throw std::domain_error("threeg_rhs_highd: requires d >= 3");
  const double sxy = dist(q.x.coords, q.y.coords);
  const double szw = dist(q.z.coords, q.w.coords);
  const double sxw = dist(q.x.coords, q.w.coords);
  const double syz = dist(q.y.coords, q.z.coords);
  if (sxy == 0.0 || szw == 0.0 || sxw == 0.0)
    throw std::domain_error("threeg_rhs_highd: coincident points");
  const double m = std::min(sxw, syz);
  const double mult = component_multiplier(spec, domain, q.x.coords, q.y.coords,
                                           q.z.coords, q.w.coords)
                          .value;
  return mult * std::max(m / sxy, 1.0) * std::max(m / szw, 1.0) *
         std::pow(sxw, d - 2.0) /
         (std::pow(sxy, d - 2.0) * std::pow(szw, d - 2.0));
}

// RHS of the two-dimensional 3G estimate: log(1+f(x,y)) + log(1+f(y,z)) + 1.
inline double threeg_rhs_2d(const ProcessSpec&, const Domain& domain,
                            const Vec& x, const Vec& y, const Vec& z) {
  if (domain.dim() != 2) throw std::domain_error("threeg_rhs_2d: requires d = 2");
  return std::log1p(f_ratio(domain, x, y)) + std::log1p(f_ratio(domain, y, z)) +
         1.0;
}

// Martin bound h_D^a(x,z): delta(x)/|x-z|^d with the a-power chosen by the
// components of x, x0 and the boundary component owning z; z on the boundary
// of x's own component away from x0 falls back to the plain branch.
inline double martin_bound(const ProcessSpec& spec, const Domain& domain,
                           const Vec& x, const Vec& z, const Vec& x0) {
  spec.validate();
  const auto cx = domain.component_of(x);
  const auto cx0 = domain.component_of(x0);
  if (!cx || !cx0)
    throw std::invalid_argument("martin_bound: x and x0 must lie in D");
  const auto cz = domain.boundary_component_of(z);
  if (!cz) throw std::domain_error("martin_bound: z is not on the boundary");
  const double base =
      domain.dist_to_boundary(x) / std::pow(dist(x, z), domain.dim());
  const bool cross = (*cx == *cx0) ? (*cz != *cx0)
                                   : (*cz == *cx0);
  if (spec.a == 0.0 && cross)
    throw degenerate_bound_error("martin_bound: a = 0 on a cross branch");
  const double aa = std::pow(spec.a, spec.alpha);
  if (*cx == *cx0) {
    return (*cz == *cx0) ? base : aa * base;
  }
  if (*cz == *cx0) return base / aa;
  return base;
}

// Exact Green function of Brownian motion (generator Delta) killed on the
// unit disk:
// G(x,y) = (1/4pi) log(1 + (1-|x|^2)(1-|y|^2)/|x-y|^2).
// (Sources quoting 1/2pi use the generator (1/2)Delta convention; under
// generator Delta the occupation density is half of that.)
inline double disk_green_exact(const Vec& x, const Vec& y) {
  if (x.dim != 2 || y.dim != 2)
    throw std::invalid_argument("disk_green_exact: d must be 2");
  const double rx = norm(x), ry = norm(y);
  if (!(rx < 1.0 && ry < 1.0))
    throw std::invalid_argument("disk_green_exact: points must lie in B(0,1)");
  const double s = dist(x, y);
  if (s == 0.0) throw std::domain_error("disk_green_exact: coincident points");
  return std::log1p((1.0 - rx * rx) * (1.0 - ry * ry) / (s * s)) /
         (4.0 * M_PI);
}

// c0 (1 ^ delta(x) delta(y)/t) t^{-1} exp(-c1 |x-y|^2/t), the shape of the
// short-time killed-BM lower bound.
inline double heat_kernel_lower_form(const Domain& domain, double t,
                                     const Vec& x, const Vec& y, double c0,
                                     double c1) {
  const double dd = domain.dist_to_boundary(x) * domain.dist_to_boundary(y);
  const double s = dist(x, y);
  return c0 * std::min(1.0, dd / t) / t * std::exp(-c1 * s * s / t);
}

struct ScaledProblem {
  ProcessSpec spec;
  Domain domain;
  Vec x, y;
  double prefactor;  // lambda^{d-2}: G_original = prefactor * G_image
};

// G^a_D(x,y) = lambda^{d-2} G^{a lambda^{(alpha-2)/alpha}}_{lambda D}
// (lambda x, lambda y); for d = 2 the prefactor is identically 1.
inline ScaledProblem scaling_transform(const ProcessSpec& spec,
                                       const Domain& domain, const Vec& x,
                                       const Vec& y, double lam) {
  if (!(lam > 0.0)) throw std::domain_error("scaling_transform: lambda must be > 0");
  ProcessSpec image = spec;
  image.a = spec.a * std::pow(lam, (spec.alpha - 2.0) / spec.alpha);
  image.m_cap = std::max(image.m_cap, image.a);
  return {image, domain.scaled(lam), lam * x, lam * y,
          std::pow(lam, domain.dim() - 2.0)};
}

}  // namespace greenlab
