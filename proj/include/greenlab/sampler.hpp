#pragma once

// Random-variate generation for the processes: Gaussian increments with
// generator Delta (covariance 2t I), rotationally symmetric alpha-stable
// increments via subordination, positive stable subordinator increments
// (Kanter's representation), exponentially tilted (relativistic)
// subordinator increments, and the compound-Poisson decomposition of the
// truncated variant.

#include <cmath>
#include <cstdint>

#include "greenlab/errors.hpp"
#include "greenlab/geometry.hpp"
#include "greenlab/levy.hpp"
#include "greenlab/rng.hpp"

namespace greenlab {

// Centered Gaussian with covariance 2 dt I; the characteristic exponent
// |xi|^2 forces variance 2t per coordinate.
inline Vec sample_gaussian_increment(double dt, int d, RngStream& rng) {
  Vec g;
  g.dim = d;
  const double s = std::sqrt(2.0 * dt);
  for (int i = 0; i < d; ++i) g[i] = s * rng.normal();
  return g;
}

// Positive beta-stable increment over time t: Laplace transform e^{-t lam^beta}.
// Kanter: S_1 = (A(U)/E)^{(1-beta)/beta} with U ~ Unif(0,pi), E ~ Exp(1);
// S_t = t^{1/beta} S_1.
inline double sample_stable_subordinator(double beta, double t, RngStream& rng) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::domain_error("sample_stable_subordinator: beta must be in (0,1)");
  if (!(t > 0.0))
    throw std::domain_error("sample_stable_subordinator: t must be > 0");
  const double u = M_PI * rng.uniform_pos();
  const double e = rng.exponential();
  const double a = std::pow(std::sin(beta * u), beta / (1.0 - beta)) *
                   std::sin((1.0 - beta) * u) /
                   std::pow(std::sin(u), 1.0 / (1.0 - beta));
  return std::pow(t, 1.0 / beta) * std::pow(a / e, (1.0 - beta) / beta);
}

// One standard isotropic alpha-stable increment (exponent |xi|^alpha),
// scaled: Gaussian with covariance 2S I subordinated by an (alpha/2)-stable
// draw. Coordinatewise 1-d stables would not be isotropic for d >= 2.
inline Vec sample_stable_sym(double alpha, double scale, int d, RngStream& rng) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::domain_error("sample_stable_sym: alpha must be in (0,2)");
  const double s = sample_stable_subordinator(0.5 * alpha, 1.0, rng);
  Vec x = sample_gaussian_increment(s, d, rng);
  return scale * x;
}

// Increment with Laplace transform e^{-t((lam + m^{2/alpha})^{alpha/2} - m)}:
// stable draw, accepted with probability e^{-m^{2/alpha} S}. The acceptance
// rate is e^{-mt}.
inline double sample_relativistic_subordinator(double alpha, double m, double t,
                                               RngStream& rng) {
  if (m < 0.0)
    throw std::domain_error("sample_relativistic_subordinator: m must be >= 0");
  const double tilt = std::pow(m, 2.0 / alpha);
  const double budget_d = 10.0 * std::exp(std::min(m * t, 11.5));
  const long budget = static_cast<long>(std::min(budget_d, 1e6));
  for (long i = 0; i < budget; ++i) {
    const double s = sample_stable_subordinator(0.5 * alpha, t, rng);
    if (m == 0.0 || rng.uniform() < std::exp(-tilt * s)) return s;
  }
  throw sampling_error("sample_relativistic_subordinator: retry budget exhausted");
}

struct JumpDecomposition {
  double cutoff_eps;
  double big_jump_rate;               // int_{|y| > eps, |y| < lambda} j(y) dy
  double small_jump_variance_per_time;  // per coordinate
};

// Closed-form radial integrals of the unit-weight truncated density
// A(d,-alpha) |y|^{-d-alpha} 1_{|y| < lambda}.
inline JumpDecomposition decompose_truncated(const ProcessSpec& spec, double eps) {
  spec.validate();
  if (spec.variant != Variant::truncated)
    throw std::domain_error("decompose_truncated: spec must be truncated");
  if (!(eps > 0.0 && eps < spec.trunc_lambda))
    throw std::domain_error("decompose_truncated: need 0 < eps < lambda");
  const int d = spec.d;
  const double alpha = spec.alpha;
  const double A = stable_constant(d, alpha).value;
  const double surface = (d == 1) ? 2.0 : (d == 2 ? 2.0 * M_PI : 4.0 * M_PI);
  // rate: A * surface * int_eps^lambda r^{-1-alpha} dr
  const double rate = A * surface / alpha *
                      (std::pow(eps, -alpha) - std::pow(spec.trunc_lambda, -alpha));
  // total second moment: A * surface * int_0^eps r^{1-alpha} dr, split evenly
  // across coordinates
  const double m2 = A * surface / (2.0 - alpha) * std::pow(eps, 2.0 - alpha);
  return {eps, rate, m2 / d};
}

// Jump size conditioned on |y| in (eps, lambda): radial inverse-CDF, isotropic
// direction.
inline Vec sample_truncated_big_jump(const ProcessSpec& spec, double eps,
                                     RngStream& rng) {
  const double alpha = spec.alpha;
  const double u = rng.uniform_pos();
  const double ea = std::pow(eps, -alpha);
  const double la = std::pow(spec.trunc_lambda, -alpha);
  const double r = std::pow(ea - u * (ea - la), -1.0 / alpha);
  Vec dir;
  dir.dim = spec.d;
  if (spec.d == 1) {
    dir[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  } else {
    double n = 0.0;
    while (n < 1e-12) {
      for (int i = 0; i < spec.d; ++i) dir[i] = rng.normal();
      n = norm(dir);
    }
    dir = (1.0 / n) * dir;
  }
  return r * dir;
}

}  // namespace greenlab
