#pragma once

// Closed-form Levy-theoretic quantities for the independent sum of a
// Brownian motion (generator Delta) and a symmetric alpha-stable process
// with weight a: exponents, jump densities, subordinator potential density,
// ladder-height exponent/potential, truncated exponent, and the
// whole-space Green function.

#include <cmath>
#include <complex>

#include "greenlab/errors.hpp"
#include "greenlab/special.hpp"

namespace greenlab {

enum class Variant { plain, truncated, relativistic };

struct ProcessSpec {
  int d = 1;                  // 1, 2 or 3
  double alpha = 1.0;         // stability index in (0,2)
  double a = 1.0;             // weight of the stable part, >= 0
  Variant variant = Variant::plain;
  double trunc_lambda = 0.0;  // truncated variant: jump cutoff, > 0
  double mass = 0.0;          // relativistic variant: mass, >= 0
  double m_cap = 2.0;         // uniformity bound M >= a

  void validate() const {
    if (d < 1 || d > 3) throw std::domain_error("ProcessSpec: d must be 1, 2 or 3");
    if (!(alpha > 0.0 && alpha < 2.0))
      throw std::domain_error("ProcessSpec: alpha must be in (0,2)");
    if (a < 0.0) throw std::domain_error("ProcessSpec: a must be >= 0");
    if (a > m_cap) throw std::domain_error("ProcessSpec: a exceeds M");
    if (variant == Variant::truncated && !(trunc_lambda > 0.0))
      throw std::domain_error("ProcessSpec: truncated lambda must be > 0");
    if (variant == Variant::relativistic && mass < 0.0)
      throw std::domain_error("ProcessSpec: mass must be >= 0");
  }

  // Chung-Fuchs: X^a transient iff alpha < d when a > 0; X^0 iff d >= 3.
  bool transient() const { return d >= 3 || (a > 0.0 && alpha < d); }
};

struct StableConstant {
  double value;
};

// A(d,-alpha) = alpha 2^{alpha-1} pi^{-d/2} Gamma((d+alpha)/2) / Gamma(1-alpha/2)
inline StableConstant stable_constant(int d, double alpha) {
  if (d < 1) throw std::domain_error("stable_constant: d must be >= 1");
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::domain_error("stable_constant: alpha must be in (0,2)");
  const double v = alpha * std::pow(2.0, alpha - 1.0) *
                   std::pow(M_PI, -0.5 * d) * gamma_fn(0.5 * (d + alpha)) /
                   gamma_fn(1.0 - 0.5 * alpha);
  return {v};
}

namespace detail {

// psi(r) of the relativistic jump density:
// 2^{-(d+alpha)} Gamma((d+alpha)/2)^{-1} int_0^inf s^{(d+alpha)/2-1}
//   e^{-s/4 - r^2/s} ds; psi(0) = 1.
inline double relativistic_psi(int d, double alpha, double r) {
  const double p = 0.5 * (d + alpha);
  const double pref = std::pow(2.0, -(d + alpha)) / gamma_fn(p);
  auto integrand = [p, r](double s) {
    return std::exp((p - 1.0) * std::log(s) - 0.25 * s - r * r / s);
  };
  return pref * integrate_adaptive(integrand, 0.0,
                                   std::numeric_limits<double>::infinity());
}

}  // namespace detail

// Levy intensity j^a(r). Plain: a^alpha A(d,-alpha) r^{-d-alpha};
// truncated: unit-weight density cut at the jump cutoff; relativistic:
// A(d,-alpha) r^{-d-alpha} psi(m^{1/alpha} r).
inline double levy_density(const ProcessSpec& spec, double r) {
  spec.validate();
  if (!(r > 0.0)) throw std::domain_error("levy_density: r must be > 0");
  const double A = stable_constant(spec.d, spec.alpha).value;
  const double radial = A * std::pow(r, -(spec.d + spec.alpha));
  switch (spec.variant) {
    case Variant::plain:
      return std::pow(spec.a, spec.alpha) * radial;
    case Variant::truncated:
      return r < spec.trunc_lambda ? radial : 0.0;
    case Variant::relativistic:
      return radial * detail::relativistic_psi(
                          spec.d, spec.alpha,
                          std::pow(spec.mass, 1.0 / spec.alpha) * r);
  }
  return 0.0;
}

// Phi^a(xi) = |xi|^2 + a^alpha |xi|^alpha
inline double char_exponent(const ProcessSpec& spec, double xi_norm) {
  spec.validate();
  if (spec.variant != Variant::plain)
    throw std::domain_error("char_exponent: only the plain variant has this form");
  if (xi_norm < 0.0) throw std::domain_error("char_exponent: |xi| must be >= 0");
  if (xi_norm == 0.0) return 0.0;
  return xi_norm * xi_norm +
         std::pow(spec.a, spec.alpha) * std::pow(xi_norm, spec.alpha);
}

// phi^a(lambda) = lambda + a^alpha lambda^{alpha/2}
inline double subordinator_exponent(const ProcessSpec& spec, double lam) {
  spec.validate();
  if (lam < 0.0) throw std::domain_error("subordinator_exponent: lambda must be >= 0");
  if (lam == 0.0) return 0.0;
  return lam + std::pow(spec.a, spec.alpha) * std::pow(lam, 0.5 * spec.alpha);
}

// u^a(t) = M_{1-alpha/2}(a^{2 alpha/(2-alpha)} t), the potential density of
// the subordinator T^a_t = t + a^2 T_t; u^a(0+) = 1 and u^a <= 1.
inline double potential_density(const ProcessSpec& spec, double t) {
  if (!(t > 0.0)) throw std::domain_error("potential_density: t must be > 0");
  if (spec.a == 0.0) return 1.0;
  const double beta = 1.0 - 0.5 * spec.alpha;
  const double scale = std::pow(spec.a, 2.0 * spec.alpha / (2.0 - spec.alpha));
  return mittag_leffler_alt(beta, scale * t).value;
}

// chi^a(lambda) = exp((1/pi) int_0^inf log(theta^2 lambda^2 +
//   a^alpha theta^alpha lambda^alpha)/(1+theta^2) dtheta).
// Factoring out theta^2 lambda^2 and using int log(theta)/(1+theta^2) = 0
// leaves chi = lambda * exp((1/pi) int log1p(a^alpha (theta lambda)^{alpha-2})
// /(1+theta^2) dtheta), which is exact at a = 0 and has only a log
// singularity at theta = 0.
inline double ladder_exponent(double a, double alpha, double lam) {
  if (!(lam > 0.0)) throw std::domain_error("ladder_exponent: lambda must be > 0");
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::domain_error("ladder_exponent: alpha must be in (0,2)");
  if (a < 0.0) throw std::domain_error("ladder_exponent: a must be >= 0");
  if (a == 0.0) return lam;
  const double aa = std::pow(a, alpha);
  auto integrand = [aa, alpha, lam](double theta) {
    return std::log1p(aa * std::pow(theta * lam, alpha - 2.0)) /
           (1.0 + theta * theta);
  };
  const double I = integrate_adaptive(
      integrand, 0.0, std::numeric_limits<double>::infinity());
  return lam * std::exp(I / M_PI);
}

namespace detail {

// chi^a continued to the Talbot contour through the same factored
// representation with principal powers.
inline std::complex<double> ladder_exponent_complex(double a, double alpha,
                                                    std::complex<double> lam) {
  if (a == 0.0) return lam;
  const double aa = std::pow(a, alpha);
  auto re_part = [aa, alpha, lam](double theta) {
    return std::log(1.0 + aa * std::pow(theta * lam, alpha - 2.0)).real() /
           (1.0 + theta * theta);
  };
  auto im_part = [aa, alpha, lam](double theta) {
    return std::log(1.0 + aa * std::pow(theta * lam, alpha - 2.0)).imag() /
           (1.0 + theta * theta);
  };
  const double inf = std::numeric_limits<double>::infinity();
  const std::complex<double> I(integrate_adaptive(re_part, 0.0, inf),
                               integrate_adaptive(im_part, 0.0, inf));
  return lam * std::exp(I / M_PI);
}

}  // namespace detail

// V^a(x), the renewal function of the ladder-height process: inversion of
// lambda -> 1/(lambda chi^a(lambda)) at t = x. V^0(x) = x.
inline double ladder_potential(double a, double alpha, double x,
                               int nodes = 32) {
  if (!(x > 0.0)) throw std::domain_error("ladder_potential: x must be > 0");
  if (a == 0.0) return x;
  auto F = [a, alpha](std::complex<double> lam) {
    return 1.0 / (lam * detail::ladder_exponent_complex(a, alpha, lam));
  };
  return laplace_invert(F, x, nodes);
}

// psi^lambda(xi) of the truncated stable process, by radial reduction:
// d=1 averages cos, d=2 gives the Bessel J_0 average, d=3 gives sinc.
inline double truncated_exponent(double lambda, double alpha, double xi_norm,
                                 int d) {
  if (!(lambda > 0.0)) throw std::domain_error("truncated_exponent: lambda must be > 0");
  if (xi_norm == 0.0) return 0.0;
  const double A = stable_constant(d, alpha).value;
  double surface;
  switch (d) {
    case 1: surface = 2.0; break;
    case 2: surface = 2.0 * M_PI; break;
    case 3: surface = 4.0 * M_PI; break;
    default: throw std::domain_error("truncated_exponent: d must be 1, 2 or 3");
  }
  auto angular_mean = [d](double z) {
    if (z < 1e-8) return 0.5 * z * z / (d == 1 ? 1.0 : (d == 2 ? 2.0 : 3.0));
    switch (d) {
      case 1: return 1.0 - std::cos(z);
      case 2: return 1.0 - std::cyl_bessel_j(0.0, z);
      default: return 1.0 - std::sin(z) / z;
    }
  };
  auto integrand = [&](double r) {
    return angular_mean(xi_norm * r) * std::pow(r, -1.0 - alpha);
  };
  QuadSpec qs;
  qs.rel_tol = 1e-7;
  qs.max_refinements = 500000;  // large cutoffs mean many oscillations
  return A * surface * integrate_adaptive(integrand, 0.0, lambda, qs);
}

// G^a(r) = int_0^inf (4 pi t)^{-d/2} e^{-r^2/(4t)} u^a(t) dt, defined only
// for transient parameter sets.
inline double whole_space_green(const ProcessSpec& spec, double r) {
  spec.validate();
  if (!(r > 0.0)) throw std::domain_error("whole_space_green: r must be > 0");
  if (!spec.transient())
    throw transience_error("whole_space_green: process is recurrent");
  const double d = spec.d;
  auto integrand = [&spec, d, r](double t) {
    return std::pow(4.0 * M_PI * t, -0.5 * d) *
           std::exp(-r * r / (4.0 * t)) * potential_density(spec, t);
  };
  const double split = r * r;
  QuadSpec qs;
  qs.rel_tol = 1e-9;
  const double head = integrate_finite(integrand, 0.0, split, qs);
  auto tail = [&integrand](double u) { return integrand(1.0 / u) / (u * u); };
  return head + integrate_finite(tail, 0.0, 1.0 / split, qs);
}

}  // namespace greenlab
