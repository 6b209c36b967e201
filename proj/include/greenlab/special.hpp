#pragma once

// Special functions and numerical kernels: Gamma, the alternating
// Mittag-Leffler series M_beta(t) = sum (-1)^n t^{n beta}/Gamma(1+n beta),
// adaptive Gauss-Kronrod quadrature with improper-integral substitutions,
// and fixed-Talbot numerical Laplace inversion.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "greenlab/errors.hpp"

namespace greenlab {

struct QuadSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_refinements = 2000;
};

struct SeriesResult {
  double value = 0.0;
  int terms_used = 0;
  double truncation_bound = 0.0;
};

inline double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: argument must be positive");
  return std::tgamma(x);
}

namespace detail {

// 15-point Gauss-Kronrod pair on [-1,1]; nodes are interior, so endpoint
// singularities are never evaluated.
inline constexpr double kr_nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kr_weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double gauss_weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <typename F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kr_nodes[i]);
    fv[14 - i] = f(c + h * kr_nodes[i]);
  }
  fv[7] = f(c);
  double resk = kr_weights[7] * fv[7];
  double resg = gauss_weights[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    resk += kr_weights[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) resg += gauss_weights[i / 2] * (fv[i] + fv[14 - i]);
  }
  kronrod = resk * h;
  err = std::abs((resk - resg) * h);
}

struct Interval {
  double a, b, estimate, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace detail

// Adaptive Gauss-Kronrod on a finite interval, worst-interval-first; handles
// integrable endpoint singularities (nodes stay interior).
template <typename F>
inline double integrate_finite(const F& f, double a, double b,
                               const QuadSpec& spec = {}) {
  if (a == b) return 0.0;
  std::priority_queue<detail::Interval> queue;
  double est, err;
  detail::gk15(f, a, b, est, err);
  if (!std::isfinite(est))
    throw quadrature_error("integrate_finite: non-finite integrand", est);
  queue.push({a, b, est, err});
  double total = est, total_err = err;
  int splits = 0;
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    const detail::Interval iv = queue.top();
    const double m = 0.5 * (iv.a + iv.b);
    if (m == iv.a || m == iv.b) break;  // interval at machine resolution
    if (++splits > spec.max_refinements)
      throw quadrature_error("integrate_finite: refinement budget exhausted",
                             total);
    queue.pop();
    double el, erl, er, errr;
    detail::gk15(f, iv.a, m, el, erl);
    detail::gk15(f, m, iv.b, er, errr);
    total += el + er - iv.estimate;
    total_err += erl + errr - iv.error;
    if (!std::isfinite(total))
      throw quadrature_error("integrate_finite: non-finite integrand", total);
    queue.push({iv.a, m, el, erl});
    queue.push({m, iv.b, er, errr});
  }
  return total;
}

// Adaptive quadrature over [lower, upper]; upper may be +infinity, in which
// case the tail beyond max(lower, 1) is mapped by u = 1/t.
template <typename F>
inline double integrate_adaptive(const F& f, double lower, double upper,
                                 const QuadSpec& spec = {}) {
  if (std::isinf(upper)) {
    const double split = std::max(lower + 1.0, 1.0);
    const double head = integrate_finite(f, lower, split, spec);
    auto tail = [&f](double u) { return f(1.0 / u) / (u * u); };
    return head + integrate_finite(tail, 0.0, 1.0 / split, spec);
  }
  return integrate_finite(f, lower, upper, spec);
}

// Fixed-Talbot inversion (Abate-Valko), 32 nodes. Accurate well below 1e-6
// relative for the completely monotone transforms used here.
inline double laplace_invert(
    const std::function<std::complex<double>(std::complex<double>)>& F,
    double t, int nodes = 32) {
  if (!(t > 0.0)) throw std::domain_error("laplace_invert: t must be positive");
  const int M = nodes;
  const double r = 2.0 * M / (5.0 * t);
  std::complex<double> sum = 0.5 * std::exp(r * t) * F(r);
  for (int k = 1; k < M; ++k) {
    const double theta = k * M_PI / M;
    const double cot = std::cos(theta) / std::sin(theta);
    const std::complex<double> s(r * theta * cot, r * theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    sum += std::exp(s * t) * F(s) * std::complex<double>(1.0, sigma);
  }
  const double value = (r / M) * sum.real();
  if (!std::isfinite(value))
    throw inversion_error("laplace_invert: non-finite contour evaluation");
  return value;
}

// t -> M_beta(t), the alternating series of the subordinator potential
// density. Series with compensated summation up to t_switch; Talbot
// inversion of the exact transform lambda^{beta-1}/(1+lambda^beta) beyond.
// The largest series term grows like e^t for every beta, so the roundoff
// floor is a few eps * e^t; t_switch = 7 keeps the series branch below
// 1e-12 absolute error.
inline double mittag_leffler_switch(double /*beta*/) { return 7.0; }

inline SeriesResult mittag_leffler_alt(double beta, double t) {
  if (!(beta > 0.0) || beta > 1.0)
    throw std::domain_error("mittag_leffler_alt: beta must be in (0,1]");
  if (t < 0.0) throw std::domain_error("mittag_leffler_alt: t must be >= 0");
  if (t == 0.0) return {1.0, 1, 0.0};

  if (t <= mittag_leffler_switch(beta)) {
    double sum = 0.0, comp = 0.0;
    double term = 1.0;
    int n = 0;
    const double log_t = std::log(t);
    while (true) {
      const double y = term - comp;
      const double s = sum + y;
      comp = (s - sum) - y;
      sum = s;
      ++n;
      term = (n % 2 == 0 ? 1.0 : -1.0) *
             std::exp(n * beta * log_t - std::lgamma(1.0 + n * beta));
      if (std::abs(term) < 1e-16 * (std::abs(sum) + 1e-300) ||
          std::abs(term) < 1e-18) {
        return {sum, n, std::abs(term) + 1e-16 * std::abs(sum)};
      }
      if (n > 10000)
        throw std::runtime_error("mittag_leffler_alt: series did not settle");
    }
  }

  if (beta == 1.0) {
    // the series telescopes to exp(-t) term by term; the transform branch
    // cannot reach 1e-12 absolute here, the closed form can
    const double v = std::exp(-t);
    return {v, 1, 1e-15 * v + 1e-300};
  }
  auto transform = [beta](std::complex<double> lam) {
    const std::complex<double> lb = std::pow(lam, beta);
    return std::pow(lam, beta - 1.0) / (1.0 + lb);
  };
  const double value = laplace_invert(transform, t);
  return {value, 32, 1e-6 * std::abs(value) + 1e-12};
}

}  // namespace greenlab
