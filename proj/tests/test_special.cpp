#include <cmath>
#include <complex>
#include <limits>

#include "doctest.h"
#include "greenlab/special.hpp"

using namespace greenlab;

static const double kInf = std::numeric_limits<double>::infinity();

TEST_CASE("gamma: known values") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-1.5), std::domain_error);
}

TEST_CASE("gamma(2.5) against its own integral definition") {
  // independent oracle: adaptive quadrature of int_0^inf t^{1.5} e^{-t} dt
  auto integrand = [](double t) { return std::pow(t, 1.5) * std::exp(-t); };
  QuadSpec qs;
  qs.rel_tol = 1e-12;
  const double oracle = integrate_adaptive(integrand, 0.0, kInf, qs);
  CHECK(oracle == doctest::Approx(1.3293403881791370).epsilon(1e-10));
  CHECK(gamma_fn(2.5) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("integrate_adaptive: basic and singular cases") {
  CHECK(integrate_adaptive([](double t) { return std::exp(-t); }, 0.0, kInf) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // integrable endpoint singularity
  CHECK(integrate_adaptive([](double t) { return 1.0 / std::sqrt(t); }, 0.0,
                           1.0) == doctest::Approx(2.0).epsilon(1e-8));
  // log theta / (1+theta^2) integrates to 0 by the theta <-> 1/theta symmetry
  const double v = integrate_adaptive(
      [](double t) { return std::log(t) / (1.0 + t * t); }, 0.0, kInf);
  CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("integrate_adaptive: exact on polynomials") {
  // GK15 integrates polynomials up to degree 29 exactly
  auto f = [](double t) { return 5.0 * std::pow(t, 9) - t * t + 3.0; };
  const double exact = 0.5 * std::pow(2.0, 10) - 8.0 / 3.0 + 6.0;
  CHECK(integrate_adaptive(f, 0.0, 2.0) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("integrate_adaptive: refinement budget error carries last estimate") {
  QuadSpec qs;
  qs.rel_tol = 1e-14;
  qs.abs_tol = 1e-300;
  qs.max_refinements = 2;
  bool threw = false;
  try {
    integrate_finite([](double t) { return std::sqrt(std::abs(t - 0.311)); },
                     0.0, 1.0, qs);
  } catch (const quadrature_error& e) {
    threw = true;
    CHECK(std::isfinite(e.last_estimate()));
  }
  CHECK(threw);
}

TEST_CASE("laplace_invert: elementary transforms") {
  auto one_over_lam = [](std::complex<double> s) { return 1.0 / s; };
  CHECK(laplace_invert(one_over_lam, 3.0) == doctest::Approx(1.0).epsilon(1e-9));
  auto pole = [](std::complex<double> s) { return 1.0 / (s + 1.0); };
  CHECK(laplace_invert(pole, 2.0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
}

TEST_CASE("laplace_invert: non-finite contour value raises") {
  auto bad = [](std::complex<double>) {
    return std::complex<double>(std::nan(""), 0.0);
  };
  CHECK_THROWS_AS(laplace_invert(bad, 1.0), inversion_error);
}

TEST_CASE("mittag_leffler_alt: trivial values and errors") {
  CHECK(mittag_leffler_alt(0.3, 0.0).value == 1.0);
  CHECK(mittag_leffler_alt(1.0, 2.0).value ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(mittag_leffler_alt(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(mittag_leffler_alt(1.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(mittag_leffler_alt(0.5, -1.0), std::domain_error);
}

TEST_CASE("mittag_leffler_alt: beta=1 equals exp(-t) on [0,30]") {
  for (int i = 0; i <= 60; ++i) {
    const double t = 0.5 * i;
    CHECK(std::abs(mittag_leffler_alt(1.0, t).value - std::exp(-t)) < 1e-12);
  }
}

TEST_CASE("mittag_leffler_alt: beta=1/2 vs Laplace inversion of 1/(s+sqrt(s))") {
  // M_{1/2}(t) has transform s^{-1/2}/(1+s^{1/2}) = 1/(s + s^{1/2})
  auto F = [](std::complex<double> s) { return 1.0 / (s + std::sqrt(s)); };
  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    const double series = mittag_leffler_alt(0.5, t).value;
    const double inverted = laplace_invert(F, t);
    CHECK(series == doctest::Approx(inverted).epsilon(1e-6));
  }
}

TEST_CASE("mittag_leffler_alt: branches agree across the switch point") {
  const double ts = mittag_leffler_switch(0.5);
  for (double beta : {0.4, 0.5, 0.8, 1.0}) {
    auto F = [beta](std::complex<double> s) {
      return std::pow(s, beta - 1.0) / (1.0 + std::pow(s, beta));
    };
    for (double t : {0.8 * ts, 0.95 * ts, ts, 1.05 * ts, 1.3 * ts}) {
      const double v = mittag_leffler_alt(beta, t).value;
      CHECK(v == doctest::Approx(laplace_invert(F, t)).epsilon(1e-6));
    }
  }
}

TEST_CASE("mittag_leffler_alt: nonincreasing in t (complete monotonicity)") {
  for (double beta : {0.25, 0.5, 0.75, 1.0}) {
    double prev = 1.0 + 1e-15;
    for (int i = 1; i <= 100; ++i) {
      const double v = mittag_leffler_alt(beta, 0.2 * i).value;
      CHECK(v <= prev + 1e-10);
      CHECK(v > 0.0);
      prev = v;
    }
  }
}

TEST_CASE("mittag_leffler_alt: truncation bound honored near switch") {
  const SeriesResult r = mittag_leffler_alt(0.5, 2.0);
  CHECK(r.terms_used >= 1);
  CHECK(r.truncation_bound >= 0.0);
  CHECK(r.truncation_bound <= 1e-12);
}
