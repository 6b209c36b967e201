#include "doctest.h"

#include <cstdlib>

#include "greenlab/verify.hpp"

using namespace greenlab;

namespace {

ExperimentConfig interval_config(double a, double alpha) {
  ExperimentConfig cfg;
  cfg.spec.d = 1;
  cfg.spec.alpha = alpha;
  cfg.spec.a = a;
  cfg.domain = Domain::interval(-1.0, 1.0);
  cfg.grid_points = 3;
  cfg.n_paths = 2000;
  cfg.seed = 42;
  cfg.scheme.base_step = 2e-3;
  cfg.x = Vec(-0.5);
  cfg.y = Vec(0.4);
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig cfg = interval_config(1.0, 1.2);
  CHECK_NOTHROW(cfg.validate());
  cfg.n_paths = 500;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg.n_paths = 2000;
  cfg.grid_points = 0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  CHECK(cfg.tol("missing", 0.25) == 0.25);
  cfg.tolerances["missing"] = 0.5;
  CHECK(cfg.tol("missing", 0.25) == 0.5);
}

TEST_CASE("grid points are interior and deterministic") {
  const ExperimentConfig cfg = interval_config(1.0, 1.2);
  const auto pts = detail::grid_points(cfg.domain, 3);
  CHECK(pts.size() == 3);
  for (const auto& p : pts) CHECK(cfg.domain.contains(p));
  const auto again = detail::grid_points(cfg.domain, 3);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(pts[i][0] == again[i][0]);

  const Domain disk = Domain::ball(Vec(0.0, 0.0), 1.0);
  const auto dpts = detail::grid_points(disk, 3);
  CHECK(dpts.size() == 3);
  for (const auto& p : dpts) CHECK(disk.contains(p));

  const Domain ann = Domain::annulus(Vec(0.0, 0.0), 0.3, 1.0);
  for (const auto& p : detail::grid_points(ann, 3)) CHECK(ann.contains(p));

  const Domain two = Domain::ball_union(
      {BallShape{Vec(0.0, 0.0), 1.0}, BallShape{Vec(3.0, 0.0), 1.0}});
  const auto upts = detail::grid_points(two, 2);
  bool comp0 = false, comp1 = false;
  for (const auto& p : upts) {
    if (*two.component_of(p) == 0) comp0 = true;
    if (*two.component_of(p) == 1) comp1 = true;
  }
  CHECK(comp0);
  CHECK(comp1);
}

TEST_CASE("comparability band on the interval") {
  ExperimentConfig cfg = interval_config(1.0, 1.2);
  const ComparabilityReport rep = run_comparability(cfg);
  CHECK(rep.pass);
  CHECK(rep.ratio_min > 0.0);
  CHECK(rep.ratio_max >= rep.ratio_min);
  CHECK(rep.ratio_max < 1e3);
  CHECK(rep.stable_under_refinement);
  CHECK(rep.pair_grid.size() == 6);
  for (const auto& r : rep.pair_grid) {
    CHECK(r.bound_value > 0.0);
    CHECK(r.estimate > 0.0);
  }

  cfg.spec.a = 0.0;
  CHECK_THROWS_AS(run_comparability(cfg), config_error);
}

TEST_CASE("scaling check: CI overlap and exact g identity") {
  ExperimentConfig cfg = interval_config(1.0, 1.2);
  cfg.n_paths = 4000;
  const ScalingReport rep = run_scaling_check(cfg, {0.5, 2.0});
  CHECK(rep.entries.size() == 2);
  for (const auto& e : rep.entries) {
    CHECK(e.g_identity_err < 1e-12);
    CHECK(e.ci_overlap);
  }
  CHECK(rep.pass);
}

TEST_CASE("3G sweep in d = 3 covers all component cases") {
  ExperimentConfig cfg;
  cfg.spec.d = 3;
  cfg.spec.alpha = 1.2;
  cfg.spec.a = 1.0;
  cfg.domain = Domain::ball_union(
      {BallShape{Vec(0.0, 0.0, 0.0), 1.0}, BallShape{Vec(3.0, 0.0, 0.0), 1.0}});
  cfg.n_paths = 1000;
  cfg.seed = 7;
  const ThreeGReport rep = run_3g_check(cfg, 16000);
  CHECK(rep.pass);
  CHECK(rep.samples > 8000);
  CHECK(rep.sup_ratio > 0.0);
  for (int b = 0; b < 5; ++b) CHECK(rep.case_counts[b] > 0);
  // y = z collapse reduces the bound to the classical product form
  CHECK(rep.collapse_max_err < 1e-12);
}

TEST_CASE("3G sweep in d = 2 uses the logarithmic form") {
  ExperimentConfig cfg;
  cfg.spec.d = 2;
  cfg.spec.alpha = 1.0;
  cfg.spec.a = 0.5;
  cfg.domain = Domain::ball(Vec(0.0, 0.0), 1.0);
  cfg.n_paths = 1000;
  cfg.seed = 11;
  const ThreeGReport rep = run_3g_check(cfg, 3000);
  CHECK(rep.pass);
  CHECK(rep.case_counts[0] == rep.samples);

  cfg.spec.d = 1;
  cfg.domain = Domain::interval(-1.0, 1.0);
  CHECK_THROWS_AS(run_3g_check(cfg, 100), config_error);
}

TEST_CASE("martin limit along the inward normal") {
  ExperimentConfig cfg = interval_config(0.8, 1.3);
  cfg.x = Vec(-0.5);
  cfg.y = Vec(0.0);
  const std::vector<double> deltas{0.1, 0.05, 0.025, 0.0125, 0.00625};
  const MartinReport rep = run_martin_limit_check(cfg, Vec(1.0), deltas);
  CHECK(rep.pass);
  CHECK(rep.cauchy_ok);
  CHECK(rep.band > 0.0);
  CHECK(rep.band < 1e3);
  // hand limit: ratio -> (delta(x)/|x-z|) / (delta(x0)/|x0-z|)
  const double hand = (0.5 / 1.5) / (1.0 / 1.0);
  CHECK(rep.limit == doctest::Approx(hand).epsilon(0.02));

  CHECK_THROWS_AS(run_martin_limit_check(cfg, Vec(1.0), {0.1, 0.05}),
                  config_error);
  CHECK_THROWS_AS(run_martin_limit_check(cfg, Vec(0.2), deltas),
                  std::domain_error);
}

TEST_CASE("inward normals on the shape catalog") {
  const Domain iv = Domain::interval(-1.0, 1.0);
  CHECK(detail::boundary_inward_normal(iv, Vec(-1.0))[0] == 1.0);
  CHECK(detail::boundary_inward_normal(iv, Vec(1.0))[0] == -1.0);
  const Domain disk = Domain::ball(Vec(0.0, 0.0), 1.0);
  const Vec n = detail::boundary_inward_normal(disk, Vec(0.0, 1.0));
  CHECK(n[0] == doctest::Approx(0.0));
  CHECK(n[1] == doctest::Approx(-1.0));
  const Domain ann = Domain::annulus(Vec(0.0, 0.0), 0.3, 1.0);
  CHECK(detail::boundary_inward_normal(ann, Vec(0.3, 0.0))[0] ==
        doctest::Approx(1.0));
  CHECK(detail::boundary_inward_normal(ann, Vec(1.0, 0.0))[0] ==
        doctest::Approx(-1.0));
}

TEST_CASE("subordinate killed green is a lower bound on the MC estimate") {
  ExperimentConfig cfg = interval_config(1.0, 1.2);
  cfg.n_paths = 4000;
  const SubordinateReport rep = run_subordinate_lower_check(cfg);
  CHECK(rep.pass);
  CHECK(rep.violations == 0);
  CHECK(rep.log_lower_c > 0.0);
  CHECK(rep.pairs.size() == 3);
  for (const auto& r : rep.pairs) {
    CHECK(r.bound_value > 0.0);
    CHECK(r.ratio > 0.7);
  }
}

TEST_CASE("perturbation check: relativistic variant stays comparable") {
  ExperimentConfig cfg = interval_config(1.0, 1.2);
  cfg.spec.variant = Variant::relativistic;
  cfg.spec.mass = 1.0;
  const PerturbationReport rep = run_perturbation_check(cfg);
  CHECK(rep.pass);
  CHECK(rep.ratio_min > 0.0);
  CHECK(std::isfinite(rep.ratio_max));
  CHECK(rep.stable);
}

TEST_CASE("perturbation check rejects bad configurations") {
  ExperimentConfig cfg = interval_config(1.0, 1.2);
  CHECK_THROWS_AS(run_perturbation_check(cfg), config_error);  // plain spec

  cfg.spec.variant = Variant::truncated;
  cfg.spec.trunc_lambda = 0.5;
  cfg.spec.d = 3;
  cfg.domain = Domain::ball_union(
      {BallShape{Vec(0.0, 0.0, 0.0), 1.0}, BallShape{Vec(3.0, 0.0, 0.0), 1.0}});
  // inter-component gap 1.0 exceeds the jump cutoff 0.5
  CHECK_THROWS_AS(run_perturbation_check(cfg), config_error);
}

TEST_CASE("capacity products and quadrature stability") {
  const CapacityReport rep = run_capacity_check({0.2, 0.5});
  CHECK(rep.pass);
  CHECK(rep.entries.size() == 2);
  for (const auto& e : rep.entries) {
    CHECK(e.product == doctest::Approx(2.0 * M_PI).epsilon(1e-6));
    CHECK(e.quad_rel_diff <= 1e-6);
  }
  CHECK_THROWS_AS(run_capacity_check({0.9}), config_error);
}

TEST_CASE("confidence interval from batch means") {
  std::vector<double> batches(25, 2.0);
  for (std::size_t i = 0; i < batches.size(); ++i)
    batches[i] += (i % 2 == 0 ? 0.1 : -0.1);
  const Interval ci = confidence_interval(batches);
  CHECK(ci.lo < 2.0);
  CHECK(ci.hi > 2.0);
  CHECK(ci.hi - ci.lo < 0.25);
  CHECK_THROWS_AS(confidence_interval(std::vector<double>(10, 1.0)),
                  config_error);
}

TEST_CASE("batch variance instability diagnostic") {
  std::vector<double> stable(30);
  RngStream rng(3, 0);
  for (auto& m : stable) m = 1.0 + 0.05 * rng.normal();
  CHECK_FALSE(batch_variance_unstable(stable));
  std::vector<double> heavy = stable;
  heavy[17] = 50.0;
  CHECK(batch_variance_unstable(heavy));
  CHECK_THROWS_AS(batch_variance_unstable(std::vector<double>(5, 1.0)),
                  config_error);
}
