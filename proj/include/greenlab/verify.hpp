#pragma once

// Experiment drivers: each numerically checkable statement becomes a report
// with empirical constants, confidence intervals, and stability diagnostics.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "greenlab/bounds.hpp"
#include "greenlab/heatkernel.hpp"
#include "greenlab/mc.hpp"

namespace greenlab {

struct ExperimentConfig {
  ProcessSpec spec;
  Domain domain = Domain::interval(-1.0, 1.0);
  int grid_points = 3;
  long n_paths = 2000;
  std::uint64_t seed = 1;
  SimScheme scheme;
  Vec x, y;  // probe pair for pointwise experiments
  std::map<std::string, double> tolerances;

  double tol(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
  }
  void validate() const {
    spec.validate();
    scheme.validate();
    if (n_paths < 1000)
      throw config_error("ExperimentConfig: n_paths must be >= 1000");
    if (grid_points < 1)
      throw config_error("ExperimentConfig: grid_points must be >= 1");
  }
};

struct PairRecord {
  Vec x, y;
  double estimate = 0.0;
  double std_error = 0.0;
  double bound_value = 0.0;
  double ratio = 0.0;
};

struct ComparabilityReport {
  std::vector<PairRecord> pair_grid;
  double ratio_min = 0.0, ratio_max = 0.0;
  int ci_violations = 0;
  bool stable_under_refinement = false;
  double band_width_change = 0.0;
  bool pass = false;
};

namespace detail {

// Deterministic interior probe points for each catalog shape.
inline std::vector<Vec> grid_points(const Domain& domain, int n) {
  std::vector<Vec> pts;
  if (domain.dim() == 1) {
    for (const auto& iv : domain.intervals())
      for (int i = 0; i < n; ++i)
        pts.push_back(Vec(iv.lo + (iv.hi - iv.lo) * (i + 1.0) / (n + 1.0)));
    return pts;
  }
  const bool is_annulus = domain.kind() == DomainKind::annulus;
  const std::size_t nballs = is_annulus ? 1 : domain.balls().size();
  for (std::size_t b = 0; b < nballs; ++b) {
    const BallShape& ball = domain.balls()[is_annulus ? 1 : b];
    double r_mid = 0.5 * ball.radius;
    Vec center = ball.center;
    if (is_annulus) {
      const double r_in = domain.balls()[0].radius;
      r_mid = 0.5 * (r_in + ball.radius);
      pts.clear();
      for (int i = 0; i < n + 1; ++i) {
        const double th = 2.0 * M_PI * i / (n + 1.0);
        Vec p = center;
        p[0] += r_mid * std::cos(th);
        p[1] += r_mid * std::sin(th);
        pts.push_back(p);
      }
      return pts;
    }
    pts.push_back(center);
    for (int i = 0; i + 1 < n; ++i) {
      const double th = 2.0 * M_PI * i / std::max(1, n - 1) + 0.3;
      Vec p = center;
      p[0] += r_mid * std::cos(th);
      p[1] += r_mid * std::sin(th);
      pts.push_back(p);
    }
  }
  return pts;
}

// Pointwise Green estimate: d = 1 uses an occupation-density mesh cell of
// width 0.01 at y (no bandwidth bias); d >= 2 uses kernel smoothing.
inline Estimate green_estimate(const ProcessSpec& spec, const Domain& domain,
                               const Vec& x, const Vec& y,
                               const SimScheme& scheme, long n_paths,
                               std::uint64_t seed) {
  if (domain.dim() == 1) {
    const double cell = 0.01;
    const double y0 = y[0];
    return estimate_occupation_functional(
        spec, domain, make_domain_point(domain, x),
        [y0, cell](const Vec& z) {
          return std::abs(z[0] - y0) < 0.5 * cell ? 1.0 / cell : 0.0;
        },
        scheme, n_paths, seed);
  }
  return estimate_green_pointwise(spec, domain, make_domain_point(domain, x),
                                  make_domain_point(domain, y), 0.0, scheme,
                                  n_paths, seed);
}

inline std::vector<PairRecord> comparability_pass(const ExperimentConfig& cfg,
                                                  long n_paths) {
  const auto pts = grid_points(cfg.domain, cfg.grid_points);
  const double min_sep = 0.05 * cfg.domain.diameter();
  std::vector<PairRecord> out;
  std::uint64_t pair_seed = cfg.seed;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j || dist(pts[i], pts[j]) < min_sep) continue;
      ++pair_seed;
      PairRecord rec;
      rec.x = pts[i];
      rec.y = pts[j];
      rec.bound_value = g_bound(cfg.spec, cfg.domain, pts[i], pts[j]).value;
      const Estimate est = green_estimate(cfg.spec, cfg.domain, pts[i], pts[j],
                                          cfg.scheme, n_paths,
                                          pair_seed * 0x9e3779b97f4a7c15ull);
      rec.estimate = est.mean;
      rec.std_error = est.std_error;
      rec.ratio = est.mean / rec.bound_value;
      out.push_back(rec);
    }
  return out;
}

inline void band(const std::vector<PairRecord>& recs, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (const auto& r : recs) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
}

}  // namespace detail

// Theorem-1.1-style comparability: MC Green estimates against g_bound over a
// pair grid; pass when the ratio band is positive, finite, and stable under
// doubling the path count.
inline ComparabilityReport run_comparability(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!(cfg.spec.a > 0.0))
    throw config_error("run_comparability: requires a > 0");
  ComparabilityReport rep;
  rep.pair_grid = detail::comparability_pass(cfg, cfg.n_paths);
  if (rep.pair_grid.empty())
    throw config_error("run_comparability: empty pair grid");
  detail::band(rep.pair_grid, rep.ratio_min, rep.ratio_max);

  const auto doubled = detail::comparability_pass(cfg, 2 * cfg.n_paths);
  double lo2, hi2;
  detail::band(doubled, lo2, hi2);
  const double w1 = std::log(rep.ratio_max / rep.ratio_min + 1.0);
  const double w2 = std::log(hi2 / lo2 + 1.0);
  rep.band_width_change = std::abs(w2 - w1) / std::max(w1, 1e-300);
  rep.stable_under_refinement =
      rep.band_width_change <= cfg.tol("band_stability", 0.15);

  const double slack = cfg.tol("ci_band_slack", 1.0);
  for (const auto& r : rep.pair_grid) {
    const double lo = (r.estimate - 2.576 * r.std_error) / r.bound_value;
    const double hi = (r.estimate + 2.576 * r.std_error) / r.bound_value;
    if (hi < rep.ratio_min / slack || lo > rep.ratio_max * slack)
      ++rep.ci_violations;
  }
  rep.pass = rep.ratio_min > 0.0 && std::isfinite(rep.ratio_max) &&
             rep.stable_under_refinement;
  return rep;
}

struct ScalingEntry {
  double lam = 1.0;
  double est_mean = 0.0, est_se = 0.0;
  double image_mean = 0.0, image_se = 0.0;
  bool ci_overlap = false;
  double g_identity_err = 0.0;
};

struct ScalingReport {
  std::vector<ScalingEntry> entries;
  bool pass = false;
};

// Eq. of exact scaling: MC estimate on (a, D) vs lam^{d-2} times the MC
// estimate on the transformed problem; plus the exact identity on g_bound.
inline ScalingReport run_scaling_check(const ExperimentConfig& cfg,
                                       const std::vector<double>& lam_list) {
  cfg.validate();
  ScalingReport rep;
  rep.pass = true;
  const Estimate base = detail::green_estimate(
      cfg.spec, cfg.domain, cfg.x, cfg.y, cfg.scheme, cfg.n_paths, cfg.seed);
  for (double lam : lam_list) {
    ScalingEntry e;
    e.lam = lam;
    e.est_mean = base.mean;
    e.est_se = base.std_error;
    const ScaledProblem img =
        scaling_transform(cfg.spec, cfg.domain, cfg.x, cfg.y, lam);
    SimScheme scheme = cfg.scheme;
    // the image domain's length scale is lam times larger; keep the walk
    // resolution comparable by scaling the time step like lam^2
    scheme.base_step = cfg.scheme.base_step * lam * lam;
    const Estimate im = detail::green_estimate(img.spec, img.domain, img.x,
                                               img.y, scheme, cfg.n_paths,
                                               cfg.seed + 1);
    e.image_mean = img.prefactor * im.mean;
    e.image_se = img.prefactor * im.std_error;
    e.ci_overlap = !(e.est_mean + 2.576 * e.est_se <
                         e.image_mean - 2.576 * e.image_se ||
                     e.image_mean + 2.576 * e.image_se <
                         e.est_mean - 2.576 * e.est_se);
    const double lhs = g_bound(cfg.spec, cfg.domain, cfg.x, cfg.y).value;
    const double rhs =
        img.prefactor * g_bound(img.spec, img.domain, img.x, img.y).value;
    e.g_identity_err = std::abs(lhs - rhs) / std::abs(lhs);
    rep.pass = rep.pass && e.ci_overlap && e.g_identity_err < 1e-12;
    rep.entries.push_back(e);
  }
  return rep;
}

struct ThreeGReport {
  double sup_ratio = 0.0;
  double sup_ratio_half = 0.0;
  std::array<long, 5> case_counts{};  // same-0, mixed-0, -alpha, +alpha, +2alpha
  double collapse_max_err = 0.0;
  long samples = 0;
  bool pass = false;
};

namespace detail {

// Local hill-climb on a point tuple maximizing `ratio`, with shrinking
// Gaussian proposals. The raw sweep maximum converges slowly (the
// maximizing set is a small corner of configuration space); polishing the
// running argmax makes the reported supremum a stable statistic.
template <typename Ratio>
inline double polish_tuple(const Domain& domain, std::vector<Vec>& pts,
                           double min_sep, const Ratio& ratio,
                           RngStream& rng) {
  double best = ratio(pts);
  double sigma = 0.05 * domain.diameter();
  int stale = 0;
  for (int it = 0; it < 12000 && sigma > 1e-7 * domain.diameter(); ++it) {
    std::vector<Vec> cand = pts;
    for (auto& p : cand)
      for (int i = 0; i < p.dim; ++i) p[i] += sigma * rng.normal();
    bool ok = true;
    for (const auto& p : cand) ok = ok && domain.contains(p);
    for (std::size_t i = 0; ok && i < cand.size(); ++i)
      for (std::size_t j = i + 1; j < cand.size(); ++j)
        ok = ok && dist(cand[i], cand[j]) >= min_sep;
    const double r = ok ? ratio(cand) : -1.0;
    if (r > best) {
      best = r;
      pts = cand;
      stale = 0;
    } else if (++stale >= 40) {
      sigma *= 0.8;
      stale = 0;
    }
  }
  return best;
}

}  // namespace detail

// Deterministic sweep of the generalized 3G inequality: LHS built from
// g_bound, RHS from threeg_rhs_*; reports the empirical constant and the
// component-case coverage.
inline ThreeGReport run_3g_check(const ExperimentConfig& cfg,
                                 long n_quadruples) {
  cfg.validate();
  const int d = cfg.domain.dim();
  if (d < 2) throw config_error("run_3g_check: requires d >= 2");
  ThreeGReport rep;
  RngStream rng(cfg.seed, 0);
  const double min_sep = 0.02 * cfg.domain.diameter();
  auto draw = [&]() { return sample_interior(cfg.domain, rng).coords; };
  double sup_half = 0.0, sup_full = 0.0;
  std::vector<Vec> arg_half, arg_full;
  for (long k = 0; k < n_quadruples; ++k) {
    Vec x = draw(), y = draw(), w = draw();
    if (dist(x, y) < min_sep || dist(y, w) < min_sep || dist(x, w) < min_sep)
      continue;
    double lhs, rhs;
    std::vector<Vec> tuple;
    if (d >= 3) {
      Vec z = draw();
      if (dist(z, w) < min_sep || dist(y, z) < min_sep) continue;
      tuple = {x, y, z, w};
      lhs = g_bound(cfg.spec, cfg.domain, x, y).value *
            g_bound(cfg.spec, cfg.domain, z, w).value /
            g_bound(cfg.spec, cfg.domain, x, w).value;
      ThreeGInput q{make_domain_point(cfg.domain, x),
                    make_domain_point(cfg.domain, y),
                    make_domain_point(cfg.domain, z),
                    make_domain_point(cfg.domain, w)};
      rhs = threeg_rhs_highd(cfg.spec, cfg.domain, q);
      const auto mult = component_multiplier(cfg.spec, cfg.domain, x, y, z, w);
      const int cx = *cfg.domain.component_of(x);
      const int cy = *cfg.domain.component_of(y);
      const int cz = *cfg.domain.component_of(z);
      const int cw = *cfg.domain.component_of(w);
      const int e = (cx != cy) + (cz != cw) - (cx != cw);
      int bucket;
      if (e == -1) bucket = 2;
      else if (e == 1) bucket = 3;
      else if (e == 2) bucket = 4;
      else bucket = (cx == cy && cy == cz && cz == cw) ? 0 : 1;
      ++rep.case_counts[bucket];
      (void)mult;

      // y = z collapse: both wedge factors become max(0/., 1) = 1
      ThreeGInput qc{q.x, q.y, q.y, q.w};
      const double collapsed = threeg_rhs_highd(cfg.spec, cfg.domain, qc);
      const double classical =
          component_multiplier(cfg.spec, cfg.domain, x, y, y, w).value *
          std::pow(dist(x, w), d - 2.0) /
          (std::pow(dist(x, y), d - 2.0) * std::pow(dist(y, w), d - 2.0));
      rep.collapse_max_err =
          std::max(rep.collapse_max_err,
                   std::abs(collapsed - classical) / classical);
    } else {
      lhs = g_bound(cfg.spec, cfg.domain, x, y).value *
            g_bound(cfg.spec, cfg.domain, y, w).value /
            g_bound(cfg.spec, cfg.domain, x, w).value;
      rhs = threeg_rhs_2d(cfg.spec, cfg.domain, x, y, w);
      ++rep.case_counts[0];
      tuple = {x, y, w};
    }
    const double ratio = lhs / rhs;
    if (ratio > sup_full) {
      sup_full = ratio;
      arg_full = tuple;
      if (k < n_quadruples / 2) {
        sup_half = ratio;
        arg_half = tuple;
      }
    }
    ++rep.samples;
  }

  auto tuple_ratio = [&](const std::vector<Vec>& p) {
    if (d >= 3) {
      ThreeGInput q{make_domain_point(cfg.domain, p[0]),
                    make_domain_point(cfg.domain, p[1]),
                    make_domain_point(cfg.domain, p[2]),
                    make_domain_point(cfg.domain, p[3])};
      return g_bound(cfg.spec, cfg.domain, p[0], p[1]).value *
             g_bound(cfg.spec, cfg.domain, p[2], p[3]).value /
             g_bound(cfg.spec, cfg.domain, p[0], p[3]).value /
             threeg_rhs_highd(cfg.spec, cfg.domain, q);
    }
    return g_bound(cfg.spec, cfg.domain, p[0], p[1]).value *
           g_bound(cfg.spec, cfg.domain, p[1], p[2]).value /
           g_bound(cfg.spec, cfg.domain, p[0], p[2]).value /
           threeg_rhs_2d(cfg.spec, cfg.domain, p[0], p[1], p[2]);
  };
  if (!arg_half.empty()) {
    RngStream prng(cfg.seed, 1);
    sup_half = std::max(
        sup_half,
        detail::polish_tuple(cfg.domain, arg_half, min_sep, tuple_ratio, prng));
  }
  if (!arg_full.empty()) {
    RngStream prng(cfg.seed, 2);
    sup_full = std::max(
        sup_full,
        detail::polish_tuple(cfg.domain, arg_full, min_sep, tuple_ratio, prng));
  }
  sup_full = std::max(sup_full, sup_half);

  rep.sup_ratio = sup_full;
  rep.sup_ratio_half = sup_half;
  rep.pass = std::isfinite(sup_full) && sup_full > 0.0 &&
             std::abs(sup_full - sup_half) <=
                 cfg.tol("sup_stability", 0.10) * sup_full;
  return rep;
}

struct MartinReport {
  std::vector<double> deltas, ratios;
  double limit = 0.0;
  double h_value = 0.0;
  double band = 0.0;  // limit / h_value
  bool cauchy_ok = false;
  bool pass = false;
};

namespace detail {

inline Vec boundary_inward_normal(const Domain& domain, const Vec& z) {
  const auto comp = domain.boundary_component_of(z);
  if (!comp)
    throw std::domain_error("boundary_inward_normal: z not on the boundary");
  Vec n;
  n.dim = z.dim;
  if (domain.dim() == 1) {
    const Interval1D& iv = domain.intervals()[*comp];
    n[0] = std::abs(z[0] - iv.lo) < std::abs(z[0] - iv.hi) ? 1.0 : -1.0;
    return n;
  }
  if (domain.kind() == DomainKind::annulus) {
    const BallShape& inner = domain.balls()[0];
    const BallShape& outer = domain.balls()[1];
    Vec dir = z - inner.center;
    const double r = norm(dir);
    const double sign =
        std::abs(r - inner.radius) < std::abs(r - outer.radius) ? 1.0 : -1.0;
    return (sign / r) * dir;
  }
  const BallShape& b = domain.balls()[*comp];
  Vec dir = b.center - z;
  return (1.0 / norm(dir)) * dir;
}

}  // namespace detail

// Deterministic Martin-limit surrogate: the g_bound ratio along an inward
// normal sequence y_k -> z, compared against martin_bound.
inline MartinReport run_martin_limit_check(
    const ExperimentConfig& cfg, const Vec& z,
    const std::vector<double>& delta_sequence) {
  cfg.validate();
  if (delta_sequence.size() < 3)
    throw config_error("run_martin_limit_check: need at least 3 deltas");
  MartinReport rep;
  const Vec normal = detail::boundary_inward_normal(cfg.domain, z);
  for (double dlt : delta_sequence) {
    const Vec yk = z + dlt * normal;
    const double num = g_bound(cfg.spec, cfg.domain, cfg.x, yk).value;
    const double den = g_bound(cfg.spec, cfg.domain, cfg.y, yk).value;
    rep.deltas.push_back(dlt);
    rep.ratios.push_back(num / den);
  }
  const std::size_t n = rep.ratios.size();
  rep.limit = rep.ratios.back();
  rep.cauchy_ok = true;
  for (std::size_t k = n - 3; k + 1 < n; ++k) {
    const double rel =
        std::abs(rep.ratios[k + 1] - rep.ratios[k]) / std::abs(rep.ratios[k]);
    rep.cauchy_ok = rep.cauchy_ok && rel <= cfg.tol("cauchy_tol", 0.02);
  }
  rep.h_value = martin_bound(cfg.spec, cfg.domain, cfg.x, z, cfg.y);
  rep.band = rep.limit / rep.h_value;
  rep.pass = rep.cauchy_ok && std::isfinite(rep.band) && rep.band > 0.0;
  return rep;
}

struct SubordinateReport {
  std::vector<PairRecord> pairs;  // bound_value holds R^a_D
  int violations = 0;
  double log_lower_c = 0.0;  // min over pairs of R / log(1+f)
  bool pass = false;
};

// Eq. R <= G checked one-sided: MC Green estimate + 3 se must dominate the
// subordinate killed Green quadrature at every grid pair.
inline SubordinateReport run_subordinate_lower_check(
    const ExperimentConfig& cfg) {
  cfg.validate();
  SubordinateReport rep;
  rep.log_lower_c = std::numeric_limits<double>::infinity();
  const auto pts = detail::grid_points(cfg.domain, cfg.grid_points);
  const double min_sep = 0.05 * cfg.domain.diameter();
  std::uint64_t pair_seed = cfg.seed;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (dist(pts[i], pts[j]) < min_sep) continue;
      if (*cfg.domain.component_of(pts[i]) != *cfg.domain.component_of(pts[j]))
        continue;
      ++pair_seed;
      PairRecord rec;
      rec.x = pts[i];
      rec.y = pts[j];
      rec.bound_value =
          subordinate_killed_green(cfg.spec, cfg.domain, pts[i], pts[j]);
      const Estimate est = detail::green_estimate(
          cfg.spec, cfg.domain, pts[i], pts[j], cfg.scheme, cfg.n_paths,
          pair_seed * 0x9e3779b97f4a7c15ull);
      rec.estimate = est.mean;
      rec.std_error = est.std_error;
      rec.ratio = est.mean / rec.bound_value;
      if (est.mean + 3.0 * est.std_error < rec.bound_value) ++rep.violations;
      const double f = f_ratio(cfg.domain, pts[i], pts[j]);
      rep.log_lower_c =
          std::min(rep.log_lower_c, rec.bound_value / std::log1p(f));
      rep.pairs.push_back(rec);
    }
  if (rep.pairs.empty())
    throw config_error("run_subordinate_lower_check: empty pair grid");
  rep.pass = rep.violations == 0 && rep.log_lower_c > 0.0;
  return rep;
}

struct PerturbationReport {
  std::vector<PairRecord> pairs;  // estimate = variant, bound_value = plain
  double ratio_min = 0.0, ratio_max = 0.0;
  double band_width_change = 0.0;
  bool stable = false;
  bool pass = false;
};

// Green estimates for a process variant vs the plain process on the same
// grid; pass when the ratio band is finite and stable under path doubling.
// Truncated variants require lambda-rough connectedness of the domain.
inline PerturbationReport run_perturbation_check(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.spec.variant == Variant::plain)
    throw config_error("run_perturbation_check: spec must be a variant");
  if (cfg.spec.variant == Variant::truncated &&
      cfg.domain.component_count() > 1 &&
      !(cfg.domain.gap() < cfg.spec.trunc_lambda))
    throw config_error(
        "run_perturbation_check: domain is not lambda-roughly connected "
        "(inter-component gap exceeds the jump cutoff)");
  ProcessSpec plain = cfg.spec;
  plain.variant = Variant::plain;
  plain.mass = 0.0;
  plain.trunc_lambda = 0.0;

  auto one_pass = [&](long n_paths) {
    const auto pts = detail::grid_points(cfg.domain, cfg.grid_points);
    const double min_sep = 0.05 * cfg.domain.diameter();
    std::vector<PairRecord> out;
    std::uint64_t pair_seed = cfg.seed;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        if (dist(pts[i], pts[j]) < min_sep) continue;
        ++pair_seed;
        PairRecord rec;
        rec.x = pts[i];
        rec.y = pts[j];
        const Estimate var = detail::green_estimate(
            cfg.spec, cfg.domain, pts[i], pts[j], cfg.scheme, n_paths,
            pair_seed * 0x9e3779b97f4a7c15ull);
        const Estimate ref = detail::green_estimate(
            plain, cfg.domain, pts[i], pts[j], cfg.scheme, n_paths,
            pair_seed * 0x9e3779b97f4a7c15ull + 7);
        rec.estimate = var.mean;
        rec.std_error = var.std_error;
        rec.bound_value = ref.mean;
        rec.ratio = var.mean / ref.mean;
        out.push_back(rec);
      }
    return out;
  };

  PerturbationReport rep;
  rep.pairs = one_pass(cfg.n_paths);
  if (rep.pairs.empty())
    throw config_error("run_perturbation_check: empty pair grid");
  detail::band(rep.pairs, rep.ratio_min, rep.ratio_max);
  const auto doubled = one_pass(2 * cfg.n_paths);
  double lo2, hi2;
  detail::band(doubled, lo2, hi2);
  const double w1 = std::log(rep.ratio_max / rep.ratio_min + 1.0);
  const double w2 = std::log(hi2 / lo2 + 1.0);
  rep.band_width_change = std::abs(w2 - w1) / std::max(w1, 1e-300);
  rep.stable = rep.band_width_change <= cfg.tol("band_stability", 0.25);
  rep.pass = rep.ratio_min > 0.0 && std::isfinite(rep.ratio_max) && rep.stable;
  return rep;
}

struct CapacityEntry {
  double r = 0.0;
  double capacity = 0.0;
  double product = 0.0;  // capacity * log(1/r)
  double quad_rel_diff = 0.0;
};

struct CapacityReport {
  std::vector<CapacityEntry> entries;
  double product_min = 0.0, product_max = 0.0;
  bool pass = false;
};

inline CapacityReport run_capacity_check(const std::vector<double>& r_list) {
  CapacityReport rep;
  rep.product_min = std::numeric_limits<double>::infinity();
  rep.product_max = 0.0;
  for (double r : r_list) {
    if (!(r > 0.0 && r < 0.75))
      throw config_error("run_capacity_check: r must be in (0, 3/4)");
    CapacityEntry e;
    e.r = r;
    e.capacity = capacity_concentric(r, 1e-10);
    const double coarse = capacity_concentric(r, 1e-8);
    e.quad_rel_diff = std::abs(e.capacity - coarse) / e.capacity;
    e.product = e.capacity * std::log(1.0 / r);
    rep.product_min = std::min(rep.product_min, e.product);
    rep.product_max = std::max(rep.product_max, e.product);
    rep.entries.push_back(e);
  }
  rep.pass = !rep.entries.empty() && rep.product_min > 0.0 &&
             std::isfinite(rep.product_max);
  for (const auto& e : rep.entries)
    rep.pass = rep.pass && e.quad_rel_diff <= 1e-6;
  return rep;
}

// Batch-means 99% confidence interval.
inline Interval confidence_interval(const std::vector<double>& batch_means) {
  if (batch_means.size() < 20)
    throw config_error("confidence_interval: need at least 20 batches");
  const double n = static_cast<double>(batch_means.size());
  double mean = 0.0;
  for (double m : batch_means) mean += m;
  mean /= n;
  double var = 0.0;
  for (double m : batch_means) var += (m - mean) * (m - mean);
  var /= (n - 1.0);
  const double se = std::sqrt(var / n);
  return {mean - 2.576 * se, mean + 2.576 * se};
}

// Diagnostic for non-convergent (heavy-tailed) batch statistics: a single
// batch dominating the variance, or wildly unequal half-sample variances.
inline bool batch_variance_unstable(const std::vector<double>& batch_means) {
  if (batch_means.size() < 20)
    throw config_error("batch_variance_unstable: need at least 20 batches");
  const std::size_t n = batch_means.size();
  double mean = 0.0;
  for (double m : batch_means) mean += m;
  mean /= n;
  double total = 0.0, biggest = 0.0;
  for (double m : batch_means) {
    const double d2 = (m - mean) * (m - mean);
    total += d2;
    biggest = std::max(biggest, d2);
  }
  if (total > 0.0 && biggest / total > 0.5) return true;
  auto half_var = [&](std::size_t lo, std::size_t hi) {
    double mu = 0.0;
    for (std::size_t i = lo; i < hi; ++i) mu += batch_means[i];
    mu /= (hi - lo);
    double v = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      v += (batch_means[i] - mu) * (batch_means[i] - mu);
    return v / (hi - lo - 1);
  };
  const double v1 = half_var(0, n / 2);
  const double v2 = half_var(n / 2, n);
  const double big = std::max(v1, v2), small = std::min(v1, v2);
  return small == 0.0 ? big > 0.0 : big / small > 20.0;
}

}  // namespace greenlab
