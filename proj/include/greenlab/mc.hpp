#pragma once

// Killed-path simulation of X^a and its variants, plus the Monte-Carlo
// estimators built on it: exit times, occupation functionals, pointwise
// Green values, hitting probabilities, exit-shell densities, survival.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "greenlab/errors.hpp"
#include "greenlab/geometry.hpp"
#include "greenlab/levy.hpp"
#include "greenlab/rng.hpp"
#include "greenlab/sampler.hpp"

namespace greenlab {

struct SimScheme {
  double base_step = 1e-3;
  double boundary_refine_factor = 0.5;  // step near boundary: factor*delta^2/2
  bool bridge_correction = true;
  double jump_cutoff_eps = 0.0;  // truncated variant; 0 means lambda/100
  long max_steps = 20000000;

  void validate() const {
    if (!(base_step > 0.0)) throw config_error("SimScheme: base_step must be > 0");
    if (!(boundary_refine_factor > 0.0 && boundary_refine_factor < 1.0))
      throw config_error("SimScheme: boundary_refine_factor must be in (0,1)");
    if (max_steps <= 0) throw config_error("SimScheme: max_steps must be > 0");
  }
};

enum class ExitMode { jumped_out, crossed };

struct KilledPathSummary {
  double exit_time = 0.0;
  Vec exit_position;
  ExitMode exit_mode = ExitMode::crossed;
  std::vector<double> occupation;
  long steps = 0;
};

struct path_truncation_error : std::runtime_error {
  KilledPathSummary partial;
  path_truncation_error(const std::string& what, KilledPathSummary p)
      : std::runtime_error(what), partial(std::move(p)) {}
};

struct Interval {
  double lo, hi;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n = 0;
  Interval ci99{0.0, 0.0};
};

inline int worker_count() {
  if (const char* env = std::getenv("GREENLAB_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return std::min(w, 64);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(std::min(hc, 16u));
}

namespace detail {

// Continuous motion can only reach the boundary of the component it started
// in, so crossed exits are projected onto that component's boundary (the
// globally nearest boundary may belong to another component when a step lands
// in the gap).
inline Vec project_to_component_boundary(const Domain& domain, int comp,
                                         const Vec& p) {
  switch (domain.kind()) {
    case DomainKind::interval_union: {
      const Interval1D& iv = domain.intervals()[comp];
      return Vec(std::abs(p[0] - iv.lo) <= std::abs(p[0] - iv.hi) ? iv.lo
                                                                  : iv.hi);
    }
    case DomainKind::annulus: {
      const BallShape& inner = domain.balls()[0];
      const BallShape& outer = domain.balls()[1];
      Vec dir = p - inner.center;
      double n = norm(dir);
      if (n == 0.0) {
        dir.dim = p.dim;
        dir[0] = 1.0;
        n = 1.0;
      }
      const double r = n <= 0.5 * (inner.radius + outer.radius) ? inner.radius
                                                                : outer.radius;
      return inner.center + (r / n) * dir;
    }
    default: {
      const BallShape& b = domain.balls()[comp];
      Vec dir = p - b.center;
      double n = norm(dir);
      if (n == 0.0) {
        dir.dim = p.dim;
        dir[0] = 1.0;
        n = 1.0;
      }
      return b.center + (b.radius / n) * dir;
    }
  }
}

struct PathOutcome {
  KilledPathSummary summary;
  bool hit_target = false;
  bool survived_horizon = false;
};

// One killed path. Optionally stops early on hitting `target` or on reaching
// `horizon`. The Gaussian and jump parts of each step are drawn separately so
// exits can be attributed to a channel; steps where both parts reach the
// boundary are re-simulated at half step.
template <typename F>
inline PathOutcome run_path(const ProcessSpec& spec, const Domain& domain,
                            const Vec& x0, const SimScheme& scheme,
                            RngStream& rng, const std::vector<F>& functionals,
                            const BallShape* target = nullptr,
                            double horizon = -1.0) {
  spec.validate();
  scheme.validate();
  const int d = domain.dim();
  const double aa = std::pow(spec.a, spec.alpha);
  const bool has_jump = spec.a > 0.0;

  std::optional<JumpDecomposition> dec;
  if (has_jump && spec.variant == Variant::truncated) {
    const double eps = scheme.jump_cutoff_eps > 0.0 ? scheme.jump_cutoff_eps
                                                    : spec.trunc_lambda / 100.0;
    dec = decompose_truncated(spec, eps);
  }

  PathOutcome out;
  out.summary.occupation.assign(functionals.size(), 0.0);
  Vec x = x0;
  double t = 0.0;

  if (target && dist(x, target->center) <= target->radius) {
    out.hit_target = true;
    out.summary.exit_position = x;
    return out;
  }

  for (long step = 0; step < scheme.max_steps; ++step) {
    const double delta = domain.dist_to_boundary(x);
    const int comp = *domain.component_of(x);
    double h = std::min(scheme.base_step,
                        scheme.boundary_refine_factor * delta * delta / 2.0);
    if (!(h > 0.0)) h = scheme.base_step * 1e-12;

    Vec x_new;
    bool committed = false, exited = false;
    ExitMode mode = ExitMode::crossed;
    Vec exit_pos;
    for (int halving = 0; halving < 60 && !committed; ++halving) {
      const Vec g = sample_gaussian_increment(h, d, rng);
      Vec j;
      j.dim = d;
      if (has_jump) {
        switch (spec.variant) {
          case Variant::plain:
            j = sample_stable_sym(spec.alpha,
                                  spec.a * std::pow(h, 1.0 / spec.alpha), d,
                                  rng);
            break;
          case Variant::relativistic: {
            const double s =
                sample_relativistic_subordinator(spec.alpha, spec.mass, h, rng);
            j = spec.a * sample_gaussian_increment(s, d, rng);
            break;
          }
          case Variant::truncated: {
            const double lam_rate = aa * dec->big_jump_rate * h;
            // Poisson count by exponential interarrival thinning
            int n_big = 0;
            double acc = rng.exponential();
            while (acc < lam_rate && n_big < 1000) {
              ++n_big;
              acc += rng.exponential();
            }
            for (int k = 0; k < n_big; ++k)
              j = j + sample_truncated_big_jump(spec, dec->cutoff_eps, rng);
            const double sd =
                std::sqrt(aa * dec->small_jump_variance_per_time * h);
            for (int i = 0; i < d; ++i) j[i] += sd * rng.normal();
            break;
          }
        }
      }
      const Vec after_gauss = x + g;
      x_new = after_gauss + j;
      const bool gauss_in = domain.contains(after_gauss);
      const bool new_in = domain.contains(x_new);
      const double jn = norm(j);
      if (new_in) {
        if (scheme.bridge_correction && gauss_in) {
          const double d1 = domain.dist_to_boundary(after_gauss);
          if (rng.uniform() < std::exp(-delta * d1 / h)) {
            exited = true;
            mode = ExitMode::crossed;
            exit_pos = detail::project_to_component_boundary(
                domain, comp, delta < d1 ? x : after_gauss);
          }
        } else if (!gauss_in) {
          // diffusive excursion left and the jump brought it back: count as
          // a crossing at the intermediate point
          exited = true;
          mode = ExitMode::crossed;
          exit_pos = detail::project_to_component_boundary(domain, comp, after_gauss);
        }
        committed = true;
      } else if (gauss_in) {
        // the diffusive part stayed inside: the jump crossed the remaining
        // distance budget on its own
        exited = true;
        mode = ExitMode::jumped_out;
        exit_pos = x_new;
        committed = true;
      } else if (jn < delta) {
        // Gaussian part crossed, jump could not have: continuous exit
        exited = true;
        mode = ExitMode::crossed;
        exit_pos = detail::project_to_component_boundary(domain, comp, after_gauss);
        committed = true;
      } else if (halving == 59) {
        exited = true;
        mode = jn > norm(g) ? ExitMode::jumped_out : ExitMode::crossed;
        exit_pos = mode == ExitMode::jumped_out
                       ? x_new
                       : detail::project_to_component_boundary(domain, comp,
                                                               after_gauss);
        committed = true;
      } else {
        h *= 0.5;  // ambiguous: both channels large, retry at half step
      }
    }

    for (std::size_t i = 0; i < functionals.size(); ++i)
      out.summary.occupation[i] += functionals[i](x) * h;
    t += h;
    ++out.summary.steps;

    if (exited) {
      out.summary.exit_time = t;
      out.summary.exit_position = exit_pos;
      out.summary.exit_mode = mode;
      return out;
    }
    x = x_new;
    if (target && dist(x, target->center) <= target->radius) {
      out.hit_target = true;
      out.summary.exit_position = x;
      out.summary.exit_time = t;
      return out;
    }
    if (horizon > 0.0 && t >= horizon) {
      out.survived_horizon = true;
      out.summary.exit_position = x;
      out.summary.exit_time = t;
      return out;
    }
  }
  out.summary.exit_time = t;
  out.summary.exit_position = x;
  throw path_truncation_error("run_path: max_steps exceeded",
                              std::move(out.summary));
}

// Deterministic batch-means reduction: path i always uses stream i, batches
// are fixed contiguous index ranges summed in path order, and workers are
// assigned whole batches, so the result is bit-identical for any worker
// count.
template <typename PerPath>
inline Estimate run_batches(long n_paths, std::uint64_t seed,
                            PerPath&& per_path) {
  if (n_paths < 100)
    throw config_error("run_batches: need at least 100 paths");
  const int n_batches = 50;
  const long base = n_paths / n_batches;
  const long extra = n_paths % n_batches;
  std::vector<double> batch_sum(n_batches, 0.0);
  std::vector<long> batch_count(n_batches, 0);

  auto run_range = [&](int b0, int b1) {
    long idx = static_cast<long>(b0) * base + std::min<long>(b0, extra);
    for (int b = b0; b < b1; ++b) {
      const long count = base + (b < extra ? 1 : 0);
      double s = 0.0;
      for (long k = 0; k < count; ++k) {
        RngStream rng(seed, static_cast<std::uint64_t>(idx + k));
        s += per_path(rng);
      }
      batch_sum[b] = s;
      batch_count[b] = count;
      idx += count;
    }
  };

  const int workers = std::min(worker_count(), n_batches);
  if (workers <= 1) {
    run_range(0, n_batches);
  } else {
    std::vector<std::thread> pool;
    const int per = (n_batches + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int b0 = w * per, b1 = std::min(n_batches, b0 + per);
      if (b0 < b1) pool.emplace_back(run_range, b0, b1);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<double> means(n_batches);
  double grand = 0.0;
  for (int b = 0; b < n_batches; ++b) {
    means[b] = batch_sum[b] / batch_count[b];
    grand += batch_sum[b];
  }
  Estimate e;
  e.n = n_paths;
  e.mean = grand / n_paths;
  double var = 0.0;
  for (double m : means) var += (m - e.mean) * (m - e.mean);
  var /= (n_batches - 1);
  e.std_error = std::sqrt(var / n_batches);
  e.ci99 = {e.mean - 2.576 * e.std_error, e.mean + 2.576 * e.std_error};
  return e;
}

// Same batching discipline as run_batches but for a vector-valued per-path
// statistic; one path ensemble serves every output slot.
template <typename PerPath>
inline std::vector<Estimate> run_batches_multi(long n_paths,
                                               std::uint64_t seed,
                                               std::size_t n_out,
                                               const PerPath& per_path) {
  if (n_paths < 100)
    throw config_error("run_batches_multi: need at least 100 paths");
  const int n_batches = 50;
  const long base = n_paths / n_batches;
  const long extra = n_paths % n_batches;
  std::vector<std::vector<double>> batch_sum(
      n_batches, std::vector<double>(n_out, 0.0));
  std::vector<long> batch_count(n_batches, 0);

  auto run_range = [&](int b0, int b1) {
    long idx = static_cast<long>(b0) * base + std::min<long>(b0, extra);
    std::vector<double> acc(n_out);
    for (int b = b0; b < b1; ++b) {
      const long count = base + (b < extra ? 1 : 0);
      std::vector<double>& s = batch_sum[b];
      for (long k = 0; k < count; ++k) {
        RngStream rng(seed, static_cast<std::uint64_t>(idx + k));
        per_path(rng, acc);
        for (std::size_t j = 0; j < n_out; ++j) s[j] += acc[j];
      }
      batch_count[b] = count;
      idx += count;
    }
  };

  const int workers = std::min(worker_count(), n_batches);
  if (workers <= 1) {
    run_range(0, n_batches);
  } else {
    std::vector<std::thread> pool;
    const int per = (n_batches + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int b0 = w * per, b1 = std::min(n_batches, b0 + per);
      if (b0 < b1) pool.emplace_back(run_range, b0, b1);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<Estimate> out(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    double grand = 0.0;
    std::vector<double> means(n_batches);
    for (int b = 0; b < n_batches; ++b) {
      means[b] = batch_sum[b][j] / batch_count[b];
      grand += batch_sum[b][j];
    }
    Estimate& e = out[j];
    e.n = n_paths;
    e.mean = grand / n_paths;
    double var = 0.0;
    for (double m : means) var += (m - e.mean) * (m - e.mean);
    var /= (n_batches - 1);
    e.std_error = std::sqrt(var / n_batches);
    e.ci99 = {e.mean - 2.576 * e.std_error, e.mean + 2.576 * e.std_error};
  }
  return out;
}

}  // namespace detail

// One path ensemble from x0, scored against several occupation functionals
// at once; entry j estimates int G(x0, y) f_j(y) dy.
inline std::vector<Estimate> estimate_occupation_profile(
    const ProcessSpec& spec, const Domain& domain, const DomainPoint& x0,
    const std::vector<std::function<double(const Vec&)>>& functionals,
    const SimScheme& scheme, long n_paths, std::uint64_t seed) {
  if (!domain.contains(x0.coords))
    throw std::invalid_argument("estimate_occupation_profile: x0 not in D");
  if (functionals.empty())
    throw std::invalid_argument("estimate_occupation_profile: no functionals");
  return detail::run_batches_multi(
      n_paths, seed, functionals.size(),
      [&](RngStream& rng, std::vector<double>& acc) {
        const auto out =
            detail::run_path(spec, domain, x0.coords, scheme, rng, functionals);
        for (std::size_t j = 0; j < acc.size(); ++j)
          acc[j] = out.summary.occupation[j];
      });
}

inline KilledPathSummary simulate_killed_path(
    const ProcessSpec& spec, const Domain& domain, const DomainPoint& x0,
    const SimScheme& scheme, RngStream& rng,
    const std::vector<std::function<double(const Vec&)>>& functionals = {}) {
  if (!domain.contains(x0.coords))
    throw std::invalid_argument("simulate_killed_path: x0 must lie in D");
  return detail::run_path(spec, domain, x0.coords, scheme, rng, functionals)
      .summary;
}

inline Estimate estimate_mean_exit_time(const ProcessSpec& spec,
                                        const Domain& domain,
                                        const DomainPoint& x0,
                                        const SimScheme& scheme, long n_paths,
                                        std::uint64_t seed) {
  if (!domain.contains(x0.coords))
    throw std::invalid_argument("estimate_mean_exit_time: x0 must lie in D");
  const std::vector<std::function<double(const Vec&)>> none;
  return detail::run_batches(n_paths, seed, [&](RngStream& rng) {
    return detail::run_path(spec, domain, x0.coords, scheme, rng, none)
        .summary.exit_time;
  });
}

inline Estimate estimate_occupation_functional(
    const ProcessSpec& spec, const Domain& domain, const DomainPoint& x0,
    const std::function<double(const Vec&)>& f, const SimScheme& scheme,
    long n_paths, std::uint64_t seed) {
  if (!domain.contains(x0.coords))
    throw std::invalid_argument("estimate_occupation_functional: x0 not in D");
  const std::vector<std::function<double(const Vec&)>> fs{f};
  return detail::run_batches(n_paths, seed, [&](RngStream& rng) {
    return detail::run_path(spec, domain, x0.coords, scheme, rng, fs)
        .summary.occupation[0];
  });
}

inline double default_green_bandwidth(const Domain& domain, long n_paths) {
  return 0.4 * std::pow(static_cast<double>(n_paths),
                        -1.0 / (domain.dim() + 4.0)) *
         domain.diameter();
}

// Occupation estimate against a normalized quartic bump of radius
// `bandwidth` at y; mean -> G^a_D(x0, y) + O(bandwidth^2).
inline Estimate estimate_green_pointwise(const ProcessSpec& spec,
                                         const Domain& domain,
                                         const DomainPoint& x0,
                                         const DomainPoint& y, double bandwidth,
                                         const SimScheme& scheme, long n_paths,
                                         std::uint64_t seed) {
  const int d = domain.dim();
  const double bw =
      bandwidth > 0.0 ? bandwidth : default_green_bandwidth(domain, n_paths);
  if (dist(x0.coords, y.coords) <= 3.0 * bw)
    throw std::domain_error(
        "estimate_green_pointwise: |x0 - y| must exceed 3 bandwidth");
  // int_{|u|<1} (1-|u|^2)^2 du
  const double shape = (d == 1) ? 16.0 / 15.0
                       : (d == 2) ? M_PI / 3.0
                                  : 32.0 * M_PI / 105.0;
  const double norm_const = 1.0 / (shape * std::pow(bw, d));
  const Vec center = y.coords;
  auto bump = [=](const Vec& z) {
    const double r = dist(z, center) / bw;
    if (r >= 1.0) return 0.0;
    const double w = 1.0 - r * r;
    return norm_const * w * w;
  };
  return estimate_occupation_functional(spec, domain, x0, bump, scheme,
                                        n_paths, seed);
}

inline Estimate estimate_hitting_prob(const ProcessSpec& spec,
                                      const Domain& domain,
                                      const BallShape& target,
                                      const DomainPoint& x0,
                                      const SimScheme& scheme, long n_paths,
                                      std::uint64_t seed) {
  if (!domain.contains(target.center))
    throw std::invalid_argument("estimate_hitting_prob: target must be in D");
  const std::vector<std::function<double(const Vec&)>> none;
  return detail::run_batches(n_paths, seed, [&](RngStream& rng) {
    return detail::run_path(spec, domain, x0.coords, scheme, rng, none, &target)
                   .hit_target
               ? 1.0
               : 0.0;
  });
}

struct AnnularShell {
  double r_in, r_out;  // radii measured from the ball center
};

// Density of jumped_out landings per unit volume in the shell, per path.
inline Estimate estimate_poisson_kernel(const ProcessSpec& spec,
                                        const Domain& domain,
                                        const DomainPoint& x0,
                                        const AnnularShell& shell,
                                        const SimScheme& scheme, long n_paths,
                                        std::uint64_t seed) {
  if (domain.kind() != DomainKind::ball)
    throw config_error("estimate_poisson_kernel: domain must be a ball");
  if (!(spec.a > 0.0))
    throw config_error("estimate_poisson_kernel: requires a > 0");
  const BallShape ball = domain.balls()[0];
  if (!(shell.r_in >= ball.radius && shell.r_out > shell.r_in))
    throw config_error("estimate_poisson_kernel: shell must lie outside the ball");
  const int d = domain.dim();
  double volume;
  switch (d) {
    case 1: volume = 2.0 * (shell.r_out - shell.r_in); break;
    case 2:
      volume = M_PI * (shell.r_out * shell.r_out - shell.r_in * shell.r_in);
      break;
    default:
      volume = 4.0 * M_PI / 3.0 *
               (std::pow(shell.r_out, 3) - std::pow(shell.r_in, 3));
      break;
  }
  const std::vector<std::function<double(const Vec&)>> none;
  std::atomic<long> jump_exits{0};
  Estimate e = detail::run_batches(n_paths, seed, [&](RngStream& rng) {
    const auto outcome =
        detail::run_path(spec, domain, x0.coords, scheme, rng, none);
    if (outcome.summary.exit_mode != ExitMode::jumped_out) return 0.0;
    ++jump_exits;
    const double r = dist(outcome.summary.exit_position, ball.center);
    return (r >= shell.r_in && r < shell.r_out) ? 1.0 / volume : 0.0;
  });
  if (jump_exits == 0)
    throw sampling_error("estimate_poisson_kernel: no jump exits recorded");
  return e;
}

inline Estimate estimate_survival(const ProcessSpec& spec, const Domain& domain,
                                  const DomainPoint& x0, double t,
                                  const SimScheme& scheme, long n_paths,
                                  std::uint64_t seed) {
  if (!(t > 0.0)) throw std::domain_error("estimate_survival: t must be > 0");
  const std::vector<std::function<double(const Vec&)>> none;
  return detail::run_batches(n_paths, seed, [&](RngStream& rng) {
    return detail::run_path(spec, domain, x0.coords, scheme, rng, none, nullptr,
                            t)
                   .survived_horizon
               ? 1.0
               : 0.0;
  });
}

}  // namespace greenlab
