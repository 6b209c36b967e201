#pragma once

// Catalog of C^{1,1} domains with exact distance-to-boundary and component
// queries: interval unions (d=1), ball/annulus (d=2,3) and disjoint ball
// unions. Points on the boundary are treated as exterior.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "greenlab/errors.hpp"

namespace greenlab {

struct Vec {
  int dim = 1;
  std::array<double, 3> c{0.0, 0.0, 0.0};

  Vec() = default;
  explicit Vec(double x) : dim(1), c{x, 0.0, 0.0} {}
  Vec(double x, double y) : dim(2), c{x, y, 0.0} {}
  Vec(double x, double y, double z) : dim(3), c{x, y, z} {}

  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }
};

inline Vec operator+(Vec a, const Vec& b) {
  for (int i = 0; i < a.dim; ++i) a.c[i] += b.c[i];
  return a;
}
inline Vec operator-(Vec a, const Vec& b) {
  for (int i = 0; i < a.dim; ++i) a.c[i] -= b.c[i];
  return a;
}
inline Vec operator*(double s, Vec a) {
  for (int i = 0; i < a.dim; ++i) a.c[i] *= s;
  return a;
}
inline double norm(const Vec& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s += a.c[i] * a.c[i];
  return std::sqrt(s);
}
inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

enum class DomainKind { interval_union, ball, annulus, ball_union };

struct Interval1D {
  double lo, hi;
};

struct BallShape {
  Vec center;
  double radius;
};

class Domain {
 public:
  static Domain interval_union(std::vector<Interval1D> intervals) {
    Domain d;
    d.kind_ = DomainKind::interval_union;
    d.dim_ = 1;
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval1D& a, const Interval1D& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      if (!(intervals[i].hi > intervals[i].lo))
        throw std::invalid_argument("Domain: interval must have positive length");
      if (i > 0 && !(intervals[i].lo > intervals[i - 1].hi))
        throw std::invalid_argument("Domain: intervals must have positive gaps");
    }
    d.intervals_ = std::move(intervals);
    return d;
  }

  static Domain interval(double lo, double hi) {
    return interval_union({{lo, hi}});
  }

  static Domain ball(Vec center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("Domain: radius must be > 0");
    if (center.dim < 2) throw std::invalid_argument("Domain: ball needs d >= 2");
    Domain d;
    d.kind_ = DomainKind::ball;
    d.dim_ = center.dim;
    d.balls_ = {{center, radius}};
    return d;
  }

  static Domain annulus(Vec center, double r_in, double r_out) {
    if (!(0.0 < r_in && r_in < r_out))
      throw std::invalid_argument("Domain: annulus needs 0 < r_in < r_out");
    Domain d;
    d.kind_ = DomainKind::annulus;
    d.dim_ = center.dim;
    d.balls_ = {{center, r_in}, {center, r_out}};
    return d;
  }

  static Domain ball_union(std::vector<BallShape> balls) {
    if (balls.empty()) throw std::invalid_argument("Domain: empty ball union");
    Domain d;
    d.kind_ = DomainKind::ball_union;
    d.dim_ = balls.front().center.dim;
    for (std::size_t i = 0; i < balls.size(); ++i) {
      if (!(balls[i].radius > 0.0))
        throw std::invalid_argument("Domain: radius must be > 0");
      if (balls[i].center.dim != d.dim_)
        throw std::invalid_argument("Domain: mixed dimensions in ball union");
      for (std::size_t j = 0; j < i; ++j) {
        if (!(dist(balls[i].center, balls[j].center) >
              balls[i].radius + balls[j].radius))
          throw std::invalid_argument("Domain: balls must have positive gaps");
      }
    }
    d.balls_ = std::move(balls);
    return d;
  }

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<Interval1D>& intervals() const { return intervals_; }
  const std::vector<BallShape>& balls() const { return balls_; }

  int component_count() const {
    switch (kind_) {
      case DomainKind::interval_union: return static_cast<int>(intervals_.size());
      case DomainKind::ball: return 1;
      case DomainKind::annulus: return 1;
      case DomainKind::ball_union: return static_cast<int>(balls_.size());
    }
    return 0;
  }

  bool contains(const Vec& x) const { return component_of(x).has_value(); }

  std::optional<int> component_of(const Vec& x) const {
    check_dim(x);
    switch (kind_) {
      case DomainKind::interval_union:
        for (std::size_t i = 0; i < intervals_.size(); ++i)
          if (x[0] > intervals_[i].lo && x[0] < intervals_[i].hi)
            return static_cast<int>(i);
        return std::nullopt;
      case DomainKind::ball:
        if (dist(x, balls_[0].center) < balls_[0].radius) return 0;
        return std::nullopt;
      case DomainKind::annulus: {
        const double r = dist(x, balls_[0].center);
        if (r > balls_[0].radius && r < balls_[1].radius) return 0;
        return std::nullopt;
      }
      case DomainKind::ball_union:
        for (std::size_t i = 0; i < balls_.size(); ++i)
          if (dist(x, balls_[i].center) < balls_[i].radius)
            return static_cast<int>(i);
        return std::nullopt;
    }
    return std::nullopt;
  }

  // Exact delta_D(x) inside; 0 outside (boundary included).
  double dist_to_boundary(const Vec& x) const {
    check_dim(x);
    switch (kind_) {
      case DomainKind::interval_union:
        for (const auto& iv : intervals_)
          if (x[0] > iv.lo && x[0] < iv.hi)
            return std::min(x[0] - iv.lo, iv.hi - x[0]);
        return 0.0;
      case DomainKind::ball: {
        const double r = dist(x, balls_[0].center);
        return r < balls_[0].radius ? balls_[0].radius - r : 0.0;
      }
      case DomainKind::annulus: {
        const double r = dist(x, balls_[0].center);
        if (r > balls_[0].radius && r < balls_[1].radius)
          return std::min(r - balls_[0].radius, balls_[1].radius - r);
        return 0.0;
      }
      case DomainKind::ball_union:
        for (const auto& b : balls_) {
          const double r = dist(x, b.center);
          if (r < b.radius) return b.radius - r;
        }
        return 0.0;
    }
    return 0.0;
  }

  // Nearest boundary point; for interior points this realizes delta_D.
  Vec project_to_boundary(const Vec& x) const {
    check_dim(x);
    switch (kind_) {
      case DomainKind::interval_union: {
        double best = std::numeric_limits<double>::infinity();
        double bx = 0.0;
        for (const auto& iv : intervals_) {
          for (double e : {iv.lo, iv.hi}) {
            if (std::abs(x[0] - e) < best) {
              best = std::abs(x[0] - e);
              bx = e;
            }
          }
        }
        return Vec(bx);
      }
      case DomainKind::ball:
        return sphere_point(balls_[0], x);
      case DomainKind::annulus: {
        const double r = dist(x, balls_[0].center);
        const BallShape& near =
            (r - balls_[0].radius < balls_[1].radius - r) ? balls_[0] : balls_[1];
        return sphere_point(near, x);
      }
      case DomainKind::ball_union: {
        double best = std::numeric_limits<double>::infinity();
        Vec bp = x;
        for (const auto& b : balls_) {
          const Vec p = sphere_point(b, x);
          if (dist(x, p) < best) {
            best = dist(x, p);
            bp = p;
          }
        }
        return bp;
      }
    }
    return x;
  }

  double diameter() const {
    switch (kind_) {
      case DomainKind::interval_union:
        return intervals_.back().hi - intervals_.front().lo;
      case DomainKind::ball:
        return 2.0 * balls_[0].radius;
      case DomainKind::annulus:
        return 2.0 * balls_[1].radius;
      case DomainKind::ball_union: {
        double d = 0.0;
        for (std::size_t i = 0; i < balls_.size(); ++i)
          for (std::size_t j = 0; j < balls_.size(); ++j)
            d = std::max(d, dist(balls_[i].center, balls_[j].center) +
                                balls_[i].radius + balls_[j].radius);
        return d;
      }
    }
    return 0.0;
  }

  // Minimal inter-component gap; +infinity for connected domains.
  double gap() const {
    double g = std::numeric_limits<double>::infinity();
    switch (kind_) {
      case DomainKind::interval_union:
        for (std::size_t i = 1; i < intervals_.size(); ++i)
          g = std::min(g, intervals_[i].lo - intervals_[i - 1].hi);
        return g;
      case DomainKind::ball:
      case DomainKind::annulus:
        return g;
      case DomainKind::ball_union:
        for (std::size_t i = 0; i < balls_.size(); ++i)
          for (std::size_t j = 0; j < i; ++j)
            g = std::min(g, dist(balls_[i].center, balls_[j].center) -
                                balls_[i].radius - balls_[j].radius);
        return g;
    }
    return g;
  }

  // Component of the boundary whose closure owns z, with tolerance snapping;
  // nullopt when z is not on the boundary.
  std::optional<int> boundary_component_of(const Vec& z, double tol = 1e-12) const {
    check_dim(z);
    switch (kind_) {
      case DomainKind::interval_union:
        for (std::size_t i = 0; i < intervals_.size(); ++i)
          if (std::abs(z[0] - intervals_[i].lo) <= tol ||
              std::abs(z[0] - intervals_[i].hi) <= tol)
            return static_cast<int>(i);
        return std::nullopt;
      case DomainKind::ball:
        if (std::abs(dist(z, balls_[0].center) - balls_[0].radius) <= tol)
          return 0;
        return std::nullopt;
      case DomainKind::annulus: {
        const double r = dist(z, balls_[0].center);
        if (std::abs(r - balls_[0].radius) <= tol ||
            std::abs(r - balls_[1].radius) <= tol)
          return 0;
        return std::nullopt;
      }
      case DomainKind::ball_union:
        for (std::size_t i = 0; i < balls_.size(); ++i)
          if (std::abs(dist(z, balls_[i].center) - balls_[i].radius) <= tol)
            return static_cast<int>(i);
        return std::nullopt;
    }
    return std::nullopt;
  }

  // Axis-aligned bounding box.
  void bounding_box(Vec& lo, Vec& hi) const {
    lo.dim = hi.dim = dim_;
    if (kind_ == DomainKind::interval_union) {
      lo[0] = intervals_.front().lo;
      hi[0] = intervals_.back().hi;
      return;
    }
    for (int i = 0; i < dim_; ++i) {
      lo[i] = std::numeric_limits<double>::infinity();
      hi[i] = -lo[i];
    }
    const std::size_t first = (kind_ == DomainKind::annulus) ? 1 : 0;
    for (std::size_t b = first; b < balls_.size(); ++b) {
      for (int i = 0; i < dim_; ++i) {
        lo[i] = std::min(lo[i], balls_[b].center[i] - balls_[b].radius);
        hi[i] = std::max(hi[i], balls_[b].center[i] + balls_[b].radius);
      }
    }
  }

  Domain scaled(double lam) const {
    Domain d = *this;
    for (auto& iv : d.intervals_) {
      iv.lo *= lam;
      iv.hi *= lam;
    }
    for (auto& b : d.balls_) {
      b.center = lam * b.center;
      b.radius *= lam;
    }
    return d;
  }

 private:
  static Vec sphere_point(const BallShape& b, const Vec& x) {
    Vec u = x - b.center;
    const double r = norm(u);
    if (r == 0.0) {
      Vec p = b.center;
      p[0] += b.radius;
      return p;
    }
    return b.center + (b.radius / r) * u;
  }

  void check_dim(const Vec& x) const {
    if (x.dim != dim_) throw std::invalid_argument("Domain: dimension mismatch");
  }

  DomainKind kind_ = DomainKind::interval_union;
  int dim_ = 1;
  std::vector<Interval1D> intervals_;
  std::vector<BallShape> balls_;  // annulus: [inner, outer]
};

struct DomainPoint {
  Vec coords;
  int component_id = 0;
  double delta = 0.0;
};

inline DomainPoint make_domain_point(const Domain& d, const Vec& x) {
  const auto comp = d.component_of(x);
  if (!comp) throw std::invalid_argument("make_domain_point: x not in D");
  return {x, *comp, d.dist_to_boundary(x)};
}

struct SampleStrategy {
  enum class Kind { uniform, boundary_layer } kind = Kind::uniform;
  double depth = 0.0;

  static SampleStrategy uniform() { return {Kind::uniform, 0.0}; }
  static SampleStrategy boundary_layer(double depth) {
    return {Kind::boundary_layer, depth};
  }
};

// Rejection sampling from the bounding box; Rng must provide uniform().
template <class Rng>
DomainPoint sample_interior(const Domain& d, Rng& rng,
                            SampleStrategy strategy = SampleStrategy::uniform()) {
  Vec lo, hi;
  d.bounding_box(lo, hi);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    Vec x;
    x.dim = d.dim();
    for (int i = 0; i < d.dim(); ++i)
      x[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform();
    if (!d.contains(x)) continue;
    if (strategy.kind == SampleStrategy::Kind::boundary_layer &&
        !(d.dist_to_boundary(x) < strategy.depth))
      continue;
    return make_domain_point(d, x);
  }
  throw sampling_error("sample_interior: rejection budget exhausted");
}

}  // namespace greenlab
