#include "droneplace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "droneplace/channel.hpp"
#include "droneplace/rng.hpp"
#include "droneplace/units.hpp"

namespace droneplace {

double elevation_equation_residual(double theta_rad, const Environment& env) {
  double theta_deg = deg_from_rad(theta_rad);
  double e = std::exp(-env.b * (theta_deg - env.a));
  double denom = env.a * e + 1.0;
  return kPi / (9.0 * std::log(10.0)) * std::tan(theta_rad) +
         env.a * env.b * (env.eta_los - env.eta_nlos) * e / (denom * denom);
}

namespace {

double solve_elevation_angle(const Environment& env) {
  const double eps = 1e-9;
  double lo = eps;
  double hi = kPi / 2.0 - eps;
  double flo = elevation_equation_residual(lo, env);
  double fhi = elevation_equation_residual(hi, env);
  if (!(flo < 0.0 && fhi > 0.0)) {
    throw std::domain_error(
        "no root of the elevation-angle equation in (0, 90 deg) for "
        "environment '" +
        env.label + "'");
  }
  double best = lo;
  double best_abs = std::abs(flo);
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = elevation_equation_residual(mid, env);
    if (std::abs(fm) < best_abs) {
      best = mid;
      best_abs = std::abs(fm);
    }
    if (fm < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return best;
}

}  // namespace

double optimal_elevation_angle(const Environment& env) {
  using Key = std::tuple<double, double, double, double>;
  static std::map<Key, double> cache;
  static std::mutex mutex;
  Key key{env.a, env.b, env.eta_los, env.eta_nlos};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  double theta = solve_elevation_angle(env);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, theta);
  return theta;
}

AltitudeResult altitude_for_radius(double r_m, const Environment& env,
                                   const SystemConfig& config) {
  if (!(r_m > 0.0)) throw std::domain_error("radius must be positive");
  double theta = optimal_elevation_angle(env);
  AltitudeResult res;
  res.altitude_m = r_m * std::tan(theta);
  if (res.altitude_m < config.h_min_m) {
    res.altitude_m = config.h_min_m;
    res.clamped = true;
  } else if (res.altitude_m > config.h_max_m) {
    res.altitude_m = config.h_max_m;
    res.clamped = true;
  }
  double edge_loss =
      atg_mean_path_loss_db(res.altitude_m, r_m, env, config.fc_hz, config);
  res.loss_exceeded = edge_loss > config.l_allowable_db;
  return res;
}

RadiusBounds radius_bounds(const Environment& env, const SystemConfig& config) {
  double tan_theta = std::tan(optimal_elevation_angle(env));
  RadiusBounds b;
  b.r_min = config.h_min_m / tan_theta;
  double r_from_h = config.h_max_m / tan_theta;

  // Radius at which cell-edge loss along the theta* ray hits the allowable
  // limit; the loss is strictly increasing in r, so bisection applies.
  auto edge_loss = [&](double r) {
    return atg_mean_path_loss_db(r * tan_theta, r, env, config.fc_hz, config);
  };
  double r_loss = r_from_h;
  if (edge_loss(r_from_h) > config.l_allowable_db) {
    double lo = 1.0, hi = r_from_h;
    if (edge_loss(lo) > config.l_allowable_db) {
      r_loss = lo;
    } else {
      for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
        double mid = 0.5 * (lo + hi);
        if (edge_loss(mid) > config.l_allowable_db)
          hi = mid;
        else
          lo = mid;
      }
      r_loss = lo;
    }
  }
  b.r_max = std::min(r_from_h, r_loss);
  return b;
}

namespace {

Circle circle_from_two(const Point& a, const Point& b) {
  Point c{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  return {c, 0.5 * horizontal_distance(a, b)};
}

// Circumcircle; collinear triples fall back to the widest diameter pair.
Circle circle_from_three(const Point& a, const Point& b, const Point& c) {
  double bx = b.x - a.x, by = b.y - a.y;
  double cx = c.x - a.x, cy = c.y - a.y;
  double d = 2.0 * (bx * cy - by * cx);
  double scale = std::max({std::abs(bx), std::abs(by), std::abs(cx),
                           std::abs(cy), 1e-300});
  if (std::abs(d) < 1e-14 * scale * scale) {
    Circle best = circle_from_two(a, b);
    for (const Circle& cand :
         {circle_from_two(a, c), circle_from_two(b, c)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
  double b2 = bx * bx + by * by;
  double c2 = cx * cx + cy * cy;
  double ux = (cy * b2 - by * c2) / d;
  double uy = (bx * c2 - cx * b2) / d;
  Point center{a.x + ux, a.y + uy};
  return {center, std::hypot(ux, uy)};
}

constexpr double kMecEps = 1e-9;

bool in_circle(const Circle& c, const Point& p) {
  return horizontal_distance(c.center, p) <= c.radius + kMecEps;
}

}  // namespace

Circle minimum_enclosing_circle(std::span<const Point> points,
                                std::uint64_t seed) {
  if (points.empty())
    throw std::domain_error("minimum_enclosing_circle: empty input");

  std::vector<Point> pts(points.begin(), points.end());
  Rng rng(seed);
  rng.shuffle(pts);

  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (in_circle(c, pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (in_circle(c, pts[j])) continue;
      c = circle_from_two(pts[i], pts[j]);
      for (std::size_t q = 0; q < j; ++q) {
        if (in_circle(c, pts[q])) continue;
        c = circle_from_three(pts[i], pts[j], pts[q]);
      }
    }
  }
  return c;
}

double circle_overlap_area(const Circle& c1, const Circle& c2) {
  double d = horizontal_distance(c1.center, c2.center);
  double r1 = c1.radius, r2 = c2.radius;
  if (d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) {
    double r = std::min(r1, r2);
    return kPi * r * r;
  }
  auto clamp1 = [](double x) { return std::clamp(x, -1.0, 1.0); };
  double a1 = std::acos(clamp1((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)));
  double a2 = std::acos(clamp1((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)));
  double t = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(0.0, t));
}

double circle_overlap_area_clipped(const Circle& c1, const Circle& c2,
                                   const Area& area) {
  double d = horizontal_distance(c1.center, c2.center);
  if (d >= c1.radius + c2.radius) return 0.0;

  double x_lo = std::max(c1.center.x - c1.radius, c2.center.x - c2.radius);
  double x_hi = std::min(c1.center.x + c1.radius, c2.center.x + c2.radius);
  double y_lo = std::max(c1.center.y - c1.radius, c2.center.y - c2.radius);
  double y_hi = std::min(c1.center.y + c1.radius, c2.center.y + c2.radius);
  if (x_lo >= area.x_min && x_hi <= area.x_max && y_lo >= area.y_min &&
      y_hi <= area.y_max) {
    return circle_overlap_area(c1, c2);
  }

  double a = std::max(x_lo, area.x_min);
  double b = std::min(x_hi, area.x_max);
  if (a >= b) return 0.0;

  // The lens is convex, so each vertical slice is one interval; clamp it
  // to the rectangle and integrate with composite Simpson.
  auto slab = [&](double x) {
    double dx1 = x - c1.center.x, dx2 = x - c2.center.x;
    double s1 = c1.radius * c1.radius - dx1 * dx1;
    double s2 = c2.radius * c2.radius - dx2 * dx2;
    if (s1 <= 0.0 || s2 <= 0.0) return 0.0;
    double h1 = std::sqrt(s1), h2 = std::sqrt(s2);
    double lo = std::max({c1.center.y - h1, c2.center.y - h2, area.y_min});
    double hi = std::min({c1.center.y + h1, c2.center.y + h2, area.y_max});
    return std::max(0.0, hi - lo);
  };

  const int n = 8192;  // even
  double h = (b - a) / n;
  double sum = slab(a) + slab(b);
  for (int i = 1; i < n; ++i) sum += slab(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace droneplace
