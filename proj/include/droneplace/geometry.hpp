#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "droneplace/model.hpp"

namespace droneplace {

struct Circle {
  Point center;
  double radius = 0.0;

  bool contains(const Point& p, double eps = 1e-9) const {
    return horizontal_distance(center, p) <= radius + eps;
  }
};

// Residual of the tan/S-curve stationarity equation that ties the optimal
// elevation angle to (a, b, eta_los, eta_nlos). Root of this in theta is
// the angle at which coverage radius is maximal for a given path loss.
double elevation_equation_residual(double theta_rad, const Environment& env);

// Unique root of the equation above in (0, pi/2), found by bracketed
// bisection to |f| < 1e-12. Cached per environment. Throws
// std::domain_error when no sign change exists (e.g. eta_nlos == eta_los).
double optimal_elevation_angle(const Environment& env);

struct AltitudeResult {
  double altitude_m = 0.0;
  bool clamped = false;        // hit [h_min, h_max]
  bool loss_exceeded = false;  // edge path loss above l_allowable_db
};

// h = r * tan(theta*), clamped into the config altitude interval. The
// allowable-loss check is advisory here; evaluation enforces it.
AltitudeResult altitude_for_radius(double r_m, const Environment& env,
                                   const SystemConfig& config);

struct RadiusBounds {
  double r_min = 0.0;
  double r_max = 0.0;
};

// Coverage-radius interval induced by the altitude bounds through theta*,
// with r_max additionally capped where the cell-edge path loss reaches
// l_allowable_db.
RadiusBounds radius_bounds(const Environment& env, const SystemConfig& config);

// Smallest circle containing all points; randomized incremental
// construction, expected linear time, deterministic given the seed.
// Throws std::domain_error on empty input.
Circle minimum_enclosing_circle(std::span<const Point> points,
                                std::uint64_t seed);

// Exact lens area of two intersecting disks (full containment returns the
// smaller disk's area).
double circle_overlap_area(const Circle& c1, const Circle& c2);

// Lens area restricted to the serving rectangle. Falls back to the exact
// formula when the lens lies fully inside; otherwise integrates the
// clamped vertical slab widths.
double circle_overlap_area_clipped(const Circle& c1, const Circle& c2,
                                   const Area& area);

}  // namespace droneplace
