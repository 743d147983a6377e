#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "droneplace/ddp.hpp"
#include "droneplace/model.hpp"

namespace droneplace {

struct PartitionPlan {
  enum Kind { kNone, kSplitX, kSplitY, kQuad };
  Kind kind = kNone;
  std::vector<Area> sub_areas;   // tile the input area exactly
  std::vector<double> x_lines;   // partition lines actually used
  std::vector<double> y_lines;

  // Sub-area holding a point; boundary points resolve to the
  // lower-coordinate (left/bottom) region.
  int region_of(const Point& p) const;
};

// GBS-anchored pre-partition rule: split on both axes when every boundary
// is farther than r_g, on one axis when only that axis clears r_g on both
// sides, otherwise no split. Throws std::domain_error when the GBS is
// outside the area.
PartitionPlan classify_partition(const Area& area, const Point& gbs,
                                 double r_g);

struct EddpOptions {
  std::optional<int> k_override;  // total fleet, split over regions
  int threads = 0;                // 0: one thread per region
};

DdpOutcome run_eddp(const Scenario& scenario, const SystemConfig& config,
                    std::uint64_t seed, const EddpOptions& options = {});

struct ComplexityReduction {
  double reduction = 0.0;  // fraction in [0, 1)
  bool valid = false;      // both area extents exceed 2 r_g
};

// Expected complexity reduction of the pre-partitioned search over a
// uniformly random GBS position:
// 1 - (|A|_x + 14 r_g)(|A|_y + 14 r_g) / (64 |A|_x |A|_y).
ComplexityReduction expected_complexity_reduction(const Area& area,
                                                  double r_g);

struct PartitionProbabilities {
  double p1 = 0.0;  // no split
  double p2 = 0.0;  // one axis
  double p4 = 0.0;  // both axes
};

PartitionProbabilities partition_probabilities(const Area& area, double r_g);

}  // namespace droneplace
