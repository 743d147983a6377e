#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "droneplace/model.hpp"

namespace droneplace {

struct DdpOptions {
  std::optional<int> k_override;
  // Balanced-k-means comparator: clusters once, places each DBS at the
  // cluster centroid with the farthest-member radius, and skips both the
  // enclosing-circle refinement and the re-association loop.
  bool baseline_only = false;
};

struct DdpOutcome {
  Placement placement;
  std::vector<int> k_searched;
  bool feasible = false;
  int satisfied_count = 0;
  double satisfaction_rate = 0.0;
  int n_g = 0;
  double wall_time_s = 0.0;
  std::string note;  // infeasibility reason, empty when feasible
};

// Interference-free top-N_G association of UEs onto the GBS (full-band
// noise, mean fading); non-selected UEs stay unserved.
Association initial_gbs_association(const Scenario& scenario,
                                    const SystemConfig& config);

// ceil(tau * n_unserved * c_min / (B log2(1 + gamma_th))).
int k_lower_bound(int n_unserved, const SystemConfig& config);

// min(floor(B_bk log2(1+gamma_bk) / (B log2(1+gamma))), K).
int k_upper_bound(const SystemConfig& config);

// Per-cluster minimum enclosing circle -> DBS center and radius (clamped
// into radius_bounds), altitude from the optimal elevation angle.
// `clusters` holds UE indices into the scenario; empty clusters throw.
std::vector<DbsSite> refine_placement(
    const std::vector<std::vector<int>>& clusters, const Scenario& scenario,
    const SystemConfig& config, std::uint64_t seed);

struct ReassociateResult {
  Association association;
  bool changed = false;
};

// One sweep over failing UEs (unserved, off-coverage, SINR or rate below
// target): each tries other covering DBSs in ascending horizontal distance
// whose post-move SINR clears gamma_th and whose backhaul budget admits
// c_min more; UEs with no viable candidate are tagged unserved.
ReassociateResult reassociate(const Placement& placement,
                              const Scenario& scenario,
                              const SystemConfig& config);

DdpOutcome run_ddp(const Scenario& scenario, const SystemConfig& config,
                   std::uint64_t seed, const DdpOptions& options = {});

namespace detail {

// Sub-problem over a UE subset, used directly by the pre-partitioned
// variant. The GBS stays a global interference source even when the
// region does not contain it.
struct RegionInput {
  Area area;
  bool gbs_in_region = true;
  std::vector<int> ue_ids;  // indices into the global scenario
};

struct RegionOutcome {
  std::vector<DbsSite> dbs;   // ids 1..k, local numbering
  std::vector<int> tags;      // aligned with RegionInput::ue_ids
  std::vector<int> k_searched;
  bool feasible = false;
  int satisfied_count = 0;
  std::string note;
};

RegionOutcome run_region(const Scenario& global, const RegionInput& region,
                         const SystemConfig& config, std::uint64_t seed,
                         const DdpOptions& options);

}  // namespace detail

}  // namespace droneplace
