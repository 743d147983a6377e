#pragma once

#include <cstdint>
#include <vector>

#include "droneplace/model.hpp"

namespace droneplace {

// Disk-membership tolerance. Minimum-enclosing-circle support points land
// on the boundary up to rounding, so membership tests get sub-micron slack.
constexpr double kDiskEps = 1e-7;

struct LinkBudget {
  double path_loss_db = 0.0;
  double sinr_db = 0.0;
  double bandwidth_hz = 0.0;
  double rate_bps = 0.0;  // Shannon rate over the allocated bandwidth
  double interference_from_gbs_mw = 0.0;
  double interference_from_dbs_mw = 0.0;
  bool meets_threshold = false;
};

struct FadingMode {
  enum Kind { kMean, kSampled };
  Kind kind = kMean;
  std::uint64_t seed = 0;

  static FadingMode mean() { return {kMean, 0}; }
  static FadingMode sampled(std::uint64_t seed) { return {kSampled, seed}; }
};

// 28 GHz mmWave LoS path loss, 61.4 + 20 log10(d).
double backhaul_path_loss_db(double distance_m);

// GBS -> DBS feeder link with the mmWave band split equally over k DBSs.
LinkBudget backhaul_link(const DbsSite& dbs, const Point& gbs, int k,
                         const SystemConfig& config);

// LoS probability of the air-to-ground channel at DBS altitude h over a
// user at horizontal range r; r = 0 maps to a 90 degree elevation angle.
double los_probability(double h_m, double r_m, const Environment& env);

// Probability-weighted mean ATG path loss: FSPL(d) + P_LoS*eta_los +
// P_NLoS*eta_nlos with d = sqrt(r^2 + h^2).
double atg_mean_path_loss_db(double h_m, double r_m, const Environment& env,
                             double fc_hz, const SystemConfig& config);

// Interference-free GBS coverage radius with mean fading and full-band
// noise: (P_G / (gamma_th * B * N0))^(1/alpha).
double gbs_coverage_radius(const SystemConfig& config);

// Fronthaul link of a UE served by a DBS; throws std::domain_error when
// the UE lies outside the serving disk.
LinkBudget dbs_ue_link(int ue_index, int serving_dbs_id,
                       const Placement& placement, const Scenario& scenario,
                       const SystemConfig& config);

// Terrestrial link of a UE on the GBS, mean fading unless sampled.
LinkBudget gbs_ue_link(int ue_index, const Placement& placement,
                       const Scenario& scenario, const SystemConfig& config,
                       FadingMode fading = FadingMode::mean());

// Minimum transmit power that reaches `rate_bps` over `bandwidth_hz`
// against the given path loss and interference.
double required_transmit_power_mw(double path_loss_db, double interference_mw,
                                  double bandwidth_hz, double rate_bps,
                                  const SystemConfig& config);

struct DbsPowerReport {
  std::vector<double> power_mw;   // P_j, summed per-UE required powers
  std::vector<double> rate_bps;   // C_j, summed allocated rates
};

DbsPowerReport dbs_power_report(const Placement& placement,
                                const Scenario& scenario,
                                const SystemConfig& config);

// Per-UE link rows for a whole placement; the single source of truth for
// association bookkeeping shared by the solvers and the evaluator.
struct UeLinkRow {
  int tag = Association::kUnserved;
  bool invalid_tag = false;  // tag outside the placement's DBS range
  bool in_disk = false;      // DBS-tagged UE inside its serving disk
  LinkBudget link;
  double allocated_rate_bps = 0.0;  // Shannon rate capped by the cell share
  bool sinr_ok = false;
  bool served = false;    // indicator of Eq-(20)/(22) association validity
  bool rate_ok = false;
  bool loss_ok = true;
  bool satisfied = false;
};

struct LinkTable {
  std::vector<UeLinkRow> ue;
  std::vector<double> backhaul_capacity_bps;  // per DBS
  std::vector<bool> backhaul_ok;
  std::vector<int> n_j;  // association counts, 1-based like the tags
  int n_g = 0;
  int served_count = 0;
  int satisfied_count = 0;
  double sum_rate_bps = 0.0;
};

LinkTable build_link_table(const Placement& placement,
                           const Scenario& scenario,
                           const SystemConfig& config,
                           FadingMode fading = FadingMode::mean());

}  // namespace droneplace
