#include "droneplace/eddp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "droneplace/channel.hpp"
#include "droneplace/rng.hpp"

namespace droneplace {

int PartitionPlan::region_of(const Point& p) const {
  bool left = x_lines.empty() || p.x <= x_lines[0];
  bool bottom = y_lines.empty() || p.y <= y_lines[0];
  switch (kind) {
    case kNone:
      return 0;
    case kSplitX:
      return left ? 0 : 1;
    case kSplitY:
      return bottom ? 0 : 1;
    case kQuad:
      return (left ? 0 : 1) + (bottom ? 0 : 2);
  }
  return 0;
}

PartitionPlan classify_partition(const Area& area, const Point& gbs,
                                 double r_g) {
  if (!area.contains(gbs))
    throw std::domain_error("classify_partition: GBS outside the area");
  if (!(r_g > 0.0))
    throw std::domain_error("classify_partition: r_g must be positive");

  double dx_min = gbs.x - area.x_min;
  double dx_max = area.x_max - gbs.x;
  double dy_min = gbs.y - area.y_min;
  double dy_max = area.y_max - gbs.y;
  bool x_clear = dx_min > r_g && dx_max > r_g;
  bool y_clear = dy_min > r_g && dy_max > r_g;

  PartitionPlan plan;
  if (x_clear && y_clear) {
    plan.kind = PartitionPlan::kQuad;
    plan.x_lines = {gbs.x};
    plan.y_lines = {gbs.y};
    // Canonical region order: bottom-left, bottom-right, top-left, top-right.
    plan.sub_areas = {
        {area.x_min, gbs.x, area.y_min, gbs.y},
        {gbs.x, area.x_max, area.y_min, gbs.y},
        {area.x_min, gbs.x, gbs.y, area.y_max},
        {gbs.x, area.x_max, gbs.y, area.y_max},
    };
  } else if (x_clear) {
    plan.kind = PartitionPlan::kSplitX;
    plan.x_lines = {gbs.x};
    plan.sub_areas = {
        {area.x_min, gbs.x, area.y_min, area.y_max},
        {gbs.x, area.x_max, area.y_min, area.y_max},
    };
  } else if (y_clear) {
    plan.kind = PartitionPlan::kSplitY;
    plan.y_lines = {gbs.y};
    plan.sub_areas = {
        {area.x_min, area.x_max, area.y_min, gbs.y},
        {area.x_min, area.x_max, gbs.y, area.y_max},
    };
  } else {
    plan.kind = PartitionPlan::kNone;
    plan.sub_areas = {area};
  }
  return plan;
}

namespace {

// Largest-remainder split of the fleet override over regions, weighted by
// UE count, at least one DBS per occupied region.
std::vector<int> split_fleet(int k_total, const std::vector<std::size_t>& n) {
  std::size_t regions = n.size();
  std::vector<int> k(regions, 0);
  std::size_t total = 0;
  for (std::size_t c : n) total += c;
  if (total == 0 || k_total <= 0) return k;

  std::vector<std::pair<double, std::size_t>> rema;
  int assigned = 0;
  for (std::size_t r = 0; r < regions; ++r) {
    if (n[r] == 0) continue;
    double exact = static_cast<double>(k_total) * n[r] / total;
    k[r] = std::max(1, static_cast<int>(std::floor(exact)));
    assigned += k[r];
    rema.emplace_back(exact - std::floor(exact), r);
  }
  std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t i = 0; assigned < k_total && i < rema.size(); ++i) {
    k[rema[i].second] += 1;
    ++assigned;
  }
  for (std::size_t i = 0; assigned > k_total && i < rema.size(); ++i) {
    std::size_t r = rema[rema.size() - 1 - i].second;
    if (k[r] > 1) {
      k[r] -= 1;
      --assigned;
    }
  }
  return k;
}

}  // namespace

DdpOutcome run_eddp(const Scenario& scenario, const SystemConfig& config,
                    std::uint64_t seed, const EddpOptions& options) {
  auto t0 = std::chrono::steady_clock::now();

  double r_g = gbs_coverage_radius(config);
  PartitionPlan plan = classify_partition(scenario.area, scenario.gbs, r_g);
  if (plan.kind == PartitionPlan::kNone) {
    DdpOptions ddp_opts;
    ddp_opts.k_override = options.k_override;
    return run_ddp(scenario, config, seed, ddp_opts);
  }

  const std::size_t regions = plan.sub_areas.size();
  std::vector<detail::RegionInput> inputs(regions);
  int gbs_region = plan.region_of(scenario.gbs);
  for (std::size_t r = 0; r < regions; ++r) {
    inputs[r].area = plan.sub_areas[r];
    inputs[r].gbs_in_region = static_cast<int>(r) == gbs_region;
  }
  for (std::size_t i = 0; i < scenario.ues.size(); ++i) {
    int r = plan.region_of(scenario.ues[i]);
    if (r >= 0) inputs[static_cast<std::size_t>(r)].ue_ids.push_back(
        static_cast<int>(i));
  }

  std::vector<std::size_t> region_sizes(regions);
  for (std::size_t r = 0; r < regions; ++r)
    region_sizes[r] = inputs[r].ue_ids.size();
  std::vector<int> k_share;
  if (options.k_override)
    k_share = split_fleet(*options.k_override, region_sizes);

  std::vector<detail::RegionOutcome> outcomes(regions);
  auto solve_region = [&](std::size_t r) {
    if (inputs[r].ue_ids.empty()) {
      outcomes[r].feasible = true;  // nothing to serve, nothing deployed
      return;
    }
    DdpOptions ddp_opts;
    if (options.k_override) ddp_opts.k_override = k_share[r];
    outcomes[r] = detail::run_region(scenario, inputs[r], config,
                                     seed ^ static_cast<std::uint64_t>(r),
                                     ddp_opts);
  };

  int budget = options.threads > 0
                   ? options.threads
                   : static_cast<int>(regions);
  if (budget > 1) {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex m;
    for (int t = 0; t < std::min<int>(budget, static_cast<int>(regions)); ++t) {
      pool.emplace_back([&]() {
        for (;;) {
          std::size_t r;
          {
            std::lock_guard<std::mutex> lock(m);
            if (next >= regions) return;
            r = next++;
          }
          solve_region(r);
        }
      });
    }
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t r = 0; r < regions; ++r) solve_region(r);
  }

  // Merge region placements into one global placement.
  DdpOutcome out;
  out.placement.association.tag.assign(scenario.ues.size(),
                                       Association::kUnserved);
  bool regions_feasible = true;
  for (std::size_t r = 0; r < regions; ++r) {
    const auto& ro = outcomes[r];
    int offset = out.placement.k();
    for (DbsSite site : ro.dbs) {
      site.id += offset;
      out.placement.dbs.push_back(site);
    }
    for (std::size_t m = 0; m < ro.tags.size(); ++m) {
      int tag = ro.tags[m];
      if (tag >= 1) tag += offset;
      out.placement.association
          .tag[static_cast<std::size_t>(inputs[r].ue_ids[m])] = tag;
    }
    for (int k : ro.k_searched) out.k_searched.push_back(k);
    if (!ro.feasible) {
      regions_feasible = false;
      if (!out.note.empty()) out.note += "; ";
      std::ostringstream os;
      os << "region " << r << ": "
         << (ro.note.empty() ? "satisfaction target unmet" : ro.note);
      out.note += os.str();
    }
  }

  // Cross-boundary interference invalidates the per-region SINR of UEs
  // near the partition lines; refresh everything against the merged
  // placement, then give failing UEs one global re-association pass.
  {
    Placement& p = out.placement;
    LinkTable table = build_link_table(p, scenario, config);
    p.sinr_db.resize(scenario.ues.size());
    for (std::size_t i = 0; i < scenario.ues.size(); ++i)
      p.sinr_db[i] = table.ue[i].link.sinr_db;
    ReassociateResult rr = reassociate(p, scenario, config);
    p.association = rr.association;

    LinkTable final_table = build_link_table(p, scenario, config);
    for (std::size_t i = 0; i < scenario.ues.size(); ++i)
      p.sinr_db[i] = final_table.ue[i].link.sinr_db;
    out.satisfied_count = final_table.satisfied_count;
    out.n_g = final_table.n_g;
  }

  double n = static_cast<double>(scenario.ues.size());
  out.satisfaction_rate =
      n > 0 ? static_cast<double>(out.satisfied_count) / n : 0.0;
  bool target_met = static_cast<double>(out.satisfied_count) + 1e-9 >=
                    config.tau * n;
  bool k_cap_ok = true;
  if (!options.k_override && !config.ignore_backhaul_k_cap &&
      out.placement.k() > k_upper_bound(config)) {
    k_cap_ok = false;
    if (!out.note.empty()) out.note += "; ";
    out.note += "merged k exceeds the backhaul bound";
  }
  out.feasible = regions_feasible && target_met && k_cap_ok;
  if (!out.feasible && out.note.empty())
    out.note = "satisfaction target unmet after merge";

  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

ComplexityReduction expected_complexity_reduction(const Area& area,
                                                  double r_g) {
  ComplexityReduction res;
  double ax = area.width(), ay = area.height();
  if (!(ax > 2.0 * r_g) || !(ay > 2.0 * r_g)) return res;
  res.valid = true;
  res.reduction =
      1.0 - (ax + 14.0 * r_g) * (ay + 14.0 * r_g) / (64.0 * ax * ay);
  return res;
}

PartitionProbabilities partition_probabilities(const Area& area, double r_g) {
  double ax = area.width(), ay = area.height();
  PartitionProbabilities p;
  p.p1 = 4.0 * r_g * r_g / (ax * ay);
  p.p2 = 2.0 * r_g * (ax + ay - 4.0 * r_g) / (ax * ay);
  p.p4 = (ax - 2.0 * r_g) * (ay - 2.0 * r_g) / (ax * ay);
  return p;
}

}  // namespace droneplace
