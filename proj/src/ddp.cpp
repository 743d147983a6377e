#include "droneplace/ddp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "droneplace/channel.hpp"
#include "droneplace/clustering.hpp"
#include "droneplace/geometry.hpp"
#include "droneplace/rng.hpp"
#include "droneplace/units.hpp"

namespace droneplace {

namespace {

constexpr int kInnerLoopCap = 100;
constexpr double kStableMoveM = 1e-6;

double full_band_gbs_sinr(double r_m, const SystemConfig& c) {
  double r = std::max(r_m, 1.0);
  double signal = mw_from_dbm(c.p_gbs_dbm) * std::pow(r, -c.alpha);
  double noise = mw_from_dbm(c.n0_dbm_hz) * c.b_hz;
  return signal / noise;
}

}  // namespace

Association initial_gbs_association(const Scenario& scenario,
                                    const SystemConfig& config) {
  const std::size_t n = scenario.ues.size();
  Association assoc;
  assoc.tag.assign(n, Association::kUnserved);

  double gamma = linear_from_db(config.gamma_th_db);
  std::vector<std::pair<double, int>> qualifying;  // (sinr, ue index)
  for (std::size_t i = 0; i < n; ++i) {
    double sinr =
        full_band_gbs_sinr(horizontal_distance(scenario.gbs, scenario.ues[i]),
                           config);
    if (sinr >= gamma * (1.0 - 1e-12))
      qualifying.emplace_back(sinr, static_cast<int>(i));
  }

  long n_g_max = static_cast<long>(
      std::floor(config.c_hat_gbs_bps / config.c_min_bps + 1e-9));
  long n_g = std::min<long>(static_cast<long>(qualifying.size()),
                            std::max<long>(0, n_g_max));

  // Highest SINR wins; equal SINR resolves to the lower UE index.
  std::sort(qualifying.begin(), qualifying.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  for (long i = 0; i < n_g; ++i)
    assoc.tag[static_cast<std::size_t>(qualifying[static_cast<std::size_t>(i)]
                                           .second)] = Association::kGbs;
  return assoc;
}

int k_lower_bound(int n_unserved, const SystemConfig& config) {
  if (n_unserved <= 0) return 0;
  double demand = config.tau * n_unserved * config.c_min_bps;
  double per_dbs = config.b_hz * log2p1(linear_from_db(config.gamma_th_db));
  return static_cast<int>(std::max(0.0, std::ceil(demand / per_dbs - 1e-9)));
}

int k_upper_bound(const SystemConfig& config) {
  double backhaul =
      config.b_bk_hz * log2p1(linear_from_db(config.gamma_th_bk_db));
  double per_dbs = config.b_hz * log2p1(linear_from_db(config.gamma_th_db));
  int formula = static_cast<int>(std::floor(backhaul / per_dbs + 1e-9));
  return std::min(formula, config.k_max_cap);
}

std::vector<DbsSite> refine_placement(
    const std::vector<std::vector<int>>& clusters, const Scenario& scenario,
    const SystemConfig& config, std::uint64_t seed) {
  RadiusBounds bounds = radius_bounds(config.env, config);
  std::vector<DbsSite> sites;
  sites.reserve(clusters.size());
  for (std::size_t j = 0; j < clusters.size(); ++j) {
    if (clusters[j].empty())
      throw std::logic_error("refine_placement: empty cluster");
    std::vector<Point> members;
    members.reserve(clusters[j].size());
    for (int id : clusters[j])
      members.push_back(scenario.ues[static_cast<std::size_t>(id)]);
    Circle mec = minimum_enclosing_circle(members, derive_seed(seed, j));

    DbsSite site;
    site.id = static_cast<int>(j) + 1;
    site.x = mec.center.x;
    site.y = mec.center.y;
    site.radius_m = std::clamp(mec.radius, bounds.r_min, bounds.r_max);
    site.altitude_m =
        altitude_for_radius(site.radius_m, config.env, config).altitude_m;
    sites.push_back(site);
  }
  return sites;
}

ReassociateResult reassociate(const Placement& placement,
                              const Scenario& scenario,
                              const SystemConfig& config) {
  const int k = placement.k();
  LinkTable table = build_link_table(placement, scenario, config);

  ReassociateResult result;
  result.association = placement.association;
  std::vector<int>& tags = result.association.tag;

  std::vector<int> counts = table.n_j;  // updated as UEs move in the sweep
  std::vector<double> budget_used(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < table.ue.size(); ++i) {
    const UeLinkRow& row = table.ue[i];
    if (row.served && row.tag >= 1)
      budget_used[static_cast<std::size_t>(row.tag - 1)] +=
          row.allocated_rate_bps;
  }

  const double p_dbs = mw_from_dbm(config.p_dbs_dbm);
  const double n0 = mw_from_dbm(config.n0_dbm_hz);
  const double gamma = linear_from_db(config.gamma_th_db);
  const Point gbs = scenario.gbs;

  for (std::size_t i = 0; i < scenario.ues.size(); ++i) {
    const UeLinkRow& row = table.ue[i];
    bool failing = row.tag == Association::kUnserved || row.invalid_tag ||
                   (row.tag >= 0 && (!row.in_disk || !row.sinr_ok ||
                                     !row.rate_ok));
    if (!failing) continue;

    const Point& ue = scenario.ues[i];
    int old_tag = tags[i];

    // Covering candidates by ascending horizontal distance, then id.
    std::vector<std::pair<double, int>> candidates;
    for (const auto& d : placement.dbs) {
      if (d.id == old_tag) continue;
      double r = horizontal_distance(d.position(), ue);
      if (r <= d.radius_m + kDiskEps) candidates.emplace_back(r, d.id);
    }
    std::sort(candidates.begin(), candidates.end());

    // Counts as they would be after the move: the UE has left its cell.
    std::vector<int> adj = counts;
    if (old_tag >= 1) adj[static_cast<std::size_t>(old_tag)] -= 1;

    int accepted = -1;
    for (const auto& [r_cand, id] : candidates) {
      std::size_t jc = static_cast<std::size_t>(id);
      int n_after = adj[jc] + 1;
      const DbsSite& cand = placement.dbs[jc - 1];

      double loss = atg_mean_path_loss_db(
          cand.altitude_m, r_cand, config.env, config.fc_hz, config);
      double signal = (p_dbs / n_after) * linear_from_db(-loss);
      double interference =
          mw_from_dbm(config.p_gbs_dbm) *
          std::pow(std::max(horizontal_distance(gbs, ue), 1.0), -config.alpha);
      for (const auto& other : placement.dbs) {
        if (other.id == id) continue;
        int n_other = adj[static_cast<std::size_t>(other.id)];
        if (n_other <= 0) continue;
        double r_other = horizontal_distance(other.position(), ue);
        if (r_other > other.radius_m + kDiskEps) continue;
        double l_other = atg_mean_path_loss_db(
            other.altitude_m, r_other, config.env, config.fc_hz, config);
        interference += (p_dbs / n_other) * linear_from_db(-l_other);
      }
      double noise = (config.b_hz / n_after) * n0;
      double sinr = signal / (interference + noise);
      if (sinr < gamma * (1.0 - 1e-12)) continue;

      double capacity = table.backhaul_capacity_bps[jc - 1];
      if (budget_used[jc - 1] + config.c_min_bps > capacity * (1.0 + 1e-12))
        continue;

      accepted = id;
      break;
    }

    // Release the old cell's share of this UE either way.
    if (old_tag >= 1) {
      counts[static_cast<std::size_t>(old_tag)] -= 1;
      if (row.served)
        budget_used[static_cast<std::size_t>(old_tag - 1)] -=
            row.allocated_rate_bps;
    }
    if (accepted >= 1) {
      tags[i] = accepted;
      counts[static_cast<std::size_t>(accepted)] += 1;
      budget_used[static_cast<std::size_t>(accepted - 1)] += config.c_min_bps;
      result.changed = true;
    } else {
      tags[i] = Association::kUnserved;
    }
  }
  return result;
}

namespace detail {

namespace {

struct Iterate {
  std::vector<DbsSite> sites;
  std::vector<int> tags;  // over the global UE indexing
  int satisfied = 0;
};

double max_site_move(const std::vector<DbsSite>& a,
                     const std::vector<DbsSite>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    m = std::max(m, std::abs(a[j].x - b[j].x));
    m = std::max(m, std::abs(a[j].y - b[j].y));
    m = std::max(m, std::abs(a[j].radius_m - b[j].radius_m));
  }
  return m;
}

// Baseline comparator sites: cluster centroid, farthest-member radius.
std::vector<DbsSite> baseline_sites(const std::vector<std::vector<int>>& clusters,
                                    const Scenario& scenario,
                                    const SystemConfig& config) {
  RadiusBounds bounds = radius_bounds(config.env, config);
  std::vector<DbsSite> sites;
  for (std::size_t j = 0; j < clusters.size(); ++j) {
    Point c{0.0, 0.0};
    for (int id : clusters[j]) {
      c.x += scenario.ues[static_cast<std::size_t>(id)].x;
      c.y += scenario.ues[static_cast<std::size_t>(id)].y;
    }
    c.x /= static_cast<double>(clusters[j].size());
    c.y /= static_cast<double>(clusters[j].size());
    double radius = 0.0;
    for (int id : clusters[j])
      radius = std::max(radius, horizontal_distance(
                                    c, scenario.ues[static_cast<std::size_t>(id)]));
    DbsSite site;
    site.id = static_cast<int>(j) + 1;
    site.x = c.x;
    site.y = c.y;
    site.radius_m = std::clamp(radius, bounds.r_min, bounds.r_max);
    site.altitude_m =
        altitude_for_radius(site.radius_m, config.env, config).altitude_m;
    sites.push_back(site);
  }
  return sites;
}

}  // namespace

RegionOutcome run_region(const Scenario& global, const RegionInput& region,
                         const SystemConfig& config, std::uint64_t seed,
                         const DdpOptions& options) {
  // Local scenario over the region's UEs; the GBS stays at its global
  // position so its interference reaches every region.
  Scenario sub;
  sub.area = region.area;
  sub.gbs = global.gbs;
  sub.ues.reserve(region.ue_ids.size());
  for (int id : region.ue_ids)
    sub.ues.push_back(global.ues[static_cast<std::size_t>(id)]);
  const int n = static_cast<int>(sub.ues.size());

  RegionOutcome out;
  out.tags.assign(n, Association::kUnserved);
  if (n == 0) {
    out.feasible = true;
    return out;
  }

  if (region.gbs_in_region)
    out.tags = initial_gbs_association(sub, config).tag;

  std::vector<int> unserved;
  for (int i = 0; i < n; ++i)
    if (out.tags[static_cast<std::size_t>(i)] == Association::kUnserved)
      unserved.push_back(i);
  const int n_unserved = static_cast<int>(unserved.size());

  int k_min, k_max;
  if (options.k_override) {
    k_min = k_max = std::min(*options.k_override, n_unserved);
  } else {
    k_min = k_lower_bound(n_unserved, config);
    int cap = config.ignore_backhaul_k_cap
                  ? config.k_max_cap
                  : std::min(k_upper_bound(config), config.k_max_cap);
    k_max = std::min(cap, n_unserved);
    if (k_min > k_max) {
      std::ostringstream os;
      os << "infeasible-by-bounds: k_min=" << k_min << " k_max=" << k_max;
      out.note = os.str();
      out.feasible = false;
      return out;
    }
  }

  const double target = config.tau * n;
  std::vector<Point> unserved_pts;
  unserved_pts.reserve(unserved.size());
  for (int i : unserved) unserved_pts.push_back(sub.ues[static_cast<std::size_t>(i)]);

  std::vector<int> base_tags = out.tags;
  Iterate last;

  for (int k = k_min; k <= k_max; ++k) {
    out.k_searched.push_back(k);
    std::vector<int> tags = base_tags;

    Iterate best;
    best.satisfied = -1;
    bool converged = false;

    if (k == 0) {
      Placement p;
      p.association.tag = tags;
      LinkTable table = build_link_table(p, sub, config);
      last = {{}, tags, table.satisfied_count};
    } else {
      Clustering clust = balanced_kmeans(unserved_pts, k,
                                         derive_seed(seed, 1000 + k));
      for (std::size_t i = 0; i < unserved.size(); ++i)
        tags[static_cast<std::size_t>(unserved[i])] = clust.label[i] + 1;

      if (options.baseline_only) {
        std::vector<std::vector<int>> clusters(static_cast<std::size_t>(k));
        for (int i = 0; i < n; ++i)
          if (tags[static_cast<std::size_t>(i)] >= 1)
            clusters[static_cast<std::size_t>(tags[static_cast<std::size_t>(i)] - 1)]
                .push_back(i);
        Placement p;
        p.dbs = baseline_sites(clusters, sub, config);
        p.association.tag = tags;
        LinkTable table = build_link_table(p, sub, config);
        last = {p.dbs, tags, table.satisfied_count};
      } else {
        std::vector<DbsSite> prev_sites;
        for (int iter = 0; iter < kInnerLoopCap; ++iter) {
          // Clusters re-derive from the association every pass.
          std::vector<std::vector<int>> clusters(static_cast<std::size_t>(k));
          for (int i = 0; i < n; ++i)
            if (tags[static_cast<std::size_t>(i)] >= 1)
              clusters[static_cast<std::size_t>(
                           tags[static_cast<std::size_t>(i)] - 1)]
                  .push_back(i);

          std::vector<DbsSite> sites(prev_sites);
          std::vector<std::vector<int>> nonempty;
          std::vector<std::size_t> nonempty_pos;
          for (std::size_t j = 0; j < clusters.size(); ++j)
            if (!clusters[j].empty()) {
              nonempty.push_back(clusters[j]);
              nonempty_pos.push_back(j);
            }
          std::vector<DbsSite> refined = refine_placement(
              nonempty, sub, config,
              derive_seed(seed, 7000 + static_cast<std::uint64_t>(k) * 128 +
                                    static_cast<std::uint64_t>(iter)));
          if (sites.size() != clusters.size())
            sites.resize(clusters.size());
          for (std::size_t m = 0; m < nonempty_pos.size(); ++m) {
            refined[m].id = static_cast<int>(nonempty_pos[m]) + 1;
            sites[nonempty_pos[m]] = refined[m];
          }
          for (std::size_t j = 0; j < sites.size(); ++j)
            sites[j].id = static_cast<int>(j) + 1;

          double moved = max_site_move(prev_sites, sites);
          prev_sites = sites;

          Placement p;
          p.dbs = sites;
          p.association.tag = tags;
          LinkTable table = build_link_table(p, sub, config);
          p.sinr_db.resize(static_cast<std::size_t>(n));
          for (int i = 0; i < n; ++i)
            p.sinr_db[static_cast<std::size_t>(i)] =
                table.ue[static_cast<std::size_t>(i)].link.sinr_db;

          if (table.satisfied_count > best.satisfied)
            best = {sites, tags, table.satisfied_count};

          ReassociateResult rr = reassociate(p, sub, config);
          if (!rr.changed && moved <= kStableMoveM) {
            last = {sites, tags, table.satisfied_count};
            converged = true;
            break;
          }
          tags = rr.association.tag;
        }
        if (!converged) last = best;  // iteration cap: keep the best seen
      }
    }

    if (static_cast<double>(last.satisfied) + 1e-9 >= target) {
      out.dbs = last.sites;
      out.tags = last.tags;
      out.satisfied_count = last.satisfied;
      out.feasible = true;
      return out;
    }
  }

  out.dbs = last.sites;
  out.tags = last.tags;
  out.satisfied_count = last.satisfied;
  out.feasible = false;
  out.note = "satisfaction target unmet with k up to " +
             std::to_string(k_max);
  return out;
}

}  // namespace detail

DdpOutcome run_ddp(const Scenario& scenario, const SystemConfig& config,
                   std::uint64_t seed, const DdpOptions& options) {
  auto t0 = std::chrono::steady_clock::now();

  detail::RegionInput region;
  region.area = scenario.area;
  region.gbs_in_region = true;
  region.ue_ids.resize(scenario.ues.size());
  std::iota(region.ue_ids.begin(), region.ue_ids.end(), 0);

  detail::RegionOutcome ro =
      detail::run_region(scenario, region, config, seed, options);

  DdpOutcome out;
  out.placement.dbs = ro.dbs;
  out.placement.association.tag = ro.tags;
  if (out.placement.association.tag.empty())
    out.placement.association.tag.assign(scenario.ues.size(),
                                         Association::kUnserved);
  out.k_searched = ro.k_searched;
  out.feasible = ro.feasible;
  out.note = ro.note;

  LinkTable table = build_link_table(out.placement, scenario, config);
  out.placement.sinr_db.resize(scenario.ues.size());
  for (std::size_t i = 0; i < scenario.ues.size(); ++i)
    out.placement.sinr_db[i] = table.ue[i].link.sinr_db;
  out.satisfied_count = table.satisfied_count;
  out.satisfaction_rate =
      scenario.ues.empty()
          ? 0.0
          : static_cast<double>(out.satisfied_count) /
                static_cast<double>(scenario.ues.size());
  out.n_g = table.n_g;

  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace droneplace
