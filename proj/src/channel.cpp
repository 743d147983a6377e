#include "droneplace/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "droneplace/rng.hpp"
#include "droneplace/units.hpp"

namespace droneplace {

namespace {

constexpr double kMinDistanceM = 1.0;  // floor against log/pow singularities

double noise_mw(double bandwidth_hz, const SystemConfig& c) {
  return mw_from_dbm(c.n0_dbm_hz) * bandwidth_hz;
}

double gbs_received_mw(double r_m, const SystemConfig& c, double fading = 1.0) {
  double r = std::max(r_m, kMinDistanceM);
  return mw_from_dbm(c.p_gbs_dbm) * fading * std::pow(r, -c.alpha);
}

double shannon_rate(double bandwidth_hz, double sinr_linear) {
  return bandwidth_hz * log2p1(sinr_linear);
}

}  // namespace

double backhaul_path_loss_db(double distance_m) {
  if (!(distance_m > 0.0))
    throw std::domain_error("backhaul distance must be positive");
  return 61.4 + 20.0 * std::log10(distance_m);
}

LinkBudget backhaul_link(const DbsSite& dbs, const Point& gbs, int k,
                         const SystemConfig& config) {
  if (k < 1) throw std::domain_error("backhaul_link: k must be >= 1");
  // GBS antenna height treated as zero; the feeder span is the 3D distance.
  double horizontal = horizontal_distance(dbs.position(), gbs);
  double d = std::max(std::hypot(horizontal, dbs.altitude_m), kMinDistanceM);

  LinkBudget lb;
  lb.path_loss_db = backhaul_path_loss_db(d);
  lb.bandwidth_hz = config.b_bk_hz / static_cast<double>(k);
  double rx_mw =
      mw_from_dbm(config.p_gbs_bk_dbm) * linear_from_db(-lb.path_loss_db);
  double snr = rx_mw / noise_mw(lb.bandwidth_hz, config);
  lb.sinr_db = db_from_linear(snr);
  lb.rate_bps = shannon_rate(lb.bandwidth_hz, snr);
  lb.meets_threshold = lb.sinr_db >= config.gamma_th_bk_db - 1e-9;
  return lb;
}

double los_probability(double h_m, double r_m, const Environment& env) {
  if (!(h_m > 0.0)) throw std::domain_error("altitude must be positive");
  if (r_m < 0.0) throw std::domain_error("range must be non-negative");
  double theta_deg = deg_from_rad(std::atan2(h_m, r_m));
  return 1.0 / (1.0 + env.a * std::exp(-env.b * (theta_deg - env.a)));
}

double atg_mean_path_loss_db(double h_m, double r_m, const Environment& env,
                             double fc_hz, const SystemConfig& config) {
  if (!(fc_hz > 0.0)) throw std::domain_error("carrier must be positive");
  double p_los = los_probability(h_m, r_m, env);
  double d = std::max(std::hypot(r_m, h_m), kMinDistanceM);
  double fspl =
      20.0 * std::log10(4.0 * kPi * fc_hz * d / config.speed_of_light);
  return fspl + p_los * env.eta_los + (1.0 - p_los) * env.eta_nlos;
}

double gbs_coverage_radius(const SystemConfig& config) {
  double denom = linear_from_db(config.gamma_th_db) * config.b_hz *
                 mw_from_dbm(config.n0_dbm_hz);
  return std::pow(mw_from_dbm(config.p_gbs_dbm) / denom, 1.0 / config.alpha);
}

double required_transmit_power_mw(double path_loss_db, double interference_mw,
                                  double bandwidth_hz, double rate_bps,
                                  const SystemConfig& config) {
  double denom_mw = interference_mw + noise_mw(bandwidth_hz, config);
  return linear_from_db(path_loss_db) * denom_mw *
         (std::exp2(rate_bps / bandwidth_hz) - 1.0);
}

namespace {

struct TableContext {
  const Placement& placement;
  const Scenario& scenario;
  const SystemConfig& config;
  std::vector<int> n_j;
  int n_g = 0;
};

double atg_loss_to_ue(const DbsSite& d, const Point& ue,
                      const SystemConfig& c) {
  double r = horizontal_distance(d.position(), ue);
  return atg_mean_path_loss_db(d.altitude_m, r, c.env, c.fc_hz, c);
}

// Co-channel interference from every DBS whose disk covers the UE, skipping
// `exclude_id` (the serving DBS). `per_ue_share` selects between the per-UE
// transmit power (fronthaul SINR, Eq-(7) form) and the total DBS power
// (terrestrial SINR, Eq-(12) form).
double dbs_interference_mw(const TableContext& ctx, const Point& ue,
                           int exclude_id, bool per_ue_share) {
  const SystemConfig& c = ctx.config;
  double p_dbs = mw_from_dbm(c.p_dbs_dbm);
  double total = 0.0;
  for (const auto& d : ctx.placement.dbs) {
    if (d.id == exclude_id) continue;
    int n = ctx.n_j[static_cast<std::size_t>(d.id)];
    if (n <= 0) continue;  // idle DBS transmits nothing
    double r = horizontal_distance(d.position(), ue);
    if (r > d.radius_m + kDiskEps) continue;
    double loss = atg_mean_path_loss_db(d.altitude_m, r, c.env, c.fc_hz, c);
    double tx = per_ue_share ? p_dbs / n : p_dbs;
    total += tx * linear_from_db(-loss);
  }
  return total;
}

UeLinkRow dbs_row(const TableContext& ctx, int ue_index, int dbs_id) {
  const SystemConfig& c = ctx.config;
  const Point& ue = ctx.scenario.ues[static_cast<std::size_t>(ue_index)];
  const DbsSite& site = ctx.placement.dbs[static_cast<std::size_t>(dbs_id - 1)];
  int n = std::max(1, ctx.n_j[static_cast<std::size_t>(dbs_id)]);

  UeLinkRow row;
  row.tag = dbs_id;
  double r = horizontal_distance(site.position(), ue);
  row.in_disk = r <= site.radius_m + kDiskEps;

  LinkBudget& lb = row.link;
  lb.path_loss_db = atg_loss_to_ue(site, ue, c);
  lb.bandwidth_hz = c.b_hz / n;
  lb.interference_from_gbs_mw =
      gbs_received_mw(horizontal_distance(ctx.scenario.gbs, ue), c);
  lb.interference_from_dbs_mw = dbs_interference_mw(ctx, ue, dbs_id, true);

  double signal = (mw_from_dbm(c.p_dbs_dbm) / n) * linear_from_db(-lb.path_loss_db);
  double denom = lb.interference_from_gbs_mw + lb.interference_from_dbs_mw +
                 noise_mw(lb.bandwidth_hz, c);
  double sinr = signal / denom;
  lb.sinr_db = db_from_linear(sinr);
  lb.rate_bps = shannon_rate(lb.bandwidth_hz, sinr);
  lb.meets_threshold = lb.sinr_db >= c.gamma_th_db - 1e-9;

  row.sinr_ok = lb.meets_threshold;
  row.loss_ok = lb.path_loss_db <= c.l_allowable_db + 1e-12;
  return row;
}

UeLinkRow gbs_row(const TableContext& ctx, int ue_index, double fading_h) {
  const SystemConfig& c = ctx.config;
  const Point& ue = ctx.scenario.ues[static_cast<std::size_t>(ue_index)];
  int n = std::max(1, ctx.n_g);

  UeLinkRow row;
  row.tag = Association::kGbs;
  row.in_disk = true;

  double r = std::max(horizontal_distance(ctx.scenario.gbs, ue), kMinDistanceM);
  LinkBudget& lb = row.link;
  lb.path_loss_db = 10.0 * c.alpha * std::log10(r);
  lb.bandwidth_hz = c.b_hz / n;
  lb.interference_from_dbs_mw = dbs_interference_mw(ctx, ue, -1, false);
  double signal = gbs_received_mw(r, c, fading_h);
  double denom = lb.interference_from_dbs_mw + noise_mw(lb.bandwidth_hz, c);
  double sinr = signal / denom;
  lb.sinr_db = db_from_linear(sinr);
  lb.rate_bps = shannon_rate(lb.bandwidth_hz, sinr);
  lb.meets_threshold = lb.sinr_db >= c.gamma_th_db - 1e-9;

  row.sinr_ok = lb.meets_threshold;
  row.loss_ok = true;  // l_allowable applies to GBS-DBS and DBS-UE links only
  return row;
}

TableContext make_context(const Placement& p, const Scenario& s,
                          const SystemConfig& c) {
  TableContext ctx{p, s, c, p.association.dbs_counts(p.k()),
                   p.association.count_gbs()};
  return ctx;
}

}  // namespace

LinkBudget dbs_ue_link(int ue_index, int serving_dbs_id,
                       const Placement& placement, const Scenario& scenario,
                       const SystemConfig& config) {
  if (serving_dbs_id < 1 || serving_dbs_id > placement.k())
    throw std::domain_error("dbs_ue_link: no such DBS");
  TableContext ctx = make_context(placement, scenario, config);
  UeLinkRow row = dbs_row(ctx, ue_index, serving_dbs_id);
  if (!row.in_disk)
    throw std::domain_error("dbs_ue_link: UE outside serving coverage");
  return row.link;
}

LinkBudget gbs_ue_link(int ue_index, const Placement& placement,
                       const Scenario& scenario, const SystemConfig& config,
                       FadingMode fading) {
  TableContext ctx = make_context(placement, scenario, config);
  double h = 1.0;
  if (fading.kind == FadingMode::kSampled) {
    Rng rng(derive_seed(fading.seed, static_cast<std::uint64_t>(ue_index)));
    h = rng.exponential(1.0);
  }
  return gbs_row(ctx, ue_index, h).link;
}

LinkTable build_link_table(const Placement& placement,
                           const Scenario& scenario,
                           const SystemConfig& config, FadingMode fading) {
  TableContext ctx = make_context(placement, scenario, config);
  int k = placement.k();

  LinkTable table;
  table.n_j = ctx.n_j;
  table.n_g = ctx.n_g;
  table.backhaul_capacity_bps.resize(static_cast<std::size_t>(k));
  table.backhaul_ok.resize(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    LinkBudget bk = backhaul_link(placement.dbs[static_cast<std::size_t>(j)],
                                  scenario.gbs, std::max(1, k), config);
    table.backhaul_capacity_bps[static_cast<std::size_t>(j)] = bk.rate_bps;
    table.backhaul_ok[static_cast<std::size_t>(j)] = bk.meets_threshold;
  }

  double gbs_share =
      config.c_hat_gbs_bps / static_cast<double>(std::max(1, ctx.n_g));

  std::size_t n_ues = scenario.ues.size();
  table.ue.resize(n_ues);
  for (std::size_t i = 0; i < n_ues; ++i) {
    int tag = i < placement.association.tag.size()
                  ? placement.association.tag[i]
                  : Association::kUnserved;
    UeLinkRow& row = table.ue[i];
    if (tag == Association::kUnserved) {
      row = UeLinkRow{};
    } else if (tag == Association::kGbs) {
      double h = 1.0;
      if (fading.kind == FadingMode::kSampled) {
        Rng rng(derive_seed(fading.seed, static_cast<std::uint64_t>(i)));
        h = rng.exponential(1.0);
      }
      row = gbs_row(ctx, static_cast<int>(i), h);
      row.served = row.sinr_ok;
      row.allocated_rate_bps = std::min(row.link.rate_bps, gbs_share);
    } else if (tag >= 1 && tag <= k) {
      row = dbs_row(ctx, static_cast<int>(i), tag);
      row.served = row.in_disk && row.sinr_ok;
      int nj = std::max(1, ctx.n_j[static_cast<std::size_t>(tag)]);
      double share =
          table.backhaul_capacity_bps[static_cast<std::size_t>(tag - 1)] / nj;
      row.allocated_rate_bps = std::min(row.link.rate_bps, share);
    } else {
      row = UeLinkRow{};
      row.tag = tag;
      row.invalid_tag = true;
    }

    if (row.served) {
      row.rate_ok = row.allocated_rate_bps >= config.c_min_bps * (1.0 - 1e-12);
      row.satisfied = row.rate_ok && row.loss_ok;
      table.served_count += 1;
      table.satisfied_count += row.satisfied ? 1 : 0;
      table.sum_rate_bps += row.allocated_rate_bps;
    }
  }
  return table;
}

DbsPowerReport dbs_power_report(const Placement& placement,
                                const Scenario& scenario,
                                const SystemConfig& config) {
  LinkTable table = build_link_table(placement, scenario, config);
  int k = placement.k();
  DbsPowerReport rep;
  rep.power_mw.assign(static_cast<std::size_t>(k), 0.0);
  rep.rate_bps.assign(static_cast<std::size_t>(k), 0.0);
  for (const auto& row : table.ue) {
    if (!row.served || row.tag < 1 || row.tag > k) continue;
    std::size_t j = static_cast<std::size_t>(row.tag - 1);
    double interference = row.link.interference_from_gbs_mw +
                          row.link.interference_from_dbs_mw;
    rep.power_mw[j] += required_transmit_power_mw(
        row.link.path_loss_db, interference, row.link.bandwidth_hz,
        row.allocated_rate_bps, config);
    rep.rate_bps[j] += row.allocated_rate_bps;
  }
  return rep;
}

}  // namespace droneplace
