#include "droneplace/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "droneplace/geometry.hpp"

namespace droneplace {

namespace {

void check_placement_shape(const Placement& p, const Scenario& s,
                           const SystemConfig& c,
                           std::vector<Violation>& out) {
  if (p.k() > c.k_max_cap)
    out.push_back({"dbs", "more DBSs deployed than the fleet size K"});
  for (const auto& d : p.dbs) {
    if (d.altitude_m < c.h_min_m - 1e-9 || d.altitude_m > c.h_max_m + 1e-9) {
      std::ostringstream os;
      os << "DBS " << d.id << " altitude " << d.altitude_m
         << " outside [h_min, h_max]";
      out.push_back({"dbs.altitude_m", os.str()});
    }
  }
  if (p.association.tag.size() != s.ues.size())
    out.push_back({"association", "association length differs from UE count"});
}

}  // namespace

EvaluationReport evaluate(const Placement& placement, const Scenario& scenario,
                          const SystemConfig& config, FadingMode fading) {
  LinkTable table = build_link_table(placement, scenario, config, fading);

  EvaluationReport rep;
  rep.n_ues = static_cast<int>(scenario.ues.size());
  rep.n_g = table.n_g;
  rep.n_j.assign(placement.dbs.size(), 0);
  for (int j = 1; j <= placement.k(); ++j)
    rep.n_j[static_cast<std::size_t>(j - 1)] =
        table.n_j[static_cast<std::size_t>(j)];
  rep.sum_rate_bps = table.sum_rate_bps;
  rep.satisfied_count = table.satisfied_count;
  rep.sinr_satisfied_count = table.served_count;
  rep.satisfaction_rate =
      rep.n_ues > 0 ? static_cast<double>(rep.satisfied_count) / rep.n_ues : 0.0;
  rep.per_ue = table.ue;

  check_placement_shape(placement, scenario, config, rep.violations);

  for (std::size_t i = 0; i < table.ue.size(); ++i) {
    const UeLinkRow& row = table.ue[i];
    auto note = [&](const std::string& field, const std::string& what) {
      std::ostringstream os;
      os << "UE " << i << ": " << what;
      rep.violations.push_back({field, os.str()});
    };
    if (row.invalid_tag) note("association", "tag references a missing DBS");
    if (row.tag >= 1 && !row.invalid_tag && !row.in_disk)
      note("association", "outside serving DBS coverage");
    if (row.tag >= 0 && !row.invalid_tag && row.in_disk && !row.sinr_ok)
      note("sinr", "below gamma_th on its serving cell");
    if (row.served && !row.rate_ok)
      note("rate", "allocated rate below c_min");
    if (row.served && !row.loss_ok)
      note("path_loss", "link loss above l_allowable_db");
  }
  for (std::size_t j = 0; j < table.backhaul_ok.size(); ++j) {
    if (!table.backhaul_ok[j]) {
      std::ostringstream os;
      os << "DBS " << j + 1 << ": backhaul SNR below gamma_th_bk";
      rep.violations.push_back({"backhaul", os.str()});
    }
  }

  DbsPowerReport power = dbs_power_report(placement, scenario, config);
  rep.dbs_power_mw = power.power_mw;
  rep.dbs_rate_bps = power.rate_bps;

  for (std::size_t a = 0; a < placement.dbs.size(); ++a) {
    const auto& da = placement.dbs[a];
    Circle ca{{da.x, da.y}, da.radius_m};
    for (std::size_t b = a + 1; b < placement.dbs.size(); ++b) {
      const auto& db = placement.dbs[b];
      Circle cb{{db.x, db.y}, db.radius_m};
      rep.total_overlap_area_m2 +=
          circle_overlap_area_clipped(ca, cb, scenario.area);
    }
  }
  return rep;
}

EmpiricalDistribution empirical_distribution(const std::vector<double>& values,
                                             int n_bins) {
  if (values.empty())
    throw std::domain_error("empirical_distribution: empty sample");
  if (n_bins < 1)
    throw std::domain_error("empirical_distribution: n_bins must be >= 1");

  EmpiricalDistribution d;
  d.values = values;
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (hi <= lo) hi = lo + 1.0;  // constant sample: one occupied bin

  d.bin_edges.resize(static_cast<std::size_t>(n_bins) + 1);
  for (int b = 0; b <= n_bins; ++b)
    d.bin_edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / n_bins;

  d.pdf.assign(static_cast<std::size_t>(n_bins), 0.0);
  double mass = 1.0 / static_cast<double>(values.size());
  for (double v : values) {
    int b = static_cast<int>((v - lo) / (hi - lo) * n_bins);
    b = std::clamp(b, 0, n_bins - 1);
    d.pdf[static_cast<std::size_t>(b)] += mass;
  }
  d.cdf.resize(d.pdf.size());
  double acc = 0.0;
  for (std::size_t b = 0; b < d.pdf.size(); ++b) {
    acc += d.pdf[b];
    d.cdf[b] = acc;
  }
  if (!d.cdf.empty()) d.cdf.back() = 1.0;
  return d;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string report_csv_header() {
  return "n_ues,k,n_g,satisfied_count,sinr_satisfied_count,satisfaction_rate,"
         "sum_rate_bps,total_overlap_area_m2,total_dbs_power_mw,violations";
}

std::string report_csv_row(const EvaluationReport& r) {
  double power = 0.0;
  for (double p : r.dbs_power_mw) power += p;
  std::ostringstream os;
  os << r.n_ues << ',' << r.n_j.size() << ',' << r.n_g << ','
     << r.satisfied_count << ',' << r.sinr_satisfied_count << ','
     << format_double(r.satisfaction_rate) << ','
     << format_double(r.sum_rate_bps) << ','
     << format_double(r.total_overlap_area_m2) << ',' << format_double(power)
     << ',' << r.violations.size();
  return os.str();
}

nlohmann::json report_to_json(const EvaluationReport& r) {
  nlohmann::json j;
  j["n_ues"] = r.n_ues;
  j["sum_rate_bps"] = r.sum_rate_bps;
  j["satisfied_count"] = r.satisfied_count;
  j["satisfaction_rate"] = r.satisfaction_rate;
  j["sinr_satisfied_count"] = r.sinr_satisfied_count;
  j["n_g"] = r.n_g;
  j["n_j"] = r.n_j;
  j["total_overlap_area_m2"] = r.total_overlap_area_m2;
  j["dbs_power_mw"] = r.dbs_power_mw;
  j["dbs_rate_bps"] = r.dbs_rate_bps;
  auto ue = nlohmann::json::array();
  for (const auto& row : r.per_ue) {
    ue.push_back({{"tag", row.tag},
                  {"sinr_db", row.link.sinr_db},
                  {"path_loss_db", row.link.path_loss_db},
                  {"bandwidth_hz", row.link.bandwidth_hz},
                  {"rate_bps", row.link.rate_bps},
                  {"allocated_rate_bps", row.allocated_rate_bps},
                  {"served", row.served},
                  {"satisfied", row.satisfied}});
  }
  j["per_ue"] = ue;
  auto viol = nlohmann::json::array();
  for (const auto& v : r.violations)
    viol.push_back({{"field", v.field}, {"message", v.message}});
  j["violations"] = viol;
  return j;
}

}  // namespace droneplace
