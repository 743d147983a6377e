#pragma once

#include <string>
#include <vector>

#include "droneplace/channel.hpp"
#include "droneplace/model.hpp"

namespace droneplace {

// Full constraint/objective accounting of one placement.
struct EvaluationReport {
  int n_ues = 0;
  double sum_rate_bps = 0.0;  // objective: allocated rates of served UEs
  int satisfied_count = 0;    // served, rate >= c_min, loss admissible
  double satisfaction_rate = 0.0;
  int sinr_satisfied_count = 0;  // served by the SINR indicator alone
  int n_g = 0;
  std::vector<int> n_j;  // per DBS, aligned with placement.dbs
  double total_overlap_area_m2 = 0.0;
  std::vector<double> dbs_power_mw;
  std::vector<double> dbs_rate_bps;
  std::vector<UeLinkRow> per_ue;
  std::vector<Violation> violations;
};

EvaluationReport evaluate(const Placement& placement, const Scenario& scenario,
                          const SystemConfig& config,
                          FadingMode fading = FadingMode::mean());

struct EmpiricalDistribution {
  std::vector<double> values;     // input sample, as given
  std::vector<double> bin_edges;  // n_bins + 1 edges
  std::vector<double> pdf;        // per-bin mass, sums to 1
  std::vector<double> cdf;        // running sum, ends at 1
};

// Histogram PDF plus running-sum CDF over [min, max] of the sample.
// Throws std::domain_error on an empty sample.
EmpiricalDistribution empirical_distribution(const std::vector<double>& values,
                                             int n_bins);

// Flat CSV row form of a report (documented header) and the full JSON form.
std::string report_csv_header();
std::string report_csv_row(const EvaluationReport& report);
nlohmann::json report_to_json(const EvaluationReport& report);

// Canonical shortest-round-trip decimal formatting shared by all CSV output.
std::string format_double(double v);

}  // namespace droneplace
