// Dev-only calibration driver (not part of the shipped CLI).
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "droneplace/harness.hpp"

namespace dp = droneplace;

int main(int argc, char** argv) {
  double sd = argc > 1 ? std::atof(argv[1]) : 30.0;
  double uw = argc > 2 ? std::atof(argv[2]) : 0.2;
  int seeds_n = argc > 3 ? std::atoi(argv[3]) : 10;
  int n = argc > 4 ? std::atoi(argv[4]) : 500;
  int k = argc > 5 ? std::atoi(argv[5]) : 10;

  dp::SystemConfig config = dp::paper_system_config();
  std::vector<std::uint64_t> seeds;
  for (int s = 1; s <= seeds_n; ++s) seeds.push_back(s);

  for (auto method : {dp::Method::kBkm, dp::Method::kDdp, dp::Method::kEddp}) {
    double sat = 0, overlap = 0, rate = 0, kf = 0, ng = 0, time = 0;
    for (std::uint64_t s : seeds) {
      dp::CrowdSpec spec = dp::paper_crowd_spec(n, s);
      for (auto& h : spec.hotspots) {
        h.std_dev_m = sd;
        h.weight = (1.0 - uw) / spec.hotspots.size();
      }
      spec.uniform_weight = uw;
      dp::Scenario scen = dp::generate_scenario(spec);
      dp::ExperimentOptions opts;
      opts.k_override = k > 0 ? std::optional<int>(k) : std::nullopt;
      if (method == dp::Method::kBkm && k <= 0) {
        dp::Association a = dp::initial_gbs_association(scen, config);
        opts.k_override = std::max(
            1, dp::k_lower_bound(static_cast<int>(scen.ues.size()) -
                                     a.count_gbs(),
                                 config));
      }
      std::uint64_t one[1] = {s};
      auto rec = dp::run_experiment(scen, config, method, one, opts)[0];
      sat += rec.report.satisfaction_rate;
      overlap += rec.report.total_overlap_area_m2;
      rate += rec.report.sum_rate_bps;
      kf += rec.k_final;
      ng += rec.report.n_g;
      time += rec.wall_time_s;
    }
    double m = static_cast<double>(seeds.size());
    std::printf("%4s sat=%.3f overlap=%8.0f rate=%7.1fM k=%4.1f ng=%5.1f t=%.3fs\n",
                dp::method_name(method).c_str(), sat / m, overlap / m,
                rate / m / 1e6, kf / m, ng / m, time / m);
  }
  return 0;
}
