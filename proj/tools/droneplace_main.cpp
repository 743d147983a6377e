// Command-line front end: scenario generation, placement, evaluation,
// experiment sweeps, and the analytic bounds report.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "droneplace/channel.hpp"
#include "droneplace/ddp.hpp"
#include "droneplace/eddp.hpp"
#include "droneplace/geometry.hpp"
#include "droneplace/harness.hpp"
#include "droneplace/metrics.hpp"
#include "droneplace/units.hpp"

namespace dp = droneplace;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInfeasible = 2;

std::vector<double> parse_range(const std::string& text) {
  // lo:hi:step, inclusive of hi up to rounding.
  std::vector<double> out;
  double lo, hi, step;
  char c1, c2;
  std::istringstream is(text);
  if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
      step <= 0.0)
    throw std::invalid_argument("bad range: " + text);
  for (double v = lo; v <= hi + step * 1e-9; v += step) out.push_back(v);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

int cmd_gen(const std::string& preset, int n, std::uint64_t seed,
            const std::string& out, const std::string& config_out) {
  dp::CrowdSpec spec;
  if (preset == "paper")
    spec = dp::paper_crowd_spec(n, seed);
  else if (preset == "uniform")
    spec = dp::uniform_crowd_spec(n, seed);
  else {
    std::cerr << "unknown preset '" << preset << "'\n";
    return kExitInputError;
  }
  dp::Scenario scenario = dp::generate_scenario(spec);
  dp::save_json(dp::to_json(scenario), out);
  std::cout << "wrote " << out << " (" << scenario.ues.size() << " UEs)\n";
  if (!config_out.empty()) {
    dp::save_json(dp::to_json(dp::paper_system_config()), config_out);
    std::cout << "wrote " << config_out << "\n";
  }
  return kExitOk;
}

int cmd_place(const std::string& scenario_path, const std::string& config_path,
              const std::string& method_name, std::optional<int> k,
              std::uint64_t seed, int threads, const std::string& out) {
  dp::Scenario scenario = dp::load_scenario(scenario_path);
  dp::SystemConfig config = dp::load_config(config_path);
  for (const auto& v : dp::validate_scenario(scenario)) {
    std::cerr << "scenario: " << v.field << ": " << v.message << "\n";
    return kExitInputError;
  }
  for (const auto& v : dp::validate_config(config)) {
    std::cerr << "config: " << v.field << ": " << v.message << "\n";
    return kExitInputError;
  }
  auto method = dp::parse_method(method_name);
  if (!method) {
    std::cerr << "unknown method '" << method_name << "'\n";
    return kExitInputError;
  }
  if (*method == dp::Method::kBkm && !k) {
    std::cerr << "bkm needs a predefined DBS count; pass --k\n";
    return kExitInputError;
  }

  dp::DdpOutcome outcome;
  switch (*method) {
    case dp::Method::kBkm: {
      dp::DdpOptions o;
      o.k_override = k;
      o.baseline_only = true;
      outcome = dp::run_ddp(scenario, config, seed, o);
      break;
    }
    case dp::Method::kDdp: {
      dp::DdpOptions o;
      o.k_override = k;
      outcome = dp::run_ddp(scenario, config, seed, o);
      break;
    }
    case dp::Method::kEddp: {
      dp::EddpOptions o;
      o.k_override = k;
      o.threads = threads;
      outcome = dp::run_eddp(scenario, config, seed, o);
      break;
    }
  }

  dp::save_json(dp::to_json(outcome.placement), out);
  std::cout << "k=" << outcome.placement.k()
            << " satisfied=" << outcome.satisfied_count << "/"
            << scenario.ues.size()
            << " feasible=" << (outcome.feasible ? "yes" : "no")
            << " wall=" << outcome.wall_time_s << "s\n";
  if (!outcome.note.empty()) std::cout << "note: " << outcome.note << "\n";
  return outcome.feasible ? kExitOk : kExitInfeasible;
}

int cmd_eval(const std::string& scenario_path, const std::string& config_path,
             const std::string& placement_path, const std::string& fading,
             std::uint64_t seed, const std::string& out) {
  dp::Scenario scenario = dp::load_scenario(scenario_path);
  dp::SystemConfig config = dp::load_config(config_path);
  dp::Placement placement = dp::load_placement(placement_path);

  dp::FadingMode mode = dp::FadingMode::mean();
  if (fading == "sampled")
    mode = dp::FadingMode::sampled(seed);
  else if (fading != "mean") {
    std::cerr << "unknown fading mode '" << fading << "'\n";
    return kExitInputError;
  }

  dp::EvaluationReport report = dp::evaluate(placement, scenario, config, mode);
  if (!out.empty()) dp::save_json(dp::report_to_json(report), out);
  std::cout << dp::report_csv_header() << "\n"
            << dp::report_csv_row(report) << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& scenario_path, const std::string& config_path,
              const std::string& vary, const std::string& methods_arg,
              int seed_count, int threads, const std::string& out,
              const std::string& timing_out, bool emit_plotdata) {
  dp::SweepSpec spec;
  spec.config = dp::load_config(config_path);

  std::ifstream in(scenario_path);
  if (!in) {
    std::cerr << "cannot open " << scenario_path << "\n";
    return kExitInputError;
  }
  nlohmann::json sj = nlohmann::json::parse(in);
  if (dp::looks_like_crowd_spec(sj))
    spec.family = dp::crowd_spec_from_json(sj);
  else
    spec.scenario = dp::scenario_from_json(sj);

  auto eq = vary.find('=');
  if (eq == std::string::npos) {
    std::cerr << "--vary needs tau=lo:hi:step or n=lo:hi:step\n";
    return kExitInputError;
  }
  std::string key = vary.substr(0, eq);
  spec.values = parse_range(vary.substr(eq + 1));
  if (key == "tau") {
    spec.vary = dp::SweepSpec::kTau;
  } else if (key == "n") {
    spec.vary = dp::SweepSpec::kN;
    if (!spec.family) {
      std::cerr << "an n sweep needs a crowd-spec scenario family\n";
      return kExitInputError;
    }
  } else {
    std::cerr << "unknown sweep variable '" << key << "'\n";
    return kExitInputError;
  }

  std::istringstream ms(methods_arg);
  std::string token;
  while (std::getline(ms, token, ',')) {
    auto m = dp::parse_method(token);
    if (!m) {
      std::cerr << "unknown method '" << token << "'\n";
      return kExitInputError;
    }
    spec.methods.push_back(*m);
  }
  for (int s = 1; s <= seed_count; ++s)
    spec.seeds.push_back(static_cast<std::uint64_t>(s));
  spec.threads = threads;

  dp::SweepResult result = dp::sweep(spec);
  write_text(out, result.csv);
  std::string tpath = timing_out.empty() ? out + ".timing.csv" : timing_out;
  write_text(tpath, result.timing_csv);
  std::cout << "wrote " << out << " and " << tpath << "\n";

  if (emit_plotdata) {
    // One x/y series per method and metric, matching the sweep axes.
    const char* metrics[3] = {"time", "k", "sumrate"};
    for (dp::Method m : spec.methods) {
      for (int which = 0; which < 3; ++which) {
        std::ostringstream series;
        series << (spec.vary == dp::SweepSpec::kTau ? "tau" : "n_ues") << ","
               << metrics[which] << "\n";
        for (double v : spec.values) {
          double acc = 0;
          int count = 0;
          for (const auto& row : result.rows) {
            if (row.method != m || row.value != v ||
                !row.record.error.empty())
              continue;
            switch (which) {
              case 0: acc += row.record.wall_time_s; break;
              case 1: acc += row.record.k_final; break;
              case 2: acc += row.record.report.sum_rate_bps; break;
            }
            ++count;
          }
          if (count)
            series << dp::format_double(v) << ","
                   << dp::format_double(acc / count) << "\n";
        }
        write_text(out + "." + dp::method_name(m) + "." + metrics[which] +
                       ".csv",
                   series.str());
      }
    }
  }
  return kExitOk;
}

int cmd_bounds(const std::string& scenario_path,
               const std::string& config_path) {
  dp::Scenario scenario = dp::load_scenario(scenario_path);
  dp::SystemConfig config = dp::load_config(config_path);

  dp::Association assoc = dp::initial_gbs_association(scenario, config);
  int n_g = assoc.count_gbs();
  int unserved = static_cast<int>(scenario.ues.size()) - n_g;
  double r_g = dp::gbs_coverage_radius(config);
  double theta = dp::optimal_elevation_angle(config.env);
  dp::ComplexityReduction red =
      dp::expected_complexity_reduction(scenario.area, r_g);
  dp::PartitionPlan plan =
      dp::classify_partition(scenario.area, scenario.gbs, r_g);
  const char* kinds[] = {"none", "split-x", "split-y", "quad"};

  std::cout << "n_ues        " << scenario.ues.size() << "\n"
            << "n_g          " << n_g << "\n"
            << "k_min        " << dp::k_lower_bound(unserved, config) << "\n"
            << "k_max        " << dp::k_upper_bound(config) << "\n"
            << "r_g_m        " << r_g << "\n"
            << "theta_deg    " << dp::deg_from_rad(theta) << "\n"
            << "partition    " << kinds[plan.kind] << "\n"
            << "reduction    " << red.reduction
            << (red.valid ? "" : " (area too small, invalid)") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-drone base-station placement toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a scenario from a preset");
  std::string gen_preset = "paper", gen_out = "scenario.json";
  std::string gen_config_out;
  int gen_n = 500;
  std::uint64_t gen_seed = 1;
  gen->add_option("--preset", gen_preset, "paper|uniform");
  gen->add_option("--n", gen_n, "number of UEs");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output scenario file");
  gen->add_option("--config-out", gen_config_out,
                  "also write the preset system config");

  // place
  auto* place = app.add_subcommand("place", "compute a placement");
  std::string pl_scenario, pl_config, pl_method = "ddp",
              pl_out = "placement.json";
  std::optional<int> pl_k;
  std::uint64_t pl_seed = 1;
  int pl_threads = dp::default_thread_count();
  place->add_option("--scenario", pl_scenario)->required();
  place->add_option("--config", pl_config)->required();
  place->add_option("--method", pl_method, "bkm|ddp|eddp");
  place->add_option("--k", pl_k, "fixed DBS count (required for bkm)");
  place->add_option("--seed", pl_seed);
  place->add_option("--threads", pl_threads, "region workers for eddp");
  place->add_option("--out", pl_out);

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a stored placement");
  std::string ev_scenario, ev_config, ev_placement, ev_fading = "mean",
              ev_out = "report.json";
  std::uint64_t ev_seed = 1;
  eval->add_option("--scenario", ev_scenario)->required();
  eval->add_option("--config", ev_config)->required();
  eval->add_option("--placement", ev_placement)->required();
  eval->add_option("--fading", ev_fading, "mean|sampled");
  eval->add_option("--seed", ev_seed, "fading seed");
  eval->add_option("--out", ev_out);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "method x cell x seed experiment");
  std::string sw_scenario, sw_config, sw_vary, sw_methods = "bkm,ddp,eddp",
              sw_out = "results.csv", sw_timing_out;
  int sw_seeds = 100, sw_threads = dp::default_thread_count();
  bool sw_plotdata = false;
  sweep->add_option("--scenario", sw_scenario,
                    "scenario or crowd-spec JSON")->required();
  sweep->add_option("--config", sw_config)->required();
  sweep->add_option("--vary", sw_vary, "tau=lo:hi:step | n=lo:hi:step")
      ->required();
  sweep->add_option("--methods", sw_methods);
  sweep->add_option("--seeds", sw_seeds, "number of seeds (1..N)");
  sweep->add_option("--threads", sw_threads);
  sweep->add_option("--out", sw_out);
  sweep->add_option("--timing-out", sw_timing_out,
                    "wall-time table (default <out>.timing.csv)");
  sweep->add_flag("--emit-plotdata", sw_plotdata,
                  "write per-figure x/y series next to the results");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "print the analytic bounds");
  std::string bd_scenario, bd_config;
  bounds->add_option("--scenario", bd_scenario)->required();
  bounds->add_option("--config", bd_config)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (gen->parsed())
      return cmd_gen(gen_preset, gen_n, gen_seed, gen_out, gen_config_out);
    if (place->parsed())
      return cmd_place(pl_scenario, pl_config, pl_method, pl_k, pl_seed,
                       pl_threads, pl_out);
    if (eval->parsed())
      return cmd_eval(ev_scenario, ev_config, ev_placement, ev_fading, ev_seed,
                      ev_out);
    if (sweep->parsed())
      return cmd_sweep(sw_scenario, sw_config, sw_vary, sw_methods, sw_seeds,
                       sw_threads, sw_out, sw_timing_out, sw_plotdata);
    if (bounds->parsed()) return cmd_bounds(bd_scenario, bd_config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
