#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "droneplace/ddp.hpp"
#include "droneplace/eddp.hpp"
#include "droneplace/metrics.hpp"
#include "droneplace/model.hpp"

namespace droneplace {

struct Hotspot {
  Point center;
  double std_dev_m = 30.0;
  double weight = 0.0;
};

// Mixture generator for flash-crowd scenarios: Gaussian hotspots plus a
// uniform floor, rejection-resampled into the area.
struct CrowdSpec {
  Area area;
  Point gbs;
  int n_total = 0;
  std::vector<Hotspot> hotspots;
  double uniform_weight = 0.0;
  std::uint64_t seed = 0;
};

Scenario generate_scenario(const CrowdSpec& spec);

// Frozen presets: the flash-crowd layout used throughout the experiments
// and a plain uniform field.
CrowdSpec paper_crowd_spec(int n_total = 500, std::uint64_t seed = 1);
CrowdSpec uniform_crowd_spec(int n_total = 500, std::uint64_t seed = 1);
SystemConfig paper_system_config();

nlohmann::json to_json(const CrowdSpec& spec);
CrowdSpec crowd_spec_from_json(const nlohmann::json& j);
// True when the JSON is a crowd spec rather than a concrete scenario.
bool looks_like_crowd_spec(const nlohmann::json& j);

enum class Method { kBkm, kDdp, kEddp };
std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

struct RunRecord {
  Method method = Method::kDdp;
  std::uint64_t seed = 0;
  std::string config_digest;  // binds the record to its exact inputs
  int k_final = 0;
  bool feasible = false;
  double wall_time_s = 0.0;
  std::string error;  // per-run failure captured, batch continues
  Placement placement;
  EvaluationReport report;
};

struct ExperimentOptions {
  std::optional<int> k_override;  // required for the bkm comparator
  int threads = 1;                // seeds run as an indexed task pool
  int eddp_region_threads = 0;    // 0: one thread per region
};

std::vector<RunRecord> run_experiment(const Scenario& scenario,
                                      const SystemConfig& config,
                                      Method method,
                                      std::span<const std::uint64_t> seeds,
                                      const ExperimentOptions& options = {});

struct SweepSpec {
  enum Vary { kTau, kN };
  Vary vary = kTau;
  std::vector<double> values;
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds;
  std::optional<Scenario> scenario;  // fixed input (tau sweeps)
  std::optional<CrowdSpec> family;   // generator (required for N sweeps)
  SystemConfig config;
  int threads = 1;
};

struct SweepRow {
  Method method;
  double value = 0.0;
  std::uint64_t seed = 0;
  RunRecord record;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // canonical order: method, cell, seed
  std::string csv;             // deterministic results table
  std::string timing_csv;      // wall-clock side table
};

SweepResult sweep(const SweepSpec& spec);

// DRONEPLACE_THREADS, falling back to the hardware concurrency.
int default_thread_count();

// FNV-1a hex digest used for config binding.
std::string digest_hex(const std::string& payload);

// Run indexed tasks on a small fixed pool; output slots make the result
// independent of scheduling.
void parallel_for(int threads, std::size_t n,
                  const std::function<void(std::size_t)>& fn);

}  // namespace droneplace
