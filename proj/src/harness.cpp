#include "droneplace/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "droneplace/rng.hpp"

namespace droneplace {

Scenario generate_scenario(const CrowdSpec& spec) {
  double total_weight = spec.uniform_weight;
  for (const auto& h : spec.hotspots) {
    if (h.weight < 0.0)
      throw std::domain_error("generate_scenario: negative weight");
    total_weight += h.weight;
  }
  if (spec.uniform_weight < 0.0)
    throw std::domain_error("generate_scenario: negative weight");
  if (!(total_weight > 0.0))
    throw std::domain_error("generate_scenario: all weights are zero");
  if (spec.n_total < 1)
    throw std::domain_error("generate_scenario: n_total must be >= 1");

  Rng rng(spec.seed);
  Scenario s;
  s.area = spec.area;
  s.gbs = spec.gbs;
  s.ues.reserve(static_cast<std::size_t>(spec.n_total));
  while (static_cast<int>(s.ues.size()) < spec.n_total) {
    double pick = rng.uniform() * total_weight;
    const Hotspot* hs = nullptr;
    for (const auto& h : spec.hotspots) {
      if (pick < h.weight) {
        hs = &h;
        break;
      }
      pick -= h.weight;
    }
    Point p;
    if (hs) {
      p.x = rng.normal(hs->center.x, hs->std_dev_m);
      p.y = rng.normal(hs->center.y, hs->std_dev_m);
    } else {
      p.x = rng.uniform(spec.area.x_min, spec.area.x_max);
      p.y = rng.uniform(spec.area.y_min, spec.area.y_max);
    }
    if (spec.area.contains(p)) s.ues.push_back(p);  // resample otherwise
  }
  return s;
}

CrowdSpec paper_crowd_spec(int n_total, std::uint64_t seed) {
  CrowdSpec spec;
  spec.area = {0.0, 600.0, 0.0, 600.0};
  spec.gbs = {100.0, 250.0};
  spec.n_total = n_total;
  spec.seed = seed;
  const double w = 0.16;
  const double sd = 30.0;
  spec.hotspots = {
      {{200.0, 250.0}, sd, w}, {{150.0, 20.0}, sd, w}, {{340.0, 430.0}, sd, w},
      {{400.0, 340.0}, sd, w}, {{480.0, 430.0}, sd, w},
  };
  spec.uniform_weight = 0.20;
  return spec;
}

CrowdSpec uniform_crowd_spec(int n_total, std::uint64_t seed) {
  CrowdSpec spec;
  spec.area = {0.0, 600.0, 0.0, 600.0};
  spec.gbs = {100.0, 250.0};
  spec.n_total = n_total;
  spec.seed = seed;
  spec.uniform_weight = 1.0;
  return spec;
}

SystemConfig paper_system_config() {
  SystemConfig c;  // defaults carry the Table-III values
  c.ignore_backhaul_k_cap = true;
  return c;
}

nlohmann::json to_json(const CrowdSpec& spec) {
  nlohmann::json j;
  j["area"] = {{"x_min", spec.area.x_min},
               {"x_max", spec.area.x_max},
               {"y_min", spec.area.y_min},
               {"y_max", spec.area.y_max}};
  j["gbs"] = {spec.gbs.x, spec.gbs.y};
  j["n_total"] = spec.n_total;
  auto hs = nlohmann::json::array();
  for (const auto& h : spec.hotspots)
    hs.push_back({{"center", {h.center.x, h.center.y}},
                  {"std_dev_m", h.std_dev_m},
                  {"weight", h.weight}});
  j["hotspots"] = hs;
  j["uniform_weight"] = spec.uniform_weight;
  j["seed"] = spec.seed;
  return j;
}

CrowdSpec crowd_spec_from_json(const nlohmann::json& j) {
  CrowdSpec spec;
  const auto& a = j.at("area");
  spec.area = {a.at("x_min").get<double>(), a.at("x_max").get<double>(),
               a.at("y_min").get<double>(), a.at("y_max").get<double>()};
  spec.gbs = {j.at("gbs").at(0).get<double>(),
              j.at("gbs").at(1).get<double>()};
  spec.n_total = j.at("n_total").get<int>();
  for (const auto& h : j.value("hotspots", nlohmann::json::array())) {
    Hotspot hs;
    hs.center = {h.at("center").at(0).get<double>(),
                 h.at("center").at(1).get<double>()};
    hs.std_dev_m = h.at("std_dev_m").get<double>();
    hs.weight = h.at("weight").get<double>();
    spec.hotspots.push_back(hs);
  }
  spec.uniform_weight = j.value("uniform_weight", 0.0);
  spec.seed = j.value("seed", std::uint64_t{0});
  return spec;
}

bool looks_like_crowd_spec(const nlohmann::json& j) {
  return j.contains("n_total");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kBkm:
      return "bkm";
    case Method::kDdp:
      return "ddp";
    case Method::kEddp:
      return "eddp";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "bkm") return Method::kBkm;
  if (name == "ddp") return Method::kDdp;
  if (name == "eddp") return Method::kEddp;
  return std::nullopt;
}

std::string digest_hex(const std::string& payload) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

int default_thread_count() {
  if (const char* env = std::getenv("DRONEPLACE_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int threads, std::size_t n,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  int workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<RunRecord> run_experiment(const Scenario& scenario,
                                      const SystemConfig& config,
                                      Method method,
                                      std::span<const std::uint64_t> seeds,
                                      const ExperimentOptions& options) {
  if (method == Method::kBkm && !options.k_override)
    throw std::invalid_argument(
        "run_experiment: the bkm baseline needs a predefined k; pass "
        "k_override");

  std::string digest =
      digest_hex(encode(to_json(config)) + encode(to_json(scenario)));

  std::vector<RunRecord> records(seeds.size());
  parallel_for(options.threads, seeds.size(), [&](std::size_t i) {
    RunRecord& rec = records[i];
    rec.method = method;
    rec.seed = seeds[i];
    rec.config_digest = digest;
    try {
      DdpOutcome outcome;
      switch (method) {
        case Method::kBkm: {
          DdpOptions o;
          o.k_override = options.k_override;
          o.baseline_only = true;
          outcome = run_ddp(scenario, config, seeds[i], o);
          break;
        }
        case Method::kDdp: {
          DdpOptions o;
          o.k_override = options.k_override;
          outcome = run_ddp(scenario, config, seeds[i], o);
          break;
        }
        case Method::kEddp: {
          EddpOptions o;
          o.k_override = options.k_override;
          o.threads = options.eddp_region_threads;
          outcome = run_eddp(scenario, config, seeds[i], o);
          break;
        }
      }
      rec.k_final = outcome.placement.k();
      rec.feasible = outcome.feasible;
      rec.wall_time_s = outcome.wall_time_s;
      rec.placement = std::move(outcome.placement);
      rec.report = evaluate(rec.placement, scenario, config);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });
  return records;
}

namespace {

struct SweepCell {
  double value;
  Scenario scenario;
  SystemConfig config;
};

SweepCell make_cell(const SweepSpec& spec, double value, std::uint64_t seed) {
  SweepCell cell;
  cell.value = value;
  cell.config = spec.config;
  if (spec.vary == SweepSpec::kTau) {
    cell.config.tau = value;
    if (spec.scenario) {
      cell.scenario = *spec.scenario;
    } else if (spec.family) {
      CrowdSpec family = *spec.family;
      family.seed = derive_seed(family.seed, seed);
      cell.scenario = generate_scenario(family);
    } else {
      throw std::invalid_argument("sweep: tau sweep needs a scenario");
    }
  } else {
    if (!spec.family)
      throw std::invalid_argument(
          "sweep: varying the UE count needs a crowd-spec scenario family");
    CrowdSpec family = *spec.family;
    family.n_total = static_cast<int>(std::lround(value));
    family.seed = derive_seed(family.seed, seed);
    cell.scenario = generate_scenario(family);
  }
  return cell;
}

}  // namespace

SweepResult sweep(const SweepSpec& spec) {
  struct Task {
    Method method;
    double value;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (Method m : spec.methods)
    for (double v : spec.values)
      for (std::uint64_t s : spec.seeds) tasks.push_back({m, v, s});

  std::vector<RunRecord> outputs(tasks.size());
  parallel_for(spec.threads, tasks.size(), [&](std::size_t i) {
    const Task& t = tasks[i];
    SweepCell cell = make_cell(spec, t.value, t.seed);
    ExperimentOptions opts;
    opts.threads = 1;
    opts.eddp_region_threads = 1;  // the sweep pool is the parallel layer
    if (t.method == Method::kBkm) {
      // The baseline cannot choose k; hand it the Proposition-1 bound.
      Association assoc = initial_gbs_association(cell.scenario, cell.config);
      int unserved = static_cast<int>(cell.scenario.ues.size()) -
                     assoc.count_gbs();
      opts.k_override = std::max(1, k_lower_bound(unserved, cell.config));
    }
    std::uint64_t seeds[1] = {t.seed};
    auto recs = run_experiment(cell.scenario, cell.config, t.method, seeds,
                               opts);
    outputs[i] = std::move(recs[0]);
  });

  SweepResult result;
  result.rows.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i)
    result.rows.push_back(
        {tasks[i].method, tasks[i].value, tasks[i].seed, std::move(outputs[i])});

  const char* key = spec.vary == SweepSpec::kTau ? "tau" : "n_ues";
  std::ostringstream csv, timing;
  csv << "method," << key
      << ",seed,k,feasible,n_g,satisfied,satisfaction_rate,sum_rate_bps,"
         "overlap_m2,error\n";
  timing << "method," << key << ",seed,wall_time_s\n";

  for (const auto& row : result.rows) {
    const RunRecord& r = row.record;
    csv << method_name(row.method) << ',' << format_double(row.value) << ','
        << row.seed << ',' << r.k_final << ',' << (r.feasible ? 1 : 0) << ','
        << r.report.n_g << ',' << r.report.satisfied_count << ','
        << format_double(r.report.satisfaction_rate) << ','
        << format_double(r.report.sum_rate_bps) << ','
        << format_double(r.report.total_overlap_area_m2) << ','
        << (r.error.empty() ? "" : "\"" + r.error + "\"") << '\n';
    timing << method_name(row.method) << ',' << format_double(row.value)
           << ',' << row.seed << ',' << format_double(r.wall_time_s) << '\n';
  }

  // Aggregated rows: per method x cell means over seeds.
  for (Method m : spec.methods) {
    for (double v : spec.values) {
      double k = 0, sat = 0, rate = 0, overlap = 0, time = 0;
      int count = 0;
      for (const auto& row : result.rows) {
        if (row.method != m || row.value != v || !row.record.error.empty())
          continue;
        k += row.record.k_final;
        sat += row.record.report.satisfaction_rate;
        rate += row.record.report.sum_rate_bps;
        overlap += row.record.report.total_overlap_area_m2;
        time += row.record.wall_time_s;
        ++count;
      }
      if (count == 0) continue;
      csv << method_name(m) << ',' << format_double(v) << ",mean,"
          << format_double(k / count) << ",,,," << format_double(sat / count)
          << ',' << format_double(rate / count) << ','
          << format_double(overlap / count) << ",\n";
      timing << method_name(m) << ',' << format_double(v) << ",mean,"
             << format_double(time / count) << '\n';
    }
  }

  result.csv = csv.str();
  result.timing_csv = timing.str();
  return result;
}

}  // namespace droneplace
