#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace droneplace {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline bool operator==(const Point& a, const Point& b) {
  return a.x == b.x && a.y == b.y;
}

inline double horizontal_distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double squared_distance(const Point& a, const Point& b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Axis-aligned serving rectangle.
struct Area {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  bool contains(const Point& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

inline bool operator==(const Area& a, const Area& b) {
  return a.x_min == b.x_min && a.x_max == b.x_max && a.y_min == b.y_min &&
         a.y_max == b.y_max;
}

// One GBS plus the ground users it serves together with the drone fleet.
// UE identity is the index in input order.
struct Scenario {
  Area area;
  Point gbs;
  std::vector<Point> ues;
};

inline bool operator==(const Scenario& a, const Scenario& b) {
  return a.area == b.area && a.gbs == b.gbs && a.ues == b.ues;
}

// S-curve LoS parameters plus excess losses of the air-to-ground model.
struct Environment {
  double a = 9.61;
  double b = 0.16;
  double eta_los = 1.0;    // dB
  double eta_nlos = 20.0;  // dB
  std::string label = "urban";
};

inline bool operator==(const Environment& a, const Environment& b) {
  return a.a == b.a && a.b == b.b && a.eta_los == b.eta_los &&
         a.eta_nlos == b.eta_nlos && a.label == b.label;
}

// All radio/environment/optimization constants. dB-scaled fields carry a
// _db/_dbm suffix; computation converts once and works in mW and Hz.
struct SystemConfig {
  Environment env;
  double p_gbs_dbm = 40.0;        // P_G, cellular transmit power of the GBS
  double p_gbs_bk_dbm = 30.0;     // P_G^bk, mmWave transmit power of the GBS
  double p_dbs_dbm = 20.0;        // P_j, total transmit power of each DBS
  double alpha = 6.5;             // path-loss exponent, GBS-to-UE downlink
  double n0_dbm_hz = -174.0;      // N_0, thermal noise density
  double fc_hz = 2.0e9;           // cellular carrier frequency
  double fc_bk_hz = 28.0e9;       // mmWave carrier frequency
  double b_hz = 20.0e6;           // B, cellular bandwidth
  double b_bk_hz = 2.0e9;         // B^bk, aggregate mmWave backhaul bandwidth
  double gamma_th_db = 5.0;       // cellular SINR threshold
  double gamma_th_bk_db = -10.0;  // mmWave SNR threshold
  double c_min_bps = 1.0e6;       // minimum data rate per UE
  double tau = 0.4;               // target satisfaction rate
  int k_max_cap = 100;            // K, fleet size
  double h_min_m = 20.0;
  double h_max_m = 400.0;
  double l_allowable_db = 119.0;  // max allowed path loss, DBS-UE / GBS-DBS
  double c_hat_gbs_bps = 70.0e6;  // GBS downlink capacity bound
  double speed_of_light = 2.997925e8;
  // Proposition 2 with the aggregate B^bk reading can cap k below what a
  // scenario needs; this switch widens the search to the fleet size K.
  bool ignore_backhaul_k_cap = false;
};

bool operator==(const SystemConfig& a, const SystemConfig& b);

// Aerial cell: 2D location, altitude and ground coverage radius.
struct DbsSite {
  int id = 0;  // 1-based; matches the association tag
  double x = 0.0;
  double y = 0.0;
  double altitude_m = 0.0;
  double radius_m = 0.0;

  Point position() const { return {x, y}; }
};

inline bool operator==(const DbsSite& a, const DbsSite& b) {
  return a.id == b.id && a.x == b.x && a.y == b.y &&
         a.altitude_m == b.altitude_m && a.radius_m == b.radius_m;
}

// Per-UE serving tag: 0 = GBS, 1..k = DBS id, -1 = unserved.
struct Association {
  static constexpr int kGbs = 0;
  static constexpr int kUnserved = -1;

  std::vector<int> tag;

  int count_gbs() const {
    int n = 0;
    for (int t : tag) n += (t == kGbs);
    return n;
  }
  // Tag counts per DBS, index 0 unused (tags are 1-based).
  std::vector<int> dbs_counts(int k) const {
    std::vector<int> n(static_cast<std::size_t>(k) + 1, 0);
    for (int t : tag)
      if (t >= 1 && t <= k) ++n[static_cast<std::size_t>(t)];
    return n;
  }
};

inline bool operator==(const Association& a, const Association& b) {
  return a.tag == b.tag;
}

struct Placement {
  std::vector<DbsSite> dbs;
  Association association;
  std::vector<double> sinr_db;  // per-UE cache, filled by the solvers

  int k() const { return static_cast<int>(dbs.size()); }
};

inline bool operator==(const Placement& a, const Placement& b) {
  return a.dbs == b.dbs && a.association == b.association &&
         a.sinr_db == b.sinr_db;
}

struct Violation {
  std::string field;
  std::string message;
};

// Both validators collect violations instead of throwing.
std::vector<Violation> validate_config(const SystemConfig& config);
std::vector<Violation> validate_scenario(const Scenario& scenario);

// JSON codecs. encode() emits the canonical form: 2-space indent, keys
// sorted, trailing newline; decode(encode(x)) == x field-for-field.
nlohmann::json to_json(const Scenario& s);
nlohmann::json to_json(const SystemConfig& c);
nlohmann::json to_json(const Placement& p);
Scenario scenario_from_json(const nlohmann::json& j);
SystemConfig config_from_json(const nlohmann::json& j);
Placement placement_from_json(const nlohmann::json& j);

std::string encode(const nlohmann::json& j);

Scenario load_scenario(const std::string& path);
SystemConfig load_config(const std::string& path);
Placement load_placement(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);

}  // namespace droneplace
