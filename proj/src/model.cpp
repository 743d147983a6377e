#include "droneplace/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace droneplace {

bool operator==(const SystemConfig& a, const SystemConfig& b) {
  return a.env == b.env && a.p_gbs_dbm == b.p_gbs_dbm &&
         a.p_gbs_bk_dbm == b.p_gbs_bk_dbm && a.p_dbs_dbm == b.p_dbs_dbm &&
         a.alpha == b.alpha && a.n0_dbm_hz == b.n0_dbm_hz &&
         a.fc_hz == b.fc_hz && a.fc_bk_hz == b.fc_bk_hz && a.b_hz == b.b_hz &&
         a.b_bk_hz == b.b_bk_hz && a.gamma_th_db == b.gamma_th_db &&
         a.gamma_th_bk_db == b.gamma_th_bk_db && a.c_min_bps == b.c_min_bps &&
         a.tau == b.tau && a.k_max_cap == b.k_max_cap &&
         a.h_min_m == b.h_min_m && a.h_max_m == b.h_max_m &&
         a.l_allowable_db == b.l_allowable_db &&
         a.c_hat_gbs_bps == b.c_hat_gbs_bps &&
         a.speed_of_light == b.speed_of_light &&
         a.ignore_backhaul_k_cap == b.ignore_backhaul_k_cap;
}

std::vector<Violation> validate_config(const SystemConfig& c) {
  std::vector<Violation> v;
  auto bad = [&v](const std::string& field, const std::string& msg) {
    v.push_back({field, msg});
  };

  if (!(c.env.a > 0.0)) bad("env.a", "must be > 0");
  if (!(c.env.b > 0.0)) bad("env.b", "must be > 0");
  if (!(c.env.eta_nlos >= c.env.eta_los))
    bad("env.eta_nlos", "must be >= eta_los");
  if (!(c.tau >= 0.0 && c.tau <= 1.0)) bad("tau", "must be in [0,1]");
  if (!(c.alpha > 2.0)) bad("alpha", "must be > 2");
  if (!(c.h_min_m > 0.0 && c.h_min_m < c.h_max_m))
    bad("h_min_m/h_max_m", "altitude bounds must satisfy 0 < h_min < h_max");
  if (!(c.b_hz > 0.0)) bad("b_hz", "must be positive");
  if (!(c.b_bk_hz > 0.0)) bad("b_bk_hz", "must be positive");
  if (!(c.fc_hz > 0.0)) bad("fc_hz", "must be positive");
  if (!(c.fc_bk_hz > 0.0)) bad("fc_bk_hz", "must be positive");
  if (!std::isfinite(c.p_gbs_dbm)) bad("p_gbs_dbm", "must be finite");
  if (!std::isfinite(c.p_gbs_bk_dbm)) bad("p_gbs_bk_dbm", "must be finite");
  if (!std::isfinite(c.p_dbs_dbm)) bad("p_dbs_dbm", "must be finite");
  if (!(c.c_min_bps > 0.0)) bad("c_min_bps", "must be positive");
  if (!(c.k_max_cap >= 0)) bad("k_max_cap", "must be >= 0");
  if (!(c.c_hat_gbs_bps > 0.0)) bad("c_hat_gbs_bps", "must be positive");
  if (!(c.speed_of_light > 0.0)) bad("speed_of_light", "must be positive");
  return v;
}

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> v;
  if (!(s.area.x_min < s.area.x_max))
    v.push_back({"area", "x_min must be < x_max"});
  if (!(s.area.y_min < s.area.y_max))
    v.push_back({"area", "y_min must be < y_max"});
  if (s.ues.empty()) v.push_back({"ues", "at least one UE is required"});
  if (!s.area.contains(s.gbs))
    v.push_back({"gbs", "GBS must lie inside the area"});
  for (std::size_t i = 0; i < s.ues.size(); ++i) {
    if (!s.area.contains(s.ues[i])) {
      std::ostringstream os;
      os << "UE " << i << " lies outside the area";
      v.push_back({"ues", os.str()});
    }
  }
  return v;
}

nlohmann::json to_json(const Scenario& s) {
  nlohmann::json j;
  j["area"] = {{"x_min", s.area.x_min},
               {"x_max", s.area.x_max},
               {"y_min", s.area.y_min},
               {"y_max", s.area.y_max}};
  j["gbs"] = {s.gbs.x, s.gbs.y};
  auto ues = nlohmann::json::array();
  for (const auto& u : s.ues) ues.push_back({u.x, u.y});
  j["ues"] = ues;
  return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  const auto& a = j.at("area");
  s.area = {a.at("x_min").get<double>(), a.at("x_max").get<double>(),
            a.at("y_min").get<double>(), a.at("y_max").get<double>()};
  s.gbs = {j.at("gbs").at(0).get<double>(), j.at("gbs").at(1).get<double>()};
  for (const auto& u : j.at("ues"))
    s.ues.push_back({u.at(0).get<double>(), u.at(1).get<double>()});
  return s;
}

nlohmann::json to_json(const SystemConfig& c) {
  nlohmann::json j;
  j["env"] = {{"a", c.env.a},
              {"b", c.env.b},
              {"eta_los", c.env.eta_los},
              {"eta_nlos", c.env.eta_nlos},
              {"label", c.env.label}};
  j["p_gbs_dbm"] = c.p_gbs_dbm;
  j["p_gbs_bk_dbm"] = c.p_gbs_bk_dbm;
  j["p_dbs_dbm"] = c.p_dbs_dbm;
  j["alpha"] = c.alpha;
  j["n0_dbm_hz"] = c.n0_dbm_hz;
  j["fc_hz"] = c.fc_hz;
  j["fc_bk_hz"] = c.fc_bk_hz;
  j["b_hz"] = c.b_hz;
  j["b_bk_hz"] = c.b_bk_hz;
  j["gamma_th_db"] = c.gamma_th_db;
  j["gamma_th_bk_db"] = c.gamma_th_bk_db;
  j["c_min_bps"] = c.c_min_bps;
  j["tau"] = c.tau;
  j["k_max_cap"] = c.k_max_cap;
  j["h_min_m"] = c.h_min_m;
  j["h_max_m"] = c.h_max_m;
  j["l_allowable_db"] = c.l_allowable_db;
  j["c_hat_gbs_bps"] = c.c_hat_gbs_bps;
  j["speed_of_light"] = c.speed_of_light;
  j["ignore_backhaul_k_cap"] = c.ignore_backhaul_k_cap;
  return j;
}

SystemConfig config_from_json(const nlohmann::json& j) {
  SystemConfig c;
  const auto& e = j.at("env");
  c.env.a = e.at("a").get<double>();
  c.env.b = e.at("b").get<double>();
  c.env.eta_los = e.at("eta_los").get<double>();
  c.env.eta_nlos = e.at("eta_nlos").get<double>();
  c.env.label = e.value("label", std::string{});
  c.p_gbs_dbm = j.at("p_gbs_dbm").get<double>();
  c.p_gbs_bk_dbm = j.at("p_gbs_bk_dbm").get<double>();
  c.p_dbs_dbm = j.at("p_dbs_dbm").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.n0_dbm_hz = j.at("n0_dbm_hz").get<double>();
  c.fc_hz = j.at("fc_hz").get<double>();
  c.fc_bk_hz = j.at("fc_bk_hz").get<double>();
  c.b_hz = j.at("b_hz").get<double>();
  c.b_bk_hz = j.at("b_bk_hz").get<double>();
  c.gamma_th_db = j.at("gamma_th_db").get<double>();
  c.gamma_th_bk_db = j.at("gamma_th_bk_db").get<double>();
  c.c_min_bps = j.at("c_min_bps").get<double>();
  c.tau = j.at("tau").get<double>();
  c.k_max_cap = j.at("k_max_cap").get<int>();
  c.h_min_m = j.at("h_min_m").get<double>();
  c.h_max_m = j.at("h_max_m").get<double>();
  c.l_allowable_db = j.at("l_allowable_db").get<double>();
  c.c_hat_gbs_bps = j.at("c_hat_gbs_bps").get<double>();
  c.speed_of_light = j.at("speed_of_light").get<double>();
  c.ignore_backhaul_k_cap = j.value("ignore_backhaul_k_cap", false);
  return c;
}

nlohmann::json to_json(const Placement& p) {
  nlohmann::json j;
  auto dbs = nlohmann::json::array();
  for (const auto& d : p.dbs) {
    dbs.push_back({{"id", d.id},
                   {"x", d.x},
                   {"y", d.y},
                   {"altitude_m", d.altitude_m},
                   {"radius_m", d.radius_m}});
  }
  j["dbs"] = dbs;
  j["association"] = p.association.tag;
  j["sinr_db"] = p.sinr_db;
  return j;
}

Placement placement_from_json(const nlohmann::json& j) {
  Placement p;
  for (const auto& d : j.at("dbs")) {
    DbsSite s;
    s.id = d.at("id").get<int>();
    s.x = d.at("x").get<double>();
    s.y = d.at("y").get<double>();
    s.altitude_m = d.at("altitude_m").get<double>();
    s.radius_m = d.at("radius_m").get<double>();
    p.dbs.push_back(s);
  }
  p.association.tag = j.at("association").get<std::vector<int>>();
  if (j.contains("sinr_db"))
    p.sinr_db = j.at("sinr_db").get<std::vector<double>>();
  return p;
}

std::string encode(const nlohmann::json& j) { return j.dump(2) + "\n"; }

namespace {
nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}
}  // namespace

Scenario load_scenario(const std::string& path) {
  return scenario_from_json(parse_file(path));
}

SystemConfig load_config(const std::string& path) {
  return config_from_json(parse_file(path));
}

Placement load_placement(const std::string& path) {
  return placement_from_json(parse_file(path));
}

void save_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << encode(j);
}

}  // namespace droneplace
