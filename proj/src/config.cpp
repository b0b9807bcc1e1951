#include "braidnav/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace braidnav {

namespace {

using nlohmann::json;

void get_if(const json& j, const char* key, double& out) {
  if (j.contains(key)) out = j.at(key).get<double>();
}
void get_if(const json& j, const char* key, std::uint64_t& out) {
  if (j.contains(key)) out = j.at(key).get<std::uint64_t>();
}

PathChoice choice_from_string(const std::string& s) {
  if (s == "left") return PathChoice::left;
  if (s == "straight") return PathChoice::straight;
  if (s == "right") return PathChoice::right;
  throw ConfigError("unknown path choice '" + s + "'");
}

}  // namespace

SimConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  SimConfig cfg;
  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    get_if(g, "lane_length", cfg.geometry.lane_length);
    get_if(g, "lane_width", cfg.geometry.lane_width);
    get_if(g, "car_length", cfg.geometry.car_length);
    get_if(g, "car_width", cfg.geometry.car_width);
  }
  get_if(j, "dt", cfg.dt);
  get_if(j, "planning_cycle", cfg.planning_cycle);
  get_if(j, "rollout_dt", cfg.rollout_dt);
  get_if(j, "rollout_horizon", cfg.rollout_horizon);
  get_if(j, "timeout", cfg.timeout);
  get_if(j, "wheelbase", cfg.wheelbase);
  get_if(j, "steer_max", cfg.steer_max);
  get_if(j, "k_cross", cfg.k_cross);
  get_if(j, "k_heading", cfg.k_heading);
  get_if(j, "capture_radius", cfg.capture_radius);
  get_if(j, "sigmoid_rate", cfg.sigmoid_rate);
  get_if(j, "sigmoid_threshold", cfg.sigmoid_threshold);
  get_if(j, "assumed_pref", cfg.assumed_pref);
  get_if(j, "entropy_tie_tol", cfg.entropy_tie_tol);
  get_if(j, "v_low_ratio", cfg.v_low_ratio);
  get_if(j, "pref_lo", cfg.pref_lo);
  get_if(j, "pref_hi", cfg.pref_hi);
  get_if(j, "master_seed", cfg.master_seed);
  if (j.contains("agents")) {
    for (const json& a : j.at("agents")) {
      AgentSpec spec;
      spec.id = static_cast<int>(cfg.agents.size());
      spec.entry = side_from_string(a.at("entry").get<std::string>());
      spec.choice = choice_from_string(a.value("choice", std::string("straight")));
      spec.v_high = a.value("v_high", 5.0);
      spec.v_low = a.value("v_low", cfg.v_low_ratio * spec.v_high);
      spec.pref_high = a.value("pref_high", 0.7);
      spec.compromise = a.value("compromise", 0.5);
      cfg.agents.push_back(spec);
    }
  }
  if (cfg.dt <= 0 || cfg.planning_cycle <= 0 || cfg.rollout_dt <= 0) {
    throw ConfigError("time steps must be positive");
  }
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace braidnav
