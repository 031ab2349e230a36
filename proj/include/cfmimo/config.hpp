// SPDX-License-Identifier: Apache-2.0
//
// cfmimo: closed-form and Monte Carlo analysis of cell-free massive MIMO
// under channel aging.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include "cfmimo/energy.hpp"
#include "cfmimo/linalg.hpp"
#include "cfmimo/uplink.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfmimo {

/// Invalid configuration; `path` is the dotted key that failed.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ScenarioConfig {
  std::size_t L = 100;
  std::size_t K = 20;
  std::size_t N = 2;
  double area_side_m = 500.0;
  bool shadowing = true;
  bool uncorrelated = false;
  double asd_deg = 30.0;
  double carrier_GHz = 2.0;
  double noise_dBm = -96.0;
};

struct AgingConfig {
  double f_D_Ts = 0.0;
  std::vector<double> f_D_Ts_per_ue;  // overrides f_D_Ts when non-empty
  double T_s_ms = 0.01;
  int tau_c = 200;
  // When > 0, tau_c is replaced by the design rule for this Doppler value.
  double design_f_D_Ts_max = 0.0;
};

struct EstimationConfig {
  int tau_p = 10;
  double pilot_power_dBm = 20.0;
};

struct UplinkConfig {
  std::vector<std::string> schemes{"lsfd", "mf", "sc"};
  std::vector<std::string> power_modes{"full", "sccpc"};
  double p_dBm = 20.0;
  int sc_trials = 200;
  std::size_t sc_candidates = 3;
  // "full_power": SCCPC reuses the serving APs chosen at full power.
  // "per_mode": the serving APs are searched again under SCCPC.
  std::string sc_serving = "full_power";
};

struct DownlinkConfig {
  std::vector<std::string> schemes{"coherent", "noncoherent"};
  std::vector<std::string> power_modes{"full", "sccpc"};
  double p_dBm = 23.0;
};

struct PowerConfig {
  bool enabled = true;
  double pa_efficiency = 0.4;
  double P_ap_W = 0.2;
  double P_ue_W = 0.1;
  double P_0_W = 0.825;
  double P_bt_W_per_Gbps = 0.25;
  double bandwidth_MHz = 20.0;
  bool normalized_snr = false;
};

struct RunSettings {
  std::size_t drops = 200;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::size_t oracle_trials = 0;
  double oracle_tolerance = 0.02;
  std::string out_dir = "out";
};

struct RunConfig {
  ScenarioConfig scenario;
  AgingConfig aging;
  EstimationConfig estimation;
  UplinkConfig uplink;
  DownlinkConfig downlink;
  PowerConfig power;
  RunSettings run;

  // Derived quantities in SI units.
  double sigma2() const { return dbm_to_watt(scenario.noise_dBm); }
  double p_u() const { return dbm_to_watt(uplink.p_dBm); }
  double p_d() const { return dbm_to_watt(downlink.p_dBm); }
  double pilot_power() const { return dbm_to_watt(estimation.pilot_power_dBm); }
  double T_s() const { return aging.T_s_ms * 1e-3; }

  PowerModelParams power_model() const {
    PowerModelParams pm;
    pm.pa_efficiency_ue = power.pa_efficiency;
    pm.pa_efficiency_ap = power.pa_efficiency;
    pm.P_ap = power.P_ap_W;
    pm.P_ue = power.P_ue_W;
    pm.P_0 = power.P_0_W;
    pm.P_bt = power.P_bt_W_per_Gbps * 1e-9;
    pm.bandwidth = power.bandwidth_MHz * 1e6;
    pm.normalized_snr = power.normalized_snr;
    return pm;
  }
};

inline const std::vector<std::string>& known_uplink_schemes() {
  static const std::vector<std::string> v{"lsfd", "mf", "sc"};
  return v;
}
inline const std::vector<std::string>& known_downlink_schemes() {
  static const std::vector<std::string> v{"coherent", "noncoherent"};
  return v;
}

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["scenario"] = {{"L", c.scenario.L},
                   {"K", c.scenario.K},
                   {"N", c.scenario.N},
                   {"area_side_m", c.scenario.area_side_m},
                   {"shadowing", c.scenario.shadowing},
                   {"uncorrelated", c.scenario.uncorrelated},
                   {"asd_deg", c.scenario.asd_deg},
                   {"carrier_GHz", c.scenario.carrier_GHz},
                   {"noise_dBm", c.scenario.noise_dBm}};
  j["aging"] = {{"f_D_Ts", c.aging.f_D_Ts},
                {"f_D_Ts_per_ue", c.aging.f_D_Ts_per_ue},
                {"T_s_ms", c.aging.T_s_ms},
                {"tau_c", c.aging.tau_c},
                {"design_f_D_Ts_max", c.aging.design_f_D_Ts_max}};
  j["estimation"] = {{"tau_p", c.estimation.tau_p},
                     {"pilot_power_dBm", c.estimation.pilot_power_dBm}};
  j["uplink"] = {{"schemes", c.uplink.schemes},
                 {"power_modes", c.uplink.power_modes},
                 {"p_dBm", c.uplink.p_dBm},
                 {"sc_trials", c.uplink.sc_trials},
                 {"sc_candidates", c.uplink.sc_candidates},
                 {"sc_serving", c.uplink.sc_serving}};
  j["downlink"] = {{"schemes", c.downlink.schemes},
                   {"power_modes", c.downlink.power_modes},
                   {"p_dBm", c.downlink.p_dBm}};
  j["power"] = {{"enabled", c.power.enabled},
                {"pa_efficiency", c.power.pa_efficiency},
                {"P_ap_W", c.power.P_ap_W},
                {"P_ue_W", c.power.P_ue_W},
                {"P_0_W", c.power.P_0_W},
                {"P_bt_W_per_Gbps", c.power.P_bt_W_per_Gbps},
                {"bandwidth_MHz", c.power.bandwidth_MHz},
                {"normalized_snr", c.power.normalized_snr}};
  j["run"] = {{"drops", c.run.drops},
              {"seed", c.run.seed},
              {"threads", c.run.threads},
              {"oracle_trials", c.run.oracle_trials},
              {"oracle_tolerance", c.run.oracle_tolerance},
              {"out_dir", c.run.out_dir}};
  return j;
}

namespace detail {

class Reader {
 public:
  Reader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const auto& v = j_.at(key);
    const std::string p = path_ + "." + key;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(p, "expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(p, "expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.get<long long>() < 0) throw ConfigError(p, "must be non-negative");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(p, "expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(p, "expected a string");
      }
      out = v.get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(p, e.what());
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(path_ + "." + it.key(), "unknown key");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

inline void check_names(const std::vector<std::string>& v, const std::vector<std::string>& known,
                        const std::string& path) {
  for (const auto& s : v) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw ConfigError(path, "unknown entry '" + s + "'");
    }
  }
  std::set<std::string> uniq(v.begin(), v.end());
  require(uniq.size() == v.size(), path, "duplicate entries");
}

}  // namespace detail

/// Checks ranges and cross-field constraints.
inline void validate(const RunConfig& c) {
  using detail::require;
  require(c.scenario.L >= 1, "scenario.L", "must be >= 1");
  require(c.scenario.K >= 1, "scenario.K", "must be >= 1");
  require(c.scenario.N >= 1, "scenario.N", "must be >= 1");
  require(c.scenario.area_side_m > 0.0 && std::isfinite(c.scenario.area_side_m),
          "scenario.area_side_m", "must be positive");
  require(c.scenario.uncorrelated || (c.scenario.asd_deg > 0.0 && std::isfinite(c.scenario.asd_deg)),
          "scenario.asd_deg", "must be positive unless scenario.uncorrelated is set");
  require(c.scenario.carrier_GHz > 0.0, "scenario.carrier_GHz", "must be positive");
  require(std::isfinite(c.scenario.noise_dBm), "scenario.noise_dBm", "must be finite");
  require(std::isfinite(c.aging.f_D_Ts), "aging.f_D_Ts", "must be finite");
  require(c.aging.f_D_Ts_per_ue.empty() || c.aging.f_D_Ts_per_ue.size() == c.scenario.K,
          "aging.f_D_Ts_per_ue", "needs one value per UE");
  require(c.aging.T_s_ms > 0.0, "aging.T_s_ms", "must be positive");
  require(c.aging.design_f_D_Ts_max >= 0.0, "aging.design_f_D_Ts_max", "must be >= 0");
  require(c.estimation.tau_p >= 1, "estimation.tau_p", "must be >= 1");
  const int tau_c = c.aging.design_f_D_Ts_max > 0.0 ? design_tau_c(c.aging.design_f_D_Ts_max)
                                                     : c.aging.tau_c;
  require(tau_c > c.estimation.tau_p, "aging.tau_c", "must exceed estimation.tau_p");
  detail::check_names(c.uplink.schemes, known_uplink_schemes(), "uplink.schemes");
  detail::check_names(c.downlink.schemes, known_downlink_schemes(), "downlink.schemes");
  detail::check_names(c.uplink.power_modes, {"full", "sccpc"}, "uplink.power_modes");
  detail::check_names(c.downlink.power_modes, {"full", "sccpc"}, "downlink.power_modes");
  require(!c.uplink.schemes.empty() || !c.downlink.schemes.empty(), "uplink.schemes",
          "no scheme selected in either direction");
  require(c.uplink.schemes.empty() || !c.uplink.power_modes.empty(), "uplink.power_modes",
          "must not be empty");
  require(c.downlink.schemes.empty() || !c.downlink.power_modes.empty(), "downlink.power_modes",
          "must not be empty");
  require(c.uplink.sc_trials >= 1, "uplink.sc_trials", "must be >= 1");
  require(c.uplink.sc_serving == "full_power" || c.uplink.sc_serving == "per_mode",
          "uplink.sc_serving", "must be 'full_power' or 'per_mode'");
  require(c.power.pa_efficiency > 0.0 && c.power.pa_efficiency <= 1.0, "power.pa_efficiency",
          "must lie in (0, 1]");
  require(c.power.P_ap_W >= 0.0, "power.P_ap_W", "must be >= 0");
  require(c.power.P_ue_W >= 0.0, "power.P_ue_W", "must be >= 0");
  require(c.power.P_0_W >= 0.0, "power.P_0_W", "must be >= 0");
  require(c.power.P_bt_W_per_Gbps >= 0.0, "power.P_bt_W_per_Gbps", "must be >= 0");
  require(c.power.bandwidth_MHz > 0.0, "power.bandwidth_MHz", "must be positive");
  require(c.run.drops >= 1, "run.drops", "must be >= 1");
  require(c.run.oracle_tolerance > 0.0, "run.oracle_tolerance", "must be positive");
}

/// Parses and validates a configuration. Missing keys keep their defaults;
/// unknown keys are rejected.
inline RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  if (!j.is_object()) throw ConfigError("config", "expected an object");
  static const char* sections[] = {"scenario", "aging", "estimation", "uplink", "downlink", "power", "run"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(std::begin(sections), std::end(sections),
                     [&](const char* s) { return it.key() == s; }) == std::end(sections)) {
      throw ConfigError(it.key(), "unknown section");
    }
  }
  const nlohmann::json empty = nlohmann::json::object();
  auto sub = [&](const char* name) -> const nlohmann::json& {
    return j.contains(name) ? j.at(name) : empty;
  };
  {
    detail::Reader r(sub("scenario"), "scenario");
    auto& s = c.scenario;
    r.get("L", s.L);
    r.get("K", s.K);
    r.get("N", s.N);
    r.get("area_side_m", s.area_side_m);
    r.get("shadowing", s.shadowing);
    r.get("uncorrelated", s.uncorrelated);
    r.get("asd_deg", s.asd_deg);
    r.get("carrier_GHz", s.carrier_GHz);
    r.get("noise_dBm", s.noise_dBm);
    r.finish();
  }
  {
    detail::Reader r(sub("aging"), "aging");
    auto& a = c.aging;
    r.get("f_D_Ts", a.f_D_Ts);
    r.get("f_D_Ts_per_ue", a.f_D_Ts_per_ue);
    r.get("T_s_ms", a.T_s_ms);
    r.get("tau_c", a.tau_c);
    r.get("design_f_D_Ts_max", a.design_f_D_Ts_max);
    r.finish();
  }
  {
    detail::Reader r(sub("estimation"), "estimation");
    r.get("tau_p", c.estimation.tau_p);
    r.get("pilot_power_dBm", c.estimation.pilot_power_dBm);
    r.finish();
  }
  {
    detail::Reader r(sub("uplink"), "uplink");
    auto& u = c.uplink;
    r.get("schemes", u.schemes);
    r.get("power_modes", u.power_modes);
    r.get("p_dBm", u.p_dBm);
    r.get("sc_trials", u.sc_trials);
    r.get("sc_candidates", u.sc_candidates);
    r.get("sc_serving", u.sc_serving);
    r.finish();
  }
  {
    detail::Reader r(sub("downlink"), "downlink");
    r.get("schemes", c.downlink.schemes);
    r.get("power_modes", c.downlink.power_modes);
    r.get("p_dBm", c.downlink.p_dBm);
    r.finish();
  }
  {
    detail::Reader r(sub("power"), "power");
    auto& p = c.power;
    r.get("enabled", p.enabled);
    r.get("pa_efficiency", p.pa_efficiency);
    r.get("P_ap_W", p.P_ap_W);
    r.get("P_ue_W", p.P_ue_W);
    r.get("P_0_W", p.P_0_W);
    r.get("P_bt_W_per_Gbps", p.P_bt_W_per_Gbps);
    r.get("bandwidth_MHz", p.bandwidth_MHz);
    r.get("normalized_snr", p.normalized_snr);
    r.finish();
  }
  {
    detail::Reader r(sub("run"), "run");
    auto& s = c.run;
    r.get("drops", s.drops);
    r.get("seed", s.seed);
    r.get("threads", s.threads);
    r.get("oracle_trials", s.oracle_trials);
    r.get("oracle_tolerance", s.oracle_tolerance);
    r.get("out_dir", s.out_dir);
    r.finish();
  }
  validate(c);
  return c;
}

inline RunConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file, "cannot open configuration file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(file, std::string("parse error: ") + e.what());
  }
  return config_from_json(j);
}

/// Applies "a.b=value" to a JSON document. The value is parsed as JSON when
/// possible (numbers, booleans, arrays) and taken as a string otherwise.
inline void apply_override(nlohmann::json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(assignment, "override must look like section.key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    value = text;
  }
  nlohmann::json* node = &j;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object()) throw ConfigError(path, "cannot descend into a non-object");
    node = &(*node)[parts[i]];
    if (node->is_null()) *node = nlohmann::json::object();
  }
  (*node)[parts.back()] = value;
}

}  // namespace cfmimo
