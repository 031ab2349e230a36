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
#include "cfmimo/cfmimo.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitOracle = 3;

nlohmann::json read_json(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw cfmimo::ConfigError(file, "cannot open configuration file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw cfmimo::ConfigError(file, std::string("parse error: ") + e.what());
  }
}

std::pair<std::string, std::vector<double>> parse_sweep(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos) throw cfmimo::ConfigError(arg, "sweep must look like axis=v1,v2,...");
  std::pair<std::string, std::vector<double>> out{arg.substr(0, eq), {}};
  std::stringstream ss(arg.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.second.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw cfmimo::ConfigError(out.first, "not a number: '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-free massive MIMO spectral and energy efficiency under channel aging"};
  std::string config_file;
  std::size_t drops = 0;
  std::uint64_t seed = 0;
  std::size_t oracle_trials = 0;
  std::string sweep;
  std::string out_dir;
  std::size_t threads = 0;
  std::vector<std::string> overrides;
  app.add_option("--config", config_file, "JSON configuration file");
  app.add_option("--drops", drops, "number of random drops");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--oracle", oracle_trials, "Monte Carlo trials for the oracle cross-check");
  app.add_option("--sweep", sweep, "axis=v1,v2,... with axis in f_D_Ts, N, L, tau_p, asd");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  app.add_option("--set", overrides, "override a config key, e.g. scenario.K=40");
  CLI11_PARSE(app, argc, argv);

  cfmimo::RunConfig cfg;
  try {
    nlohmann::json j = config_file.empty() ? cfmimo::to_json(cfmimo::RunConfig{}) : read_json(config_file);
    for (const auto& o : overrides) cfmimo::apply_override(j, o);
    if (app.count("--drops")) cfmimo::apply_override(j, "run.drops=" + std::to_string(drops));
    if (app.count("--seed")) cfmimo::apply_override(j, "run.seed=" + std::to_string(seed));
    if (app.count("--threads")) cfmimo::apply_override(j, "run.threads=" + std::to_string(threads));
    if (app.count("--oracle")) cfmimo::apply_override(j, "run.oracle_trials=" + std::to_string(oracle_trials));
    if (app.count("--out")) j["run"]["out_dir"] = out_dir;
    cfg = cfmimo::config_from_json(j);
  } catch (const cfmimo::ConfigError& e) {
    std::cerr << "config error at " << e.path() << ": " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    cfmimo::OutputSet out;
    bool oracle_ok = true;
    if (!sweep.empty()) {
      const auto [axis, values] = parse_sweep(sweep);
      const auto points = cfmimo::run_sweep(cfg, axis, values);
      out.add("sweep_" + axis + ".csv", cfmimo::sweep_csv(points));
    } else {
      const auto result = cfmimo::run_experiment(cfg);
      cfmimo::add_cdf_files(out, result);
      for (const auto& [key, s] : result.schemes) {
        std::cout << key.first << "/" << key.second << ": median " << s.median.value << ", p05 "
                  << s.p05.value << ", mean " << s.mean.value << "\n";
      }
      for (const auto& [mode, e] : result.energy) {
        std::cout << "energy/" << mode << ": " << e.ee.value / 1e6 << " Mbit/J\n";
      }
    }
    if (cfg.run.oracle_trials > 0) {
      const auto rows = cfmimo::run_oracle_checks(cfg, cfg.run.oracle_trials, cfg.run.oracle_tolerance);
      out.add("oracle_report.csv", cfmimo::oracle_report_csv(rows));
      std::size_t failed = 0;
      for (const auto& r : rows) failed += r.pass ? 0 : 1;
      std::cout << "oracle: " << rows.size() - failed << "/" << rows.size() << " checks within "
                << cfg.run.oracle_tolerance * 100.0 << "%\n";
      oracle_ok = failed == 0;
    }
    auto names = out.names();
    names.push_back("run_manifest.json");
    out.add("run_manifest.json", cfmimo::run_manifest(cfg, names).dump(2) + "\n");
    out.write(cfg.run.out_dir);
    return oracle_ok ? 0 : kExitOracle;
  } catch (const cfmimo::ConfigError& e) {
    std::cerr << "config error at " << e.path() << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
