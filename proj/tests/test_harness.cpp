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
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cfmimo;

namespace {

RunConfig tiny() {
  RunConfig c = test::small_config(8, 4, 1, 40, 2, 0.002);
  c.run.drops = 6;
  c.uplink.sc_trials = 20;
  return c;
}

std::string all_csv(const ExperimentResult& r) {
  OutputSet out;
  add_cdf_files(out, r);
  std::ostringstream os;
  os << kCsvHeader;
  append_summary_rows(os, "", r, false);
  return os.str() + std::to_string(out.names().size());
}

}  // namespace

TEST_CASE("quantile convention", "[harness]") {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[static_cast<std::size_t>(i)] = 100.0 - i;
  CHECK(quantile(v, 0.05) == Catch::Approx(5.95).epsilon(1e-14));
  CHECK(quantile(v, 0.5) == Catch::Approx(50.5).epsilon(1e-14));
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 1.0) == 100.0);
  CHECK(quantile(std::vector<double>(7, 2.5), 0.05) == 2.5);
  CHECK_THROWS(quantile({}, 0.5));
  CHECK_THROWS(quantile({1.0}, 1.5));
  const auto s = summarize(v);
  CHECK(s.levels.size() == 101);
  CHECK(s.p05 == Catch::Approx(5.95));
}

TEST_CASE("configuration round trip and errors", "[harness]") {
  RunConfig c;
  c.scenario.L = 37;
  c.aging.f_D_Ts_per_ue.assign(c.scenario.K, 0.001);
  c.aging.f_D_Ts_per_ue[3] = 0.002;
  c.uplink.schemes = {"mf"};
  const RunConfig back = config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));

  nlohmann::json j = to_json(RunConfig{});
  j["scenario"]["Lx"] = 3;
  try {
    config_from_json(j);
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "scenario.Lx");
  }
  j = to_json(RunConfig{});
  j["extras"] = nlohmann::json::object();
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
  j = to_json(RunConfig{});
  j["scenario"]["L"] = "many";
  CHECK_THROWS_AS(config_from_json(j), ConfigError);

  j = to_json(RunConfig{});
  apply_override(j, "aging.f_D_Ts=0.004");
  apply_override(j, "uplink.schemes=[\"lsfd\"]");
  apply_override(j, "run.out_dir=results/a");
  const RunConfig o = config_from_json(j);
  CHECK(o.aging.f_D_Ts == 0.004);
  CHECK(o.uplink.schemes == std::vector<std::string>{"lsfd"});
  CHECK(o.run.out_dir == "results/a");
  CHECK_THROWS_AS(apply_override(j, "novalue"), ConfigError);
}

TEST_CASE("configuration validation", "[harness]") {
  RunConfig c;
  c.uplink.schemes.clear();
  c.downlink.schemes.clear();
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = RunConfig{};
  c.uplink.schemes = {"zf"};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = RunConfig{};
  c.estimation.tau_p = 200;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = RunConfig{};
  c.scenario.asd_deg = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.scenario.uncorrelated = true;
  CHECK_NOTHROW(validate(c));
  CHECK_THROWS_AS(with_axis(RunConfig{}, "speed", 1.0), ConfigError);
  CHECK_THROWS_AS(with_axis(RunConfig{}, "N", 1.5), ConfigError);
  CHECK_THROWS_AS(run_sweep(tiny(), "N", {}), ConfigError);
}

TEST_CASE("design block length overrides tau_c", "[harness]") {
  RunConfig c = tiny();
  c.aging.design_f_D_Ts_max = 0.002;
  CHECK(resolved_tau_c(c) == 191);
  CHECK(frame_of(c).tau_c == 191);
}

TEST_CASE("runs are reproducible", "[harness]") {
  RunConfig c = tiny();
  c.run.threads = 1;
  const std::string a = all_csv(run_experiment(c));
  c.run.threads = 3;
  const std::string b = all_csv(run_experiment(c));
  CHECK(a == b);
  c.run.seed = 2;
  CHECK(all_csv(run_experiment(c)) != a);
}

TEST_CASE("summary rows and output files", "[harness]") {
  const RunConfig c = tiny();
  const ExperimentResult r = run_experiment(c);
  CHECK(r.drops.size() == 6);
  CHECK(r.schemes.size() == 10);
  const auto& s = r.schemes.at({"lsfd", "full"});
  CHECK(s.cdf.values.size() == 101);
  CHECK(s.median.stderr_ >= 0.0);
  CHECK(r.energy.count("full") == 1);

  OutputSet out;
  add_cdf_files(out, r);
  out.add("manifest.json", run_manifest(c, out.names()).dump(2));
  const auto dir = std::filesystem::temp_directory_path() / "cfmimo_harness_test";
  std::filesystem::remove_all(dir);
  out.write(dir);
  for (const char* f : {"cdf_lsfd.csv", "cdf_mf.csv", "cdf_sc.csv", "cdf_coherent.csv",
                        "cdf_noncoherent.csv", "energy.csv", "manifest.json"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  std::ifstream in(dir / "cdf_lsfd.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "axis_value,scheme,power_mode,statistic,value,stderr");

  const nlohmann::json m = run_manifest(c, out.names());
  CHECK(m["seed"] == c.run.seed);
  CHECK(m["drops"] == 6);
  CHECK(m["resolved"]["tau_c"] == 40);
  CHECK(m["versions"]["cfmimo"] == kVersion);
  CHECK(m["outputs"].size() == 7);
  CHECK(config_from_json(m["config"]).scenario.L == 8);
  std::filesystem::remove_all(dir);
}

TEST_CASE("antenna sweep with and without pilot sharing", "[harness]") {
  RunConfig c = tiny();
  c.uplink.schemes = {"lsfd"};
  c.uplink.power_modes = {"full"};
  c.downlink.schemes = {"coherent"};
  c.downlink.power_modes = {"full"};
  for (int tau_p : {2, 4}) {
    c.estimation.tau_p = tau_p;
    const auto pts = run_sweep(c, "N", {1, 2, 4});
    REQUIRE(pts.size() == 3);
    for (std::size_t i = 1; i < 3; ++i) {
      CHECK(pts[i].result.schemes.at({"lsfd", "full"}).mean.value >
            pts[i - 1].result.schemes.at({"lsfd", "full"}).mean.value);
    }
    const std::string csv = sweep_csv(pts);
    CHECK(csv.find("\n4,lsfd,full,median,") != std::string::npos);
  }
}
