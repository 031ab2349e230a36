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

#include "cfmimo/aging.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/downlink.hpp"
#include "cfmimo/energy.hpp"
#include "cfmimo/estimation.hpp"
#include "cfmimo/montecarlo.hpp"
#include "cfmimo/parallel.hpp"
#include "cfmimo/scenario.hpp"
#include "cfmimo/smallcell.hpp"
#include "cfmimo/stats.hpp"
#include "cfmimo/uplink.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace cfmimo {

inline constexpr const char* kVersion = "1.0.0";

inline int resolved_tau_c(const RunConfig& cfg) {
  return cfg.aging.design_f_D_Ts_max > 0.0 ? design_tau_c(cfg.aging.design_f_D_Ts_max)
                                           : cfg.aging.tau_c;
}

inline FrameConfig frame_of(const RunConfig& cfg) {
  FrameConfig f;
  f.tau_c = resolved_tau_c(cfg);
  f.tau_p = cfg.estimation.tau_p;
  f.T_s = cfg.T_s();
  return f;
}

inline std::uint64_t drop_seed(const RunConfig& cfg, std::size_t drop) {
  return derive_seed(cfg.run.seed, Stream::drop, {drop});
}

/// Everything computed from the large-scale statistics of one drop.
struct DropModel {
  std::uint64_t seed = 0;
  Drop drop;
  SpatialCorrelation corr;
  FrameConfig frame;
  AgingProfile aging;
  PilotAssignment pilots;
  EstimationStatistics st;
  Grid<CMatrix> factors;  // filled when requested

  OracleModel oracle() const { return {st, factors, pilots, aging, frame}; }
};

inline DropModel build_drop_model(const RunConfig& cfg, std::size_t drop, bool with_factors) {
  DropModel m;
  m.seed = drop_seed(cfg, drop);
  const SystemDims dims{cfg.scenario.L, cfg.scenario.K, cfg.scenario.N};
  m.drop = generate_drop(dims, cfg.scenario.area_side_m, m.seed, cfg.scenario.shadowing);
  const AngularSpread spread = cfg.scenario.uncorrelated
                                   ? AngularSpread::uncorrelated_fading()
                                   : AngularSpread::degrees(cfg.scenario.asd_deg);
  m.corr = build_correlation(dims, m.drop.geometry, m.drop.fading, spread);
  m.frame = frame_of(cfg);
  if (cfg.aging.f_D_Ts_per_ue.empty()) {
    m.aging = aging_profile(m.frame, dims.K, cfg.aging.f_D_Ts);
  } else {
    m.aging = aging_profile(m.frame, std::span<const double>(cfg.aging.f_D_Ts_per_ue));
  }
  m.pilots = assign_pilots(dims.K, m.frame.tau_p, m.seed, cfg.pilot_power());
  m.st = estimation_stats(m.corr, m.drop.fading, m.pilots, m.aging, m.frame, cfg.sigma2());
  if (with_factors) m.factors = correlation_factors(m.corr);
  return m;
}

using SchemeKey = std::pair<std::string, std::string>;  // (scheme, power mode)

struct EnergyOutcome {
  std::string power_mode;
  double se_sum = 0.0;
  double p_total = 0.0;
  double ee = 0.0;
};

struct DropOutcome {
  std::uint64_t seed = 0;
  std::map<SchemeKey, std::vector<double>> se;  // per-UE SE
  std::vector<EnergyOutcome> energy;
};

inline bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

inline bool needs_factors(const RunConfig& cfg) {
  return contains(cfg.uplink.schemes, "sc") && cfg.scenario.N > 1;
}

/// Closed-form evaluation of every configured scheme and power mode on one drop.
inline DropOutcome run_drop(const RunConfig& cfg, std::size_t drop) {
  const DropModel m = build_drop_model(cfg, drop, needs_factors(cfg));
  DropOutcome out;
  out.seed = m.seed;
  const RMatrix& beta = m.drop.fading.beta;
  const std::size_t K = cfg.scenario.K;

  std::map<std::string, UplinkPowerControl> ul_pc;
  std::map<std::string, DownlinkPowerControl> dl_pc;
  std::map<std::string, SEResult> lsfd_by_mode;
  std::map<std::string, SEResult> coh_by_mode;

  std::optional<std::vector<std::size_t>> sc_serving;
  SmallCellOptions sco;
  sco.trials = cfg.uplink.sc_trials;
  sco.candidates = cfg.uplink.sc_candidates;
  sco.seed = derive_seed(m.seed, Stream::smallcell);

  // Full power first, so SC SCCPC can reuse the full-power serving APs.
  std::vector<std::string> ul_modes = cfg.uplink.power_modes;
  std::stable_sort(ul_modes.begin(), ul_modes.end(),
                   [](const std::string& a, const std::string& b) { return a == "full" && b != "full"; });
  for (const std::string& mode : ul_modes) {
    const UplinkPowerControl cf_pc =
        mode == "full" ? UplinkPowerControl::full(K, cfg.p_u())
                       : UplinkPowerControl{uplink_sccpc_cf(beta), cfg.p_u()};
    ul_pc[mode] = cf_pc;
    if (contains(cfg.uplink.schemes, "lsfd")) {
      SEResult r = lsfd_sinr(m.st, m.pilots, m.aging, cf_pc, m.frame);
      out.se[{"lsfd", mode}] = r.se;
      lsfd_by_mode[mode] = std::move(r);
    }
    if (contains(cfg.uplink.schemes, "mf")) {
      out.se[{"mf", mode}] = mf_sinr(m.st, m.pilots, m.aging, cf_pc, m.frame).se;
    }
    if (contains(cfg.uplink.schemes, "sc")) {
      if (mode == "full") {
        SEResult r = smallcell_se(m.st, m.factors, m.drop.fading, m.pilots, m.aging, cf_pc,
                                  m.frame, sco);
        sc_serving = r.serving_ap;
        out.se[{"sc", mode}] = r.se;
      } else {
        std::vector<std::size_t> serving;
        if (sc_serving) {
          serving = *sc_serving;
        } else {
          serving = smallcell_se(m.st, m.factors, m.drop.fading, m.pilots, m.aging,
                                 UplinkPowerControl::full(K, cfg.p_u()), m.frame, sco)
                        .serving_ap;
        }
        const UplinkPowerControl sc_pc{uplink_sccpc_sc(beta, serving), cfg.p_u()};
        std::optional<std::vector<std::size_t>> fixed;
        if (cfg.uplink.sc_serving == "full_power") fixed = serving;
        out.se[{"sc", mode}] =
            smallcell_se(m.st, m.factors, m.drop.fading, m.pilots, m.aging, sc_pc, m.frame, sco, fixed).se;
      }
    }
  }

  for (const std::string& mode : cfg.downlink.power_modes) {
    const DownlinkPowerControl pc = mode == "full" ? downlink_full_power(m.st, cfg.p_d())
                                                   : downlink_sccpc(m.st, beta, cfg.p_d());
    dl_pc[mode] = pc;
    if (contains(cfg.downlink.schemes, "coherent")) {
      SEResult r = downlink_coherent(m.st, m.pilots, m.aging, pc, m.frame);
      out.se[{"coherent", mode}] = r.se;
      coh_by_mode[mode] = std::move(r);
    }
    if (contains(cfg.downlink.schemes, "noncoherent")) {
      out.se[{"noncoherent", mode}] = downlink_noncoherent(m.st, m.pilots, m.aging, pc, m.frame).se;
    }
  }

  if (cfg.power.enabled) {
    const PowerModelParams pm = cfg.power_model();
    for (const auto& [mode, lsfd] : lsfd_by_mode) {
      const auto coh = coh_by_mode.find(mode);
      if (coh == coh_by_mode.end()) continue;
      EnergyOutcome e;
      e.power_mode = mode;
      e.se_sum = sum_se(lsfd.se, coh->second.se);
      const PowerBreakdown pb =
          total_power(pm, m.frame, ul_pc[mode].eta, cfg.p_u(), dl_pc[mode].mu, m.st.tr_Q,
                      cfg.p_d(), cfg.sigma2(), cfg.scenario.N, e.se_sum);
      e.p_total = pb.total;
      e.ee = energy_efficiency(pm, e.se_sum, pb.total);
      out.energy.push_back(e);
    }
  }
  return out;
}

struct StatWithError {
  double value = 0.0;
  double stderr_ = 0.0;
};

struct SchemeSummary {
  CdfSummary cdf;
  StatWithError median, p05, mean;
};

struct EnergySummary {
  StatWithError ee, p_total, se_sum;
};

struct ExperimentResult {
  RunConfig config;
  std::vector<DropOutcome> drops;
  std::map<SchemeKey, SchemeSummary> schemes;
  std::map<std::string, EnergySummary> energy;  // by power mode
};

namespace detail {

// Bootstrap over drops for quantile standard errors.
inline StatWithError bootstrap_quantile(const std::vector<std::vector<double>>& per_drop, double q,
                                        std::uint64_t seed, int reps = 200) {
  std::vector<double> all;
  for (const auto& d : per_drop) all.insert(all.end(), d.begin(), d.end());
  StatWithError s;
  s.value = quantile(all, q);
  if (per_drop.size() < 2) {
    s.stderr_ = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  Rng rng(derive_seed(seed, Stream::bootstrap, {static_cast<std::uint64_t>(q * 1e6)}));
  std::vector<double> est;
  std::uniform_int_distribution<std::size_t> pick(0, per_drop.size() - 1);
  for (int r = 0; r < reps; ++r) {
    std::vector<double> sample;
    sample.reserve(all.size());
    for (std::size_t i = 0; i < per_drop.size(); ++i) {
      const auto& d = per_drop[pick(rng.engine())];
      sample.insert(sample.end(), d.begin(), d.end());
    }
    est.push_back(quantile(std::move(sample), q));
  }
  const double m = mean(est);
  double v = 0.0;
  for (double x : est) v += (x - m) * (x - m);
  s.stderr_ = std::sqrt(v / static_cast<double>(reps - 1));
  return s;
}

inline StatWithError mean_with_error(const std::vector<double>& v) {
  return {mean(v), standard_error(v)};
}

}  // namespace detail

/// Runs every drop (in parallel) and aggregates per-UE SE distributions.
inline ExperimentResult run_experiment(const RunConfig& cfg) {
  validate(cfg);
  ExperimentResult res;
  res.config = cfg;
  res.drops.resize(cfg.run.drops);
  parallel_for(cfg.run.drops, cfg.run.threads,
               [&](std::size_t d) { res.drops[d] = run_drop(cfg, d); });

  std::map<SchemeKey, std::vector<std::vector<double>>> per_drop;
  std::map<std::string, std::vector<EnergyOutcome>> energy;
  for (const auto& d : res.drops) {
    for (const auto& [key, se] : d.se) per_drop[key].push_back(se);
    for (const auto& e : d.energy) energy[e.power_mode].push_back(e);
  }
  for (const auto& [key, drops] : per_drop) {
    std::vector<double> all;
    for (const auto& v : drops) all.insert(all.end(), v.begin(), v.end());
    SchemeSummary s;
    s.cdf = summarize(all);
    s.median = detail::bootstrap_quantile(drops, 0.5, cfg.run.seed);
    s.p05 = detail::bootstrap_quantile(drops, 0.05, cfg.run.seed);
    s.mean = detail::mean_with_error(all);
    res.schemes[key] = std::move(s);
  }
  for (const auto& [mode, list] : energy) {
    std::vector<double> ee, pt, ss;
    for (const auto& e : list) {
      ee.push_back(e.ee);
      pt.push_back(e.p_total);
      ss.push_back(e.se_sum);
    }
    res.energy[mode] = {detail::mean_with_error(ee), detail::mean_with_error(pt),
                        detail::mean_with_error(ss)};
  }
  return res;
}

inline const std::vector<std::string>& sweep_axes() {
  static const std::vector<std::string> v{"f_D_Ts", "N", "L", "tau_p", "asd"};
  return v;
}

/// Returns a copy of cfg with one sweep axis set.
inline RunConfig with_axis(RunConfig cfg, const std::string& axis, double value) {
  auto as_count = [&](const char* what) {
    if (!(value >= 1.0) || value != std::floor(value)) {
      throw ConfigError(axis, std::string(what) + " values must be positive integers");
    }
    return static_cast<std::size_t>(value);
  };
  if (axis == "f_D_Ts") {
    cfg.aging.f_D_Ts = value;
    cfg.aging.f_D_Ts_per_ue.clear();
  } else if (axis == "N") {
    cfg.scenario.N = as_count("N");
  } else if (axis == "L") {
    cfg.scenario.L = as_count("L");
  } else if (axis == "tau_p") {
    cfg.estimation.tau_p = static_cast<int>(as_count("tau_p"));
  } else if (axis == "asd") {
    cfg.scenario.asd_deg = value;
    cfg.scenario.uncorrelated = false;
  } else {
    throw ConfigError(axis, "unknown sweep axis");
  }
  validate(cfg);
  return cfg;
}

struct SweepPoint {
  double value = 0.0;
  ExperimentResult result;
};

/// Runs the experiment at every axis value. Drop seeds depend only on the
/// drop index, so all points share the same random streams.
inline std::vector<SweepPoint> run_sweep(const RunConfig& cfg, const std::string& axis,
                                         const std::vector<double>& values) {
  if (values.empty()) throw ConfigError(axis, "sweep needs at least one value");
  std::vector<RunConfig> cfgs;
  for (double v : values) cfgs.push_back(with_axis(cfg, axis, v));
  std::vector<SweepPoint> out;
  for (std::size_t i = 0; i < values.size(); ++i) out.push_back({values[i], run_experiment(cfgs[i])});
  return out;
}

struct EnergyPoint {
  std::size_t L = 0;
  EnergySummary summary;
};

/// Mean total EE per number of APs. Only the schemes entering SE_sum are run.
inline std::vector<EnergyPoint> ee_vs_L_sweep(RunConfig cfg, const std::vector<std::size_t>& Ls,
                                              const std::string& power_mode = "full") {
  if (Ls.empty()) throw ConfigError("L", "sweep needs at least one value");
  cfg.uplink.schemes = {"lsfd"};
  cfg.downlink.schemes = {"coherent"};
  cfg.uplink.power_modes = {power_mode};
  cfg.downlink.power_modes = {power_mode};
  cfg.power.enabled = true;
  std::vector<EnergyPoint> out;
  for (std::size_t L : Ls) {
    const ExperimentResult r = run_experiment(with_axis(cfg, "L", static_cast<double>(L)));
    out.push_back({L, r.energy.at(power_mode)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracle cross-check on one drop

struct OracleCheckRow {
  std::string check;
  std::size_t k = 0;
  int n = 0;
  double closed_form = 0.0;
  double empirical = 0.0;
  double stderr_ = 0.0;
  double rel_error = 0.0;
  bool pass = false;
};

inline std::vector<int> oracle_instants(const FrameConfig& frame) {
  std::vector<int> v;
  for (int off : {0, 10, 40}) {
    if (frame.lambda() + off <= frame.tau_c) v.push_back(frame.lambda() + off);
  }
  return v;
}

/// Compares every closed-form SINR on drop 0 (full power) with its Monte
/// Carlo estimate at the instants lambda, lambda + 10 and lambda + 40.
/// The small-cell rate is checked when N = 1.
inline std::vector<OracleCheckRow> run_oracle_checks(const RunConfig& cfg, std::size_t trials,
                                                     double tolerance) {
  const DropModel m = build_drop_model(cfg, 0, true);
  const std::vector<int> instants = oracle_instants(m.frame);
  OracleOptions opts;
  opts.trials = trials;
  opts.seed = derive_seed(cfg.run.seed, Stream::trial);
  opts.threads = cfg.run.threads;
  const std::size_t K = cfg.scenario.K;
  const UplinkPowerControl pc = UplinkPowerControl::full(K, cfg.p_u());
  std::vector<OracleCheckRow> rows;
  auto add = [&](const std::string& name, std::size_t k, int n, double cf, double emp, double se) {
    OracleCheckRow r{name, k, n, cf, emp, se, std::fabs(emp - cf) / std::fabs(cf), false};
    r.pass = r.rel_error <= tolerance;
    rows.push_back(r);
  };

  const SEResult lsfd = lsfd_sinr(m.st, m.pilots, m.aging, pc, m.frame);
  const WeightFn lsfd_w = [&](std::size_t k, int n) {
    return lsfd_weights(m.st, m.pilots, m.aging, pc, m.frame, k, n);
  };
  for (const auto& e : uplink_oracle(m.oracle(), pc, lsfd_w, instants, opts)) {
    add("uplink_lsfd", e.k, e.n, lsfd.sinr_at(e.k, e.n), e.sinr, e.sinr_se);
  }
  const SEResult mf = mf_sinr(m.st, m.pilots, m.aging, pc, m.frame);
  const CVector a = mf_weights(m.st.L);
  const WeightFn mf_w = [&](std::size_t, int) { return a; };
  for (const auto& e : uplink_oracle(m.oracle(), pc, mf_w, instants, opts)) {
    add("uplink_mf", e.k, e.n, mf.sinr_at(e.k, e.n), e.sinr, e.sinr_se);
  }

  const DownlinkPowerControl dpc = downlink_full_power(m.st, cfg.p_d());
  const SEResult coh = downlink_coherent(m.st, m.pilots, m.aging, dpc, m.frame);
  const SEResult nc = downlink_noncoherent(m.st, m.pilots, m.aging, dpc, m.frame);
  const DownlinkOracleResult dl = downlink_oracle(m.oracle(), dpc, instants, opts);
  for (const auto& e : dl.estimates) {
    add("downlink_coherent", e.k, e.n, coh.sinr_at(e.k, e.n), e.sinr_coh, e.sinr_coh_se);
    add("downlink_noncoherent", e.k, e.n, nc.sinr_at(e.k, e.n), e.sinr_nc, e.sinr_nc_se);
  }
  for (std::size_t l = 0; l < dl.ap_power.size(); ++l) {
    OracleCheckRow r{"downlink_ap_power", l, 0, cfg.p_d(), dl.ap_power[l], dl.ap_power_se[l],
                     std::fabs(dl.ap_power[l] - cfg.p_d()) / cfg.p_d(), false};
    r.pass = dl.ap_power[l] <= cfg.p_d() + 3.0 * dl.ap_power_se[l];
    rows.push_back(r);
  }

  if (cfg.scenario.N == 1) {
    SmallCellOptions sco;
    const SEResult sc = smallcell_se(m.st, m.factors, m.drop.fading, m.pilots, m.aging, pc, m.frame, sco);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k < K; ++k) pairs.emplace_back(k, sc.serving_ap[k]);
    for (const auto& e : smallcell_oracle(m.oracle(), m.drop.fading, pc, pairs, instants, opts)) {
      const double cf = std::log2(1.0 + sc.sinr_at(e.k, e.n));
      add("smallcell_rate", e.k, e.n, cf, e.rate_conditional, e.rate_conditional_se);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Output

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline const char* kCsvHeader = "axis_value,scheme,power_mode,statistic,value,stderr\n";

inline void append_summary_rows(std::ostringstream& os, const std::string& axis_value,
                                const ExperimentResult& r, bool full_grid,
                                const std::string& only_scheme = "") {
  for (const auto& [key, s] : r.schemes) {
    if (!only_scheme.empty() && key.first != only_scheme) continue;
    const std::string prefix = axis_value + "," + key.first + "," + key.second + ",";
    if (full_grid) {
      for (std::size_t i = 0; i < s.cdf.levels.size(); ++i) {
        char level[32];
        std::snprintf(level, sizeof level, "q%.2f", s.cdf.levels[i]);
        os << prefix << level << "," << fmt(s.cdf.values[i]) << ",nan\n";
      }
    }
    os << prefix << "median," << fmt(s.median.value) << "," << fmt(s.median.stderr_) << "\n";
    os << prefix << "p05," << fmt(s.p05.value) << "," << fmt(s.p05.stderr_) << "\n";
    os << prefix << "mean," << fmt(s.mean.value) << "," << fmt(s.mean.stderr_) << "\n";
  }
  if (!only_scheme.empty()) return;
  for (const auto& [mode, e] : r.energy) {
    const std::string prefix = axis_value + ",energy," + mode + ",";
    os << prefix << "ee_bit_per_J," << fmt(e.ee.value) << "," << fmt(e.ee.stderr_) << "\n";
    os << prefix << "p_total_W," << fmt(e.p_total.value) << "," << fmt(e.p_total.stderr_) << "\n";
    os << prefix << "se_sum," << fmt(e.se_sum.value) << "," << fmt(e.se_sum.stderr_) << "\n";
  }
}

inline std::string oracle_report_csv(const std::vector<OracleCheckRow>& rows) {
  std::ostringstream os;
  os << "check,k,n,closed_form,empirical,stderr,rel_error,pass\n";
  for (const auto& r : rows) {
    os << r.check << "," << r.k << "," << r.n << "," << fmt(r.closed_form) << ","
       << fmt(r.empirical) << "," << fmt(r.stderr_) << "," << fmt(r.rel_error) << ","
       << (r.pass ? "true" : "false") << "\n";
  }
  return os.str();
}

inline nlohmann::json run_manifest(const RunConfig& cfg, const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["config"] = to_json(cfg);
  j["resolved"] = {{"tau_c", resolved_tau_c(cfg)},
                   {"sigma2_W", cfg.sigma2()},
                   {"p_u_W", cfg.p_u()},
                   {"p_d_W", cfg.p_d()},
                   {"pilot_power_W", cfg.pilot_power()}};
  j["seed"] = cfg.run.seed;
  j["drops"] = cfg.run.drops;
  j["versions"] = {{"cfmimo", kVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                   {"compiler", __VERSION__}};
  j["outputs"] = outputs;
  return j;
}

/// Files are staged in memory and written only once everything succeeded.
class OutputSet {
 public:
  void add(std::string name, std::string content) {
    files_.emplace_back(std::move(name), std::move(content));
  }
  std::vector<std::string> names() const {
    std::vector<std::string> v;
    for (const auto& f : files_) v.push_back(f.first);
    return v;
  }
  void write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : files_) {
      const auto tmp = dir / (name + ".tmp");
      {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
      }
      std::filesystem::rename(tmp, dir / name);
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

inline void add_cdf_files(OutputSet& out, const ExperimentResult& r) {
  std::vector<std::string> schemes;
  for (const auto& [key, s] : r.schemes) {
    if (!contains(schemes, key.first)) schemes.push_back(key.first);
  }
  for (const auto& scheme : schemes) {
    std::ostringstream os;
    os << kCsvHeader;
    append_summary_rows(os, "", r, true, scheme);
    out.add("cdf_" + scheme + ".csv", os.str());
  }
  if (!r.energy.empty()) {
    std::ostringstream os;
    os << kCsvHeader;
    for (const auto& [mode, e] : r.energy) {
      os << ",energy," << mode << ",ee_bit_per_J," << fmt(e.ee.value) << "," << fmt(e.ee.stderr_) << "\n";
      os << ",energy," << mode << ",p_total_W," << fmt(e.p_total.value) << "," << fmt(e.p_total.stderr_) << "\n";
      os << ",energy," << mode << ",se_sum," << fmt(e.se_sum.value) << "," << fmt(e.se_sum.stderr_) << "\n";
    }
    out.add("energy.csv", os.str());
  }
}

inline std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream os;
  os << kCsvHeader;
  for (const auto& p : points) append_summary_rows(os, fmt(p.value), p.result, false);
  return os.str();
}

}  // namespace cfmimo
