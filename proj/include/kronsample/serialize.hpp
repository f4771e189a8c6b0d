#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kronsample/experiments.hpp"
#include "kronsample/recon.hpp"

namespace kronsample {

inline ExperimentKind kind_from_string(const std::string& s) {
  if (s == "synthetic-dense") return ExperimentKind::synthetic_dense;
  if (s == "synthetic-diag") return ExperimentKind::synthetic_diag;
  if (s == "mimo") return ExperimentKind::mimo;
  if (s == "oracle-compare") return ExperimentKind::oracle_compare;
  throw infeasible_error("config: unknown experiment kind '" + s + "'");
}

inline void from_json(const nlohmann::json& j, MimoParams& p) {
  p.users = j.at("users").get<Index>();
  p.grid_x = j.at("grid_x").get<Index>();
  p.grid_y = j.at("grid_y").get<Index>();
  p.spreading = j.at("spreading").get<Index>();
  p.budget = j.at("L").get<Index>();
  p.symbol_periods = j.value("symbol_periods", Index{400});
  p.delta_x = j.value("delta_x", 0.5);
  p.delta_y = j.value("delta_y", 0.5);
  p.angle_span_deg = j.value("angle_span_deg", 60.0);
  p.power_min = j.value("power_min", 0.25);
  p.power_max = j.value("power_max", 4.0);
}

inline void to_json(nlohmann::json& j, const MimoParams& p) {
  j = {{"users", p.users},
       {"grid_x", p.grid_x},
       {"grid_y", p.grid_y},
       {"spreading", p.spreading},
       {"L", p.budget},
       {"symbol_periods", p.symbol_periods},
       {"delta_x", p.delta_x},
       {"delta_y", p.delta_y},
       {"angle_span_deg", p.angle_span_deg},
       {"power_min", p.power_min},
       {"power_max", p.power_max}};
}

namespace detail {

// Sweeps are written either as an explicit array or as from/to/step.
inline std::vector<Index> parse_sweep(const nlohmann::json& j) {
  std::vector<Index> out;
  if (j.is_array()) {
    out = j.get<std::vector<Index>>();
  } else if (j.is_object()) {
    const Index from = j.at("from").get<Index>();
    const Index to = j.at("to").get<Index>();
    const Index step = j.value("step", Index{1});
    if (step < 1) throw infeasible_error("config: sweep step must be >= 1");
    for (Index l = from; l <= to; l += step) out.push_back(l);
  } else {
    throw infeasible_error("config: L_sweep must be an array or from/to/step");
  }
  return out;
}

}  // namespace detail

inline void from_json(const nlohmann::json& j, ExperimentConfig& cfg) {
  cfg.kind = kind_from_string(j.at("experiment").get<std::string>());
  cfg.name = j.value("name", std::string{});
  cfg.dims = j.value("N", std::vector<Index>{});
  cfg.widths = j.value("K", std::vector<Index>{});
  cfg.core_width = j.value("K_c", Index{0});
  cfg.slack = j.value("slack", std::vector<Index>{});
  cfg.privileged = j.value("privileged_domain", Index{-1});
  if (j.contains("L_sweep")) cfg.l_sweep = detail::parse_sweep(j.at("L_sweep"));
  cfg.realizations = j.value("realizations", Index{1});
  cfg.random_draws = j.value("random_draws", Index{100});
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.complex_factors = j.value("complex_factors", false);
  cfg.snr_db = j.value("snr_db", std::vector<double>{});
  if (j.contains("mimo")) cfg.mimo = j.at("mimo").get<MimoParams>();
}

inline void to_json(nlohmann::json& j, const ExperimentConfig& cfg) {
  j = {{"experiment", to_string(cfg.kind)},
       {"realizations", cfg.realizations},
       {"random_draws", cfg.random_draws},
       {"seed", cfg.seed}};
  if (!cfg.name.empty()) j["name"] = cfg.name;
  if (!cfg.dims.empty()) j["N"] = cfg.dims;
  if (!cfg.widths.empty()) j["K"] = cfg.widths;
  if (cfg.core_width > 0) j["K_c"] = cfg.core_width;
  if (!cfg.slack.empty()) j["slack"] = cfg.slack;
  if (cfg.privileged >= 0) j["privileged_domain"] = cfg.privileged;
  if (!cfg.l_sweep.empty()) j["L_sweep"] = cfg.l_sweep;
  if (cfg.complex_factors) j["complex_factors"] = true;
  if (!cfg.snr_db.empty()) j["snr_db"] = cfg.snr_db;
  if (cfg.kind == ExperimentKind::mimo) j["mimo"] = cfg.mimo;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw infeasible_error("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
    return j.get<ExperimentConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw infeasible_error("config: " + std::string(e.what()));
  }
}

inline void to_json(nlohmann::json& j, const EstimationMetrics& m) {
  j = {{"fp", m.fp},
       {"lambda_min", m.lambda_min},
       {"lambda_max", m.lambda_max},
       {"L", m.sensors},
       {"L_tilde", m.samples},
       {"identifiable", m.identifiable}};
  if (m.identifiable) {
    j["mse"] = m.mse;
    j["mse_proxy_lower"] = m.proxy_lower;
    j["mse_proxy_upper"] = m.proxy_upper;
  } else {
    j["mse"] = nullptr;
    j["unidentifiable"] = true;
  }
}

inline void to_json(nlohmann::json& j, const DesignReport& r) {
  j = {{"experiment", r.experiment},
       {"realization", r.realization},
       {"L", r.sensors},
       {"L_tilde", r.samples},
       {"selection", r.selection},
       {"objective_trace", r.objective_trace},
       {"objective", r.objective},
       {"fp", r.fp},
       {"gamma", r.gamma},
       {"mse", r.mse},
       {"rank_ok", r.rank_ok},
       {"wall_time_s", r.wall_time_s}};
}

inline void to_json(nlohmann::json& j, const OracleInstance& inst) {
  j = {{"realization", inst.realization},
       {"L", inst.budget},
       {"greedy_objective", inst.greedy_objective},
       {"optimal_objective", inst.optimal_objective},
       {"ratio", inst.ratio},
       {"greedy_fp", inst.greedy_fp},
       {"optimal_fp", inst.optimal_fp},
       {"gamma", inst.gamma},
       {"fp_bound_ok", inst.bound_ok},
       {"evaluated", inst.evaluated}};
}

inline void to_json(nlohmann::json& j, const OracleCompareSummary& s) {
  j = {{"core", s.diag_core ? "diagonal" : "dense"},
       {"instances", s.instances},
       {"median_ratio", s.median_ratio},
       {"min_ratio", s.min_ratio},
       {"fp_bound_violations", s.bound_violations}};
}

inline void write_report_json(const std::string& path, const ExperimentConfig& cfg,
                              const std::vector<DesignReport>& reports) {
  nlohmann::json j = {{"experiment", cfg.label()},
                      {"config", cfg},
                      {"reports", reports}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report_json: cannot open " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write_report_json: write failed for " + path);
}

}  // namespace kronsample
