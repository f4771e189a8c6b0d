#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "kronsample/dense_sampler.hpp"
#include "kronsample/diag_sampler.hpp"
#include "kronsample/errors.hpp"
#include "kronsample/mimo.hpp"
#include "kronsample/model.hpp"
#include "kronsample/oracle.hpp"
#include "kronsample/random_sampler.hpp"
#include "kronsample/recon.hpp"
#include "kronsample/rng.hpp"

namespace kronsample {

enum class ExperimentKind { synthetic_dense, synthetic_diag, mimo, oracle_compare };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::synthetic_dense: return "synthetic-dense";
    case ExperimentKind::synthetic_diag: return "synthetic-diag";
    case ExperimentKind::mimo: return "mimo";
    case ExperimentKind::oracle_compare: return "oracle-compare";
  }
  return "unknown";
}

struct MimoParams {
  Index users = 0;
  Index grid_x = 0;
  Index grid_y = 0;
  Index spreading = 0;
  Index budget = 0;          // sensor budget of the single design
  Index symbol_periods = 400;
  double delta_x = 0.5;
  double delta_y = 0.5;
  double angle_span_deg = 60.0;
  double power_min = 0.25;
  double power_max = 4.0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::synthetic_dense;
  std::string name;                // experiment label; defaults to the kind
  std::vector<Index> dims;         // N_i
  std::vector<Index> widths;       // K_i, dense core
  Index core_width = 0;            // K_c, diagonal core
  std::vector<Index> slack;        // alpha_i (dense) / extra kept rows (diag)
  Index privileged = -1;           // diag rank-carrying domain; -1 = largest
  std::vector<Index> l_sweep;      // sensor budgets
  Index realizations = 1;
  Index random_draws = 100;        // baseline draws per sweep point
  std::uint64_t seed = 0;
  bool complex_factors = false;    // synthetic factor entries
  std::vector<double> snr_db;      // mimo sweep
  MimoParams mimo;

  std::string label() const { return name.empty() ? to_string(kind) : name; }
};

// Structural and feasibility validation that does not need realized
// factors; bad configs surface before any work starts.
inline void validate(const ExperimentConfig& cfg) {
  if (cfg.realizations < 1) throw infeasible_error("config: realizations must be >= 1");
  if (cfg.random_draws < 1) throw infeasible_error("config: random_draws must be >= 1");
  if (cfg.kind == ExperimentKind::mimo) {
    const MimoParams& p = cfg.mimo;
    if (p.users < 1 || p.grid_x < 1 || p.grid_y < 1 || p.spreading < 1) {
      throw infeasible_error("config: mimo counts must be positive");
    }
    if (p.symbol_periods < 1) throw infeasible_error("config: symbol_periods must be >= 1");
    if (cfg.snr_db.empty()) throw infeasible_error("config: snr_db sweep is empty");
    if (p.budget < p.users + 2) {
      throw infeasible_error("config: mimo budget below identifiability minimum");
    }
    if (p.budget > p.grid_x + p.grid_y + p.spreading) {
      throw infeasible_error("config: mimo budget exceeds sensor count");
    }
    return;
  }
  if (cfg.dims.empty()) throw infeasible_error("config: dims is empty");
  for (Index n : cfg.dims) {
    if (n < 1) throw infeasible_error("config: dims must be positive");
  }
  if (cfg.l_sweep.empty()) throw infeasible_error("config: L sweep is empty");
  const bool diag_core = cfg.core_width > 0;
  Index min_keep = 0, total = 0;
  if (diag_core) {
    if (!cfg.widths.empty()) {
      throw infeasible_error("config: give either widths or core_width, not both");
    }
    if (cfg.privileged >= static_cast<Index>(cfg.dims.size())) {
      throw infeasible_error("config: privileged domain out of range");
    }
    // Assumes no structural zeros in the factors; rechecked per realization.
    min_keep = cfg.core_width + static_cast<Index>(cfg.dims.size()) - 1;
  } else {
    if (cfg.widths.size() != cfg.dims.size()) {
      throw infeasible_error("config: one width per domain required");
    }
    for (std::size_t i = 0; i < cfg.dims.size(); ++i) {
      if (cfg.widths[i] < 1 || cfg.widths[i] >= cfg.dims[i]) {
        throw infeasible_error("config: widths must satisfy 1 <= K_i < N_i");
      }
      const Index alpha = cfg.slack.empty() ? 0 : cfg.slack[i];
      min_keep += cfg.widths[i] + alpha;
    }
  }
  if (!cfg.slack.empty() && cfg.slack.size() != cfg.dims.size()) {
    throw infeasible_error("config: one slack per domain required");
  }
  for (Index n : cfg.dims) total += n;
  for (Index l : cfg.l_sweep) {
    if (l < min_keep || l > total) {
      throw infeasible_error("config: sweep budget " + std::to_string(l) +
                             " outside feasible range [" + std::to_string(min_keep) +
                             ", " + std::to_string(total) + "]");
    }
  }
}

struct ResultRow {
  std::string experiment;
  Index realization = 0;
  Index sensors = 0;  // L
  Index samples = 0;  // L~
  std::string method;
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  double mse = 0.0;
  double mse_db_norm = std::numeric_limits<double>::quiet_NaN();
};

struct DesignReport {
  std::string experiment;
  Index realization = 0;
  Index sensors = 0;
  Index samples = 0;
  std::vector<std::vector<Index>> selection;
  std::vector<double> objective_trace;
  double objective = 0.0;
  double fp = 0.0;
  double gamma = 0.0;
  double mse = 0.0;
  bool rank_ok = false;
  double wall_time_s = 0.0;
};

struct RunResult {
  std::vector<ResultRow> rows;
  std::vector<DesignReport> reports;
};

namespace detail {

inline bool row_less(const ResultRow& a, const ResultRow& b) {
  auto key_snr = [](double s) { return std::isnan(s) ? -1e300 : s; };
  if (a.experiment != b.experiment) return a.experiment < b.experiment;
  if (a.realization != b.realization) return a.realization < b.realization;
  if (a.sensors != b.sensors) return a.sensors < b.sensors;
  if (a.method != b.method) return a.method < b.method;
  return key_snr(a.snr_db) < key_snr(b.snr_db);
}

inline std::string format_field(double v, const char* fmt = "%.12g") {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

// Nearest-rank percentile index for a sorted sample of size n.
inline std::size_t percentile_rank(std::size_t n, double pct) {
  const double r = std::ceil(pct / 100.0 * static_cast<double>(n));
  const auto idx = static_cast<std::size_t>(std::max(1.0, r)) - 1;
  return std::min(idx, n - 1);
}

template <typename Fn>
void parallel_realizations(Index m_total, Index threads, Fn fn) {
  if (threads < 1) threads = 1;
  threads = std::min(threads, m_total);
  if (threads <= 1) {
    for (Index m = 0; m < m_total; ++m) fn(m);
    return;
  }
  std::exception_ptr first_error;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (Index w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      for (Index m = w; m < m_total; m += threads) {
        try {
          fn(m);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Random cardinality-feasible selection that is also identifiable; draws
// failing the Fisher-matrix rank check are rejected and redrawn.
template <typename Constraints>
std::pair<Selection, EstimationMetrics> random_identifiable(
    const MultilinearModel& model, const Constraints& cons, Rng& rng,
    Index max_attempts = 10000) {
  for (Index attempt = 0; attempt < max_attempts; ++attempt) {
    Selection sel = random_kron_sampler(model, cons, rng);
    EstimationMetrics met = metrics(subselect(model, sel));
    if (met.identifiable) return {std::move(sel), met};
  }
  throw identifiability_error("random baseline: no identifiable draw found");
}

inline MultilinearModel draw_synthetic_model(const ExperimentConfig& cfg, Rng& rng) {
  std::vector<Matrix> factors;
  const bool diag_core = cfg.kind == ExperimentKind::synthetic_diag ||
                         (cfg.kind == ExperimentKind::oracle_compare && cfg.core_width > 0);
  for (std::size_t i = 0; i < cfg.dims.size(); ++i) {
    const Index k = diag_core ? cfg.core_width : cfg.widths[i];
    factors.push_back(rng.gaussian_matrix(cfg.dims[i], k, cfg.complex_factors));
  }
  return MultilinearModel::ground(
      std::move(factors), diag_core ? CoreKind::diagonal : CoreKind::dense);
}

}  // namespace detail

// CSV with one row per (realization, budget, method[, snr]); rows are
// sorted on the full key first, so output bytes do not depend on
// scheduling.
inline void write_results_csv(const std::string& path, std::vector<ResultRow> rows) {
  std::sort(rows.begin(), rows.end(), detail::row_less);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_results_csv: cannot open " + path);
  out << "experiment,realization,L,L_tilde,method,snr_db,mse,mse_db_norm\n";
  for (const ResultRow& r : rows) {
    out << r.experiment << ',' << r.realization << ',' << r.sensors << ','
        << r.samples << ',' << r.method << ',' << detail::format_field(r.snr_db, "%g")
        << ',' << detail::format_field(r.mse) << ','
        << detail::format_field(r.mse_db_norm) << '\n';
  }
  if (!out) throw std::runtime_error("write_results_csv: write failed for " + path);
}

// Greedy design plus random baseline percentiles over an L sweep, repeated
// over independently drawn models. Realization m derives everything from
// seed + m, so results do not depend on the thread count.
inline RunResult run_synthetic(const ExperimentConfig& cfg, Index threads = 1) {
  validate(cfg);
  if (cfg.kind != ExperimentKind::synthetic_dense &&
      cfg.kind != ExperimentKind::synthetic_diag) {
    throw std::invalid_argument("run_synthetic: config kind mismatch");
  }
  const bool diag_core = cfg.kind == ExperimentKind::synthetic_diag;
  std::vector<RunResult> slots(cfg.realizations);
  detail::parallel_realizations(cfg.realizations, threads, [&](Index m) {
    RunResult& slot = slots[m];
    Rng rng(cfg.seed + static_cast<std::uint64_t>(m));
    const MultilinearModel model = detail::draw_synthetic_model(cfg, rng);
    const double mse_full = metrics(model).mse;
    for (Index l : cfg.l_sweep) {
      const auto t0 = std::chrono::steady_clock::now();
      GreedyTrace trace;
      if (diag_core) {
        DiagConstraints cons(model, l, cfg.privileged, cfg.slack);
        trace = greedy_diag(model, cons);
      } else {
        DenseConstraints cons(model, l, cfg.slack);
        trace = greedy_dense(model, cons);
      }
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (!trace.rank_ok) {
        throw identifiability_error("greedy design lost rank at L = " + std::to_string(l));
      }
      const EstimationMetrics met = metrics(subselect(model, trace.selection));
      if (!met.identifiable) {
        throw identifiability_error("greedy design unidentifiable at L = " + std::to_string(l));
      }
      ResultRow row{cfg.label(), m, l, met.samples, "greedy",
                    std::numeric_limits<double>::quiet_NaN(), met.mse,
                    10.0 * std::log10(met.mse / mse_full)};
      slot.rows.push_back(row);
      std::vector<double> objective_trace;
      for (const GreedyStep& s : trace.steps) objective_trace.push_back(s.objective);
      slot.reports.push_back({cfg.label(), m, l, met.samples, trace.selection.kept(),
                              std::move(objective_trace), trace.objective_final,
                              trace.fp_final, trace.gamma, met.mse, trace.rank_ok,
                              wall});

      struct Draw { double mse; Index samples; };
      std::vector<Draw> draws;
      for (Index d = 0; d < cfg.random_draws; ++d) {
        std::pair<Selection, EstimationMetrics> got =
            diag_core ? detail::random_identifiable(
                            model, DiagConstraints(model, l, cfg.privileged, cfg.slack), rng)
                      : detail::random_identifiable(
                            model, DenseConstraints(model, l, cfg.slack), rng);
        draws.push_back({got.second.mse, got.second.samples});
      }
      std::sort(draws.begin(), draws.end(), [](const Draw& a, const Draw& b) {
        if (a.mse != b.mse) return a.mse < b.mse;
        return a.samples < b.samples;
      });
      const struct { const char* name; double pct; } marks[] = {
          {"random_p10", 10.0}, {"random_p50", 50.0}, {"random_p90", 90.0}};
      for (const auto& mk : marks) {
        const Draw& pick = draws[detail::percentile_rank(draws.size(), mk.pct)];
        slot.rows.push_back({cfg.label(), m, l, pick.samples, mk.name,
                             std::numeric_limits<double>::quiet_NaN(), pick.mse,
                             10.0 * std::log10(pick.mse / mse_full)});
      }
    }
  });
  RunResult out;
  for (RunResult& slot : slots) {
    out.rows.insert(out.rows.end(), slot.rows.begin(), slot.rows.end());
    out.reports.insert(out.reports.end(), slot.reports.begin(), slot.reports.end());
  }
  std::sort(out.rows.begin(), out.rows.end(), detail::row_less);
  return out;
}

// Fixed-budget uplink study over an SNR sweep. The greedy design is
// simulated symbol by symbol; the random envelope reports the closed-form
// LS error of the best and worst identifiable draw. Noise and symbols use
// one fresh generator per trial with trial-indexed seeds shared across SNR
// points, so curves of one realization differ only by the noise scale.
inline RunResult run_mimo(const ExperimentConfig& cfg, Index threads = 1) {
  validate(cfg);
  if (cfg.kind != ExperimentKind::mimo) {
    throw std::invalid_argument("run_mimo: config kind mismatch");
  }
  const MimoParams& p = cfg.mimo;
  std::vector<RunResult> slots(cfg.realizations);
  detail::parallel_realizations(cfg.realizations, threads, [&](Index m) {
    RunResult& slot = slots[m];
    Rng rng(cfg.seed + static_cast<std::uint64_t>(m));
    const MimoScene scene =
        build_mimo_scene(p.users, p.grid_x, p.grid_y, p.spreading, rng, p.delta_x,
                         p.delta_y, p.angle_span_deg, p.power_min, p.power_max);
    const MultilinearModel model = build_mimo_model(scene);
    DiagConstraints cons(model, p.budget, cfg.privileged, cfg.slack);
    const auto t0 = std::chrono::steady_clock::now();
    const GreedyTrace trace = greedy_diag(model, cons);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!trace.rank_ok) {
      throw identifiability_error("mimo greedy design lost Khatri-Rao rank");
    }
    const MultilinearModel sampled = subselect(model, trace.selection);
    const EstimationMetrics met = metrics(sampled);
    if (!met.identifiable) {
      throw identifiability_error("mimo greedy design unidentifiable");
    }
    std::vector<double> objective_trace;
    for (const GreedyStep& s : trace.steps) objective_trace.push_back(s.objective);
    slot.reports.push_back({cfg.label(), m, p.budget, met.samples,
                            trace.selection.kept(), std::move(objective_trace),
                            trace.objective_final, trace.fp_final, trace.gamma,
                            met.mse, trace.rank_ok, wall});

    // Mean received sample power: codes and steering entries have unit
    // magnitude, so column k of the sampled system has squared norm
    // prod_d T_d(k,k) and users contribute power-weighted columns.
    double signal_power = 0.0;
    {
      std::vector<Matrix> grams;
      for (Index i = 0; i < sampled.order(); ++i) {
        grams.push_back(grammian(sampled.factor(i)));
      }
      for (Index k = 0; k < scene.users; ++k) {
        double col = 1.0;
        for (const Matrix& g : grams) col *= g(k, k).real();
        signal_power += scene.powers[k] * col;
      }
      signal_power /= static_cast<double>(met.samples);
    }

    double tr_best = std::numeric_limits<double>::infinity();
    double tr_worst = 0.0;
    Index samples_best = 0, samples_worst = 0;
    for (Index d = 0; d < cfg.random_draws; ++d) {
      const auto got = detail::random_identifiable(model, cons, rng);
      if (got.second.mse < tr_best) {
        tr_best = got.second.mse;
        samples_best = got.second.samples;
      }
      if (got.second.mse > tr_worst) {
        tr_worst = got.second.mse;
        samples_worst = got.second.samples;
      }
    }

    const std::uint64_t noise_base =
        cfg.seed + 1000000007ull * static_cast<std::uint64_t>(m + 1);
    for (double snr : cfg.snr_db) {
      const double sigma = std::sqrt(signal_power / std::pow(10.0, snr / 10.0));
      double acc = 0.0;
      for (Index t = 0; t < p.symbol_periods; ++t) {
        Rng nr(noise_base + static_cast<std::uint64_t>(t));
        const Vector g = draw_mimo_symbols(scene, nr);
        Vector y = multilinear_apply(sampled, g);
        for (Index i = 0; i < y.size(); ++i) y(i) += sigma * nr.cnormal();
        acc += (ls_estimate_diag(sampled, y) - g).squaredNorm();
      }
      const double mse_mc = acc / static_cast<double>(p.symbol_periods);
      const double s2 = sigma * sigma;
      slot.rows.push_back({cfg.label(), m, p.budget, met.samples, "greedy", snr,
                           mse_mc, std::numeric_limits<double>::quiet_NaN()});
      slot.rows.push_back({cfg.label(), m, p.budget, samples_best, "random_best",
                           snr, s2 * tr_best, std::numeric_limits<double>::quiet_NaN()});
      slot.rows.push_back({cfg.label(), m, p.budget, samples_worst, "random_worst",
                           snr, s2 * tr_worst, std::numeric_limits<double>::quiet_NaN()});
    }
  });
  RunResult out;
  for (RunResult& slot : slots) {
    out.rows.insert(out.rows.end(), slot.rows.begin(), slot.rows.end());
    out.reports.insert(out.reports.end(), slot.reports.begin(), slot.reports.end());
  }
  std::sort(out.rows.begin(), out.rows.end(), detail::row_less);
  return out;
}

struct OracleInstance {
  Index realization = 0;
  Index budget = 0;
  double greedy_objective = 0.0;
  double optimal_objective = 0.0;
  double ratio = 0.0;
  double greedy_fp = 0.0;
  double optimal_fp = 0.0;
  double gamma = 0.0;
  bool bound_ok = false;
  std::uint64_t evaluated = 0;
};

struct OracleCompareSummary {
  std::vector<OracleInstance> instances;
  double median_ratio = 0.0;
  double min_ratio = 0.0;
  Index bound_violations = 0;
  bool diag_core = false;
};

// Greedy vs brute force on instances small enough to enumerate: one
// instance per (realization, budget) pair of the config.
inline OracleCompareSummary run_oracle_compare(const ExperimentConfig& cfg,
                                               std::uint64_t max_evals = 1000000) {
  validate(cfg);
  if (cfg.kind != ExperimentKind::oracle_compare) {
    throw std::invalid_argument("run_oracle_compare: config kind mismatch");
  }
  OracleCompareSummary out;
  out.diag_core = cfg.core_width > 0;
  for (Index m = 0; m < cfg.realizations; ++m) {
    Rng rng(cfg.seed + static_cast<std::uint64_t>(m));
    const MultilinearModel model = detail::draw_synthetic_model(cfg, rng);
    for (Index l : cfg.l_sweep) {
      OracleInstance inst;
      inst.realization = m;
      inst.budget = l;
      if (out.diag_core) {
        DiagConstraints cons(model, l, cfg.privileged, cfg.slack);
        const GreedyTrace trace = greedy_diag(model, cons);
        const OracleResult opt = exhaustive_oracle(model, cons, max_evals);
        inst.greedy_objective = trace.objective_final;
        inst.optimal_objective = opt.objective;
        inst.greedy_fp = trace.fp_final;
        inst.optimal_fp = opt.fp;
        inst.gamma = trace.gamma;
        inst.evaluated = opt.evaluated;
      } else {
        DenseConstraints cons(model, l, cfg.slack);
        const GreedyTrace trace = greedy_dense(model, cons);
        const OracleResult opt = exhaustive_oracle(model, cons, max_evals);
        inst.greedy_objective = trace.objective_final;
        inst.optimal_objective = opt.objective;
        inst.greedy_fp = trace.fp_final;
        inst.optimal_fp = opt.fp;
        inst.gamma = trace.gamma;
        inst.evaluated = opt.evaluated;
      }
      inst.ratio = inst.optimal_objective > 0.0
                       ? inst.greedy_objective / inst.optimal_objective
                       : 1.0;
      inst.bound_ok = inst.greedy_fp <= inst.gamma * inst.optimal_fp * (1.0 + 1e-9);
      out.instances.push_back(inst);
    }
  }
  std::vector<double> ratios;
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (const OracleInstance& inst : out.instances) {
    ratios.push_back(inst.ratio);
    out.min_ratio = std::min(out.min_ratio, inst.ratio);
    if (!inst.bound_ok) ++out.bound_violations;
  }
  std::sort(ratios.begin(), ratios.end());
  const std::size_t n = ratios.size();
  out.median_ratio = n % 2 == 1 ? ratios[n / 2]
                                : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
  return out;
}

}  // namespace kronsample
