// Release gate. Each check prints exactly one PASS/FAIL line and the exit
// status is the number of failures. Checks cover the factorized algebra,
// surrogate structure, greedy guarantees, reconstruction accuracy, the
// shipped study configs, large-instance runtime, and CLI determinism.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "helpers.hpp"

namespace {

using Check = std::pair<bool, std::string>;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

double vec_rel_err(const ks::Vector& got, const ks::Vector& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

double lower_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

// Identities of the factorized code paths against entry-by-entry
// materializations, over random real and complex instances of order 1..3.
Check check_algebraic_identities() {
  ks::Rng rng(11001);
  double worst = 0.0;
  const int instances = 120;
  for (int it = 0; it < instances; ++it) {
    const bool cplx = it % 2 == 1;
    const int order = 1 + it % 3;
    std::vector<ks::Index> dims, widths;
    ks::Index min_dim = 8;
    for (int d = 0; d < order; ++d) {
      const ks::Index n = 2 + static_cast<ks::Index>(rng.below(7));
      const ks::Index wcap = std::min<ks::Index>(3, n - 1);
      dims.push_back(n);
      widths.push_back(1 + static_cast<ks::Index>(rng.below(wcap)));
      min_dim = std::min(min_dim, n);
    }
    const ks::Index kc =
        1 + static_cast<ks::Index>(rng.below(std::min<ks::Index>(3, min_dim - 1)));
    const ks::MultilinearModel dense = random_dense_model(rng, dims, widths, cplx);
    const ks::MultilinearModel diag = random_diag_model(rng, dims, kc, cplx);

    // Mode-product application equals the materialized system product.
    {
      const ks::Vector g = random_core(rng, dense.core_size(), cplx);
      worst = std::max(worst, vec_rel_err(ks::multilinear_apply(dense, g),
                                          materialize_system(dense) * g));
      const ks::Vector h = random_core(rng, diag.core_size(), cplx);
      worst = std::max(worst, vec_rel_err(ks::multilinear_apply(diag, h),
                                          materialize_system(diag) * h));
    }
    // Gram of a row-selected Kronecker system is the Kronecker product of
    // the per-domain Grams.
    {
      std::vector<ks::Matrix> grams;
      for (ks::Index i = 0; i < dense.order(); ++i) {
        grams.push_back(ks::grammian(dense.factor(i)));
      }
      worst = std::max(worst, rel_err(materialize_kron(grams),
                                      ks::grammian(materialize_system(dense))));
    }
    // Gram of a Khatri-Rao system is the Hadamard product of the Grams.
    {
      ks::Matrix had = ks::Matrix::Ones(kc, kc);
      for (ks::Index i = 0; i < diag.order(); ++i) {
        had = had.cwiseProduct(ks::grammian(diag.factor(i)));
      }
      worst = std::max(worst, rel_err(had, ks::grammian(materialize_system(diag))));
    }
    // Frame potential factorizations for both core kinds.
    {
      const ks::Selection full = ks::Selection::full(dims);
      worst = std::max(
          worst, rel_err(ks::fp_factorized(dense, full),
                         ks::frame_potential(materialize_system(dense))));
      worst = std::max(
          worst, rel_err(ks::objective_P(diag, full),
                         ks::frame_potential(materialize_system(diag))));
    }
    // Factorized least squares equals the materialized pseudoinverse on a
    // random identifiable subgrid.
    {
      ks::Index total = 0, min_total = 0;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        total += dims[i];
        min_total += widths[i];
      }
      const ks::Index budget =
          min_total + static_cast<ks::Index>(rng.below(total - min_total + 1));
      const ks::Selection sel = ks::random_kron_sampler(dims, widths, budget, rng);
      const ks::MultilinearModel sub = ks::subselect(dense, sel);
      const ks::Vector y = random_core(rng, sub.sample_total(), true);
      worst = std::max(worst,
                       vec_rel_err(ks::ls_estimate_dense(sub, y),
                                   oracle_pinv(materialize_system(sub)) * y));
    }
    {
      std::vector<ks::Index> min_keep(dims.size(), 1);
      ks::Index priv = 0;
      for (std::size_t i = 1; i < dims.size(); ++i) {
        if (dims[i] > dims[priv]) priv = static_cast<ks::Index>(i);
      }
      min_keep[priv] = kc;
      ks::Index total = 0, min_total = 0;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        total += dims[i];
        min_total += min_keep[i];
      }
      const ks::Index budget =
          min_total + static_cast<ks::Index>(rng.below(total - min_total + 1));
      const ks::Selection sel = ks::random_kron_sampler(dims, min_keep, budget, rng);
      const ks::MultilinearModel sub = ks::subselect(diag, sel);
      const ks::Vector y = random_core(rng, sub.sample_total(), true);
      worst = std::max(worst,
                       vec_rel_err(ks::ls_estimate_diag(sub, y),
                                   oracle_pinv(materialize_system(sub)) * y));
    }
  }
  return {worst <= 1e-9,
          fmt("max rel err %.2e (limit 1e-9) over %d instances", worst, instances)};
}

// Exhaustive normalization, monotonicity, and diminishing-returns scan of
// both removal surrogates over every subset of a small grid.
Check check_surrogate_submodularity() {
  ks::Rng rng(11002);
  double worst_violation = 0.0;
  std::uint64_t violations = 0, triples = 0;
  const int instances = 20;
  for (int it = 0; it < instances; ++it) {
    const bool diag_core = it >= instances / 2;
    const bool cplx = it % 2 == 1;
    const ks::Index n0 = 4 + static_cast<ks::Index>(rng.below(2));
    const ks::Index n1 = 3 + static_cast<ks::Index>(rng.below(3));
    const std::vector<ks::Index> dims = {n0, n1};
    const ks::MultilinearModel model =
        diag_core
            ? random_diag_model(rng, dims, 1 + static_cast<ks::Index>(rng.below(2)), cplx)
            : random_dense_model(
                  rng, dims,
                  {1 + static_cast<ks::Index>(rng.below(2)),
                   1 + static_cast<ks::Index>(rng.below(2))},
                  cplx);
    const int bits = static_cast<int>(n0 + n1);
    const std::uint32_t masks = 1u << bits;
    std::vector<double> val(masks);
    double scale = 1.0;
    for (std::uint32_t s = 0; s < masks; ++s) {
      std::vector<std::vector<ks::Index>> removed(2);
      for (int b = 0; b < bits; ++b) {
        if (s >> b & 1u) {
          if (b < n0) removed[0].push_back(b);
          else removed[1].push_back(b - n0);
        }
      }
      val[s] = diag_core ? ks::objective_Q(model, removed)
                         : ks::objective_G(model, removed);
      scale = std::max(scale, std::abs(val[s]));
    }
    const double eps = 1e-10 * scale;
    const auto flag = [&](double shortfall) {
      if (shortfall > eps) {
        ++violations;
        worst_violation = std::max(worst_violation, shortfall / scale);
      }
    };
    flag(std::abs(val[0]));
    for (std::uint32_t s = 0; s < masks; ++s) {
      for (int x = 0; x < bits; ++x) {
        if (s >> x & 1u) continue;
        const std::uint32_t sx = s | 1u << x;
        flag(val[s] - val[sx]);
        for (int y = 0; y < bits; ++y) {
          if (y == x || (s >> y & 1u)) continue;
          const std::uint32_t sy = s | 1u << y;
          ++triples;
          flag((val[(sx | sy)] - val[sy]) - (val[sx] - val[s]));
        }
      }
    }
  }
  return {violations == 0,
          fmt("%llu violations beyond 1e-10 slack (worst %.2e) over %llu triples, "
              "%d instances",
              static_cast<unsigned long long>(violations), worst_violation,
              static_cast<unsigned long long>(triples), instances)};
}

struct OracleBundle {
  ks::OracleCompareSummary dense;
  ks::OracleCompareSummary diag;
};

std::optional<OracleBundle>& oracle_bundle() {
  static std::optional<OracleBundle> bundle;
  return bundle;
}

const OracleBundle& run_oracles() {
  if (!oracle_bundle()) {
    OracleBundle b;
    b.dense = ks::run_oracle_compare(
        ks::load_config(std::string(CONFIG_DIR) + "/oracle_dense.json"));
    b.diag = ks::run_oracle_compare(
        ks::load_config(std::string(CONFIG_DIR) + "/oracle_diag.json"));
    oracle_bundle() = std::move(b);
  }
  return *oracle_bundle();
}

// Greedy objective at least half the exhaustive optimum on every instance
// small enough to enumerate.
Check check_greedy_near_optimality() {
  const OracleBundle& b = run_oracles();
  const std::size_t count = b.dense.instances.size() + b.diag.instances.size();
  std::uint64_t max_space = 0;
  for (const auto& inst : b.dense.instances) max_space = std::max(max_space, inst.evaluated);
  for (const auto& inst : b.diag.instances) max_space = std::max(max_space, inst.evaluated);
  const bool pass = count >= 50 && max_space <= 100000 &&
                    b.dense.min_ratio >= 0.5 && b.diag.min_ratio >= 0.5;
  return {pass,
          fmt("%zu instances, min ratio dense %.4f diag %.4f (need 0.5), medians "
              "%.4f/%.4f, largest search space %llu",
              count, b.dense.min_ratio, b.diag.min_ratio, b.dense.median_ratio,
              b.diag.median_ratio, static_cast<unsigned long long>(max_space))};
}

// Frame potential of the greedy design within the gamma factor of the
// optimum: required for dense cores, informational for diagonal cores.
Check check_frame_potential_bound() {
  const OracleBundle& b = run_oracles();
  return {b.dense.bound_violations == 0,
          fmt("dense violations %d of %zu (must be 0); diag violations %d of %zu "
              "(informational)",
              static_cast<int>(b.dense.bound_violations), b.dense.instances.size(),
              static_cast<int>(b.diag.bound_violations), b.diag.instances.size())};
}

// Noiseless least squares recovers the core exactly and the Monte-Carlo
// error matches the closed-form trace prediction for both core kinds.
Check check_reconstruction_accuracy() {
  ks::Rng rng(11005);
  double worst_rt = 0.0, worst_mc = 0.0;
  for (int it = 0; it < 2; ++it) {
    const bool cplx = it == 1;
    const ks::MultilinearModel dense =
        random_dense_model(rng, {6, 5, 4}, {2, 3, 2}, cplx);
    const ks::MultilinearModel diag = random_diag_model(rng, {6, 5, 4}, 3, cplx);
    const ks::Selection sel_dense({{0, 2, 3, 5}, {1, 2, 4}, {0, 3}}, dense.dims());
    const ks::Selection sel_diag({{0, 1, 4, 5}, {0, 2, 3}, {1, 3}}, diag.dims());
    const ks::MultilinearModel sub_dense = ks::subselect(dense, sel_dense);
    const ks::MultilinearModel sub_diag = ks::subselect(diag, sel_diag);

    const ks::Vector gd = random_core(rng, sub_dense.core_size(), cplx);
    worst_rt = std::max(
        worst_rt, vec_rel_err(ks::ls_estimate_dense(
                                  sub_dense, ks::multilinear_apply(sub_dense, gd)),
                              gd));
    const ks::Vector gq = random_core(rng, sub_diag.core_size(), cplx);
    worst_rt = std::max(
        worst_rt, vec_rel_err(ks::ls_estimate_diag(
                                  sub_diag, ks::multilinear_apply(sub_diag, gq)),
                              gq));

    const double want_d = ks::metrics(sub_dense).mse;
    const double got_d = ks::monte_carlo_mse(sub_dense, gd, 2000, 5000 + it);
    worst_mc = std::max(worst_mc, std::abs(got_d - want_d) / want_d);
    const double want_q = ks::metrics(sub_diag).mse;
    const double got_q = ks::monte_carlo_mse(sub_diag, gq, 2000, 6000 + it);
    worst_mc = std::max(worst_mc, std::abs(got_q - want_q) / want_q);
  }
  return {worst_rt <= 1e-9 && worst_mc <= 0.10,
          fmt("noiseless round-trip err %.2e (limit 1e-9); Monte-Carlo vs closed "
              "form off by %.1f%% (limit 10%%)",
              worst_rt, 100.0 * worst_mc)};
}

struct SweepStats {
  double beat_fraction = 0.0;
  int median_plateau_runs = 0;
  int needed_plateaus = 0;
  bool monotone = true;
  bool samples_grow = true;
};

// Piecewise-linear interpolation of a (samples, dB) curve at a query sample
// count, linear in log(samples), clamped at both ends.
double interp_db(const std::vector<std::pair<double, double>>& curve, double s) {
  const double x = std::log(s);
  if (x <= curve.front().first) return curve.front().second;
  if (x >= curve.back().first) return curve.back().second;
  for (std::size_t j = 0; j + 1 < curve.size(); ++j) {
    if (x >= curve[j].first && x <= curve[j + 1].first) {
      const double span = curve[j + 1].first - curve[j].first;
      const double t = span > 0.0 ? (x - curve[j].first) / span : 0.0;
      return curve[j].second + t * (curve[j + 1].second - curve[j].second);
    }
  }
  return curve.back().second;
}

// Both methods spend the same sensor budgets but end up with different
// sample counts, so curves are compared in the (samples, dB) plane: each
// greedy point against the same realization's random-median curve
// interpolated at the greedy sample count.
SweepStats analyze_synthetic(const ks::ExperimentConfig& cfg, const ks::RunResult& res) {
  struct Point { ks::Index sensors; ks::Index samples; double db; };
  std::map<ks::Index, std::vector<Point>> greedy, p50;
  for (const ks::ResultRow& r : res.rows) {
    Point p{r.sensors, r.samples, r.mse_db_norm};
    if (r.method == "greedy") greedy[r.realization].push_back(p);
    else if (r.method == "random_p50") p50[r.realization].push_back(p);
  }
  SweepStats st;
  st.needed_plateaus = static_cast<int>(cfg.dims.size()) - 1;
  long beat = 0, total = 0;
  std::vector<int> plateau_runs;
  for (auto& [m, gpts] : greedy) {
    const auto by_sensors = [](const Point& a, const Point& b) {
      return a.sensors < b.sensors;
    };
    std::sort(gpts.begin(), gpts.end(), by_sensors);
    auto& rpts = p50.at(m);
    std::sort(rpts.begin(), rpts.end(), by_sensors);

    // Random-median reference curve, duplicate sample counts averaged.
    std::map<ks::Index, std::pair<double, int>> acc;
    for (const Point& p : rpts) {
      auto& [sum, n] = acc[p.samples];
      sum += p.db;
      ++n;
    }
    std::vector<std::pair<double, double>> curve;
    for (const auto& [s, sn] : acc) {
      curve.emplace_back(std::log(static_cast<double>(s)), sn.first / sn.second);
    }

    for (const Point& p : gpts) {
      ++total;
      if (p.db <= interp_db(curve, static_cast<double>(p.samples)) + 1e-9) ++beat;
    }

    // Staircase shape: dB never rises, sample count strictly grows, and the
    // interior alternates flat runs (steps of at most 0.5 dB) with risers.
    int runs = 0;
    bool in_run = false;
    for (std::size_t j = 0; j + 1 < gpts.size(); ++j) {
      const double drop = gpts[j].db - gpts[j + 1].db;
      if (drop < -1e-6) st.monotone = false;
      if (gpts[j + 1].samples <= gpts[j].samples) st.samples_grow = false;
      const bool interior = j > 0 && j + 2 < gpts.size();
      const bool flat = interior && drop <= 0.5;
      if (flat && !in_run) ++runs;
      in_run = flat;
    }
    plateau_runs.push_back(runs);
  }
  st.beat_fraction = static_cast<double>(beat) / static_cast<double>(total);
  std::sort(plateau_runs.begin(), plateau_runs.end());
  st.median_plateau_runs = plateau_runs[plateau_runs.size() / 2];
  return st;
}

// Desk-scale sweeps for both core kinds: the greedy curve stays at or below
// the random-baseline median at equal sample count on at least 70% of sweep
// points, decreases monotonically, and shows the staircase plateaus of a
// grid design.
Check check_synthetic_sweeps() {
  const ks::ExperimentConfig dense_cfg =
      ks::load_config(std::string(CONFIG_DIR) + "/desk_dense.json");
  const ks::ExperimentConfig diag_cfg =
      ks::load_config(std::string(CONFIG_DIR) + "/desk_diag.json");
  const SweepStats d = analyze_synthetic(dense_cfg, ks::run_synthetic(dense_cfg));
  const SweepStats q = analyze_synthetic(diag_cfg, ks::run_synthetic(diag_cfg));
  const auto good = [](const SweepStats& s) {
    return s.beat_fraction >= 0.70 && s.monotone && s.samples_grow &&
           s.median_plateau_runs >= s.needed_plateaus;
  };
  return {good(d) && good(q),
          fmt("at-or-below random median at equal samples: dense %.1f%% diag %.1f%% "
              "(need 70%%); staircase %s/%s plateau-run medians %d/%d (need %d)",
              100.0 * d.beat_fraction, 100.0 * q.beat_fraction,
              d.monotone && d.samples_grow ? "yes" : "NO",
              q.monotone && q.samples_grow ? "yes" : "NO", d.median_plateau_runs,
              q.median_plateau_runs, d.needed_plateaus)};
}

// Fixed-budget uplink study: reconstruction error strictly decreasing in
// SNR with the log-MSE slope of a linear least squares estimator.
Check check_mimo_snr_sweep() {
  const ks::ExperimentConfig cfg =
      ks::load_config(std::string(CONFIG_DIR) + "/desk_mimo.json");
  const ks::RunResult res = ks::run_mimo(cfg);
  struct Env { double greedy = 0.0, best = 0.0, worst = 0.0; };
  std::map<ks::Index, std::map<double, Env>> table;
  for (const ks::ResultRow& r : res.rows) {
    Env& e = table[r.realization][r.snr_db];
    if (r.method == "greedy") e.greedy = r.mse;
    else if (r.method == "random_best") e.best = r.mse;
    else if (r.method == "random_worst") e.worst = r.mse;
  }
  bool decreasing = true, slope_ok = true;
  double worst_slope = 0.0;
  int env_pts = 0, env_ok = 0;
  double worst_gap_db = -1e300;
  for (const auto& [m, curve] : table) {
    std::vector<double> xs, ys;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& [snr, e] : curve) {
      if (e.greedy >= prev) decreasing = false;
      prev = e.greedy;
      xs.push_back(snr);
      ys.push_back(std::log10(e.greedy));
      ++env_pts;
      if (e.greedy <= e.worst * (1.0 + 1e-9)) ++env_ok;
      worst_gap_db = std::max(worst_gap_db, 10.0 * std::log10(e.greedy / e.best));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      num += (xs[i] - mx) * (ys[i] - my);
      den += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = num / den;
    if (std::abs(slope) > std::abs(worst_slope)) worst_slope = slope;
    if (slope < -0.12 || slope > -0.08) slope_ok = false;
  }
  return {decreasing && slope_ok,
          fmt("strictly decreasing %s; worst slope %.4f dB-per-dB (need -0.12..-0.08); "
              "envelope: at or under worst-random %d/%d pts, at most %.2f dB over "
              "best-random (informational)",
              decreasing ? "yes" : "NO", worst_slope, env_ok, env_pts, worst_gap_db)};
}

// Full design sweeps on the large instances complete within the budgeted
// wall time for each engine.
Check check_large_instance_runtime() {
  using clock = std::chrono::steady_clock;
  const ks::ExperimentConfig dense_cfg =
      ks::load_config(std::string(CONFIG_DIR) + "/large_dense.json");
  ks::Rng rng_d(dense_cfg.seed);
  const ks::MultilinearModel dense = random_dense_model(
      rng_d, dense_cfg.dims, dense_cfg.widths, dense_cfg.complex_factors);
  bool ranks_ok = true;
  const auto t0 = clock::now();
  for (ks::Index l : dense_cfg.l_sweep) {
    const ks::DenseConstraints cons(dense, l, dense_cfg.slack);
    ranks_ok = ranks_ok && ks::greedy_dense(dense, cons).rank_ok;
  }
  const double dense_s = std::chrono::duration<double>(clock::now() - t0).count();

  const ks::ExperimentConfig diag_cfg =
      ks::load_config(std::string(CONFIG_DIR) + "/large_diag.json");
  ks::Rng rng_q(diag_cfg.seed);
  const ks::MultilinearModel diag = random_diag_model(
      rng_q, diag_cfg.dims, diag_cfg.core_width, diag_cfg.complex_factors);
  const auto t1 = clock::now();
  for (ks::Index l : diag_cfg.l_sweep) {
    const ks::DiagConstraints cons(diag, l, diag_cfg.privileged, diag_cfg.slack);
    ranks_ok = ranks_ok && ks::greedy_diag(diag, cons).rank_ok;
  }
  const double diag_s = std::chrono::duration<double>(clock::now() - t1).count();
  return {dense_s < 60.0 && diag_s < 60.0 && ranks_ok,
          fmt("dense sweep of %zu budgets in %.1fs, diagonal sweep of %zu budgets "
              "in %.1fs (limit 60s each); all designs identifiable: %s",
              dense_cfg.l_sweep.size(), dense_s, diag_cfg.l_sweep.size(), diag_s,
              ranks_ok ? "yes" : "NO")};
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// The installed CLI produces byte-identical results for repeated runs and
// for different thread counts.
Check check_cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "kronsample_acceptance";
  fs::remove_all(base);
  const std::string cfg = std::string(CONFIG_DIR) + "/smoke_dense.json";
  const char* runs[][2] = {{"r1", "1"}, {"r2", "1"}, {"r3", "4"}};
  for (const auto& r : runs) {
    const fs::path out = base / r[0];
    fs::create_directories(out);
    const std::string cmd = std::string(KRONSAMPLE_BIN) + " run --config " + cfg +
                            " --out " + out.string() + " --threads " + r[1] +
                            " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      return {false, fmt("CLI run failed (threads %s)", r[1])};
    }
  }
  const std::string a = read_bytes(base / "r1" / "results.csv");
  const std::string b = read_bytes(base / "r2" / "results.csv");
  const std::string c = read_bytes(base / "r3" / "results.csv");
  const bool report_there = fs::exists(base / "r1" / "report.json");
  fs::remove_all(base);
  return {a == b && a == c && report_there,
          fmt("3 CLI runs, results.csv %zu bytes, repeat identical: %s, 4-thread "
              "identical: %s, report.json present: %s",
              a.size(), a == b ? "yes" : "NO", a == c ? "yes" : "NO",
              report_there ? "yes" : "NO")};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    double limit_s;
    Check (*fn)();
  };
  const Entry entries[] = {
      {"algebraic-identities", 30.0, check_algebraic_identities},
      {"surrogate-submodularity", 120.0, check_surrogate_submodularity},
      {"greedy-near-optimality", 300.0, check_greedy_near_optimality},
      {"frame-potential-bound", 300.0, check_frame_potential_bound},
      {"reconstruction-accuracy", 60.0, check_reconstruction_accuracy},
      {"synthetic-sweeps-vs-random", 600.0, check_synthetic_sweeps},
      {"mimo-snr-sweep", 300.0, check_mimo_snr_sweep},
      {"large-instance-runtime", 130.0, check_large_instance_runtime},
      {"cli-determinism", 300.0, check_cli_determinism},
  };
  int failures = 0;
  int idx = 0;
  for (const Entry& e : entries) {
    ++idx;
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
      Check r = e.fn();
      pass = r.first;
      detail = std::move(r.second);
    } catch (const std::exception& ex) {
      detail = std::string("exception: ") + ex.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > e.limit_s) {
      pass = false;
      detail += fmt(" [EXCEEDED %.0fs time limit]", e.limit_s);
    }
    if (!pass) ++failures;
    std::printf("%s  %d %-27s [%6.1fs/%4.0fs]  %s\n", pass ? "PASS" : "FAIL", idx,
                e.name, secs, e.limit_s, detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/9 checks passed\n", 9 - failures);
  return failures;
}
