#pragma once

#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "kronsample/errors.hpp"
#include "kronsample/greedy.hpp"
#include "kronsample/model.hpp"

namespace kronsample {

// Removal budget and per-domain removal caps for a dense-core design.
// Keeping at least width + slack rows per domain preserves a tall sampled
// factor with headroom against rank loss.
struct DenseConstraints {
  Index budget = 0;           // sensors to keep, L = sum |L_i|
  std::vector<Index> slack;   // alpha_i >= 0
  std::vector<Index> caps;    // max removals per domain, N_i - K_i - alpha_i

  DenseConstraints(const MultilinearModel& model, Index budget_,
                   std::vector<Index> slack_ = {})
      : budget(budget_), slack(std::move(slack_)) {
    if (model.core_kind() != CoreKind::dense) {
      throw std::invalid_argument("DenseConstraints: model core must be dense");
    }
    const Index r = model.order();
    if (slack.empty()) slack.assign(r, 0);
    if (static_cast<Index>(slack.size()) != r) {
      throw std::invalid_argument("DenseConstraints: one slack per domain");
    }
    Index min_keep = 0;
    for (Index i = 0; i < r; ++i) {
      if (slack[i] < 0) {
        throw std::invalid_argument("DenseConstraints: slack must be >= 0");
      }
      const Index cap = model.dim(i) - model.width(i) - slack[i];
      if (cap < 0) {
        throw infeasible_error("domain " + std::to_string(i) +
                               " cannot keep width + slack rows");
      }
      caps.push_back(cap);
      min_keep += model.width(i) + slack[i];
    }
    if (budget < min_keep) {
      throw infeasible_error("budget " + std::to_string(budget) +
                             " below minimum sensor count " +
                             std::to_string(min_keep));
    }
    if (budget > model.sensor_total()) {
      throw infeasible_error("budget exceeds available sensors");
    }
  }
};

// Frame potential of the sampled design, evaluated per factor:
// F(L) = prod_i || Psi_i(L_i)^H Psi_i(L_i) ||_F^2.
inline double fp_factorized(const MultilinearModel& model, const Selection& sel) {
  if (sel.dims() != model.dims()) {
    throw std::invalid_argument("fp_factorized: selection does not match model");
  }
  double f = 1.0;
  for (Index i = 0; i < model.order(); ++i) {
    f *= fp_of_gram(grammian_rows(model.factor(i), sel.kept(i)));
  }
  return f;
}

namespace detail {

// F_i(kept) read off the |<u_a,u_b>|^2 table.
inline double fp_from_table(const RealMatrix& absq, const std::vector<Index>& kept) {
  double f = 0.0;
  for (Index a : kept) {
    for (Index b : kept) f += absq(a, b);
  }
  return f;
}

inline RealMatrix abs2_table(const Matrix& u) {
  return row_inner_products(u).cwiseAbs2();
}

}  // namespace detail

// Removal surrogate G(S) = F(full grid) - F(grid minus S). Normalized so
// G(empty) == 0 exactly; evaluated entirely from the row inner-product
// tables, one per domain.
inline double objective_G(const MultilinearModel& model,
                          const std::vector<std::vector<Index>>& removed) {
  if (static_cast<Index>(removed.size()) != model.order()) {
    throw std::invalid_argument("objective_G: one removal set per domain");
  }
  double f_full = 1.0, f_kept = 1.0;
  for (Index i = 0; i < model.order(); ++i) {
    const RealMatrix absq = detail::abs2_table(model.factor(i));
    std::vector<char> drop(model.dim(i), 0);
    for (Index x : removed[i]) {
      if (x < 0 || x >= model.dim(i)) {
        throw std::invalid_argument("objective_G: removal index out of range");
      }
      if (drop[x]) throw std::invalid_argument("objective_G: duplicate removal");
      drop[x] = 1;
    }
    std::vector<Index> all(model.dim(i)), kept;
    std::iota(all.begin(), all.end(), Index{0});
    for (Index j = 0; j < model.dim(i); ++j) {
      if (!drop[j]) kept.push_back(j);
    }
    f_full *= detail::fp_from_table(absq, all);
    f_kept *= detail::fp_from_table(absq, kept);
  }
  return f_full - f_kept;
}

// Near-optimality factor of the frame-potential bound:
// gamma = (K * L_min^-2 * F(full) + 1) / 2 with K the total core width and
// L_min the smallest squared row norm over the selected grid, which for a
// Kronecker design factorizes over domains.
inline double fp_near_optimality_gamma(const MultilinearModel& model,
                                       const Selection& sel) {
  if (sel.dims() != model.dims()) {
    throw std::invalid_argument("fp_near_optimality_gamma: selection mismatch");
  }
  double f_full = 1.0;
  Index k_total = 0;
  double l_min = 1.0;
  for (Index i = 0; i < model.order(); ++i) {
    f_full *= frame_potential(model.factor(i));
    k_total += model.width(i);
    double dom_min = std::numeric_limits<double>::infinity();
    for (Index l : sel.kept(i)) {
      dom_min = std::min(dom_min, model.factor(i).row(l).squaredNorm());
    }
    l_min *= dom_min;
  }
  return 0.5 * (static_cast<double>(k_total) * f_full / (l_min * l_min) + 1.0);
}

// Greedy removal design for a dense core. Starts from the full grid and
// removes sensor_total - budget rows, each iteration taking the feasible
// removal with the largest surrogate increase (ties: lowest domain, then
// lowest row). Marginal gains come from cached per-domain frame potentials
// and row sums of the squared inner-product tables, so one candidate costs
// O(1) after the O(N_i) commit update.
inline GreedyTrace greedy_dense(const MultilinearModel& model,
                                const DenseConstraints& cons) {
  MultilinearModel::ground(model.factors(), model.core_kind());
  const Index r = model.order();
  const Index removals = model.sensor_total() - cons.budget;

  std::vector<RealMatrix> absq;
  std::vector<std::vector<Index>> kept(r);
  std::vector<RealVector> rowsum(r);
  std::vector<double> fp_dom(r);
  for (Index i = 0; i < r; ++i) {
    absq.push_back(detail::abs2_table(model.factor(i)));
    kept[i].resize(model.dim(i));
    std::iota(kept[i].begin(), kept[i].end(), Index{0});
    rowsum[i] = absq[i].rowwise().sum();
    fp_dom[i] = rowsum[i].sum();
  }
  double f_full = 1.0;
  for (Index i = 0; i < r; ++i) f_full *= fp_dom[i];

  // Objective recomputed as an ascending fold after every commit: each
  // per-domain fp only decreases, so the recorded G sequence is
  // non-decreasing even in floating point.
  auto objective_now = [&]() {
    double p = 1.0;
    for (Index i = 0; i < r; ++i) p *= fp_dom[i];
    return f_full - p;
  };

  GreedyTrace trace;
  trace.rank_ok = true;
  std::vector<Index> removed_count(r, 0);
  double objective_prev = 0.0;
  for (Index t = 0; t < removals; ++t) {
    Index best_dom = -1, best_elem = -1;
    double best_fp_cand = 0.0, best_value = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < r; ++i) {
      if (removed_count[i] >= cons.caps[i]) continue;
      double prod_others = 1.0;
      for (Index j = 0; j < r; ++j) {
        if (j != i) prod_others *= fp_dom[j];
      }
      for (Index x : kept[i]) {
        const double fp_cand = fp_dom[i] - 2.0 * rowsum[i](x) + absq[i](x, x);
        const double value = f_full - fp_cand * prod_others;
        if (value > best_value) {
          best_value = value;
          best_dom = i;
          best_elem = x;
          best_fp_cand = fp_cand;
        }
      }
    }
    if (best_dom < 0) {
      throw infeasible_error("greedy_dense: removal caps exhausted early");
    }
    fp_dom[best_dom] = best_fp_cand;
    auto& kd = kept[best_dom];
    kd.erase(std::find(kd.begin(), kd.end(), best_elem));
    for (Index a = 0; a < model.dim(best_dom); ++a) {
      rowsum[best_dom](a) -= absq[best_dom](a, best_elem);
    }
    ++removed_count[best_dom];
    const double objective = objective_now();
    trace.steps.push_back({best_dom, best_elem, objective - objective_prev, objective});
    objective_prev = objective;
  }

  trace.selection = Selection(kept, model.dims());
  trace.factor_fp = fp_dom;
  trace.objective_final = objective_prev;
  trace.fp_final = 1.0;
  for (Index i = 0; i < r; ++i) trace.fp_final *= fp_dom[i];
  trace.gamma = fp_near_optimality_gamma(model, trace.selection);
  const MultilinearModel sampled = subselect(model, trace.selection);
  for (Index i = 0; i < r; ++i) {
    if (numerical_rank(sampled.factor(i), 1e-10) < model.width(i)) {
      trace.rank_ok = false;
      trace.rank_deficient_domains.push_back(i);
    }
  }
  return trace;
}

}  // namespace kronsample
