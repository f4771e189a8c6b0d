#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "kronsample/errors.hpp"
#include "kronsample/greedy.hpp"
#include "kronsample/model.hpp"

namespace kronsample {

// Largest number of (near-)zero entries found in any single column. A kept
// set larger than this is guaranteed to leave no all-zero column behind.
inline Index zero_count(const Matrix& u) {
  validate_matrix(u, "zero_count");
  Index worst = 0;
  for (Index k = 0; k < u.cols(); ++k) {
    Index z = 0;
    for (Index i = 0; i < u.rows(); ++i) {
      if (std::abs(u(i, k)) < kZeroTol) ++z;
    }
    worst = std::max(worst, z);
  }
  return worst;
}

// Removal budget and identifiability caps for a diagonal-core design. One
// privileged domain must keep enough rows to reach full core rank on its
// own; every other domain only needs to dodge all-zero columns.
struct DiagConstraints {
  Index budget = 0;                // sensors to keep, L = sum |L_i|
  Index privileged = 0;            // domain that carries the rank
  std::vector<Index> zero_counts;  // z_i per domain
  std::vector<Index> extra_slack;  // optional extra rows kept per domain
  std::vector<Index> caps;         // beta_i, max removals per domain

  DiagConstraints(const MultilinearModel& model, Index budget_,
                  Index privileged_ = -1, std::vector<Index> extra = {})
      : budget(budget_), extra_slack(std::move(extra)) {
    if (model.core_kind() != CoreKind::diagonal) {
      throw std::invalid_argument("DiagConstraints: model core must be diagonal");
    }
    const Index r = model.order();
    if (extra_slack.empty()) extra_slack.assign(r, 0);
    if (static_cast<Index>(extra_slack.size()) != r) {
      throw std::invalid_argument("DiagConstraints: one slack per domain");
    }
    if (privileged_ < 0) {
      privileged_ = 0;
      for (Index i = 1; i < r; ++i) {
        if (model.dim(i) > model.dim(privileged_)) privileged_ = i;
      }
    }
    if (privileged_ >= r) {
      throw std::invalid_argument("DiagConstraints: privileged domain out of range");
    }
    privileged = privileged_;
    const Index kc = model.core_size();
    Index min_keep_total = 0;
    for (Index i = 0; i < r; ++i) {
      if (extra_slack[i] < 0) {
        throw std::invalid_argument("DiagConstraints: slack must be >= 0");
      }
      zero_counts.push_back(zero_count(model.factor(i)));
      const Index need = i == privileged
                             ? std::max(kc, zero_counts[i] + 1)
                             : std::max(Index{1}, zero_counts[i] + 1);
      const Index cap = model.dim(i) - need - extra_slack[i];
      if (cap < 0) {
        throw infeasible_error("domain " + std::to_string(i) +
                               " cannot keep its identifiability minimum");
      }
      caps.push_back(cap);
      min_keep_total += need + extra_slack[i];
    }
    if (budget < min_keep_total) {
      throw infeasible_error("budget " + std::to_string(budget) +
                             " below minimum sensor count " +
                             std::to_string(min_keep_total));
    }
    if (budget > model.sensor_total()) {
      throw infeasible_error("budget exceeds available sensors");
    }
  }
};

// Kept-set Grammians T_i with rank-1 downdates, plus the entrywise products
// needed by the design objective. The full product and each leave-one-out
// product are rebuilt lazily after a downdate; removing a row in domain d
// leaves the product excluding d valid.
class HadamardGramCache {
 public:
  explicit HadamardGramCache(const MultilinearModel& model)
      : model_(&model),
        excl_(model.order()),
        excl_ok_(model.order(), 0) {
    for (Index i = 0; i < model.order(); ++i) {
      grams_.push_back(grammian_rows(
          model.factor(i), Selection::full(model.dims()).kept(i)));
    }
  }

  const Matrix& gram(Index i) const { return grams_.at(i); }

  const Matrix& hadamard_all() const {
    if (!full_ok_) {
      full_ = grams_.front();
      for (std::size_t i = 1; i < grams_.size(); ++i) {
        full_ = full_.cwiseProduct(grams_[i]);
      }
      full_ok_ = true;
    }
    return full_;
  }

  const Matrix& hadamard_excluding(Index i) const {
    if (!excl_ok_.at(i)) {
      Matrix acc = Matrix::Ones(grams_.front().rows(), grams_.front().cols());
      for (Index j = 0; j < static_cast<Index>(grams_.size()); ++j) {
        if (j != i) acc = acc.cwiseProduct(grams_[j]);
      }
      excl_[i] = std::move(acc);
      excl_ok_[i] = 1;
    }
    return excl_[i];
  }

  void remove_row(Index domain, Index row) {
    const Matrix& u = model_->factor(domain);
    grams_.at(domain).noalias() -= u.row(row).adjoint() * u.row(row);
    full_ok_ = false;
    for (Index j = 0; j < static_cast<Index>(excl_ok_.size()); ++j) {
      if (j != domain) excl_ok_[j] = 0;
    }
  }

  double p_value() const { return hadamard_all().squaredNorm(); }

 private:
  const MultilinearModel* model_;
  std::vector<Matrix> grams_;
  mutable Matrix full_;
  mutable bool full_ok_ = false;
  mutable std::vector<Matrix> excl_;
  mutable std::vector<char> excl_ok_;
};

// Frame potential of the sampled Khatri-Rao design,
// P(L) = || T_1(L_1) o ... o T_R(L_R) ||_F^2.
inline double objective_P(const MultilinearModel& model, const Selection& sel) {
  if (sel.dims() != model.dims()) {
    throw std::invalid_argument("objective_P: selection does not match model");
  }
  Matrix acc = grammian_rows(model.factor(0), sel.kept(0));
  for (Index i = 1; i < model.order(); ++i) {
    acc = acc.cwiseProduct(grammian_rows(model.factor(i), sel.kept(i)));
  }
  return acc.squaredNorm();
}

// Removal surrogate Q(S) = P(full grid) - P(grid minus S); Q(empty) == 0.
inline double objective_Q(const MultilinearModel& model,
                          const std::vector<std::vector<Index>>& removed) {
  if (static_cast<Index>(removed.size()) != model.order()) {
    throw std::invalid_argument("objective_Q: one removal set per domain");
  }
  const Selection full = Selection::full(model.dims());
  std::vector<std::vector<Index>> kept(model.order());
  for (Index i = 0; i < model.order(); ++i) {
    std::vector<char> drop(model.dim(i), 0);
    for (Index x : removed[i]) {
      if (x < 0 || x >= model.dim(i)) {
        throw std::invalid_argument("objective_Q: removal index out of range");
      }
      if (drop[x]) throw std::invalid_argument("objective_Q: duplicate removal");
      drop[x] = 1;
    }
    for (Index j = 0; j < model.dim(i); ++j) {
      if (!drop[j]) kept[i].push_back(j);
    }
  }
  return objective_P(model, full) -
         objective_P(model, Selection(kept, model.dims()));
}

// Identifiability of a diagonal-core selection: the privileged sampled
// factor must reach full core rank and no sampled factor may contain an
// all-zero column.
inline KrRankReport kr_rank_check(const MultilinearModel& model,
                                  const Selection& sel, Index privileged) {
  if (model.core_kind() != CoreKind::diagonal) {
    throw std::invalid_argument("kr_rank_check: model core must be diagonal");
  }
  const MultilinearModel sampled = subselect(model, sel);
  KrRankReport rep;
  rep.privileged_domain = privileged;
  rep.required = model.core_size();
  rep.rank = numerical_rank(sampled.factor(privileged), 1e-10);
  for (Index i = 0; i < sampled.order(); ++i) {
    const Matrix& psi = sampled.factor(i);
    for (Index k = 0; k < psi.cols(); ++k) {
      if ((psi.col(k).cwiseAbs().array() < kZeroTol).all()) {
        rep.zero_column_domains.push_back(i);
        break;
      }
    }
  }
  rep.ok = rep.rank == rep.required && rep.zero_column_domains.empty();
  return rep;
}

// Near-optimality factor of the Khatri-Rao frame-potential bound, by
// analogy with the Kronecker case: K is the core width and the row-norm
// term is the product of per-domain minimum squared row norms over the
// kept rows. Diagnostic only.
inline double fp_near_optimality_gamma_diag(const MultilinearModel& model,
                                            const Selection& sel) {
  if (sel.dims() != model.dims()) {
    throw std::invalid_argument("fp_near_optimality_gamma_diag: selection mismatch");
  }
  const double p_full = objective_P(model, Selection::full(model.dims()));
  double l_min = 1.0;
  for (Index i = 0; i < model.order(); ++i) {
    double dom_min = std::numeric_limits<double>::infinity();
    for (Index l : sel.kept(i)) {
      dom_min = std::min(dom_min, model.factor(i).row(l).squaredNorm());
    }
    l_min *= dom_min;
  }
  const double kc = static_cast<double>(model.core_size());
  return 0.5 * (kc * p_full / (l_min * l_min) + 1.0);
}

// Greedy removal design for a diagonal core. Starts from the full grid and
// removes sensor_total - budget rows; a candidate in domain i is scored by
// downdating T_i by its row outer product and recombining with the cached
// product of the other domains' Grammians (ties: lowest domain, then lowest
// row). The Khatri-Rao rank condition is verified at termination and
// reported in the trace.
inline GreedyTrace greedy_diag(const MultilinearModel& model,
                               const DiagConstraints& cons) {
  MultilinearModel::ground(model.factors(), model.core_kind());
  const Index r = model.order();
  const Index removals = model.sensor_total() - cons.budget;

  HadamardGramCache cache(model);
  const double p_full = cache.p_value();
  std::vector<std::vector<Index>> kept(r);
  for (Index i = 0; i < r; ++i) {
    kept[i].resize(model.dim(i));
    std::iota(kept[i].begin(), kept[i].end(), Index{0});
  }

  GreedyTrace trace;
  std::vector<Index> removed_count(r, 0);
  double objective_prev = 0.0;
  for (Index t = 0; t < removals; ++t) {
    Index best_dom = -1, best_elem = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < r; ++i) {
      if (removed_count[i] >= cons.caps[i]) continue;
      const RealMatrix wm = cache.hadamard_excluding(i).cwiseAbs2();
      const Matrix& t_i = cache.gram(i);
      for (Index x : kept[i]) {
        const Vector c = model.factor(i).row(x).adjoint();
        const double p_cand =
            ((t_i - c * c.adjoint()).cwiseAbs2().cwiseProduct(wm)).sum();
        const double value = p_full - p_cand;
        if (value > best_value) {
          best_value = value;
          best_dom = i;
          best_elem = x;
        }
      }
    }
    if (best_dom < 0) {
      throw infeasible_error("greedy_diag: removal caps exhausted early");
    }
    cache.remove_row(best_dom, best_elem);
    auto& kd = kept[best_dom];
    kd.erase(std::find(kd.begin(), kd.end(), best_elem));
    ++removed_count[best_dom];
    const double objective = p_full - cache.p_value();
    trace.steps.push_back({best_dom, best_elem, objective - objective_prev, objective});
    objective_prev = objective;
  }

  trace.selection = Selection(kept, model.dims());
  for (Index i = 0; i < r; ++i) trace.factor_fp.push_back(cache.gram(i).squaredNorm());
  trace.objective_final = objective_prev;
  trace.fp_final = cache.p_value();
  trace.gamma = fp_near_optimality_gamma_diag(model, trace.selection);
  trace.kr_rank = kr_rank_check(model, trace.selection, cons.privileged);
  trace.rank_ok = trace.kr_rank.ok;
  return trace;
}

}  // namespace kronsample
