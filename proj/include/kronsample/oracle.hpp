#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kronsample/dense_sampler.hpp"
#include "kronsample/diag_sampler.hpp"
#include "kronsample/model.hpp"

namespace kronsample {

struct OracleResult {
  Selection best;             // optimal kept sets
  double objective = 0.0;     // removal surrogate at the optimum
  double fp = 0.0;            // frame potential of the optimal kept design
  std::uint64_t evaluated = 0;  // feasible selections scanned
};

namespace detail {

inline std::uint64_t binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t acc = 1;
  for (Index i = 0; i < k; ++i) {
    acc = acc * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
    if (acc > (1ull << 62)) throw std::runtime_error("binomial overflow");
  }
  return acc;
}

// All k-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<Index>> all_subsets(Index n, Index k) {
  std::vector<std::vector<Index>> out;
  std::vector<Index> cur(k);
  for (Index i = 0; i < k; ++i) cur[i] = i;
  if (k == 0) {
    out.push_back({});
    return out;
  }
  while (true) {
    out.push_back(cur);
    Index i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (Index j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace detail

// Brute-force optimum of the removal surrogate over all selections that
// remove exactly sensor_total - budget rows within the per-domain caps.
// Refuses search spaces above max_evals before enumerating anything.
inline OracleResult exhaustive_oracle(const MultilinearModel& model, Index budget,
                                      const std::vector<Index>& caps,
                                      std::uint64_t max_evals = 1000000) {
  const Index r = model.order();
  if (static_cast<Index>(caps.size()) != r) {
    throw std::invalid_argument("exhaustive_oracle: one cap per domain");
  }
  const Index removals = model.sensor_total() - budget;
  if (removals < 0) throw infeasible_error("exhaustive_oracle: budget too large");

  // Removal-count compositions within caps.
  std::vector<std::vector<Index>> comps;
  std::vector<Index> cur(r, 0);
  const auto enumerate = [&](auto&& self, Index dom, Index left) -> void {
    if (dom == r - 1) {
      if (left <= caps[dom]) {
        cur[dom] = left;
        comps.push_back(cur);
      }
      return;
    }
    for (Index m = 0; m <= std::min(caps[dom], left); ++m) {
      cur[dom] = m;
      self(self, dom + 1, left - m);
    }
  };
  enumerate(enumerate, 0, removals);
  if (comps.empty()) {
    throw infeasible_error("exhaustive_oracle: no feasible cardinality split");
  }

  std::uint64_t total = 0;
  for (const auto& c : comps) {
    std::uint64_t leaf = 1;
    for (Index i = 0; i < r; ++i) leaf *= detail::binomial(model.dim(i), c[i]);
    total += leaf;
    if (total > max_evals) {
      throw std::runtime_error("exhaustive_oracle: search space exceeds limit");
    }
  }

  const bool diag = model.core_kind() == CoreKind::diagonal;
  double full_value = 1.0;
  Matrix full_gram;
  std::vector<RealMatrix> absq(r);
  std::vector<Matrix> grams(r);
  for (Index i = 0; i < r; ++i) {
    grams[i] = grammian_rows(model.factor(i),
                             Selection::full(model.dims()).kept(i));
    if (!diag) absq[i] = row_inner_products(model.factor(i)).cwiseAbs2();
  }
  if (diag) {
    full_gram = grams[0];
    for (Index i = 1; i < r; ++i) full_gram = full_gram.cwiseProduct(grams[i]);
    full_value = full_gram.squaredNorm();
  } else {
    for (Index i = 0; i < r; ++i) full_value *= grams[i].squaredNorm();
  }

  OracleResult result{Selection::full(model.dims()), 0.0, 0.0, 0};
  double best_kept_value = std::numeric_limits<double>::infinity();
  std::vector<std::vector<Index>> best_removed(r);

  std::vector<std::vector<Index>> chosen(r);
  for (const auto& comp : comps) {
    std::vector<std::vector<std::vector<Index>>> subsets(r);
    for (Index i = 0; i < r; ++i) {
      subsets[i] = detail::all_subsets(model.dim(i), comp[i]);
    }
    // Per-domain value of each removal subset: the kept-rows frame
    // potential (dense) or the downdated Grammian (diagonal).
    std::vector<std::vector<double>> fp_val(r);
    std::vector<std::vector<Matrix>> gram_val(r);
    for (Index i = 0; i < r; ++i) {
      for (const auto& rem : subsets[i]) {
        if (diag) {
          Matrix t = grams[i];
          for (Index x : rem) {
            t.noalias() -=
                model.factor(i).row(x).adjoint() * model.factor(i).row(x);
          }
          gram_val[i].push_back(std::move(t));
        } else {
          double f = grams[i].squaredNorm();
          std::vector<Index> gone;
          for (Index x : rem) {
            double delta = absq[i](x, x);
            for (Index b = 0; b < model.dim(i); ++b) delta += 2.0 * absq[i](x, b);
            delta -= 2.0 * absq[i](x, x);
            for (Index y : gone) delta -= 2.0 * absq[i](x, y);
            // delta = 2 * sum_{b in kept} |W(x,b)|^2 - |W(x,x)|^2
            f -= delta;
            gone.push_back(x);
          }
          fp_val[i].push_back(f);
        }
      }
    }
    const auto walk = [&](auto&& self, Index dom, double acc_fp,
                          const Matrix& acc_gram) -> void {
      if (dom == r) {
        const double kept_value = diag ? acc_gram.squaredNorm() : acc_fp;
        ++result.evaluated;
        if (kept_value < best_kept_value) {
          best_kept_value = kept_value;
          for (Index i = 0; i < r; ++i) best_removed[i] = chosen[i];
        }
        return;
      }
      for (std::size_t s = 0; s < subsets[dom].size(); ++s) {
        chosen[dom] = subsets[dom][s];
        if (diag) {
          self(self, dom + 1, 0.0, dom == 0
                                       ? gram_val[dom][s]
                                       : acc_gram.cwiseProduct(gram_val[dom][s]).eval());
        } else {
          self(self, dom + 1, acc_fp * fp_val[dom][s], acc_gram);
        }
      }
    };
    walk(walk, 0, 1.0, Matrix());
  }

  std::vector<std::vector<Index>> kept(r);
  for (Index i = 0; i < r; ++i) {
    std::vector<char> drop(model.dim(i), 0);
    for (Index x : best_removed[i]) drop[x] = 1;
    for (Index j = 0; j < model.dim(i); ++j) {
      if (!drop[j]) kept[i].push_back(j);
    }
  }
  result.best = Selection(kept, model.dims());
  result.objective = full_value - best_kept_value;
  result.fp = best_kept_value;
  return result;
}

inline OracleResult exhaustive_oracle(const MultilinearModel& model,
                                      const DenseConstraints& cons,
                                      std::uint64_t max_evals = 1000000) {
  return exhaustive_oracle(model, cons.budget, cons.caps, max_evals);
}

inline OracleResult exhaustive_oracle(const MultilinearModel& model,
                                      const DiagConstraints& cons,
                                      std::uint64_t max_evals = 1000000) {
  return exhaustive_oracle(model, cons.budget, cons.caps, max_evals);
}

}  // namespace kronsample
