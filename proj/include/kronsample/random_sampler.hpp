#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kronsample/dense_sampler.hpp"
#include "kronsample/diag_sampler.hpp"
#include "kronsample/model.hpp"
#include "kronsample/rng.hpp"

namespace kronsample {

// Uniform random Kronecker selection honoring per-domain minimum kept
// counts and the total sensor budget. The cardinality split is drawn by
// rejection from independent uniforms over each feasible range, the rows
// by unbiased partial shuffles.
inline Selection random_kron_sampler(const std::vector<Index>& dims,
                                     const std::vector<Index>& min_keep,
                                     Index budget, Rng& rng,
                                     Index max_attempts = 10000) {
  if (dims.size() != min_keep.size()) {
    throw std::invalid_argument("random_kron_sampler: one minimum per domain");
  }
  Index lo = 0, hi = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (min_keep[i] < 1 || min_keep[i] > dims[i]) {
      throw std::invalid_argument("random_kron_sampler: bad minimum kept count");
    }
    lo += min_keep[i];
    hi += dims[i];
  }
  if (budget < lo || budget > hi) {
    throw infeasible_error("random_kron_sampler: budget outside feasible range");
  }
  std::vector<Index> take(dims.size());
  bool found = false;
  for (Index attempt = 0; attempt < max_attempts && !found; ++attempt) {
    Index total = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const Index span = dims[i] - min_keep[i] + 1;
      take[i] = min_keep[i] + static_cast<Index>(rng.below(span));
      total += take[i];
    }
    found = total == budget;
  }
  if (!found) {
    // Rejection starves only when feasible splits are a vanishing fraction
    // of the box, which is exactly when enumerating them is cheap. Drawing
    // an index uniformly keeps the same distribution as accepted rejection
    // draws: uniform over the feasible compositions.
    std::vector<std::vector<Index>> feasible;
    std::vector<Index> cur(dims.size());
    const auto walk = [&](auto&& self, std::size_t dom, Index left) -> void {
      if (dom == dims.size() - 1) {
        if (left >= min_keep[dom] && left <= dims[dom]) {
          cur[dom] = left;
          feasible.push_back(cur);
        }
        return;
      }
      const Index top = std::min(dims[dom], left);
      for (Index t = min_keep[dom]; t <= top; ++t) {
        cur[dom] = t;
        self(self, dom + 1, left - t);
      }
    };
    walk(walk, 0, budget);
    if (feasible.empty()) {
      throw infeasible_error("random_kron_sampler: no feasible cardinality split");
    }
    take = feasible[static_cast<std::size_t>(rng.below(
        static_cast<Index>(feasible.size())))];
  }
  std::vector<std::vector<Index>> kept(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    std::vector<Index> idx(dims[i]);
    std::iota(idx.begin(), idx.end(), Index{0});
    for (Index t = 0; t < take[i]; ++t) {
      const Index j = t + static_cast<Index>(rng.below(dims[i] - t));
      std::swap(idx[t], idx[j]);
    }
    kept[i].assign(idx.begin(), idx.begin() + take[i]);
  }
  return Selection(std::move(kept), dims);
}

inline Selection random_kron_sampler(const MultilinearModel& model,
                                     const DenseConstraints& cons, Rng& rng) {
  std::vector<Index> min_keep;
  for (Index i = 0; i < model.order(); ++i) {
    min_keep.push_back(model.dim(i) - cons.caps[i]);
  }
  return random_kron_sampler(model.dims(), min_keep, cons.budget, rng);
}

inline Selection random_kron_sampler(const MultilinearModel& model,
                                     const DiagConstraints& cons, Rng& rng) {
  std::vector<Index> min_keep;
  for (Index i = 0; i < model.order(); ++i) {
    min_keep.push_back(model.dim(i) - cons.caps[i]);
  }
  return random_kron_sampler(model.dims(), min_keep, cons.budget, rng);
}

}  // namespace kronsample
