#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kronsample/linalg.hpp"

namespace kronsample {

// Entries below this magnitude count as structural zeros (zero-column
// detection, zero-row counts for the diagonal-core caps).
inline constexpr double kZeroTol = 1e-14;

inline Index checked_product(const std::vector<Index>& v) {
  Index p = 1;
  for (Index x : v) {
    if (x > 0 && p > std::numeric_limits<Index>::max() / x) {
      throw std::overflow_error("dimension product overflows Index");
    }
    p *= x;
  }
  return p;
}

enum class CoreKind { dense, diagonal };

// Signal model x = (U_1 kron ... kron U_R) g for a dense core, or
// x = (U_1 kr ... kr U_R) g for a diagonal core. Construction enforces the
// structural invariants every instance satisfies (sampled sub-models
// included); the stricter ground() factory additionally enforces what a
// design-stage model must satisfy.
class MultilinearModel {
 public:
  MultilinearModel(std::vector<Matrix> factors, CoreKind kind)
      : factors_(std::move(factors)), kind_(kind) {
    if (factors_.empty()) {
      throw std::invalid_argument("MultilinearModel: needs at least one factor");
    }
    for (const Matrix& u : factors_) validate_matrix(u, "MultilinearModel factor");
    if (kind_ == CoreKind::diagonal) {
      for (const Matrix& u : factors_) {
        if (u.cols() != factors_.front().cols()) {
          throw std::invalid_argument(
              "MultilinearModel: diagonal core requires equal column counts");
        }
      }
    }
  }

  // Design-stage model: dense factors must be strictly tall with full
  // column rank; diagonal factors must not contain an all-zero column.
  static MultilinearModel ground(std::vector<Matrix> factors, CoreKind kind) {
    MultilinearModel m(std::move(factors), kind);
    if (kind == CoreKind::dense) {
      for (Index i = 0; i < m.order(); ++i) {
        const Matrix& u = m.factor(i);
        if (u.rows() <= u.cols()) {
          throw std::invalid_argument(
              "MultilinearModel: dense-core factor must have more rows than columns");
        }
        if (numerical_rank(u, 1e-10) != u.cols()) {
          throw std::invalid_argument(
              "MultilinearModel: dense-core factor is column rank deficient");
        }
      }
    } else {
      for (Index i = 0; i < m.order(); ++i) {
        const Matrix& u = m.factor(i);
        for (Index k = 0; k < u.cols(); ++k) {
          if ((u.col(k).cwiseAbs().array() < kZeroTol).all()) {
            throw std::invalid_argument(
                "MultilinearModel: diagonal-core factor has an all-zero column");
          }
        }
      }
    }
    return m;
  }

  CoreKind core_kind() const { return kind_; }
  Index order() const { return static_cast<Index>(factors_.size()); }
  const Matrix& factor(Index i) const { return factors_.at(i); }
  const std::vector<Matrix>& factors() const { return factors_; }

  std::vector<Index> dims() const {
    std::vector<Index> d;
    d.reserve(factors_.size());
    for (const Matrix& u : factors_) d.push_back(u.rows());
    return d;
  }

  std::vector<Index> widths() const {
    std::vector<Index> k;
    k.reserve(factors_.size());
    for (const Matrix& u : factors_) k.push_back(u.cols());
    return k;
  }

  Index dim(Index i) const { return factors_.at(i).rows(); }
  Index width(Index i) const { return factors_.at(i).cols(); }

  // Sensor count of the full grid: sum of the domain sizes.
  Index sensor_total() const {
    Index s = 0;
    for (const Matrix& u : factors_) s += u.rows();
    return s;
  }

  // Sample count of the full grid: product of the domain sizes.
  Index sample_total() const { return checked_product(dims()); }

  // Length of the core vector g.
  Index core_size() const {
    if (kind_ == CoreKind::diagonal) return factors_.front().cols();
    return checked_product(widths());
  }

 private:
  std::vector<Matrix> factors_;
  CoreKind kind_;
};

// Kept row indices per domain: sorted ascending, in range, duplicate-free.
class Selection {
 public:
  Selection() = default;

  Selection(std::vector<std::vector<Index>> kept, std::vector<Index> dims)
      : kept_(std::move(kept)), dims_(std::move(dims)) {
    if (kept_.size() != dims_.size()) {
      throw std::invalid_argument("Selection: one kept set per domain required");
    }
    for (std::size_t i = 0; i < kept_.size(); ++i) {
      auto& s = kept_[i];
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
        throw std::invalid_argument("Selection: duplicate index");
      }
      if (!s.empty() && (s.front() < 0 || s.back() >= dims_[i])) {
        throw std::invalid_argument("Selection: index out of range");
      }
    }
  }

  static Selection full(const std::vector<Index>& dims) {
    std::vector<std::vector<Index>> kept(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
      kept[i].resize(dims[i]);
      for (Index j = 0; j < dims[i]; ++j) kept[i][j] = j;
    }
    return Selection(std::move(kept), dims);
  }

  const std::vector<std::vector<Index>>& kept() const { return kept_; }
  const std::vector<Index>& kept(Index i) const { return kept_.at(i); }
  const std::vector<Index>& dims() const { return dims_; }
  Index order() const { return static_cast<Index>(kept_.size()); }

  // Physical sensor count L = sum |L_i|.
  Index sensors() const {
    Index s = 0;
    for (const auto& k : kept_) s += static_cast<Index>(k.size());
    return s;
  }

  // Observed sample count L~ = prod |L_i|.
  Index samples() const {
    std::vector<Index> sz;
    sz.reserve(kept_.size());
    for (const auto& k : kept_) sz.push_back(static_cast<Index>(k.size()));
    return checked_product(sz);
  }

  // Removed indices of one domain, ascending.
  std::vector<Index> removed(Index i) const {
    std::vector<Index> out;
    const auto& k = kept_.at(i);
    std::size_t pos = 0;
    for (Index j = 0; j < dims_.at(i); ++j) {
      if (pos < k.size() && k[pos] == j) {
        ++pos;
      } else {
        out.push_back(j);
      }
    }
    return out;
  }

 private:
  std::vector<std::vector<Index>> kept_;
  std::vector<Index> dims_;
};

// Restriction of the model to the kept rows of each domain.
inline MultilinearModel subselect(const MultilinearModel& model,
                                  const Selection& sel) {
  if (sel.order() != model.order() || sel.dims() != model.dims()) {
    throw std::invalid_argument("subselect: selection does not match model");
  }
  std::vector<Matrix> sub;
  sub.reserve(model.order());
  for (Index i = 0; i < model.order(); ++i) {
    const auto& rows = sel.kept(i);
    if (rows.empty()) {
      throw std::invalid_argument("subselect: selection empties a domain");
    }
    Matrix psi(static_cast<Index>(rows.size()), model.factor(i).cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      psi.row(static_cast<Index>(r)) = model.factor(i).row(rows[r]);
    }
    sub.push_back(std::move(psi));
  }
  return MultilinearModel(std::move(sub), model.core_kind());
}

namespace detail {
using RowMajorMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
}

// Applies a to the given mode of x, where x holds a tensor of the given
// shape flattened row-major (first domain most significant). Requires
// a.cols() == shape[mode]; the result has shape[mode] replaced by a.rows().
inline Vector mode_apply(const Vector& x, const std::vector<Index>& shape,
                         Index mode, const Matrix& a) {
  if (mode < 0 || mode >= static_cast<Index>(shape.size())) {
    throw std::invalid_argument("mode_apply: mode out of range");
  }
  if (x.size() != checked_product(shape)) {
    throw std::invalid_argument("mode_apply: input length does not match shape");
  }
  if (a.cols() != shape[mode]) {
    throw std::invalid_argument("mode_apply: factor width does not match mode");
  }
  Index outer = 1, inner = 1;
  for (Index d = 0; d < mode; ++d) outer *= shape[d];
  for (Index d = mode + 1; d < static_cast<Index>(shape.size()); ++d) {
    inner *= shape[d];
  }
  Vector y(outer * a.rows() * inner);
  for (Index o = 0; o < outer; ++o) {
    Eigen::Map<const detail::RowMajorMatrix> in(
        x.data() + o * shape[mode] * inner, shape[mode], inner);
    Eigen::Map<detail::RowMajorMatrix> out(y.data() + o * a.rows() * inner,
                                           a.rows(), inner);
    out.noalias() = a * in;
  }
  return y;
}

// x = (U_1 kron ... kron U_R) g resp. (U_1 kr ... kr U_R) g, evaluated by
// successive mode products (dense) or per-column rank-1 expansion
// (diagonal). The structured operator is never materialized.
inline Vector multilinear_apply(const MultilinearModel& model, const Vector& g) {
  if (g.size() != model.core_size()) {
    throw std::invalid_argument("multilinear_apply: core length mismatch");
  }
  if (!g.allFinite()) {
    throw std::invalid_argument("multilinear_apply: core entries must be finite");
  }
  if (model.core_kind() == CoreKind::dense) {
    Vector x = g;
    std::vector<Index> shape = model.widths();
    for (Index d = 0; d < model.order(); ++d) {
      x = mode_apply(x, shape, d, model.factor(d));
      shape[d] = model.dim(d);
    }
    return x;
  }
  const Index n_tilde = model.sample_total();
  Vector x = Vector::Zero(n_tilde);
  for (Index k = 0; k < model.core_size(); ++k) {
    Vector cur = g(k) * model.factor(0).col(k);
    for (Index d = 1; d < model.order(); ++d) {
      const Index nd = model.dim(d);
      Vector next(cur.size() * nd);
      Eigen::Map<detail::RowMajorMatrix> grid(next.data(), cur.size(), nd);
      grid.noalias() = cur * model.factor(d).col(k).transpose();
      cur.swap(next);
    }
    x += cur;
  }
  return x;
}

}  // namespace kronsample
