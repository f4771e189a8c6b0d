#pragma once

#include <vector>

#include "kronsample/kronsample.hpp"

namespace ks = kronsample;

// Multi-index of a flat row-major position, first domain most significant.
inline std::vector<ks::Index> unflatten(ks::Index flat,
                                        const std::vector<ks::Index>& shape) {
  std::vector<ks::Index> idx(shape.size());
  for (std::size_t d = shape.size(); d-- > 0;) {
    idx[d] = flat % shape[d];
    flat /= shape[d];
  }
  return idx;
}

// Kronecker product straight from the entry definition; independent of the
// library's fold so it can serve as an oracle.
inline ks::Matrix materialize_kron(const std::vector<ks::Matrix>& ms) {
  std::vector<ks::Index> rshape, cshape;
  ks::Index rows = 1, cols = 1;
  for (const ks::Matrix& m : ms) {
    rshape.push_back(m.rows());
    cshape.push_back(m.cols());
    rows *= m.rows();
    cols *= m.cols();
  }
  ks::Matrix out(rows, cols);
  for (ks::Index i = 0; i < rows; ++i) {
    const auto ri = unflatten(i, rshape);
    for (ks::Index j = 0; j < cols; ++j) {
      const auto cj = unflatten(j, cshape);
      ks::Complex v(1.0, 0.0);
      for (std::size_t d = 0; d < ms.size(); ++d) v *= ms[d](ri[d], cj[d]);
      out(i, j) = v;
    }
  }
  return out;
}

// Khatri-Rao product from the entry definition.
inline ks::Matrix materialize_kr(const std::vector<ks::Matrix>& ms) {
  std::vector<ks::Index> rshape;
  ks::Index rows = 1;
  for (const ks::Matrix& m : ms) {
    rshape.push_back(m.rows());
    rows *= m.rows();
  }
  const ks::Index cols = ms.front().cols();
  ks::Matrix out(rows, cols);
  for (ks::Index i = 0; i < rows; ++i) {
    const auto ri = unflatten(i, rshape);
    for (ks::Index k = 0; k < cols; ++k) {
      ks::Complex v(1.0, 0.0);
      for (std::size_t d = 0; d < ms.size(); ++d) v *= ms[d](ri[d], k);
      out(i, k) = v;
    }
  }
  return out;
}

// Full system matrix of a model: Kronecker for dense cores, Khatri-Rao for
// diagonal cores.
inline ks::Matrix materialize_system(const ks::MultilinearModel& m) {
  return m.core_kind() == ks::CoreKind::dense ? materialize_kron(m.factors())
                                              : materialize_kr(m.factors());
}

// Independent pseudoinverse (complete orthogonal decomposition).
inline ks::Matrix oracle_pinv(const ks::Matrix& m) {
  Eigen::CompleteOrthogonalDecomposition<ks::Matrix> cod(m);
  return cod.pseudoInverse();
}

inline double rel_err(const ks::Matrix& got, const ks::Matrix& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline bool bitwise_equal(const ks::Matrix& a, const ks::Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (ks::Index i = 0; i < a.rows(); ++i) {
    for (ks::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j).real() != b(i, j).real() || a(i, j).imag() != b(i, j).imag()) {
        return false;
      }
    }
  }
  return true;
}

inline ks::MultilinearModel random_dense_model(ks::Rng& rng,
                                               const std::vector<ks::Index>& dims,
                                               const std::vector<ks::Index>& widths,
                                               bool complex_entries) {
  std::vector<ks::Matrix> f;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    f.push_back(rng.gaussian_matrix(dims[i], widths[i], complex_entries));
  }
  return ks::MultilinearModel::ground(std::move(f), ks::CoreKind::dense);
}

inline ks::MultilinearModel random_diag_model(ks::Rng& rng,
                                              const std::vector<ks::Index>& dims,
                                              ks::Index core_width,
                                              bool complex_entries) {
  std::vector<ks::Matrix> f;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    f.push_back(rng.gaussian_matrix(dims[i], core_width, complex_entries));
  }
  return ks::MultilinearModel::ground(std::move(f), ks::CoreKind::diagonal);
}

inline ks::Vector random_core(ks::Rng& rng, ks::Index n, bool complex_entries) {
  ks::Vector g(n);
  for (ks::Index i = 0; i < n; ++i) {
    g(i) = complex_entries ? rng.cnormal() : ks::Complex(rng.normal(), 0.0);
  }
  return g;
}
