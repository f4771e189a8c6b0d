#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace kronsample {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Every grid handled by the library is nonempty and finite.
inline void validate_matrix(const Matrix& m, const char* name) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw std::invalid_argument(std::string(name) +
                                ": needs at least one row and one column");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(name) + ": entries must be finite");
  }
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  validate_matrix(a, "kron: a");
  validate_matrix(b, "kron: b");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Left fold, so block (i1,...,iR) of the result follows the row-major
// multi-index order used everywhere else in the library.
inline Matrix kron(const std::vector<Matrix>& ms) {
  if (ms.empty()) throw std::invalid_argument("kron: empty factor list");
  Matrix out = ms.front();
  for (std::size_t i = 1; i < ms.size(); ++i) out = kron(out, ms[i]);
  return out;
}

// Columnwise Kronecker product; factors must agree in column count.
inline Matrix khatri_rao(const Matrix& a, const Matrix& b) {
  validate_matrix(a, "khatri_rao: a");
  validate_matrix(b, "khatri_rao: b");
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("khatri_rao: column counts differ");
  }
  Matrix out(a.rows() * b.rows(), a.cols());
  for (Index k = 0; k < a.cols(); ++k) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.col(k).segment(i * b.rows(), b.rows()) = a(i, k) * b.col(k);
    }
  }
  return out;
}

inline Matrix khatri_rao(const std::vector<Matrix>& ms) {
  if (ms.empty()) throw std::invalid_argument("khatri_rao: empty factor list");
  Matrix out = ms.front();
  for (std::size_t i = 1; i < ms.size(); ++i) out = khatri_rao(out, ms[i]);
  return out;
}

inline Matrix hadamard(const Matrix& a, const Matrix& b) {
  validate_matrix(a, "hadamard: a");
  validate_matrix(b, "hadamard: b");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("hadamard: shapes differ");
  }
  return a.cwiseProduct(b);
}

inline Matrix hadamard(const std::vector<Matrix>& ms) {
  if (ms.empty()) throw std::invalid_argument("hadamard: empty factor list");
  Matrix out = ms.front();
  for (std::size_t i = 1; i < ms.size(); ++i) out = hadamard(out, ms[i]);
  return out;
}

inline Matrix grammian(const Matrix& psi) {
  validate_matrix(psi, "grammian");
  return psi.adjoint() * psi;
}

// Grammian of a row subset, accumulated as rank-1 outer products in the
// order the indices are given. Callers pass ascending indices; with that
// convention T(X) + T(Y) for a contiguous split X|Y replays the exact
// fp operation sequence of T(X union Y).
inline Matrix grammian_rows(const Matrix& u, const std::vector<Index>& rows) {
  validate_matrix(u, "grammian_rows");
  Matrix t = Matrix::Zero(u.cols(), u.cols());
  for (Index r : rows) {
    if (r < 0 || r >= u.rows()) {
      throw std::invalid_argument("grammian_rows: row index out of range");
    }
    t.noalias() += u.row(r).adjoint() * u.row(r);
  }
  return t;
}

inline double fp_of_gram(const Matrix& t) { return t.squaredNorm(); }

// Frame potential ||Psi^H Psi||_F^2, the design objective everything in
// this library minimizes.
inline double frame_potential(const Matrix& psi) {
  return fp_of_gram(grammian(psi));
}

// Hermitian table W(a,b) = <u_a, u_b> of all row inner products; the
// greedy engines read squared magnitudes from it instead of touching the
// factor again.
inline Matrix row_inner_products(const Matrix& u) {
  validate_matrix(u, "row_inner_products");
  return u * u.adjoint();
}

inline Index numerical_rank(const Matrix& m, double rtol = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = rtol * sv(0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

// Moore-Penrose pseudoinverse; singular values at or below rtol times the
// largest are treated as zero.
inline Matrix pinv(const Matrix& m, double rtol = 1e-12) {
  validate_matrix(m, "pinv");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? rtol * sv(0) : 0.0;
  RealVector inv = RealVector::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace kronsample
