#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "kronsample/model.hpp"
#include "kronsample/rng.hpp"

namespace kronsample {

// Estimation quality of a sampled design, derived from the Fisher matrix
// T = Psi^H Psi of the (never materialized) sampled system.
struct EstimationMetrics {
  double mse = 0.0;         // tr(T^-1); +inf when T is numerically singular
  double fp = 0.0;          // frame potential ||T||_F^2
  double lambda_min = 0.0;  // extreme eigenvalues of T
  double lambda_max = 0.0;
  double proxy_lower = 0.0;  // fp / lambda_max^2
  double proxy_upper = 0.0;  // fp / lambda_min^2
  Index sensors = 0;         // L
  Index samples = 0;         // L~
  bool identifiable = false;
};

namespace detail {

// Ascending eigenvalues of a Hermitian PSD matrix, clamped at zero.
inline RealVector psd_eigenvalues(const Matrix& t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(t, Eigen::EigenvaluesOnly);
  RealVector ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), 0.0);
  return ev;
}

}  // namespace detail

// Fisher-based metrics of a sampled model. Dense cores exploit the
// Kronecker eigenstructure: eigenvalues of T multiply across domains, so
// tr(T^-1) is the product of per-domain traces.
inline EstimationMetrics metrics(const MultilinearModel& sampled) {
  EstimationMetrics out;
  out.sensors = sampled.sensor_total();
  out.samples = sampled.sample_total();
  const double inf = std::numeric_limits<double>::infinity();
  if (sampled.core_kind() == CoreKind::dense) {
    double mse = 1.0, fp = 1.0, lmin = 1.0, lmax = 1.0;
    bool singular = false;
    for (Index i = 0; i < sampled.order(); ++i) {
      const Matrix t = grammian(sampled.factor(i));
      const RealVector ev = detail::psd_eigenvalues(t);
      fp *= t.squaredNorm();
      lmin *= ev(0);
      lmax *= ev(ev.size() - 1);
      if (ev(0) <= 1e-12 * ev(ev.size() - 1)) {
        singular = true;
        continue;
      }
      double tr_inv = 0.0;
      for (Index k = 0; k < ev.size(); ++k) tr_inv += 1.0 / ev(k);
      mse *= tr_inv;
    }
    out.fp = fp;
    out.lambda_min = lmin;
    out.lambda_max = lmax;
    out.identifiable = !singular;
    out.mse = singular ? inf : mse;
  } else {
    Matrix t = grammian(sampled.factor(0));
    for (Index i = 1; i < sampled.order(); ++i) {
      t = t.cwiseProduct(grammian(sampled.factor(i)));
    }
    const RealVector ev = detail::psd_eigenvalues(t);
    out.fp = t.squaredNorm();
    out.lambda_min = ev(0);
    out.lambda_max = ev(ev.size() - 1);
    out.identifiable = ev(0) > 1e-12 * ev(ev.size() - 1);
    if (out.identifiable) {
      double tr_inv = 0.0;
      for (Index k = 0; k < ev.size(); ++k) tr_inv += 1.0 / ev(k);
      out.mse = tr_inv;
    } else {
      out.mse = inf;
    }
  }
  out.proxy_lower = out.lambda_max > 0 ? out.fp / (out.lambda_max * out.lambda_max) : inf;
  out.proxy_upper = out.identifiable && out.lambda_min > 0
                        ? out.fp / (out.lambda_min * out.lambda_min)
                        : inf;
  return out;
}

// Least squares for a dense core: g = (pinv(Psi_1) kron ... kron
// pinv(Psi_R)) y, applied as successive mode products.
inline Vector ls_estimate_dense(const MultilinearModel& sampled, const Vector& y) {
  if (sampled.core_kind() != CoreKind::dense) {
    throw std::invalid_argument("ls_estimate_dense: model core must be dense");
  }
  if (y.size() != sampled.sample_total()) {
    throw std::invalid_argument("ls_estimate_dense: measurement length mismatch");
  }
  Vector g = y;
  std::vector<Index> shape = sampled.dims();
  for (Index d = 0; d < sampled.order(); ++d) {
    g = mode_apply(g, shape, d, pinv(sampled.factor(d)));
    shape[d] = sampled.width(d);
  }
  return g;
}

namespace detail {

// z = (Psi_1 kr ... kr Psi_R)^H y without forming the Khatri-Rao product;
// each stage contracts one domain while tracking the shared column index.
inline Vector kr_adjoint_apply(const MultilinearModel& sampled, const Vector& y) {
  const Index kc = sampled.core_size();
  Index rest = 1;
  for (Index d = 1; d < sampled.order(); ++d) rest *= sampled.dim(d);
  Eigen::Map<const RowMajorMatrix> y0(y.data(), sampled.dim(0), rest);
  RowMajorMatrix m = sampled.factor(0).adjoint() * y0;
  for (Index d = 1; d < sampled.order(); ++d) {
    const Index ld = sampled.dim(d);
    const Index inner = rest / ld;
    RowMajorMatrix next(kc, inner);
    for (Index k = 0; k < kc; ++k) {
      Eigen::Map<const RowMajorMatrix> grid(m.data() + k * m.cols(), ld, inner);
      next.row(k) = sampled.factor(d).col(k).adjoint() * grid;
    }
    m.swap(next);
    rest = inner;
  }
  return m.col(0);
}

}  // namespace detail

// Least squares for a diagonal core: g = pinv(T_1 o ... o T_R) Psi^H y,
// with the adjoint applied domain by domain.
inline Vector ls_estimate_diag(const MultilinearModel& sampled, const Vector& y) {
  if (sampled.core_kind() != CoreKind::diagonal) {
    throw std::invalid_argument("ls_estimate_diag: model core must be diagonal");
  }
  if (y.size() != sampled.sample_total()) {
    throw std::invalid_argument("ls_estimate_diag: measurement length mismatch");
  }
  Matrix t = grammian(sampled.factor(0));
  for (Index i = 1; i < sampled.order(); ++i) {
    t = t.cwiseProduct(grammian(sampled.factor(i)));
  }
  return pinv(t) * detail::kr_adjoint_apply(sampled, y);
}

// Field reconstruction on the full grid from estimated core coefficients.
inline Vector reconstruct_x(const MultilinearModel& model, const Vector& g) {
  return multilinear_apply(model, g);
}

// Mean squared core estimation error under circular white noise of variance
// sigma^2, averaged over trials. Trial t draws its noise from a fresh
// generator seeded base_seed + t, so the stream does not depend on how
// trials are scheduled.
inline double monte_carlo_mse(const MultilinearModel& sampled, const Vector& g,
                              Index trials, std::uint64_t base_seed,
                              double sigma = 1.0) {
  if (trials < 1) throw std::invalid_argument("monte_carlo_mse: trials must be >= 1");
  const Vector y0 = multilinear_apply(sampled, g);
  double acc = 0.0;
  for (Index t = 0; t < trials; ++t) {
    Rng rng(base_seed + static_cast<std::uint64_t>(t));
    Vector y = y0;
    for (Index i = 0; i < y.size(); ++i) y(i) += sigma * rng.cnormal();
    const Vector ghat = sampled.core_kind() == CoreKind::dense
                            ? ls_estimate_dense(sampled, y)
                            : ls_estimate_diag(sampled, y);
    acc += (ghat - g).squaredNorm();
  }
  return acc / static_cast<double>(trials);
}

}  // namespace kronsample
