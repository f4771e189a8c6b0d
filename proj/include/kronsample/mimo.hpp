#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kronsample/model.hpp"
#include "kronsample/rng.hpp"

namespace kronsample {

// Uplink scene: K_c users facing a rectangular antenna array with one
// spreading code per user. Angles are in radians inside (-pi/2, pi/2);
// codes are +-1 with one column per user.
struct MimoScene {
  Index users = 0;
  Index grid_x = 0;   // antennas along x, N_1
  Index grid_y = 0;   // antennas along y, N_2
  Index spreading = 0;  // code length, N_3
  double delta_x = 0.5;  // antenna separations in wavelengths
  double delta_y = 0.5;
  std::vector<double> angles_x;  // one per user
  std::vector<double> angles_y;
  std::vector<double> powers;  // transmit powers, > 0
  Matrix codes;                // spreading x users
};

// Scene with users equispaced over the interior of (-span, span) in both
// angular coordinates, log-uniform powers and random +-1 codes.
inline MimoScene build_mimo_scene(Index users, Index grid_x, Index grid_y,
                                  Index spreading, Rng& rng,
                                  double delta_x = 0.5, double delta_y = 0.5,
                                  double angle_span_deg = 60.0,
                                  double power_min = 0.25,
                                  double power_max = 4.0) {
  if (users < 1 || grid_x < 1 || grid_y < 1 || spreading < 1) {
    throw std::invalid_argument("build_mimo_scene: counts must be positive");
  }
  if (angle_span_deg <= 0 || angle_span_deg >= 90) {
    throw std::invalid_argument("build_mimo_scene: span must lie in (0, 90) deg");
  }
  if (power_min <= 0 || power_max < power_min) {
    throw std::invalid_argument("build_mimo_scene: bad power range");
  }
  MimoScene sc;
  sc.users = users;
  sc.grid_x = grid_x;
  sc.grid_y = grid_y;
  sc.spreading = spreading;
  sc.delta_x = delta_x;
  sc.delta_y = delta_y;
  const double span = angle_span_deg * M_PI / 180.0;
  for (Index k = 0; k < users; ++k) {
    const double a = -span + 2.0 * span * static_cast<double>(k + 1) /
                                static_cast<double>(users + 1);
    sc.angles_x.push_back(a);
    sc.angles_y.push_back(a);
  }
  const double lo = std::log(power_min), hi = std::log(power_max);
  for (Index k = 0; k < users; ++k) {
    sc.powers.push_back(std::exp(lo + (hi - lo) * rng.uniform()));
  }
  sc.codes = Matrix(spreading, users);
  for (Index l = 0; l < spreading; ++l) {
    for (Index k = 0; k < users; ++k) {
      sc.codes(l, k) = rng.below(2) == 0 ? Complex(1, 0) : Complex(-1, 0);
    }
  }
  return sc;
}

// Diagonal-core model of the scene: steering factors along x and y plus
// the code factor, U_1(n,k) = exp(j 2 pi n dx sin a_k) and likewise for y.
inline MultilinearModel build_mimo_model(const MimoScene& sc) {
  if (static_cast<Index>(sc.angles_x.size()) != sc.users ||
      static_cast<Index>(sc.angles_y.size()) != sc.users ||
      static_cast<Index>(sc.powers.size()) != sc.users) {
    throw std::invalid_argument("build_mimo_model: one angle/power per user");
  }
  if (sc.codes.rows() != sc.spreading || sc.codes.cols() != sc.users) {
    throw std::invalid_argument("build_mimo_model: code shape mismatch");
  }
  for (double a : sc.angles_x) {
    if (!(a > -M_PI / 2 && a < M_PI / 2)) {
      throw std::invalid_argument("build_mimo_model: angle outside (-pi/2, pi/2)");
    }
  }
  for (double a : sc.angles_y) {
    if (!(a > -M_PI / 2 && a < M_PI / 2)) {
      throw std::invalid_argument("build_mimo_model: angle outside (-pi/2, pi/2)");
    }
  }
  for (double p : sc.powers) {
    if (!(p > 0)) throw std::invalid_argument("build_mimo_model: powers must be > 0");
  }
  for (Index l = 0; l < sc.spreading; ++l) {
    for (Index k = 0; k < sc.users; ++k) {
      if (std::abs(std::abs(sc.codes(l, k).real()) - 1.0) > 1e-12 ||
          sc.codes(l, k).imag() != 0.0) {
        throw std::invalid_argument("build_mimo_model: codes must be +-1");
      }
    }
  }
  const Complex j2pi(0.0, 2.0 * M_PI);
  Matrix u1(sc.grid_x, sc.users), u2(sc.grid_y, sc.users);
  for (Index k = 0; k < sc.users; ++k) {
    for (Index n = 0; n < sc.grid_x; ++n) {
      u1(n, k) = std::exp(j2pi * (sc.delta_x * static_cast<double>(n) *
                                  std::sin(sc.angles_x[k])));
    }
    for (Index m = 0; m < sc.grid_y; ++m) {
      u2(m, k) = std::exp(j2pi * (sc.delta_y * static_cast<double>(m) *
                                  std::sin(sc.angles_y[k])));
    }
  }
  return MultilinearModel::ground({u1, u2, sc.codes}, CoreKind::diagonal);
}

// One symbol period: BPSK symbols scaled by the per-user amplitudes.
inline Vector draw_mimo_symbols(const MimoScene& sc, Rng& rng) {
  Vector g(sc.users);
  for (Index k = 0; k < sc.users; ++k) {
    const double b = rng.below(2) == 0 ? 1.0 : -1.0;
    g(k) = Complex(b * std::sqrt(sc.powers[k]), 0.0);
  }
  return g;
}

}  // namespace kronsample
