#pragma once

#include "knrspec/hamiltonian.hpp"

#include <random>

namespace knrspec::test {

// Cross-Kerr matrix shared by both bundled configurations, MHz.
inline Eigen::Matrix4d reference_J() {
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  const double v[6] = {-0.10, -0.42, -0.16, -0.40, -0.40, -0.61};
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) J(i, j) = J(j, i) = mhz_to_rad_per_us(v[k++]);
  return J;
}

inline Quad reference_omega() {
  return {mhz_to_rad_per_us(5000), mhz_to_rad_per_us(5013), mhz_to_rad_per_us(4983),
          mhz_to_rad_per_us(5030)};
}

inline SystemParams strong_coupling_params() {
  return make_system_params(reference_omega(), reference_J(), mhz_to_rad_per_us(5.0),
                            mhz_to_rad_per_us(1.0), mhz_to_rad_per_us(0.01),
                            mhz_to_rad_per_us(0.25));
}

inline SystemParams weak_coupling_params() {
  return make_system_params(reference_omega(), reference_J(), mhz_to_rad_per_us(0.05),
                            mhz_to_rad_per_us(0.09), mhz_to_rad_per_us(0.0075),
                            mhz_to_rad_per_us(0.006));
}

inline OperatorMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> nd;
  OperatorMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  return scale * 0.5 * (a + a.adjoint());
}

inline OperatorMatrix random_density(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  OperatorMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  OperatorMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace knrspec::test
