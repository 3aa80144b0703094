#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace twotime {

/// Engine for one (seed, stream, index) triple. Draws depend only on the
/// triple, so a scan can be split across workers without changing output.
inline std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

template <typename Real, typename Engine>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> random_ginibre(Eigen::Index dim,
                                                                                 Engine& engine) {
  std::normal_distribution<Real> normal(Real(0), Real(1));
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = {normal(engine), normal(engine)};
  return g;
}

/// GUE-like Hermitian matrix, entries of order `scale`.
template <typename Real, typename Engine>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> random_hermitian(
    Eigen::Index dim, Engine& engine, Real scale = Real(1)) {
  auto g = random_ginibre<Real>(dim, engine);
  return (scale / Real(2)) * (g + g.adjoint());
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
template <typename Real, typename Engine>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> random_unitary(
    Eigen::Index dim, Engine& engine) {
  using Mat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::HouseholderQR<Mat> qr(random_ginibre<Real>(dim, engine));
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto d = r(k, k);
    if (std::abs(d) > Real(0)) q.col(k) *= d / std::abs(d);
  }
  return q;
}

/// Hilbert-Schmidt random mixed state, returned as a raw matrix.
template <typename Real, typename Engine>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> random_density_matrix(
    Eigen::Index dim, Engine& engine) {
  auto g = random_ginibre<Real>(dim, engine);
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> rho = g * g.adjoint();
  rho /= rho.trace().real();
  return Real(0.5) * (rho + rho.adjoint());
}

/// Haar-random pure state |psi><psi|.
template <typename Real, typename Engine>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> random_pure_state(
    Eigen::Index dim, Engine& engine) {
  auto u = random_unitary<Real>(dim, engine);
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> psi = u.col(0);
  return psi * psi.adjoint();
}

}  // namespace twotime
