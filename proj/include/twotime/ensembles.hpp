#pragma once

// Random problem instances shared by the property tests, the acceptance
// suite and the CLI reports.

#include <numbers>
#include <random>

#include "twotime/correlators.hpp"
#include "twotime/dynamics.hpp"
#include "twotime/gaussian.hpp"
#include "twotime/qcore.hpp"
#include "twotime/random.hpp"

namespace twotime {

template <typename Real, typename Engine>
Vector3<Real> random_unit_vector(Engine& engine) {
  std::normal_distribution<Real> normal(Real(0), Real(1));
  Vector3<Real> v;
  do {
    v = Vector3<Real>(normal(engine), normal(engine), normal(engine));
  } while (v.norm() < Real(1e-6));
  return v.normalized();
}

/// Observable with spectrum {+1, -1} in a Haar-random basis.
template <typename Real, typename Engine>
Observable<Real> random_sign_observable(Engine& engine) {
  const Matrix<Real> u = random_unitary<Real>(2, engine);
  Matrix<Real> diag = Matrix<Real>::Zero(2, 2);
  diag(0, 0) = 1;
  diag(1, 1) = -1;
  return Observable<Real>(hermitian_part(Matrix<Real>(u * diag * u.adjoint())));
}

template <typename Real, typename Engine>
Observable<Real> random_observable(Eigen::Index dim, Engine& engine) {
  return Observable<Real>(random_hermitian<Real>(dim, engine));
}

template <typename Real, typename Engine>
ChannelFamily<Real> random_unitary_channel(Eigen::Index dim, Engine& engine) {
  return ChannelFamily<Real>::unitary(random_hermitian<Real>(dim, engine));
}

template <typename Real, typename Engine>
DensityMatrix<Real> random_state(Eigen::Index dim, Engine& engine) {
  return DensityMatrix<Real>(random_density_matrix<Real>(dim, engine));
}

/// Random times with 0 <= t1 < t2 <= 2 pi and t2 - t1 >= 0.01.
template <typename Real, typename Engine>
std::pair<Real, Real> random_time_pair(Engine& engine) {
  std::uniform_real_distribution<Real> unif(Real(0), Real(2) * std::numbers::pi_v<Real>);
  Real t1 = unif(engine), t2 = unif(engine);
  if (t1 > t2) std::swap(t1, t2);
  if (t2 - t1 < Real(0.01)) t2 = t1 + Real(0.01);
  return {t1, t2};
}

template <typename Real, typename Engine>
TwoTimeOperator<Real> random_two_time_operator(Eigen::Index dim, Engine& engine) {
  const auto [t1, t2] = random_time_pair<Real>(engine);
  const TwoTimeKind kind =
      std::bernoulli_distribution(0.5)(engine) ? TwoTimeKind::product : TwoTimeKind::sum;
  auto a = random_observable<Real>(dim, engine);
  auto b = random_observable<Real>(dim, engine);
  return {kind, std::move(a), std::move(b), t1, t2, random_unitary_channel<Real>(dim, engine)};
}

/// Gaussian preparation on or above the minimal-uncertainty boundary.
template <typename Real, typename Engine>
GaussianPrep<Real> random_gaussian_prep(Engine& engine) {
  std::uniform_real_distribution<Real> unif(Real(0), Real(1));
  const Real x0 = Real(10) * (unif(engine) - Real(0.5));
  const Real p0 = Real(10) * (unif(engine) - Real(0.5));
  const Real dx = std::exp(Real(4) * (unif(engine) - Real(0.5)));
  const Real corr = Real(4) * (unif(engine) - Real(0.5));
  const Real dp_min = std::sqrt(Real(0.25) + corr * corr) / dx;
  const Real dp = dp_min * (Real(1) + (unif(engine) < Real(0.3) ? Real(0) : Real(3) * unif(engine)));
  return GaussianPrep<Real>(x0, p0, dx, dp, corr);
}

}  // namespace twotime
