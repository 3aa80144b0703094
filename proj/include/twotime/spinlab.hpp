#pragma once

// Closed-form spin-1/2 results for precession in a static field along h_hat
// (H = omega S_h, phase tau = omega t): Heisenberg Pauli operators, the
// finite and instantaneous dimensionless torque, the irrealities of
// T^x_{2 pi} = -sigma_y (h along z) and sigma^x_{2 pi} = sigma_x, their entropic lower
// bound, and the Bloch form of the conditional Lambda operator.
//
// Note on 1/2 {S_x(t1), S_y(t2)}: it equals (1/4) sin(tau2 - tau1) times the
// identity. It is proportional to the identity for all times and vanishes
// only when tau2 - tau1 is a multiple of pi.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "twotime/correlators.hpp"
#include "twotime/qcore.hpp"
#include "twotime/realism.hpp"

namespace twotime {

inline constexpr std::uint64_t kDefaultSeed = 20240001;
inline constexpr std::size_t kCurvePoints = 360;

template <typename Real>
using PauliTriple = std::array<Matrix2<Real>, 3>;

template <typename Real>
class PrecessionConfig {
 public:
  PrecessionConfig(const Vector3<Real>& h_hat, Real tau) : h_hat_(h_hat), tau_(tau) {
    if (std::abs(h_hat_.norm() - Real(1)) > Real(1e-12)) {
      std::ostringstream msg;
      msg << "PrecessionConfig: field direction has norm " << h_hat_.norm() << ", expected 1";
      throw std::invalid_argument(msg.str());
    }
  }

  const Vector3<Real>& h_hat() const { return h_hat_; }
  Real tau() const { return tau_; }

 private:
  Vector3<Real> h_hat_;
  Real tau_;
};

/// v . (M_x, M_y, M_z)
template <typename Real>
Matrix2<Real> dot(const Vector3<Real>& v, const PauliTriple<Real>& m) {
  return v(0) * m[0] + v(1) * m[1] + v(2) * m[2];
}

/// h x sigma
template <typename Real>
PauliTriple<Real> cross_sigma(const Vector3<Real>& h) {
  const auto s = pauli_vector<Real>();
  return {h(1) * s[2] - h(2) * s[1], h(2) * s[0] - h(0) * s[2], h(0) * s[1] - h(1) * s[0]};
}

/// sigma(tau) = sigma cos tau + h x sigma sin tau + h (h . sigma)(1 - cos tau)
template <typename Real>
PauliTriple<Real> pauli_heisenberg(const PrecessionConfig<Real>& cfg) {
  const auto& h = cfg.h_hat();
  const Real c = std::cos(cfg.tau());
  const Real s = std::sin(cfg.tau());
  const auto sigma = pauli_vector<Real>();
  const auto hxs = cross_sigma(h);
  const Matrix2<Real> hs = dot_sigma(h);
  PauliTriple<Real> out;
  for (int i = 0; i < 3; ++i) out[i] = sigma[i] * c + hxs[i] * s + h(i) * hs * (Real(1) - c);
  return out;
}

/// (sigma(tau2) - sigma(tau1)) / (tau2 - tau1)
template <typename Real>
PauliTriple<Real> finite_torque(const Vector3<Real>& h_hat, Real tau1, Real tau2) {
  if (tau2 == tau1)
    throw std::invalid_argument("finite_torque: tau1 == tau2, use instantaneous_torque");
  const auto s2 = pauli_heisenberg(PrecessionConfig<Real>(h_hat, tau2));
  const auto s1 = pauli_heisenberg(PrecessionConfig<Real>(h_hat, tau1));
  PauliTriple<Real> out;
  for (int i = 0; i < 3; ++i) out[i] = (s2[i] - s1[i]) / (tau2 - tau1);
  return out;
}

/// T_tau = h x sigma cos tau + (h (h . sigma) - sigma) sin tau
template <typename Real>
PauliTriple<Real> instantaneous_torque(const PrecessionConfig<Real>& cfg) {
  const auto& h = cfg.h_hat();
  const Real c = std::cos(cfg.tau());
  const Real s = std::sin(cfg.tau());
  const auto sigma = pauli_vector<Real>();
  const auto hxs = cross_sigma(h);
  const Matrix2<Real> hs = dot_sigma(h);
  PauliTriple<Real> out;
  for (int i = 0; i < 3; ++i) out[i] = hxs[i] * c + (h(i) * hs - sigma[i]) * s;
  return out;
}

template <typename Real>
struct TorquePair {
  Real irr_torque;  // I(T^x_{2 pi} | rho_0) = I(-sigma_y | rho_0) = I(sigma_y | rho_0)
  Real irr_spin;    // I(sigma^x_{2 pi} | rho_0) = I(sigma_x | rho_0)
  Real r;
  Real theta;
  Real phi;

  Real sum() const { return irr_torque + irr_spin; }
};

/// ln 2 - H_bin((1 + r) / 2)
template <typename Real>
Real bound_rhs(Real r) {
  if (!(r >= Real(0) && r <= Real(1))) {
    std::ostringstream msg;
    msg << "bound_rhs: r = " << r << " outside [0, 1]";
    throw std::domain_error(msg.str());
  }
  return std::numbers::ln2_v<Real> - binary_entropy((Real(1) + r) / Real(2));
}

namespace detail {

template <typename Real>
TorquePair<Real> torque_pair_from(Real r, Real rx, Real ry, Real theta, Real phi) {
  const Real mixed = binary_entropy((Real(1) + r) / Real(2));
  return {binary_entropy((Real(1) + std::abs(ry)) / Real(2)) - mixed,
          binary_entropy((Real(1) + std::abs(rx)) / Real(2)) - mixed, r, theta, phi};
}

}  // namespace detail

/// Closed-form irrealities of sigma_y and sigma_x for rho_0 = (1 + r . sigma)/2.
template <typename Real>
TorquePair<Real> torque_irreality_pair(const BlochVector<Real>& r) {
  return detail::torque_pair_from(r.norm(), r.x(), r.y(), r.theta(), r.phi());
}

/// Same pair through the generic dephasing/entropy pipeline.
template <typename Real>
TorquePair<Real> torque_irreality_pair_numeric(const BlochVector<Real>& r) {
  const auto rho = bloch_to_state(r);
  return {irreality(Observable<Real>(pauli_y<Real>()), rho).irreality,
          irreality(Observable<Real>(pauli_x<Real>()), rho).irreality, r.norm(), r.theta(),
          r.phi()};
}

template <typename Real>
struct LambdaNu {
  Vector3<Real> nu;
  Real norm;
};

/// Bloch vector nu = (r1 - z) / (1 - z . r1) of Lambda for the a = -1
/// projector along z and the pure state with unit Bloch vector r1. Its norm
/// is 1 / |sin(theta / 2)|.
template <typename Real>
LambdaNu<Real> bloch_lambda_nu(const Vector3<Real>& r1_hat) {
  if (std::abs(r1_hat.norm() - Real(1)) > Real(1e-10))
    throw std::invalid_argument("bloch_lambda_nu: r1 must be a unit vector");
  const Real denom = Real(1) - r1_hat(2);
  if (denom <= Real(1e-12)) {
    std::ostringstream msg;
    msg << "bloch_lambda_nu: pole at r1 = z (1 - z.r1 = " << denom << ")";
    throw UnconditionedOutcome(msg.str());
  }
  LambdaNu<Real> out;
  out.nu = (r1_hat - Vector3<Real>::UnitZ()) / denom;
  out.norm = out.nu.norm();
  return out;
}

template <typename Real>
struct Figure1Row {
  Real r;
  Real theta;
  Real phi;
  Real irr_spin;
  Real irr_torque;
  Real bound_rhs;
  bool is_curve;
};

template <typename Real>
struct Figure1Table {
  std::vector<Figure1Row<Real>> scatter;
  std::vector<Figure1Row<Real>> curves;
};

/// n random (theta, phi) samples per radius plus the analytic equatorial
/// (theta = pi/2) lower-boundary curve at kCurvePoints azimuths. Sample i of
/// radius k comes from stream (seed, k, i), so the table does not depend on
/// the worker count.
template <typename Real>
Figure1Table<Real> figure1_scan(const std::vector<Real>& r_values, std::size_t n,
                                std::uint64_t seed, unsigned workers = 1) {
  for (const Real r : r_values) bound_rhs(r);  // validates r
  workers = std::max(1u, workers);

  Figure1Table<Real> table;
  table.scatter.resize(r_values.size() * n);
  const auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t row = begin; row < end; ++row) {
      const std::size_t k = row / n;
      const std::size_t i = row % n;
      const Real r = r_values[k];
      const auto [theta, phi] = random_angles<Real>(seed, k, i);
      const auto v = BlochVector<Real>::spherical(r, theta, phi);
      const auto pair = detail::torque_pair_from(r, v.x(), v.y(), theta, phi);
      table.scatter[row] = {r, theta, phi, pair.irr_spin, pair.irr_torque, bound_rhs(r), false};
    }
  };
  const std::size_t total = table.scatter.size();
  if (workers == 1) {
    fill(0, total);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (total + workers - 1) / workers;
    for (std::size_t begin = 0; begin < total; begin += chunk)
      pool.emplace_back(fill, begin, std::min(total, begin + chunk));
  }

  const Real half_pi = std::numbers::pi_v<Real> / Real(2);
  table.curves.reserve(r_values.size() * kCurvePoints);
  for (const Real r : r_values) {
    for (std::size_t j = 0; j < kCurvePoints; ++j) {
      const Real phi = Real(2) * std::numbers::pi_v<Real> * Real(j) / Real(kCurvePoints);
      const Real rx = r * std::cos(phi);
      const Real ry = r * std::sin(phi);
      const auto pair = detail::torque_pair_from(r, rx, ry, half_pi, phi);
      table.curves.push_back({r, half_pi, phi, pair.irr_spin, pair.irr_torque, bound_rhs(r), true});
    }
  }
  return table;
}

/// Irreality sum on the equatorial curve at azimuth phi.
template <typename Real>
Real equatorial_curve_sum(Real r, Real phi) {
  return detail::torque_pair_from(r, r * std::cos(phi), r * std::sin(phi),
                                  std::numbers::pi_v<Real> / Real(2), phi)
      .sum();
}

template <typename Real>
struct BandMinimum {
  Real r;
  Real theta;
  Real phi;
  Real sum;        // irr_torque + irr_spin of the minimizing sample
  Real curve_sum;  // equatorial curve at the same phi
  Real bound;      // bound_rhs(r)
};

/// Sample minimizing the irreality sum within each radius band, in the order
/// the radii first appear in the scatter.
template <typename Real>
std::vector<BandMinimum<Real>> band_minima(const Figure1Table<Real>& table) {
  std::vector<BandMinimum<Real>> out;
  for (const auto& row : table.scatter) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& b) { return b.r == row.r; });
    const Real sum = row.irr_spin + row.irr_torque;
    if (it == out.end()) {
      out.push_back({row.r, row.theta, row.phi, sum, equatorial_curve_sum(row.r, row.phi),
                     row.bound_rhs});
    } else if (sum < it->sum) {
      *it = {row.r, row.theta, row.phi, sum, equatorial_curve_sum(row.r, row.phi), row.bound_rhs};
    }
  }
  return out;
}

using PrecessionConfigd = PrecessionConfig<double>;
using TorquePaird = TorquePair<double>;

}  // namespace twotime
