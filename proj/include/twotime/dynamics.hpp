#pragma once

// One-parameter channel families. phi*_t acts on states (Schroedinger
// picture), phi_t on observables (Heisenberg picture). Unitary families are
// generated by a time-independent Hamiltonian (hbar = 1); the two-time
// correlator algebra relies on phi*_t = phi_{-t} and is restricted to them.

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "twotime/qcore.hpp"

namespace twotime {

enum class ChannelKind { unitary, kraus };

template <typename Real>
class ChannelFamily {
 public:
  /// U_t = exp(-i H t), computed from the spectral decomposition of H.
  template <typename Derived>
  static ChannelFamily unitary(const Eigen::MatrixBase<Derived>& hamiltonian) {
    const Real defect = hermiticity_defect(hamiltonian);
    if (hamiltonian.rows() != hamiltonian.cols() || defect > Real(kObservableHermitianTol)) {
      std::ostringstream msg;
      msg << "ChannelFamily: Hamiltonian is not Hermitian, ||H - H^dagger||_max = " << defect;
      throw std::invalid_argument(msg.str());
    }
    ChannelFamily c;
    c.kind_ = ChannelKind::unitary;
    c.hamiltonian_ = hermitian_part(hamiltonian);
    Eigen::SelfAdjointEigenSolver<Matrix<Real>> solver(c.hamiltonian_);
    c.energies_ = solver.eigenvalues();
    c.eigenbasis_ = solver.eigenvectors();
    return c;
  }

  /// Fixed Kraus map applied once per unit of time; only non-negative
  /// integer times are defined.
  static ChannelFamily kraus_step(std::vector<Matrix<Real>> kraus) {
    if (kraus.empty()) throw std::invalid_argument("ChannelFamily: empty Kraus set");
    const Eigen::Index d = kraus.front().rows();
    Matrix<Real> completeness = Matrix<Real>::Zero(d, d);
    for (const auto& k : kraus) {
      if (k.rows() != d || k.cols() != d)
        throw std::invalid_argument("ChannelFamily: Kraus operators must be square, same size");
      completeness += k.adjoint() * k;
    }
    const Real defect = max_norm(completeness - Matrix<Real>::Identity(d, d));
    if (defect > Real(1e-10)) {
      std::ostringstream msg;
      msg << "ChannelFamily: Kraus set is not trace preserving, defect " << defect;
      throw std::invalid_argument(msg.str());
    }
    ChannelFamily c;
    c.kind_ = ChannelKind::kraus;
    c.kraus_ = std::move(kraus);
    return c;
  }

  ChannelKind kind() const { return kind_; }
  bool is_unitary() const { return kind_ == ChannelKind::unitary; }
  Eigen::Index dim() const { return is_unitary() ? hamiltonian_.rows() : kraus_.front().rows(); }

  const Matrix<Real>& hamiltonian() const {
    require_unitary("hamiltonian");
    return hamiltonian_;
  }

  Matrix<Real> propagator(Real t) const {
    require_unitary("propagator");
    const std::complex<Real> minus_i(0, -1);
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> phases =
        (minus_i * t * energies_.template cast<std::complex<Real>>()).array().exp();
    return eigenbasis_ * phases.asDiagonal() * eigenbasis_.adjoint();
  }

  /// phi*_t(X): U X U^dagger, or the Kraus map applied t times.
  Matrix<Real> schrodinger(const Matrix<Real>& x, Real t) const {
    check_dim(x);
    if (is_unitary()) {
      const Matrix<Real> u = propagator(t);
      return u * x * u.adjoint();
    }
    Matrix<Real> out = x;
    for (long s = steps(t); s > 0; --s) {
      Matrix<Real> next = Matrix<Real>::Zero(x.rows(), x.cols());
      for (const auto& k : kraus_) next += k * out * k.adjoint();
      out = std::move(next);
    }
    return out;
  }

  /// phi_t(X): U^dagger X U, or the dual Kraus map applied t times.
  Matrix<Real> heisenberg(const Matrix<Real>& x, Real t) const {
    check_dim(x);
    if (is_unitary()) {
      const Matrix<Real> u = propagator(t);
      return u.adjoint() * x * u;
    }
    Matrix<Real> out = x;
    for (long s = steps(t); s > 0; --s) {
      Matrix<Real> next = Matrix<Real>::Zero(x.rows(), x.cols());
      for (const auto& k : kraus_) next += k.adjoint() * out * k;
      out = std::move(next);
    }
    return out;
  }

  void require_unitary(const char* what) const {
    if (!is_unitary())
      throw std::logic_error(std::string(what) + ": requires a unitary channel family");
  }

 private:
  ChannelFamily() = default;

  void check_dim(const Matrix<Real>& x) const {
    if (x.rows() != dim() || x.cols() != dim()) {
      std::ostringstream msg;
      msg << "ChannelFamily: dimension mismatch (" << x.rows() << "x" << x.cols()
          << " operand, channel dim " << dim() << ")";
      throw std::invalid_argument(msg.str());
    }
  }

  long steps(Real t) const {
    const Real rounded = std::round(t);
    if (t < Real(0) || std::abs(t - rounded) > Real(1e-12)) {
      std::ostringstream msg;
      msg << "ChannelFamily: Kraus family defined only at non-negative integer times, got " << t;
      throw std::domain_error(msg.str());
    }
    return static_cast<long>(rounded);
  }

  ChannelKind kind_ = ChannelKind::unitary;
  Matrix<Real> hamiltonian_;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> energies_;
  Matrix<Real> eigenbasis_;
  std::vector<Matrix<Real>> kraus_;
};

/// Trivial dynamics (H = 0) on a d-dimensional space.
template <typename Real>
ChannelFamily<Real> identity_channel(Eigen::Index dim) {
  return ChannelFamily<Real>::unitary(Matrix<Real>::Zero(dim, dim));
}

/// Spin-1/2 in a field along h_hat with unit Larmor frequency:
/// H = S_h = (h_hat . sigma) / 2, so the time argument is the phase tau.
template <typename Real>
ChannelFamily<Real> spin_precession(const Vector3<Real>& h_hat) {
  if (std::abs(h_hat.norm() - Real(1)) > Real(1e-12))
    throw std::invalid_argument("spin_precession: field direction must be a unit vector");
  return ChannelFamily<Real>::unitary(Matrix2<Real>(Real(0.5) * dot_sigma(h_hat)));
}

/// rho_t = phi*_t(rho_0)
template <typename Real>
DensityMatrix<Real> evolve_state(const ChannelFamily<Real>& channel,
                                 const DensityMatrix<Real>& rho0, Real t) {
  return DensityMatrix<Real>(hermitian_part(channel.schrodinger(rho0.matrix(), t)));
}

/// A(t) = phi_t(A); keeps the grouping tolerance of A.
template <typename Real>
Observable<Real> evolve_observable(const ChannelFamily<Real>& channel, const Observable<Real>& a,
                                   Real t) {
  return Observable<Real>(hermitian_part(channel.heisenberg(a.matrix(), t)), a.group_tol());
}

using ChannelFamilyd = ChannelFamily<double>;

}  // namespace twotime
