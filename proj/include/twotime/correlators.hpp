#pragma once

// Two-time correlators: the sequential two-point-measurement (TPM) value,
// the symmetrized Heisenberg value Tr(1/2 {A_1, B_2} rho_0), the conditional
// Lambda operator that the Heisenberg value substitutes for the collapsed
// state, and two-time operators C_12 treated as observables in their own
// right.

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "twotime/dynamics.hpp"
#include "twotime/qcore.hpp"

namespace twotime {

enum class TwoTimeKind { product, sum };

/// C_12 = 1/2 {A(t1), B(t2)} (product) or A(t1) + B(t2) (sum).
template <typename Real>
struct TwoTimeOperator {
  TwoTimeKind kind;
  Observable<Real> first;
  Observable<Real> second;
  Real t1;
  Real t2;
  ChannelFamily<Real> channel;
};

/// Thrown when conditioning on an outcome that has zero probability.
class UnconditionedOutcome : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Outcome statistics of the sequential protocol: marginal p(a, t1) and
/// conditional p(b, t2 | a, t1) (rows indexed by a). Rows whose marginal is
/// at most 1e-12 are left at zero.
template <typename Real>
struct TpmStatistics {
  std::vector<Real> outcomes_a;
  std::vector<Real> outcomes_b;
  std::vector<Real> marginal;
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> conditional;
  Real correlator;
};

inline constexpr double kMarginalTol = 1e-12;

template <typename Real>
TpmStatistics<Real> tpm_statistics(const Observable<Real>& a, const Observable<Real>& b, Real t1,
                                   Real t2, const ChannelFamily<Real>& channel,
                                   const DensityMatrix<Real>& rho0) {
  if (!(t2 > t1)) {
    std::ostringstream msg;
    msg << "tpm_correlator: requires t2 > t1, got t1 = " << t1 << ", t2 = " << t2;
    throw std::invalid_argument(msg.str());
  }
  if (a.dim() != rho0.dim() || b.dim() != rho0.dim() || channel.dim() != rho0.dim())
    throw std::invalid_argument("tpm_correlator: dimension mismatch");

  const Matrix<Real> rho_t1 = channel.schrodinger(rho0.matrix(), t1);
  const auto& alphas = a.spectrum();
  const auto& betas = b.spectrum();

  TpmStatistics<Real> stats;
  stats.outcomes_a = a.eigenvalues();
  stats.outcomes_b = b.eigenvalues();
  stats.marginal.assign(alphas.size(), Real(0));
  stats.conditional.setZero(alphas.size(), betas.size());
  stats.correlator = 0;

  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const Matrix<Real>& alpha = alphas[i].projector;
    const Real p_a = (alpha * rho_t1).trace().real();
    stats.marginal[i] = p_a;
    if (p_a <= Real(kMarginalTol)) continue;
    // Lueders update, then free evolution over [t1, t2].
    const Matrix<Real> collapsed = alpha * rho_t1 * alpha / p_a;
    const Matrix<Real> evolved = channel.schrodinger(collapsed, t2 - t1);
    for (std::size_t j = 0; j < betas.size(); ++j) {
      const Real p_b = (betas[j].projector * evolved).trace().real();
      stats.conditional(i, j) = p_b;
      stats.correlator += alphas[i].value * betas[j].value * p_b * p_a;
    }
  }
  return stats;
}

/// sum_{a,b} a b p(b, t2 | a, t1) p(a, t1)
template <typename Real>
Real tpm_correlator(const Observable<Real>& a, const Observable<Real>& b, Real t1, Real t2,
                    const ChannelFamily<Real>& channel, const DensityMatrix<Real>& rho0) {
  return tpm_statistics(a, b, t1, t2, channel, rho0).correlator;
}

/// Hermitian matrix of C_12 with grouped spectrum.
template <typename Real>
Observable<Real> realize(const TwoTimeOperator<Real>& c) {
  c.channel.require_unitary("realize");
  if (c.first.dim() != c.channel.dim() || c.second.dim() != c.channel.dim())
    throw std::invalid_argument("realize: dimension mismatch");
  const Matrix<Real> a1 = c.channel.heisenberg(c.first.matrix(), c.t1);
  const Matrix<Real> b2 = c.channel.heisenberg(c.second.matrix(), c.t2);
  if (c.kind == TwoTimeKind::product)
    return Observable<Real>(hermitian_part(Matrix<Real>(Real(0.5) * anticommutator(a1, b2))));
  return Observable<Real>(hermitian_part(Matrix<Real>(a1 + b2)));
}

/// Tr(C_12 rho_0). For the product kind this is the symmetrized Heisenberg
/// two-time correlator.
template <typename Real>
Real heisenberg_correlator(const TwoTimeOperator<Real>& c, const DensityMatrix<Real>& rho0) {
  c.channel.require_unitary("heisenberg_correlator");
  if (rho0.dim() != c.channel.dim())
    throw std::invalid_argument("heisenberg_correlator: dimension mismatch");
  return expectation(realize(c).matrix(), rho0);
}

/// The Heisenberg correlator rewritten in TPM form,
/// sum_{a,b} a b Tr[beta_b phi*_{t2-t1}(Lambda_a)] p(a, t1),
/// with p(a, t1) Lambda_a = 1/2 {alpha_a, rho_t1}. Independent of realize().
template <typename Real>
Real heisenberg_correlator_lambda_route(const Observable<Real>& a, const Observable<Real>& b,
                                        Real t1, Real t2, const ChannelFamily<Real>& channel,
                                        const DensityMatrix<Real>& rho0) {
  channel.require_unitary("heisenberg_correlator_lambda_route");
  if (a.dim() != rho0.dim() || b.dim() != rho0.dim() || channel.dim() != rho0.dim())
    throw std::invalid_argument("heisenberg_correlator_lambda_route: dimension mismatch");
  const Matrix<Real> rho_t1 = channel.schrodinger(rho0.matrix(), t1);
  Real total = 0;
  for (const auto& alpha : a.spectrum()) {
    const Matrix<Real> weighted = channel.schrodinger(
        Matrix<Real>(Real(0.5) * anticommutator(alpha.projector, rho_t1)), t2 - t1);
    for (const auto& beta : b.spectrum())
      total += alpha.value * beta.value * (beta.projector * weighted).trace().real();
  }
  return total;
}

template <typename Real>
struct LambdaReport {
  Matrix<Real> lambda;
  Real min_eigenvalue;
  Real trace;
  bool physical;
};

/// Lambda = {alpha_a, rho_t1} / (2 Tr(alpha_a rho_t1)). Unit trace and
/// Hermitian, but positive only when alpha_a and rho_t1 commute (for pure
/// qubit states).
template <typename Real>
LambdaReport<Real> lambda_operator(const Matrix<Real>& alpha, const DensityMatrix<Real>& rho0,
                                   Real t1, const ChannelFamily<Real>& channel) {
  if (alpha.rows() != rho0.dim() || alpha.cols() != rho0.dim())
    throw std::invalid_argument("lambda_operator: dimension mismatch");
  if (hermiticity_defect(alpha) > Real(1e-10) || max_norm(Matrix<Real>(alpha * alpha - alpha)) > Real(1e-10))
    throw std::invalid_argument("lambda_operator: alpha is not an orthogonal projector");

  const Matrix<Real> rho_t1 = channel.schrodinger(rho0.matrix(), t1);
  const Real p = (alpha * rho_t1).trace().real();
  if (p <= Real(kMarginalTol)) {
    std::ostringstream msg;
    msg << "lambda_operator: unconditioned outcome, Tr(alpha rho_t1) = " << p;
    throw UnconditionedOutcome(msg.str());
  }
  LambdaReport<Real> report;
  report.lambda = hermitian_part(Matrix<Real>(anticommutator(alpha, rho_t1) / (Real(2) * p)));
  report.trace = report.lambda.trace().real();
  report.min_eigenvalue =
      Eigen::SelfAdjointEigenSolver<Matrix<Real>>(report.lambda, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  report.physical = report.min_eigenvalue >= -Real(kPositivityTol);
  return report;
}

/// Normalized projector onto the k-th distinct eigenvalue (ascending) of an
/// observable; for degenerate eigenvalues, the maximally mixed state on the
/// eigenspace.
template <typename Real>
DensityMatrix<Real> eigenstate(const Observable<Real>& c, std::size_t k) {
  const auto& spectrum = c.spectrum();
  if (k >= spectrum.size()) {
    std::ostringstream msg;
    msg << "prepare_eigenstate: index " << k << " out of range (" << spectrum.size()
        << " distinct eigenvalues)";
    throw std::out_of_range(msg.str());
  }
  return DensityMatrix<Real>(spectrum[k].projector / Real(spectrum[k].rank));
}

template <typename Real>
DensityMatrix<Real> prepare_eigenstate(const TwoTimeOperator<Real>& c, std::size_t k) {
  return eigenstate(realize(c), k);
}

/// Qutrit instance on which the TPM and Heisenberg correlators disagree:
/// A = diag(1, 0, -1), B = spin-1 S_x, H = 0, t1 = 0, t2 = 1,
/// rho_0 = |psi><psi| with psi = (1, 1, 0) / sqrt 2.
/// Heisenberg value 1/(2 sqrt 2), TPM value 0.
template <typename Real>
struct QutritGapFixture {
  Observable<Real> a;
  Observable<Real> b;
  ChannelFamily<Real> channel;
  DensityMatrix<Real> rho0;
  Real t1;
  Real t2;

  static QutritGapFixture make() {
    Matrix<Real> a(3, 3), b(3, 3);
    a.setZero();
    a.diagonal() << 1, 0, -1;
    const Real s = Real(1) / std::sqrt(Real(2));
    b << 0, s, 0, s, 0, s, 0, s, 0;
    Eigen::Matrix<std::complex<Real>, 3, 1> psi(1, 1, 0);
    return {Observable<Real>(a), Observable<Real>(b), identity_channel<Real>(3),
            DensityMatrix<Real>::pure(psi), Real(0), Real(1)};
  }

  TwoTimeOperator<Real> product_operator() const {
    return {TwoTimeKind::product, a, b, t1, t2, channel};
  }
};

using TwoTimeOperatord = TwoTimeOperator<double>;

}  // namespace twotime
