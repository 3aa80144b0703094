#pragma once

// Realism of an observable A for a preparation rho: the nonselective
// measurement map Phi_A(rho) = sum_a P_a rho P_a and the irreality
// I(A|rho) = S(Phi_A(rho)) - S(rho) = min_sigma S(rho || Phi_A(sigma)).

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "twotime/qcore.hpp"
#include "twotime/random.hpp"

namespace twotime {

inline constexpr double kRealityTol = 1e-8;

template <typename Real>
DensityMatrix<Real> dephase(const Observable<Real>& a, const DensityMatrix<Real>& rho) {
  if (a.dim() != rho.dim()) throw std::invalid_argument("dephase: dimension mismatch");
  Matrix<Real> out = Matrix<Real>::Zero(rho.dim(), rho.dim());
  for (const auto& term : a.spectrum()) out += term.projector * rho.matrix() * term.projector;
  return DensityMatrix<Real>(hermitian_part(out));
}

/// rho = Phi_A(rho) within the max-norm tolerance.
template <typename Real>
bool is_reality_state(const Observable<Real>& a, const DensityMatrix<Real>& rho,
                      Real tol = Real(kRealityTol)) {
  return max_norm(Matrix<Real>(rho.matrix() - dephase(a, rho).matrix())) <= tol;
}

template <typename Real>
struct IrrealityReport {
  Real irreality;
  Real entropy_dephased;
  Real entropy_state;
};

/// Entropy-difference form; always finite.
template <typename Real>
IrrealityReport<Real> irreality(const Observable<Real>& a, const DensityMatrix<Real>& rho) {
  const Real dephased = von_neumann_entropy(dephase(a, rho));
  const Real state = von_neumann_entropy(rho);
  return {dephased - state, dephased, state};
}

template <typename Real>
struct MinFormReport {
  Real irreality;
  Real at_minimizer;     // S(rho || Phi_A(rho))
  Real identity_gap;     // |at_minimizer - irreality|
  Real min_sampled;      // min_i S(rho || Phi_A(sigma_i)); +inf if all diverge
  Real worst_margin;     // min_i [S(rho || Phi_A(sigma_i)) - irreality]
  std::size_t samples;
  std::size_t infinite_samples;
  bool holds;            // identity_gap <= 1e-10 and worst_margin >= -1e-10
};

/// Checks the minimization form of the irreality: equality at sigma = rho and
/// no random sigma doing better.
template <typename Real>
MinFormReport<Real> min_form_check(const Observable<Real>& a, const DensityMatrix<Real>& rho,
                                   std::size_t n_samples, std::uint64_t seed) {
  constexpr Real tol = Real(1e-10);
  constexpr Real inf = std::numeric_limits<Real>::infinity();
  MinFormReport<Real> report{};
  report.irreality = irreality(a, rho).irreality;
  report.at_minimizer = relative_entropy(rho, dephase(a, rho));
  report.identity_gap = std::abs(report.at_minimizer - report.irreality);
  report.min_sampled = inf;
  report.worst_margin = inf;
  report.samples = n_samples;
  for (std::size_t i = 0; i < n_samples; ++i) {
    auto engine = seeded_stream(seed, 0, i);
    const DensityMatrix<Real> sigma(random_density_matrix<Real>(rho.dim(), engine));
    const Real value = relative_entropy(rho, dephase(a, sigma));
    if (std::isinf(value)) {
      ++report.infinite_samples;
      continue;
    }
    report.min_sampled = std::min(report.min_sampled, value);
    report.worst_margin = std::min(report.worst_margin, value - report.irreality);
  }
  report.holds = report.identity_gap <= tol && report.worst_margin >= -tol;
  return report;
}

template <typename Real>
struct ComplementarityReport {
  Real entropy_first;   // S(Phi_A(rho))
  Real entropy_second;  // S(Phi_B(rho))
  Real entropy_state;   // S(rho)
  Real lhs;             // entropy_first + entropy_second
  Real rhs;             // ln d + S(rho)
  Real slack;           // lhs - rhs
};

/// S(Phi_A(rho)) + S(Phi_B(rho)) >= ln d + S(rho), which follows from the
/// data-processing inequality whenever Phi_B(Phi_A(rho)) = 1/d. That
/// precondition is verified and violations are rejected.
template <typename Real>
ComplementarityReport<Real> complementarity_bound_check(const Observable<Real>& a,
                                                        const Observable<Real>& b,
                                                        const DensityMatrix<Real>& rho) {
  const Eigen::Index d = rho.dim();
  const auto twice = dephase(b, dephase(a, rho));
  const Real defect =
      max_norm(Matrix<Real>(twice.matrix() - Matrix<Real>::Identity(d, d) / Real(d)));
  if (defect > Real(1e-10)) {
    std::ostringstream msg;
    msg << "complementarity_bound_check: composed dephasing is not maximally mixed (defect "
        << defect << ")";
    throw std::invalid_argument(msg.str());
  }
  ComplementarityReport<Real> r;
  r.entropy_first = von_neumann_entropy(dephase(a, rho));
  r.entropy_second = von_neumann_entropy(dephase(b, rho));
  r.entropy_state = von_neumann_entropy(rho);
  r.lhs = r.entropy_first + r.entropy_second;
  r.rhs = std::log(Real(d)) + r.entropy_state;
  r.slack = r.lhs - r.rhs;
  return r;
}

/// The qubit (sigma_x, sigma_y) case.
template <typename Real>
ComplementarityReport<Real> complementarity_bound_check(const DensityMatrix<Real>& rho) {
  if (rho.dim() != 2)
    throw std::invalid_argument("complementarity_bound_check: state is not a qubit");
  return complementarity_bound_check(Observable<Real>(pauli_x<Real>()),
                                     Observable<Real>(pauli_y<Real>()), rho);
}

}  // namespace twotime
