#pragma once

// Dense complex Hermitian algebra for small Hilbert spaces: states,
// observables with grouped spectral decompositions, entropies (in nats) and
// Bloch-sphere conversions for qubits.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "twotime/random.hpp"

namespace twotime {

template <typename Real>
using Matrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using Matrix2 = Eigen::Matrix<std::complex<Real>, 2, 2>;
template <typename Real>
using Vector3 = Eigen::Matrix<Real, 3, 1>;

inline constexpr double kStateHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositivityTol = 1e-10;
inline constexpr double kObservableHermitianTol = 1e-10;
inline constexpr double kGroupTol = 1e-9;

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar max_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
Matrix<typename Derived::RealScalar> hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  return Real(0.5) * (m + m.adjoint());
}

template <typename Real>
Matrix<Real> anticommutator(const Matrix<Real>& a, const Matrix<Real>& b) {
  return a * b + b * a;
}

template <typename Real>
struct SpectralTerm {
  Real value;
  Matrix<Real> projector;
  Eigen::Index rank;
};

/// Eigen-decomposes a Hermitian matrix and merges eigenvalues closer than
/// `group_tol` into one projector. Terms are sorted by ascending eigenvalue.
template <typename Derived>
std::vector<SpectralTerm<typename Derived::RealScalar>> spectral_decompose(
    const Eigen::MatrixBase<Derived>& h,
    typename Derived::RealScalar group_tol = typename Derived::RealScalar(kGroupTol)) {
  using Real = typename Derived::RealScalar;
  if (h.rows() != h.cols() || h.rows() == 0)
    throw std::invalid_argument("spectral_decompose: matrix must be square and non-empty");
  const Real defect = hermiticity_defect(h);
  if (defect > Real(kObservableHermitianTol)) {
    std::ostringstream msg;
    msg << "spectral_decompose: matrix is not Hermitian, ||H - H^dagger||_max = " << defect;
    throw std::invalid_argument(msg.str());
  }

  Eigen::SelfAdjointEigenSolver<Matrix<Real>> solver(hermitian_part(h));
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  const Eigen::Index d = h.rows();

  std::vector<SpectralTerm<Real>> terms;
  Eigen::Index begin = 0;
  for (Eigen::Index i = 1; i <= d; ++i) {
    if (i < d && values(i) - values(i - 1) <= group_tol) continue;
    const Eigen::Index rank = i - begin;
    const auto block = vectors.middleCols(begin, rank);
    terms.push_back({values.segment(begin, rank).mean(), block * block.adjoint(), rank});
    begin = i;
  }
  return terms;
}

/// Hermitian matrix with its cached spectral decomposition A = sum_a a P_a.
template <typename Real>
class Observable {
 public:
  template <typename Derived>
  explicit Observable(const Eigen::MatrixBase<Derived>& matrix, Real group_tol = Real(kGroupTol))
      : spectrum_(spectral_decompose(matrix, group_tol)),
        matrix_(hermitian_part(matrix)),
        group_tol_(group_tol) {}

  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix<Real>& matrix() const { return matrix_; }
  const std::vector<SpectralTerm<Real>>& spectrum() const { return spectrum_; }
  Real group_tol() const { return group_tol_; }

  std::vector<Real> eigenvalues() const {
    std::vector<Real> out;
    out.reserve(spectrum_.size());
    for (const auto& term : spectrum_) out.push_back(term.value);
    return out;
  }

 private:
  std::vector<SpectralTerm<Real>> spectrum_;
  Matrix<Real> matrix_;
  Real group_tol_;
};

/// Hermitian, unit-trace, positive semidefinite matrix. Construction
/// validates all three invariants.
template <typename Real>
class DensityMatrix {
 public:
  template <typename Derived>
  explicit DensityMatrix(const Eigen::MatrixBase<Derived>& matrix) : matrix_(matrix) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
      throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
    const Real defect = hermiticity_defect(matrix_);
    if (defect > Real(kStateHermitianTol)) {
      std::ostringstream msg;
      msg << "DensityMatrix: not Hermitian, ||M - M^dagger||_max = " << defect;
      throw std::invalid_argument(msg.str());
    }
    const Real trace = matrix_.trace().real();
    if (std::abs(trace - Real(1)) > Real(kTraceTol)) {
      std::ostringstream msg;
      msg << "DensityMatrix: trace is " << trace << ", expected 1";
      throw std::invalid_argument(msg.str());
    }
    const Real min_eig = eigenvalues().minCoeff();
    if (min_eig < -Real(kPositivityTol)) {
      std::ostringstream msg;
      msg << "DensityMatrix: negative eigenvalue " << min_eig;
      throw std::invalid_argument(msg.str());
    }
  }

  static DensityMatrix maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(Matrix<Real>::Identity(dim, dim) / Real(dim));
  }

  template <typename Derived>
  static DensityMatrix pure(const Eigen::MatrixBase<Derived>& ket) {
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> psi = ket;
    psi.normalize();
    return DensityMatrix(psi * psi.adjoint());
  }

  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix<Real>& matrix() const { return matrix_; }

  Eigen::Matrix<Real, Eigen::Dynamic, 1> eigenvalues() const {
    return Eigen::SelfAdjointEigenSolver<Matrix<Real>>(matrix_, Eigen::EigenvaluesOnly)
        .eigenvalues();
  }

  Real purity() const { return (matrix_ * matrix_).trace().real(); }

 private:
  Matrix<Real> matrix_;
};

/// Tr(A rho), real part.
template <typename Real>
Real expectation(const Matrix<Real>& op, const DensityMatrix<Real>& rho) {
  return (op * rho.matrix()).trace().real();
}

namespace detail {

template <typename Real>
Real entropy_term(Real p) {
  return p > Real(0) ? -p * std::log(p) : Real(0);
}

}  // namespace detail

/// -u ln u - (1-u) ln(1-u), in nats. Inputs within 1e-12 of [0,1] are clamped.
template <typename Real>
Real binary_entropy(Real u) {
  constexpr Real slack = Real(1e-12);
  if (!(u >= -slack && u <= Real(1) + slack)) {
    std::ostringstream msg;
    msg << "binary_entropy: argument " << u << " outside [0, 1]";
    throw std::domain_error(msg.str());
  }
  u = std::clamp(u, Real(0), Real(1));
  return detail::entropy_term(u) + detail::entropy_term(Real(1) - u);
}

/// -Tr(rho ln rho), in nats. Eigenvalues in [-1e-10, 0) count as zero.
template <typename Real>
Real von_neumann_entropy(const DensityMatrix<Real>& rho) {
  Real s = 0;
  for (const Real p : rho.eigenvalues()) s += detail::entropy_term(p);
  return s;
}

/// Tr[rho (ln rho - ln eta)]. Returns +infinity when rho has weight outside
/// the support of eta.
template <typename Real>
Real relative_entropy(const DensityMatrix<Real>& rho, const DensityMatrix<Real>& eta) {
  if (rho.dim() != eta.dim())
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  constexpr Real kernel_tol = Real(1e-12);
  constexpr Real weight_tol = Real(1e-10);

  Eigen::SelfAdjointEigenSolver<Matrix<Real>> solver(eta.matrix());
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();

  Real cross = 0;  // Tr(rho ln eta)
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const Real weight = (vectors.col(k).adjoint() * rho.matrix() * vectors.col(k))(0, 0).real();
    if (values(k) < kernel_tol) {
      if (weight > weight_tol) return std::numeric_limits<Real>::infinity();
      continue;
    }
    cross += weight * std::log(values(k));
  }
  const Real value = -von_neumann_entropy(rho) - cross;
  return std::max(value, Real(0));
}

// Pauli matrices and spin-1/2 operators (hbar = 1, so S = sigma / 2).

template <typename Real>
Matrix2<Real> pauli_x() {
  Matrix2<Real> m;
  m << 0, 1, 1, 0;
  return m;
}

template <typename Real>
Matrix2<Real> pauli_y() {
  const std::complex<Real> i(0, 1);
  Matrix2<Real> m;
  m << 0, -i, i, 0;
  return m;
}

template <typename Real>
Matrix2<Real> pauli_z() {
  Matrix2<Real> m;
  m << 1, 0, 0, -1;
  return m;
}

template <typename Real>
std::array<Matrix2<Real>, 3> pauli_vector() {
  return {pauli_x<Real>(), pauli_y<Real>(), pauli_z<Real>()};
}

/// v . sigma
template <typename Real>
Matrix2<Real> dot_sigma(const Vector3<Real>& v) {
  return v(0) * pauli_x<Real>() + v(1) * pauli_y<Real>() + v(2) * pauli_z<Real>();
}

/// Real coefficients (Tr M sigma_i) of a 2x2 matrix; the Bloch vector when M
/// has unit trace.
template <typename Derived>
Vector3<typename Derived::RealScalar> pauli_components(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  if (m.rows() != 2 || m.cols() != 2)
    throw std::invalid_argument("pauli_components: expected a 2x2 matrix");
  const Matrix2<Real> mm = m;
  return {(mm * pauli_x<Real>()).trace().real(), (mm * pauli_y<Real>()).trace().real(),
          (mm * pauli_z<Real>()).trace().real()};
}

/// Real 3-vector inside the unit ball.
template <typename Real>
class BlochVector {
 public:
  explicit BlochVector(const Vector3<Real>& r) : r_(r) {
    if (!(r_.norm() <= Real(1) + Real(1e-12))) {
      std::ostringstream msg;
      msg << "BlochVector: norm " << r_.norm() << " exceeds 1";
      throw std::invalid_argument(msg.str());
    }
  }
  BlochVector(Real x, Real y, Real z) : BlochVector(Vector3<Real>(x, y, z)) {}

  /// r (sin theta cos phi, sin theta sin phi, cos theta)
  static BlochVector spherical(Real r, Real theta, Real phi) {
    return BlochVector(Vector3<Real>(r * std::sin(theta) * std::cos(phi),
                                     r * std::sin(theta) * std::sin(phi), r * std::cos(theta)));
  }

  const Vector3<Real>& vector() const { return r_; }
  Real x() const { return r_(0); }
  Real y() const { return r_(1); }
  Real z() const { return r_(2); }
  Real norm() const { return r_.norm(); }

  Real theta() const {
    const Real n = norm();
    return n > Real(0) ? std::acos(std::clamp(r_(2) / n, Real(-1), Real(1))) : Real(0);
  }

  /// Azimuth in [0, 2 pi).
  Real phi() const {
    Real p = std::atan2(r_(1), r_(0));
    if (p < Real(0)) p += Real(2) * std::numbers::pi_v<Real>;
    return p >= Real(2) * std::numbers::pi_v<Real> ? Real(0) : p;
  }

 private:
  Vector3<Real> r_;
};

/// rho = (1 + r . sigma) / 2
template <typename Real>
DensityMatrix<Real> bloch_to_state(const BlochVector<Real>& r) {
  Matrix2<Real> m = Real(0.5) * (Matrix2<Real>::Identity() + dot_sigma(r.vector()));
  return DensityMatrix<Real>(m);
}

template <typename Real>
BlochVector<Real> state_to_bloch(const DensityMatrix<Real>& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("state_to_bloch: state is not a qubit");
  return BlochVector<Real>(pauli_components(rho.matrix()));
}

/// Polar and azimuthal angles, theta ~ U[0, pi] and phi ~ U[0, 2 pi), drawn
/// from the stream (seed, stream, index).
template <typename Real>
std::pair<Real, Real> random_angles(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t index) {
  auto engine = seeded_stream(seed, stream, index);
  std::uniform_real_distribution<Real> polar(Real(0), std::numbers::pi_v<Real>);
  std::uniform_real_distribution<Real> azimuth(Real(0), Real(2) * std::numbers::pi_v<Real>);
  const Real theta = polar(engine);
  const Real phi = azimuth(engine);
  return {theta, phi};
}

/// n Bloch vectors of norm r, uniform in (theta, phi) rather than in area.
/// Sample i is drawn from the stream (seed, stream, i).
template <typename Real>
std::vector<BlochVector<Real>> random_bloch_states(Real r, std::size_t n, std::uint64_t seed,
                                                   std::uint64_t stream = 0) {
  if (!(r >= Real(0) && r <= Real(1))) {
    std::ostringstream msg;
    msg << "random_bloch_states: radius " << r << " outside [0, 1]";
    throw std::domain_error(msg.str());
  }
  std::vector<BlochVector<Real>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [theta, phi] = random_angles<Real>(seed, stream, i);
    out.push_back(BlochVector<Real>::spherical(r, theta, phi));
  }
  return out;
}

using Matrixd = Matrix<double>;
using Matrix2d = Matrix2<double>;
using Vector3d = Vector3<double>;
using Observabled = Observable<double>;
using DensityMatrixd = DensityMatrix<double>;
using BlochVectord = BlochVector<double>;

}  // namespace twotime
