#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "twotime/correlators.hpp"
#include "twotime/ensembles.hpp"
#include "twotime/realism.hpp"
#include "twotime/spinlab.hpp"
#include "oracles.hpp"

using namespace twotime;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix2d spin_x() { return 0.5 * pauli_x<double>(); }
Matrix2d spin_y() { return 0.5 * pauli_y<double>(); }

TwoTimeOperatord product(const Observabled& a, const Observabled& b, double t1, double t2,
                         const ChannelFamilyd& channel) {
  return {TwoTimeKind::product, a, b, t1, t2, channel};
}

using oracle::Outcome;

}  // namespace

TEST(QutritFixture, BruteForceOracleValues) {
  // A = diag(1, 0, -1): eigenkets e_0, e_1, e_2. B = spin-1 S_x: eigenkets
  // (1, sqrt2, 1)/2 for +1, (1, 0, -1)/sqrt2 for 0, (1, -sqrt2, 1)/2 for -1.
  const double s2 = std::sqrt(2.0);
  const auto a_out = oracle::qutrit_diag_outcomes();
  const auto b_out = oracle::spin1_sx_outcomes();
  const auto fx = QutritGapFixture<double>::make();
  const Matrixd h = Matrixd::Zero(3, 3);
  const double tpm_expected = oracle::tpm(a_out, b_out, h, 0, 1, fx.rho0.matrix());
  const double heis_expected =
      oracle::heisenberg(fx.a.matrix(), fx.b.matrix(), h, 0, 1, fx.rho0.matrix());
  EXPECT_NEAR(tpm_expected, 0.0, 1e-15);
  EXPECT_NEAR(heis_expected, 1 / (2 * s2), 1e-15);

  const double tpm = tpm_correlator(fx.a, fx.b, fx.t1, fx.t2, fx.channel, fx.rho0);
  const double heis = heisenberg_correlator(fx.product_operator(), fx.rho0);
  EXPECT_NEAR(tpm, tpm_expected, 1e-12);
  EXPECT_NEAR(heis, heis_expected, 1e-12);
  EXPECT_GT(std::abs(tpm - heis), 1e-6);
}

TEST(TpmCorrelator, SignQubitsAgreeWithHeisenbergAndOracle) {
  std::mt19937_64 engine(21);
  double max_gap = 0;
  for (int i = 0; i < 1000; ++i) {
    const Matrixd ua = random_unitary<double>(2, engine);
    const Matrixd ub = random_unitary<double>(2, engine);
    const Eigen::Vector2cd signs(1, -1);
    const Matrixd a = ua * signs.asDiagonal() * ua.adjoint();
    const Matrixd b = ub * signs.asDiagonal() * ub.adjoint();
    const Matrixd h = random_hermitian<double>(2, engine);
    const auto rho0 = random_state<double>(2, engine);
    const auto [t1, t2] = random_time_pair<double>(engine);
    const auto channel = ChannelFamilyd::unitary(h);
    const Observabled oa(a), ob(b);

    const double tpm = tpm_correlator(oa, ob, t1, t2, channel, rho0);
    const double heis = heisenberg_correlator(product(oa, ob, t1, t2, channel), rho0);
    max_gap = std::max(max_gap, std::abs(tpm - heis));

    if (i < 100) {
      const std::vector<Outcome> a_out{{1.0, ua.col(0)}, {-1.0, ua.col(1)}};
      const std::vector<Outcome> b_out{{1.0, ub.col(0)}, {-1.0, ub.col(1)}};
      EXPECT_NEAR(tpm, oracle::tpm(a_out, b_out, h, t1, t2, rho0.matrix()), 1e-10);
      EXPECT_NEAR(heis, oracle::heisenberg(a, b, h, t1, t2, rho0.matrix()), 1e-10);
    }
  }
  EXPECT_LE(max_gap, 1e-10);
}

TEST(TpmCorrelator, AgreesWhenObservableIsRealAtFirstTime) {
  std::mt19937_64 engine(22);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index d = 2 + i % 2;
    const auto channel = random_unitary_channel<double>(d, engine);
    const auto a = random_observable<double>(d, engine);
    const auto b = random_observable<double>(d, engine);
    const auto [t1, t2] = random_time_pair<double>(engine);
    const auto rho_t1 = dephase(a, random_state<double>(d, engine));
    const DensityMatrixd rho0(hermitian_part(channel.heisenberg(rho_t1.matrix(), t1)));
    ASSERT_TRUE(is_reality_state(a, evolve_state(channel, rho0, t1)));
    const double tpm = tpm_correlator(a, b, t1, t2, channel, rho0);
    const double heis = heisenberg_correlator(product(a, b, t1, t2, channel), rho0);
    EXPECT_NEAR(tpm, heis, 1e-10);
  }
}

TEST(TpmCorrelator, ConditionalDistributionsNormalized) {
  std::mt19937_64 engine(23);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index d = 2 + i % 3;
    const auto channel = random_unitary_channel<double>(d, engine);
    const auto a = random_observable<double>(d, engine);
    const auto b = random_observable<double>(d, engine);
    const auto rho0 = random_state<double>(d, engine);
    const auto stats = tpm_statistics(a, b, 0.2, 1.1, channel, rho0);
    double marginal_total = 0;
    for (std::size_t k = 0; k < stats.marginal.size(); ++k) {
      marginal_total += stats.marginal[k];
      if (stats.marginal[k] <= kMarginalTol) continue;
      double row_total = 0;
      for (Eigen::Index j = 0; j < stats.conditional.cols(); ++j) {
        const double p = stats.conditional(Eigen::Index(k), j);
        EXPECT_GE(p, -1e-12);
        EXPECT_LE(p, 1 + 1e-12);
        row_total += p;
      }
      EXPECT_NEAR(row_total, 1.0, 1e-10);
    }
    EXPECT_NEAR(marginal_total, 1.0, 1e-10);
  }
}

TEST(TpmCorrelator, VanishingMarginalBranchContributesZero) {
  // rho0 = |0><0| with A = sigma_z: the a = -1 branch has zero probability.
  const auto channel = identity_channel<double>(2);
  const auto rho0 = DensityMatrixd::pure(Eigen::Vector2cd(1, 0));
  const auto stats =
      tpm_statistics(Observabled(pauli_z<double>()), Observabled(pauli_x<double>()), 0.0, 1.0,
                     channel, rho0);
  EXPECT_NEAR(stats.marginal[0], 0.0, 1e-15);
  EXPECT_EQ(stats.conditional.row(0).sum(), 0.0);
  EXPECT_NEAR(stats.correlator, 0.0, 1e-15);
}

TEST(TpmCorrelator, DegenerateObservableUsesLuedersUpdate) {
  // A = diag(1, 1, -1) is degenerate; conditional state on a=1 keeps coherence.
  std::mt19937_64 engine(24);
  Matrixd a = Matrixd::Zero(3, 3);
  a.diagonal() << 1, 1, -1;
  const Observabled oa(a);
  ASSERT_EQ(oa.spectrum().size(), 2u);
  const auto b = random_observable<double>(3, engine);
  const auto channel = random_unitary_channel<double>(3, engine);
  const auto rho0 = random_state<double>(3, engine);
  const auto rho1 = channel.schrodinger(rho0.matrix(), 0.5);
  double expected = 0;
  for (const auto& alpha : oa.spectrum()) {
    const Matrixd post = channel.schrodinger(alpha.projector * rho1 * alpha.projector, 1.0);
    for (const auto& beta : b.spectrum())
      expected += alpha.value * beta.value * (beta.projector * post).trace().real();
  }
  EXPECT_NEAR(tpm_correlator(oa, b, 0.5, 1.5, channel, rho0), expected, 1e-12);
}

TEST(TpmCorrelator, RejectsBadTimesAndDimensions) {
  const auto channel = identity_channel<double>(2);
  const Observabled sx(pauli_x<double>());
  const auto rho = DensityMatrixd::maximally_mixed(2);
  EXPECT_THROW(tpm_correlator(sx, sx, 1.0, 1.0, channel, rho), std::invalid_argument);
  EXPECT_THROW(tpm_correlator(sx, sx, 2.0, 1.0, channel, rho), std::invalid_argument);
  EXPECT_THROW(tpm_correlator(sx, sx, 0.0, 1.0, channel, DensityMatrixd::maximally_mixed(3)),
               std::invalid_argument);
}

TEST(HeisenbergCorrelator, SigmaXPairGivesCosine) {
  std::mt19937_64 engine(31);
  const auto channel = spin_precession<double>(Vector3d::UnitZ());
  const Observabled sx(pauli_x<double>());
  std::uniform_real_distribution<double> tau(0, 2 * kPi);
  for (int i = 0; i < 50; ++i) {
    const double t1 = tau(engine), t2 = tau(engine);
    const auto rho0 = random_state<double>(2, engine);
    const auto c = product(sx, sx, t1, t2, channel);
    // Oracle: explicit matrix products of the precessed Pauli operators.
    const Matrix2d s1 = pauli_x<double>() * std::cos(t1) - pauli_y<double>() * std::sin(t1);
    const Matrix2d s2 = pauli_x<double>() * std::cos(t2) - pauli_y<double>() * std::sin(t2);
    const Matrix2d anti = 0.5 * (s1 * s2 + s2 * s1);
    EXPECT_LT(max_norm(Matrix2d(anti - std::cos(t2 - t1) * Matrix2d::Identity())), 1e-12);
    EXPECT_NEAR(heisenberg_correlator(c, rho0), std::cos(t2 - t1), 1e-12);
  }
}

TEST(HeisenbergCorrelator, ConservedSigmaZ) {
  const auto channel = spin_precession<double>(Vector3d::UnitZ());
  const Observabled sz(pauli_z<double>());
  const auto up = DensityMatrixd::pure(Eigen::Vector2cd(1, 0));
  EXPECT_NEAR(heisenberg_correlator(product(sz, sz, 0.3, 2.0, channel), up), 1.0, 1e-12);
}

TEST(HeisenbergCorrelator, EqualTimeSpinXYVanishes) {
  std::mt19937_64 engine(32);
  const auto channel = spin_precession<double>(Vector3d::UnitZ());
  for (int i = 0; i < 20; ++i) {
    const double tau = 0.37 * i;
    const auto rho0 = random_state<double>(2, engine);
    EXPECT_NEAR(heisenberg_correlator(
                    product(Observabled(spin_x()), Observabled(spin_y()), tau, tau, channel), rho0),
                0.0, 1e-12);
  }
}

TEST(HeisenbergCorrelator, RealizeTraceAndLambdaRouteAgree) {
  std::mt19937_64 engine(33);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index d = 2 + i % 3;
    auto c = random_two_time_operator<double>(d, engine);
    c.kind = TwoTimeKind::product;
    const auto rho0 = random_state<double>(d, engine);
    const double value = heisenberg_correlator(c, rho0);
    EXPECT_NEAR(value, expectation(realize(c).matrix(), rho0), 1e-12);
    EXPECT_NEAR(value,
                heisenberg_correlator_lambda_route(c.first, c.second, c.t1, c.t2, c.channel, rho0),
                1e-10);
  }
}

TEST(HeisenbergCorrelator, RejectsNonUnitaryChannel) {
  Matrixd k0 = Matrixd::Identity(2, 2);
  const auto kraus = ChannelFamilyd::kraus_step({k0});
  const Observabled sx(pauli_x<double>());
  const auto rho = DensityMatrixd::maximally_mixed(2);
  EXPECT_THROW(heisenberg_correlator(product(sx, sx, 0, 1, kraus), rho), std::logic_error);
  EXPECT_THROW(realize(product(sx, sx, 0, 1, kraus)), std::logic_error);
  // The TPM protocol itself accepts the Kraus hook.
  EXPECT_NO_THROW(tpm_correlator(sx, sx, 0.0, 1.0, kraus, rho));
}

TEST(LambdaOperator, CommutingCaseReducesToProjector) {
  const auto channel = identity_channel<double>(2);
  Matrixd alpha = Matrixd::Zero(2, 2);
  alpha(1, 1) = 1;
  Matrixd diag = Matrixd::Zero(2, 2);
  diag.diagonal() << 0.3, 0.7;
  const auto report = lambda_operator(alpha, DensityMatrixd(diag), 0.0, channel);
  EXPECT_LT(max_norm(Matrixd(report.lambda - alpha)), 1e-14);
  EXPECT_TRUE(report.physical);
  EXPECT_NEAR(report.trace, 1.0, 1e-14);
}

TEST(LambdaOperator, EquatorStateIsNonphysical) {
  // a = -1 projector along z, pure rho_t1 at theta = pi/2. Oracle: the 2x2
  // anticommutator evaluated by hand gives nu = (1, 0, -1).
  const auto channel = identity_channel<double>(2);
  Matrixd alpha = Matrixd::Zero(2, 2);
  alpha(1, 1) = 1;
  const auto rho = bloch_to_state(BlochVectord::spherical(1.0, kPi / 2, 0.0));
  const auto report = lambda_operator(alpha, rho, 0.0, channel);
  const Vector3d nu = pauli_components(report.lambda);
  EXPECT_NEAR(nu(0), 1.0, 1e-12);
  EXPECT_NEAR(nu(1), 0.0, 1e-12);
  EXPECT_NEAR(nu(2), -1.0, 1e-12);
  EXPECT_NEAR(nu.norm(), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(report.min_eigenvalue, (1 - std::sqrt(2.0)) / 2, 1e-12);
  EXPECT_FALSE(report.physical);

  const auto closed = bloch_lambda_nu(Vector3d(1, 0, 0));
  EXPECT_LT((closed.nu - nu).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(LambdaOperator, SouthPoleIsPhysical) {
  const auto channel = identity_channel<double>(2);
  Matrixd alpha = Matrixd::Zero(2, 2);
  alpha(1, 1) = 1;
  const auto report = lambda_operator(alpha, bloch_to_state(BlochVectord(0, 0, -1)), 0.0, channel);
  EXPECT_NEAR(pauli_components(report.lambda).norm(), 1.0, 1e-12);
  EXPECT_TRUE(report.physical);
}

TEST(LambdaOperator, PhysicalIffCommutingForPureQubits) {
  std::mt19937_64 engine(34);
  const auto channel = random_unitary_channel<double>(2, engine);
  for (int i = 0; i < 300; ++i) {
    const DensityMatrixd rho0(random_pure_state<double>(2, engine));
    const auto a = random_sign_observable<double>(engine);
    const auto& alpha = a.spectrum()[i % 2].projector;
    const double t1 = 0.1 * i;
    const Matrixd rho1 = channel.schrodinger(rho0.matrix(), t1);
    if ((alpha * rho1).trace().real() <= 1e-9) continue;
    const auto report = lambda_operator(alpha, rho0, t1, channel);
    EXPECT_NEAR(report.trace, 1.0, 1e-10);
    EXPECT_LT(hermiticity_defect(report.lambda), 1e-12);
    const bool commutes = max_norm(Matrixd(alpha * rho1 - rho1 * alpha)) <= 1e-8;
    EXPECT_EQ(report.physical, commutes);
  }
}

TEST(LambdaOperator, UnconditionedOutcomeRejected) {
  const auto channel = identity_channel<double>(2);
  Matrixd alpha = Matrixd::Zero(2, 2);
  alpha(1, 1) = 1;
  const auto up = DensityMatrixd::pure(Eigen::Vector2cd(1, 0));
  EXPECT_THROW(lambda_operator(alpha, up, 0.0, channel), UnconditionedOutcome);
  EXPECT_THROW(lambda_operator(Matrixd(2 * alpha), up, 0.0, channel), std::invalid_argument);
}

TEST(Realize, AnticommutingPaulisGiveZero) {
  const auto channel = spin_precession<double>(Vector3d::UnitZ());
  const auto realized =
      realize(product(Observabled(pauli_x<double>()), Observabled(pauli_y<double>()), 0, 0, channel));
  EXPECT_LT(max_norm(realized.matrix()), 1e-14);
  ASSERT_EQ(realized.spectrum().size(), 1u);
  EXPECT_EQ(realized.spectrum()[0].rank, 2);
  EXPECT_NEAR(realized.spectrum()[0].value, 0.0, 1e-14);
}

TEST(Realize, SpinProductIsSineTimesIdentity) {
  // u1 . v2 = sin(tau2 - tau1) with u1 = (cos t1, -sin t1, 0), v2 = (sin t2, cos t2, 0).
  const auto channel = spin_precession<double>(Vector3d::UnitZ());
  std::mt19937_64 engine(35);
  std::uniform_real_distribution<double> tau(-kPi, 3 * kPi);
  for (int i = 0; i < 100; ++i) {
    const double t1 = tau(engine), t2 = tau(engine);
    const Vector3d u1(std::cos(t1), -std::sin(t1), 0);
    const Vector3d v2(std::sin(t2), std::cos(t2), 0);
    ASSERT_NEAR(u1.dot(v2), std::sin(t2 - t1), 1e-14);
    const auto realized =
        realize(product(Observabled(spin_x()), Observabled(spin_y()), t1, t2, channel));
    EXPECT_LT(max_norm(Matrixd(realized.matrix() - 0.25 * u1.dot(v2) * Matrixd::Identity(2, 2))),
              1e-10);
  }
}

TEST(Realize, SumOfPrecessedSigmaX) {
  // |u1 + u2| = sqrt(2 + 2 cos(dtau)) = 2 |cos(dtau / 2)|.
  const auto channel = spin_precession<double>(Vector3d::UnitZ());
  const Observabled sx(pauli_x<double>());
  for (double dtau : {0.3, 1.0, 2.0, 2.9, 4.5}) {
    const TwoTimeOperatord c{TwoTimeKind::sum, sx, sx, 0.7, 0.7 + dtau, channel};
    const auto values = realize(c).eigenvalues();
    ASSERT_EQ(values.size(), 2u);
    const double expected = 2 * std::abs(std::cos(dtau / 2));
    EXPECT_NEAR(values[0], -expected, 1e-12);
    EXPECT_NEAR(values[1], expected, 1e-12);

    const auto top = prepare_eigenstate(c, 1);
    EXPECT_NEAR(expectation(realize(c).matrix(), top), expected, 1e-12);
  }
}

TEST(PrepareEigenstate, IrrealityVanishes) {
  std::mt19937_64 engine(36);
  for (int i = 0; i < 100; ++i) {
    const auto c = random_two_time_operator<double>(2 + i % 3, engine);
    const auto realized = realize(c);
    for (std::size_t k = 0; k < realized.spectrum().size(); ++k)
      EXPECT_LE(irreality(realized, prepare_eigenstate(c, k)).irreality, 1e-10);
  }
}

TEST(PrepareEigenstate, DegenerateEigenvalueGivesMaximallyMixedEigenspace) {
  const auto channel = spin_precession<double>(Vector3d::UnitZ());
  const TwoTimeOperatord c{TwoTimeKind::product, Observabled(pauli_x<double>()),
                           Observabled(pauli_y<double>()), 0.0, kPi / 2, channel};
  const auto rho = prepare_eigenstate(c, 0);
  EXPECT_LT(max_norm(Matrixd(rho.matrix() - Matrixd::Identity(2, 2) / 2.0)), 1e-12);
  EXPECT_THROW(prepare_eigenstate(c, 1), std::out_of_range);
}
