// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "invekf/cgd.hpp"
#include "invekf/spd.hpp"
#include "oracles.hpp"

namespace invekf {
namespace {

using test::Rng;
using G = SE23R6d;
using Dist = ConcentratedGaussian<G>;

Dist random_left(Rng& rng, double mu_scale = 0.3) {
  Dist d;
  d.handedness = Handedness::Left;
  d.ref = rng.element<G>(3.0, 2.0);
  d.mu = rng.tangent<G>(0.5, mu_scale);
  d.sigma = rng.spd<15>(0.01, 0.5);
  return d;
}

TEST(ConcentratedGaussian, LikelihoodVanishesAtMode) {
  Rng rng(1);
  const Dist d = random_left(rng);
  EXPECT_LE(std::abs(log_likelihood(d, d.ref * G::exp(d.mu))), 1e-20);
  Dist r = convert_handedness(d);
  EXPECT_LE(std::abs(log_likelihood(r, G::exp(r.mu) * r.ref)), 1e-20);
}

TEST(ConcentratedGaussian, HandednessConversionPreservesLikelihood) {
  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    const Dist left = random_left(rng);
    const Dist right = convert_handedness(left);
    for (int i = 0; i < 100; ++i) {
      const G g = left.ref * G::exp(rng.tangent<G>(1.0, 0.5));
      const double a = log_likelihood(left, g);
      const double b = log_likelihood(right, g);
      EXPECT_LE(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST(ConcentratedGaussian, EuclideanLikelihoodIsGaussianQuadraticForm) {
  using E = Euclidean<3>;
  Rng rng(3);
  ConcentratedGaussian<E> d;
  d.ref = E::exp(rng.vec<3>());
  d.mu = rng.vec<3>();
  d.sigma = rng.spd<3>();
  const Eigen::Vector3d x = rng.vec<3>();
  const Eigen::Vector3d r = x - d.ref.vector() - d.mu;
  const double oracle = 0.5 * r.dot(d.sigma.inverse() * r);
  EXPECT_NEAR(log_likelihood(d, E::exp(x)), oracle, 1e-12);
}

TEST(ConcentratedGaussian, LikelihoodAtCutLocusIsDomainError) {
  ConcentratedGaussian<SO3d> d;
  d.sigma = Eigen::Matrix3d::Identity();
  EXPECT_THROW((void)log_likelihood(d, SO3d::unchecked(test::rot_x(M_PI))), DomainError);
}

TEST(ConcentratedGaussian, DegenerateCovarianceSamplesAtMode) {
  Rng rng(4);
  Dist d = random_left(rng);
  d.sigma = 1e-18 * G::AdjointMatrix::Identity();
  const G mode = d.ref * G::exp(d.mu);
  for (const G& g : sample(d, 7, 20)) {
    EXPECT_LE((g.matrix() - mode.matrix()).norm(), 1e-8);
    EXPECT_LE((g.euclidean() - mode.euclidean()).norm(), 1e-8);
  }
}

TEST(ConcentratedGaussian, SamplingIsDeterministicPerSeed) {
  Rng rng(5);
  const Dist d = random_left(rng);
  const auto a = sample(d, 42, 10);
  const auto b = sample(d, 42, 10);
  const auto c = sample(d, 43, 10);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(a[i].matrix(), b[i].matrix());
    EXPECT_EQ(a[i].euclidean(), b[i].euclidean());
  }
  EXPECT_NE(a[0].matrix(), c[0].matrix());
}

TEST(ConcentratedGaussian, EmpiricalMomentsMatch) {
  using S = SO3d;
  ConcentratedGaussian<S> d;
  d.handedness = Handedness::Right;
  d.ref = S::exp(Eigen::Vector3d(0.3, -1.0, 0.5));
  d.mu = Eigen::Vector3d(0.01, -0.02, 0.03);
  d.sigma = Eigen::Vector3d(0.01, 0.02, 0.005).asDiagonal();
  const int n = 100000;
  const auto draws = sample(d, 99, n);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  std::vector<Eigen::Vector3d> eps;
  eps.reserve(n);
  for (const S& g : draws) {
    eps.push_back(error_coordinates(d, g));
    mean += eps.back();
  }
  mean /= n;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& e : eps) cov += (e - mean) * (e - mean).transpose();
  cov /= (n - 1);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE(std::abs(mean(i) - d.mu(i)), 3 * std::sqrt(d.sigma(i, i) / n));
  }
  EXPECT_LE((cov - d.sigma).norm(), 0.1 * d.sigma.norm());
}

TEST(ConcentratedGaussian, ConversionAtIdentityIsNoOp) {
  Rng rng(6);
  Dist d = random_left(rng);
  d.ref = G::Identity();
  const Dist r = convert_handedness(d);
  EXPECT_EQ(r.handedness, Handedness::Right);
  EXPECT_LE((r.mu - d.mu).norm(), 0.0);
  EXPECT_LE((r.sigma - d.sigma).norm(), 1e-15);
}

TEST(ConcentratedGaussian, ConversionIsInvolution) {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Dist d = random_left(rng);
    const Dist back = convert_handedness(convert_handedness(d));
    EXPECT_EQ(back.handedness, d.handedness);
    EXPECT_LE((back.mu - d.mu).norm(), 1e-12 * std::max(1.0, d.mu.norm()));
    EXPECT_LE((back.sigma - d.sigma).norm(), 1e-12 * std::max(1.0, d.sigma.norm()));
    EXPECT_TRUE(is_spd(convert_handedness(d).sigma));
  }
}

TEST(ConcentratedGaussian, ValidateRejectsBadCovariance) {
  Rng rng(8);
  Dist d = random_left(rng);
  EXPECT_NO_THROW(d.validate());
  d.sigma(0, 1) += 1e-3;
  EXPECT_THROW(d.validate(), ContractViolation);
  d.sigma = -G::AdjointMatrix::Identity();
  EXPECT_THROW(d.validate(), ContractViolation);
}

TEST(EquivalenceGap, ZeroForConvertedPair) {
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const Dist left = random_left(rng);
    const auto gap = equivalence_gap(left, convert_handedness(left));
    EXPECT_LE(gap.ref_gap, 1e-10);
    EXPECT_LE(gap.mu_gap, 1e-10);
    EXPECT_LE(gap.airm, 1e-10);
  }
}

TEST(EquivalenceGap, IsotropicScaleGivesClosedFormAirm) {
  ConcentratedGaussian<SO3d> left, right;
  right.handedness = Handedness::Right;
  left.sigma = Eigen::Vector3d(0.2, 0.5, 1.3).asDiagonal();
  right.sigma = 4 * left.sigma;
  EXPECT_NEAR(equivalence_gap(left, right).airm, std::sqrt(3.0) * std::log(4.0), 1e-12);
}

TEST(EquivalenceGap, RejectsWrongHandednessAndNonSpd) {
  Rng rng(10);
  const Dist left = random_left(rng);
  EXPECT_THROW(equivalence_gap(left, left), ContractViolation);
  Dist right = convert_handedness(left);
  right.sigma = G::AdjointMatrix::Zero();
  EXPECT_THROW(equivalence_gap(left, right), ContractViolation);
}

TEST(Airm, SymmetricAndZeroOnEqualArguments) {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const auto A = rng.spd<6>(), B = rng.spd<6>();
    EXPECT_NEAR(airm_distance(A, B), airm_distance(B, A), 1e-10);
    EXPECT_LE(airm_distance(A, A), 1e-12);
  }
}

TEST(Airm, InvariantUnderCongruence) {
  Rng rng(12);
  const auto A = rng.spd<5>(), B = rng.spd<5>();
  Eigen::Matrix<double, 5, 5> M;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) M(i, j) = rng.normal();
  M += 3 * Eigen::Matrix<double, 5, 5>::Identity();
  const auto MA = symmetrize(M * A * M.transpose());
  const auto MB = symmetrize(M * B * M.transpose());
  EXPECT_NEAR(airm_distance(A, B), airm_distance(MA, MB), 1e-9);
}

TEST(Airm, InvariantUnderTinyScaling) {
  Rng rng(14);
  const auto A = rng.spd<6>(), B = rng.spd<6>();
  const double d = airm_distance(A, B);
  for (double c : {1e-10, 1e-20, 1e-30}) {
    EXPECT_NEAR(airm_distance(Eigen::Matrix<double, 6, 6>(c * A), Eigen::Matrix<double, 6, 6>(c * B)), d, 1e-9);
  }
}

TEST(Spd, FunctionsMatchEigenvalueOracle) {
  Rng rng(13);
  const auto A = rng.spd<4>(0.5, 3.0);
  const auto root = spd_sqrt(A);
  EXPECT_LE((root * root - A).norm(), 1e-12);
  EXPECT_LE((spd_inverse_sqrt(A) * A * spd_inverse_sqrt(A) - decltype(A)::Identity()).norm(), 1e-12);
  EXPECT_LE((test::expm_series(Eigen::Matrix4d(spd_log(A))) - A).norm(), 1e-11);
  EXPECT_FALSE(is_spd(Eigen::Matrix2d(Eigen::Vector2d(1, -1).asDiagonal())));
}

}  // namespace
}  // namespace invekf
