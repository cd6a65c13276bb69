//
// Copyright 2026 The invcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include "invcert/oracles.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "invcert/errors.h"
#include "invcert/numerics.h"
#include "test_oracles.h"

namespace invcert {
namespace {

using ::invcert::testing::LogI0Series;

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd RandomMatrix(int rows, int cols, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(gen);
  }
  return m;
}

TEST(SyntheticClassifierTest, ParseKinds) {
  EXPECT_EQ(ParseSyntheticKind("norm"), SyntheticKind::kNormThreshold);
  EXPECT_EQ(ParseSyntheticKind("centered-norm"), SyntheticKind::kCenteredNormThreshold);
  EXPECT_EQ(ParseSyntheticKind("pairwise-centroid"), SyntheticKind::kPairwiseCentroid);
  EXPECT_THROW(ParseSyntheticKind("mlp"), DomainError);
}

TEST(SyntheticClassifierTest, NormThresholdLabels) {
  const SyntheticClassifier g = SyntheticClassifier::NormThreshold(1.0);
  EXPECT_EQ(g.Classify(Eigen::MatrixXd::Constant(1, 2, 0.5)), 0);
  EXPECT_EQ(g.Classify(Eigen::MatrixXd::Constant(1, 2, 1.0)), 1);
  EXPECT_EQ(g.AsBaseClassifier()(Eigen::MatrixXd::Zero(3, 3)), 0);
}

TEST(SyntheticClassifierTest, CenteredNormIgnoresShift) {
  const SyntheticClassifier g = SyntheticClassifier::CenteredNormThreshold(1.0);
  Eigen::MatrixXd x = 0.1 * RandomMatrix(4, 2, 1);
  EXPECT_EQ(g.Classify(x), 0);
  x.rowwise() += Eigen::RowVector2d(100.0, -50.0);
  EXPECT_EQ(g.Classify(x), 0);
}

TEST(SyntheticClassifierTest, PairwiseCentroidPicksNearestReference) {
  const PointCloud a(RandomMatrix(5, 3, 2));
  const PointCloud b(3.0 * RandomMatrix(5, 3, 3));
  const SyntheticClassifier g = SyntheticClassifier::PairwiseCentroid({a, b});
  EXPECT_EQ(g.Classify(a.data()), 0);
  EXPECT_EQ(g.Classify(b.data()), 1);
  EXPECT_THROW(SyntheticClassifier::PairwiseCentroid({}), DomainError);
  EXPECT_THROW(SyntheticClassifier::PairwiseCentroid({a, PointCloud(RandomMatrix(4, 3, 1))}),
               DomainError);
}

TEST(SyntheticClassifierTest, DeclaredInvariancesHold) {
  const PointCloud x(RandomMatrix(6, 3, 4));
  const PointCloud r0(RandomMatrix(6, 3, 5));
  const PointCloud r1(1.5 * RandomMatrix(6, 3, 6));
  for (const SyntheticClassifier& g :
       {SyntheticClassifier::NormThreshold(x.Norm()),
        SyntheticClassifier::CenteredNormThreshold(Center(x).Norm()),
        SyntheticClassifier::PairwiseCentroid({r0, r1})}) {
    EXPECT_EQ(AuditInvariance(g, x, 1000, 0.5, 9), 0);
  }
}

TEST(SyntheticClassifierTest, InvarianceGroupsByKind) {
  const auto norm = SyntheticClassifier::NormThreshold(1.0).InvarianceGroups();
  EXPECT_NE(std::find(norm.begin(), norm.end(), GroupKind::kRotation), norm.end());
  EXPECT_EQ(std::find(norm.begin(), norm.end(), GroupKind::kTranslation), norm.end());
  const auto centered = SyntheticClassifier::CenteredNormThreshold(1.0).InvarianceGroups();
  EXPECT_NE(std::find(centered.begin(), centered.end(),
                      GroupKind::kPermutationRotoTranslation),
            centered.end());
}

TEST(RandomGroupActionTest, PreservesInvariantFeatures) {
  const Eigen::MatrixXd x = RandomMatrix(7, 3, 10);
  const Eigen::MatrixXd y = RandomGroupAction(GroupKind::kRotation, x, 1);
  EXPECT_NEAR(y.norm(), x.norm(), 1e-12);
  EXPECT_GT((y - x).norm(), 1e-6);
  const Eigen::MatrixXd t = RandomGroupAction(GroupKind::kPermutationRotoTranslation, x, 2);
  EXPECT_LT((PairwiseDistanceSignature(t) - PairwiseDistanceSignature(x)).norm(), 1e-10);
  const Eigen::MatrixXd s = RandomGroupAction(GroupKind::kPermutation, x, 3);
  EXPECT_EQ(PairwiseDistanceSignature(s), PairwiseDistanceSignature(x));
}

TEST(RandomGroupActionTest, HaarRotationsAreProperAndSpread) {
  // The first column of a Haar rotation is uniform on the sphere, so its
  // mean is near zero.
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  const Eigen::MatrixXd e = Eigen::MatrixXd::Identity(3, 3);
  for (uint64_t s = 0; s < 4000; ++s) {
    const Eigen::MatrixXd r = RandomGroupAction(GroupKind::kRotation, e, s);
    ASSERT_NEAR(r.determinant(), 1.0, 1e-12);
    acc += r.row(0).transpose();
  }
  EXPECT_LT((acc / 4000).norm(), 0.06);
}

TEST(HaarOracleSo2Test, ClosedForms) {
  const PointCloud x(RandomMatrix(5, 2, 20));
  const PointCloud zero(Eigen::MatrixXd::Zero(5, 2));
  EXPECT_NEAR(HaarOracleSo2(x, zero, 1.0, 2000), std::log(2 * kPi), 1e-12);
  const PointCloud z(RandomMatrix(5, 2, 21));
  // <Z R^T, X> = a cos(w) + b sin(w) with a = <Z, X>, b = <Z R(pi/2)^T, X>.
  const double a = (z.data().cwiseProduct(x.data())).sum();
  const Eigen::MatrixXd zr = z.data() * Rot2(kPi / 2).transpose();
  const double b = (zr.cwiseProduct(x.data())).sum();
  const double sigma = 0.7;
  EXPECT_NEAR(HaarOracleSo2(x, z, sigma, 4000),
              std::log(2 * kPi) + LogI0Series(std::hypot(a, b) / (sigma * sigma)), 1e-10);
  EXPECT_THROW(HaarOracleSo2(x, z, 1.0, 999), DomainError);
}

TEST(HaarOracleSo3Test, ZeroAndScaledIdentity) {
  EXPECT_NEAR(HaarOracleSo3(Eigen::Matrix3d::Zero(), 1.0, 60), std::log(8 * kPi * kPi),
              1e-7);
  EXPECT_NEAR(HaarOracleSo3(Eigen::Matrix3d::Zero(), 1.0, 200), std::log(8 * kPi * kPi),
              1e-9);
  // For M = c I, int exp(c tr R) dR is known through the class function
  // 1 + 2 cos(t): compare against a one-dimensional integral over the angle
  // with the Weyl density (1 - cos t) / pi on [0, pi], times 8 pi^2.
  const double c = 0.8;
  double acc = 0.0;
  const int steps = 200000;
  for (int k = 0; k <= steps; ++k) {
    const double t = kPi * k / steps;
    const double w = (k == 0 || k == steps) ? 0.5 : 1.0;
    acc += w * std::exp(c * (1 + 2 * std::cos(t))) * (1 - std::cos(t)) / kPi;
  }
  acc *= kPi / steps;
  EXPECT_NEAR(HaarOracleSo3(c * Eigen::Matrix3d::Identity(), 1.0, 120),
              std::log(8 * kPi * kPi * acc), 1e-6);
  EXPECT_THROW(HaarOracleSo3(Eigen::Matrix3d::Zero(), 1.0, 10), DomainError);
}

TEST(BruteForceProcrustesTest, ZeroForRotatedCopy) {
  const PointCloud x(RandomMatrix(5, 2, 30));
  EXPECT_NEAR(BruteForceProcrustes2d(x, x, 10000), 0.0, 1e-12);
  const PointCloud xr(x.data() * Rot2(2 * kPi * 1234 / 100000).transpose());
  EXPECT_NEAR(BruteForceProcrustes2d(x, xr, 100000), 0.0, 1e-10);
  EXPECT_THROW(BruteForceProcrustes2d(x, x, 100), DomainError);
}

TEST(BruteForcePermutationTest, SmallCases) {
  Eigen::MatrixXd a(3, 2), b(3, 2);
  a << 0, 0, 1, 0, 0, 1;
  b << 0, 1, 0, 0, 1, 0;
  EXPECT_EQ(BruteForcePermutation(PointCloud(a), PointCloud(b)), 0.0);
  const PointCloud big(RandomMatrix(9, 2, 1));
  EXPECT_THROW(BruteForcePermutation(big, big), DomainError);
}

TEST(ReferenceProbabilityTest, NormThresholdMatchesChiSquare) {
  // ||Z||^2 / sigma^2 ~ chi^2 with 4 degrees of freedom when X = 0, N = D = 2;
  // its CDF is 1 - exp(-t/2) (1 + t/2).
  const PointCloud zero(Eigen::MatrixXd::Zero(2, 2));
  const double tau = 1.3, sigma = 0.8;
  const double t = tau * tau / (sigma * sigma);
  const double exact = 1.0 - std::exp(-t / 2) * (1 + t / 2);
  const ReferenceEstimate est = ReferenceProbability(
      SyntheticClassifier::NormThreshold(tau), zero, sigma, 0, 1000000, 4);
  EXPECT_EQ(est.n, 1000000);
  EXPECT_NEAR(est.p, exact, 4 * est.standard_error);
  EXPECT_THROW(ReferenceProbability(SyntheticClassifier::NormThreshold(tau), zero, sigma,
                                    0, 1000, 4),
               DomainError);
}

}  // namespace
}  // namespace invcert
