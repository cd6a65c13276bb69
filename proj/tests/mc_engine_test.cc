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


#include "invcert/mc_engine.h"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "invcert/errors.h"
#include "invcert/numerics.h"
#include "test_oracles.h"

namespace invcert {
namespace {

using ::invcert::testing::ClopperPearsonLowerOracle;
using ::invcert::testing::NormalCdf;
using ::invcert::testing::NormalQuantile;

// One-dimensional Gaussian shift: q ~ N(mu, 1) when perturbed, N(0, 1) when
// clean. The likelihood ratio is monotone in q, so the worst-case bounds have
// closed forms: lower Phi(Phi^{-1}(p) - mu), upper Phi(Phi^{-1}(p) + mu) and
// p_min = Phi(mu).
RotationCertProblem ShiftProblem(double mu) {
  RotationCertProblem p;
  p.mean_perturbed = Eigen::VectorXd::Constant(1, mu);
  p.mean_clean = Eigen::VectorXd::Zero(1);
  p.covariance = Eigen::MatrixXd::Identity(1, 1);
  return p;
}

LikelihoodStatistic ShiftStatistic(double mu) {
  return LikelihoodStatistic(1, [mu](const double* q) { return mu * q[0] - 0.5 * mu * mu; });
}

McConfig Config(int64_t n, double alpha = 0.001) {
  McConfig mc;
  mc.n1 = mc.n2 = mc.n3 = n;
  mc.alpha = alpha;
  return mc;
}

TEST(McConfigTest, Validation) {
  EXPECT_NO_THROW(McConfig{}.Validate());
  McConfig mc;
  mc.n2 = 99;
  EXPECT_THROW(mc.Validate(), DomainError);
  mc = McConfig{};
  mc.alpha = 0.5;
  EXPECT_THROW(mc.Validate(), DomainError);
  mc.alpha = 0.0;
  EXPECT_THROW(mc.Validate(), DomainError);
}

TEST(ConfidenceLadderTest, Values) {
  const auto ladder = ConfidenceLadder(0.003);
  EXPECT_DOUBLE_EQ(ladder[0], 0.997);
  EXPECT_DOUBLE_EQ(ladder[1], 0.9985);
  EXPECT_DOUBLE_EQ(ladder[2], 0.999);
}

TEST(SmoothPredictTest, ConstantClassifier) {
  const PointCloud x(Eigen::MatrixXd::Zero(3, 2));
  const SmoothPrediction pred =
      SmoothPredict([](const Eigen::MatrixXd&) { return 4; }, x, 1.0, 500, 0.01, 1);
  EXPECT_EQ(pred.label, 4);
  EXPECT_EQ(pred.top_count, 500);
  EXPECT_NEAR(pred.p_lower, std::pow(0.01, 1.0 / 500), 1e-12);
}

TEST(SmoothPredictTest, AbstainsOnCoinFlip) {
  const PointCloud x(Eigen::MatrixXd::Zero(1, 2));
  const SmoothPrediction pred = SmoothPredict(
      [](const Eigen::MatrixXd& z) { return z(0, 0) > 0 ? 1 : 0; }, x, 1.0, 2000,
      0.001, 2);
  EXPECT_EQ(pred.label, kAbstain);
  EXPECT_NEAR(static_cast<double>(pred.top_count) / 2000, 0.5, 0.05);
  EXPECT_NEAR(pred.p_lower, ClopperPearsonLowerOracle(pred.top_count, 2000, 0.999),
              1e-9);
}

TEST(SmoothPredictTest, EstimatesHalfPlaneProbability) {
  const PointCloud x(Eigen::MatrixXd::Constant(1, 2, 0.5));
  const SmoothPrediction pred = SmoothPredict(
      [](const Eigen::MatrixXd& z) { return z(0, 0) > 0 ? 1 : 0; }, x, 0.5, 20000,
      0.001, 3);
  EXPECT_EQ(pred.label, 1);
  const double p = NormalCdf(1.0);
  EXPECT_NEAR(static_cast<double>(pred.top_count) / 20000, p,
              4.0 * std::sqrt(p * (1 - p) / 20000));
  EXPECT_LE(pred.p_lower, static_cast<double>(pred.top_count) / 20000);
}

TEST(SmoothPredictTest, RejectsBadArguments) {
  const PointCloud x(Eigen::MatrixXd::Zero(1, 2));
  auto g = [](const Eigen::MatrixXd&) { return 0; };
  EXPECT_THROW(SmoothPredict(g, x, 0.0, 10, 0.1, 1), DomainError);
  EXPECT_THROW(SmoothPredict(g, x, 1.0, 0, 0.1, 1), DomainError);
  EXPECT_THROW(SmoothPredict([](const Eigen::MatrixXd&) { return -1; }, x, 1.0, 10,
                             0.1, 1),
               DomainError);
}

TEST(ProbCertifyTest, GaussianShiftClosedForm) {
  for (double mu : {0.0, 0.3, 1.0}) {
    for (double p : {0.7, 0.9, 0.99}) {
      const CertificateOutcome out =
          ProbCertifyReduced(p, ShiftProblem(mu), ShiftStatistic(mu), Config(100000), 7);
      const double exact = NormalCdf(NormalQuantile(p) - mu);
      EXPECT_LE(out.bound_value, exact + 1e-3) << mu << " " << p;
      EXPECT_GT(out.bound_value, exact - 0.02) << mu << " " << p;
      EXPECT_EQ(out.certified, out.bound_value > 0.5);
      EXPECT_TRUE(out.has_log_kappa);
      EXPECT_NEAR(out.confidence, 1.0 - 0.001 / 2 - 0.001 / 3, 1e-15);
    }
  }
}

TEST(ProbCertifyTest, IdenticalDistributionsRecoverP) {
  const CertificateOutcome out =
      ProbCertifyReduced(0.9, ShiftProblem(0.0), ShiftStatistic(0.0), Config(100000), 3);
  EXPECT_GE(out.bound_value, 0.88);
  EXPECT_LE(out.bound_value, 0.90);
}

TEST(ProbCertifyTest, ConstantStatisticUsesTieBreak) {
  // rho is identically zero, so every sample ties; the randomized test must
  // still return roughly p rather than 0 or 1.
  const LikelihoodStatistic zero(1, [](const double*) { return 0.0; });
  const CertificateOutcome out =
      ProbCertifyReduced(0.8, ShiftProblem(0.0), zero, Config(50000), 4);
  EXPECT_GT(out.bound_value, 0.78);
  EXPECT_LE(out.bound_value, 0.8);
}

TEST(ProbCertifyTest, DeterministicAndSeedSensitive) {
  const auto a = ProbCertifyReduced(0.8, ShiftProblem(0.5), ShiftStatistic(0.5), Config(5000), 11);
  const auto b = ProbCertifyReduced(0.8, ShiftProblem(0.5), ShiftStatistic(0.5), Config(5000), 11);
  const auto c = ProbCertifyReduced(0.8, ShiftProblem(0.5), ShiftStatistic(0.5), Config(5000), 12);
  EXPECT_EQ(a.bound_value, b.bound_value);
  EXPECT_EQ(a.log_kappa, b.log_kappa);
  EXPECT_NE(a.log_kappa, c.log_kappa);
}

TEST(ProbCertifyTest, MonotoneInP) {
  double prev = -1.0;
  for (double p : {0.55, 0.6, 0.7, 0.8, 0.9, 0.95}) {
    const double v =
        ProbCertifyReduced(p, ShiftProblem(0.4), ShiftStatistic(0.4), Config(20000), 5)
            .bound_value;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(ProbCertifyTest, CoverageOnGaussianShift) {
  // Over many seeds the bound may exceed the exact value with probability at
  // most alpha (plus the quantile stage), here 0.05.
  const double mu = 0.5, p = 0.8;
  const double exact = NormalCdf(NormalQuantile(p) - mu);
  int violations = 0;
  for (uint64_t s = 0; s < 400; ++s) {
    const auto out = ProbCertifyReduced(p, ShiftProblem(mu), ShiftStatistic(mu),
                                        Config(500, 0.05), 1000 + s);
    violations += out.bound_value > exact;
  }
  EXPECT_LE(violations, 20);
}

TEST(ProbCertifyTest, UndeterminedThreshold) {
  const auto out = ProbCertifyReduced(1e-6, ShiftProblem(0.1), ShiftStatistic(0.1),
                                      Config(100), 1);
  EXPECT_TRUE(out.flags & kFlagThresholdUndetermined);
  EXPECT_EQ(out.bound_value, 0.0);
  EXPECT_FALSE(out.certified);
}

TEST(ProbCertifyTest, NaNStatisticIsNumericalError) {
  const LikelihoodStatistic bad(1, [](const double*) {
    return std::numeric_limits<double>::quiet_NaN();
  });
  EXPECT_THROW(ProbCertifyReduced(0.8, ShiftProblem(0.0), bad, Config(200), 1),
               NumericalError);
}

TEST(ProbCertifyTest, DimensionMismatchIsRejected) {
  const LikelihoodStatistic two(2, [](const double*) { return 0.0; });
  EXPECT_THROW(ProbCertifyReduced(0.8, ShiftProblem(0.0), two, Config(200), 1),
               DomainError);
}

TEST(ProbCertifyTest, EstimatedProbabilitySpendsFirstRung) {
  const PointCloud x(Eigen::MatrixXd::Zero(2, 2));
  const auto out = ProbCertifyReduced(
      [](const Eigen::MatrixXd&) { return 0; }, x, 1.0, ShiftProblem(0.2),
      ShiftStatistic(0.2), Config(1000), 9);
  EXPECT_NEAR(out.p_lower, std::pow(0.001, 1.0 / 1000), 1e-12);
  EXPECT_NEAR(out.confidence, 1.0 - 0.001 - 0.001 / 2 - 0.001 / 3, 1e-15);
}

TEST(ProbCertifyUpperTest, GaussianShiftClosedForm) {
  for (double mu : {0.0, 0.5}) {
    for (double p : {0.1, 0.3}) {
      const auto out = ProbCertifyUpperReduced(p, ShiftProblem(mu), ShiftStatistic(mu),
                                               Config(100000), 8);
      const double exact = NormalCdf(NormalQuantile(p) + mu);
      EXPECT_GE(out.bound_value, exact - 1e-3);
      EXPECT_LT(out.bound_value, exact + 0.02);
      EXPECT_EQ(out.certified, out.bound_value < 0.5);
    }
  }
  const auto same = ProbCertifyUpperReduced(0.1, ShiftProblem(0.0), ShiftStatistic(0.0),
                                            Config(100000), 8);
  EXPECT_GE(same.bound_value, 0.10);
  EXPECT_LE(same.bound_value, 0.12);
}

TEST(ProbCertifyUpperTest, UndeterminedGivesOne) {
  const auto out = ProbCertifyUpperReduced(1.0 - 1e-6, ShiftProblem(0.1),
                                           ShiftStatistic(0.1), Config(100), 1);
  EXPECT_TRUE(out.flags & kFlagThresholdUndetermined);
  EXPECT_EQ(out.bound_value, 1.0);
}

TEST(InverseCertifyTest, GaussianShiftClosedForm) {
  for (double mu : {0.5, 1.0, 2.0}) {
    const auto out =
        InverseCertifyReduced(ShiftProblem(mu), ShiftStatistic(mu), Config(100000), 2);
    const double exact = NormalCdf(mu);
    EXPECT_GE(out.bound_value, exact - 1e-3) << mu;
    EXPECT_LT(out.bound_value, exact + 0.02) << mu;
    EXPECT_NEAR(out.confidence, 1.0 - 1.5 * 0.001, 1e-15);
  }
}

TEST(InverseCertifyTest, IdenticalDistributionsNearHalf) {
  const auto out =
      InverseCertifyReduced(ShiftProblem(0.0), ShiftStatistic(0.0), Config(100000), 4);
  EXPECT_GE(out.bound_value, 0.5);
  EXPECT_LE(out.bound_value, 0.53);
}

TEST(InverseCertifyTest, ClampedToHalfAndFlagged) {
  // A statistic that orders samples against the likelihood ratio can push
  // the raw estimate below 1/2.
  const LikelihoodStatistic reversed(1, [](const double* q) { return -q[0]; });
  const auto out = InverseCertifyReduced(ShiftProblem(2.0), reversed, Config(10000), 4);
  EXPECT_EQ(out.bound_value, 0.5);
  EXPECT_TRUE(out.flags & kFlagClampedToHalf);
}

TEST(InverseCertifyTest, MonotoneInShift) {
  double prev = 0.0;
  for (double mu : {0.1, 0.4, 0.8, 1.6}) {
    const double v =
        InverseCertifyReduced(ShiftProblem(mu), ShiftStatistic(mu), Config(20000), 6)
            .bound_value;
    EXPECT_GE(v, prev);
    EXPECT_LE(v, 1.0);
    prev = v;
  }
}

}  // namespace
}  // namespace invcert
