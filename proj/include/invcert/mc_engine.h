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

// Monte-Carlo certification on reduced Gaussian problems and smoothed
// prediction with abstention.

#ifndef INVCERT_MC_ENGINE_H_
#define INVCERT_MC_ENGINE_H_

#include <array>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "invcert/certificate.h"
#include "invcert/geometry.h"
#include "invcert/reduced_problem.h"

namespace invcert {

struct McConfig {
  int64_t n1 = 10000;  // samples for p_lower (base classifier)
  int64_t n2 = 10000;  // samples for the likelihood-ratio threshold
  int64_t n3 = 10000;  // samples for the final bound
  double alpha = 0.001;

  // Throws DomainError unless n1, n2, n3 >= 100 and alpha in (0, 0.5).
  void Validate() const;
};

// Per-bound confidences (1 - alpha, 1 - alpha/2, 1 - alpha/3).
std::array<double, 3> ConfidenceLadder(double alpha);

inline constexpr int kAbstain = -1;

// Deterministic map from an N x D cloud to a label >= 0.
using BaseClassifier = std::function<int(const Eigen::MatrixXd&)>;

struct SmoothPrediction {
  int label = kAbstain;  // majority label, or kAbstain when p_lower <= 1/2
  int top_label = 0;     // majority label even when abstaining
  int64_t top_count = 0;
  int64_t n = 0;
  double p_lower = 0.0;  // Clopper-Pearson lower bound at 1 - alpha
};

// Majority vote of g over n draws of Z ~ N(X, sigma^2 I). Ties between labels
// go to the smaller label.
SmoothPrediction SmoothPredict(const BaseClassifier& g, const PointCloud& x,
                               double sigma, int64_t n, double alpha,
                               uint64_t seed);

// Lower bound on the worst-case perturbed probability (Neyman-Pearson
// threshold test on the statistic). With a fixed p_lower the first rung of
// the confidence ladder is reserved but not spent.
CertificateOutcome ProbCertifyReduced(double p_lower,
                                      const RotationCertProblem& problem,
                                      const LikelihoodStatistic& statistic,
                                      const McConfig& mc, uint64_t seed);

// Same, estimating p_lower from n1 classifier evaluations around x first.
CertificateOutcome ProbCertifyReduced(const BaseClassifier& g,
                                      const PointCloud& x, double sigma,
                                      const RotationCertProblem& problem,
                                      const LikelihoodStatistic& statistic,
                                      const McConfig& mc, uint64_t seed);

// Upper bound on the worst-case perturbed probability of a class whose clean
// probability is at most p_upper. The result is in bound_value.
CertificateOutcome ProbCertifyUpperReduced(double p_upper,
                                           const RotationCertProblem& problem,
                                           const LikelihoodStatistic& statistic,
                                           const McConfig& mc, uint64_t seed);

// Upper bound on p_min, the smallest clean probability that still certifies.
// Uses n2 samples of the perturbed law and n3 samples of the clean law.
// Result in bound_value, always within [0.5, 1].
CertificateOutcome InverseCertifyReduced(const RotationCertProblem& problem,
                                         const LikelihoodStatistic& statistic,
                                         const McConfig& mc, uint64_t seed);

}  // namespace invcert

#endif  // INVCERT_MC_ENGINE_H_
