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

// Slow, simple references: synthetic invariant classifiers and brute-force
// evaluations of the quantities the fast paths compute.

#ifndef INVCERT_ORACLES_H_
#define INVCERT_ORACLES_H_

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "invcert/geometry.h"
#include "invcert/mc_engine.h"

namespace invcert {

enum class SyntheticKind {
  kNormThreshold,          // 0 if ||X|| <= tau else 1
  kCenteredNormThreshold,  // 0 if ||X - 1 mean(X)|| <= tau else 1
  kPairwiseCentroid,       // nearest reference by sorted pairwise distances
};

// Parses "norm", "centered-norm", "pairwise-centroid".
SyntheticKind ParseSyntheticKind(std::string_view name);

// Label depends only on invariant features, so the declared invariance is
// exact by construction.
class SyntheticClassifier {
 public:
  static SyntheticClassifier NormThreshold(double tau);
  static SyntheticClassifier CenteredNormThreshold(double tau);
  // Label k is the reference whose signature is nearest; ties go to the
  // smallest k. All references must share one shape.
  static SyntheticClassifier PairwiseCentroid(
      const std::vector<PointCloud>& references);

  SyntheticKind kind() const { return kind_; }
  double tau() const { return tau_; }

  // Groups whose action never changes the label. For every kind this
  // includes S(N); see InvarianceGroups for the geometric part.
  std::vector<GroupKind> InvarianceGroups() const;

  int Classify(const Eigen::MatrixXd& z) const;
  BaseClassifier AsBaseClassifier() const;

 private:
  SyntheticClassifier(SyntheticKind kind, double tau,
                      std::vector<Eigen::VectorXd> signatures)
      : kind_(kind), tau_(tau), signatures_(std::move(signatures)) {}

  SyntheticKind kind_;
  double tau_ = 0.0;
  std::vector<Eigen::VectorXd> signatures_;
};

// Sorted pairwise distances ||X_n - X_m||, n < m.
Eigen::VectorXd PairwiseDistanceSignature(const Eigen::MatrixXd& x);

// Random group element applied to x: Haar rotation (QR of a Gaussian matrix
// with sign fix), optional reflection, translation and row shuffle as the
// group requires.
Eigen::MatrixXd RandomGroupAction(GroupKind group, const Eigen::MatrixXd& x,
                                  uint64_t seed);

// Number of label changes over `trials` random inputs near x (x plus
// Gaussian noise of scale noise_sigma), each hit by a random element of
// every declared invariance group.
int AuditInvariance(const SyntheticClassifier& g, const PointCloud& x,
                    int trials, double noise_sigma, uint64_t seed);

// log of the periodic trapezoid rule for int_0^{2 pi} exp(<Z R(w)^T, X> /
// sigma^2) dw. Requires D == 2 and grid >= 1000.
double HaarOracleSo2(const PointCloud& x, const PointCloud& z, double sigma,
                     int grid);

// log of int cos(w2) exp(<R(w), m> / sigma^2) dw over [0, 2pi] x
// [-pi/2, pi/2] x [0, 2pi], R(w) = Rz(w1) Ry(w2) Rx(w3). Periodic trapezoid
// in w1 and w3, composite Simpson in w2 (grid rounded up to even). Requires
// grid >= 50.
double HaarOracleSo3(const Eigen::Matrix3d& m, double sigma, int grid);

// min over theta = 2 pi k / grid of ||X' R(theta)^T - X||. D == 2,
// grid >= 1e4.
double BruteForceProcrustes2d(const PointCloud& x, const PointCloud& x_prime,
                              int grid);

// Exhaustive minimum of ||P X' - X|| over all row permutations, N <= 8.
double BruteForcePermutation(const PointCloud& x, const PointCloud& x_prime);

struct ReferenceEstimate {
  double p = 0.0;
  double standard_error = 0.0;  // sqrt(p (1 - p) / n)
  int64_t n = 0;
};

// Frequency of g(Z) == label for Z ~ N(X, sigma^2 I). Requires n >= 1e6.
ReferenceEstimate ReferenceProbability(const SyntheticClassifier& g,
                                       const PointCloud& x, double sigma,
                                       int label, int64_t n, uint64_t seed);

}  // namespace invcert

#endif  // INVCERT_ORACLES_H_
