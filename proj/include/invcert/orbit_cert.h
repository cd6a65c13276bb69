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

// Orbit-based certificates: the prediction at X' is robust if some group
// element brings X' within the black-box radius of X.

#ifndef INVCERT_ORBIT_CERT_H_
#define INVCERT_ORBIT_CERT_H_

#include <vector>

#include <Eigen/Dense>

#include "invcert/certificate.h"
#include "invcert/geometry.h"

namespace invcert {

// A group element t and the distance ||t(X') - X||_2 it achieves.
// t(X') = (P X') R^T + 1_N b^T where P reorders rows: row m of P X' is
// row permutation[m] of X'.
struct OrbitProjection {
  double residual = 0.0;
  Eigen::MatrixXd rotation;        // D x D
  Eigen::RowVectorXd translation;  // 1 x D
  std::vector<int> permutation;    // empty when the group has no S(N) factor
  bool exact = true;               // false for the registration upper bound

  Eigen::MatrixXd Apply(const Eigen::MatrixXd& x_prime) const;
};

// sigma * Phi^{-1}(p_lower). Negative when p_lower < 1/2. p_lower is clamped
// into [1e-12, 1 - 1e-12]; *clamped reports whether that happened.
double BlackboxRadius(double p_lower, double sigma, bool* clamped = nullptr);

// (sigma / 2) (Phi^{-1}(p_a) - Phi^{-1}(p_b)).
double MulticlassRadius(double p_a, double p_b, double sigma,
                        bool* clamped = nullptr);

OrbitProjection ProjectIdentity(const PointCloud& x, const PointCloud& x_prime);
OrbitProjection ProjectTranslation(const PointCloud& x,
                                   const PointCloud& x_prime);
OrbitProjection ProjectRotation(const PointCloud& x, const PointCloud& x_prime);
OrbitProjection ProjectOrthogonal(const PointCloud& x,
                                  const PointCloud& x_prime);
OrbitProjection ProjectRotoTranslation(const PointCloud& x,
                                       const PointCloud& x_prime);
OrbitProjection ProjectPermutation(const PointCloud& x,
                                   const PointCloud& x_prime);

inline constexpr int kDefaultRegistrationIters = 50;

// Upper bound on the S(N) x SE(D) orbit distance by alternating optimal
// assignment and Kabsch alignment from several initial rotations. Each start
// is monotone in the iteration count; the result never exceeds ||X' - X||.
OrbitProjection ProjectRegistrationUpper(
    const PointCloud& x, const PointCloud& x_prime,
    int max_iters = kDefaultRegistrationIters);

OrbitProjection ProjectOntoOrbit(GroupKind group, const PointCloud& x,
                                 const PointCloud& x_prime,
                                 int max_iters = kDefaultRegistrationIters);

// Certified iff residual < sigma Phi^{-1}(p_lower) (strict).
CertificateOutcome CertifyOrbit(const GroupSpec& group, const PointCloud& x,
                                const PointCloud& x_prime, double p_lower,
                                double sigma,
                                int max_iters = kDefaultRegistrationIters);

// Certified iff residual < MulticlassRadius(p_a_lower, p_b_upper, sigma).
CertificateOutcome CertifyOrbitMulticlass(
    const GroupSpec& group, const PointCloud& x, const PointCloud& x_prime,
    double p_a_lower, double p_b_upper, double sigma,
    int max_iters = kDefaultRegistrationIters);

}  // namespace invcert

#endif  // INVCERT_ORBIT_CERT_H_
