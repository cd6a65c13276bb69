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

// Point clouds and the group actions that act on them. Rows are points; every
// group element acts from the right, X -> X R^T (+ 1 b^T).

#ifndef INVCERT_GEOMETRY_H_
#define INVCERT_GEOMETRY_H_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace invcert {

// N x D matrix of finite coordinates, N >= 1, D in {2, 3}.
class PointCloud {
 public:
  explicit PointCloud(Eigen::MatrixXd data);

  int n_points() const { return static_cast<int>(data_.rows()); }
  int dim() const { return static_cast<int>(data_.cols()); }
  const Eigen::MatrixXd& data() const { return data_; }

  // Frobenius norm.
  double Norm() const { return data_.norm(); }

  bool SameShape(const PointCloud& other) const {
    return data_.rows() == other.data_.rows() &&
           data_.cols() == other.data_.cols();
  }

 private:
  Eigen::MatrixXd data_;
};

// Delta = X' - X.
class Perturbation {
 public:
  static Perturbation Between(const PointCloud& x, const PointCloud& x_prime);
  explicit Perturbation(Eigen::MatrixXd delta);

  const Eigen::MatrixXd& delta() const { return delta_; }
  double Norm() const { return delta_.norm(); }

 private:
  Eigen::MatrixXd delta_;
};

enum class GroupKind {
  kTrivial,                     // no invariance: black-box smoothing
  kTranslation,                 // T(D)
  kRotation,                    // SO(D)
  kOrthogonal,                  // O(D)
  kRotoTranslation,             // SE(D)
  kPermutation,                 // S(N)
  kPermutationRotoTranslation,  // S(N) x SE(D)
};

struct GroupSpec {
  GroupKind kind = GroupKind::kTrivial;
  int dim = 2;
};

// Short tags used on the command line and in JSON: none, T, SO, O, SE, S, SxSE.
std::string_view GroupTag(GroupKind kind);
GroupKind ParseGroupTag(std::string_view tag);

// <A, B>_F. Throws DomainError on shape mismatch.
double FrobeniusInner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
double FrobeniusInner(const PointCloud& a, const PointCloud& b);

// X - 1_N mean(X).
Eigen::MatrixXd Center(const Eigen::MatrixXd& x);
PointCloud Center(const PointCloud& x);

// Counter-clockwise rotation by theta.
Eigen::Matrix2d Rot2(double theta);

// Intrinsic z-y-x Euler rotation R_z(w1) R_y(w2) R_x(w3).
Eigen::Matrix3d Rot3Zyx(const Eigen::Vector3d& omega);

// Inverse of Rot3Zyx away from gimbal lock: w1, w3 in (-pi, pi],
// w2 in [-pi/2, pi/2].
Eigen::Vector3d ExtractZyx(const Eigen::Matrix3d& r);

// X R(-pi/2)^T for a 2D cloud.
Eigen::MatrixXd QuarterTurnClockwise(const Eigen::MatrixXd& x);

// Orientation parameters of a 2D perturbation relative to the clean cloud.
struct EpsilonParams {
  double eps1 = 0.0;        // <X, Delta>_F
  double eps2 = 0.0;        // <X R(-pi/2)^T, Delta>_F
  double norm_x = 0.0;      // ||X||_2
  double norm_delta = 0.0;  // ||Delta||_2

  // True when sqrt(eps1^2 + eps2^2) <= norm_x * norm_delta (+ slack).
  bool Feasible(double slack = 1e-9) const;
};

// Requires D == 2.
EpsilonParams ComputeEpsilonParams(const PointCloud& x,
                                   const Perturbation& delta);

// The (eps1, +-eps2) points reached by rotating a cloud of norm norm_x by an
// angle whose displacement has norm norm_delta: empty when
// norm_delta > 2 norm_x, a single point when eps2 == 0.
std::vector<EpsilonParams> AdversarialRotationLocus(double norm_x,
                                                    double norm_delta);

}  // namespace invcert

#endif  // INVCERT_GEOMETRY_H_
