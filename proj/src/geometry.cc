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

#include "invcert/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "invcert/errors.h"

namespace invcert {

PointCloud::PointCloud(Eigen::MatrixXd data) : data_(std::move(data)) {
  if (data_.rows() < 1) throw DomainError("point cloud: needs at least one point");
  if (data_.cols() != 2 && data_.cols() != 3) {
    throw DomainError("point cloud: dimension must be 2 or 3, got " +
                      std::to_string(data_.cols()));
  }
  if (!data_.allFinite()) throw DomainError("point cloud: non-finite entry");
}

Perturbation::Perturbation(Eigen::MatrixXd delta) : delta_(std::move(delta)) {
  if (!delta_.allFinite()) throw DomainError("perturbation: non-finite entry");
}

Perturbation Perturbation::Between(const PointCloud& x,
                                   const PointCloud& x_prime) {
  if (!x.SameShape(x_prime)) {
    throw DomainError("perturbation: clean and perturbed shapes differ");
  }
  return Perturbation(x_prime.data() - x.data());
}

std::string_view GroupTag(GroupKind kind) {
  switch (kind) {
    case GroupKind::kTrivial: return "none";
    case GroupKind::kTranslation: return "T";
    case GroupKind::kRotation: return "SO";
    case GroupKind::kOrthogonal: return "O";
    case GroupKind::kRotoTranslation: return "SE";
    case GroupKind::kPermutation: return "S";
    case GroupKind::kPermutationRotoTranslation: return "SxSE";
  }
  return "?";
}

GroupKind ParseGroupTag(std::string_view tag) {
  if (tag == "none" || tag == "blackbox") return GroupKind::kTrivial;
  if (tag == "T") return GroupKind::kTranslation;
  if (tag == "SO") return GroupKind::kRotation;
  if (tag == "O") return GroupKind::kOrthogonal;
  if (tag == "SE") return GroupKind::kRotoTranslation;
  if (tag == "S") return GroupKind::kPermutation;
  if (tag == "SxSE") return GroupKind::kPermutationRotoTranslation;
  throw DomainError("unknown group '" + std::string(tag) + "'");
}

double FrobeniusInner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DomainError("frobenius_inner: shape mismatch");
  }
  return a.cwiseProduct(b).sum();
}

double FrobeniusInner(const PointCloud& a, const PointCloud& b) {
  return FrobeniusInner(a.data(), b.data());
}

Eigen::MatrixXd Center(const Eigen::MatrixXd& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  return x.rowwise() - mean;
}

PointCloud Center(const PointCloud& x) { return PointCloud(Center(x.data())); }

Eigen::Matrix2d Rot2(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

Eigen::Matrix3d Rot3Zyx(const Eigen::Vector3d& omega) {
  const Eigen::Matrix3d rz =
      Eigen::AngleAxisd(omega(0), Eigen::Vector3d::UnitZ()).toRotationMatrix();
  const Eigen::Matrix3d ry =
      Eigen::AngleAxisd(omega(1), Eigen::Vector3d::UnitY()).toRotationMatrix();
  const Eigen::Matrix3d rx =
      Eigen::AngleAxisd(omega(2), Eigen::Vector3d::UnitX()).toRotationMatrix();
  return rz * ry * rx;
}

Eigen::Vector3d ExtractZyx(const Eigen::Matrix3d& r) {
  // R = Rz Ry Rx has R(2,0) = -sin(w2), R(1,0)/R(0,0) = tan(w1),
  // R(2,1)/R(2,2) = tan(w3).
  const double w2 = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  const double w1 = std::atan2(r(1, 0), r(0, 0));
  const double w3 = std::atan2(r(2, 1), r(2, 2));
  return {w1, w2, w3};
}

Eigen::MatrixXd QuarterTurnClockwise(const Eigen::MatrixXd& x) {
  if (x.cols() != 2) throw DomainError("quarter turn: requires D == 2");
  return x * Rot2(-std::numbers::pi / 2).transpose();
}

bool EpsilonParams::Feasible(double slack) const {
  return std::hypot(eps1, eps2) <= norm_x * norm_delta + slack;
}

EpsilonParams ComputeEpsilonParams(const PointCloud& x,
                                   const Perturbation& delta) {
  if (x.dim() != 2) throw DomainError("epsilon_params: requires D == 2");
  if (delta.delta().rows() != x.data().rows() ||
      delta.delta().cols() != x.data().cols()) {
    throw DomainError("epsilon_params: shape mismatch");
  }
  // X R(-pi/2)^T maps each row (a, b) to (b, -a).
  Eigen::MatrixXd turned(x.data().rows(), 2);
  turned.col(0) = x.data().col(1);
  turned.col(1) = -x.data().col(0);
  EpsilonParams out;
  out.eps1 = FrobeniusInner(x.data(), delta.delta());
  out.eps2 = FrobeniusInner(turned, delta.delta());
  out.norm_x = x.Norm();
  out.norm_delta = delta.Norm();
  return out;
}

std::vector<EpsilonParams> AdversarialRotationLocus(double norm_x,
                                                    double norm_delta) {
  if (!(norm_x >= 0.0) || !(norm_delta >= 0.0)) {
    throw DomainError("adversarial_rotation_locus: norms must be >= 0");
  }
  if (norm_delta > 2.0 * norm_x) return {};
  const double d2 = norm_delta * norm_delta;
  const double radicand = std::max(0.0, d2 * (4.0 * norm_x * norm_x - d2));
  EpsilonParams p;
  p.norm_x = norm_x;
  p.norm_delta = norm_delta;
  p.eps1 = -0.5 * d2;
  p.eps2 = 0.5 * std::sqrt(radicand);
  if (p.eps2 == 0.0) return {p};
  EpsilonParams q = p;
  q.eps2 = -p.eps2;
  return {p, q};
}

}  // namespace invcert
