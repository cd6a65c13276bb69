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

#include "invcert/orbit_cert.h"

#include <cmath>
#include <numbers>
#include <utility>

#include "invcert/errors.h"
#include "invcert/hungarian.h"
#include "invcert/numerics.h"

namespace invcert {
namespace {

constexpr double kRegistrationTolerance = 1e-9;

void RequireSameShape(const PointCloud& x, const PointCloud& x_prime) {
  if (!x.SameShape(x_prime)) {
    throw DomainError("clean and perturbed clouds differ in shape");
  }
}

Eigen::RowVectorXd Mean(const Eigen::MatrixXd& m) {
  return m.colwise().mean();
}

// R minimizing ||a R^T - b||, restricted to det R = +1 when proper is set.
Eigen::MatrixXd Procrustes(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                           bool proper) {
  const Eigen::MatrixXd h = a.transpose() * b;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(h,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();
  if (!proper) return v * u.transpose();
  Eigen::VectorXd s = Eigen::VectorXd::Ones(h.rows());
  if ((v * u.transpose()).determinant() < 0.0) s(s.size() - 1) = -1.0;
  return v * s.asDiagonal() * u.transpose();
}

Eigen::MatrixXd Permute(const Eigen::MatrixXd& m, const std::vector<int>& perm) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.row(i) = m.row(perm[i]);
  return out;
}

std::vector<int> MatchRows(const Eigen::MatrixXd& target,
                           const Eigen::MatrixXd& moving) {
  const Eigen::Index n = target.rows();
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      cost(m, k) = (target.row(m) - moving.row(k)).squaredNorm();
    }
  }
  return SolveAssignment(cost);
}

OrbitProjection Finish(const PointCloud& x, const PointCloud& x_prime,
                       OrbitProjection p) {
  p.residual = (p.Apply(x_prime.data()) - x.data()).norm();
  return p;
}

OrbitProjection Identity(int dim) {
  OrbitProjection p;
  p.rotation = Eigen::MatrixXd::Identity(dim, dim);
  p.translation = Eigen::RowVectorXd::Zero(dim);
  return p;
}

// Kabsch: proper rotation and translation aligning a onto b.
std::pair<Eigen::MatrixXd, Eigen::RowVectorXd> Kabsch(const Eigen::MatrixXd& a,
                                                      const Eigen::MatrixXd& b) {
  Eigen::MatrixXd r = Procrustes(Center(a), Center(b), /*proper=*/true);
  Eigen::RowVectorXd t = Mean(b) - Mean(a) * r.transpose();
  return {std::move(r), std::move(t)};
}

std::vector<Eigen::MatrixXd> SignedPermutationRotations3() {
  std::vector<Eigen::MatrixXd> out;
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (const auto& p : perms) {
    for (int signs = 0; signs < 8; ++signs) {
      Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
      for (int i = 0; i < 3; ++i) m(i, p[i]) = (signs >> i) & 1 ? -1.0 : 1.0;
      if (m.determinant() > 0.0) out.emplace_back(m);
    }
  }
  return out;
}

// Initial rotations: identity, principal-axis alignments with each proper
// sign choice, and a coarse covering of SO(D).
std::vector<Eigen::MatrixXd> InitialRotations(const Eigen::MatrixXd& x,
                                              const Eigen::MatrixXd& x_prime) {
  const int d = static_cast<int>(x.cols());
  std::vector<Eigen::MatrixXd> starts;
  starts.emplace_back(Eigen::MatrixXd::Identity(d, d));

  const Eigen::MatrixXd cx = Center(x), cxp = Center(x_prime);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(cx.transpose() * cx);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> exp(cxp.transpose() * cxp);
  if (ex.info() == Eigen::Success && exp.info() == Eigen::Success) {
    for (int signs = 0; signs < (1 << d); ++signs) {
      Eigen::VectorXd s(d);
      for (int i = 0; i < d; ++i) s(i) = (signs >> i) & 1 ? -1.0 : 1.0;
      Eigen::MatrixXd r =
          ex.eigenvectors() * s.asDiagonal() * exp.eigenvectors().transpose();
      if (r.determinant() > 0.0) starts.push_back(std::move(r));
    }
  }

  if (d == 2) {
    for (int k = 1; k < 12; ++k) {
      starts.emplace_back(Rot2(2.0 * std::numbers::pi * k / 12.0));
    }
  } else {
    for (auto& m : SignedPermutationRotations3()) {
      if (!m.isIdentity()) starts.push_back(std::move(m));
    }
  }
  return starts;
}

OrbitProjection Alternate(const Eigen::MatrixXd& x, const Eigen::MatrixXd& xp,
                          const Eigen::MatrixXd& r0, int max_iters) {
  const int n = static_cast<int>(x.rows());
  OrbitProjection cur;
  cur.exact = false;
  cur.rotation = r0;
  cur.translation = r0.isIdentity() ? Eigen::RowVectorXd::Zero(x.cols())
                                    : Eigen::RowVectorXd(Mean(x) - Mean(xp) * r0.transpose());
  cur.permutation.resize(n);
  for (int i = 0; i < n; ++i) cur.permutation[i] = i;
  cur.residual = (cur.Apply(xp) - x).norm();

  OrbitProjection best = cur;
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::MatrixXd moved =
        (xp * cur.rotation.transpose()).rowwise() + cur.translation;
    cur.permutation = MatchRows(x, moved);
    auto [r, t] = Kabsch(Permute(xp, cur.permutation), x);
    cur.rotation = std::move(r);
    cur.translation = std::move(t);
    const double prev = cur.residual;
    cur.residual = (cur.Apply(xp) - x).norm();
    if (cur.residual < best.residual) best = cur;
    if (prev - cur.residual < kRegistrationTolerance) break;
  }
  return best;
}

void CheckSigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be finite and > 0");
  }
}

void CheckGroupDim(const GroupSpec& group, const PointCloud& x) {
  if (group.dim != x.dim()) {
    throw DomainError("group dimension does not match the point cloud");
  }
}

}  // namespace

Eigen::MatrixXd OrbitProjection::Apply(const Eigen::MatrixXd& x_prime) const {
  Eigen::MatrixXd moved =
      permutation.empty() ? x_prime : Permute(x_prime, permutation);
  return (moved * rotation.transpose()).rowwise() + translation;
}

double BlackboxRadius(double p_lower, double sigma, bool* clamped) {
  CheckSigma(sigma);
  if (std::isnan(p_lower)) throw DomainError("p_lower must not be NaN");
  return sigma * StdNormalQuantile(ClampProbability(p_lower, clamped));
}

double MulticlassRadius(double p_a, double p_b, double sigma, bool* clamped) {
  CheckSigma(sigma);
  if (std::isnan(p_a) || std::isnan(p_b)) {
    throw DomainError("class probabilities must not be NaN");
  }
  bool ca = false, cb = false;
  const double qa = StdNormalQuantile(ClampProbability(p_a, &ca));
  const double qb = StdNormalQuantile(ClampProbability(p_b, &cb));
  if (clamped) *clamped = ca || cb;
  return 0.5 * sigma * (qa - qb);
}

OrbitProjection ProjectIdentity(const PointCloud& x, const PointCloud& x_prime) {
  RequireSameShape(x, x_prime);
  return Finish(x, x_prime, Identity(x.dim()));
}

OrbitProjection ProjectTranslation(const PointCloud& x,
                                   const PointCloud& x_prime) {
  RequireSameShape(x, x_prime);
  OrbitProjection p = Identity(x.dim());
  p.translation = Mean(x.data()) - Mean(x_prime.data());
  return Finish(x, x_prime, std::move(p));
}

OrbitProjection ProjectRotation(const PointCloud& x, const PointCloud& x_prime) {
  RequireSameShape(x, x_prime);
  OrbitProjection p = Identity(x.dim());
  p.rotation = Procrustes(x_prime.data(), x.data(), /*proper=*/true);
  return Finish(x, x_prime, std::move(p));
}

OrbitProjection ProjectOrthogonal(const PointCloud& x,
                                  const PointCloud& x_prime) {
  RequireSameShape(x, x_prime);
  OrbitProjection p = Identity(x.dim());
  p.rotation = Procrustes(x_prime.data(), x.data(), /*proper=*/false);
  return Finish(x, x_prime, std::move(p));
}

OrbitProjection ProjectRotoTranslation(const PointCloud& x,
                                       const PointCloud& x_prime) {
  RequireSameShape(x, x_prime);
  OrbitProjection p = Identity(x.dim());
  std::tie(p.rotation, p.translation) = Kabsch(x_prime.data(), x.data());
  return Finish(x, x_prime, std::move(p));
}

OrbitProjection ProjectPermutation(const PointCloud& x,
                                   const PointCloud& x_prime) {
  RequireSameShape(x, x_prime);
  OrbitProjection p = Identity(x.dim());
  p.permutation = MatchRows(x.data(), x_prime.data());
  return Finish(x, x_prime, std::move(p));
}

OrbitProjection ProjectRegistrationUpper(const PointCloud& x,
                                         const PointCloud& x_prime,
                                         int max_iters) {
  RequireSameShape(x, x_prime);
  if (max_iters < 0) throw DomainError("max_iters must be >= 0");
  OrbitProjection best;
  bool have = false;
  for (const auto& r0 : InitialRotations(x.data(), x_prime.data())) {
    OrbitProjection cand = Alternate(x.data(), x_prime.data(), r0, max_iters);
    if (!have || cand.residual < best.residual) {
      best = std::move(cand);
      have = true;
    }
  }
  return best;
}

OrbitProjection ProjectOntoOrbit(GroupKind group, const PointCloud& x,
                                 const PointCloud& x_prime, int max_iters) {
  switch (group) {
    case GroupKind::kTrivial:
      return ProjectIdentity(x, x_prime);
    case GroupKind::kTranslation:
      return ProjectTranslation(x, x_prime);
    case GroupKind::kRotation:
      return ProjectRotation(x, x_prime);
    case GroupKind::kOrthogonal:
      return ProjectOrthogonal(x, x_prime);
    case GroupKind::kRotoTranslation:
      return ProjectRotoTranslation(x, x_prime);
    case GroupKind::kPermutation:
      return ProjectPermutation(x, x_prime);
    case GroupKind::kPermutationRotoTranslation:
      return ProjectRegistrationUpper(x, x_prime, max_iters);
  }
  throw DomainError("unknown group");
}

CertificateOutcome CertifyOrbit(const GroupSpec& group, const PointCloud& x,
                                const PointCloud& x_prime, double p_lower,
                                double sigma, int max_iters) {
  CheckGroupDim(group, x);
  bool clamped = false;
  const double radius = BlackboxRadius(p_lower, sigma, &clamped);
  const OrbitProjection proj = ProjectOntoOrbit(group.kind, x, x_prime, max_iters);

  CertificateOutcome out;
  out.method = group.kind == GroupKind::kTrivial ? CertMethod::kBlackBox
                                                 : CertMethod::kOrbit;
  out.p_lower = p_lower;
  out.radius = radius;
  out.residual = proj.residual;
  out.margin = radius - proj.residual;
  out.certified = proj.residual < radius;
  out.bound_value = StdNormalCdf(radius / sigma - proj.residual / sigma);
  if (clamped) out.flags |= kFlagProbabilityClamped;
  if (radius == 0.0) out.flags |= kFlagZeroRadius;
  if (!proj.exact && !out.certified) out.flags |= kFlagInconclusive;
  return out;
}

CertificateOutcome CertifyOrbitMulticlass(const GroupSpec& group,
                                          const PointCloud& x,
                                          const PointCloud& x_prime,
                                          double p_a_lower, double p_b_upper,
                                          double sigma, int max_iters) {
  CheckGroupDim(group, x);
  bool clamped = false;
  const double radius = MulticlassRadius(p_a_lower, p_b_upper, sigma, &clamped);
  const OrbitProjection proj = ProjectOntoOrbit(group.kind, x, x_prime, max_iters);

  CertificateOutcome out;
  out.method = group.kind == GroupKind::kTrivial ? CertMethod::kBlackBox
                                                 : CertMethod::kOrbit;
  out.p_lower = p_a_lower;
  out.radius = radius;
  out.residual = proj.residual;
  out.margin = radius - proj.residual;
  out.certified = p_a_lower > p_b_upper && proj.residual < radius;
  // Margin of the worst-case class gap in probability units: the perturbed
  // top-class probability bound minus the runner-up bound.
  out.bound_value =
      StdNormalCdf(StdNormalQuantile(ClampProbability(p_a_lower, nullptr)) -
                   proj.residual / sigma) -
      StdNormalCdf(StdNormalQuantile(ClampProbability(p_b_upper, nullptr)) +
                   proj.residual / sigma);
  if (clamped) out.flags |= kFlagProbabilityClamped;
  if (!(p_a_lower > p_b_upper)) out.flags |= kFlagClassesNotSeparated;
  if (radius == 0.0) out.flags |= kFlagZeroRadius;
  if (!proj.exact && !out.certified) out.flags |= kFlagInconclusive;
  return out;
}

}  // namespace invcert
