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

#include "invcert/tight_cert.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include "invcert/errors.h"
#include "invcert/numerics.h"
#include "invcert/orbit_cert.h"
#include "invcert/parallel.h"

namespace invcert {
namespace {

constexpr double kPi = std::numbers::pi;

void CheckSigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be finite and > 0");
  }
}

void CheckPair(const GroupSpec& group, const PointCloud& x,
               const PointCloud& x_prime) {
  if (!x.SameShape(x_prime)) {
    throw DomainError("clean and perturbed clouds differ in shape");
  }
  if (group.dim != x.dim()) {
    throw DomainError("group dimension does not match the point cloud");
  }
}

bool IsRotationGroup(GroupKind kind) {
  return kind == GroupKind::kRotation || kind == GroupKind::kRotoTranslation;
}

Eigen::Map<const Eigen::VectorXd> Vec(const Eigen::MatrixXd& m) {
  return {m.data(), m.size()};
}

// Clouds the SO path works on: centered for SE (the translation part of the
// group is removed exactly by centering).
std::pair<PointCloud, PointCloud> ReducedInputs(const GroupSpec& group,
                                                const PointCloud& x,
                                                const PointCloud& x_prime) {
  if (group.kind == GroupKind::kRotoTranslation) {
    return {Center(x), Center(x_prime)};
  }
  return {x, x_prime};
}

Eigen::Matrix3d Unpack(const double* q, So3Layout layout) {
  Eigen::Matrix3d m;
  if (layout == So3Layout::kFull) {
    for (int k = 0; k < 9; ++k) m(k % 3, k / 3) = q[k];
    return m;
  }
  m << q[0], q[2], q[5],
       0.0,  q[3], q[6],
       q[1], q[4], q[7];
  return m;
}

CertificateOutcome ClosedFormLower(CertMethod method, double p_lower,
                                   double sigma, double residual) {
  bool clamped = false;
  const double q = StdNormalQuantile(ClampProbability(p_lower, &clamped));
  CertificateOutcome out;
  out.method = method;
  out.p_lower = p_lower;
  out.residual = residual;
  out.radius = sigma * q;
  out.margin = out.radius - residual;
  out.bound_value = StdNormalCdf(q - residual / sigma);
  out.certified = out.bound_value > 0.5;
  if (clamped) out.flags |= kFlagProbabilityClamped;
  if (q == 0.0) out.flags |= kFlagZeroRadius;
  return out;
}

CertificateOutcome ClosedFormInverse(CertMethod method, double sigma,
                                     double residual) {
  CertificateOutcome out;
  out.method = method;
  out.residual = residual;
  out.bound_value = StdNormalCdf(residual / sigma);
  out.p_lower = out.bound_value;
  return out;
}

// a - b, with differences at rounding level mapped to an exact 0. When X'
// lies in the orbit of X the two log integrals agree exactly in real
// arithmetic; their floating-point residue is correlated with q and would
// otherwise decide the threshold test instead of the randomized tie-break.
double TieAwareDifference(double a, double b) {
  const double d = a - b;
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(d) <= 1e-10 * scale ? 0.0 : d;
}

McConfig HalfBudget(McConfig mc) {
  mc.alpha /= 2;
  return mc;
}

// Numerator / denominator of a normalized grid coordinate.
std::pair<int64_t, int64_t> AxisFraction(PminRange range, int resolution,
                                         int k) {
  const int64_t den = resolution - 1;
  const int64_t num = range == PminRange::kUnit ? k : 2 * int64_t{k} - den;
  const int64_t g = std::gcd(std::llabs(num), den);
  return {num / g, den / g};
}

uint64_t PackFraction(std::pair<int64_t, int64_t> f) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(f.first)) << 32) |
         static_cast<uint32_t>(f.second);
}

double So2OrbitResidual(const EpsilonParams& p) {
  const double nx2 = p.norm_x * p.norm_x;
  const double nxp2 = nx2 + 2.0 * p.eps1 + p.norm_delta * p.norm_delta;
  const double inner = std::hypot(nx2 + p.eps1, p.eps2);
  return std::sqrt(std::max(0.0, nxp2 + nx2 - 2.0 * inner));
}

}  // namespace

CertificateOutcome TightTranslation(const PointCloud& x,
                                    const PointCloud& x_prime, double p_lower,
                                    double sigma) {
  CheckSigma(sigma);
  const OrbitProjection proj = ProjectTranslation(x, x_prime);
  return ClosedFormLower(CertMethod::kTightTranslation, p_lower, sigma,
                         proj.residual);
}

Eigen::MatrixXd So2Weights(const PointCloud& x, const PointCloud& x_prime,
                           double sigma) {
  CheckSigma(sigma);
  if (x.dim() != 2 || !x.SameShape(x_prime)) {
    throw DomainError("SO(2) weights need two N x 2 clouds");
  }
  const double s2 = sigma * sigma;
  const Eigen::MatrixXd xp_turn = QuarterTurnClockwise(x_prime.data());
  const Eigen::MatrixXd x_turn = QuarterTurnClockwise(x.data());
  Eigen::MatrixXd w(4, x.data().size());
  w.row(0) = Vec(x_prime.data()).transpose() / s2;
  w.row(1) = Vec(xp_turn).transpose() / s2;
  w.row(2) = Vec(x.data()).transpose() / s2;
  w.row(3) = Vec(x_turn).transpose() / s2;
  return w;
}

RotationCertProblem BuildSo2Problem(const EpsilonParams& params, double sigma) {
  CheckSigma(sigma);
  if (!(params.norm_x >= 0.0) || !(params.norm_delta >= 0.0) ||
      !std::isfinite(params.norm_x) || !std::isfinite(params.norm_delta) ||
      !std::isfinite(params.eps1) || !std::isfinite(params.eps2)) {
    throw DomainError("SO(2) problem: parameters must be finite, norms >= 0");
  }
  const double s2 = sigma * sigma;
  const double nx2 = params.norm_x * params.norm_x;
  const double nd2 = params.norm_delta * params.norm_delta;
  const double e1 = params.eps1, e2 = params.eps2;
  const double a = 2.0 * e1 + nx2 + nd2;
  const double b = e1 + nx2;
  const double c = nx2;

  RotationCertProblem p;
  p.group = {GroupKind::kRotation, 2};
  p.sigma = sigma;
  p.mean_perturbed = Eigen::Vector4d(a, 0.0, b, e2) / s2;
  p.mean_clean = Eigen::Vector4d(b, -e2, c, 0.0) / s2;
  Eigen::Matrix4d cov;
  cov << a, 0.0, b, e2,
         0.0, a, -e2, b,
         b, -e2, c, 0.0,
         e2, b, 0.0, c;
  p.covariance = cov / s2;
  return p;
}

RotationCertProblem BuildSo2Problem(const PointCloud& x,
                                    const PointCloud& x_prime, double sigma) {
  if (x.dim() != 2) throw DomainError("SO(2) problem needs D == 2");
  return BuildSo2Problem(
      ComputeEpsilonParams(x, Perturbation::Between(x, x_prime)), sigma);
}

LikelihoodStatistic RhoSo2() {
  return LikelihoodStatistic(4, [](const double* q) {
    return TieAwareDifference(LogBesselI0(std::hypot(q[0], q[1])),
                              LogBesselI0(std::hypot(q[2], q[3])));
  });
}

So3BetaHat::So3BetaHat(int degree) : degree_(degree) {
  if (degree < 4) throw DomainError("quadrature degree must be >= 4");
  const QuadratureRule r2 = ClenshawCurtis(degree, -kPi / 2, kPi / 2);
  const QuadratureRule r3 = ClenshawCurtis(degree, 0.0, 2.0 * kPi);
  for (size_t i = 0; i < r2.nodes.size(); ++i) {
    const double c2 = std::cos(r2.nodes[i]);
    if (!(c2 > 0.0) || !(r2.weights[i] > 0.0)) continue;  // endpoints
    for (size_t k = 0; k < r3.nodes.size(); ++k) {
      if (!(r3.weights[k] > 0.0)) continue;
      nodes_.push_back({std::log(r2.weights[i] * r3.weights[k] * c2), c2,
                        std::sin(r2.nodes[i]), std::cos(r3.nodes[k]),
                        std::sin(r3.nodes[k])});
    }
  }
}

double So3BetaHat::operator()(const Eigen::Matrix3d& m_raw, double sigma) const {
  CheckSigma(sigma);
  const Eigen::Matrix3d m = sigma == 1.0 ? m_raw : Eigen::Matrix3d(m_raw / (sigma * sigma));
  if (!m.allFinite()) throw DomainError("so3 beta_hat: non-finite matrix");
  std::vector<double> terms(nodes_.size());
  double top = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < nodes_.size(); ++k) {
    const Node& n = nodes_[k];
    const double chi1 = n.c2 * m(0, 0) + n.s2 * n.s3 * m(0, 1) +
                        n.c3 * n.s2 * m(0, 2) + n.c3 * m(1, 1) - n.s3 * m(1, 2);
    const double chi2 = n.c2 * m(1, 0) + n.s2 * n.s3 * m(1, 1) +
                        n.c3 * n.s2 * m(1, 2) - n.c3 * m(0, 1) + n.s3 * m(0, 2);
    const double chi3 =
        -n.s2 * m(2, 0) + n.c2 * n.s3 * m(2, 1) + n.c2 * n.c3 * m(2, 2);
    terms[k] = n.log_weight + chi3 + LogBesselI0(std::hypot(chi1, chi2));
    top = std::max(top, terms[k]);
  }
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - top);
  return std::log(2.0 * kPi) + top + std::log(acc);
}

double So3LogBetaHat(const Eigen::Matrix3d& m, double sigma, int degree) {
  return So3BetaHat(degree)(m, sigma);
}

Eigen::MatrixXd So3Weights(const PointCloud& x, const PointCloud& x_prime,
                           double sigma, So3Layout layout) {
  CheckSigma(sigma);
  if (x.dim() != 3 || !x.SameShape(x_prime)) {
    throw DomainError("SO(3) weights need two N x 3 clouds");
  }
  const int n = x.n_points();
  const double s2 = sigma * sigma;
  const int per_block = layout == So3Layout::kFull ? 9 : 8;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * per_block, 3 * n);
  const Eigen::MatrixXd* sources[2] = {&x_prime.data(), &x.data()};
  for (int block = 0; block < 2; ++block) {
    int row = block * per_block;
    // Entry (i, j) of A^T Z is sum_n A(n, i) Z(n, j): column i of A placed
    // against column j of Z.
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) {
        if (layout == So3Layout::kZeroPadded && i == 1 && j == 0) continue;
        w.block(row, j * n, 1, n) = sources[block]->col(i).transpose() / s2;
        ++row;
      }
    }
  }
  return w;
}

RotationCertProblem BuildSo3Problem(const PointCloud& x,
                                    const PointCloud& x_prime, double sigma,
                                    int degree, So3Layout layout) {
  if (degree < 4) throw DomainError("quadrature degree must be >= 4");
  const Eigen::MatrixXd w = So3Weights(x, x_prime, sigma, layout);
  RotationCertProblem p;
  p.group = {GroupKind::kRotation, 3};
  p.sigma = sigma;
  p.quadrature_degree = degree;
  p.layout = layout;
  p.mean_perturbed = w * Vec(x_prime.data());
  p.mean_clean = w * Vec(x.data());
  p.covariance = (sigma * sigma) * (w * w.transpose());
  return p;
}

LikelihoodStatistic RhoSo3(int degree, So3Layout layout) {
  auto beta = std::make_shared<const So3BetaHat>(degree);
  const int per_block = layout == So3Layout::kFull ? 9 : 8;
  return LikelihoodStatistic(2 * per_block, [beta, layout, per_block](const double* q) {
    return TieAwareDifference((*beta)(Unpack(q, layout)),
                              (*beta)(Unpack(q + per_block, layout)));
  });
}

RotationCertProblem BuildRotationProblem(const GroupSpec& group,
                                         const PointCloud& x,
                                         const PointCloud& x_prime, double sigma,
                                         int degree, So3Layout layout) {
  if (!IsRotationGroup(group.kind)) {
    throw DomainError("tight rotation certificates need group SO or SE");
  }
  CheckPair(group, x, x_prime);
  const auto [xr, xpr] = ReducedInputs(group, x, x_prime);
  RotationCertProblem p = x.dim() == 2
                              ? BuildSo2Problem(xr, xpr, sigma)
                              : BuildSo3Problem(xr, xpr, sigma, degree, layout);
  p.group = group;
  return p;
}

LikelihoodStatistic StatisticFor(const RotationCertProblem& problem) {
  if (problem.group.dim == 2) return RhoSo2();
  return RhoSo3(problem.quadrature_degree, problem.layout);
}

CertificateOutcome CertifyRotationTight(const GroupSpec& group,
                                        const PointCloud& x,
                                        const PointCloud& x_prime,
                                        double p_lower, double sigma,
                                        const TightOptions& options,
                                        uint64_t seed) {
  const RotationCertProblem problem = BuildRotationProblem(
      group, x, x_prime, sigma, options.quadrature_degree, options.layout);
  CertificateOutcome out = ProbCertifyReduced(p_lower, problem,
                                              StatisticFor(problem), options.mc,
                                              seed);
  const auto [xr, xpr] = ReducedInputs(group, x, x_prime);
  out.residual = ProjectRotation(xr, xpr).residual;
  out.radius = BlackboxRadius(p_lower, sigma);
  out.margin = out.radius - out.residual;
  return out;
}

CertificateOutcome UpperBoundRotationTight(const GroupSpec& group,
                                           const PointCloud& x,
                                           const PointCloud& x_prime,
                                           double p_upper, double sigma,
                                           const TightOptions& options,
                                           uint64_t seed) {
  const RotationCertProblem problem = BuildRotationProblem(
      group, x, x_prime, sigma, options.quadrature_degree, options.layout);
  CertificateOutcome out = ProbCertifyUpperReduced(
      p_upper, problem, StatisticFor(problem), options.mc, seed);
  const auto [xr, xpr] = ReducedInputs(group, x, x_prime);
  out.residual = ProjectRotation(xr, xpr).residual;
  return out;
}

CertificateOutcome CertifyTight(const GroupSpec& group, const PointCloud& x,
                                const PointCloud& x_prime, double p_lower,
                                double sigma, const TightOptions& options,
                                uint64_t seed) {
  CheckPair(group, x, x_prime);
  switch (group.kind) {
    case GroupKind::kTrivial:
      CheckSigma(sigma);
      return ClosedFormLower(CertMethod::kBlackBox, p_lower, sigma,
                             ProjectIdentity(x, x_prime).residual);
    case GroupKind::kTranslation:
      return TightTranslation(x, x_prime, p_lower, sigma);
    case GroupKind::kRotation:
    case GroupKind::kRotoTranslation:
      return CertifyRotationTight(group, x, x_prime, p_lower, sigma, options,
                                  seed);
    default:
      throw DomainError("no tight certificate for group " +
                        std::string(GroupTag(group.kind)));
  }
}

CertificateOutcome CertifyMulticlass(const GroupSpec& group,
                                     const PointCloud& x,
                                     const PointCloud& x_prime,
                                     double p_a_lower, double p_b_upper,
                                     double sigma, const TightOptions& options,
                                     uint64_t seed) {
  CheckPair(group, x, x_prime);
  if (group.kind == GroupKind::kTrivial || group.kind == GroupKind::kTranslation) {
    CertificateOutcome out =
        CertifyOrbitMulticlass(group, x, x_prime, p_a_lower, p_b_upper, sigma);
    out.method = group.kind == GroupKind::kTrivial ? CertMethod::kBlackBox
                                                   : CertMethod::kTightTranslation;
    return out;
  }
  if (!IsRotationGroup(group.kind)) {
    throw DomainError("no tight certificate for group " +
                      std::string(GroupTag(group.kind)));
  }
  if (std::isnan(p_a_lower) || std::isnan(p_b_upper)) {
    throw DomainError("class probabilities must not be NaN");
  }
  if (!(p_a_lower > p_b_upper)) {
    CertificateOutcome out;
    out.method = CertMethod::kTightRotation;
    out.p_lower = p_a_lower;
    out.flags |= kFlagClassesNotSeparated;
    return out;
  }
  TightOptions half = options;
  half.mc = HalfBudget(options.mc);
  CertificateOutcome lower = CertifyRotationTight(
      group, x, x_prime, p_a_lower, sigma, half, MixSeed(seed, 0x6c6f));
  const CertificateOutcome upper = UpperBoundRotationTight(
      group, x, x_prime, p_b_upper, sigma, half, MixSeed(seed, 0x7570));
  lower.has_competitor_bound = true;
  lower.competitor_bound = upper.bound_value;
  lower.flags |= upper.flags;
  lower.confidence = 1.0 - ((1.0 - lower.confidence) + (1.0 - upper.confidence));
  lower.certified = lower.bound_value > upper.bound_value;
  lower.radius = MulticlassRadius(p_a_lower, p_b_upper, sigma);
  lower.margin = lower.radius - lower.residual;
  return lower;
}

CertificateOutcome InverseCertificate(const GroupSpec& group,
                                      const PointCloud& x,
                                      const PointCloud& x_prime, double sigma,
                                      const TightOptions& options,
                                      uint64_t seed) {
  CheckPair(group, x, x_prime);
  CheckSigma(sigma);
  switch (group.kind) {
    case GroupKind::kTrivial:
      return ClosedFormInverse(CertMethod::kBlackBox, sigma,
                               ProjectIdentity(x, x_prime).residual);
    case GroupKind::kTranslation:
      return ClosedFormInverse(CertMethod::kTightTranslation, sigma,
                               ProjectTranslation(x, x_prime).residual);
    case GroupKind::kRotation:
    case GroupKind::kRotoTranslation: {
      const RotationCertProblem problem = BuildRotationProblem(
          group, x, x_prime, sigma, options.quadrature_degree, options.layout);
      CertificateOutcome out = InverseCertifyReduced(
          problem, StatisticFor(problem), options.mc, seed);
      const auto [xr, xpr] = ReducedInputs(group, x, x_prime);
      out.residual = ProjectRotation(xr, xpr).residual;
      return out;
    }
    default:
      throw DomainError("no tight certificate for group " +
                        std::string(GroupTag(group.kind)));
  }
}

CertificateOutcome InverseCertificateOrbit(const GroupSpec& group,
                                           const PointCloud& x,
                                           const PointCloud& x_prime,
                                           double sigma) {
  CheckPair(group, x, x_prime);
  CheckSigma(sigma);
  const OrbitProjection proj = ProjectOntoOrbit(group.kind, x, x_prime);
  CertificateOutcome out = ClosedFormInverse(
      group.kind == GroupKind::kTrivial ? CertMethod::kBlackBox
                                        : CertMethod::kOrbit,
      sigma, proj.residual);
  return out;
}

double PminAxisNode(PminRange range, int resolution, int k) {
  const auto [num, den] = AxisFraction(range, resolution, k);
  return static_cast<double>(num) / static_cast<double>(den);
}

uint64_t PminCellSeed(uint64_t seed, PminRange range, int resolution, int i,
                      int j) {
  return MixSeed(seed, PackFraction(AxisFraction(range, resolution, j)),
                 PackFraction(AxisFraction(range, resolution, i)));
}

PminGrid ComputePminGrid(const PminGridRequest& req) {
  CheckSigma(req.sigma);
  if (!(req.norm_x >= 0.0) || !std::isfinite(req.norm_x) ||
      !(req.norm_delta >= 0.0) || !std::isfinite(req.norm_delta)) {
    throw DomainError("norms must be finite and >= 0");
  }
  if (req.resolution < 2) throw DomainError("grid resolution must be >= 2");
  if (req.method == PminMethod::kSo2Tight) req.mc.Validate();

  const int r = req.resolution;
  PminGrid grid;
  grid.axis.resize(r);
  for (int k = 0; k < r; ++k) grid.axis[k] = PminAxisNode(req.range, r, k);
  grid.values = Eigen::MatrixXd::Zero(r, r);
  grid.feasible.setConstant(r, r, false);
  grid.blackbox = StdNormalCdf(req.norm_delta / req.sigma);

  const double scale = req.norm_x * req.norm_delta;
  for (const EpsilonParams& p : AdversarialRotationLocus(req.norm_x, req.norm_delta)) {
    if (scale > 0.0) grid.loci.emplace_back(p.eps1 / scale, p.eps2 / scale);
  }

  const LikelihoodStatistic rho = RhoSo2();
  std::mutex mu;
  ParallelFor(int64_t{r} * r, [&](int64_t begin, int64_t end) {
    uint32_t local_flags = 0;
    for (int64_t cell = begin; cell < end; ++cell) {
      const int i = static_cast<int>(cell / r);  // eps2 index
      const int j = static_cast<int>(cell % r);  // eps1 index
      const double e1 = grid.axis[j], e2 = grid.axis[i];
      if (e1 * e1 + e2 * e2 > 1.0 + 1e-12) continue;
      grid.feasible(i, j) = true;
      const EpsilonParams params{e1 * scale, e2 * scale, req.norm_x,
                                 req.norm_delta};
      switch (req.method) {
        case PminMethod::kBlackBox:
          grid.values(i, j) = grid.blackbox;
          break;
        case PminMethod::kSo2Orbit:
          grid.values(i, j) = StdNormalCdf(So2OrbitResidual(params) / req.sigma);
          break;
        case PminMethod::kSo2Tight: {
          const CertificateOutcome out = InverseCertifyReduced(
              BuildSo2Problem(params, req.sigma), rho, req.mc,
              PminCellSeed(req.seed, req.range, r, i, j));
          grid.values(i, j) = out.bound_value;
          local_flags |= out.flags;
          break;
        }
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    grid.flags |= local_flags;
  });
  return grid;
}

}  // namespace invcert
