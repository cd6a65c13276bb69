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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "invcert/errors.h"
#include "invcert/numerics.h"
#include "invcert/parallel.h"

namespace invcert {
namespace {

enum Stage : uint64_t {
  kStageClassifier = 1,
  kStageClean = 2,
  kStagePerturbed = 3,
  kStageTieBreak = 4,
};

// A statistic value paired with an independent uniform tie-breaker. Ordering
// samples lexicographically on (rho, u) turns the threshold test into a
// randomized test, so level sets of rho with positive mass are split in the
// right proportion instead of being all-in or all-out.
struct Tagged {
  double rho;
  double u;
};

bool operator<(const Tagged& a, const Tagged& b) {
  return a.rho < b.rho || (a.rho == b.rho && a.u < b.u);
}

void CheckProblem(const RotationCertProblem& problem,
                  const LikelihoodStatistic& statistic) {
  const int d = problem.dim();
  if (problem.mean_perturbed.size() != d || problem.covariance.rows() != d ||
      problem.covariance.cols() != d) {
    throw DomainError("reduced problem: inconsistent dimensions");
  }
  if (statistic.dim() != d) {
    throw DomainError("reduced problem: statistic dimension " +
                      std::to_string(statistic.dim()) +
                      " does not match problem dimension " + std::to_string(d));
  }
}

std::vector<Tagged> DrawStatistic(const Eigen::VectorXd& mean,
                                  const RotationCertProblem& problem,
                                  const LikelihoodStatistic& statistic,
                                  int64_t count, uint64_t seed) {
  const GaussianSampler sampler(GaussianSpec{mean, problem.covariance});
  const Eigen::MatrixXd q = sampler.Sample(count, MixSeed(seed, 0));
  std::vector<Tagged> out(count);
  std::mt19937_64 gen(MixSeed(seed, kStageTieBreak));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (auto& t : out) t.u = unif(gen);
  ParallelFor(count, [&](int64_t begin, int64_t end) {
    for (int64_t j = begin; j < end; ++j) {
      const double rho = statistic(q.col(j).data());
      if (std::isnan(rho)) {
        throw NumericalError("likelihood statistic returned NaN at sample " +
                             std::to_string(j));
      }
      out[j].rho = rho;
    }
  });
  return out;
}

// The n-th smallest element (1-based).
Tagged OrderStatistic(std::vector<Tagged> v, int64_t n) {
  std::nth_element(v.begin(), v.begin() + (n - 1), v.end());
  return v[n - 1];
}

void FillStderr(CertificateOutcome& out, int64_t n) {
  const double b = out.bound_value;
  out.mc_stderr = std::sqrt(std::max(0.0, b * (1.0 - b)) / static_cast<double>(n));
}

CertificateOutcome RunLower(double p_lower, bool estimated,
                            const RotationCertProblem& problem,
                            const LikelihoodStatistic& statistic,
                            const McConfig& mc, uint64_t seed) {
  mc.Validate();
  CheckProblem(problem, statistic);
  if (std::isnan(p_lower)) throw DomainError("p_lower must not be NaN");

  CertificateOutcome out;
  out.method = CertMethod::kTightRotation;
  out.p_lower = p_lower;
  out.bound_confidences = ConfidenceLadder(mc.alpha);
  const double spent = (estimated ? mc.alpha : 0.0) + mc.alpha / 2 + mc.alpha / 3;
  out.confidence = 1.0 - spent;

  bool clamped = false;
  const double p = ClampProbability(p_lower, &clamped);
  if (clamped) out.flags |= kFlagProbabilityClamped;

  out.n_star = LargestIndexWithLowerTailBelow(mc.n2, p, mc.alpha / 2);
  if (out.n_star == 0) {
    out.flags |= kFlagThresholdUndetermined;
    out.bound_value = 0.0;
    return out;
  }
  const Tagged kappa =
      OrderStatistic(DrawStatistic(problem.mean_clean, problem, statistic, mc.n2,
                                   MixSeed(seed, kStageClean)),
                     out.n_star);
  out.has_log_kappa = true;
  out.log_kappa = kappa.rho;

  const std::vector<Tagged> perturbed = DrawStatistic(
      problem.mean_perturbed, problem, statistic, mc.n3,
      MixSeed(seed, kStagePerturbed));
  const int64_t hits = std::count_if(perturbed.begin(), perturbed.end(),
                                     [&](const Tagged& t) { return !(kappa < t); });
  out.bound_value = ClopperPearsonLower({hits, mc.n3, 1.0 - mc.alpha / 3});
  out.certified = out.bound_value > 0.5;
  FillStderr(out, mc.n3);
  return out;
}

}  // namespace

void McConfig::Validate() const {
  if (n1 < 100 || n2 < 100 || n3 < 100) {
    throw DomainError("sample counts n1, n2, n3 must be >= 100");
  }
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw DomainError("alpha must lie in (0, 0.5)");
  }
}

std::array<double, 3> ConfidenceLadder(double alpha) {
  return {1.0 - alpha, 1.0 - alpha / 2, 1.0 - alpha / 3};
}

SmoothPrediction SmoothPredict(const BaseClassifier& g, const PointCloud& x,
                               double sigma, int64_t n, double alpha,
                               uint64_t seed) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be finite and > 0");
  }
  if (n < 1) throw DomainError("sample count must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  std::map<int, int64_t> counts;
  Eigen::MatrixXd z(x.n_points(), x.dim());
  for (int64_t s = 0; s < n; ++s) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      for (Eigen::Index i = 0; i < z.rows(); ++i) {
        z(i, j) = x.data()(i, j) + normal(gen);
      }
    }
    const int label = g(z);
    if (label < 0) throw DomainError("base classifier returned a negative label");
    ++counts[label];
  }

  SmoothPrediction out;
  out.n = n;
  for (const auto& [label, count] : counts) {
    if (count > out.top_count) {
      out.top_count = count;
      out.top_label = label;
    }
  }
  out.p_lower = ClopperPearsonLower({out.top_count, n, 1.0 - alpha});
  out.label = out.p_lower > 0.5 ? out.top_label : kAbstain;
  return out;
}

CertificateOutcome ProbCertifyReduced(double p_lower,
                                      const RotationCertProblem& problem,
                                      const LikelihoodStatistic& statistic,
                                      const McConfig& mc, uint64_t seed) {
  return RunLower(p_lower, /*estimated=*/false, problem, statistic, mc, seed);
}

CertificateOutcome ProbCertifyReduced(const BaseClassifier& g,
                                      const PointCloud& x, double sigma,
                                      const RotationCertProblem& problem,
                                      const LikelihoodStatistic& statistic,
                                      const McConfig& mc, uint64_t seed) {
  mc.Validate();
  const SmoothPrediction pred = SmoothPredict(
      g, x, sigma, mc.n1, mc.alpha, MixSeed(seed, kStageClassifier));
  return RunLower(pred.p_lower, /*estimated=*/true, problem, statistic, mc, seed);
}

CertificateOutcome ProbCertifyUpperReduced(double p_upper,
                                           const RotationCertProblem& problem,
                                           const LikelihoodStatistic& statistic,
                                           const McConfig& mc, uint64_t seed) {
  mc.Validate();
  CheckProblem(problem, statistic);
  if (std::isnan(p_upper)) throw DomainError("p_upper must not be NaN");

  CertificateOutcome out;
  out.method = CertMethod::kTightRotation;
  out.p_lower = p_upper;
  out.bound_confidences = ConfidenceLadder(mc.alpha);
  out.confidence = 1.0 - (mc.alpha / 2 + mc.alpha / 3);

  bool clamped = false;
  const double p = ClampProbability(p_upper, &clamped);
  if (clamped) out.flags |= kFlagProbabilityClamped;

  // Lower confidence bound on the (1 - p_upper)-quantile of the statistic
  // under the clean law; a smaller threshold only enlarges {rho >= kappa}.
  out.n_star = LargestIndexWithLowerTailBelow(mc.n2, 1.0 - p, mc.alpha / 2);
  if (out.n_star == 0) {
    out.flags |= kFlagThresholdUndetermined;
    out.bound_value = 1.0;
    return out;
  }
  const Tagged kappa =
      OrderStatistic(DrawStatistic(problem.mean_clean, problem, statistic, mc.n2,
                                   MixSeed(seed, kStageClean)),
                     out.n_star);
  out.has_log_kappa = true;
  out.log_kappa = kappa.rho;

  const std::vector<Tagged> perturbed = DrawStatistic(
      problem.mean_perturbed, problem, statistic, mc.n3,
      MixSeed(seed, kStagePerturbed));
  const int64_t hits = std::count_if(perturbed.begin(), perturbed.end(),
                                     [&](const Tagged& t) { return !(t < kappa); });
  out.bound_value = ClopperPearsonUpper({hits, mc.n3, 1.0 - mc.alpha / 3});
  out.certified = out.bound_value < 0.5;
  FillStderr(out, mc.n3);
  return out;
}

CertificateOutcome InverseCertifyReduced(const RotationCertProblem& problem,
                                         const LikelihoodStatistic& statistic,
                                         const McConfig& mc, uint64_t seed) {
  mc.Validate();
  CheckProblem(problem, statistic);

  CertificateOutcome out;
  out.method = CertMethod::kTightRotation;
  out.bound_confidences = {1.0 - mc.alpha, 1.0 - mc.alpha / 2, 1.0};
  out.confidence = 1.0 - (mc.alpha + mc.alpha / 2);

  // Upper confidence bound on the median of the statistic under the
  // perturbed law.
  out.n_star = SmallestIndexWithUpperTailBelow(mc.n2, 0.5, mc.alpha);
  if (out.n_star > mc.n2) {
    out.flags |= kFlagThresholdUndetermined;
    out.bound_value = 1.0;
    return out;
  }
  const Tagged kappa =
      OrderStatistic(DrawStatistic(problem.mean_perturbed, problem, statistic,
                                   mc.n2, MixSeed(seed, kStagePerturbed)),
                     out.n_star);
  out.has_log_kappa = true;
  out.log_kappa = kappa.rho;

  const std::vector<Tagged> clean = DrawStatistic(
      problem.mean_clean, problem, statistic, mc.n3, MixSeed(seed, kStageClean));
  const int64_t hits = std::count_if(clean.begin(), clean.end(),
                                     [&](const Tagged& t) { return !(kappa < t); });
  double p_min = ClopperPearsonUpper({hits, mc.n3, 1.0 - mc.alpha / 2});
  if (p_min < 0.5) {
    p_min = 0.5;
    out.flags |= kFlagClampedToHalf;
  }
  out.bound_value = p_min;
  out.p_lower = p_min;
  FillStderr(out, mc.n3);
  return out;
}

}  // namespace invcert
