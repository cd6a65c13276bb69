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

#include "invcert/numerics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "invcert/errors.h"

namespace invcert {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogAddExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double LogBinomialPmf(int64_t k, int64_t n, double log_p, double log_q) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0) +
         static_cast<double>(k) * log_p + static_cast<double>(n - k) * log_q;
}

// Terms smaller than exp(-40) relative to the running sum are dropped; the
// binomial pmf is unimodal so every later term is smaller still.
constexpr double kTailTruncation = 40.0;

double UpperTail(int64_t k, int64_t n, double p);

// Pr[X <= k], X ~ Bin(n, p) with p in (0, 1).
double LowerTail(int64_t k, int64_t n, double p) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  const auto mode =
      static_cast<int64_t>(std::floor(static_cast<double>(n + 1) * p));
  if (k >= mode) return std::max(0.0, 1.0 - UpperTail(k + 1, n, p));
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  double log_sum = kNegInf;
  for (int64_t j = k; j >= 0; --j) {
    const double term = LogBinomialPmf(j, n, log_p, log_q);
    log_sum = LogAddExp(log_sum, term);
    if (term < log_sum - kTailTruncation) break;
  }
  return std::min(1.0, std::exp(log_sum));
}

// Pr[X >= k].
double UpperTail(int64_t k, int64_t n, double p) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  const auto mode =
      static_cast<int64_t>(std::floor(static_cast<double>(n + 1) * p));
  if (k <= mode) return std::max(0.0, 1.0 - LowerTail(k - 1, n, p));
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  double log_sum = kNegInf;
  for (int64_t j = k; j <= n; ++j) {
    const double term = LogBinomialPmf(j, n, log_p, log_q);
    log_sum = LogAddExp(log_sum, term);
    if (term < log_sum - kTailTruncation) break;
  }
  return std::min(1.0, std::exp(log_sum));
}

double BinomialTail(int64_t k, int64_t n, Tail tail, double p) {
  if (p <= 0.0) {
    // X == 0 surely.
    return tail == Tail::kAtMost ? (k >= 0 ? 1.0 : 0.0) : (k <= 0 ? 1.0 : 0.0);
  }
  if (p >= 1.0) {
    // X == n surely.
    return tail == Tail::kAtMost ? (k >= n ? 1.0 : 0.0) : (k <= n ? 1.0 : 0.0);
  }
  return tail == Tail::kAtMost ? LowerTail(k, n, p) : UpperTail(k, n, p);
}

void CheckRequest(const BinomialBoundRequest& req) {
  if (req.trials < 1) throw DomainError("binomial bound: trials must be >= 1");
  if (req.successes < 0 || req.successes > req.trials) {
    throw DomainError("binomial bound: successes must lie in [0, trials]");
  }
  if (!(req.confidence > 0.0 && req.confidence < 1.0)) {
    throw DomainError("binomial bound: confidence must lie in (0, 1)");
  }
}

}  // namespace

double StdNormalCdf(double x) {
  if (!std::isfinite(x)) throw DomainError("std_normal_cdf: non-finite input");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double StdNormalQuantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("std_normal_quantile: p must lie strictly in (0, 1), got " +
                      std::to_string(p));
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double ClampProbability(double p, bool* clamped) {
  const double out = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  if (clamped != nullptr) *clamped = (out != p);
  return out;
}

double LogBesselI0(double x) {
  if (std::isnan(x) || x < 0.0) {
    throw DomainError("log_bessel_i0: argument must be >= 0");
  }
  if (x < kBesselSwitch) return std::log(boost::math::cyl_bessel_i(0, x));
  // I0(x) ~ e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
  const double inv8x = 1.0 / (8.0 * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) * inv8x / k;
    if (next >= term) break;  // asymptotic series started to diverge
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
}

QuadratureRule ClenshawCurtis(int degree, double lo, double hi) {
  if (degree < 2) throw DomainError("clenshaw_curtis: degree must be >= 2");
  if (!(std::isfinite(lo) && std::isfinite(hi)) || !(hi > lo)) {
    throw DomainError("clenshaw_curtis: need finite lo < hi");
  }
  const int n = degree;
  const double pi = std::numbers::pi;
  QuadratureRule rule;
  rule.lo = lo;
  rule.hi = hi;
  rule.nodes.resize(n + 1);
  rule.weights.resize(n + 1);
  const double half_width = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (int k = 0; k <= n; ++k) {
    const double theta = pi * k / n;
    double s = 0.0;
    for (int j = 1; j <= n / 2; ++j) {
      const double b = (2 * j == n) ? 1.0 : 2.0;
      s += b / (4.0 * j * j - 1.0) * std::cos(2.0 * j * theta);
    }
    const double c = (k == 0 || k == n) ? 1.0 : 2.0;
    rule.weights[k] = half_width * c / n * (1.0 - s);
    // Ascending order: x_k = -cos(k pi / n).
    rule.nodes[k] = mid - half_width * std::cos(theta);
  }
  rule.nodes.front() = lo;
  rule.nodes.back() = hi;
  return rule;
}

GaussianSampler::GaussianSampler(const GaussianSpec& spec) : mean_(spec.mean) {
  const Eigen::Index d = spec.mean.size();
  if (d < 1) throw DomainError("gaussian: empty mean");
  if (spec.covariance.rows() != d || spec.covariance.cols() != d) {
    throw DomainError("gaussian: covariance shape does not match mean");
  }
  if (!spec.mean.allFinite() || !spec.covariance.allFinite()) {
    throw DomainError("gaussian: non-finite parameters");
  }
  const double scale = std::max(1.0, spec.covariance.cwiseAbs().maxCoeff());
  if ((spec.covariance - spec.covariance.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * scale) {
    throw DomainError("gaussian: covariance is not symmetric");
  }
  const Eigen::MatrixXd sym =
      0.5 * (spec.covariance + spec.covariance.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("gaussian: eigendecomposition failed");
  }
  Eigen::VectorXd lambda = eig.eigenvalues();
  const double lambda_max = std::max(0.0, lambda.maxCoeff());
  if (lambda.minCoeff() < -1e-9 * lambda_max) {
    throw DomainError("gaussian: covariance is not positive semidefinite");
  }
  // Eigenvalues at rounding level are exact zeros in disguise; keeping them
  // would leak ~sqrt(eps) noise out of the support.
  for (Eigen::Index i = 0; i < d; ++i) {
    lambda(i) = lambda(i) <= 1e-12 * lambda_max ? 0.0 : std::sqrt(lambda(i));
  }
  factor_ = eig.eigenvectors() * lambda.asDiagonal();
}

Eigen::MatrixXd GaussianSampler::Sample(int64_t count, uint64_t seed) const {
  if (count < 1) throw DomainError("gaussian: count must be >= 1");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(dim(), count);
  for (int64_t j = 0; j < count; ++j) {
    for (int i = 0; i < dim(); ++i) z(i, j) = normal(gen);
  }
  Eigen::MatrixXd out = factor_ * z;
  out.colwise() += mean_;
  return out;
}

std::vector<Eigen::VectorXd> SampleGaussian(const GaussianSpec& spec,
                                            int64_t count, uint64_t seed) {
  const GaussianSampler sampler(spec);
  const Eigen::MatrixXd block = sampler.Sample(count, seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (int64_t j = 0; j < count; ++j) out.emplace_back(block.col(j));
  return out;
}

double ClopperPearsonLower(const BinomialBoundRequest& req) {
  CheckRequest(req);
  if (req.successes == 0) return 0.0;
  const double k = static_cast<double>(req.successes);
  const double n = static_cast<double>(req.trials);
  return boost::math::ibeta_inv(k, n - k + 1.0, 1.0 - req.confidence);
}

double ClopperPearsonUpper(const BinomialBoundRequest& req) {
  CheckRequest(req);
  if (req.successes == req.trials) return 1.0;
  const double k = static_cast<double>(req.successes);
  const double n = static_cast<double>(req.trials);
  return boost::math::ibeta_inv(k + 1.0, n - k, req.confidence);
}

double BinomialTestPValue(int64_t successes, int64_t trials, Tail tail,
                          double p0) {
  if (trials < 0 || successes < 0 || successes > trials) {
    throw DomainError("binomial_test_p_value: need 0 <= successes <= trials");
  }
  if (!(p0 >= 0.0 && p0 <= 1.0)) {
    throw DomainError("binomial_test_p_value: p0 must lie in [0, 1]");
  }
  return BinomialTail(successes, trials, tail, p0);
}

int64_t LargestIndexWithLowerTailBelow(int64_t trials, double p, double level) {
  if (trials < 1) throw DomainError("order statistic: trials must be >= 1");
  if (BinomialTail(1, trials, Tail::kAtMost, p) >= level) return 0;
  int64_t lo = 1;       // satisfies the predicate
  int64_t hi = trials;  // Pr[X <= trials] = 1 >= level
  while (hi - lo > 1) {
    const int64_t mid = lo + (hi - lo) / 2;
    if (BinomialTail(mid, trials, Tail::kAtMost, p) < level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

int64_t SmallestIndexWithUpperTailBelow(int64_t trials, double p,
                                        double level) {
  if (trials < 1) throw DomainError("order statistic: trials must be >= 1");
  if (BinomialTail(trials, trials, Tail::kAtLeast, p) >= level) return trials + 1;
  if (BinomialTail(1, trials, Tail::kAtLeast, p) < level) return 1;
  int64_t lo = 1;       // fails the predicate
  int64_t hi = trials;  // satisfies it
  while (hi - lo > 1) {
    const int64_t mid = lo + (hi - lo) / 2;
    if (BinomialTail(mid, trials, Tail::kAtLeast, p) < level) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

uint64_t MixSeed(uint64_t seed, uint64_t a, uint64_t b) {
  auto splitmix = [](uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return splitmix(splitmix(splitmix(seed) ^ a) ^ (b * 0xd1342543de82ef95ULL));
}

}  // namespace invcert
