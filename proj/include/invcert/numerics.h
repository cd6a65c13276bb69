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

// Special functions, quadrature, Gaussian sampling and exact binomial
// machinery shared by all certificates.

#ifndef INVCERT_NUMERICS_H_
#define INVCERT_NUMERICS_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace invcert {

// Probabilities handed to Phi^{-1} by certificate code are clamped into
// [kProbabilityClamp, 1 - kProbabilityClamp].
inline constexpr double kProbabilityClamp = 1e-12;

// Phi(x). Throws DomainError for non-finite x.
double StdNormalCdf(double x);

// Phi^{-1}(p) for p strictly inside (0, 1). Throws DomainError otherwise.
double StdNormalQuantile(double p);

// Clamps p into [kProbabilityClamp, 1 - kProbabilityClamp]. Sets *clamped
// when the value had to move.
double ClampProbability(double p, bool* clamped);

// log I_0(x), the logarithm of the modified Bessel function of the first kind
// and order zero. Boost.Math below kBesselSwitch, asymptotic expansion
// above; never overflows for finite x.
inline constexpr double kBesselSwitch = 50.0;
double LogBesselI0(double x);

// Nodes and weights of a quadrature rule on [lo, hi].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lo = 0.0;
  double hi = 0.0;

  // Sum_k w_k f(x_k).
  template <typename F>
  double Integrate(F&& f) const {
    double acc = 0.0;
    for (size_t k = 0; k < nodes.size(); ++k) acc += weights[k] * f(nodes[k]);
    return acc;
  }
};

// Clenshaw-Curtis rule with degree + 1 Chebyshev extreme points on [lo, hi].
// Exact for polynomials of degree <= degree. Requires degree >= 2.
QuadratureRule ClenshawCurtis(int degree, double lo, double hi);

// Multivariate normal law. The covariance may be rank deficient.
struct GaussianSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Validates a GaussianSpec and precomputes a square-root factor L with
// L L^T = clip(covariance), using a symmetric eigendecomposition with
// negative eigenvalues clipped to zero. Works for singular covariances where
// a Cholesky factorization would fail.
class GaussianSampler {
 public:
  explicit GaussianSampler(const GaussianSpec& spec);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& factor() const { return factor_; }

  // Returns a dim() x count matrix; column j is sample j. Bit-identical for
  // identical (spec, count, seed).
  Eigen::MatrixXd Sample(int64_t count, uint64_t seed) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd factor_;
};

// Convenience wrapper returning one vector per sample.
std::vector<Eigen::VectorXd> SampleGaussian(const GaussianSpec& spec,
                                            int64_t count, uint64_t seed);

struct BinomialBoundRequest {
  int64_t successes = 0;
  int64_t trials = 1;
  double confidence = 0.99;
};

// One-sided Clopper-Pearson bounds with coverage >= confidence.
double ClopperPearsonLower(const BinomialBoundRequest& req);
double ClopperPearsonUpper(const BinomialBoundRequest& req);

enum class Tail {
  kAtMost,   // Pr[X <= k]
  kAtLeast,  // Pr[X >= k]
};

// Exact binomial tail Pr[X <= k] or Pr[X >= k] for X ~ Bin(trials, p0),
// by log-gamma summation.
double BinomialTestPValue(int64_t successes, int64_t trials, Tail tail,
                          double p0);

// Largest n in [1, trials] with Pr[Bin(trials, p) <= n] < level, or 0 if no
// such n exists. This is the order-statistic index for a lower confidence
// bound on the p-quantile.
int64_t LargestIndexWithLowerTailBelow(int64_t trials, double p, double level);

// Smallest n in [1, trials] with Pr[Bin(trials, p) >= n] < level, or
// trials + 1 if no such n exists.
int64_t SmallestIndexWithUpperTailBelow(int64_t trials, double p,
                                        double level);

// Deterministic 64-bit mixing used to derive independent sub-seeds.
uint64_t MixSeed(uint64_t seed, uint64_t a, uint64_t b = 0);

}  // namespace invcert

#endif  // INVCERT_NUMERICS_H_
