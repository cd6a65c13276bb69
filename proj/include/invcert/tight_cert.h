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

// Tight gray-box certificates: closed form for translations, reduced
// Monte-Carlo problems for rotations, multi-class combination and inverse
// certificates (p_min).

#ifndef INVCERT_TIGHT_CERT_H_
#define INVCERT_TIGHT_CERT_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "invcert/certificate.h"
#include "invcert/geometry.h"
#include "invcert/mc_engine.h"
#include "invcert/reduced_problem.h"

namespace invcert {

// Phi(Phi^{-1}(p_lower) - ||Delta - 1 mean(Delta)|| / sigma); certified iff
// that value exceeds 1/2.
CertificateOutcome TightTranslation(const PointCloud& x,
                                    const PointCloud& x_prime, double p_lower,
                                    double sigma);

// ---- SO(2) ----------------------------------------------------------------

// W with rows (1/sigma^2) {vec(X'), vec(X' R(-pi/2)^T), vec(X),
// vec(X R(-pi/2)^T)}, vec stacking columns. 4 x 2N.
Eigen::MatrixXd So2Weights(const PointCloud& x, const PointCloud& x_prime,
                           double sigma);

// Closed-form means and covariance from (||X||, ||Delta||, eps1, eps2, sigma).
RotationCertProblem BuildSo2Problem(const EpsilonParams& params, double sigma);
RotationCertProblem BuildSo2Problem(const PointCloud& x,
                                    const PointCloud& x_prime, double sigma);

// log I0(|q_{1:2}|) - log I0(|q_{3:4}|).
LikelihoodStatistic RhoSo2();

// ---- SO(3) ----------------------------------------------------------------

// Precomputed tensor Clenshaw-Curtis rule for log beta_hat.
class So3BetaHat {
 public:
  explicit So3BetaHat(int degree = kDefaultQuadratureDegree);

  int degree() const { return degree_; }

  // log of 2 pi int int cos(w2) exp(chi3) I0(sqrt(chi1^2 + chi2^2)) over
  // w2 in [-pi/2, pi/2], w3 in [0, 2 pi], with M = m / sigma^2.
  double operator()(const Eigen::Matrix3d& m, double sigma = 1.0) const;

 private:
  struct Node {
    double log_weight;  // log(w2 * w3 * cos(w2))
    double c2, s2, c3, s3;
  };
  int degree_;
  std::vector<Node> nodes_;
};

// One-shot form of So3BetaHat. Requires degree >= 4.
double So3LogBetaHat(const Eigen::Matrix3d& m, double sigma,
                     int degree = kDefaultQuadratureDegree);

// Rows map vec(Z) to the entries of X'^T Z / sigma^2 followed by those of
// X^T Z / sigma^2 (column-major; 18 rows for kFull, 16 for kZeroPadded).
Eigen::MatrixXd So3Weights(const PointCloud& x, const PointCloud& x_prime,
                           double sigma, So3Layout layout = So3Layout::kFull);

RotationCertProblem BuildSo3Problem(const PointCloud& x,
                                    const PointCloud& x_prime, double sigma,
                                    int degree = kDefaultQuadratureDegree,
                                    So3Layout layout = So3Layout::kFull);

// log beta_hat(M1) - log beta_hat(M2) with M1, M2 unpacked from q per layout.
LikelihoodStatistic RhoSo3(int degree = kDefaultQuadratureDegree,
                           So3Layout layout = So3Layout::kFull);

// ---- Dispatch -------------------------------------------------------------

// Builds the reduced problem for SO(D) / SE(D); SE inputs are centered first.
RotationCertProblem BuildRotationProblem(const GroupSpec& group,
                                         const PointCloud& x,
                                         const PointCloud& x_prime, double sigma,
                                         int degree = kDefaultQuadratureDegree,
                                         So3Layout layout = So3Layout::kFull);

// The statistic matching a problem built by BuildRotationProblem.
LikelihoodStatistic StatisticFor(const RotationCertProblem& problem);

struct TightOptions {
  McConfig mc;
  int quadrature_degree = kDefaultQuadratureDegree;
  So3Layout layout = So3Layout::kFull;
};

// Lower bound on min over invariant classifiers of the perturbed probability.
// Group must be SO(D) or SE(D).
CertificateOutcome CertifyRotationTight(const GroupSpec& group,
                                        const PointCloud& x,
                                        const PointCloud& x_prime,
                                        double p_lower, double sigma,
                                        const TightOptions& options,
                                        uint64_t seed);

// Upper bound (bound_value) on the perturbed probability of a class with
// clean probability <= p_upper. Group must be SO(D) or SE(D).
CertificateOutcome UpperBoundRotationTight(const GroupSpec& group,
                                           const PointCloud& x,
                                           const PointCloud& x_prime,
                                           double p_upper, double sigma,
                                           const TightOptions& options,
                                           uint64_t seed);

// Tight certificate for any group that has one: none (black-box closed
// form), T (closed form), SO / SE (Monte Carlo). Other groups throw.
CertificateOutcome CertifyTight(const GroupSpec& group, const PointCloud& x,
                                const PointCloud& x_prime, double p_lower,
                                double sigma, const TightOptions& options,
                                uint64_t seed);

// Certified iff the lower bound for the top class exceeds the upper bound for
// the runner-up. For SO / SE the Monte-Carlo budget alpha is split evenly
// between the two bounds.
CertificateOutcome CertifyMulticlass(const GroupSpec& group,
                                     const PointCloud& x,
                                     const PointCloud& x_prime,
                                     double p_a_lower, double p_b_upper,
                                     double sigma, const TightOptions& options,
                                     uint64_t seed);

// Upper bound on p_min (bound_value). Closed forms for none and T; Monte
// Carlo for SO / SE.
CertificateOutcome InverseCertificate(const GroupSpec& group,
                                      const PointCloud& x,
                                      const PointCloud& x_prime, double sigma,
                                      const TightOptions& options,
                                      uint64_t seed);

// Orbit-based p_min = Phi(residual / sigma) for any group.
CertificateOutcome InverseCertificateOrbit(const GroupSpec& group,
                                           const PointCloud& x,
                                           const PointCloud& x_prime,
                                           double sigma);

// ---- Parameter-space sweep ------------------------------------------------

enum class PminMethod {
  kBlackBox,  // Phi(||Delta|| / sigma), independent of eps
  kSo2Tight,  // Monte-Carlo inverse certificate
  kSo2Orbit,  // Phi(SO(2) orbit residual / sigma)
};

enum class PminRange {
  kUnit,  // normalized eps in [0, 1] x [0, 1]
  kFull,  // normalized eps in [-1, 1] x [-1, 1]
};

struct PminGridRequest {
  PminMethod method = PminMethod::kSo2Tight;
  double norm_x = 1.0;
  double norm_delta = 1.0;
  double sigma = 1.0;
  int resolution = 100;
  PminRange range = PminRange::kUnit;
  McConfig mc;
  uint64_t seed = 0;
};

struct PminGrid {
  std::vector<double> axis;  // normalized eps values, ascending
  // values(i, j): eps2_tilde = axis[i], eps1_tilde = axis[j]. Entries of
  // infeasible cells are meaningless; consult feasible.
  Eigen::MatrixXd values;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> feasible;
  double blackbox = 0.0;  // Phi(||Delta|| / sigma)
  // Adversarial-rotation points in normalized coordinates.
  std::vector<Eigen::Vector2d> loci;
  uint32_t flags = 0;  // union of per-cell flags
};

// Normalized coordinate of grid node k (0-based) at the given resolution.
double PminAxisNode(PminRange range, int resolution, int k);

// Seed of the cell at normalized coordinates (axis node j, axis node i);
// equal for equal coordinates across resolutions.
uint64_t PminCellSeed(uint64_t seed, PminRange range, int resolution, int i,
                      int j);

PminGrid ComputePminGrid(const PminGridRequest& request);

}  // namespace invcert

#endif  // INVCERT_TIGHT_CERT_H_
