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

// The low-dimensional Gaussian pair behind the tight rotation certificates.
// Instead of sampling whole point clouds, the Monte-Carlo engine samples the
// few linear statistics q = W vec(Z) the worst-case classifier depends on.

#ifndef INVCERT_REDUCED_PROBLEM_H_
#define INVCERT_REDUCED_PROBLEM_H_

#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "invcert/geometry.h"

namespace invcert {

inline constexpr int kDefaultQuadratureDegree = 20;

// How the 3D statistic packs X^T Z into q. kFull keeps all nine entries of
// each 3 x 3 block (q in R^18). kZeroPadded keeps eight entries and forces
// entry (2,1) to zero (q in R^16); it is kept for comparison only because it
// is not rotation invariant.
enum class So3Layout { kFull, kZeroPadded };

struct RotationCertProblem {
  GroupSpec group;
  Eigen::VectorXd mean_perturbed;  // m1: law of q when Z ~ N(X', sigma^2 I)
  Eigen::VectorXd mean_clean;      // m2: law of q when Z ~ N(X, sigma^2 I)
  Eigen::MatrixXd covariance;      // shared by both laws
  double sigma = 1.0;
  int quadrature_degree = kDefaultQuadratureDegree;  // 3D only
  So3Layout layout = So3Layout::kFull;               // 3D only

  int dim() const { return static_cast<int>(mean_clean.size()); }
};

// Log likelihood ratio log(beta_{X'}(Z) / beta_X(Z)) written as a function of
// the reduced sample q.
class LikelihoodStatistic {
 public:
  using Fn = std::function<double(const double* q)>;

  LikelihoodStatistic(int dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}

  int dim() const { return dim_; }
  double operator()(const double* q) const { return fn_(q); }
  double operator()(const Eigen::VectorXd& q) const { return fn_(q.data()); }

 private:
  int dim_;
  Fn fn_;
};

}  // namespace invcert

#endif  // INVCERT_REDUCED_PROBLEM_H_
