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

#include "invcert/fixtures.h"

#include <cmath>
#include <random>

#include "invcert/errors.h"
#include "invcert/numerics.h"

namespace invcert {
namespace {

Eigen::MatrixXd GaussianMatrix(int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(gen);
  }
  return m;
}

double RequireNormDelta(const FixtureRequest& r) {
  if (!r.norm_delta) throw DomainError("fixture: --norm-delta is required");
  if (!(*r.norm_delta >= 0.0) || !std::isfinite(*r.norm_delta)) {
    throw DomainError("fixture: --norm-delta must be finite and >= 0");
  }
  return *r.norm_delta;
}

}  // namespace

FixturePair MakeFixture(const FixtureRequest& r) {
  if (!(r.norm_x > 0.0) || !std::isfinite(r.norm_x)) {
    throw DomainError("fixture: --norm-x must be finite and > 0");
  }
  if (r.n_points < 1) throw DomainError("fixture: --n-points must be >= 1");
  if (r.dim != 2 && r.dim != 3) throw DomainError("fixture: --dim must be 2 or 3");

  std::mt19937_64 gen(MixSeed(r.seed, 0x6669787475726573ULL));
  Eigen::MatrixXd x = GaussianMatrix(r.n_points, r.dim, gen);
  x *= r.norm_x / x.norm();

  Eigen::MatrixXd delta;
  switch (r.scenario) {
    case FixtureScenario::kScaling: {
      const double nd = RequireNormDelta(r);
      delta = x * (nd / x.norm());
      break;
    }
    case FixtureScenario::kRotation: {
      if (r.dim != 2) throw DomainError("fixture: rotation scenario requires --dim 2");
      double theta = 0.0;
      if (r.theta) {
        theta = *r.theta;
      } else {
        const double nd = RequireNormDelta(r);
        if (nd > 2.0 * r.norm_x) {
          throw DomainError(
              "fixture: no rotation has ||Delta|| > 2 ||X|| (--norm-delta)");
        }
        theta = std::acos(1.0 - nd * nd / (2.0 * r.norm_x * r.norm_x));
      }
      const Eigen::MatrixXd rotated = x * Rot2(theta).transpose();
      return {PointCloud(x), PointCloud(rotated)};
    }
    case FixtureScenario::kRandom: {
      const double nd = RequireNormDelta(r);
      delta = GaussianMatrix(r.n_points, r.dim, gen);
      delta *= nd / delta.norm();
      break;
    }
  }
  return {PointCloud(x), PointCloud(x + delta)};
}

}  // namespace invcert
