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

#ifndef INVCERT_FIXTURES_H_
#define INVCERT_FIXTURES_H_

#include <cstdint>
#include <optional>

#include "invcert/geometry.h"

namespace invcert {

enum class FixtureScenario {
  kScaling,   // X' = (1 + c) X
  kRotation,  // X' = X R(theta)^T, D == 2
  kRandom,    // Delta isotropic Gaussian, rescaled
};

struct FixtureRequest {
  FixtureScenario scenario = FixtureScenario::kRandom;
  double norm_x = 1.0;
  // Exactly one of norm_delta / theta is used by the rotation scenario; the
  // other scenarios need norm_delta.
  std::optional<double> norm_delta;
  std::optional<double> theta;
  int n_points = 16;
  int dim = 2;
  uint64_t seed = 0;
};

struct FixturePair {
  PointCloud clean;
  PointCloud perturbed;
};

// Clean cloud: i.i.d. Gaussian rows rescaled to ||X|| = norm_x.
// Throws DomainError for an infeasible rotation (||Delta|| > 2 ||X||).
FixturePair MakeFixture(const FixtureRequest& request);

}  // namespace invcert

#endif  // INVCERT_FIXTURES_H_
