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

#ifndef INVCERT_CERTIFICATE_H_
#define INVCERT_CERTIFICATE_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace invcert {

// Bit flags attached to a CertificateOutcome.
enum OutcomeFlag : uint32_t {
  kFlagProbabilityClamped = 1u << 0,     // p moved into [1e-12, 1 - 1e-12]
  kFlagThresholdUndetermined = 1u << 1,  // no order statistic qualified
  kFlagZeroRadius = 1u << 2,             // p == 0.5: strict "<" certifies nothing
  kFlagInconclusive = 1u << 3,           // approximate projection, negative verdict
  kFlagClassesNotSeparated = 1u << 4,    // multi-class with p_A <= p_B
  kFlagClampedToHalf = 1u << 5,          // inverse certificate raised to 1/2
};

std::vector<std::string> FlagNames(uint32_t flags);

enum class CertMethod {
  kOrbit,
  kTightTranslation,
  kTightRotation,
  kBlackBox,
};

const char* CertMethodName(CertMethod method);

struct CertificateOutcome {
  bool certified = false;
  CertMethod method = CertMethod::kOrbit;

  // Lower bound on the worst-case perturbed probability of the predicted
  // class. Certified results have bound_value > 1/2 (binary case).
  double bound_value = 0.0;

  // Radius-form view: sigma Phi^{-1}(p_lower), the orbit residual and
  // radius - residual. The tight rotation path leaves residual at the SO(D)
  // projection value for reference.
  double radius = 0.0;
  double residual = 0.0;
  double margin = 0.0;

  double p_lower = 0.0;
  // Probability that all Monte-Carlo bounds hold jointly (1 for closed forms,
  // conditional on p_lower).
  double confidence = 1.0;
  // Per-bound confidences (1 - alpha, 1 - alpha/2, 1 - alpha/3).
  std::array<double, 3> bound_confidences{1.0, 1.0, 1.0};

  // Threshold on the log likelihood ratio and the order statistic index it
  // came from (Monte-Carlo paths only).
  bool has_log_kappa = false;
  double log_kappa = 0.0;
  int64_t n_star = 0;

  // sqrt(b (1 - b) / n3) for the final Monte-Carlo bound.
  double mc_stderr = 0.0;

  // Multi-class only: upper bound on the runner-up class probability.
  bool has_competitor_bound = false;
  double competitor_bound = 0.0;

  uint32_t flags = 0;
};

}  // namespace invcert

#endif  // INVCERT_CERTIFICATE_H_
