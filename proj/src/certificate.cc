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

#include "invcert/certificate.h"

namespace invcert {

std::vector<std::string> FlagNames(uint32_t flags) {
  static const struct {
    uint32_t bit;
    const char* name;
  } kNames[] = {
      {kFlagProbabilityClamped, "probability_clamped"},
      {kFlagThresholdUndetermined, "threshold_undetermined"},
      {kFlagZeroRadius, "zero_radius"},
      {kFlagInconclusive, "inconclusive_approximate"},
      {kFlagClassesNotSeparated, "classes_not_separated"},
      {kFlagClampedToHalf, "p_min_clamped_to_half"},
  };
  std::vector<std::string> out;
  for (const auto& entry : kNames) {
    if (flags & entry.bit) out.emplace_back(entry.name);
  }
  return out;
}

const char* CertMethodName(CertMethod method) {
  switch (method) {
    case CertMethod::kOrbit:
      return "orbit";
    case CertMethod::kTightTranslation:
      return "tight_translation";
    case CertMethod::kTightRotation:
      return "tight_rotation";
    case CertMethod::kBlackBox:
      return "blackbox";
  }
  return "unknown";
}

}  // namespace invcert
