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

// Point-cloud CSV: UTF-8, one row per point, D comma-separated decimal fields,
// no header. Ragged rows are rejected. Output uses 17 significant digits so
// that a write/read cycle is lossless.

#ifndef INVCERT_POINT_CLOUD_IO_H_
#define INVCERT_POINT_CLOUD_IO_H_

#include <string>
#include <string_view>

#include "invcert/geometry.h"

namespace invcert {

PointCloud ParsePointCloudCsv(std::string_view text);
PointCloud ReadPointCloudCsv(const std::string& path);

std::string FormatPointCloudCsv(const PointCloud& cloud);
void WritePointCloudCsv(const PointCloud& cloud, const std::string& path);

// Shortest round-trip decimal rendering of a double ("%.17g").
std::string FormatDouble(double v);

}  // namespace invcert

#endif  // INVCERT_POINT_CLOUD_IO_H_
