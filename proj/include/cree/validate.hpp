// Copyright 2026 The cree Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cree {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidateOptions {
  std::uint64_t seed = 1;
  double eps = 1e-6;  // Dinkelbach tolerance handed to the solver under test
};

/// Oracle, reduction, normalization and bound checks. Check thresholds are
/// fixed; only the solver under test sees `eps`.
std::vector<CheckResult> run_validation(const ValidateOptions& options = {});

/// One "PASS name: detail" or "FAIL name: detail" line per check.
std::string format_validation(const std::vector<CheckResult>& results);

}  // namespace cree
