// Copyright 2026 The singcov Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SINGCOV_VERIFY_HPP
#define SINGCOV_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace singcov {

// One oracle comparison: passed iff residual <= tolerance. `group` ties the
// check to an acceptance criterion ("1", "9c", ...) or to a named property.
struct CheckResult {
  std::string group;
  std::string label;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

struct SuiteReport {
  std::string name;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool passed() const;
  // Checks whose group equals `group`.
  std::vector<CheckResult> group(const std::string& group) const;
};

struct VerifyOptions {
  std::uint64_t seed = 20260101;
};

const std::vector<std::string>& available_suites();

// Throws std::invalid_argument naming the available suites when `name` is
// unknown.
SuiteReport run_suite(const std::string& name, const VerifyOptions& options = {});

// {"suite": ..., "passed": ..., "seconds": ..., "checks": [...]}
std::string to_json(const SuiteReport& report);

}  // namespace singcov

#endif  // SINGCOV_VERIFY_HPP
