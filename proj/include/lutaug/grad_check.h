// Copyright 2026 The lutaug Authors.
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

#ifndef LUTAUG_GRAD_CHECK_H_
#define LUTAUG_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lutaug/tensor.h"

namespace lutaug {

struct GradCheckOptions {
  // Central-difference step.
  double step = 1e-5;
  // Entries checked per block; 0 checks all, otherwise a seeded sample.
  int max_entries_per_block = 0;
  uint64_t seed = 0;
  // Relative error is |a - n| / max(|a|, |n|, denominator_floor). The floor
  // sits well above the round-off of a central difference at h = 1e-5 on
  // O(1) losses (about 1e-11), so gradients that small are compared in
  // absolute terms.
  double denominator_floor = 1e-7;
};

struct BlockGradError {
  std::string name;
  Eigen::Index checked = 0;
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  Eigen::Index worst_index = -1;
};

struct GradCheckReport {
  std::vector<BlockGradError> blocks;

  double max_relative_error() const;
  bool Passed(double threshold) const { return max_relative_error() < threshold; }
};

using ScalarLossFn = std::function<double(const ParameterSet&)>;

// Compares `analytic` (same layout as `params`) with central differences of
// `loss` taken around `params`.
GradCheckReport GradCheck(const ScalarLossFn& loss, const ParameterSet& params,
                          const ParameterSet& analytic,
                          const GradCheckOptions& options = {});

}  // namespace lutaug

#endif  // LUTAUG_GRAD_CHECK_H_
