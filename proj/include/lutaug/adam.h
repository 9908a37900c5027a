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

#ifndef LUTAUG_ADAM_H_
#define LUTAUG_ADAM_H_

#include <cstdint>

#include "lutaug/tensor.h"

namespace lutaug {

struct AdamOptions {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamState() = default;
  AdamState(const ParameterSet& like, AdamOptions options);

  AdamOptions options;
  ParameterSet first_moment;
  ParameterSet second_moment;
  int64_t step = 0;
};

// One bias-corrected Adam update of `params` in place.
void AdamStep(ParameterSet& params, const ParameterSet& grads,
              AdamState& state);

}  // namespace lutaug

#endif  // LUTAUG_ADAM_H_
