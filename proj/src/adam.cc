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

#include "lutaug/adam.h"

#include <cmath>
#include <stdexcept>

namespace lutaug {

AdamState::AdamState(const ParameterSet& like, AdamOptions options)
    : options(options),
      first_moment(like.ZerosLike()),
      second_moment(like.ZerosLike()) {}

void AdamStep(ParameterSet& params, const ParameterSet& grads,
              AdamState& state) {
  if (!params.SameLayout(grads) || !params.SameLayout(state.first_moment) ||
      !params.SameLayout(state.second_moment)) {
    throw std::invalid_argument("AdamStep: parameter/gradient layout mismatch");
  }
  const AdamOptions& o = state.options;
  ++state.step;
  const double correction1 = 1.0 - std::pow(o.beta1, double(state.step));
  const double correction2 = 1.0 - std::pow(o.beta2, double(state.step));
  for (std::size_t b = 0; b < params.blocks().size(); ++b) {
    const Eigen::VectorXd& g = grads.blocks()[b].second.values();
    Eigen::VectorXd& m = state.first_moment.blocks()[b].second.values();
    Eigen::VectorXd& v = state.second_moment.blocks()[b].second.values();
    m = o.beta1 * m + (1.0 - o.beta1) * g;
    v = o.beta2 * v + (1.0 - o.beta2) * g.cwiseAbs2();
    params.blocks()[b].second.values().array() -=
        o.learning_rate * (m.array() / correction1) /
        ((v.array() / correction2).sqrt() + o.epsilon);
  }
}

}  // namespace lutaug
