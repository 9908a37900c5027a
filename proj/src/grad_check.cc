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

#include "lutaug/grad_check.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lutaug/rng.h"

namespace lutaug {

double GradCheckReport::max_relative_error() const {
  double worst = 0.0;
  for (const auto& b : blocks) worst = std::max(worst, b.max_relative_error);
  return worst;
}

GradCheckReport GradCheck(const ScalarLossFn& loss, const ParameterSet& params,
                          const ParameterSet& analytic,
                          const GradCheckOptions& options) {
  if (!params.SameLayout(analytic)) {
    throw std::invalid_argument("GradCheck: gradient layout mismatch");
  }
  ParameterSet probe = params;
  GradCheckReport report;
  for (std::size_t b = 0; b < params.blocks().size(); ++b) {
    const std::string& name = params.blocks()[b].first;
    const Eigen::Index n = params.blocks()[b].second.size();
    std::vector<Eigen::Index> entries;
    if (options.max_entries_per_block <= 0 || n <= options.max_entries_per_block) {
      for (Eigen::Index i = 0; i < n; ++i) entries.push_back(i);
    } else {
      CounterRng rng(options.seed, b);
      const std::vector<int> order = ShuffledIndices(static_cast<int>(n), rng);
      entries.assign(order.begin(), order.begin() + options.max_entries_per_block);
      std::sort(entries.begin(), entries.end());
    }

    BlockGradError error{name};
    Eigen::VectorXd& values = probe.blocks()[b].second.values();
    for (Eigen::Index i : entries) {
      const double original = values[i];
      values[i] = original + options.step;
      const double plus = loss(probe);
      values[i] = original - options.step;
      const double minus = loss(probe);
      values[i] = original;
      const double numeric = (plus - minus) / (2.0 * options.step);
      const double exact = analytic.blocks()[b].second.values()[i];
      const double abs_error = std::abs(exact - numeric);
      const double rel_error =
          abs_error / std::max({std::abs(exact), std::abs(numeric),
                                options.denominator_floor});
      error.max_absolute_error = std::max(error.max_absolute_error, abs_error);
      if (rel_error > error.max_relative_error || error.worst_index < 0) {
        error.max_relative_error = std::max(error.max_relative_error, rel_error);
        if (rel_error >= error.max_relative_error) error.worst_index = i;
      }
      ++error.checked;
    }
    report.blocks.push_back(std::move(error));
  }
  return report;
}

}  // namespace lutaug
