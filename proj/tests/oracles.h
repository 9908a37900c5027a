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

// Independent reference implementations used by the tests. They follow the
// textbook definitions directly and share no code with the library beyond
// its data types.

#ifndef LUTAUG_TESTS_ORACLES_H_
#define LUTAUG_TESTS_ORACLES_H_

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "lutaug/image.h"
#include "lutaug/lut.h"

namespace lutaug::oracle {

// Trilinear interpolation from the 8 enclosing lattice entries, with the
// input clamped to [0, 1]. No lattice snapping.
Eigen::Vector3d Trilinear(const Lut3D& lut, const Eigen::Vector3d& color);

// Minimum within-cluster sum of squared errors over every split of the rows
// of `points` into two non-empty groups.
double BestTwoPartitionSse(const Eigen::MatrixXd& points);

// Within-cluster SSE of `assignment` using each cluster's own mean.
double PartitionSse(const Eigen::MatrixXd& points, const std::vector<int>& assignment,
                    int k);

double LoopMse(const Image& a, const Image& b);
double LoopFmse(const Image& a, const Image& b, const Mask& mask);

// SSIM by explicit 11x11 window sums (no separable filtering), Gaussian
// sigma 1.5, mirrored borders (edge pixel repeated), 0-255 scale.
Eigen::MatrixXd DirectSsimMap(const Image& a, const Image& b);
double DirectSsim(const Image& a, const Image& b);
double DirectFssim(const Image& a, const Image& b, const Mask& mask);

// Monte Carlo estimate of KL(N(mu, diag(exp(log_var))) || N(0, I)) as the
// sample mean of log q(z) - log p(z), z ~ q.
double MonteCarloKl(const Eigen::VectorXd& mu, const Eigen::VectorXd& log_var,
                    int samples, uint64_t seed);

// Two-model Bradley-Terry: maximizes the log-likelihood over the score
// difference d = s_0 - s_1 by grid search plus golden-section refinement and
// returns s_0 = d / 2 (s_1 = -d / 2).
double GridSearchTwoModelScore(double wins_01, double wins_10);

// Central difference of `f` at `x` along coordinate i.
double CentralDifference(const std::function<double(const Eigen::VectorXd&)>& f,
                         Eigen::VectorXd x, int i, double h);

}  // namespace lutaug::oracle

#endif  // LUTAUG_TESTS_ORACLES_H_
