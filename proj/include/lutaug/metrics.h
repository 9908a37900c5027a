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

#ifndef LUTAUG_METRICS_H_
#define LUTAUG_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lutaug/image.h"

namespace lutaug {

// Error metrics are computed on the 0-255 scale: images hold [0, 1] values
// and differences are multiplied by 255.

// Mean squared difference over all pixels and channels.
double Mse(const Image& pred, const Image& target);
// Mean squared difference over foreground pixels, averaged over channels.
// Throws EmptyForegroundError when the mask has no foreground.
double Fmse(const Image& pred, const Image& target, const Mask& mask);

inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;

// Channel-averaged SSIM map (11x11 Gaussian window, sigma 1.5,
// C1 = (0.01 * 255)^2, C2 = (0.03 * 255)^2, half-sample symmetric padding).
// Requires both image sides >= 11.
Eigen::ArrayXd SsimMap(const Image& pred, const Image& target);
double Ssim(const Image& pred, const Image& target);
// Mean of the SSIM map over foreground pixels.
double Fssim(const Image& pred, const Image& target, const Mask& mask);

// Mean Fmse over all unordered pairs of samples (K >= 2).
double Diversity(std::span<const Image> samples, const Mask& mask);

struct ImageMetrics {
  std::string id;
  double mse = 0.0;
  double fmse = 0.0;
  double fssim = 0.0;
};

struct MetricReport {
  std::vector<ImageMetrics> per_image;
  double mean_mse = 0.0;
  double mean_fmse = 0.0;
  double mean_fssim = 0.0;
};

ImageMetrics EvaluateImage(const Image& pred, const Image& target,
                           const Mask& mask, const std::string& id = "");
MetricReport Summarize(std::vector<ImageMetrics> per_image);

// "id,mse,fmse,fssim" rows with a header line.
std::string MetricReportCsv(const MetricReport& report);
// {"count", "mse", "fmse", "fssim"} summary.
std::string MetricReportJson(const MetricReport& report);

// wins(i, j) = number of times model i was preferred over model j.
using PairwiseWins = Eigen::MatrixXd;

struct BtOptions {
  // Stop when no strength changes by more than this relative amount.
  double relative_tolerance = 1e-10;
  int max_iterations = 1000000;
};

struct BtResult {
  // Natural-log strengths shifted to zero mean.
  Eigen::VectorXd scores;
  int iterations = 0;
  // Log-likelihood at the start and after every MM update.
  std::vector<double> log_likelihood;
};

// Bradley-Terry maximum likelihood via minorization-maximization. Throws
// std::invalid_argument for malformed matrices and NonIdentifiableError when
// the MLE does not exist (disconnected comparisons, a model without wins or
// losses, or any group that never beats the rest). `names` labels models in
// error messages.
BtResult BtRank(const PairwiseWins& wins, const BtOptions& options = {},
                const std::vector<std::string>& names = {});

// sum_ij wins(i, j) * log(p_i / (p_i + p_j)) for log-strengths `scores`.
double BtLogLikelihood(const PairwiseWins& wins, const Eigen::VectorXd& scores);

struct WinsTable {
  std::vector<std::string> names;  // first-appearance order
  PairwiseWins wins;
};

// Rows "winner_id,loser_id,count"; an optional header line is skipped.
WinsTable ParseWinsCsv(const std::string& text);

}  // namespace lutaug

#endif  // LUTAUG_METRICS_H_
