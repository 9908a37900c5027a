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

#include "lutaug/metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "lutaug/errors.h"

namespace lutaug {
namespace {

constexpr double kScale = 255.0;

using Plane = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::ArrayXd GaussianKernel() {
  Eigen::ArrayXd k(kSsimWindow);
  const int r = kSsimWindow / 2;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - r;
    k[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
  }
  return k / k.sum();
}

int Reflect(int i, int n) {
  while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
  return i;
}

// Separable Gaussian filter with half-sample symmetric boundaries.
Plane Filter(const Plane& in, const Eigen::ArrayXd& kernel) {
  const int h = static_cast<int>(in.rows());
  const int w = static_cast<int>(in.cols());
  const int r = kSsimWindow / 2;
  Plane tmp(h, w), out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -r; t <= r; ++t) acc += kernel[t + r] * in(y, Reflect(x + t, w));
      tmp(y, x) = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -r; t <= r; ++t) acc += kernel[t + r] * tmp(Reflect(y + t, h), x);
      out(y, x) = acc;
    }
  }
  return out;
}

Plane ChannelPlane(const Image& image, int c) {
  Plane plane(image.height(), image.width());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) plane(y, x) = kScale * image.at(y, x, c);
  }
  return plane;
}

void RequireForeground(const Mask& mask, const char* what) {
  if (mask.ForegroundCount() == 0) {
    throw EmptyForegroundError(std::string(what) + ": mask has no foreground");
  }
}

std::string FormatDouble(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", v);
  return buffer;
}

}  // namespace

double Mse(const Image& pred, const Image& target) {
  RequireSameShape(pred, target, "Mse");
  if (pred.num_pixels() == 0) throw std::invalid_argument("Mse: empty image");
  // Same accumulation order as Fmse so a full mask gives identical values.
  double sum = 0.0;
  for (Eigen::Index p = 0; p < pred.num_pixels(); ++p) {
    sum += (kScale * (pred.pixels().row(p) - target.pixels().row(p))).square().sum();
  }
  return sum / (3.0 * static_cast<double>(pred.num_pixels()));
}

double Fmse(const Image& pred, const Image& target, const Mask& mask) {
  RequireSameShape(pred, target, "Fmse");
  RequireSameShape(pred, mask, "Fmse");
  RequireForeground(mask, "Fmse");
  double sum = 0.0;
  for (Eigen::Index p = 0; p < pred.num_pixels(); ++p) {
    if (mask[p]) {
      sum += (kScale * (pred.pixels().row(p) - target.pixels().row(p))).square().sum();
    }
  }
  return sum / (3.0 * static_cast<double>(mask.ForegroundCount()));
}

Eigen::ArrayXd SsimMap(const Image& pred, const Image& target) {
  RequireSameShape(pred, target, "Ssim");
  if (pred.height() < kSsimWindow || pred.width() < kSsimWindow) {
    throw std::invalid_argument("Ssim: images must be at least 11x11, got " +
                                std::to_string(pred.height()) + "x" +
                                std::to_string(pred.width()));
  }
  const double c1 = (0.01 * kScale) * (0.01 * kScale);
  const double c2 = (0.03 * kScale) * (0.03 * kScale);
  const Eigen::ArrayXd kernel = GaussianKernel();
  Plane total = Plane::Zero(pred.height(), pred.width());
  for (int c = 0; c < 3; ++c) {
    const Plane x = ChannelPlane(pred, c);
    const Plane y = ChannelPlane(target, c);
    const Plane mx = Filter(x, kernel);
    const Plane my = Filter(y, kernel);
    const Plane sxx = Filter(x * x, kernel) - mx * mx;
    const Plane syy = Filter(y * y, kernel) - my * my;
    const Plane sxy = Filter(x * y, kernel) - mx * my;
    total += ((2.0 * mx * my + c1) * (2.0 * sxy + c2)) /
             ((mx * mx + my * my + c1) * (sxx + syy + c2));
  }
  total /= 3.0;
  return Eigen::Map<const Eigen::ArrayXd>(total.data(), total.size());
}

double Ssim(const Image& pred, const Image& target) {
  return SsimMap(pred, target).mean();
}

double Fssim(const Image& pred, const Image& target, const Mask& mask) {
  RequireSameShape(pred, mask, "Fssim");
  RequireForeground(mask, "Fssim");
  const Eigen::ArrayXd map = SsimMap(pred, target);
  double sum = 0.0;
  for (Eigen::Index p = 0; p < map.size(); ++p) {
    if (mask[p]) sum += map[p];
  }
  return sum / static_cast<double>(mask.ForegroundCount());
}

double Diversity(std::span<const Image> samples, const Mask& mask) {
  if (samples.size() < 2) {
    throw std::invalid_argument("Diversity needs at least 2 samples");
  }
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      sum += Fmse(samples[i], samples[j], mask);
      ++pairs;
    }
  }
  return sum / pairs;
}

ImageMetrics EvaluateImage(const Image& pred, const Image& target,
                           const Mask& mask, const std::string& id) {
  return {id, Mse(pred, target), Fmse(pred, target, mask),
          Fssim(pred, target, mask)};
}

MetricReport Summarize(std::vector<ImageMetrics> per_image) {
  MetricReport report;
  report.per_image = std::move(per_image);
  const double n = static_cast<double>(report.per_image.size());
  for (const ImageMetrics& m : report.per_image) {
    report.mean_mse += m.mse / n;
    report.mean_fmse += m.fmse / n;
    report.mean_fssim += m.fssim / n;
  }
  return report;
}

std::string MetricReportCsv(const MetricReport& report) {
  std::string out = "id,mse,fmse,fssim\n";
  for (const ImageMetrics& m : report.per_image) {
    out += m.id + "," + FormatDouble(m.mse) + "," + FormatDouble(m.fmse) + "," +
           FormatDouble(m.fssim) + "\n";
  }
  return out;
}

std::string MetricReportJson(const MetricReport& report) {
  nlohmann::json j = {{"count", report.per_image.size()},
                      {"mse", report.mean_mse},
                      {"fmse", report.mean_fmse},
                      {"fssim", report.mean_fssim}};
  return j.dump(2) + "\n";
}

double BtLogLikelihood(const PairwiseWins& wins, const Eigen::VectorXd& scores) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < wins.rows(); ++i) {
    for (Eigen::Index j = 0; j < wins.cols(); ++j) {
      if (i == j || wins(i, j) == 0.0) continue;
      // log(p_i / (p_i + p_j)) = -log(1 + exp(s_j - s_i))
      ll -= wins(i, j) * std::log1p(std::exp(scores[j] - scores[i]));
    }
  }
  return ll;
}

namespace {

std::string ModelName(const std::vector<std::string>& names, Eigen::Index i) {
  return i < static_cast<Eigen::Index>(names.size()) ? names[i]
                                                     : "model " + std::to_string(i);
}

std::string NameList(const std::vector<std::string>& names,
                     const std::vector<Eigen::Index>& ids) {
  std::string out = "{";
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k > 0) out += ", ";
    out += ModelName(names, ids[k]);
  }
  return out + "}";
}

// Nodes reachable from node 0 along edges a -> b where edge(a, b) holds.
template <typename Edge>
std::vector<bool> Reachable(Eigen::Index n, Edge edge) {
  std::vector<bool> seen(n, false);
  std::vector<Eigen::Index> stack = {0};
  seen[0] = true;
  while (!stack.empty()) {
    const Eigen::Index a = stack.back();
    stack.pop_back();
    for (Eigen::Index b = 0; b < n; ++b) {
      if (!seen[b] && edge(a, b)) {
        seen[b] = true;
        stack.push_back(b);
      }
    }
  }
  return seen;
}

void SplitBy(const std::vector<bool>& in, std::vector<Eigen::Index>* inside,
             std::vector<Eigen::Index>* outside) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    (in[i] ? inside : outside)->push_back(static_cast<Eigen::Index>(i));
  }
}

void CheckIdentifiable(const PairwiseWins& wins,
                       const std::vector<std::string>& names) {
  const Eigen::Index n = wins.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (wins.row(i).sum() == 0.0) {
      throw NonIdentifiableError(ModelName(names, i) + " has no wins");
    }
    if (wins.col(i).sum() == 0.0) {
      throw NonIdentifiableError(ModelName(names, i) + " has no losses");
    }
  }
  std::vector<Eigen::Index> inside, outside;
  SplitBy(Reachable(n, [&](Eigen::Index a, Eigen::Index b) {
            return wins(a, b) + wins(b, a) > 0.0;
          }),
          &inside, &outside);
  if (!outside.empty()) {
    throw NonIdentifiableError("comparison graph is disconnected: " +
                               NameList(names, inside) + " never compared with " +
                               NameList(names, outside));
  }
  inside.clear();
  SplitBy(Reachable(n, [&](Eigen::Index a, Eigen::Index b) { return wins(a, b) > 0.0; }),
          &inside, &outside);
  if (!outside.empty()) {
    throw NonIdentifiableError(NameList(names, outside) + " never beat " +
                               NameList(names, inside));
  }
  inside.clear();
  outside.clear();
  SplitBy(Reachable(n, [&](Eigen::Index a, Eigen::Index b) { return wins(b, a) > 0.0; }),
          &inside, &outside);
  if (!outside.empty()) {
    throw NonIdentifiableError(NameList(names, inside) + " never beat " +
                               NameList(names, outside));
  }
}

}  // namespace

BtResult BtRank(const PairwiseWins& wins, const BtOptions& options,
                const std::vector<std::string>& names) {
  const Eigen::Index n = wins.rows();
  if (wins.cols() != n) throw std::invalid_argument("wins matrix must be square");
  if (n < 2) throw std::invalid_argument("need at least two models");
  if (!wins.allFinite() || (wins.array() < 0.0).any()) {
    throw std::invalid_argument("wins must be finite and non-negative");
  }
  if ((wins.diagonal().array() != 0.0).any()) {
    throw std::invalid_argument("wins diagonal must be zero");
  }
  CheckIdentifiable(wins, names);

  const Eigen::VectorXd total_wins = wins.rowwise().sum();
  const PairwiseWins games = wins + wins.transpose();
  Eigen::VectorXd strength = Eigen::VectorXd::Ones(n);
  BtResult result;
  result.log_likelihood.push_back(BtLogLikelihood(wins, strength.array().log().matrix()));
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    Eigen::VectorXd next(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double denom = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i) denom += games(i, j) / (strength[i] + strength[j]);
      }
      next[i] = total_wins[i] / denom;
    }
    // Rescale to unit geometric mean; the likelihood is scale-free.
    next /= std::exp(next.array().log().mean());
    const double change =
        ((next - strength).array().abs() / strength.array()).maxCoeff();
    strength = next;
    result.iterations = iter;
    result.log_likelihood.push_back(
        BtLogLikelihood(wins, strength.array().log().matrix()));
    if (change < options.relative_tolerance) break;
  }
  result.scores = strength.array().log().matrix();
  result.scores.array() -= result.scores.mean();
  return result;
}

WinsTable ParseWinsCsv(const std::string& text) {
  struct Row {
    std::string winner, loser;
    double count;
  };
  std::vector<Row> rows;
  WinsTable table;
  std::map<std::string, int> index;
  auto id_of = [&](const std::string& name) {
    const auto [it, inserted] = index.emplace(name, static_cast<int>(table.names.size()));
    if (inserted) table.names.push_back(name);
    return it->second;
  };
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  bool first_line = true;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      const auto first = field.find_first_not_of(" \t");
      const auto last = field.find_last_not_of(" \t");
      fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
    }
    if (fields.size() != 3) {
      throw ParseError("expected winner_id,loser_id,count", line_number);
    }
    double count = 0.0;
    const auto [ptr, ec] = std::from_chars(fields[2].data(),
                                           fields[2].data() + fields[2].size(), count);
    if (ec != std::errc() || ptr != fields[2].data() + fields[2].size()) {
      if (first_line) {  // header
        first_line = false;
        continue;
      }
      throw ParseError("non-numeric count '" + fields[2] + "'", line_number);
    }
    if (count < 0 || !std::isfinite(count)) {
      throw ParseError("count must be non-negative", line_number);
    }
    if (fields[0] == fields[1]) {
      throw ParseError("model compared with itself", line_number);
    }
    first_line = false;
    rows.push_back({fields[0], fields[1], count});
  }
  for (const Row& r : rows) {
    id_of(r.winner);
    id_of(r.loser);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(table.names.size());
  table.wins = PairwiseWins::Zero(n, n);
  for (const Row& r : rows) table.wins(index[r.winner], index[r.loser]) += r.count;
  if (rows.empty()) throw ParseError("no comparisons", 0);
  return table;
}

}  // namespace lutaug
