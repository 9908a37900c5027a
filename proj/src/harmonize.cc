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

#include "lutaug/harmonize.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lutaug {
namespace {

constexpr uint64_t kAugStream = 0x41554721;    // latent draws
constexpr uint64_t kBatchStream = 0x42415443;  // mini-batch order

EncoderConfig HarmonizerEncoder(const ToyHarmonizerConfig& config) {
  EncoderConfig e;
  e.in_channels = 4;
  e.resolution = config.resolution;
  e.widths = {16, 32, 32, config.feature_dim};
  return e;
}

std::string FormatDouble(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", v);
  return buffer;
}

}  // namespace

ToyHarmonizer::ToyHarmonizer(ToyHarmonizerConfig config)
    : config_(config), encoder_("enc", HarmonizerEncoder(config)) {
  CounterRng rng(config.seed, 0x48524d);
  encoder_.AddParameters(params_, rng);
  params_.Add("head.weight", {6, config.feature_dim});
  params_.Add("head.bias", {6});
  adam_ = AdamState(params_, AdamOptions{});
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> ToyHarmonizer::PredictAffine(
    const Image& composite, const Mask& mask) const {
  const Eigen::VectorXd features = encoder_.Forward(
      params_, ImageMaskInput(composite, mask, config_.resolution));
  const Eigen::VectorXd u =
      params_.at("head.weight").matrix() * features + params_.at("head.bias").values();
  return {Eigen::Vector3d::Ones() + u.head<3>(), u.tail<3>()};
}

Image ToyHarmonizer::Forward(const Image& composite, const Mask& mask) const {
  RequireSameShape(composite, mask, "ToyHarmonizer::Forward");
  const auto [scale, offset] = PredictAffine(composite, mask);
  Image out = composite;
  for (Eigen::Index p = 0; p < out.num_pixels(); ++p) {
    if (!mask[p]) continue;
    out.pixels().row(p) = (composite.pixels().row(p) * scale.transpose().array() +
                           offset.transpose().array())
                              .cwiseMax(0.0)
                              .cwiseMin(1.0);
  }
  return out;
}

double ToyHarmonizer::Loss(const Image& harmonized, const Image& target,
                           const Mask& mask) const {
  RequireSameShape(harmonized, target, "ToyHarmonizer::Loss");
  RequireSameShape(harmonized, mask, "ToyHarmonizer::Loss");
  const Eigen::Index fg = mask.ForegroundCount();
  if (fg == 0) throw std::invalid_argument("L_har: empty foreground");
  double sum = 0.0;
  for (Eigen::Index p = 0; p < mask.num_pixels(); ++p) {
    if (mask[p]) sum += (harmonized.pixels().row(p) - target.pixels().row(p)).square().sum();
  }
  return sum / (3.0 * static_cast<double>(fg));
}

std::vector<double> ToyHarmonizer::TrainStep(
    std::span<const HarmonizeExample> batch, double learning_rate) {
  ParameterSet grads = params_.ZerosLike();
  const std::vector<double> losses = Gradient(batch, grads);
  adam_.options.learning_rate = learning_rate;
  AdamStep(params_, grads, adam_);
  return losses;
}

std::vector<double> ToyHarmonizer::Gradient(
    std::span<const HarmonizeExample> batch, ParameterSet& grads) const {
  if (!grads.SameLayout(params_)) {
    throw std::invalid_argument("ToyHarmonizer::Gradient: layout mismatch");
  }
  std::vector<double> losses;
  losses.reserve(batch.size());
  const auto head = params_.at("head.weight").matrix();
  for (const HarmonizeExample& ex : batch) {
    const Image& in = *ex.composite;
    const Mask& mask = *ex.mask;
    const Image& target = *ex.target;
    RequireSameShape(in, target, "TrainStep");
    RequireSameShape(in, mask, "TrainStep");
    const Eigen::Index fg = mask.ForegroundCount();
    if (fg == 0) throw std::invalid_argument("L_har: empty foreground");

    ConvEncoder::Cache cache;
    const Eigen::VectorXd features = encoder_.Forward(
        params_, ImageMaskInput(in, mask, config_.resolution), &cache);
    const Eigen::VectorXd u = head * features + params_.at("head.bias").values();
    const Eigen::Array3d scale = 1.0 + u.head<3>().array();
    const Eigen::Array3d offset = u.tail<3>().array();

    const double norm = 3.0 * static_cast<double>(fg);
    double loss = 0.0;
    Eigen::VectorXd grad_u = Eigen::VectorXd::Zero(6);
    for (Eigen::Index p = 0; p < in.num_pixels(); ++p) {
      if (!mask[p]) continue;
      for (int c = 0; c < 3; ++c) {
        const double x = in.pixels()(p, c);
        const double pre = scale[c] * x + offset[c];
        const double diff = std::clamp(pre, 0.0, 1.0) - target.pixels()(p, c);
        loss += diff * diff;
        if (pre > 0.0 && pre < 1.0) {
          const double g = ex.weight * 2.0 * diff / norm;
          grad_u[c] += g * x;
          grad_u[3 + c] += g;
        }
      }
    }
    losses.push_back(loss / norm);
    grads.at("head.weight").matrix() += grad_u * features.transpose();
    grads.at("head.bias").values() += grad_u;
    encoder_.Backward(params_, cache, head.transpose() * grad_u, grads);
  }
  return losses;
}

Checkpoint ToyHarmonizer::ToCheckpoint() const {
  Checkpoint ckpt;
  ckpt.manifest = {{"kind", "toy_harmonizer"},
                   {"resolution", config_.resolution},
                   {"d_f", config_.feature_dim}};
  ckpt.params = params_;
  return ckpt;
}

ToyHarmonizer ToyHarmonizer::FromCheckpoint(const Checkpoint& checkpoint) {
  const auto& m = checkpoint.manifest;
  if (m.value("kind", "") != "toy_harmonizer") {
    throw std::invalid_argument("checkpoint is not a toy_harmonizer checkpoint");
  }
  ToyHarmonizerConfig config;
  try {
    config.resolution = m.at("resolution").get<int>();
    config.feature_dim = m.at("d_f").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad harmonizer manifest: ") + e.what());
  }
  ToyHarmonizer model(config);
  if (!model.params_.SameLayout(checkpoint.params)) {
    throw std::invalid_argument("checkpoint parameter blocks do not match its manifest");
  }
  model.params_ = checkpoint.params;
  return model;
}

AugMode ParseAugMode(const std::string& name) {
  if (name == "none") return AugMode::kNone;
  if (name == "dynamic") return AugMode::kDynamic;
  if (name == "static") return AugMode::kStatic;
  if (name == "aug-only") return AugMode::kAugmentedOnly;
  throw std::invalid_argument("unknown augmentation mode '" + name + "'");
}

std::string AugModeName(AugMode mode) {
  switch (mode) {
    case AugMode::kNone: return "none";
    case AugMode::kDynamic: return "dynamic";
    case AugMode::kStatic: return "static";
    case AugMode::kAugmentedOnly: return "aug-only";
  }
  return "?";
}

void AugTrainConfig::Validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (mode == AugMode::kStatic && static_multiplier < 1) {
    throw std::invalid_argument("static multiplier a must be >= 1");
  }
  if (!(learning_rate >= 0.0)) throw std::invalid_argument("learning rate must be >= 0");
}

Eigen::VectorXd AugmentationLatent(uint64_t seed, int iteration, int pair_index,
                                   int latent_dim) {
  CounterRng rng = CounterRng(seed, kAugStream)
                       .Derive(static_cast<uint64_t>(iteration))
                       .Derive(static_cast<uint64_t>(pair_index));
  return rng.NormalVector(latent_dim);
}

std::vector<TrainPair> MaterializeStaticSet(const SycoNet& syconet,
                                            std::span<const TrainPair> dataset,
                                            int multiplier, uint64_t seed) {
  if (multiplier < 1) throw std::invalid_argument("static multiplier a must be >= 1");
  std::vector<TrainPair> out;
  out.reserve(dataset.size() * multiplier);
  for (std::size_t n = 0; n < dataset.size(); ++n) {
    const TrainPair& pair = dataset[n];
    const Eigen::VectorXd features = RealFeatures(syconet, pair.real, pair.mask);
    for (int k = 0; k < multiplier; ++k) {
      const Eigen::VectorXd z = AugmentationLatent(seed, k, static_cast<int>(n),
                                                   syconet.config.latent_dim);
      TrainPair aug;
      aug.composite = Generate(syconet, pair.real, pair.mask, z).composite;
      aug.real = pair.real;
      aug.mask = pair.mask;
      aug.id = pair.id + "_aug" + std::to_string(k);
      aug.domain = pair.domain;
      out.push_back(std::move(aug));
    }
  }
  return out;
}

AugTrainResult TrainHarmonizer(Harmonizer& harmonizer, const SycoNet* syconet,
                               std::span<const TrainPair> dataset,
                               const AugTrainConfig& config,
                               const AugProgressFn& progress) {
  config.Validate();
  if (dataset.empty()) throw std::invalid_argument("cannot train on an empty dataset");
  if (config.mode != AugMode::kNone && syconet == nullptr) {
    throw std::invalid_argument("augmentation mode '" + AugModeName(config.mode) +
                                "' needs an augmentation network");
  }
  for (const TrainPair& pair : dataset) ValidatePair(pair);

  AugTrainResult result;
  // Training pairs and whether each is an augmented copy.
  std::vector<const TrainPair*> pairs;
  std::vector<bool> is_augmented;
  for (const TrainPair& pair : dataset) {
    pairs.push_back(&pair);
    is_augmented.push_back(false);
  }
  if (config.mode == AugMode::kStatic) {
    result.augmented =
        MaterializeStaticSet(*syconet, dataset, config.static_multiplier, config.seed);
    for (const TrainPair& pair : result.augmented) {
      pairs.push_back(&pair);
      is_augmented.push_back(true);
    }
  }
  const bool use_original = config.mode != AugMode::kAugmentedOnly;
  const bool use_generated =
      config.mode == AugMode::kDynamic || config.mode == AugMode::kAugmentedOnly;

  // E^r features are fixed for a frozen network; compute them once.
  std::vector<Eigen::VectorXd> features;
  if (use_generated) {
    for (const TrainPair& pair : dataset) {
      features.push_back(RealFeatures(*syconet, pair.real, pair.mask));
    }
  }

  const int n = static_cast<int>(pairs.size());
  const CounterRng batch_rng(config.seed, kBatchStream);
  for (int t = 0; t < config.iterations; ++t) {
    CounterRng order_rng = batch_rng.Derive(static_cast<uint64_t>(t));
    const std::vector<int> order = ShuffledIndices(n, order_rng);
    AugIterationStats stats;
    stats.iteration = t + 1;
    double orig_sum = 0.0, aug_sum = 0.0;
    int orig_count = 0, aug_count = 0;
    for (int start = 0; start < n; start += config.batch_size) {
      const int end = std::min(n, start + config.batch_size);
      const double weight = 1.0 / (end - start);
      std::vector<Image> generated;
      generated.reserve(end - start);
      std::vector<HarmonizeExample> examples;
      std::vector<bool> example_augmented;
      for (int i = start; i < end; ++i) {
        const int idx = order[i];
        const TrainPair& pair = *pairs[idx];
        if (use_original) {
          examples.push_back({&pair.composite, &pair.mask, &pair.real, weight});
          example_augmented.push_back(is_augmented[idx]);
        }
        if (use_generated) {
          const Eigen::VectorXd z =
              AugmentationLatent(config.seed, t, idx, syconet->config.latent_dim);
          const Lut3D lut =
              syconet->CombinedLut(Coefficients(*syconet, features[idx], z));
          Image composite = ApplyToForeground(lut, pair.real, pair.mask);
          for (Eigen::Index p = 0; p < composite.num_pixels(); ++p) {
            if (pair.mask[p]) {
              composite.pixels().row(p) =
                  composite.pixels().row(p).cwiseMax(0.0).cwiseMin(1.0);
            }
          }
          generated.push_back(std::move(composite));
        }
      }
      if (use_generated) {
        for (int i = start; i < end; ++i) {
          const TrainPair& pair = *pairs[order[i]];
          examples.push_back({&generated[i - start], &pair.mask, &pair.real, weight});
          example_augmented.push_back(true);
        }
      }
      const std::vector<double> losses = harmonizer.TrainStep(examples, config.learning_rate);
      for (std::size_t e = 0; e < losses.size(); ++e) {
        if (example_augmented[e]) {
          aug_sum += losses[e];
          ++aug_count;
        } else {
          orig_sum += losses[e];
          ++orig_count;
        }
      }
    }
    stats.original_loss = orig_count > 0 ? orig_sum / orig_count : 0.0;
    stats.augmented_loss = aug_count > 0 ? aug_sum / aug_count : 0.0;
    stats.total = stats.original_loss + stats.augmented_loss;
    result.history.push_back(stats);
    if (progress) progress(stats);
  }
  return result;
}

AugTrainResult TrainDynamic(Harmonizer& harmonizer, const SycoNet& syconet,
                            std::span<const TrainPair> dataset,
                            AugTrainConfig config) {
  config.mode = AugMode::kDynamic;
  return TrainHarmonizer(harmonizer, &syconet, dataset, config);
}

AugTrainResult TrainStatic(Harmonizer& harmonizer, const SycoNet& syconet,
                           std::span<const TrainPair> dataset,
                           AugTrainConfig config) {
  config.mode = AugMode::kStatic;
  return TrainHarmonizer(harmonizer, &syconet, dataset, config);
}

AugTrainResult TrainAugmentedOnly(Harmonizer& harmonizer,
                                  const SycoNet& syconet,
                                  std::span<const TrainPair> dataset,
                                  AugTrainConfig config) {
  config.mode = AugMode::kAugmentedOnly;
  return TrainHarmonizer(harmonizer, &syconet, dataset, config);
}

Image HarmonizeImage(const Harmonizer& harmonizer, const Image& composite,
                     const Mask& mask) {
  RequireSameShape(composite, mask, "HarmonizeImage");
  return harmonizer.Forward(composite, mask);
}

MetricReport EvaluateHarmonizer(const Harmonizer& harmonizer,
                                std::span<const TrainPair> pairs) {
  std::vector<ImageMetrics> rows;
  for (const TrainPair& pair : pairs) {
    rows.push_back(EvaluateImage(HarmonizeImage(harmonizer, pair.composite, pair.mask),
                                 pair.real, pair.mask, pair.id));
  }
  return Summarize(std::move(rows));
}

std::string LossHistoryCsv(const std::vector<AugIterationStats>& history) {
  std::string out = "iteration,L_orig,L_aug,total\n";
  for (const AugIterationStats& s : history) {
    out += std::to_string(s.iteration) + "," + FormatDouble(s.original_loss) + "," +
           FormatDouble(s.augmented_loss) + "," + FormatDouble(s.total) + "\n";
  }
  return out;
}

}  // namespace lutaug
