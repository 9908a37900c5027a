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

#ifndef LUTAUG_HARMONIZE_H_
#define LUTAUG_HARMONIZE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lutaug/adam.h"
#include "lutaug/checkpoint.h"
#include "lutaug/data.h"
#include "lutaug/image.h"
#include "lutaug/metrics.h"
#include "lutaug/nn.h"
#include "lutaug/syconet.h"

namespace lutaug {

// One term of the harmonization objective: L_har(G(composite), target),
// scaled by `weight` in the update.
struct HarmonizeExample {
  const Image* composite = nullptr;
  const Mask* mask = nullptr;
  const Image* target = nullptr;
  double weight = 1.0;
};

// Any trainable harmonization model. Forward keeps the input background
// (within 1/255) and the input shape.
class Harmonizer {
 public:
  virtual ~Harmonizer() = default;

  virtual Image Forward(const Image& composite, const Mask& mask) const = 0;
  virtual double Loss(const Image& harmonized, const Image& target,
                      const Mask& mask) const = 0;
  // One optimizer update on sum_i weight_i * Loss_i. Returns the unweighted
  // per-example losses measured before the update.
  virtual std::vector<double> TrainStep(std::span<const HarmonizeExample> batch,
                                        double learning_rate) = 0;
};

struct ToyHarmonizerConfig {
  int resolution = 32;
  int feature_dim = 32;
  uint64_t seed = 0;
};

// Conv encoder over (composite, mask) and a linear head predicting a global
// per-channel affine correction applied to the foreground:
// out = clamp(scale * pixel + offset). The head starts at zero, so an
// untrained model returns its input. L_har is foreground mean squared error.
class ToyHarmonizer : public Harmonizer {
 public:
  explicit ToyHarmonizer(ToyHarmonizerConfig config = {});

  Image Forward(const Image& composite, const Mask& mask) const override;
  double Loss(const Image& harmonized, const Image& target,
              const Mask& mask) const override;
  std::vector<double> TrainStep(std::span<const HarmonizeExample> batch,
                                double learning_rate) override;

  // Adds the gradient of sum_i weight_i * Loss_i to `grads` (laid out like
  // params()) and returns the unweighted per-example losses.
  std::vector<double> Gradient(std::span<const HarmonizeExample> batch,
                               ParameterSet& grads) const;

  // (scale, offset) per channel.
  std::pair<Eigen::Vector3d, Eigen::Vector3d> PredictAffine(
      const Image& composite, const Mask& mask) const;

  const ToyHarmonizerConfig& config() const { return config_; }
  const ParameterSet& params() const { return params_; }
  ParameterSet& params() { return params_; }

  Checkpoint ToCheckpoint() const;
  static ToyHarmonizer FromCheckpoint(const Checkpoint& checkpoint);

 private:
  ToyHarmonizerConfig config_;
  ConvEncoder encoder_;
  ParameterSet params_;
  AdamState adam_;
};

enum class AugMode { kNone, kDynamic, kStatic, kAugmentedOnly };

// "none", "dynamic", "static", "aug-only".
AugMode ParseAugMode(const std::string& name);
std::string AugModeName(AugMode mode);

struct AugTrainConfig {
  AugMode mode = AugMode::kDynamic;
  int static_multiplier = 2;  // a, with N_a = a * N
  int iterations = 10;        // passes over the training pairs
  int batch_size = 4;         // pairs per update
  uint64_t seed = 0;
  double learning_rate = 1e-3;

  void Validate() const;
};

struct AugIterationStats {
  int iteration = 0;         // 1-based
  double original_loss = 0;  // mean L_har over original composites
  double augmented_loss = 0; // mean L_har over augmented composites
  double total = 0;          // original_loss + augmented_loss
};

struct AugTrainResult {
  std::vector<AugIterationStats> history;
  // Static mode: the N_a materialized pairs, pair-major.
  std::vector<TrainPair> augmented;
};

// Latent z^g used for pair `pair_index` in 0-based iteration `iteration`.
// Static augmentation copy k of a pair uses iteration k.
Eigen::VectorXd AugmentationLatent(uint64_t seed, int iteration, int pair_index,
                                   int latent_dim);

// a * N generated pairs (for each pair, copies k = 0..a-1).
std::vector<TrainPair> MaterializeStaticSet(const SycoNet& syconet,
                                            std::span<const TrainPair> dataset,
                                            int multiplier, uint64_t seed);

using AugProgressFn = std::function<void(const AugIterationStats&)>;

// Trains `harmonizer` on `dataset` in config.mode. Per iteration the pairs
// are shuffled into mini-batches; in dynamic mode each pair contributes
// L_har(G(I^c_n), I^r_n) + L_har(G(I^g_{n,t}), I^r_n), in augmented-only
// mode only the second term, in none mode only the first. Static mode
// materializes a * N pairs once and trains on the merged set. The
// augmentation network is only read; it may be null in none mode.
AugTrainResult TrainHarmonizer(Harmonizer& harmonizer, const SycoNet* syconet,
                               std::span<const TrainPair> dataset,
                               const AugTrainConfig& config,
                               const AugProgressFn& progress = {});

AugTrainResult TrainDynamic(Harmonizer& harmonizer, const SycoNet& syconet,
                            std::span<const TrainPair> dataset,
                            AugTrainConfig config);
AugTrainResult TrainStatic(Harmonizer& harmonizer, const SycoNet& syconet,
                           std::span<const TrainPair> dataset,
                           AugTrainConfig config);
AugTrainResult TrainAugmentedOnly(Harmonizer& harmonizer,
                                  const SycoNet& syconet,
                                  std::span<const TrainPair> dataset,
                                  AugTrainConfig config);

// Inference: G(composite) only.
Image HarmonizeImage(const Harmonizer& harmonizer, const Image& composite,
                     const Mask& mask);

// Metrics of G(I^c) against I^r for every pair.
MetricReport EvaluateHarmonizer(const Harmonizer& harmonizer,
                                std::span<const TrainPair> pairs);

// "iteration,L_orig,L_aug,total" rows with a header line.
std::string LossHistoryCsv(const std::vector<AugIterationStats>& history);

}  // namespace lutaug

#endif  // LUTAUG_HARMONIZE_H_
