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

#ifndef LUTAUG_SYCONET_H_
#define LUTAUG_SYCONET_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lutaug/basis.h"
#include "lutaug/checkpoint.h"
#include "lutaug/data.h"
#include "lutaug/lut.h"
#include "lutaug/nn.h"
#include "lutaug/tensor.h"

namespace lutaug {

struct SycoConfig {
  int latent_dim = 32;    // d_z
  int num_basis = 20;     // L
  int feature_dim = 64;   // d_f
  int lut_size = 17;      // lattice points per axis (16 bins)
  int resolution = 64;    // encoder input and training resolution
  double learning_rate = 1e-4;
  // Multiplies the KL term of the training objective.
  double kl_weight = 1.0;
  int batch_size = 4;
  int epochs = 100;
  uint64_t seed = 0;

  void Validate() const;
};

// Learnable state of the augmentation network. Parameter blocks:
//   er.*            encoder over (real, mask), 4 input planes
//   ez.*            encoder over (composite, real, mask), 7 input planes
//   ez.mu.*, ez.logvar.*   latent Gaussian heads [d_z, d_f]
//   head.weight [L, d_f + d_z], head.bias [L]   shared coefficient head
//   basis [L, S, S, S, 3]   basis LUT entries, red fastest
struct SycoNet {
  SycoConfig config;
  ParameterSet params;

  ConvEncoder real_encoder() const;
  ConvEncoder latent_encoder() const;
  std::vector<Lut3D> BasisLuts() const;
  // sum_l alpha_l * basis_l.
  Lut3D CombinedLut(const Eigen::VectorXd& alpha) const;
};

// Encoders and heads are Glorot-initialized from config.seed; the basis is
// copied from `basis` (which must hold config.num_basis LUTs of
// config.lut_size).
SycoNet InitSycoNet(const SycoConfig& config, const BasisSet& basis);

Checkpoint ToCheckpoint(const SycoNet& net);
SycoNet SycoNetFromCheckpoint(const Checkpoint& checkpoint);

// Writes basis_00.cube ... into `dir`.
void ExportBasis(const SycoNet& net, const std::string& dir);

// E^r features of (real, mask).
Eigen::VectorXd RealFeatures(const SycoNet& net, const Image& real,
                             const Mask& mask);
// Softmax coefficients from the shared head.
Eigen::VectorXd Coefficients(const SycoNet& net,
                             const Eigen::VectorXd& features,
                             const Eigen::VectorXd& latent);

struct GenerateResult {
  Image composite;
  Eigen::VectorXd alpha;
  Lut3D lut;
};

// Generation branch: new composite for `real` from latent z_g. Foreground
// pixels are LUT-mapped and clamped to [0, 1]; background is copied.
GenerateResult Generate(const SycoNet& net, const Image& real, const Mask& mask,
                        const Eigen::VectorXd& z_g);

struct ReconstructResult {
  Image composite;
  LatentGaussian latent;
  Eigen::VectorXd z;
  Eigen::VectorXd alpha;
};

// Reconstruction branch: encodes (composite, real, mask), samples
// z = mu + eps * sigma and rebuilds the composite from the real image.
ReconstructResult Reconstruct(const SycoNet& net, const Image& real,
                              const Image& composite, const Mask& mask,
                              const Eigen::VectorXd& eps);

struct SycoLossTerms {
  double total = 0.0;
  double reconstruction = 0.0;
  double kl = 0.0;
};

// total = kl_weight * KL(latent || N(0, I)) + mean |reconstruction - composite|.
SycoLossTerms SycoLoss(const ReconstructResult& reconstruction,
                       const Image& composite, double kl_weight = 1.0);

// A training pair with its encoder inputs and per-foreground-pixel lattice
// weights precomputed. Images keep the pair's own resolution.
struct SycoSample {
  Image real;
  Image composite;
  Mask mask;
  Eigen::MatrixXd real_input;
  Eigen::MatrixXd latent_input;
  std::vector<Eigen::Index> foreground;
  std::vector<LatticeWeights> weights;
};

SycoSample PrepareSample(const SycoNet& net, const TrainPair& pair);

// Mean SycoLoss over the batch with one eps vector per sample. When `grads`
// is non-null (same layout as net.params) the gradient of the mean loss is
// added to it.
SycoLossTerms SycoBatchLoss(const SycoNet& net,
                            std::span<const SycoSample> batch,
                            std::span<const Eigen::VectorXd> eps,
                            ParameterSet* grads);

struct SycoEpochStats {
  int epoch = 0;  // 1-based
  double total = 0.0;
  double reconstruction = 0.0;
  double kl = 0.0;
};

struct SycoTrainResult {
  SycoNet net;
  std::vector<SycoEpochStats> history;
};

using SycoProgressFn = std::function<void(const SycoEpochStats&)>;

// Adam over every parameter block (encoders, heads and basis entries) using
// the training fields of init.config. Pairs are resampled to
// config.resolution first.
SycoTrainResult TrainSycoNet(std::span<const TrainPair> dataset,
                             const SycoNet& init,
                             const SycoProgressFn& progress = {});

// K composites from K successive N(0, I) draws of CounterRng(seed).
std::vector<Image> SampleAugmentations(const SycoNet& net, const Image& real,
                                       const Mask& mask, int count,
                                       uint64_t seed);

// FNV-1a over all parameter bytes; used to confirm a model was not touched.
uint64_t ParameterHash(const ParameterSet& params);

}  // namespace lutaug

#endif  // LUTAUG_SYCONET_H_
