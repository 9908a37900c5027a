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

#ifndef LUTAUG_NN_H_
#define LUTAUG_NN_H_

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lutaug/image.h"
#include "lutaug/rng.h"
#include "lutaug/tensor.h"

namespace lutaug {

// Glorot-uniform fill: U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
void InitGlorotUniform(Tensor& tensor, int fan_in, int fan_out,
                       CounterRng& rng);

struct EncoderConfig {
  int in_channels = 4;
  // Inputs are resolution x resolution; each block halves it.
  int resolution = 64;
  // Output channels of the four stride-2 3x3 blocks. The last entry is the
  // feature dimension.
  std::array<int, 4> widths = {16, 32, 64, 64};
};

// Four [3x3 conv, stride 2, pad 1, ReLU] blocks followed by global average
// pooling. Parameters live in a ParameterSet under "<prefix>.convN.weight"
// ([out, in, 3, 3]) and "<prefix>.convN.bias" ([out]).
class ConvEncoder {
 public:
  struct Cache {
    std::vector<Eigen::MatrixXd> columns;      // im2col of each block input
    std::vector<Eigen::MatrixXd> activations;  // post-ReLU block outputs
  };

  ConvEncoder(std::string prefix, EncoderConfig config);

  const EncoderConfig& config() const { return config_; }
  int feature_dim() const { return config_.widths.back(); }

  void AddParameters(ParameterSet& params, CounterRng& rng) const;

  // `input` is in_channels x (resolution * resolution), channel-major planes
  // in row-major pixel order.
  Eigen::VectorXd Forward(const ParameterSet& params,
                          const Eigen::MatrixXd& input,
                          Cache* cache = nullptr) const;

  // Accumulates d(loss)/d(params) into `grads`; writes d(loss)/d(input) when
  // `grad_input` is non-null.
  void Backward(const ParameterSet& params, const Cache& cache,
                const Eigen::VectorXd& grad_features, ParameterSet& grads,
                Eigen::MatrixXd* grad_input = nullptr) const;

 private:
  std::string WeightName(int block) const;
  std::string BiasName(int block) const;

  std::string prefix_;
  EncoderConfig config_;
  std::array<int, 5> sizes_{};  // spatial side length entering each block
};

// Stacks the given planes (each rows x H*W) into one encoder input.
Eigen::MatrixXd StackPlanes(std::initializer_list<Eigen::MatrixXd> planes);

// Encoder input for an image plus its mask, resampled to `resolution`:
// 4 planes (R, G, B, mask).
Eigen::MatrixXd ImageMaskInput(const Image& image, const Mask& mask,
                               int resolution);

// Numerically stable softmax (max subtracted).
Eigen::VectorXd Softmax(const Eigen::VectorXd& logits);
// Gradient w.r.t. logits given the softmax output and d(loss)/d(output).
Eigen::VectorXd SoftmaxBackward(const Eigen::VectorXd& probs,
                                const Eigen::VectorXd& grad_probs);

// softmax(W [features; latent] + b). weight is [L, d_f + d_z], bias [L].
Eigen::VectorXd FcSoftmaxHead(const Tensor& weight, const Tensor& bias,
                              const Eigen::VectorXd& features,
                              const Eigen::VectorXd& latent);

inline constexpr double kLogVarLimit = 10.0;

struct LatentGaussian {
  Eigen::VectorXd mu;
  // log(sigma^2), clamped to [-kLogVarLimit, kLogVarLimit] when produced.
  Eigen::VectorXd log_var;
};

// mu + eps * exp(log_var / 2).
Eigen::VectorXd Reparameterize(const LatentGaussian& latent,
                               const Eigen::VectorXd& eps);

// KL(N(mu, sigma^2) || N(0, I)) = 0.5 * sum(mu^2 + sigma^2 - 1 - log sigma^2).
double KlToStandardNormal(const LatentGaussian& latent);
// Gradients of the KL term w.r.t. mu and log_var.
LatentGaussian KlGradient(const LatentGaussian& latent);

// Mean absolute difference over all pixels and channels.
double L1Loss(const Image& a, const Image& b);

}  // namespace lutaug

#endif  // LUTAUG_NN_H_
