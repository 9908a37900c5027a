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

#include "lutaug/nn.h"

#include <cmath>
#include <stdexcept>

namespace lutaug {
namespace {

int OutputSide(int side) { return (side - 1) / 2 + 1; }

// 3x3, stride 2, zero padding 1. Row c * 9 + ky * 3 + kx of the result holds
// the input sample feeding kernel tap (c, ky, kx) at every output position.
Eigen::MatrixXd Im2Col(const Eigen::MatrixXd& input, int side) {
  const int out_side = OutputSide(side);
  const Eigen::Index channels = input.rows();
  Eigen::MatrixXd col = Eigen::MatrixXd::Zero(channels * 9,
                                              Eigen::Index{out_side} * out_side);
  for (Eigen::Index c = 0; c < channels; ++c) {
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        const Eigen::Index row = c * 9 + ky * 3 + kx;
        for (int oy = 0; oy < out_side; ++oy) {
          const int y = 2 * oy - 1 + ky;
          if (y < 0 || y >= side) continue;
          for (int ox = 0; ox < out_side; ++ox) {
            const int x = 2 * ox - 1 + kx;
            if (x < 0 || x >= side) continue;
            col(row, Eigen::Index{oy} * out_side + ox) =
                input(c, Eigen::Index{y} * side + x);
          }
        }
      }
    }
  }
  return col;
}

Eigen::MatrixXd Col2Im(const Eigen::MatrixXd& col, Eigen::Index channels,
                       int side) {
  const int out_side = OutputSide(side);
  Eigen::MatrixXd input =
      Eigen::MatrixXd::Zero(channels, Eigen::Index{side} * side);
  for (Eigen::Index c = 0; c < channels; ++c) {
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        const Eigen::Index row = c * 9 + ky * 3 + kx;
        for (int oy = 0; oy < out_side; ++oy) {
          const int y = 2 * oy - 1 + ky;
          if (y < 0 || y >= side) continue;
          for (int ox = 0; ox < out_side; ++ox) {
            const int x = 2 * ox - 1 + kx;
            if (x < 0 || x >= side) continue;
            input(c, Eigen::Index{y} * side + x) +=
                col(row, Eigen::Index{oy} * out_side + ox);
          }
        }
      }
    }
  }
  return input;
}

}  // namespace

void InitGlorotUniform(Tensor& tensor, int fan_in, int fan_out,
                       CounterRng& rng) {
  const double a = std::sqrt(6.0 / (fan_in + fan_out));
  for (Eigen::Index i = 0; i < tensor.size(); ++i) {
    tensor.values()[i] = rng.Uniform(-a, a);
  }
}

ConvEncoder::ConvEncoder(std::string prefix, EncoderConfig config)
    : prefix_(std::move(prefix)), config_(config) {
  if (config_.in_channels < 1 || config_.resolution < 1) {
    throw std::invalid_argument("encoder needs positive channels/resolution");
  }
  sizes_[0] = config_.resolution;
  for (int b = 0; b < 4; ++b) {
    if (config_.widths[b] < 1) {
      throw std::invalid_argument("encoder widths must be positive");
    }
    sizes_[b + 1] = OutputSide(sizes_[b]);
  }
}

std::string ConvEncoder::WeightName(int block) const {
  return prefix_ + ".conv" + std::to_string(block) + ".weight";
}

std::string ConvEncoder::BiasName(int block) const {
  return prefix_ + ".conv" + std::to_string(block) + ".bias";
}

void ConvEncoder::AddParameters(ParameterSet& params, CounterRng& rng) const {
  int in = config_.in_channels;
  for (int b = 0; b < 4; ++b) {
    const int out = config_.widths[b];
    Tensor& w = params.Add(WeightName(b), {out, in, 3, 3});
    InitGlorotUniform(w, in * 9, out * 9, rng);
    params.Add(BiasName(b), {out});
    in = out;
  }
}

Eigen::VectorXd ConvEncoder::Forward(const ParameterSet& params,
                                     const Eigen::MatrixXd& input,
                                     Cache* cache) const {
  const Eigen::Index expected_cols =
      Eigen::Index{config_.resolution} * config_.resolution;
  if (input.rows() != config_.in_channels || input.cols() != expected_cols) {
    throw std::invalid_argument(
        prefix_ + ": expected input " + std::to_string(config_.in_channels) +
        " x " + std::to_string(config_.resolution) + "^2, got " +
        std::to_string(input.rows()) + " x " + std::to_string(input.cols()));
  }
  if (cache != nullptr) {
    cache->columns.clear();
    cache->activations.clear();
  }
  Eigen::MatrixXd x = input;
  for (int b = 0; b < 4; ++b) {
    Eigen::MatrixXd col = Im2Col(x, sizes_[b]);
    const auto w = params.at(WeightName(b)).matrix();
    const auto& bias = params.at(BiasName(b)).values();
    x = ((w * col).colwise() + bias).cwiseMax(0.0);
    if (cache != nullptr) {
      cache->columns.push_back(std::move(col));
      cache->activations.push_back(x);
    }
  }
  return x.rowwise().mean();
}

void ConvEncoder::Backward(const ParameterSet& params, const Cache& cache,
                           const Eigen::VectorXd& grad_features,
                           ParameterSet& grads,
                           Eigen::MatrixXd* grad_input) const {
  if (cache.activations.size() != 4) {
    throw std::invalid_argument(prefix_ + ": Backward needs a forward cache");
  }
  const Eigen::Index last_cols = cache.activations[3].cols();
  Eigen::MatrixXd grad = grad_features.replicate(1, last_cols) /
                         static_cast<double>(last_cols);
  for (int b = 3; b >= 0; --b) {
    grad = (cache.activations[b].array() > 0.0).select(grad, 0.0);
    grads.at(WeightName(b)).matrix() += grad * cache.columns[b].transpose();
    grads.at(BiasName(b)).values() += grad.rowwise().sum();
    if (b == 0 && grad_input == nullptr) break;
    const Eigen::MatrixXd grad_col =
        params.at(WeightName(b)).matrix().transpose() * grad;
    const Eigen::Index channels =
        b == 0 ? config_.in_channels : config_.widths[b - 1];
    grad = Col2Im(grad_col, channels, sizes_[b]);
  }
  if (grad_input != nullptr) *grad_input = std::move(grad);
}

Eigen::MatrixXd StackPlanes(std::initializer_list<Eigen::MatrixXd> planes) {
  Eigen::Index rows = 0;
  const Eigen::Index cols = planes.size() == 0 ? 0 : planes.begin()->cols();
  for (const auto& p : planes) {
    if (p.cols() != cols) {
      throw std::invalid_argument("StackPlanes: plane sizes differ");
    }
    rows += p.rows();
  }
  Eigen::MatrixXd out(rows, cols);
  Eigen::Index row = 0;
  for (const auto& p : planes) {
    out.middleRows(row, p.rows()) = p;
    row += p.rows();
  }
  return out;
}

Eigen::MatrixXd ImageMaskInput(const Image& image, const Mask& mask,
                               int resolution) {
  RequireSameShape(image, mask, "ImageMaskInput");
  const Image small = ResizeBilinear(image, resolution, resolution);
  const Mask small_mask = ResizeNearest(mask, resolution, resolution);
  return StackPlanes(
      {ToPlanes(small), small_mask.AsChannel().matrix().transpose()});
}

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits) {
  const Eigen::ArrayXd e = (logits.array() - logits.maxCoeff()).exp();
  return (e / e.sum()).matrix();
}

Eigen::VectorXd SoftmaxBackward(const Eigen::VectorXd& probs,
                                const Eigen::VectorXd& grad_probs) {
  return probs.cwiseProduct(grad_probs -
                            Eigen::VectorXd::Constant(probs.size(),
                                                      probs.dot(grad_probs)));
}

Eigen::VectorXd FcSoftmaxHead(const Tensor& weight, const Tensor& bias,
                              const Eigen::VectorXd& features,
                              const Eigen::VectorXd& latent) {
  const auto w = weight.matrix();
  if (w.cols() != features.size() + latent.size() ||
      bias.size() != w.rows()) {
    throw std::invalid_argument(
        "FcSoftmaxHead: head expects " + std::to_string(w.cols()) +
        " inputs, got " + std::to_string(features.size()) + " features + " +
        std::to_string(latent.size()) + " latent");
  }
  Eigen::VectorXd logits = bias.values();
  logits.noalias() += w.leftCols(features.size()) * features;
  logits.noalias() += w.rightCols(latent.size()) * latent;
  return Softmax(logits);
}

Eigen::VectorXd Reparameterize(const LatentGaussian& latent,
                               const Eigen::VectorXd& eps) {
  if (eps.size() != latent.mu.size() || latent.log_var.size() != latent.mu.size()) {
    throw std::invalid_argument("Reparameterize: dimension mismatch");
  }
  return latent.mu +
         eps.cwiseProduct((0.5 * latent.log_var.array()).exp().matrix());
}

double KlToStandardNormal(const LatentGaussian& latent) {
  const Eigen::ArrayXd mu = latent.mu.array();
  const Eigen::ArrayXd lv = latent.log_var.array();
  return 0.5 * (mu.square() + lv.exp() - 1.0 - lv).sum();
}

LatentGaussian KlGradient(const LatentGaussian& latent) {
  return {latent.mu,
          (0.5 * (latent.log_var.array().exp() - 1.0)).matrix()};
}

double L1Loss(const Image& a, const Image& b) {
  RequireSameShape(a, b, "L1Loss");
  if (a.num_pixels() == 0) throw std::invalid_argument("L1Loss: empty image");
  return (a.pixels() - b.pixels()).abs().mean();
}

}  // namespace lutaug
