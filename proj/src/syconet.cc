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

#include "lutaug/syconet.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <stdexcept>

#include "lutaug/adam.h"
#include "lutaug/errors.h"

namespace lutaug {
namespace {

constexpr uint64_t kTrainStream = 0x5359434f;  // "SYCO"

EncoderConfig EncoderFor(const SycoConfig& config, int in_channels) {
  EncoderConfig e;
  e.in_channels = in_channels;
  e.resolution = config.resolution;
  e.widths = {16, 32, 64, config.feature_dim};
  return e;
}

// Foreground pixels mapped through `lut` and clamped; background copied.
Image AssembleComposite(const Lut3D& lut, const Image& real, const Mask& mask) {
  Image out = ApplyToForeground(lut, real, mask);
  for (Eigen::Index p = 0; p < out.num_pixels(); ++p) {
    if (mask[p]) out.pixels().row(p) = out.pixels().row(p).cwiseMax(0.0).cwiseMin(1.0);
  }
  return out;
}

LatentGaussian LatentHeads(const ParameterSet& params,
                           const Eigen::VectorXd& hidden,
                           Eigen::VectorXd* raw_log_var) {
  LatentGaussian g;
  g.mu = params.at("ez.mu.weight").matrix() * hidden +
         params.at("ez.mu.bias").values();
  Eigen::VectorXd raw = params.at("ez.logvar.weight").matrix() * hidden +
                        params.at("ez.logvar.bias").values();
  g.log_var = raw.cwiseMax(-kLogVarLimit).cwiseMin(kLogVarLimit);
  if (raw_log_var != nullptr) *raw_log_var = std::move(raw);
  return g;
}

Eigen::MatrixXd LatentInput(const SycoConfig& config, const Image& composite,
                            const Image& real, const Mask& mask) {
  RequireSameShape(composite, real, "composite vs real");
  RequireSameShape(real, mask, "real vs mask");
  const int r = config.resolution;
  const Mask small_mask = ResizeNearest(mask, r, r);
  return StackPlanes({ToPlanes(ResizeBilinear(composite, r, r)),
                      ToPlanes(ResizeBilinear(real, r, r)),
                      small_mask.AsChannel().matrix().transpose()});
}

// Forward and backward for one sample, loss scaled by `scale`.
SycoLossTerms SampleLoss(const SycoNet& net, const SycoSample& s,
                         const Eigen::VectorXd& eps, double scale,
                         ParameterSet* grads) {
  const SycoConfig& cfg = net.config;
  const ParameterSet& params = net.params;
  const ConvEncoder real_encoder = net.real_encoder();
  const ConvEncoder latent_encoder = net.latent_encoder();
  if (eps.size() != cfg.latent_dim) {
    throw std::invalid_argument("eps must have length d_z");
  }

  ConvEncoder::Cache real_cache, latent_cache;
  const Eigen::VectorXd features =
      real_encoder.Forward(params, s.real_input, &real_cache);
  const Eigen::VectorXd hidden =
      latent_encoder.Forward(params, s.latent_input, &latent_cache);
  Eigen::VectorXd raw_log_var;
  const LatentGaussian latent = LatentHeads(params, hidden, &raw_log_var);
  const Eigen::VectorXd sigma = (0.5 * latent.log_var.array()).exp().matrix();
  const Eigen::VectorXd z = latent.mu + eps.cwiseProduct(sigma);

  const auto head = params.at("head.weight").matrix();
  const int df = cfg.feature_dim;
  const Eigen::VectorXd alpha = Softmax(
      head.leftCols(df) * features + head.rightCols(cfg.latent_dim) * z +
      params.at("head.bias").values());
  const auto basis = params.at("basis").matrix();  // L x 3S^3
  const Eigen::VectorXd combined_flat = basis.transpose() * alpha;
  const Eigen::Map<const Lut3D::EntryMatrix> combined(
      combined_flat.data(), combined_flat.size() / 3, 3);

  // Reconstruction error over every pixel; background pixels reproduce the
  // real image exactly and contribute |real - composite|.
  const double count = 3.0 * static_cast<double>(s.real.num_pixels());
  double abs_sum = 0.0;
  for (Eigen::Index p = 0; p < s.real.num_pixels(); ++p) {
    if (!s.mask[p]) {
      abs_sum += (s.real.pixels().row(p) - s.composite.pixels().row(p)).abs().sum();
    }
  }
  Lut3D::EntryMatrix grad_combined;
  if (grads != nullptr) grad_combined.setZero(combined.rows(), 3);
  for (std::size_t f = 0; f < s.foreground.size(); ++f) {
    const Eigen::Index p = s.foreground[f];
    const LatticeWeights& w = s.weights[f];
    Eigen::RowVector3d value = Eigen::RowVector3d::Zero();
    for (int n = 0; n < w.count; ++n) value += w.weight[n] * combined.row(w.index[n]);
    for (int c = 0; c < 3; ++c) {
      const double clamped = std::clamp(value[c], 0.0, 1.0);
      const double diff = clamped - s.composite.pixels()(p, c);
      abs_sum += std::abs(diff);
      if (grads == nullptr || !(value[c] > 0.0 && value[c] < 1.0) || diff == 0.0) {
        continue;
      }
      const double g = scale * (diff > 0.0 ? 1.0 : -1.0) / count;
      for (int n = 0; n < w.count; ++n) grad_combined(w.index[n], c) += w.weight[n] * g;
    }
  }

  SycoLossTerms terms;
  terms.reconstruction = abs_sum / count;
  terms.kl = KlToStandardNormal(latent);
  terms.total = cfg.kl_weight * terms.kl + terms.reconstruction;
  if (grads == nullptr) return terms;

  const Eigen::Map<const Eigen::VectorXd> grad_flat(grad_combined.data(),
                                                     grad_combined.size());
  grads->at("basis").matrix() += alpha * grad_flat.transpose();
  const Eigen::VectorXd grad_alpha = basis * grad_flat;
  const Eigen::VectorXd grad_logits = SoftmaxBackward(alpha, grad_alpha);

  auto grad_head = grads->at("head.weight").matrix();
  grad_head.leftCols(df) += grad_logits * features.transpose();
  grad_head.rightCols(cfg.latent_dim) += grad_logits * z.transpose();
  grads->at("head.bias").values() += grad_logits;
  const Eigen::VectorXd grad_features = head.leftCols(df).transpose() * grad_logits;
  const Eigen::VectorXd grad_z =
      head.rightCols(cfg.latent_dim).transpose() * grad_logits;

  const LatentGaussian kl_grad = KlGradient(latent);
  const double kl_scale = scale * cfg.kl_weight;
  const Eigen::VectorXd grad_mu = grad_z + kl_scale * kl_grad.mu;
  Eigen::VectorXd grad_log_var =
      grad_z.cwiseProduct(eps).cwiseProduct(0.5 * sigma) +
      kl_scale * kl_grad.log_var;
  grad_log_var = (raw_log_var.array().abs() < kLogVarLimit)
                     .select(grad_log_var, 0.0);

  grads->at("ez.mu.weight").matrix() += grad_mu * hidden.transpose();
  grads->at("ez.mu.bias").values() += grad_mu;
  grads->at("ez.logvar.weight").matrix() += grad_log_var * hidden.transpose();
  grads->at("ez.logvar.bias").values() += grad_log_var;
  const Eigen::VectorXd grad_hidden =
      params.at("ez.mu.weight").matrix().transpose() * grad_mu +
      params.at("ez.logvar.weight").matrix().transpose() * grad_log_var;

  latent_encoder.Backward(params, latent_cache, grad_hidden, *grads);
  real_encoder.Backward(params, real_cache, grad_features, *grads);
  return terms;
}

}  // namespace

void SycoConfig::Validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(latent_dim >= 1, "d_z must be >= 1");
  require(num_basis >= 2, "number of basis LUTs must be >= 2");
  require(feature_dim >= 1, "feature dimension must be >= 1");
  require(lut_size >= 2, "LUT size must be >= 2");
  require(resolution >= 1, "resolution must be >= 1");
  require(learning_rate >= 0.0, "learning rate must be >= 0");
  require(kl_weight >= 0.0, "KL weight must be >= 0");
  require(batch_size >= 1, "batch size must be >= 1");
  require(epochs >= 0, "epochs must be >= 0");
}

ConvEncoder SycoNet::real_encoder() const {
  return ConvEncoder("er", EncoderFor(config, 4));
}

ConvEncoder SycoNet::latent_encoder() const {
  return ConvEncoder("ez", EncoderFor(config, 7));
}

std::vector<Lut3D> SycoNet::BasisLuts() const {
  const auto basis = params.at("basis").matrix();
  std::vector<Lut3D> luts;
  for (Eigen::Index l = 0; l < basis.rows(); ++l) {
    Lut3D lut(config.lut_size);
    lut.flat() = basis.row(l).transpose();
    luts.push_back(std::move(lut));
  }
  return luts;
}

Lut3D SycoNet::CombinedLut(const Eigen::VectorXd& alpha) const {
  const auto basis = params.at("basis").matrix();
  if (alpha.size() != basis.rows()) {
    throw std::invalid_argument("coefficient count does not match basis");
  }
  Lut3D lut(config.lut_size);
  lut.flat() = basis.transpose() * alpha;
  return lut;
}

SycoNet InitSycoNet(const SycoConfig& config, const BasisSet& basis) {
  config.Validate();
  if (basis.size() != config.num_basis) {
    throw std::invalid_argument("basis has " + std::to_string(basis.size()) +
                                " LUTs, config expects " +
                                std::to_string(config.num_basis));
  }
  SycoNet net;
  net.config = config;
  CounterRng rng(config.seed, kTrainStream + 1);
  net.real_encoder().AddParameters(net.params, rng);
  net.latent_encoder().AddParameters(net.params, rng);
  const int df = config.feature_dim, dz = config.latent_dim;
  InitGlorotUniform(net.params.Add("ez.mu.weight", {dz, df}), df, dz, rng);
  net.params.Add("ez.mu.bias", {dz});
  InitGlorotUniform(net.params.Add("ez.logvar.weight", {dz, df}), df, dz, rng);
  net.params.Add("ez.logvar.bias", {dz});
  InitGlorotUniform(net.params.Add("head.weight", {config.num_basis, df + dz}),
                    df + dz, config.num_basis, rng);
  net.params.Add("head.bias", {config.num_basis});
  const int s = config.lut_size;
  Tensor& entries = net.params.Add("basis", {config.num_basis, s, s, s, 3});
  for (int l = 0; l < config.num_basis; ++l) {
    if (basis.luts[l].size() != s) {
      throw std::invalid_argument("basis LUT size does not match config");
    }
    entries.matrix().row(l) = basis.luts[l].flat().transpose();
  }
  return net;
}

Checkpoint ToCheckpoint(const SycoNet& net) {
  Checkpoint ckpt;
  ckpt.manifest = {{"kind", "syconet"},
                   {"d_z", net.config.latent_dim},
                   {"num_basis", net.config.num_basis},
                   {"d_f", net.config.feature_dim},
                   {"lut_size", net.config.lut_size},
                   {"resolution", net.config.resolution}};
  ckpt.params = net.params;
  return ckpt;
}

SycoNet SycoNetFromCheckpoint(const Checkpoint& checkpoint) {
  const auto& m = checkpoint.manifest;
  if (m.value("kind", "") != "syconet") {
    throw std::invalid_argument("checkpoint is not a syconet checkpoint");
  }
  SycoConfig config;
  try {
    config.latent_dim = m.at("d_z").get<int>();
    config.num_basis = m.at("num_basis").get<int>();
    config.feature_dim = m.at("d_f").get<int>();
    config.lut_size = m.at("lut_size").get<int>();
    config.resolution = m.at("resolution").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad syconet manifest: ") + e.what());
  }
  // Rebuild the expected layout and require an exact match.
  BasisSet identity;
  identity.luts.assign(config.num_basis, IdentityLut(config.lut_size));
  SycoNet net = InitSycoNet(config, identity);
  if (!net.params.SameLayout(checkpoint.params)) {
    throw std::invalid_argument("checkpoint parameter blocks do not match its manifest");
  }
  net.params = checkpoint.params;
  return net;
}

void ExportBasis(const SycoNet& net, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto luts = net.BasisLuts();
  for (std::size_t l = 0; l < luts.size(); ++l) {
    char name[32];
    std::snprintf(name, sizeof(name), "basis_%02zu.cube", l);
    SaveCube((std::filesystem::path(dir) / name).string(), luts[l]);
  }
}

Eigen::VectorXd RealFeatures(const SycoNet& net, const Image& real,
                             const Mask& mask) {
  return net.real_encoder().Forward(
      net.params, ImageMaskInput(real, mask, net.config.resolution));
}

Eigen::VectorXd Coefficients(const SycoNet& net,
                             const Eigen::VectorXd& features,
                             const Eigen::VectorXd& latent) {
  return FcSoftmaxHead(net.params.at("head.weight"), net.params.at("head.bias"),
                       features, latent);
}

GenerateResult Generate(const SycoNet& net, const Image& real, const Mask& mask,
                        const Eigen::VectorXd& z_g) {
  if (z_g.size() != net.config.latent_dim) {
    throw std::invalid_argument("z_g must have length d_z = " +
                                std::to_string(net.config.latent_dim));
  }
  GenerateResult result;
  result.alpha = Coefficients(net, RealFeatures(net, real, mask), z_g);
  result.lut = net.CombinedLut(result.alpha);
  result.composite = AssembleComposite(result.lut, real, mask);
  return result;
}

ReconstructResult Reconstruct(const SycoNet& net, const Image& real,
                              const Image& composite, const Mask& mask,
                              const Eigen::VectorXd& eps) {
  if (eps.size() != net.config.latent_dim) {
    throw std::invalid_argument("eps must have length d_z = " +
                                std::to_string(net.config.latent_dim));
  }
  ReconstructResult result;
  const Eigen::VectorXd hidden = net.latent_encoder().Forward(
      net.params, LatentInput(net.config, composite, real, mask));
  result.latent = LatentHeads(net.params, hidden, nullptr);
  result.z = Reparameterize(result.latent, eps);
  result.alpha = Coefficients(net, RealFeatures(net, real, mask), result.z);
  result.composite = AssembleComposite(net.CombinedLut(result.alpha), real, mask);
  return result;
}

SycoLossTerms SycoLoss(const ReconstructResult& reconstruction,
                       const Image& composite, double kl_weight) {
  SycoLossTerms terms;
  terms.reconstruction = L1Loss(reconstruction.composite, composite);
  terms.kl = KlToStandardNormal(reconstruction.latent);
  terms.total = kl_weight * terms.kl + terms.reconstruction;
  return terms;
}

SycoSample PrepareSample(const SycoNet& net, const TrainPair& pair) {
  ValidatePair(pair);
  SycoSample s;
  s.real = pair.real;
  s.composite = pair.composite;
  s.mask = pair.mask;
  s.real_input = ImageMaskInput(pair.real, pair.mask, net.config.resolution);
  s.latent_input = LatentInput(net.config, pair.composite, pair.real, pair.mask);
  for (Eigen::Index p = 0; p < pair.real.num_pixels(); ++p) {
    if (!pair.mask[p]) continue;
    s.foreground.push_back(p);
    s.weights.push_back(LookupWeights(net.config.lut_size, pair.real.pixel(p)));
  }
  return s;
}

SycoLossTerms SycoBatchLoss(const SycoNet& net,
                            std::span<const SycoSample> batch,
                            std::span<const Eigen::VectorXd> eps,
                            ParameterSet* grads) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  if (eps.size() != batch.size()) {
    throw std::invalid_argument("need one eps vector per sample");
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  SycoLossTerms mean;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const SycoLossTerms t = SampleLoss(net, batch[i], eps[i], scale, grads);
    mean.total += scale * t.total;
    mean.reconstruction += scale * t.reconstruction;
    mean.kl += scale * t.kl;
  }
  return mean;
}

SycoTrainResult TrainSycoNet(std::span<const TrainPair> dataset,
                             const SycoNet& init,
                             const SycoProgressFn& progress) {
  if (dataset.empty()) {
    throw std::invalid_argument("cannot train on an empty dataset");
  }
  const SycoConfig& cfg = init.config;
  cfg.Validate();
  SycoTrainResult result{init, {}};
  SycoNet& net = result.net;

  std::vector<SycoSample> samples;
  samples.reserve(dataset.size());
  for (const TrainPair& pair : dataset) {
    TrainPair small;
    small.real = ResizeBilinear(pair.real, cfg.resolution, cfg.resolution);
    small.composite = ResizeBilinear(pair.composite, cfg.resolution, cfg.resolution);
    small.mask = ResizeNearest(pair.mask, cfg.resolution, cfg.resolution);
    small.id = pair.id;
    samples.push_back(PrepareSample(net, small));
  }

  AdamState adam(net.params, AdamOptions{.learning_rate = cfg.learning_rate});
  ParameterSet grads = net.params.ZerosLike();
  const CounterRng base(cfg.seed, kTrainStream);
  const int n = static_cast<int>(samples.size());
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    CounterRng order_rng = base.Derive(2 * static_cast<uint64_t>(epoch));
    CounterRng eps_rng = base.Derive(2 * static_cast<uint64_t>(epoch) + 1);
    const std::vector<int> order = ShuffledIndices(n, order_rng);
    std::vector<SycoSample> shuffled;
    shuffled.reserve(n);
    for (int i : order) shuffled.push_back(std::move(samples[i]));
    samples = std::move(shuffled);
    SycoEpochStats stats;
    stats.epoch = epoch + 1;
    for (int start = 0; start < n; start += cfg.batch_size) {
      const int end = std::min(n, start + cfg.batch_size);
      const std::span<const SycoSample> batch(samples.data() + start, end - start);
      std::vector<Eigen::VectorXd> eps;
      for (int i = start; i < end; ++i) {
        eps.push_back(eps_rng.NormalVector(cfg.latent_dim));
      }
      grads.SetZero();
      const SycoLossTerms t = SycoBatchLoss(net, batch, eps, &grads);
      AdamStep(net.params, grads, adam);
      const double weight = static_cast<double>(end - start) / n;
      stats.total += weight * t.total;
      stats.reconstruction += weight * t.reconstruction;
      stats.kl += weight * t.kl;
    }
    if (!net.params.AllFinite()) {
      throw std::runtime_error("non-finite parameters after epoch " +
                               std::to_string(epoch + 1));
    }
    result.history.push_back(stats);
    if (progress) progress(stats);
  }
  return result;
}

std::vector<Image> SampleAugmentations(const SycoNet& net, const Image& real,
                                       const Mask& mask, int count,
                                       uint64_t seed) {
  if (count < 1) throw std::invalid_argument("augmentation count must be >= 1");
  const Eigen::VectorXd features = RealFeatures(net, real, mask);
  CounterRng rng(seed);
  std::vector<Image> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const Eigen::VectorXd z = rng.NormalVector(net.config.latent_dim);
    out.push_back(
        AssembleComposite(net.CombinedLut(Coefficients(net, features, z)), real, mask));
  }
  return out;
}

uint64_t ParameterHash(const ParameterSet& params) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash ^= bytes[i];
      hash *= 0x100000001b3ULL;
    }
  };
  for (const auto& [name, tensor] : params.blocks()) {
    mix(name.data(), name.size());
    mix(tensor.values().data(), sizeof(double) * tensor.size());
  }
  return hash;
}

}  // namespace lutaug
