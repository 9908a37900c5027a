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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// non-zero when any criterion fails.
//
// Usage: acceptance_test <path to the lutaug binary> [scratch dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lutaug/basis.h"
#include "lutaug/data.h"
#include "lutaug/grad_check.h"
#include "lutaug/harmonize.h"
#include "lutaug/lut.h"
#include "lutaug/metrics.h"
#include "lutaug/nn.h"
#include "lutaug/rng.h"
#include "lutaug/syconet.h"
#include "oracles.h"

namespace lutaug {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), format, v);
  return buffer;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Lut3D RandomLut(int size, std::mt19937_64& engine, double lo = -0.2, double hi = 1.2) {
  std::uniform_real_distribution<double> u(lo, hi);
  Lut3D lut(size);
  for (Eigen::Index i = 0; i < lut.flat().size(); ++i) lut.flat()[i] = u(engine);
  return lut;
}

// ------------------------------------------------------------------ 1

Outcome LutExactness() {
  std::mt19937_64 engine(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  bool lattice_exact = true;
  for (int size : {2, 5, 17, 33}) {
    const Lut3D lut = RandomLut(size, engine);
    for (int k = 0; k < size; ++k) {
      for (int j = 0; j < size; ++j) {
        for (int i = 0; i < size; ++i) {
          const RgbColor c(double(i) / (size - 1), double(j) / (size - 1),
                           double(k) / (size - 1));
          lattice_exact = lattice_exact && Lookup(lut, c) == lut.entry(i, j, k);
        }
      }
    }
  }

  double identity_err = 0.0;
  const Lut3D identity = IdentityLut(17);
  for (int n = 0; n < 1000; ++n) {
    const RgbColor c(u(engine), u(engine), u(engine));
    identity_err = std::max(identity_err, (Lookup(identity, c) - c).cwiseAbs().maxCoeff());
  }

  double linear_err = 0.0, oracle_err = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const int count = 1 + static_cast<int>(engine() % 6);
    std::vector<Lut3D> basis;
    for (int l = 0; l < count; ++l) basis.push_back(RandomLut(9, engine));
    Eigen::VectorXd alpha(count);
    for (int l = 0; l < count; ++l) alpha[l] = -std::log(1.0 - u(engine));
    alpha /= alpha.sum();
    const RgbColor c(u(engine), u(engine), u(engine));
    RgbColor mixed = RgbColor::Zero();
    for (int l = 0; l < count; ++l) mixed += alpha[l] * Lookup(basis[l], c);
    const RgbColor combined = Lookup(Combine(basis, alpha), c);
    linear_err = std::max(linear_err, (combined - mixed).cwiseAbs().maxCoeff());
    oracle_err = std::max(
        oracle_err, (Lookup(basis[0], c) - oracle::Trilinear(basis[0], c)).cwiseAbs().maxCoeff());
  }
  return {lattice_exact && identity_err <= 1e-12 && linear_err <= 1e-10 && oracle_err <= 1e-12,
          std::string("lattice bit-exact=") + (lattice_exact ? "yes" : "no") +
              Fmt(" identity max err=%.2e", identity_err) +
              Fmt(" linearity max err=%.2e", linear_err) +
              Fmt(" vs dense oracle=%.2e", oracle_err)};
}

// ------------------------------------------------------------------ 2

Outcome GradientSuite() {
  const std::vector<TrainPair> pairs = MakeToyDataset(
      2, 16, 16, 5, [](int, CounterRng& rng) { return RandomAffineLut(rng, 0.3); });
  SycoConfig config;
  config.latent_dim = 4;
  config.num_basis = 4;
  config.feature_dim = 8;
  config.lut_size = 5;
  config.resolution = 16;
  config.seed = 5;
  const BasisSet basis = InitBasis(GenerateSeedCollection(12, config.lut_size, 5),
                                   config.num_basis, KMeansConfig{.seed = 5});
  SycoNet net = InitSycoNet(config, basis);
  std::vector<SycoSample> samples;
  for (const TrainPair& p : pairs) samples.push_back(PrepareSample(net, p));
  CounterRng eps_rng(5, 99);
  std::vector<Eigen::VectorXd> eps;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    eps.push_back(eps_rng.NormalVector(config.latent_dim));
  }
  ParameterSet grads = net.params.ZerosLike();
  SycoBatchLoss(net, samples, eps, &grads);
  GradCheckOptions options;
  options.step = 1e-5;
  const GradCheckReport report = GradCheck(
      [&](const ParameterSet& params) {
        SycoNet probe = net;
        probe.params = params;
        return SycoBatchLoss(probe, samples, eps, nullptr).total;
      },
      net.params, grads, options);
  std::string worst;
  double worst_err = -1.0;
  Eigen::Index checked = 0;
  for (const BlockGradError& b : report.blocks) {
    checked += b.checked;
    if (b.max_relative_error > worst_err) {
      worst_err = b.max_relative_error;
      worst = b.name;
    }
  }
  const bool all_blocks =
      static_cast<Eigen::Index>(checked) == net.params.TotalSize() &&
      report.blocks.size() == net.params.blocks().size();
  return {report.Passed(1e-4) && all_blocks,
          std::to_string(report.blocks.size()) + " blocks, " + std::to_string(checked) +
              " entries, max rel err " + Fmt("%.2e", worst_err) + " (" + worst + ")"};
}

// ------------------------------------------------------------------ 3

Outcome KlCorrectness() {
  std::mt19937_64 engine(303);
  std::uniform_real_distribution<double> mu_dist(-1.5, 1.5), lv_dist(-1.5, 1.5);
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    LatentGaussian g;
    g.mu.resize(8);
    g.log_var.resize(8);
    for (int d = 0; d < 8; ++d) {
      g.mu[d] = mu_dist(engine);
      g.log_var[d] = lv_dist(engine);
    }
    const double closed = KlToStandardNormal(g);
    const double mc = oracle::MonteCarloKl(g.mu, g.log_var, 1000000, 1000 + draw);
    worst = std::max(worst, std::abs(closed - mc) / mc);
  }
  return {worst < 0.01, "20 draws, max relative gap " + Fmt("%.3e", worst)};
}

// ------------------------------------------------------------------ 4, 5

struct ToyTraining {
  std::vector<TrainPair> pairs;
  SycoTrainResult result;
};

SycoConfig ReconstructionConfig() {
  SycoConfig config;  // d_z 32, L 20, d_f 64, lut 17, resolution 64
  config.epochs = 200;
  config.learning_rate = 1e-3;
  config.batch_size = 4;
  config.seed = 11;
  return config;
}

ToyTraining TrainReconstruction() {
  const SycoConfig config = ReconstructionConfig();
  CounterRng lut_rng(config.seed, 7);
  const Lut3D fixed = RandomAffineLut(lut_rng, 0.3);
  ToyTraining t;
  t.pairs = MakeToyDataset(16, 64, 64, config.seed,
                           [&](int, CounterRng&) { return fixed; });
  const BasisSet basis =
      InitBasis(GenerateSeedCollection(100, config.lut_size, config.seed),
                config.num_basis, KMeansConfig{.seed = config.seed});
  t.result = TrainSycoNet(t.pairs, InitSycoNet(config, basis));
  return t;
}

Outcome Reconstruction(const ToyTraining& first, const ToyTraining& second,
                       double seconds) {
  const auto& h = first.result.history;
  const double start = h.front().reconstruction, end = h.back().reconstruction;
  bool same = ParameterHash(first.result.net.params) ==
                  ParameterHash(second.result.net.params) &&
              h.size() == second.result.history.size();
  for (std::size_t i = 0; same && i < h.size(); ++i) {
    same = h[i].total == second.result.history[i].total;
  }
  return {end < 0.2 * start && same && seconds < 600.0,
          Fmt("L_rec epoch 1 %.5f", start) + Fmt(" -> epoch 200 %.5f", end) +
              Fmt(" (%.1f%%)", 100.0 * end / start) +
              (same ? ", rerun identical" : ", rerun DIFFERS") +
              Fmt(", %.0fs for both runs", seconds)};
}

double DatasetDiversity(const SycoNet& net, const std::vector<TrainPair>& pairs) {
  double sum = 0.0;
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    const std::vector<Image> samples =
        SampleAugmentations(net, pairs[n].real, pairs[n].mask, 10, 500 + n);
    sum += Diversity(samples, pairs[n].mask);
  }
  return sum / pairs.size();
}

Outcome DiversitySignature(const ToyTraining& t) {
  const double trained = DatasetDiversity(t.result.net, t.pairs);
  SycoNet collapsed = t.result.net;
  collapsed.params.at("head.weight").values().setZero();
  Eigen::VectorXd& bias = collapsed.params.at("head.bias").values();
  bias.setZero();
  bias[3] = 1000.0;
  const double flat = DatasetDiversity(collapsed, t.pairs);
  return {trained > 0.0 && flat < 1e-6,
          Fmt("Div trained %.4g", trained) + Fmt(", constant one-hot head %.3g", flat)};
}

// ------------------------------------------------------------------ 6, 7

struct DomainSetup {
  std::vector<TrainPair> train;
  std::vector<TrainPair> held_out;
  SycoNet syconet;
};

// Every composite shares one gamma shift; a small affine jitter varies per pair.
constexpr double kDomainJitter = 0.1;

Lut3D DomainShift(uint64_t seed) {
  CounterRng rng(seed, 7);
  ToneCurveParams gamma;
  for (int c = 0; c < 3; ++c) {
    gamma.gamma[c] = std::exp(rng.Uniform(std::log(0.6), std::log(1.6)));
  }
  return ToneCurveLut(9, gamma);
}

DomainSetup MakeDomain(uint64_t seed) {
  const Lut3D shift = DomainShift(seed);
  const auto perturb = [&shift](int, CounterRng& rng) {
    const Lut3D jitter = RandomAffineLut(rng, kDomainJitter);
    Lut3D lut = shift;
    for (Eigen::Index n = 0; n < lut.num_entries(); ++n) {
      lut.entries().row(n) = Lookup(jitter, RgbColor(shift.entries().row(n).transpose())).transpose();
    }
    return lut;
  };
  DomainSetup d;
  d.train = MakeToyDataset(8, 32, 32, seed, perturb);
  d.held_out = MakeToyDataset(32, 32, 32, seed + 7919, perturb);
  SycoConfig config;
  config.latent_dim = 8;
  config.num_basis = 12;
  config.feature_dim = 32;
  config.lut_size = 9;
  config.resolution = 32;
  config.learning_rate = 1e-3;
  config.epochs = 150;
  config.batch_size = 4;
  // Mean-L1 objective rescaled to the summed-L1 balance at 32x32.
  config.kl_weight = 1.0 / (3.0 * 32 * 32);
  config.seed = seed;
  const BasisSet basis =
      InitBasis(GenerateSeedCollection(60, config.lut_size, seed), config.num_basis,
                KMeansConfig{.seed = seed});
  d.syconet = TrainSycoNet(d.train, InitSycoNet(config, basis)).net;
  return d;
}

AugTrainConfig HarmonizerTraining(AugMode mode, uint64_t seed) {
  AugTrainConfig c;
  c.mode = mode;
  c.iterations = 60;
  c.batch_size = 4;
  c.learning_rate = 1e-3;
  c.seed = seed;
  return c;
}

double HeldOutFmse(const DomainSetup& d, AugMode mode, uint64_t seed,
                   int static_multiplier = 0, std::size_t* materialized = nullptr) {
  ToyHarmonizer model(ToyHarmonizerConfig{.resolution = 32, .feature_dim = 32,
                                          .seed = seed});
  AugTrainConfig config = HarmonizerTraining(mode, seed);
  if (static_multiplier > 0) config.static_multiplier = static_multiplier;
  const AugTrainResult r = TrainHarmonizer(
      model, mode == AugMode::kNone ? nullptr : &d.syconet, d.train, config);
  if (materialized != nullptr) *materialized = r.augmented.size();
  return EvaluateHarmonizer(model, d.held_out).mean_fmse;
}

Outcome AugmentationBenefit(std::vector<DomainSetup>& domains, double setup_seconds) {
  const auto start = std::chrono::steady_clock::now();
  int dynamic_wins = 0, aug_only_not_better = 0;
  std::string rows;
  for (std::size_t s = 0; s < domains.size(); ++s) {
    const uint64_t seed = 100 + s;
    const double none = HeldOutFmse(domains[s], AugMode::kNone, seed);
    const double dynamic = HeldOutFmse(domains[s], AugMode::kDynamic, seed);
    const double aug_only = HeldOutFmse(domains[s], AugMode::kAugmentedOnly, seed);
    dynamic_wins += dynamic < none;
    aug_only_not_better += !(aug_only < dynamic);
    rows += Fmt(" [none %.1f", none) + Fmt(" dyn %.1f", dynamic) +
            Fmt(" aug-only %.1f]", aug_only);
  }
  const double seconds = setup_seconds + Seconds(start);
  return {dynamic_wins >= 4 && aug_only_not_better >= 4 && seconds < 1200.0,
          "dynamic beats none " + std::to_string(dynamic_wins) +
              "/5, aug-only not better than dynamic " +
              std::to_string(aug_only_not_better) + "/5;" + rows +
              Fmt(" %.0fs", seconds)};
}

Outcome StaticSweep(const DomainSetup& d) {
  bool sizes_ok = true;
  std::string curve;
  for (int a : {2, 4, 6, 8, 10}) {
    std::size_t materialized = 0;
    const double fmse = HeldOutFmse(d, AugMode::kStatic, 100, a, &materialized);
    sizes_ok = sizes_ok && materialized == a * d.train.size() && std::isfinite(fmse);
    curve += " a=" + std::to_string(a) + ":" + std::to_string(materialized) + " pairs" +
             Fmt(" fMSE %.1f", fmse);
  }
  return {sizes_ok, "fMSE vs a:" + curve};
}

// ------------------------------------------------------------------ 8

Outcome MetricsOracles() {
  std::mt19937_64 engine(808);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, full_gap = 0.0;
  for (int n = 0; n < 20; ++n) {
    Image a(32, 32), b(32, 32);
    Mask mask(32, 32), full(32, 32, true);
    for (Eigen::Index p = 0; p < a.num_pixels(); ++p) {
      for (int c = 0; c < 3; ++c) {
        a.pixels()(p, c) = u(engine);
        b.pixels()(p, c) = std::clamp(a.pixels()(p, c) + 0.3 * (u(engine) - 0.5), 0.0, 1.0);
      }
      mask.values()[p] = u(engine) < 0.4;
    }
    mask.Set(0, 0, true);
    worst = std::max({worst, std::abs(Mse(a, b) - oracle::LoopMse(a, b)),
                      std::abs(Fmse(a, b, mask) - oracle::LoopFmse(a, b, mask)),
                      std::abs(Fssim(a, b, mask) - oracle::DirectFssim(a, b, mask)),
                      std::abs(Ssim(a, b) - oracle::DirectSsim(a, b))});
    full_gap = std::max(full_gap, std::abs(Fmse(a, b, full) - Mse(a, b)));
  }
  return {worst <= 1e-6 && full_gap <= 1e-12,
          Fmt("max oracle gap %.2e", worst) + Fmt(", full-mask fMSE vs MSE %.2e", full_gap)};
}

// ------------------------------------------------------------------ 9

Outcome BradleyTerry() {
  PairwiseWins two(2, 2);
  two << 0, 3, 1, 0;
  const BtResult r = BtRank(two);
  const double oracle_score = oracle::GridSearchTwoModelScore(3, 1);
  const double gap = std::max(std::abs(r.scores[0] - oracle_score),
                              std::abs(r.scores[1] + oracle_score));

  std::mt19937_64 engine(909);
  std::uniform_int_distribution<int> count(1, 9);
  PairwiseWins many = PairwiseWins::Zero(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (i != j) many(i, j) = count(engine);
    }
  }
  const BtResult m = BtRank(many);
  bool monotone = m.log_likelihood.size() >= 2;
  for (std::size_t i = 1; i < m.log_likelihood.size(); ++i) {
    monotone = monotone && m.log_likelihood[i] >= m.log_likelihood[i - 1] -
                                                     1e-12 * std::abs(m.log_likelihood[i]);
  }

  PairwiseWins symmetric = PairwiseWins::Constant(4, 4, 5.0);
  symmetric.diagonal().setZero();
  const double sym = BtRank(symmetric).scores.cwiseAbs().maxCoeff();
  return {gap <= 1e-3 && monotone && sym <= 1e-12,
          Fmt("3-1 scores %+.4f", r.scores[0]) + Fmt("/%+.4f", r.scores[1]) +
              Fmt(" (oracle gap %.1e)", gap) + ", log-likelihood " +
              (monotone ? "monotone" : "NOT monotone") + " over " +
              std::to_string(m.log_likelihood.size()) + " iterates" +
              Fmt(", symmetric max |score| %.1e", sym)};
}

// ------------------------------------------------------------------ 10

Outcome KMeansOracle() {
  std::mt19937_64 engine(1010);
  int optimal = 0;
  const int instances = 50;
  double worst_gap = 0.0;
  for (int n = 0; n < instances; ++n) {
    LutCollection collection;
    for (int i = 0; i < 6; ++i) {
      collection.luts.push_back(RandomLut(2, engine, 0.0, 1.0));
      collection.provenance.push_back("random");
    }
    KMeansResult details;
    KMeansCluster(collection, 2, KMeansConfig{.seed = static_cast<uint64_t>(n)}, &details);
    Eigen::MatrixXd points(6, 24);
    for (int i = 0; i < 6; ++i) points.row(i) = collection.luts[i].flat().transpose();
    const double best = oracle::BestTwoPartitionSse(points);
    const double got = oracle::PartitionSse(points, details.assignment, 2);
    const double gap = got - best;
    worst_gap = std::max(worst_gap, gap);
    optimal += gap <= 1e-12 * std::max(1.0, best);
  }
  return {optimal == instances, std::to_string(optimal) + "/" + std::to_string(instances) +
                                    " instances at the brute-force optimum" +
                                    Fmt(", worst excess SSE %.2e", worst_gap)};
}

// ------------------------------------------------------------------ 11

int Run(const std::string& command) { return std::system(command.c_str()); }

std::string ReadBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome CliDeterminism(const std::string& binary, const fs::path& scratch) {
  // Each run builds the same pipeline in its own directory; relative paths
  // keep every artifact location-independent.
  const std::vector<std::string> steps = {
      "--seed 3 make-toy-data --count 4 --height 24 --width 24 --out-dir toy",
      "--seed 3 make-toy-data --count 2 --height 24 --width 24 --shared-lut "
      "--out-dir toy_shared",
      "--seed 7 cluster-luts --num-basis 6 --collection-size 20 --lut-size 5 "
      "--out-dir basis",
      "--seed 3 train-syconet --manifest toy/manifest.jsonl --out syco.ckpt "
      "--loss-csv syco_loss.csv --epochs 3 --d-z 4 --num-basis 4 --feature-dim 8 "
      "--lut-size 5 --resolution 16 --collection-size 12 --export-basis-dir syco_basis",
      "--seed 4 train-syconet --manifest toy/manifest.jsonl --out syco_ft.ckpt "
      "--init-from syco.ckpt --epochs 2 --loss-csv syco_ft_loss.csv",
      "--seed 5 augment --syconet-ckpt syco.ckpt --manifest toy/manifest.jsonl "
      "--out-dir aug_k --k 3",
      "--seed 5 augment --syconet-ckpt syco.ckpt --manifest toy/manifest.jsonl "
      "--out-dir aug_static --static --a 2",
      "--seed 6 train-harmonizer --manifest toy/manifest.jsonl --aug-mode dynamic "
      "--syconet-ckpt syco.ckpt --iterations 3 --resolution 16 --feature-dim 8 "
      "--out har.ckpt --loss-csv har_loss.csv --eval-manifest toy/manifest.jsonl "
      "--eval-json har_eval.json",
      "--seed 6 train-harmonizer --manifest toy/manifest.jsonl --syconet-ckpt syco.ckpt "
      "--sweep-a 1,2 --sweep-csv sweep.csv --iterations 2 --resolution 16 "
      "--feature-dim 8",
      "evaluate --manifest toy/manifest.jsonl --harmonizer-ckpt har.ckpt "
      "--out-csv eval.csv --out-json eval.json",
      "bt-rank --wins ../wins.csv --out bt.json",
      "--seed 2 gradcheck --report gradcheck.json",
  };
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  {
    std::ofstream wins(scratch / "wins.csv");
    wins << "winner,loser,count\nA,B,3\nB,A,1\nB,C,2\nC,B,2\nC,A,1\nA,C,4\n";
  }
  for (const char* run : {"run1", "run2"}) {
    fs::create_directories(scratch / run);
    for (const std::string& step : steps) {
      const std::string command = "cd '" + (scratch / run).string() + "' && '" + binary +
                                  "' " + step + " 2>/dev/null";
      if (Run(command) != 0) return {false, "command failed: lutaug " + step};
    }
  }
  int files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(scratch / "run1")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), scratch / "run1");
    const fs::path other = scratch / "run2" / rel;
    if (!fs::exists(other) || ReadBytes(entry.path()) != ReadBytes(other)) {
      return {false, "differs between reruns: " + rel.string()};
    }
    ++files;
  }
  std::size_t files2 = 0;
  for (const auto& entry : fs::recursive_directory_iterator(scratch / "run2")) {
    files2 += entry.is_regular_file();
  }
  return {files > 0 && files2 == static_cast<std::size_t>(files),
          std::to_string(steps.size()) + " commands, " + std::to_string(files) +
              " output files byte-identical"};
}

// ------------------------------------------------------------------ main

class Reporter {
 public:
  void Record(int id, const std::string& title, const Outcome& outcome, double seconds) {
    std::printf("%s criterion %2d: %s -- %s [%.1fs]\n", outcome.pass ? "PASS" : "FAIL", id,
                title.c_str(), outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    failures_ += !outcome.pass;
  }

  template <typename Fn>
  void Time(int id, const std::string& title, Fn&& fn,
            std::optional<double> limit = std::nullopt) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = Seconds(start);
    if (limit && seconds >= *limit) {
      outcome.pass = false;
      outcome.detail += Fmt(" (over the %.0fs budget)", *limit);
    }
    Record(id, title, outcome, seconds);
  }

  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

int Main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <lutaug binary> [scratch dir]\n", argv[0]);
    return 2;
  }
  const std::string binary = fs::absolute(argv[1]).string();
  const fs::path scratch =
      argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "lutaug_acceptance";

  Reporter r;
  r.Time(1, "LUT engine exactness", LutExactness, 5.0);
  r.Time(2, "gradient suite", GradientSuite, 120.0);
  r.Time(3, "KL closed form vs Monte Carlo", KlCorrectness);

  std::optional<ToyTraining> trained;
  r.Time(4, "toy-scale reconstruction", [&] {
    const auto start = std::chrono::steady_clock::now();
    ToyTraining first = TrainReconstruction();
    const ToyTraining second = TrainReconstruction();
    const Outcome o = Reconstruction(first, second, Seconds(start));
    trained = std::move(first);
    return o;
  });
  r.Time(5, "diversity signature", [&] {
    if (!trained) return Outcome{false, "needs the criterion 4 model"};
    return DiversitySignature(*trained);
  });

  std::vector<DomainSetup> domains;
  r.Time(6, "augmentation benefit direction", [&] {
    const auto start = std::chrono::steady_clock::now();
    for (uint64_t s = 0; s < 5; ++s) domains.push_back(MakeDomain(100 + s));
    return AugmentationBenefit(domains, Seconds(start));
  });
  r.Time(7, "static sweep", [&] {
    if (domains.empty()) return Outcome{false, "needs the criterion 6 domain"};
    return StaticSweep(domains.front());
  });
  r.Time(8, "metrics oracles", MetricsOracles);
  r.Time(9, "Bradley-Terry", BradleyTerry);
  r.Time(10, "k-means oracle", KMeansOracle);
  r.Time(11, "CLI determinism", [&] { return CliDeterminism(binary, scratch); });

  std::printf("%d of 11 criteria failed\n", r.failures());
  return r.failures() == 0 ? 0 : 1;
}

}  // namespace
}  // namespace lutaug

int main(int argc, char** argv) { return lutaug::Main(argc, argv); }
