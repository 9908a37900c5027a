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

#include "cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lutaug/basis.h"
#include "lutaug/checkpoint.h"
#include "lutaug/data.h"
#include "lutaug/errors.h"
#include "lutaug/grad_check.h"
#include "lutaug/harmonize.h"
#include "lutaug/lut.h"
#include "lutaug/metrics.h"
#include "lutaug/rng.h"
#include "lutaug/syconet.h"

namespace lutaug::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr uint64_t kAugmentStream = 0x4155474d;   // per-pair sample seeds
constexpr uint64_t kToyLutStream = 0x544f594c;    // shared toy perturbation

void WriteTextFile(const std::string& path, const std::string& text) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) throw IoError("cannot create " + parent.string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string Fmt(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", v);
  return buffer;
}

void Progress(const std::string& line) { std::cerr << line << '\n'; }

std::vector<TrainPair> LoadPairs(const std::string& manifest_path) {
  return LoadDataset(LoadManifest(manifest_path));
}

// ---------------------------------------------------------------- commands

struct GlobalFlags {
  uint64_t seed = 0;
};

struct ClusterFlags {
  int num_basis = 20;
  int collection_size = 100;
  // Falls back to --seed when unset.
  std::optional<uint64_t> collection_seed;
  int lut_size = 17;
  std::string lut_dir;
  std::string out_dir;
};

int RunClusterLuts(const GlobalFlags& g, const ClusterFlags& f) {
  if (f.num_basis < 1) throw std::invalid_argument("--num-basis must be >= 1");
  if (f.lut_dir.empty() && f.num_basis - 1 > f.collection_size) {
    throw std::invalid_argument("--num-basis " + std::to_string(f.num_basis) +
                                " needs --collection-size >= " +
                                std::to_string(f.num_basis - 1));
  }
  const LutCollection collection =
      f.lut_dir.empty()
          ? GenerateSeedCollection(f.collection_size, f.lut_size,
                                   f.collection_seed.value_or(g.seed))
          : LoadCubeDirectory(f.lut_dir);
  Progress("clustering " + std::to_string(collection.size()) + " LUTs into " +
           std::to_string(f.num_basis) + " basis LUTs");
  KMeansResult details;
  const BasisSet basis =
      InitBasis(collection, f.num_basis, KMeansConfig{.seed = g.seed}, &details);
  fs::create_directories(f.out_dir);
  json files = json::array();
  for (int l = 0; l < basis.size(); ++l) {
    char name[32];
    std::snprintf(name, sizeof(name), "basis_%02d.cube", l);
    SaveCube((fs::path(f.out_dir) / name).string(), basis.luts[l],
             l == 0 ? "identity" : "cluster center " + std::to_string(l - 1));
    files.push_back(name);
  }
  json summary = {{"num_basis", basis.size()},
                  {"collection_size", collection.size()},
                  {"lut_size", collection.luts.front().size()},
                  {"seed", g.seed},
                  {"collection_seed", f.lut_dir.empty() ? json(f.collection_seed.value_or(g.seed))
                                                        : json(nullptr)},
                  {"inertia", details.inertia},
                  {"iterations", details.iterations},
                  {"inertia_history", details.inertia_history},
                  {"files", files}};
  WriteTextFile((fs::path(f.out_dir) / "summary.json").string(), summary.dump(2) + "\n");
  return kExitOk;
}

struct TrainSycoFlags {
  std::string manifest;
  std::string out;
  std::string loss_csv;
  std::string init_from;
  std::string export_basis_dir;
  SycoConfig config;
  int collection_size = 100;
  std::optional<uint64_t> collection_seed;
  CLI::App* app = nullptr;
};

int RunTrainSyconet(const GlobalFlags& g, TrainSycoFlags& f) {
  f.config.seed = g.seed;
  SycoNet net;
  if (!f.init_from.empty()) {
    net = SycoNetFromCheckpoint(LoadCheckpoint(f.init_from));
    for (const char* shape_flag :
         {"--d-z", "--num-basis", "--feature-dim", "--lut-size", "--resolution"}) {
      if (f.app->count(shape_flag) > 0) {
        throw std::invalid_argument(std::string(shape_flag) +
                                    " cannot change the shape of --init-from");
      }
    }
    net.config.learning_rate = f.config.learning_rate;
    net.config.kl_weight = f.config.kl_weight;
    net.config.batch_size = f.config.batch_size;
    net.config.epochs = f.config.epochs;
    net.config.seed = f.config.seed;
  } else {
    f.config.Validate();
    const LutCollection collection =
        GenerateSeedCollection(f.collection_size, f.config.lut_size,
                               f.collection_seed.value_or(g.seed));
    const BasisSet basis =
        InitBasis(collection, f.config.num_basis, KMeansConfig{.seed = g.seed});
    net = InitSycoNet(f.config, basis);
  }
  net.config.Validate();
  const std::vector<TrainPair> pairs = LoadPairs(f.manifest);
  const int epochs = net.config.epochs;
  const SycoTrainResult result = TrainSycoNet(pairs, net, [&](const SycoEpochStats& s) {
    Progress("epoch " + std::to_string(s.epoch) + "/" + std::to_string(epochs) +
             " total=" + Fmt(s.total) + " rec=" + Fmt(s.reconstruction) +
             " kl=" + Fmt(s.kl));
  });
  SaveCheckpoint(f.out, ToCheckpoint(result.net));
  if (!f.loss_csv.empty()) {
    std::string csv = "epoch,total,reconstruction,kl\n";
    for (const SycoEpochStats& s : result.history) {
      csv += std::to_string(s.epoch) + "," + Fmt(s.total) + "," +
             Fmt(s.reconstruction) + "," + Fmt(s.kl) + "\n";
    }
    WriteTextFile(f.loss_csv, csv);
  }
  if (!f.export_basis_dir.empty()) ExportBasis(result.net, f.export_basis_dir);
  return kExitOk;
}

struct AugmentFlags {
  std::string syconet_ckpt;
  std::string manifest;
  std::string out_dir;
  int k = 5;
  bool is_static = false;
  int a = 2;
};

int RunAugment(const GlobalFlags& g, const AugmentFlags& f) {
  const SycoNet net = SycoNetFromCheckpoint(LoadCheckpoint(f.syconet_ckpt));
  const DatasetManifest manifest = LoadManifest(f.manifest);
  const std::vector<TrainPair> pairs = LoadDataset(manifest);
  std::vector<AugmentedPair> out;
  if (f.is_static) {
    const std::vector<TrainPair> generated =
        MaterializeStaticSet(net, pairs, f.a, g.seed);
    for (std::size_t i = 0; i < generated.size(); ++i) {
      const ManifestRecord& record = manifest.records[i / f.a];
      out.push_back({generated[i].composite, record.real_path, record.mask_path,
                     generated[i].real, generated[i].mask,
                     PathStem(record.real_path), record.domain});
    }
  } else {
    if (f.k < 1) throw std::invalid_argument("--k must be >= 1");
    const CounterRng seeds(g.seed, kAugmentStream);
    for (std::size_t n = 0; n < pairs.size(); ++n) {
      const uint64_t pair_seed = seeds.Derive(n).NextU64();
      std::vector<Image> samples =
          SampleAugmentations(net, pairs[n].real, pairs[n].mask, f.k, pair_seed);
      const ManifestRecord& record = manifest.records[n];
      for (Image& sample : samples) {
        out.push_back({std::move(sample), record.real_path, record.mask_path,
                       pairs[n].real, pairs[n].mask, PathStem(record.real_path),
                       record.domain});
      }
    }
  }
  Progress("writing " + std::to_string(out.size()) + " augmented composites");
  const DatasetManifest written = WriteAugmentedSet(out, f.out_dir);
  SaveManifest((fs::path(f.out_dir) / "manifest.jsonl").string(), written);
  return kExitOk;
}

struct TrainHarmonizerFlags {
  std::string manifest;
  std::string aug_mode = "dynamic";
  std::string syconet_ckpt;
  std::string eval_manifest;
  std::string out;
  std::string loss_csv;
  std::string eval_json;
  std::string sweep_csv;
  std::vector<int> sweep_a;
  AugTrainConfig train;
  ToyHarmonizerConfig model;
};

int RunTrainHarmonizer(const GlobalFlags& g, TrainHarmonizerFlags& f) {
  f.train.mode = ParseAugMode(f.aug_mode);
  f.train.seed = g.seed;
  f.model.seed = g.seed;
  const bool sweep = !f.sweep_a.empty();
  if (sweep) f.train.mode = AugMode::kStatic;
  f.train.Validate();
  if (f.train.mode == AugMode::kNone && !f.syconet_ckpt.empty()) {
    std::cerr << "warning: --aug-mode none ignores --syconet-ckpt\n";
  }
  if (f.train.mode != AugMode::kNone && f.syconet_ckpt.empty()) {
    throw std::invalid_argument("--aug-mode " + AugModeName(f.train.mode) +
                                " requires --syconet-ckpt");
  }
  if (sweep && f.sweep_csv.empty()) {
    throw std::invalid_argument("--sweep-a requires --sweep-csv");
  }
  if (!sweep && f.out.empty()) throw std::invalid_argument("--out is required");

  std::optional<SycoNet> syconet;
  if (f.train.mode != AugMode::kNone) {
    syconet = SycoNetFromCheckpoint(LoadCheckpoint(f.syconet_ckpt));
  }
  const std::vector<TrainPair> pairs = LoadPairs(f.manifest);
  const std::vector<TrainPair> eval_pairs =
      f.eval_manifest.empty() ? std::vector<TrainPair>{} : LoadPairs(f.eval_manifest);
  const auto progress = [&](const AugIterationStats& s) {
    Progress("iteration " + std::to_string(s.iteration) + "/" +
             std::to_string(f.train.iterations) + " L_orig=" + Fmt(s.original_loss) +
             " L_aug=" + Fmt(s.augmented_loss));
  };

  if (sweep) {
    const std::vector<TrainPair>& eval_set = eval_pairs.empty() ? pairs : eval_pairs;
    std::string csv = "a,num_augmented,mse,fmse,fssim\n";
    for (int a : f.sweep_a) {
      Progress("static sweep a=" + std::to_string(a));
      AugTrainConfig config = f.train;
      config.static_multiplier = a;
      ToyHarmonizer model(f.model);
      const AugTrainResult result =
          TrainHarmonizer(model, &*syconet, pairs, config, progress);
      const MetricReport report = EvaluateHarmonizer(model, eval_set);
      csv += std::to_string(a) + "," + std::to_string(result.augmented.size()) + "," +
             Fmt(report.mean_mse) + "," + Fmt(report.mean_fmse) + "," +
             Fmt(report.mean_fssim) + "\n";
    }
    WriteTextFile(f.sweep_csv, csv);
    return kExitOk;
  }

  ToyHarmonizer model(f.model);
  const AugTrainResult result = TrainHarmonizer(
      model, syconet ? &*syconet : nullptr, pairs, f.train, progress);
  SaveCheckpoint(f.out, model.ToCheckpoint());
  if (!f.loss_csv.empty()) WriteTextFile(f.loss_csv, LossHistoryCsv(result.history));
  if (!f.eval_json.empty()) {
    if (eval_pairs.empty()) throw std::invalid_argument("--eval-json requires --eval-manifest");
    WriteTextFile(f.eval_json, MetricReportJson(EvaluateHarmonizer(model, eval_pairs)));
  }
  return kExitOk;
}

struct EvaluateFlags {
  std::string manifest;
  std::string harmonizer_ckpt;
  std::string out_csv;
  std::string out_json;
};

int RunEvaluate(const EvaluateFlags& f) {
  if (f.out_csv.empty() && f.out_json.empty()) {
    throw std::invalid_argument("give --out-csv and/or --out-json");
  }
  const std::vector<TrainPair> pairs = LoadPairs(f.manifest);
  MetricReport report;
  if (f.harmonizer_ckpt.empty()) {
    // Score the composites themselves.
    std::vector<ImageMetrics> rows;
    for (const TrainPair& p : pairs) {
      rows.push_back(EvaluateImage(p.composite, p.real, p.mask, p.id));
    }
    report = Summarize(std::move(rows));
  } else {
    const ToyHarmonizer model =
        ToyHarmonizer::FromCheckpoint(LoadCheckpoint(f.harmonizer_ckpt));
    report = EvaluateHarmonizer(model, pairs);
  }
  if (!f.out_csv.empty()) WriteTextFile(f.out_csv, MetricReportCsv(report));
  if (!f.out_json.empty()) WriteTextFile(f.out_json, MetricReportJson(report));
  return kExitOk;
}

struct BtFlags {
  std::string wins;
  std::string out;
};

int RunBtRank(const BtFlags& f) {
  const WinsTable table = ParseWinsCsv(ReadTextFile(f.wins));
  const BtResult result = BtRank(table.wins, {}, table.names);
  json models = json::array();
  for (std::size_t i = 0; i < table.names.size(); ++i) {
    models.push_back({{"name", table.names[i]}, {"score", result.scores[i]}});
  }
  json out = {{"models", models},
              {"iterations", result.iterations},
              {"log_likelihood", result.log_likelihood.empty()
                                     ? 0.0
                                     : result.log_likelihood.back()}};
  WriteTextFile(f.out, out.dump(2) + "\n");
  return kExitOk;
}

struct GradCheckFlags {
  double h = 1e-5;
  double threshold = 1e-4;
  int max_entries = 64;
  std::string report;
  bool corrupt = false;
};

// Tiny SycoNet and harmonizer batches; every parameter block of both losses.
int RunGradCheck(const GlobalFlags& g, const GradCheckFlags& f) {
  if (!(f.h > 0.0)) throw std::invalid_argument("--h must be positive");
  const std::vector<TrainPair> pairs = MakeToyDataset(
      2, 16, 16, g.seed, [](int, CounterRng& rng) { return RandomAffineLut(rng, 0.3); });

  SycoConfig config;
  config.latent_dim = 4;
  config.num_basis = 4;
  config.feature_dim = 8;
  config.lut_size = 5;
  config.resolution = 16;
  config.seed = g.seed;
  const BasisSet basis = InitBasis(GenerateSeedCollection(12, config.lut_size, g.seed),
                                   config.num_basis, KMeansConfig{.seed = g.seed});
  SycoNet net = InitSycoNet(config, basis);
  std::vector<SycoSample> samples;
  for (const TrainPair& p : pairs) samples.push_back(PrepareSample(net, p));
  CounterRng eps_rng(g.seed, 0x45505321);
  std::vector<Eigen::VectorXd> eps;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    eps.push_back(eps_rng.NormalVector(config.latent_dim));
  }
  ParameterSet syco_grads = net.params.ZerosLike();
  SycoBatchLoss(net, samples, eps, &syco_grads);

  ToyHarmonizer harmonizer(ToyHarmonizerConfig{.resolution = 16, .feature_dim = 8,
                                               .seed = g.seed});
  // Move the head off zero so every block receives gradient.
  CounterRng head_rng(g.seed, 0x48454144);
  for (const char* name : {"head.weight", "head.bias"}) {
    Eigen::VectorXd& v = harmonizer.params().at(name).values();
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = head_rng.Uniform(-0.1, 0.1);
  }
  std::vector<HarmonizeExample> examples;
  for (const TrainPair& p : pairs) {
    examples.push_back({&p.composite, &p.mask, &p.real, 0.5});
  }
  ParameterSet har_grads = harmonizer.params().ZerosLike();
  harmonizer.Gradient(examples, har_grads);

  if (f.corrupt) {
    syco_grads.blocks().front().second.values() *= 1.01;
    har_grads.blocks().front().second.values() *= 1.01;
  }

  GradCheckOptions options;
  options.step = f.h;
  options.max_entries_per_block = f.max_entries;
  options.seed = g.seed;

  const GradCheckReport syco_report = GradCheck(
      [&](const ParameterSet& params) {
        SycoNet probe = net;
        probe.params = params;
        return SycoBatchLoss(probe, samples, eps, nullptr).total;
      },
      net.params, syco_grads, options);
  const GradCheckReport har_report = GradCheck(
      [&](const ParameterSet& params) {
        ToyHarmonizer probe = harmonizer;
        probe.params() = params;
        double loss = 0.0;
        for (const HarmonizeExample& ex : examples) {
          loss += ex.weight *
                  probe.Loss(probe.Forward(*ex.composite, *ex.mask), *ex.target, *ex.mask);
        }
        return loss;
      },
      harmonizer.params(), har_grads, options);

  json blocks = json::array();
  bool passed = true;
  for (const auto& [model, report] :
       {std::pair{"syconet", &syco_report}, std::pair{"harmonizer", &har_report}}) {
    for (const BlockGradError& b : report->blocks) {
      const bool ok = b.max_relative_error < f.threshold;
      passed = passed && ok;
      Progress(std::string(ok ? "ok   " : "FAIL ") + model + "/" + b.name +
               " checked=" + std::to_string(b.checked) +
               " max_rel=" + Fmt(b.max_relative_error));
      blocks.push_back({{"model", model},
                        {"block", b.name},
                        {"checked", b.checked},
                        {"max_relative_error", b.max_relative_error},
                        {"max_absolute_error", b.max_absolute_error},
                        {"passed", ok}});
    }
  }
  if (!f.report.empty()) {
    json out = {{"h", f.h},
                {"threshold", f.threshold},
                {"max_entries_per_block", f.max_entries},
                {"passed", passed},
                {"blocks", blocks}};
    WriteTextFile(f.report, out.dump(2) + "\n");
  }
  Progress(passed ? "gradient check passed" : "gradient check FAILED");
  return passed ? kExitOk : kExitRuntime;
}

struct ToyDataFlags {
  int count = 16;
  int height = 64;
  int width = 64;
  double strength = 0.3;
  bool shared_lut = false;
  std::string out_dir;
};

int RunMakeToyData(const GlobalFlags& g, const ToyDataFlags& f) {
  if (f.count < 1 || f.height < 2 || f.width < 2) {
    throw std::invalid_argument("toy data needs count >= 1 and size >= 2x2");
  }
  PerturbationFn perturbation;
  if (f.shared_lut) {
    CounterRng rng(g.seed, kToyLutStream);
    const Lut3D lut = RandomAffineLut(rng, f.strength);
    perturbation = [lut](int, CounterRng&) { return lut; };
  } else {
    const double strength = f.strength;
    perturbation = [strength](int, CounterRng& rng) {
      return RandomAffineLut(rng, strength);
    };
  }
  const std::vector<TrainPair> pairs =
      MakeToyDataset(f.count, f.height, f.width, g.seed, perturbation);
  WriteDataset(pairs, f.out_dir);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args) {
  CLI::App app{"Learnable 3D-LUT composite augmentation toolkit", "lutaug"};
  app.set_config("--config", "", "Read flags from a TOML/INI file ([command] sections)");
  app.require_subcommand(1);
  app.fallthrough();
  // "-h" is left free for gradcheck's --h.
  app.set_help_flag("--help", "Print this help message and exit");

  GlobalFlags global;
  app.add_option("--seed", global.seed, "Seed for every random choice")
      ->capture_default_str();

  ClusterFlags cluster;
  CLI::App* cluster_cmd =
      app.add_subcommand("cluster-luts", "Cluster a LUT collection into basis LUTs");
  cluster_cmd->add_option("--num-basis", cluster.num_basis, "Basis size L")
      ->capture_default_str();
  cluster_cmd->add_option("--collection-size", cluster.collection_size,
                          "Generated collection size")
      ->capture_default_str();
  cluster_cmd->add_option("--collection-seed", cluster.collection_seed,
                          "Seed of the generated collection (default: --seed)");
  cluster_cmd->add_option("--lut-size", cluster.lut_size, "Lattice points per axis")
      ->capture_default_str();
  cluster_cmd->add_option("--lut-dir", cluster.lut_dir, "Cluster these .cube files instead")
      ->check(CLI::ExistingDirectory);
  cluster_cmd->add_option("--out-dir", cluster.out_dir, "Output directory")->required();

  TrainSycoFlags train_syco;
  CLI::App* train_syco_cmd =
      app.add_subcommand("train-syconet", "Train the LUT augmentation network");
  train_syco.app = train_syco_cmd;
  train_syco_cmd->add_option("--manifest", train_syco.manifest, "Training manifest")
      ->required()
      ->check(CLI::ExistingFile);
  train_syco_cmd->add_option("--out", train_syco.out, "Checkpoint path")->required();
  train_syco_cmd->add_option("--loss-csv", train_syco.loss_csv, "Per-epoch loss CSV");
  train_syco_cmd->add_option("--init-from", train_syco.init_from, "Finetune a checkpoint")
      ->check(CLI::ExistingFile);
  train_syco_cmd->add_option("--export-basis-dir", train_syco.export_basis_dir,
                             "Write the learned basis as .cube files");
  train_syco_cmd->add_option("--epochs", train_syco.config.epochs)->capture_default_str();
  train_syco_cmd->add_option("--lr", train_syco.config.learning_rate)
      ->capture_default_str();
  train_syco_cmd->add_option("--batch-size", train_syco.config.batch_size)
      ->capture_default_str();
  train_syco_cmd->add_option("--d-z", train_syco.config.latent_dim)->capture_default_str();
  train_syco_cmd->add_option("--num-basis", train_syco.config.num_basis)
      ->capture_default_str();
  train_syco_cmd->add_option("--feature-dim", train_syco.config.feature_dim)
      ->capture_default_str();
  train_syco_cmd->add_option("--lut-size", train_syco.config.lut_size)
      ->capture_default_str();
  train_syco_cmd->add_option("--resolution", train_syco.config.resolution)
      ->capture_default_str();
  train_syco_cmd->add_option("--collection-size", train_syco.collection_size,
                             "Generated LUT collection for basis initialization")
      ->capture_default_str();
  train_syco_cmd->add_option("--collection-seed", train_syco.collection_seed,
                             "Seed of the generated collection (default: --seed)");
  train_syco_cmd->add_option("--kl-weight", train_syco.config.kl_weight,
                             "Weight of the KL term")
      ->capture_default_str();

  AugmentFlags augment;
  CLI::App* augment_cmd =
      app.add_subcommand("augment", "Write generated composites for a dataset");
  augment_cmd->add_option("--syconet-ckpt", augment.syconet_ckpt)
      ->required()
      ->check(CLI::ExistingFile);
  augment_cmd->add_option("--manifest", augment.manifest)->required()->check(CLI::ExistingFile);
  augment_cmd->add_option("--out-dir", augment.out_dir)->required();
  CLI::Option* k_opt =
      augment_cmd->add_option("--k", augment.k, "Samples per pair")->capture_default_str();
  CLI::Option* static_opt = augment_cmd->add_flag(
      "--static", augment.is_static, "Materialize the static set used by train-harmonizer");
  augment_cmd->add_option("--a", augment.a, "Static multiplier")
      ->capture_default_str()
      ->needs(static_opt);
  k_opt->excludes(static_opt);

  TrainHarmonizerFlags train_har;
  CLI::App* train_har_cmd =
      app.add_subcommand("train-harmonizer", "Train a harmonization model");
  train_har_cmd->add_option("--manifest", train_har.manifest)
      ->required()
      ->check(CLI::ExistingFile);
  train_har_cmd->add_option("--aug-mode", train_har.aug_mode)
      ->check(CLI::IsMember({"none", "dynamic", "static", "aug-only"}))
      ->capture_default_str();
  train_har_cmd->add_option("--syconet-ckpt", train_har.syconet_ckpt)
      ->check(CLI::ExistingFile);
  train_har_cmd->add_option("--eval-manifest", train_har.eval_manifest)
      ->check(CLI::ExistingFile);
  train_har_cmd->add_option("--out", train_har.out, "Checkpoint path");
  train_har_cmd->add_option("--loss-csv", train_har.loss_csv);
  train_har_cmd->add_option("--eval-json", train_har.eval_json,
                            "Metrics on --eval-manifest after training");
  train_har_cmd->add_option("--sweep-a", train_har.sweep_a,
                            "Static multipliers to sweep, e.g. 2,4,6")
      ->delimiter(',');
  train_har_cmd->add_option("--sweep-csv", train_har.sweep_csv);
  train_har_cmd->add_option("--iterations", train_har.train.iterations)
      ->capture_default_str();
  train_har_cmd->add_option("--batch-size", train_har.train.batch_size)
      ->capture_default_str();
  train_har_cmd->add_option("--lr", train_har.train.learning_rate)->capture_default_str();
  train_har_cmd->add_option("--a", train_har.train.static_multiplier)
      ->capture_default_str();
  train_har_cmd->add_option("--resolution", train_har.model.resolution)
      ->capture_default_str();
  train_har_cmd->add_option("--feature-dim", train_har.model.feature_dim)
      ->capture_default_str();

  EvaluateFlags evaluate;
  CLI::App* evaluate_cmd = app.add_subcommand(
      "evaluate", "MSE/fMSE/fSSIM of a harmonizer, or of the composites");
  evaluate_cmd->add_option("--manifest", evaluate.manifest)
      ->required()
      ->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--harmonizer-ckpt", evaluate.harmonizer_ckpt)
      ->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--out-csv", evaluate.out_csv);
  evaluate_cmd->add_option("--out-json", evaluate.out_json);

  BtFlags bt;
  CLI::App* bt_cmd =
      app.add_subcommand("bt-rank", "Bradley-Terry scores from pairwise wins");
  bt_cmd->add_option("--wins", bt.wins, "CSV of winner,loser,count")
      ->required()
      ->check(CLI::ExistingFile);
  bt_cmd->add_option("--out", bt.out, "Scores JSON")->required();

  GradCheckFlags grad;
  CLI::App* grad_cmd =
      app.add_subcommand("gradcheck", "Finite-difference check of all gradients");
  grad_cmd->set_help_flag("--help", "Print this help message and exit");
  grad_cmd->add_option("--h", grad.h, "Central-difference step")->capture_default_str();
  grad_cmd->add_option("--threshold", grad.threshold, "Max relative error")
      ->capture_default_str();
  grad_cmd->add_option("--max-entries", grad.max_entries,
                       "Entries checked per block (0 = all)")
      ->capture_default_str();
  grad_cmd->add_option("--report", grad.report, "JSON report path");
  grad_cmd->add_flag("--corrupt-gradient", grad.corrupt)->group("");

  ToyDataFlags toy;
  CLI::App* toy_cmd =
      app.add_subcommand("make-toy-data", "Write a synthetic composite dataset");
  toy_cmd->add_option("--count", toy.count)->capture_default_str();
  toy_cmd->add_option("--height", toy.height)->capture_default_str();
  toy_cmd->add_option("--width", toy.width)->capture_default_str();
  toy_cmd->add_option("--strength", toy.strength, "Colour perturbation strength")
      ->capture_default_str();
  toy_cmd->add_flag("--shared-lut", toy.shared_lut, "One perturbation for every pair");
  toy_cmd->add_option("--out-dir", toy.out_dir)->required();

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*cluster_cmd) return RunClusterLuts(global, cluster);
    if (*train_syco_cmd) return RunTrainSyconet(global, train_syco);
    if (*augment_cmd) return RunAugment(global, augment);
    if (*train_har_cmd) return RunTrainHarmonizer(global, train_har);
    if (*evaluate_cmd) return RunEvaluate(evaluate);
    if (*bt_cmd) return RunBtRank(bt);
    if (*grad_cmd) return RunGradCheck(global, grad);
    if (*toy_cmd) return RunMakeToyData(global, toy);
  } catch (const NonIdentifiableError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const EmptyForegroundError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace lutaug::cli
