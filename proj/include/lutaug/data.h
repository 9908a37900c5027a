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

#ifndef LUTAUG_DATA_H_
#define LUTAUG_DATA_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lutaug/image.h"
#include "lutaug/lut.h"
#include "lutaug/rng.h"

namespace lutaug {

// 8-bit PNG I/O. Images load to [0, 1] (v / 255); writes clamp, scale by
// 255 and round half away from zero. Masks load as gray and binarize at 128.
Image ReadRgbPng(const std::string& path);
Mask ReadMaskPng(const std::string& path);
void WriteRgbPng(const std::string& path, const Image& image);
void WriteMaskPng(const std::string& path, const Mask& mask);
uint8_t QuantizeChannel(double value);

struct ManifestRecord {
  std::string composite_path;
  std::string real_path;
  std::string mask_path;
  std::string domain;  // optional; empty when absent
};

// JSON-lines manifest, one record per line. Relative paths are resolved
// against the manifest's directory at load time.
struct DatasetManifest {
  std::vector<ManifestRecord> records;
  int size() const { return static_cast<int>(records.size()); }
};

// Parses manifest text; relative paths are joined onto `base_dir`.
DatasetManifest ParseManifest(const std::string& text,
                              const std::string& base_dir = "");
// Parses and checks that every referenced file exists.
DatasetManifest LoadManifest(const std::string& path);
std::string SerializeManifest(const DatasetManifest& manifest);
void SaveManifest(const std::string& path, const DatasetManifest& manifest);
DatasetManifest MergeManifests(const DatasetManifest& first,
                               const DatasetManifest& second);

// (composite, real, mask) triple, all the same size.
struct TrainPair {
  Image composite;
  Image real;
  Mask mask;
  std::string id;
  std::string domain;
};

// Throws std::invalid_argument on dimension mismatch and EmptyForegroundError
// when the mask selects no pixel.
void ValidatePair(const TrainPair& pair);
TrainPair LoadPair(const ManifestRecord& record);
std::vector<TrainPair> LoadDataset(const DatasetManifest& manifest);

// Stem of a path without directories or extension.
std::string PathStem(const std::string& path);

struct AugmentedPair {
  Image composite;
  // Source files of the real image and mask. When empty, `real` / `mask` are
  // written next to the composite instead.
  std::string real_path;
  std::string mask_path;
  Image real;
  Mask mask;
  std::string real_stem;
  std::string domain;
};

// Writes each composite as {real_stem}_aug{k}.png (k counts per stem) and
// returns the manifest of the new records. Does not write a manifest file.
DatasetManifest WriteAugmentedSet(std::span<const AugmentedPair> pairs,
                                  const std::string& out_dir);

// Writes a dataset as {id}_composite.png, {id}_real.png, {id}_mask.png plus
// manifest.jsonl; returns the manifest path.
std::string WriteDataset(std::span<const TrainPair> pairs,
                         const std::string& out_dir);

// Procedural scene: smooth two-colour gradient plus soft colour blobs.
Image MakeProceduralImage(int height, int width, CounterRng& rng);
// Random axis-aligned ellipse covering roughly 10-40% of the frame.
Mask MakeProceduralMask(int height, int width, CounterRng& rng);

// Per-channel scale in [1 - strength, 1 + strength] and offset in
// [-strength / 2, strength / 2], as an (exact) size-2 LUT.
Lut3D RandomAffineLut(CounterRng& rng, double strength);

// Builds `count` pairs: procedural real image and mask, composite equal to
// the real image with perturbation(i, rng) applied to the foreground and
// clamped to [0, 1].
using PerturbationFn = std::function<Lut3D(int index, CounterRng& rng)>;
std::vector<TrainPair> MakeToyDataset(int count, int height, int width,
                                      uint64_t seed,
                                      const PerturbationFn& perturbation);

}  // namespace lutaug

#endif  // LUTAUG_DATA_H_
