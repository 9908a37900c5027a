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

#include "lutaug/data.h"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "lutaug/errors.h"

namespace lutaug {
namespace fs = std::filesystem;
namespace {

std::vector<uint8_t> ReadPngPixels(const std::string& path, uint32_t format,
                                   int* height, int* width) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError("cannot decode PNG " + path + ": " + image.message);
  }
  image.format = format;
  std::vector<uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path + ": " + message);
  }
  *height = static_cast<int>(image.height);
  *width = static_cast<int>(image.width);
  return buffer;
}

void WritePngPixels(const std::string& path, uint32_t format, int height,
                    int width, const std::vector<uint8_t>& buffer) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  if (!png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0,
                               nullptr)) {
    throw IoError("cannot write PNG " + path + ": " + image.message);
  }
}

std::string ResolvePath(const std::string& path, const std::string& base_dir) {
  if (base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

std::string RelativeTo(const std::string& path, const fs::path& dir) {
  const fs::path target = fs::absolute(path).lexically_normal();
  const fs::path rel = target.lexically_relative(fs::absolute(dir).lexically_normal());
  if (!rel.empty()) return rel.generic_string();
  return target.generic_string();
}

std::string RequireString(const nlohmann::json& object, const char* field,
                          int line_number) {
  const auto it = object.find(field);
  if (it == object.end()) {
    throw ParseError(std::string("missing field '") + field + "'",
                     line_number);
  }
  if (!it->is_string()) {
    throw ParseError(std::string("field '") + field + "' must be a string",
                     line_number);
  }
  return it->get<std::string>();
}

}  // namespace

uint8_t QuantizeChannel(double value) {
  return static_cast<uint8_t>(std::round(std::clamp(value, 0.0, 1.0) * 255.0));
}

Image ReadRgbPng(const std::string& path) {
  int height = 0, width = 0;
  const auto buffer = ReadPngPixels(path, PNG_FORMAT_RGB, &height, &width);
  Image image(height, width);
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    image.pixels().data()[i] = buffer[i] / 255.0;
  }
  return image;
}

Mask ReadMaskPng(const std::string& path) {
  int height = 0, width = 0;
  const auto buffer = ReadPngPixels(path, PNG_FORMAT_GRAY, &height, &width);
  Eigen::ArrayXi gray(static_cast<Eigen::Index>(buffer.size()));
  for (std::size_t i = 0; i < buffer.size(); ++i) gray[i] = buffer[i];
  return Mask::FromGray(height, width, gray);
}

void WriteRgbPng(const std::string& path, const Image& image) {
  std::vector<uint8_t> buffer(static_cast<std::size_t>(image.pixels().size()));
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    buffer[i] = QuantizeChannel(image.pixels().data()[i]);
  }
  WritePngPixels(path, PNG_FORMAT_RGB, image.height(), image.width(), buffer);
}

void WriteMaskPng(const std::string& path, const Mask& mask) {
  std::vector<uint8_t> buffer(static_cast<std::size_t>(mask.num_pixels()));
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    buffer[i] = mask[static_cast<Eigen::Index>(i)] ? 255 : 0;
  }
  WritePngPixels(path, PNG_FORMAT_GRAY, mask.height(), mask.width(), buffer);
}

DatasetManifest ParseManifest(const std::string& text,
                              const std::string& base_dir) {
  DatasetManifest manifest;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json object;
    try {
      object = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line_number);
    }
    if (!object.is_object()) {
      throw ParseError("record must be a JSON object", line_number);
    }
    ManifestRecord record;
    record.composite_path =
        ResolvePath(RequireString(object, "composite_path", line_number), base_dir);
    record.real_path =
        ResolvePath(RequireString(object, "real_path", line_number), base_dir);
    record.mask_path =
        ResolvePath(RequireString(object, "mask_path", line_number), base_dir);
    if (object.contains("domain")) {
      record.domain = RequireString(object, "domain", line_number);
    }
    manifest.records.push_back(std::move(record));
  }
  if (manifest.records.empty()) throw ParseError("manifest is empty", 0);
  return manifest;
}

DatasetManifest LoadManifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path);
  std::ostringstream text;
  text << in.rdbuf();
  DatasetManifest manifest;
  try {
    manifest = ParseManifest(text.str(), fs::path(path).parent_path().string());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const ManifestRecord& r = manifest.records[i];
    for (const std::string* p : {&r.composite_path, &r.real_path, &r.mask_path}) {
      if (!fs::exists(*p)) {
        throw IoError(path + ": record " + std::to_string(i + 1) +
                      " references missing file " + *p);
      }
    }
  }
  return manifest;
}

std::string SerializeManifest(const DatasetManifest& manifest) {
  std::string out;
  for (const ManifestRecord& r : manifest.records) {
    nlohmann::json object = {{"composite_path", r.composite_path},
                             {"real_path", r.real_path},
                             {"mask_path", r.mask_path}};
    if (!r.domain.empty()) object["domain"] = r.domain;
    out += object.dump() + "\n";
  }
  return out;
}

void SaveManifest(const std::string& path, const DatasetManifest& manifest) {
  const fs::path dir = fs::path(path).parent_path();
  DatasetManifest relative = manifest;
  for (ManifestRecord& r : relative.records) {
    r.composite_path = RelativeTo(r.composite_path, dir);
    r.real_path = RelativeTo(r.real_path, dir);
    r.mask_path = RelativeTo(r.mask_path, dir);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest " + path);
  out << SerializeManifest(relative);
  if (!out) throw IoError("write failed for " + path);
}

DatasetManifest MergeManifests(const DatasetManifest& first,
                               const DatasetManifest& second) {
  DatasetManifest merged = first;
  merged.records.insert(merged.records.end(), second.records.begin(),
                        second.records.end());
  return merged;
}

void ValidatePair(const TrainPair& pair) {
  RequireSameShape(pair.composite, pair.real, "composite vs real");
  RequireSameShape(pair.real, pair.mask, "real vs mask");
  if (pair.mask.ForegroundCount() == 0) {
    throw EmptyForegroundError("pair '" + pair.id +
                               "' has an all-background mask");
  }
}

std::string PathStem(const std::string& path) {
  return fs::path(path).stem().string();
}

TrainPair LoadPair(const ManifestRecord& record) {
  TrainPair pair;
  pair.composite = ReadRgbPng(record.composite_path);
  pair.real = ReadRgbPng(record.real_path);
  pair.mask = ReadMaskPng(record.mask_path);
  pair.id = PathStem(record.composite_path);
  pair.domain = record.domain;
  try {
    ValidatePair(pair);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(record.composite_path + ": " + e.what());
  }
  return pair;
}

std::vector<TrainPair> LoadDataset(const DatasetManifest& manifest) {
  std::vector<TrainPair> pairs;
  pairs.reserve(manifest.records.size());
  for (const ManifestRecord& r : manifest.records) pairs.push_back(LoadPair(r));
  return pairs;
}

DatasetManifest WriteAugmentedSet(std::span<const AugmentedPair> pairs,
                                  const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  DatasetManifest manifest;
  std::map<std::string, int> per_stem;
  for (const AugmentedPair& pair : pairs) {
    const int k = per_stem[pair.real_stem]++;
    const std::string base = pair.real_stem + "_aug" + std::to_string(k);
    ManifestRecord record;
    record.composite_path = (fs::path(out_dir) / (base + ".png")).string();
    WriteRgbPng(record.composite_path, pair.composite);
    if (pair.real_path.empty()) {
      record.real_path = (fs::path(out_dir) / (base + "_real.png")).string();
      WriteRgbPng(record.real_path, pair.real);
    } else {
      record.real_path = pair.real_path;
    }
    if (pair.mask_path.empty()) {
      record.mask_path = (fs::path(out_dir) / (base + "_mask.png")).string();
      WriteMaskPng(record.mask_path, pair.mask);
    } else {
      record.mask_path = pair.mask_path;
    }
    record.domain = pair.domain;
    manifest.records.push_back(std::move(record));
  }
  return manifest;
}

std::string WriteDataset(std::span<const TrainPair> pairs,
                         const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  DatasetManifest manifest;
  for (const TrainPair& pair : pairs) {
    ManifestRecord record;
    record.composite_path = (fs::path(out_dir) / (pair.id + "_composite.png")).string();
    record.real_path = (fs::path(out_dir) / (pair.id + "_real.png")).string();
    record.mask_path = (fs::path(out_dir) / (pair.id + "_mask.png")).string();
    record.domain = pair.domain;
    WriteRgbPng(record.composite_path, pair.composite);
    WriteRgbPng(record.real_path, pair.real);
    WriteMaskPng(record.mask_path, pair.mask);
    manifest.records.push_back(std::move(record));
  }
  const std::string path = (fs::path(out_dir) / "manifest.jsonl").string();
  SaveManifest(path, manifest);
  return path;
}

Image MakeProceduralImage(int height, int width, CounterRng& rng) {
  Image image(height, width);
  Eigen::Vector3d c0, c1;
  for (int c = 0; c < 3; ++c) {
    c0[c] = rng.Uniform(0.15, 0.85);
    c1[c] = rng.Uniform(0.15, 0.85);
  }
  const double angle = rng.Uniform(0.0, 2.0 * 3.14159265358979323846);
  const double dx = std::cos(angle), dy = std::sin(angle);
  struct Blob {
    double cy, cx, radius;
    Eigen::Vector3d color;
  };
  std::vector<Blob> blobs(3);
  for (Blob& b : blobs) {
    b.cy = rng.Uniform(0.0, 1.0);
    b.cx = rng.Uniform(0.0, 1.0);
    b.radius = rng.Uniform(0.1, 0.3);
    for (int c = 0; c < 3; ++c) b.color[c] = rng.Uniform(0.05, 0.95);
  }
  for (int y = 0; y < height; ++y) {
    const double v = (y + 0.5) / height;
    for (int x = 0; x < width; ++x) {
      const double u = (x + 0.5) / width;
      const double t = std::clamp(0.5 + (u - 0.5) * dx + (v - 0.5) * dy, 0.0, 1.0);
      Eigen::Vector3d color = (1.0 - t) * c0 + t * c1;
      for (const Blob& b : blobs) {
        const double d2 = ((u - b.cx) * (u - b.cx) + (v - b.cy) * (v - b.cy)) /
                          (b.radius * b.radius);
        const double w = 0.8 * std::exp(-d2);
        color = (1.0 - w) * color + w * b.color;
      }
      for (int c = 0; c < 3; ++c) image.at(y, x, c) = std::clamp(color[c], 0.0, 1.0);
    }
  }
  return image;
}

Mask MakeProceduralMask(int height, int width, CounterRng& rng) {
  Mask mask(height, width);
  const double ry = rng.Uniform(0.2, 0.35);
  const double rx = rng.Uniform(0.2, 0.35);
  const double cy = rng.Uniform(ry, 1.0 - ry);
  const double cx = rng.Uniform(rx, 1.0 - rx);
  for (int y = 0; y < height; ++y) {
    const double v = ((y + 0.5) / height - cy) / ry;
    for (int x = 0; x < width; ++x) {
      const double u = ((x + 0.5) / width - cx) / rx;
      mask.Set(y, x, u * u + v * v <= 1.0);
    }
  }
  if (mask.ForegroundCount() == 0) {
    mask.Set(static_cast<int>(cy * height), static_cast<int>(cx * width), true);
  }
  return mask;
}

Lut3D RandomAffineLut(CounterRng& rng, double strength) {
  Eigen::Vector3d scale, offset;
  for (int c = 0; c < 3; ++c) {
    scale[c] = rng.Uniform(1.0 - strength, 1.0 + strength);
    offset[c] = rng.Uniform(-0.5 * strength, 0.5 * strength);
  }
  Lut3D lut = IdentityLut(2);
  for (Eigen::Index n = 0; n < lut.num_entries(); ++n) {
    lut.entries().row(n) =
        (lut.entries().row(n).array() * scale.transpose().array() +
         offset.transpose().array()).matrix();
  }
  return lut;
}

std::vector<TrainPair> MakeToyDataset(int count, int height, int width,
                                      uint64_t seed,
                                      const PerturbationFn& perturbation) {
  if (count < 1) throw std::invalid_argument("toy dataset needs count >= 1");
  std::vector<TrainPair> pairs;
  for (int i = 0; i < count; ++i) {
    CounterRng rng = CounterRng(seed).Derive(static_cast<uint64_t>(i));
    TrainPair pair;
    pair.real = MakeProceduralImage(height, width, rng);
    pair.mask = MakeProceduralMask(height, width, rng);
    const Lut3D lut = perturbation(i, rng);
    Image composite = pair.real;
    for (Eigen::Index p = 0; p < composite.num_pixels(); ++p) {
      if (!pair.mask[p]) continue;
      composite.pixels().row(p) =
          Lookup(lut, pair.real.pixel(p)).cwiseMax(0.0).cwiseMin(1.0).transpose().array();
    }
    pair.composite = std::move(composite);
    char id[32];
    std::snprintf(id, sizeof(id), "toy%04d", i);
    pair.id = id;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace lutaug
