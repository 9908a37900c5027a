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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "lutaug/errors.h"
#include "oracles.h"

namespace lutaug {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(fs::temp_directory_path() / ("lutaug_data_test_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& leaf) const { return (path_ / leaf).string(); }

 private:
  fs::path path_;
};

TEST(PngTest, RgbRoundTripQuantizesToBytes) {
  TempDir dir("png");
  Image image(3, 4);
  for (Eigen::Index i = 0; i < image.pixels().size(); ++i) {
    image.pixels().data()[i] = static_cast<double>(i * 17 % 256) / 255.0;
  }
  image.at(0, 0, 0) = 1.7;    // clamps
  image.at(0, 0, 1) = -0.2;   // clamps
  image.at(0, 0, 2) = 0.5;    // 127.5 rounds away from zero
  WriteRgbPng(dir / "a.png", image);
  const Image back = ReadRgbPng(dir / "a.png");
  ASSERT_EQ(back.height(), 3);
  ASSERT_EQ(back.width(), 4);
  EXPECT_EQ(back.at(0, 0, 0), 1.0);
  EXPECT_EQ(back.at(0, 0, 1), 0.0);
  EXPECT_EQ(back.at(0, 0, 2), 128.0 / 255.0);
  for (Eigen::Index i = 3; i < image.pixels().size(); ++i) {
    EXPECT_EQ(back.pixels().data()[i], image.pixels().data()[i]);
  }
}

TEST(PngTest, QuantizeRoundsHalfAwayFromZero) {
  EXPECT_EQ(QuantizeChannel(0.5), 128);
  EXPECT_EQ(QuantizeChannel(0.4 / 255.0), 0);
  EXPECT_EQ(QuantizeChannel(0.6 / 255.0), 1);
  EXPECT_EQ(QuantizeChannel(2.0), 255);
}

TEST(PngTest, MaskRoundTripAndThreshold) {
  TempDir dir("mask");
  Mask mask(5, 5);
  mask.Set(1, 2, true);
  mask.Set(4, 4, true);
  WriteMaskPng(dir / "m.png", mask);
  EXPECT_EQ(ReadMaskPng(dir / "m.png"), mask);
  Eigen::ArrayXi gray(4);
  gray << 0, 127, 128, 255;
  const Mask thresholded = Mask::FromGray(2, 2, gray);
  EXPECT_FALSE(thresholded[1]);
  EXPECT_TRUE(thresholded[2]);
}

TEST(PngTest, MissingOrCorruptFileIsIoError) {
  TempDir dir("bad_png");
  EXPECT_THROW(ReadRgbPng(dir / "missing.png"), IoError);
  std::ofstream(dir / "junk.png") << "not a png";
  EXPECT_THROW(ReadRgbPng(dir / "junk.png"), IoError);
}

TEST(ManifestTest, ParsesAndResolvesRelativePaths) {
  const DatasetManifest m = ParseManifest(
      "{\"composite_path\":\"c/a.png\",\"real_path\":\"/abs/r.png\",\"mask_path\":\"m.png\","
      "\"domain\":\"d1\"}\n\n"
      "{\"composite_path\":\"c/b.png\",\"real_path\":\"r2.png\",\"mask_path\":\"m2.png\"}\n",
      "/data");
  ASSERT_EQ(m.size(), 2);
  EXPECT_EQ(m.records[0].composite_path, "/data/c/a.png");
  EXPECT_EQ(m.records[0].real_path, "/abs/r.png");
  EXPECT_EQ(m.records[0].domain, "d1");
  EXPECT_EQ(m.records[1].domain, "");
}

TEST(ManifestTest, ErrorsCarryLineNumbers) {
  const std::string good = "{\"composite_path\":\"a\",\"real_path\":\"b\",\"mask_path\":\"c\"}\n";
  const auto line_of = [](const std::string& text) {
    try {
      ParseManifest(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of(good + "{\"composite_path\":\"a\",\"real_path\":\"b\"}\n"), 2);
  EXPECT_EQ(line_of(good + good + "{oops\n"), 3);
  EXPECT_EQ(line_of("[1,2]\n"), 1);
  EXPECT_EQ(line_of("{\"composite_path\":1,\"real_path\":\"b\",\"mask_path\":\"c\"}\n"), 1);
  EXPECT_THROW(ParseManifest(""), ParseError);
}

TEST(ManifestTest, SerializeParseRoundTripAndMerge) {
  DatasetManifest m;
  m.records.push_back({"/x/a.png", "/x/b.png", "/x/c.png", "dom"});
  m.records.push_back({"/x/d.png", "/x/e.png", "/x/f.png", ""});
  const DatasetManifest back = ParseManifest(SerializeManifest(m));
  ASSERT_EQ(back.size(), 2);
  EXPECT_EQ(back.records[0].mask_path, "/x/c.png");
  EXPECT_EQ(back.records[0].domain, "dom");
  const DatasetManifest merged = MergeManifests(m, back);
  ASSERT_EQ(merged.size(), 4);
  EXPECT_EQ(merged.records[2].composite_path, "/x/a.png");
}

TEST(DatasetTest, WriteThenLoadRoundTrips) {
  TempDir dir("dataset");
  const std::vector<TrainPair> pairs = MakeToyDataset(3, 16, 12, 5, [](int, CounterRng& rng) {
    return RandomAffineLut(rng, 0.3);
  });
  const std::string manifest_path = WriteDataset(pairs, dir.path().string());
  EXPECT_EQ(fs::path(manifest_path).filename(), "manifest.jsonl");
  std::ifstream in(manifest_path);
  const std::string first_line((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(first_line.find(dir.path().string()), std::string::npos) << "paths should be relative";
  const std::vector<TrainPair> loaded = LoadDataset(LoadManifest(manifest_path));
  ASSERT_EQ(loaded.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(loaded[i].mask, pairs[i].mask);
    EXPECT_LE((loaded[i].real.pixels() - pairs[i].real.pixels()).abs().maxCoeff(), 0.5 / 255 + 1e-12);
    EXPECT_LE((loaded[i].composite.pixels() - pairs[i].composite.pixels()).abs().maxCoeff(),
              0.5 / 255 + 1e-12);
  }
}

TEST(DatasetTest, LoadManifestChecksFiles) {
  TempDir dir("missing");
  std::ofstream(dir / "m.jsonl")
      << "{\"composite_path\":\"a.png\",\"real_path\":\"b.png\",\"mask_path\":\"c.png\"}\n";
  EXPECT_THROW(LoadManifest(dir / "m.jsonl"), IoError);
  EXPECT_THROW(LoadManifest(dir / "nope.jsonl"), IoError);
}

TEST(DatasetTest, ValidatePairRejectsMismatchAndEmptyMask) {
  TrainPair p;
  p.composite = Image(4, 4);
  p.real = Image(4, 4);
  p.mask = Mask(4, 4, false);
  EXPECT_THROW(ValidatePair(p), EmptyForegroundError);
  p.mask = Mask(4, 5, true);
  EXPECT_THROW(ValidatePair(p), std::invalid_argument);
  p.mask = Mask(4, 4, true);
  EXPECT_NO_THROW(ValidatePair(p));
}

TEST(DatasetTest, PathStem) {
  EXPECT_EQ(PathStem("/a/b/c_1.png"), "c_1");
  EXPECT_EQ(PathStem("x.tar.gz"), "x.tar");
}

TEST(AugmentedSetTest, NamesCountPerStem) {
  TempDir dir("aug");
  const Image img(4, 4);
  const Mask mask(4, 4, true);
  std::vector<AugmentedPair> pairs;
  for (const char* stem : {"s1", "s2", "s1"}) {
    AugmentedPair a;
    a.composite = img;
    a.real = img;
    a.mask = mask;
    a.real_stem = stem;
    a.domain = "toy";
    pairs.push_back(a);
  }
  pairs[1].real_path = "/given/real.png";
  const DatasetManifest m = WriteAugmentedSet(pairs, dir.path().string());
  ASSERT_EQ(m.size(), 3);
  EXPECT_EQ(fs::path(m.records[0].composite_path).filename(), "s1_aug0.png");
  EXPECT_EQ(fs::path(m.records[1].composite_path).filename(), "s2_aug0.png");
  EXPECT_EQ(fs::path(m.records[2].composite_path).filename(), "s1_aug1.png");
  EXPECT_EQ(m.records[1].real_path, "/given/real.png");
  EXPECT_TRUE(fs::exists(m.records[0].real_path));
  EXPECT_TRUE(fs::exists(m.records[2].mask_path));
  EXPECT_EQ(m.records[2].domain, "toy");
}

TEST(ToyDataTest, AffineLutIsExactOnColors) {
  CounterRng rng(3);
  const Lut3D lut = RandomAffineLut(rng, 0.3);
  CounterRng again(3);
  Eigen::Vector3d scale, offset;
  for (int c = 0; c < 3; ++c) {
    scale[c] = again.Uniform(0.7, 1.3);
    offset[c] = again.Uniform(-0.15, 0.15);
  }
  CounterRng probe(4);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector3d x(probe.Uniform(), probe.Uniform(), probe.Uniform());
    const Eigen::Vector3d expected = scale.cwiseProduct(x) + offset;
    EXPECT_LE((oracle::Trilinear(lut, x) - expected).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(ToyDataTest, DeterministicWithUntouchedBackground) {
  const auto perturb = [](int, CounterRng& rng) { return RandomAffineLut(rng, 0.3); };
  const std::vector<TrainPair> a = MakeToyDataset(4, 20, 24, 9, perturb);
  const std::vector<TrainPair> b = MakeToyDataset(4, 20, 24, 9, perturb);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(a[i].composite, b[i].composite);
    EXPECT_EQ(a[i].id, "toy000" + std::to_string(i));
    const double coverage = static_cast<double>(a[i].mask.ForegroundCount()) / (20 * 24);
    EXPECT_GT(coverage, 0.05);
    EXPECT_LT(coverage, 0.5);
    for (Eigen::Index p = 0; p < a[i].real.num_pixels(); ++p) {
      if (!a[i].mask[p]) {
        EXPECT_TRUE((a[i].composite.pixels().row(p) == a[i].real.pixels().row(p)).all());
      }
    }
    EXPECT_GE(a[i].composite.pixels().minCoeff(), 0.0);
    EXPECT_LE(a[i].composite.pixels().maxCoeff(), 1.0);
  }
  EXPECT_THROW(MakeToyDataset(0, 8, 8, 1, perturb), std::invalid_argument);
}

}  // namespace
}  // namespace lutaug
