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

#ifndef LUTAUG_BASIS_H_
#define LUTAUG_BASIS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lutaug/lut.h"
#include "lutaug/rng.h"

namespace lutaug {

// Per-channel tone curve lift + gain * x^gamma followed by a 3x3 channel
// mix. With non-negative mix entries the result is non-decreasing along
// every input axis.
struct ToneCurveParams {
  Eigen::Vector3d gamma = Eigen::Vector3d::Ones();
  Eigen::Vector3d gain = Eigen::Vector3d::Ones();
  Eigen::Vector3d lift = Eigen::Vector3d::Zero();
  Eigen::Matrix3d mix = Eigen::Matrix3d::Identity();
};

// gamma log-uniform in [0.5, 2], gain in [0.7, 1.3], lift in [-0.1, 0.1],
// mix diagonal in [0.85, 1.15] and off-diagonal in [0, 0.15].
ToneCurveParams SampleToneCurve(CounterRng& rng);
Lut3D ToneCurveLut(int size, const ToneCurveParams& params);

struct LutCollection {
  std::vector<Lut3D> luts;
  // Seed/index tag or source file path, one per LUT.
  std::vector<std::string> provenance;

  int size() const { return static_cast<int>(luts.size()); }
  // Throws std::invalid_argument when empty or sizes disagree.
  void Validate() const;
};

LutCollection GenerateSeedCollection(int n, int lut_size, uint64_t seed);

// Every *.cube file in `dir`, in file-name order.
LutCollection LoadCubeDirectory(const std::string& dir);

struct KMeansConfig {
  int max_iters = 100;
  // Stop once no center moves farther than this (Euclidean).
  double tol = 1e-8;
  // Independent k-means++ restarts; the lowest final inertia wins.
  int num_init = 30;
  uint64_t seed = 0;
};

struct KMeansResult {
  // k x dim, one center per row.
  Eigen::MatrixXd centers;
  std::vector<int> assignment;
  // Within-cluster sum of squared distances after the final assignment.
  double inertia = 0.0;
  int iterations = 0;
  // Inertia after every assignment step, first to last.
  std::vector<double> inertia_history;
};

// Lloyd's algorithm with k-means++ seeding over the rows of `points`.
// Ties (nearest center, farthest point) go to the lowest index; empty
// clusters are re-seeded with the point farthest from its center.
KMeansResult KMeans(const Eigen::MatrixXd& points, int k,
                    const KMeansConfig& config);

// Runs KMeans on flattened entry vectors and returns the centers as LUTs.
std::vector<Lut3D> KMeansCluster(const LutCollection& collection, int k,
                                 const KMeansConfig& config,
                                 KMeansResult* details = nullptr);

struct BasisSet {
  // luts[0] is the identity at initialization.
  std::vector<Lut3D> luts;
  int size() const { return static_cast<int>(luts.size()); }
};

// Identity followed by num_basis - 1 k-means centers of the collection.
BasisSet InitBasis(const LutCollection& collection, int num_basis,
                   const KMeansConfig& config,
                   KMeansResult* details = nullptr);

}  // namespace lutaug

#endif  // LUTAUG_BASIS_H_
