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

#include "lutaug/basis.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <stdexcept>

#include "lutaug/errors.h"

namespace lutaug {

ToneCurveParams SampleToneCurve(CounterRng& rng) {
  ToneCurveParams p;
  for (int c = 0; c < 3; ++c) {
    p.gamma[c] = std::exp(rng.Uniform(std::log(0.5), std::log(2.0)));
    p.gain[c] = rng.Uniform(0.7, 1.3);
    p.lift[c] = rng.Uniform(-0.1, 0.1);
  }
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      p.mix(r, c) = r == c ? rng.Uniform(0.85, 1.15) : rng.Uniform(0.0, 0.15);
    }
  }
  return p;
}

Lut3D ToneCurveLut(int size, const ToneCurveParams& params) {
  Lut3D lut = IdentityLut(size);
  for (Eigen::Index n = 0; n < lut.num_entries(); ++n) {
    Eigen::Vector3d toned;
    for (int c = 0; c < 3; ++c) {
      toned[c] = params.lift[c] +
                 params.gain[c] * std::pow(lut.entries()(n, c), params.gamma[c]);
    }
    lut.entries().row(n) = (params.mix * toned).transpose();
  }
  return lut;
}

void LutCollection::Validate() const {
  if (luts.empty()) throw std::invalid_argument("LUT collection is empty");
  for (const Lut3D& lut : luts) {
    if (lut.size() != luts.front().size()) {
      throw std::invalid_argument(
          "LUT collection mixes sizes " + std::to_string(lut.size()) +
          " and " + std::to_string(luts.front().size()));
    }
  }
}

LutCollection GenerateSeedCollection(int n, int lut_size, uint64_t seed) {
  if (n < 1) {
    throw std::invalid_argument("collection size must be >= 1, got " +
                                std::to_string(n));
  }
  LutCollection collection;
  for (int i = 0; i < n; ++i) {
    CounterRng rng = CounterRng(seed).Derive(static_cast<uint64_t>(i));
    collection.luts.push_back(ToneCurveLut(lut_size, SampleToneCurve(rng)));
    collection.provenance.push_back("seed:" + std::to_string(seed) + "/" +
                                    std::to_string(i));
  }
  return collection;
}

LutCollection LoadCubeDirectory(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& item : fs::directory_iterator(dir)) {
    if (item.is_regular_file() && item.path().extension() == ".cube") {
      files.push_back(item.path());
    }
  }
  std::sort(files.begin(), files.end());
  LutCollection collection;
  for (const fs::path& file : files) {
    collection.luts.push_back(LoadCube(file.string()));
    collection.provenance.push_back(file.string());
  }
  if (collection.luts.empty()) {
    throw std::invalid_argument("no .cube files in " + dir);
  }
  collection.Validate();
  return collection;
}

namespace {

// Row access dominates; LUT points are thousands of entries wide.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Squared distance from every row of `points` to every row of `centers`, via
// the expanded form. Only used to rank centers; exact distances are
// recomputed for the winner.
Eigen::MatrixXd ApproxSquaredDistances(const RowMatrix& points,
                                       const RowMatrix& centers) {
  Eigen::MatrixXd d = -2.0 * points * centers.transpose();
  d.colwise() += points.rowwise().squaredNorm();
  d.rowwise() += centers.rowwise().squaredNorm().transpose();
  return d;
}

RowMatrix SeedPlusPlus(const RowMatrix& points, int k, CounterRng& rng) {
  const Eigen::Index n = points.rows();
  RowMatrix centers(k, points.cols());
  Eigen::Index first = static_cast<Eigen::Index>(rng.UniformInt(n));
  centers.row(0) = points.row(first);
  Eigen::VectorXd nearest =
      (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = nearest.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = rng.Uniform() * total;
      double running = 0.0;
      pick = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (nearest[i] == 0.0) continue;
        running += nearest[i];
        pick = i;
        if (running > target) break;
      }
    } else {
      nearest.maxCoeff(&pick);
    }
    centers.row(c) = points.row(pick);
    nearest = nearest.cwiseMin(
        (points.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

// Hartigan single-point transfers: moves a point whenever that lowers the
// total SSE once both affected centers are updated. Lloyd fixed points are
// often not stable under this move.
void Refine(const RowMatrix& points, RowMatrix& centers, KMeansResult& result) {
  const Eigen::Index n = points.rows();
  const Eigen::Index k = centers.rows();
  std::vector<int> counts(k, 0);
  for (int a : result.assignment) ++counts[a];
  bool moved = true;
  for (int sweep = 0; moved && sweep < 1000; ++sweep) {
    moved = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int a = result.assignment[i];
      if (counts[a] < 2) continue;
      const double na = counts[a];
      const double removal =
          na / (na - 1.0) * (points.row(i) - centers.row(a)).squaredNorm();
      int best = a;
      double best_gain = 0.0;
      for (int b = 0; b < k; ++b) {
        if (b == a) continue;
        const double nb = counts[b];
        const double added =
            nb / (nb + 1.0) * (points.row(i) - centers.row(b)).squaredNorm();
        const double gain = removal - added;
        // Relative margin keeps roundoff from cycling a point back and forth.
        if (gain > best_gain + 1e-12 * removal) {
          best_gain = gain;
          best = b;
        }
      }
      if (best == a) continue;
      const double nb = counts[best];
      centers.row(a) = (na * centers.row(a) - points.row(i)) / (na - 1.0);
      centers.row(best) =
          (nb * centers.row(best) + points.row(i)) / (nb + 1.0);
      --counts[a];
      ++counts[best];
      result.assignment[i] = best;
      moved = true;
    }
  }
}

KMeansResult Lloyd(const RowMatrix& points, int k, const KMeansConfig& config,
                   CounterRng rng) {
  const Eigen::Index n = points.rows();
  KMeansResult result;
  RowMatrix centers = SeedPlusPlus(points, k, rng);
  result.assignment.assign(n, 0);

  auto assign = [&]() {
    const Eigen::MatrixXd d = ApproxSquaredDistances(points, centers);
    Eigen::VectorXd own(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      // Exact distances for the near-ties the expanded form cannot order.
      const double cutoff = d.row(i).minCoeff() + 1e-9 * (1.0 + points.row(i).squaredNorm());
      Eigen::Index best = -1;
      for (Eigen::Index c = 0; c < k; ++c) {
        if (d(i, c) > cutoff) continue;
        const double exact = (points.row(i) - centers.row(c)).squaredNorm();
        if (best < 0 || exact < own[i]) {  // first minimum on ties
          best = c;
          own[i] = exact;
        }
      }
      result.assignment[i] = static_cast<int>(best);
    }
    result.inertia = own.sum();
    result.inertia_history.push_back(result.inertia);
    return own;
  };

  for (int iter = 1; iter <= std::max(config.max_iters, 1); ++iter) {
    Eigen::VectorXd own = assign();
    result.iterations = iter;
    RowMatrix next = RowMatrix::Zero(k, points.cols());
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      next.row(result.assignment[i]) += points.row(i);
      ++counts[result.assignment[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        next.row(c) /= counts[c];
        continue;
      }
      Eigen::Index farthest;
      own.maxCoeff(&farthest);
      next.row(c) = points.row(farthest);
      own[farthest] = -1.0;  // not reused by another empty cluster
    }
    const double shift =
        (next - centers).rowwise().norm().maxCoeff();
    centers = std::move(next);
    if (shift < config.tol) break;
  }
  Refine(points, centers, result);
  assign();
  result.centers = centers;
  return result;
}

}  // namespace

KMeansResult KMeans(const Eigen::MatrixXd& points, int k,
                    const KMeansConfig& config) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > points.rows()) {
    throw std::invalid_argument("k = " + std::to_string(k) +
                                " exceeds the number of points " +
                                std::to_string(points.rows()));
  }
  if (config.num_init < 1) throw std::invalid_argument("num_init must be >= 1");
  const RowMatrix rows = points;
  const CounterRng root(config.seed);
  KMeansResult best = Lloyd(rows, k, config, root);
  for (int r = 1; r < config.num_init; ++r) {
    KMeansResult run = Lloyd(rows, k, config, root.Derive(r));
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

std::vector<Lut3D> KMeansCluster(const LutCollection& collection, int k,
                                 const KMeansConfig& config,
                                 KMeansResult* details) {
  collection.Validate();
  if (k > collection.size()) {
    throw std::invalid_argument(
        "cannot form " + std::to_string(k) + " clusters from " +
        std::to_string(collection.size()) + " LUTs");
  }
  const int size = collection.luts.front().size();
  const Eigen::Index dim = collection.luts.front().flat().size();
  Eigen::MatrixXd points(collection.size(), dim);
  for (int i = 0; i < collection.size(); ++i) {
    points.row(i) = collection.luts[i].flat().transpose();
  }
  KMeansResult result = KMeans(points, k, config);
  std::vector<Lut3D> centers;
  centers.reserve(k);
  for (int c = 0; c < k; ++c) {
    Lut3D lut(size);
    lut.flat() = result.centers.row(c).transpose();
    centers.push_back(std::move(lut));
  }
  if (details != nullptr) *details = std::move(result);
  return centers;
}

BasisSet InitBasis(const LutCollection& collection, int num_basis,
                   const KMeansConfig& config, KMeansResult* details) {
  if (num_basis < 2) {
    throw std::invalid_argument("number of basis LUTs must be >= 2");
  }
  collection.Validate();
  BasisSet basis;
  basis.luts.push_back(IdentityLut(collection.luts.front().size()));
  for (Lut3D& lut : KMeansCluster(collection, num_basis - 1, config, details)) {
    basis.luts.push_back(std::move(lut));
  }
  return basis;
}

}  // namespace lutaug
