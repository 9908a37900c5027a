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

#ifndef LUTAUG_LUT_H_
#define LUTAUG_LUT_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lutaug/image.h"

namespace lutaug {

// A 3D colour look-up table: size^3 lattice points, each holding an output
// RGB colour. Flat index of lattice point (i, j, k) is i + size * (j + size * k)
// (red fastest, then green, then blue). Entries may leave [0, 1].
template <typename Scalar>
class BasicLut {
 public:
  using EntryMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 3, Eigen::RowMajor>;

  BasicLut() = default;
  explicit BasicLut(int size)
      : size_(CheckedSize(size)),
        entries_(EntryMatrix::Zero(Cube(size), 3)) {}
  BasicLut(int size, EntryMatrix entries)
      : size_(CheckedSize(size)), entries_(std::move(entries)) {
    if (entries_.rows() != Cube(size)) {
      throw std::invalid_argument("LUT of size " + std::to_string(size) +
                                  " needs " + std::to_string(Cube(size)) +
                                  " entries, got " +
                                  std::to_string(entries_.rows()));
    }
  }

  static BasicLut Identity(int size) {
    BasicLut lut(size);
    const Scalar scale = Scalar(1) / Scalar(size - 1);
    for (int k = 0; k < size; ++k) {
      for (int j = 0; j < size; ++j) {
        for (int i = 0; i < size; ++i) {
          lut.entries_.row(lut.FlatIndex(i, j, k)) << Scalar(i) * scale,
              Scalar(j) * scale, Scalar(k) * scale;
        }
      }
    }
    return lut;
  }

  int size() const { return size_; }
  Eigen::Index num_entries() const { return entries_.rows(); }
  Eigen::Index FlatIndex(int i, int j, int k) const {
    return i + Eigen::Index{size_} * (j + Eigen::Index{size_} * k);
  }

  EntryMatrix& entries() { return entries_; }
  const EntryMatrix& entries() const { return entries_; }

  BasicRgb<Scalar> entry(int i, int j, int k) const {
    return entries_.row(FlatIndex(i, j, k)).transpose();
  }
  void set_entry(int i, int j, int k, const BasicRgb<Scalar>& value) {
    entries_.row(FlatIndex(i, j, k)) = value.transpose();
  }

  // All entries as one vector of length 3 * size^3 (r, g, b interleaved).
  Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> flat() const {
    return {entries_.data(), entries_.size()};
  }
  Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> flat() {
    return {entries_.data(), entries_.size()};
  }

  bool operator==(const BasicLut& other) const {
    return size_ == other.size_ && entries_ == other.entries_;
  }

 private:
  static int CheckedSize(int size) {
    if (size < 2) {
      throw std::invalid_argument("LUT size must be >= 2, got " +
                                  std::to_string(size));
    }
    return size;
  }
  static Eigen::Index Cube(int size) {
    return Eigen::Index{size} * size * size;
  }

  int size_ = 0;
  EntryMatrix entries_;
};

using Lut3D = BasicLut<double>;

inline Lut3D IdentityLut(int size) { return Lut3D::Identity(size); }

namespace internal {

// Lattice cell containing one clamped coordinate and the offset inside it.
// Coordinates within a few ulps of a lattice point snap onto it so that
// lookups at i / (size - 1) hit the stored entry exactly.
template <typename Scalar>
inline std::pair<int, Scalar> CellCoordinate(Scalar value, int size) {
  const Scalar last = Scalar(size - 1);
  Scalar x = std::clamp(value, Scalar(0), Scalar(1)) * last;
  const Scalar nearest = std::nearbyint(x);
  if (std::abs(x - nearest) <=
      Scalar(4) * std::numeric_limits<Scalar>::epsilon() * last) {
    x = nearest;
  }
  const int base = std::min(static_cast<int>(std::floor(x)), size - 2);
  return {base, x - Scalar(base)};
}

}  // namespace internal

// Trilinear interpolation of the eight lattice points enclosing `color`
// (clamped to [0, 1]^3 first).
template <typename Scalar>
BasicRgb<Scalar> Lookup(const BasicLut<Scalar>& lut,
                        const BasicRgb<Scalar>& color) {
  const int size = lut.size();
  const auto [i, fr] = internal::CellCoordinate(color[0], size);
  const auto [j, fg] = internal::CellCoordinate(color[1], size);
  const auto [k, fb] = internal::CellCoordinate(color[2], size);
  const auto& e = lut.entries();
  const Eigen::Index s = size;
  const Eigen::Index base = lut.FlatIndex(i, j, k);
  const Scalar wr[2] = {Scalar(1) - fr, fr};
  const Scalar wg[2] = {Scalar(1) - fg, fg};
  const Scalar wb[2] = {Scalar(1) - fb, fb};
  BasicRgb<Scalar> out = BasicRgb<Scalar>::Zero();
  for (int dk = 0; dk < 2; ++dk) {
    for (int dj = 0; dj < 2; ++dj) {
      for (int di = 0; di < 2; ++di) {
        const Scalar w = wr[di] * wg[dj] * wb[dk];
        out += w * e.row(base + di + s * (dj + s * dk)).transpose();
      }
    }
  }
  return out;
}

// The (at most eight) non-zero trilinear coefficients of a lookup.
struct LatticeWeights {
  std::array<Eigen::Index, 8> index{};
  std::array<double, 8> weight{};
  int count = 0;

  template <typename Scalar>
  BasicRgb<Scalar> Apply(const BasicLut<Scalar>& lut) const {
    BasicRgb<Scalar> out = BasicRgb<Scalar>::Zero();
    for (int n = 0; n < count; ++n) {
      out += Scalar(weight[n]) * lut.entries().row(index[n]).transpose();
    }
    return out;
  }
};

LatticeWeights LookupWeights(int lut_size, const RgbColor& color);

// Replaces foreground pixels by their LUT lookup; background pixels are
// copied unchanged. No clamping is applied to the result.
template <typename Scalar>
BasicImage<Scalar> ApplyToForeground(const BasicLut<Scalar>& lut,
                                     const BasicImage<Scalar>& image,
                                     const Mask& mask) {
  RequireSameShape(image, mask, "ApplyToForeground");
  BasicImage<Scalar> out = image;
  for (Eigen::Index p = 0; p < image.num_pixels(); ++p) {
    if (!mask[p]) continue;
    out.pixels().row(p) = Lookup(lut, image.pixel(p)).transpose().array();
  }
  return out;
}

// Entrywise convex combination sum_l coeffs[l] * basis[l].
template <typename Scalar>
BasicLut<Scalar> Combine(std::span<const BasicLut<Scalar>> basis,
                         const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  if (basis.empty()) throw std::invalid_argument("Combine: empty basis");
  if (coeffs.size() != static_cast<Eigen::Index>(basis.size())) {
    throw std::invalid_argument("Combine: " + std::to_string(coeffs.size()) +
                                " coefficients for " +
                                std::to_string(basis.size()) + " LUTs");
  }
  if ((coeffs.array() < 0).any() || std::abs(coeffs.sum() - 1.0) > 1e-6) {
    throw std::invalid_argument("Combine: coefficients are not on the simplex");
  }
  const int size = basis.front().size();
  BasicLut<Scalar> out(size);
  for (std::size_t l = 0; l < basis.size(); ++l) {
    if (basis[l].size() != size) {
      throw std::invalid_argument("Combine: basis LUT sizes differ");
    }
    out.entries() += Scalar(coeffs[l]) * basis[l].entries();
  }
  return out;
}

template <typename Scalar>
BasicLut<Scalar> Combine(const std::vector<BasicLut<Scalar>>& basis,
                         const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  return Combine(std::span<const BasicLut<Scalar>>(basis), coeffs);
}

// .cube text I/O (3D tables only).
struct CubeFile {
  std::string title;
  RgbColor domain_min = RgbColor::Zero();
  RgbColor domain_max = RgbColor::Ones();
  Lut3D lut;
};

CubeFile ParseCubeFile(std::string_view text);
inline Lut3D ParseCube(std::string_view text) {
  return ParseCubeFile(text).lut;
}
std::string SerializeCube(const Lut3D& lut, const std::string& title = "");

Lut3D LoadCube(const std::string& path);
void SaveCube(const std::string& path, const Lut3D& lut,
              const std::string& title = "");

}  // namespace lutaug

#endif  // LUTAUG_LUT_H_
