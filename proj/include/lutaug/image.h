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

#ifndef LUTAUG_IMAGE_H_
#define LUTAUG_IMAGE_H_

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace lutaug {

template <typename Scalar>
using BasicRgb = Eigen::Matrix<Scalar, 3, 1>;
using RgbColor = BasicRgb<double>;

// Row-major interleaved RGB: pixel p = y * width + x occupies row p.
template <typename Scalar>
class BasicImage {
 public:
  using PixelArray = Eigen::Array<Scalar, Eigen::Dynamic, 3, Eigen::RowMajor>;

  BasicImage() = default;
  BasicImage(int height, int width)
      : height_(height),
        width_(width),
        pixels_(PixelArray::Zero(Eigen::Index{height} * width, 3)) {
    if (height < 0 || width < 0) {
      throw std::invalid_argument("image dimensions must be non-negative");
    }
  }
  BasicImage(int height, int width, PixelArray pixels)
      : height_(height), width_(width), pixels_(std::move(pixels)) {
    if (pixels_.rows() != Eigen::Index{height} * width) {
      throw std::invalid_argument("pixel count does not match " +
                                  std::to_string(height) + "x" +
                                  std::to_string(width));
    }
  }

  int height() const { return height_; }
  int width() const { return width_; }
  Eigen::Index num_pixels() const { return pixels_.rows(); }

  PixelArray& pixels() { return pixels_; }
  const PixelArray& pixels() const { return pixels_; }

  Scalar& at(int y, int x, int c) { return pixels_(Index(y, x), c); }
  Scalar at(int y, int x, int c) const { return pixels_(Index(y, x), c); }

  BasicRgb<Scalar> pixel(Eigen::Index p) const {
    return pixels_.row(p).transpose().matrix();
  }

  template <typename Other>
  bool SameShape(const Other& other) const {
    return height_ == other.height() && width_ == other.width();
  }

  template <typename NewScalar>
  BasicImage<NewScalar> cast() const {
    return BasicImage<NewScalar>(
        height_, width_, pixels_.template cast<NewScalar>().eval());
  }

  bool operator==(const BasicImage& other) const {
    return SameShape(other) && (pixels_ == other.pixels_).all();
  }

 private:
  Eigen::Index Index(int y, int x) const {
    return Eigen::Index{y} * width_ + x;
  }

  int height_ = 0;
  int width_ = 0;
  PixelArray pixels_;
};

using Image = BasicImage<double>;

// Binary foreground mask with the same pixel ordering as BasicImage.
class Mask {
 public:
  Mask() = default;
  Mask(int height, int width, bool value = false)
      : height_(height),
        width_(width),
        foreground_(Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(
            Eigen::Index{height} * width, value)) {}

  // Binarizes 8-bit gray levels: >= 128 is foreground.
  static Mask FromGray(int height, int width,
                       const Eigen::Ref<const Eigen::ArrayXi>& gray);

  int height() const { return height_; }
  int width() const { return width_; }
  Eigen::Index num_pixels() const { return foreground_.rows(); }

  bool operator[](Eigen::Index p) const { return foreground_[p]; }
  bool at(int y, int x) const { return foreground_[Eigen::Index{y} * width_ + x]; }
  void Set(int y, int x, bool value) {
    foreground_[Eigen::Index{y} * width_ + x] = value;
  }
  Eigen::Array<bool, Eigen::Dynamic, 1>& values() { return foreground_; }
  const Eigen::Array<bool, Eigen::Dynamic, 1>& values() const {
    return foreground_;
  }

  Eigen::Index ForegroundCount() const { return foreground_.count(); }
  // 1.0 on foreground, 0.0 elsewhere.
  Eigen::ArrayXd AsChannel() const { return foreground_.cast<double>(); }

  template <typename Other>
  bool SameShape(const Other& other) const {
    return height_ == other.height() && width_ == other.width();
  }
  bool operator==(const Mask& other) const {
    return SameShape(other) && (foreground_ == other.foreground_).all();
  }

 private:
  int height_ = 0;
  int width_ = 0;
  Eigen::Array<bool, Eigen::Dynamic, 1> foreground_;
};

template <typename A, typename B>
void RequireSameShape(const A& a, const B& b, const char* what) {
  if (!a.SameShape(b)) {
    throw std::invalid_argument(
        std::string(what) + ": dimension mismatch (" +
        std::to_string(a.height()) + "x" + std::to_string(a.width()) +
        " vs " + std::to_string(b.height()) + "x" + std::to_string(b.width()) +
        ")");
  }
}

// Bilinear resampling with half-pixel centers; identity when sizes match.
Image ResizeBilinear(const Image& image, int height, int width);
// Nearest-neighbour resampling; identity when sizes match.
Mask ResizeNearest(const Mask& mask, int height, int width);

// Channel-major planes (3 x H*W) for feeding the convolutional encoder.
Eigen::MatrixXd ToPlanes(const Image& image);

// Elementwise clamp to [0, 1].
Image Clamped(const Image& image);

}  // namespace lutaug

#endif  // LUTAUG_IMAGE_H_
