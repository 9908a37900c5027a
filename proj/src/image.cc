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

#include "lutaug/image.h"

#include <algorithm>
#include <cmath>

namespace lutaug {

Mask Mask::FromGray(int height, int width,
                    const Eigen::Ref<const Eigen::ArrayXi>& gray) {
  if (gray.size() != Eigen::Index{height} * width) {
    throw std::invalid_argument("mask gray level count does not match size");
  }
  Mask mask(height, width);
  mask.foreground_ = gray >= 128;
  return mask;
}

Image ResizeBilinear(const Image& image, int height, int width) {
  if (image.height() == height && image.width() == width) return image;
  if (image.height() == 0 || image.width() == 0) {
    throw std::invalid_argument("cannot resize an empty image");
  }
  Image out(height, width);
  const double sy = static_cast<double>(image.height()) / height;
  const double sx = static_cast<double>(image.width()) / width;
  const int max_y = image.height() - 1;
  const int max_x = image.width() - 1;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, double(max_y));
    const int y0 = std::min(static_cast<int>(fy), max_y);
    const int y1 = std::min(y0 + 1, max_y);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, double(max_x));
      const int x0 = std::min(static_cast<int>(fx), max_x);
      const int x1 = std::min(x0 + 1, max_x);
      const double wx = fx - x0;
      for (int c = 0; c < 3; ++c) {
        const double top =
            (1 - wx) * image.at(y0, x0, c) + wx * image.at(y0, x1, c);
        const double bottom =
            (1 - wx) * image.at(y1, x0, c) + wx * image.at(y1, x1, c);
        out.at(y, x, c) = (1 - wy) * top + wy * bottom;
      }
    }
  }
  return out;
}

Mask ResizeNearest(const Mask& mask, int height, int width) {
  if (mask.height() == height && mask.width() == width) return mask;
  if (mask.height() == 0 || mask.width() == 0) {
    throw std::invalid_argument("cannot resize an empty mask");
  }
  Mask out(height, width);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(
        static_cast<int>((y + 0.5) * mask.height() / height), mask.height() - 1);
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(
          static_cast<int>((x + 0.5) * mask.width() / width), mask.width() - 1);
      out.Set(y, x, mask.at(sy, sx));
    }
  }
  return out;
}

Eigen::MatrixXd ToPlanes(const Image& image) {
  return image.pixels().transpose().matrix();
}

Image Clamped(const Image& image) {
  return Image(image.height(), image.width(),
               image.pixels().cwiseMax(0.0).cwiseMin(1.0));
}

}  // namespace lutaug
