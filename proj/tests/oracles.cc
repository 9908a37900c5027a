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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lutaug::oracle {

Eigen::Vector3d Trilinear(const Lut3D& lut, const Eigen::Vector3d& color) {
  const int n = lut.size() - 1;
  int lo[3];
  double frac[3];
  for (int c = 0; c < 3; ++c) {
    const double u = std::min(1.0, std::max(0.0, color[c])) * n;
    lo[c] = std::min(static_cast<int>(std::floor(u)), n - 1);
    frac[c] = u - lo[c];
  }
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (int corner = 0; corner < 8; ++corner) {
    const int di = corner & 1, dj = (corner >> 1) & 1, dk = (corner >> 2) & 1;
    const double w = (di ? frac[0] : 1 - frac[0]) * (dj ? frac[1] : 1 - frac[1]) *
                     (dk ? frac[2] : 1 - frac[2]);
    const int i = lo[0] + di, j = lo[1] + dj, k = lo[2] + dk;
    const int flat = i + lut.size() * (j + lut.size() * k);
    out += w * lut.entries().row(flat).transpose();
  }
  return out;
}

double PartitionSse(const Eigen::MatrixXd& points, const std::vector<int>& assignment,
                    int k) {
  double sse = 0.0;
  for (int c = 0; c < k; ++c) {
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(points.cols());
    int count = 0;
    for (int i = 0; i < points.rows(); ++i) {
      if (assignment[i] == c) {
        mean += points.row(i);
        ++count;
      }
    }
    if (count == 0) continue;
    mean /= count;
    for (int i = 0; i < points.rows(); ++i) {
      if (assignment[i] == c) sse += (points.row(i) - mean).squaredNorm();
    }
  }
  return sse;
}

double BestTwoPartitionSse(const Eigen::MatrixXd& points) {
  const int n = static_cast<int>(points.rows());
  double best = std::numeric_limits<double>::infinity();
  // Point 0 always in group 0; every non-empty group 1 among the others.
  for (unsigned bits = 1; bits < (1u << (n - 1)); ++bits) {
    std::vector<int> assignment(n, 0);
    for (int i = 1; i < n; ++i) assignment[i] = (bits >> (i - 1)) & 1;
    best = std::min(best, PartitionSse(points, assignment, 2));
  }
  return best;
}

double LoopMse(const Image& a, const Image& b) {
  double sum = 0.0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        const double d = 255.0 * a.at(y, x, c) - 255.0 * b.at(y, x, c);
        sum += d * d;
      }
    }
  }
  return sum / (3.0 * a.height() * a.width());
}

double LoopFmse(const Image& a, const Image& b, const Mask& mask) {
  double sum = 0.0;
  long count = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (!mask.at(y, x)) continue;
      ++count;
      for (int c = 0; c < 3; ++c) {
        const double d = 255.0 * a.at(y, x, c) - 255.0 * b.at(y, x, c);
        sum += d * d;
      }
    }
  }
  return sum / (3.0 * count);
}

namespace {

// Mirror with the edge sample repeated: -1 -> 0, -2 -> 1, n -> n - 1.
int Mirror(int i, int n) {
  const int period = 2 * n;
  int m = ((i % period) + period) % period;
  return m < n ? m : period - 1 - m;
}

}  // namespace

Eigen::MatrixXd DirectSsimMap(const Image& a, const Image& b) {
  constexpr int kRadius = 5;
  constexpr double kSigma = 1.5;
  const double c1 = std::pow(0.01 * 255.0, 2), c2 = std::pow(0.03 * 255.0, 2);
  double window[11][11];
  double total = 0.0;
  for (int dy = -kRadius; dy <= kRadius; ++dy) {
    for (int dx = -kRadius; dx <= kRadius; ++dx) {
      const double w = std::exp(-(dx * dx + dy * dy) / (2 * kSigma * kSigma));
      window[dy + kRadius][dx + kRadius] = w;
      total += w;
    }
  }
  const int h = a.height(), w = a.width();
  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(h, w);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
        for (int dy = -kRadius; dy <= kRadius; ++dy) {
          for (int dx = -kRadius; dx <= kRadius; ++dx) {
            const double wt = window[dy + kRadius][dx + kRadius] / total;
            const int yy = Mirror(y + dy, h), xx = Mirror(x + dx, w);
            const double p = 255.0 * a.at(yy, xx, c), q = 255.0 * b.at(yy, xx, c);
            mx += wt * p;
            my += wt * q;
            sxx += wt * p * p;
            syy += wt * q * q;
            sxy += wt * p * q;
          }
        }
        const double vx = sxx - mx * mx, vy = syy - my * my, cov = sxy - mx * my;
        map(y, x) += ((2 * mx * my + c1) * (2 * cov + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2)) / 3.0;
      }
    }
  }
  return map;
}

double DirectSsim(const Image& a, const Image& b) { return DirectSsimMap(a, b).mean(); }

double DirectFssim(const Image& a, const Image& b, const Mask& mask) {
  const Eigen::MatrixXd map = DirectSsimMap(a, b);
  double sum = 0.0;
  long count = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (mask.at(y, x)) {
        sum += map(y, x);
        ++count;
      }
    }
  }
  return sum / count;
}

double MonteCarloKl(const Eigen::VectorXd& mu, const Eigen::VectorXd& log_var,
                    int samples, uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal;
  const Eigen::VectorXd sigma = (0.5 * log_var.array()).exp();
  double sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    double log_ratio = 0.0;
    for (int d = 0; d < mu.size(); ++d) {
      const double e = normal(engine);
      const double z = mu[d] + sigma[d] * e;
      // log q(z) - log p(z); the 2*pi terms cancel.
      log_ratio += -0.5 * log_var[d] - 0.5 * e * e + 0.5 * z * z;
    }
    sum += log_ratio;
  }
  return sum / samples;
}

double GridSearchTwoModelScore(double wins_01, double wins_10) {
  const auto ll = [&](double d) {
    const double p = 1.0 / (1.0 + std::exp(-d));
    return wins_01 * std::log(p) + wins_10 * std::log(1.0 - p);
  };
  double best_d = 0.0, best = ll(0.0);
  for (double d = -10.0; d <= 10.0; d += 1e-3) {
    if (ll(d) > best) {
      best = ll(d);
      best_d = d;
    }
  }
  double lo = best_d - 1e-3, hi = best_d + 1e-3;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (ll(m1) < ll(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return 0.25 * (lo + hi);
}

double CentralDifference(const std::function<double(const Eigen::VectorXd&)>& f,
                         Eigen::VectorXd x, int i, double h) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const double plus = f(x);
  x[i] = x0 - h;
  const double minus = f(x);
  return (plus - minus) / (2.0 * h);
}

}  // namespace lutaug::oracle
