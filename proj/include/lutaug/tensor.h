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

#ifndef LUTAUG_TENSOR_H_
#define LUTAUG_TENSOR_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace lutaug {

using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense row-major float64 array with an explicit shape.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);
  Tensor(std::vector<int> shape, Eigen::VectorXd values);

  const std::vector<int>& shape() const { return shape_; }
  Eigen::Index size() const { return values_.size(); }

  Eigen::VectorXd& values() { return values_; }
  const Eigen::VectorXd& values() const { return values_; }

  // shape[0] rows by product(shape[1:]) columns.
  Eigen::Map<RowMatrixXd> matrix();
  Eigen::Map<const RowMatrixXd> matrix() const;

  bool operator==(const Tensor& other) const {
    return shape_ == other.shape_ && values_ == other.values_;
  }

 private:
  std::vector<int> shape_;
  Eigen::VectorXd values_;
};

std::string ShapeString(const std::vector<int>& shape);

// Ordered collection of named tensors: model parameters, their gradients,
// or optimizer moments.
class ParameterSet {
 public:
  using Block = std::pair<std::string, Tensor>;

  Tensor& Add(const std::string& name, std::vector<int> shape);
  Tensor& Add(const std::string& name, Tensor tensor);

  bool contains(const std::string& name) const {
    return index_.count(name) > 0;
  }
  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;

  const std::vector<Block>& blocks() const { return blocks_; }
  std::vector<Block>& blocks() { return blocks_; }

  ParameterSet ZerosLike() const;
  void SetZero();
  Eigen::Index TotalSize() const;
  bool SameLayout(const ParameterSet& other) const;
  bool AllFinite() const;

  bool operator==(const ParameterSet& other) const {
    return blocks_ == other.blocks_;
  }

 private:
  std::vector<Block> blocks_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace lutaug

#endif  // LUTAUG_TENSOR_H_
