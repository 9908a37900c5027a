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

#include "lutaug/tensor.h"

#include <functional>
#include <numeric>
#include <stdexcept>

namespace lutaug {
namespace {

Eigen::Index Product(const std::vector<int>& shape) {
  Eigen::Index n = 1;
  for (int d : shape) {
    if (d < 0) throw std::invalid_argument("negative tensor dimension");
    n *= d;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<int> shape)
    : shape_(std::move(shape)), values_(Eigen::VectorXd::Zero(Product(shape_))) {}

Tensor::Tensor(std::vector<int> shape, Eigen::VectorXd values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != Product(shape_)) {
    throw std::invalid_argument("tensor of shape " + ShapeString(shape_) +
                                " cannot hold " +
                                std::to_string(values_.size()) + " values");
  }
}

Eigen::Map<RowMatrixXd> Tensor::matrix() {
  const Eigen::Index rows = shape_.empty() ? 1 : shape_[0];
  return {values_.data(), rows, rows == 0 ? 0 : values_.size() / rows};
}

Eigen::Map<const RowMatrixXd> Tensor::matrix() const {
  const Eigen::Index rows = shape_.empty() ? 1 : shape_[0];
  return {values_.data(), rows, rows == 0 ? 0 : values_.size() / rows};
}

std::string ShapeString(const std::vector<int>& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor& ParameterSet::Add(const std::string& name, std::vector<int> shape) {
  return Add(name, Tensor(std::move(shape)));
}

Tensor& ParameterSet::Add(const std::string& name, Tensor tensor) {
  if (contains(name)) {
    throw std::invalid_argument("duplicate parameter block '" + name + "'");
  }
  index_[name] = blocks_.size();
  blocks_.emplace_back(name, std::move(tensor));
  return blocks_.back().second;
}

Tensor& ParameterSet::at(const std::string& name) {
  const auto it = index_.find(name);
  if (it == index_.end()) {
    throw std::out_of_range("no parameter block '" + name + "'");
  }
  return blocks_[it->second].second;
}

const Tensor& ParameterSet::at(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) {
    throw std::out_of_range("no parameter block '" + name + "'");
  }
  return blocks_[it->second].second;
}

ParameterSet ParameterSet::ZerosLike() const {
  ParameterSet out;
  for (const auto& [name, tensor] : blocks_) out.Add(name, tensor.shape());
  return out;
}

void ParameterSet::SetZero() {
  for (auto& block : blocks_) block.second.values().setZero();
}

Eigen::Index ParameterSet::TotalSize() const {
  Eigen::Index n = 0;
  for (const auto& block : blocks_) n += block.second.size();
  return n;
}

bool ParameterSet::SameLayout(const ParameterSet& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].first != other.blocks_[i].first ||
        blocks_[i].second.shape() != other.blocks_[i].second.shape()) {
      return false;
    }
  }
  return true;
}

bool ParameterSet::AllFinite() const {
  for (const auto& block : blocks_) {
    if (!block.second.values().allFinite()) return false;
  }
  return true;
}

}  // namespace lutaug
