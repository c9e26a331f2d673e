// Copyright 2026 The qnlp-ansatz Authors
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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qnlp {

/// Dense row-major real tensor. A rank-0 tensor holds a single scalar.
class Tensor {
 public:
  Tensor() : data_(1, 0.0) {}
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor scalar(double value);
  /// d x d identity, i.e. the cup/cap delta.
  static Tensor identity(std::size_t dim);
  /// Generalized Kronecker delta: 1 iff all `arity` indices agree.
  static Tensor copy_spider(std::size_t arity, std::size_t dim);

  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  double at(std::span<const std::size_t> index) const;
  double& at(std::span<const std::size_t> index);
  double at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }
  double& at(std::initializer_list<std::size_t> index) {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }

  /// Result axis i is input axis `axes[i]`.
  Tensor permuted(std::span<const std::size_t> axes) const;
  Tensor scaled(double factor) const;

 private:
  std::size_t flat_index(std::span<const std::size_t> index) const;

  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

std::size_t shape_size(std::span<const std::size_t> shape);

/// Sums over paired axes (axes_a[i] with axes_b[i]). The result carries the
/// remaining axes of `a` in order, followed by the remaining axes of `b`.
Tensor contract(const Tensor& a, std::span<const std::size_t> axes_a,
                const Tensor& b, std::span<const std::size_t> axes_b);

Tensor outer(const Tensor& a, const Tensor& b);

/// Contracts axes i and j of `t` against the identity.
Tensor trace(const Tensor& t, std::size_t i, std::size_t j);

/// Infinity-norm distance; shapes must agree.
double max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace qnlp
