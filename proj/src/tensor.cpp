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

#include "qnlp/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qnlp/error.hpp"

namespace qnlp {

namespace {

std::vector<std::size_t> strides_of(std::span<const std::size_t> shape) {
  std::vector<std::size_t> strides(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * shape[i];
  }
  return strides;
}

std::string shape_str(std::span<const std::size_t> shape) {
  std::string out = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + ")";
}

}  // namespace

std::size_t shape_size(std::span<const std::size_t> shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_size(shape_)) {
    throw Error(ErrorKind::ShapeMismatch,
                "tensor data of size " + std::to_string(data_.size()) +
                    " does not fit shape " + shape_str(shape_));
  }
}

Tensor Tensor::scalar(double value) { return Tensor({}, {value}); }

Tensor Tensor::identity(std::size_t dim) {
  Tensor t({dim, dim});
  for (std::size_t i = 0; i < dim; ++i) t.data_[i * dim + i] = 1.0;
  return t;
}

Tensor Tensor::copy_spider(std::size_t arity, std::size_t dim) {
  Tensor t(std::vector<std::size_t>(arity, dim));
  if (arity == 0) {
    t.data_[0] = static_cast<double>(dim);
    return t;
  }
  // Stride of the all-equal diagonal is 1 + dim + dim^2 + ...
  std::size_t step = 0;
  for (std::size_t k = 0, p = 1; k < arity; ++k, p *= dim) step += p;
  for (std::size_t i = 0; i < dim; ++i) t.data_[i * step] = 1.0;
  return t;
}

std::size_t Tensor::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != shape_.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "index rank mismatch");
  }
  std::size_t flat = 0;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= shape_[i]) {
      throw Error(ErrorKind::IndexOutOfRange, "index out of range");
    }
    flat = flat * shape_[i] + index[i];
  }
  return flat;
}

double Tensor::at(std::span<const std::size_t> index) const {
  return data_[flat_index(index)];
}

double& Tensor::at(std::span<const std::size_t> index) {
  return data_[flat_index(index)];
}

Tensor Tensor::permuted(std::span<const std::size_t> axes) const {
  const std::size_t r = rank();
  if (axes.size() != r) {
    throw Error(ErrorKind::ShapeMismatch, "permutation rank mismatch");
  }
  std::vector<std::size_t> new_shape(r);
  for (std::size_t i = 0; i < r; ++i) new_shape[i] = shape_[axes[i]];
  bool identity = true;
  for (std::size_t i = 0; i < r; ++i) identity = identity && axes[i] == i;
  if (identity) return *this;

  const auto old_strides = strides_of(shape_);
  std::vector<std::size_t> src_stride(r);
  for (std::size_t i = 0; i < r; ++i) src_stride[i] = old_strides[axes[i]];

  Tensor out(new_shape);
  std::vector<std::size_t> counter(r, 0);
  std::size_t src = 0;
  for (std::size_t dst = 0; dst < out.data_.size(); ++dst) {
    out.data_[dst] = data_[src];
    for (std::size_t k = r; k-- > 0;) {
      if (++counter[k] < new_shape[k]) {
        src += src_stride[k];
        break;
      }
      src -= src_stride[k] * (new_shape[k] - 1);
      counter[k] = 0;
    }
  }
  return out;
}

Tensor Tensor::scaled(double factor) const {
  Tensor out = *this;
  for (auto& v : out.data_) v *= factor;
  return out;
}

Tensor contract(const Tensor& a, std::span<const std::size_t> axes_a,
                const Tensor& b, std::span<const std::size_t> axes_b) {
  if (axes_a.size() != axes_b.size()) {
    throw Error(ErrorKind::ShapeMismatch, "contraction axis count mismatch");
  }
  std::vector<bool> used_a(a.rank(), false), used_b(b.rank(), false);
  std::size_t inner = 1;
  for (std::size_t i = 0; i < axes_a.size(); ++i) {
    if (a.shape()[axes_a[i]] != b.shape()[axes_b[i]]) {
      throw Error(ErrorKind::ShapeMismatch,
                  "contracting " + shape_str(a.shape()) + " with " +
                      shape_str(b.shape()));
    }
    used_a[axes_a[i]] = true;
    used_b[axes_b[i]] = true;
    inner *= a.shape()[axes_a[i]];
  }

  std::vector<std::size_t> perm_a, perm_b, out_shape;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (!used_a[i]) {
      perm_a.push_back(i);
      out_shape.push_back(a.shape()[i]);
    }
  }
  perm_a.insert(perm_a.end(), axes_a.begin(), axes_a.end());
  perm_b.assign(axes_b.begin(), axes_b.end());
  for (std::size_t i = 0; i < b.rank(); ++i) {
    if (!used_b[i]) {
      perm_b.push_back(i);
      out_shape.push_back(b.shape()[i]);
    }
  }

  const Tensor pa = a.permuted(perm_a);
  const Tensor pb = b.permuted(perm_b);
  const std::size_t rows = pa.size() / inner;
  const std::size_t cols = pb.size() / inner;
  Tensor out(out_shape);
  auto lhs = pa.data();
  auto rhs = pb.data();
  auto dst = out.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = lhs.data() + r * inner;
    double* out_row = dst.data() + r * cols;
    for (std::size_t k = 0; k < inner; ++k) {
      const double v = row[k];
      if (v == 0.0) continue;
      const double* rhs_row = rhs.data() + k * cols;
      for (std::size_t c = 0; c < cols; ++c) out_row[c] += v * rhs_row[c];
    }
  }
  return out;
}

Tensor outer(const Tensor& a, const Tensor& b) {
  return contract(a, {}, b, {});
}

Tensor trace(const Tensor& t, std::size_t i, std::size_t j) {
  if (i == j || i >= t.rank() || j >= t.rank() ||
      t.shape()[i] != t.shape()[j]) {
    throw Error(ErrorKind::ShapeMismatch, "invalid trace axes");
  }
  const std::size_t axes_t[] = {i, j};
  const std::size_t axes_d[] = {0, 1};
  return contract(t, axes_t, Tensor::identity(t.shape()[i]), axes_d);
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw Error(ErrorKind::ShapeMismatch,
                shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

}  // namespace qnlp
