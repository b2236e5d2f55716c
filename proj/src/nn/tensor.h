// nn/tensor.h

// Copyright 2026  The fieldasr Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef FIELDASR_NN_TENSOR_H_
#define FIELDASR_NN_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fieldasr {
namespace nn {

using Shape = std::vector<size_t>;

std::string ShapeToString(const Shape &shape);
size_t NumElements(const Shape &shape);

// Dense row-major array of doubles. Rank 0 is a scalar; most of the library
// works with rank-2 matrices.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor Scalar(double v) { return Tensor(Shape{}, v); }
  static Tensor Zeros(size_t rows, size_t cols) { return Tensor(Shape{rows, cols}); }

  const Shape &shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty() && shape_.empty(); }
  // Rank-2 accessors. A rank-1 tensor is viewed as a single row.
  size_t rows() const;
  size_t cols() const;

  double *data() { return data_.data(); }
  const double *data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double> &vector() const { return data_; }

  double &operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }
  double &operator()(size_t r, size_t c) { return data_[r * cols() + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols() + c]; }

  double item() const;
  bool AllFinite() const;
  void Fill(double v);
  // this += scale * other; shapes must hold the same number of elements.
  void AddScaled(const Tensor &other, double scale = 1.0);
  Tensor Row(size_t r) const;

 private:
  Shape shape_;
  std::vector<double> data_;
};

}  // namespace nn
}  // namespace fieldasr

#endif  // FIELDASR_NN_TENSOR_H_
