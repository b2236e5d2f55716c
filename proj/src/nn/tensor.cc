// nn/tensor.cc

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

#include "nn/tensor.h"

#include <cmath>
#include <sstream>

#include "base/error.h"

namespace fieldasr {
namespace nn {

std::string ShapeToString(const Shape &shape) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << "]";
  return os.str();
}

size_t NumElements(const Shape &shape) {
  size_t n = 1;
  for (size_t d : shape) n *= d;
  return n;
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), data_(NumElements(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (NumElements(shape_) != data_.size())
    Fail(ErrorKind::kShape, "tensor data length ", data_.size(),
         " does not match shape ", ShapeToString(shape_));
}

size_t Tensor::rows() const {
  if (shape_.size() == 2) return shape_[0];
  if (shape_.size() <= 1) return 1;
  Fail(ErrorKind::kShape, "rows() on rank-", shape_.size(), " tensor");
}

size_t Tensor::cols() const {
  if (shape_.size() == 2) return shape_[1];
  if (shape_.size() == 1) return shape_[0];
  if (shape_.empty()) return 1;
  Fail(ErrorKind::kShape, "cols() on rank-", shape_.size(), " tensor");
}

double Tensor::item() const {
  if (data_.size() != 1)
    Fail(ErrorKind::kShape, "item() on tensor of shape ", ShapeToString(shape_));
  return data_[0];
}

bool Tensor::AllFinite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

void Tensor::Fill(double v) {
  for (double &x : data_) x = v;
}

void Tensor::AddScaled(const Tensor &other, double scale) {
  if (other.size() != size())
    Fail(ErrorKind::kShape, "AddScaled: ", ShapeToString(shape_), " vs ",
         ShapeToString(other.shape_));
  const double *o = other.data();
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += scale * o[i];
}

Tensor Tensor::Row(size_t r) const {
  size_t c = cols();
  if (r >= rows()) Fail(ErrorKind::kRange, "row ", r, " out of ", rows());
  return Tensor(Shape{1, c},
                std::vector<double>(data_.begin() + r * c, data_.begin() + (r + 1) * c));
}

}  // namespace nn
}  // namespace fieldasr
