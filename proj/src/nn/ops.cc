// nn/ops.cc

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

#include "nn/ops.h"

#include <algorithm>
#include <cmath>

#include "base/error.h"

namespace fieldasr {
namespace nn {

namespace {

struct Dims {
  size_t rows;
  size_t cols;
};

Dims Dims2(const Tensor &t, const char *op) {
  if (t.rank() > 2)
    Fail(ErrorKind::kShape, op, ": expected rank <= 2, got ", ShapeToString(t.shape()));
  return {t.rows(), t.cols()};
}

[[noreturn]] void ShapeMismatch(const char *op, const Tensor &a, const Tensor &b) {
  Fail(ErrorKind::kShape, "shape mismatch in ", op, ": ", ShapeToString(a.shape()),
       " vs ", ShapeToString(b.shape()));
}

void CheckSameTape(Var a, Var b, const char *op) {
  if (a.tape() != b.tape() || a.tape() == nullptr)
    Fail(ErrorKind::kState, op, ": operands from different tapes");
}

// Index of element k of group g when normalizing along `axis`.
inline size_t AxisIndex(const Dims &d, int axis, size_t g, size_t k) {
  return axis == 1 ? g * d.cols + k : k * d.cols + g;
}

int NormalizeAxis(int axis, const char *op) {
  if (axis == -1) return 1;
  if (axis != 0 && axis != 1) Fail(ErrorKind::kParameter, op, ": bad axis ", axis);
  return axis;
}

Tensor SoftmaxImpl(const Tensor &x, int axis, bool log_space) {
  Dims d{x.rows(), x.cols()};
  Tensor y(x.shape());
  size_t groups = axis == 1 ? d.rows : d.cols;
  size_t len = axis == 1 ? d.cols : d.rows;
  for (size_t g = 0; g < groups; ++g) {
    double mx = -INFINITY;
    for (size_t k = 0; k < len; ++k) mx = std::max(mx, x[AxisIndex(d, axis, g, k)]);
    double sum = 0.0;
    for (size_t k = 0; k < len; ++k) sum += std::exp(x[AxisIndex(d, axis, g, k)] - mx);
    double log_sum = std::log(sum);
    for (size_t k = 0; k < len; ++k) {
      size_t i = AxisIndex(d, axis, g, k);
      double shifted = x[i] - mx;
      y[i] = log_space ? shifted - log_sum : std::exp(shifted - log_sum);
    }
  }
  return y;
}

}  // namespace

void SoftmaxRowsInPlace(Tensor *t) { *t = SoftmaxImpl(*t, 1, false); }
void LogSoftmaxRowsInPlace(Tensor *t) { *t = SoftmaxImpl(*t, 1, true); }

Var MatMul(Var a, Var b) {
  CheckSameTape(a, b, "matmul");
  const Tensor &av = a.value(), &bv = b.value();
  Dims da = Dims2(av, "matmul"), db = Dims2(bv, "matmul");
  if (da.cols != db.rows) ShapeMismatch("matmul", av, bv);
  Tensor out = Tensor::Zeros(da.rows, db.cols);
  const size_t m = da.rows, k = da.cols, n = db.cols;
  const double *A = av.data(), *B = bv.data();
  double *C = out.data();
  for (size_t i = 0; i < m; ++i) {
    for (size_t p = 0; p < k; ++p) {
      const double aip = A[i * k + p];
      const double *brow = B + p * n;
      double *crow = C + i * n;
      for (size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  int ia = a.id(), ib = b.id();
  return a.tape()->Record("matmul", std::move(out), {a, b}, [=](Tape &t, int self) {
    const Tensor &g = t.OutGrad(self);
    const double *G = g.data();
    if (t.RequiresGrad(ia)) {
      const double *Bv = t.Value(ib).data();
      double *dA = t.GradBuffer(ia).data();
      for (size_t i = 0; i < m; ++i)
        for (size_t p = 0; p < k; ++p) {
          const double *brow = Bv + p * n;
          const double *grow = G + i * n;
          double acc = 0.0;
          for (size_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
          dA[i * k + p] += acc;
        }
    }
    if (t.RequiresGrad(ib)) {
      const double *Av = t.Value(ia).data();
      double *dB = t.GradBuffer(ib).data();
      for (size_t i = 0; i < m; ++i)
        for (size_t p = 0; p < k; ++p) {
          const double aip = Av[i * k + p];
          const double *grow = G + i * n;
          double *dbrow = dB + p * n;
          for (size_t j = 0; j < n; ++j) dbrow[j] += aip * grow[j];
        }
    }
  });
}

Var Add(Var a, Var b) {
  CheckSameTape(a, b, "add");
  const Tensor &av = a.value(), &bv = b.value();
  bool broadcast;
  if (av.shape() == bv.shape()) {
    broadcast = false;
  } else {
    Dims da = Dims2(av, "add"), db = Dims2(bv, "add");
    if (db.rows != 1 || db.cols != da.cols) ShapeMismatch("add", av, bv);
    broadcast = true;
  }
  Tensor out = av;
  size_t cols = broadcast ? bv.size() : out.size();
  for (size_t i = 0; i < out.size(); ++i) out[i] += bv[broadcast ? i % cols : i];
  int ia = a.id(), ib = b.id();
  return a.tape()->Record("add", std::move(out), {a, b}, [=](Tape &t, int self) {
    const Tensor &g = t.OutGrad(self);
    if (t.RequiresGrad(ia)) t.GradBuffer(ia).AddScaled(g);
    if (t.RequiresGrad(ib)) {
      Tensor &db = t.GradBuffer(ib);
      for (size_t i = 0; i < g.size(); ++i) db[broadcast ? i % cols : i] += g[i];
    }
  });
}

Var Sub(Var a, Var b) {
  CheckSameTape(a, b, "sub");
  const Tensor &av = a.value(), &bv = b.value();
  if (av.shape() != bv.shape()) ShapeMismatch("sub", av, bv);
  Tensor out = av;
  out.AddScaled(bv, -1.0);
  int ia = a.id(), ib = b.id();
  return a.tape()->Record("sub", std::move(out), {a, b}, [=](Tape &t, int self) {
    const Tensor &g = t.OutGrad(self);
    if (t.RequiresGrad(ia)) t.GradBuffer(ia).AddScaled(g);
    if (t.RequiresGrad(ib)) t.GradBuffer(ib).AddScaled(g, -1.0);
  });
}

Var Mul(Var a, Var b) {
  CheckSameTape(a, b, "mul");
  const Tensor &av = a.value(), &bv = b.value();
  if (av.shape() != bv.shape()) ShapeMismatch("mul", av, bv);
  Tensor out = av;
  for (size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  int ia = a.id(), ib = b.id();
  return a.tape()->Record("mul", std::move(out), {a, b}, [=](Tape &t, int self) {
    const Tensor &g = t.OutGrad(self);
    if (t.RequiresGrad(ia)) {
      const Tensor &bval = t.Value(ib);
      Tensor &da = t.GradBuffer(ia);
      for (size_t i = 0; i < g.size(); ++i) da[i] += g[i] * bval[i];
    }
    if (t.RequiresGrad(ib)) {
      const Tensor &aval = t.Value(ia);
      Tensor &db = t.GradBuffer(ib);
      for (size_t i = 0; i < g.size(); ++i) db[i] += g[i] * aval[i];
    }
  });
}

Var Scale(Var a, double factor) {
  Tensor out = a.value();
  for (size_t i = 0; i < out.size(); ++i) out[i] *= factor;
  int ia = a.id();
  return a.tape()->Record("scale", std::move(out), {a}, [=](Tape &t, int self) {
    t.GradBuffer(ia).AddScaled(t.OutGrad(self), factor);
  });
}

Var Tanh(Var a) {
  Tensor out = a.value();
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i]);
  int ia = a.id();
  return a.tape()->Record("tanh", std::move(out), {a}, [=](Tape &t, int self) {
    const Tensor &g = t.OutGrad(self), &y = t.Value(self);
    Tensor &da = t.GradBuffer(ia);
    for (size_t i = 0; i < g.size(); ++i) da[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Var Sigmoid(Var a) {
  Tensor out = a.value();
  for (size_t i = 0; i < out.size(); ++i) {
    double x = out[i];
    // Split by sign so exp never overflows.
    out[i] = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  }
  int ia = a.id();
  return a.tape()->Record("sigmoid", std::move(out), {a}, [=](Tape &t, int self) {
    const Tensor &g = t.OutGrad(self), &y = t.Value(self);
    Tensor &da = t.GradBuffer(ia);
    for (size_t i = 0; i < g.size(); ++i) da[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var Softmax(Var a, int axis) {
  const Tensor &av = a.value();
  Dims d = Dims2(av, "softmax");
  axis = NormalizeAxis(axis, "softmax");
  Tensor out = SoftmaxImpl(av, axis, false);
  int ia = a.id();
  return a.tape()->Record("softmax", std::move(out), {a}, [=](Tape &t, int self) {
    const Tensor &g = t.OutGrad(self), &y = t.Value(self);
    Tensor &da = t.GradBuffer(ia);
    size_t groups = axis == 1 ? d.rows : d.cols, len = axis == 1 ? d.cols : d.rows;
    for (size_t gi = 0; gi < groups; ++gi) {
      double dot = 0.0;
      for (size_t k = 0; k < len; ++k) {
        size_t i = AxisIndex(d, axis, gi, k);
        dot += g[i] * y[i];
      }
      for (size_t k = 0; k < len; ++k) {
        size_t i = AxisIndex(d, axis, gi, k);
        da[i] += y[i] * (g[i] - dot);
      }
    }
  });
}

Var LogSoftmax(Var a, int axis) {
  const Tensor &av = a.value();
  Dims d = Dims2(av, "log_softmax");
  axis = NormalizeAxis(axis, "log_softmax");
  Tensor out = SoftmaxImpl(av, axis, true);
  int ia = a.id();
  return a.tape()->Record("log_softmax", std::move(out), {a}, [=](Tape &t, int self) {
    const Tensor &g = t.OutGrad(self), &y = t.Value(self);
    Tensor &da = t.GradBuffer(ia);
    size_t groups = axis == 1 ? d.rows : d.cols, len = axis == 1 ? d.cols : d.rows;
    for (size_t gi = 0; gi < groups; ++gi) {
      double gsum = 0.0;
      for (size_t k = 0; k < len; ++k) gsum += g[AxisIndex(d, axis, gi, k)];
      for (size_t k = 0; k < len; ++k) {
        size_t i = AxisIndex(d, axis, gi, k);
        da[i] += g[i] - std::exp(y[i]) * gsum;
      }
    }
  });
}

Var Concat(std::span<const Var> parts, int axis) {
  if (parts.empty()) Fail(ErrorKind::kShape, "concat of zero tensors");
  axis = NormalizeAxis(axis, "concat");
  Tape *tape = parts[0].tape();
  Dims first = Dims2(parts[0].value(), "concat");
  size_t total = 0;
  for (const Var &p : parts) {
    if (p.tape() != tape) Fail(ErrorKind::kState, "concat: operands from different tapes");
    Dims d = Dims2(p.value(), "concat");
    if (axis == 0 ? d.cols != first.cols : d.rows != first.rows)
      ShapeMismatch("concat", parts[0].value(), p.value());
    total += axis == 0 ? d.rows : d.cols;
  }
  size_t out_rows = axis == 0 ? total : first.rows;
  size_t out_cols = axis == 0 ? first.cols : total;
  Tensor out = Tensor::Zeros(out_rows, out_cols);
  std::vector<int> ids;
  std::vector<size_t> offsets;
  size_t off = 0;
  for (const Var &p : parts) {
    const Tensor &v = p.value();
    Dims d{v.rows(), v.cols()};
    for (size_t r = 0; r < d.rows; ++r)
      for (size_t c = 0; c < d.cols; ++c) {
        size_t orow = axis == 0 ? r + off : r, ocol = axis == 0 ? c : c + off;
        out[orow * out_cols + ocol] = v[r * d.cols + c];
      }
    ids.push_back(p.id());
    offsets.push_back(off);
    off += axis == 0 ? d.rows : d.cols;
  }
  auto backward = [=](Tape &t, int self) {
    const Tensor &g = t.OutGrad(self);
    for (size_t pi = 0; pi < ids.size(); ++pi) {
      if (!t.RequiresGrad(ids[pi])) continue;
      Tensor &dp = t.GradBuffer(ids[pi]);
      size_t rows = dp.rows(), cols = dp.cols();
      for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) {
          size_t orow = axis == 0 ? r + offsets[pi] : r;
          size_t ocol = axis == 0 ? c : c + offsets[pi];
          dp[r * cols + c] += g[orow * out_cols + ocol];
        }
    }
  };
  return tape->Record("concat", std::move(out), parts, backward);
}

Var Slice(Var a, int axis, size_t begin, size_t end) {
  const Tensor &av = a.value();
  Dims d = Dims2(av, "slice");
  axis = NormalizeAxis(axis, "slice");
  size_t extent = axis == 0 ? d.rows : d.cols;
  if (begin > end || end > extent)
    Fail(ErrorKind::kShape, "slice [", begin, ",", end, ") out of bounds for ",
         ShapeToString(av.shape()), " on axis ", axis);
  size_t rows = axis == 0 ? end - begin : d.rows;
  size_t cols = axis == 0 ? d.cols : end - begin;
  Tensor out = Tensor::Zeros(rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c)
      out[r * cols + c] = axis == 0 ? av[(r + begin) * d.cols + c] : av[r * d.cols + c + begin];
  int ia = a.id();
  return a.tape()->Record("slice", std::move(out), {a}, [=](Tape &t, int self) {
    const Tensor &g = t.OutGrad(self);
    Tensor &da = t.GradBuffer(ia);
    for (size_t r = 0; r < rows; ++r)
      for (size_t c = 0; c < cols; ++c) {
        size_t src = axis == 0 ? (r + begin) * d.cols + c : r * d.cols + c + begin;
        da[src] += g[r * cols + c];
      }
  });
}

Var Transpose(Var a) {
  const Tensor &av = a.value();
  Dims d = Dims2(av, "transpose");
  Tensor out = Tensor::Zeros(d.cols, d.rows);
  for (size_t r = 0; r < d.rows; ++r)
    for (size_t c = 0; c < d.cols; ++c) out[c * d.rows + r] = av[r * d.cols + c];
  int ia = a.id();
  return a.tape()->Record("transpose", std::move(out), {a}, [=](Tape &t, int self) {
    const Tensor &g = t.OutGrad(self);
    Tensor &da = t.GradBuffer(ia);
    for (size_t r = 0; r < d.rows; ++r)
      for (size_t c = 0; c < d.cols; ++c) da[r * d.cols + c] += g[c * d.rows + r];
  });
}

Var EmbeddingLookup(Var table, std::span<const int> ids) {
  const Tensor &tv = table.value();
  Dims d = Dims2(tv, "embedding_lookup");
  Tensor out = Tensor::Zeros(ids.size(), d.cols);
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<size_t>(ids[i]) >= d.rows)
      Fail(ErrorKind::kRange, "embedding_lookup: id ", ids[i], " outside table of ",
           d.rows, " rows");
    std::copy_n(tv.data() + ids[i] * d.cols, d.cols, out.data() + i * d.cols);
  }
  std::vector<int> idv(ids.begin(), ids.end());
  int it = table.id();
  return table.tape()->Record("embedding_lookup", std::move(out), {table},
                              [=](Tape &t, int self) {
    const Tensor &g = t.OutGrad(self);
    Tensor &dt = t.GradBuffer(it);
    for (size_t i = 0; i < idv.size(); ++i)
      for (size_t c = 0; c < d.cols; ++c) dt[idv[i] * d.cols + c] += g[i * d.cols + c];
  });
}

Var CrossEntropy(Var logits, std::span<const int> targets, int ignore_index) {
  const Tensor &lv = logits.value();
  Dims d = Dims2(lv, "cross_entropy");
  if (targets.size() != d.rows)
    Fail(ErrorKind::kShape, "cross_entropy: ", targets.size(), " targets for logits ",
         ShapeToString(lv.shape()));
  Tensor logp = SoftmaxImpl(lv, 1, true);
  double total = 0.0;
  size_t count = 0;
  for (size_t r = 0; r < d.rows; ++r) {
    int tgt = targets[r];
    if (tgt == ignore_index) continue;
    if (tgt < 0 || static_cast<size_t>(tgt) >= d.cols)
      Fail(ErrorKind::kRange, "cross_entropy: target ", tgt, " outside ", d.cols, " classes");
    total -= logp[r * d.cols + tgt];
    ++count;
  }
  double loss = count ? total / static_cast<double>(count) : 0.0;
  std::vector<int> tv(targets.begin(), targets.end());
  int il = logits.id();
  return logits.tape()->Record("cross_entropy", Tensor::Scalar(loss), {logits},
                               [=, logp = std::move(logp)](Tape &t, int self) {
    if (count == 0) return;
    double g = t.OutGrad(self).item() / static_cast<double>(count);
    Tensor &dl = t.GradBuffer(il);
    for (size_t r = 0; r < d.rows; ++r) {
      if (tv[r] == ignore_index) continue;
      for (size_t c = 0; c < d.cols; ++c) {
        double p = std::exp(logp[r * d.cols + c]);
        dl[r * d.cols + c] += g * (p - (static_cast<int>(c) == tv[r] ? 1.0 : 0.0));
      }
    }
  });
}

Var Sum(Var a) {
  double s = 0.0;
  for (double v : a.value().values()) s += v;
  int ia = a.id();
  return a.tape()->Record("sum", Tensor::Scalar(s), {a}, [=](Tape &t, int self) {
    double g = t.OutGrad(self).item();
    Tensor &da = t.GradBuffer(ia);
    for (size_t i = 0; i < da.size(); ++i) da[i] += g;
  });
}

}  // namespace nn
}  // namespace fieldasr
