#pragma once

#include <cmath>
#include <stdexcept>

#include "trajcast/core/mat.hpp"

namespace trajcast {

enum class Activation { tanh_fn, linear };

// Time-distributed fully connected layer: applied row by row.
struct DenseParams {
  Mat w;  // out x in
  Vec b;  // out
  Activation act = Activation::tanh_fn;

  size_t input_size() const { return w.cols; }
  size_t output_size() const { return w.rows; }
};

inline void dense_apply(const DenseParams& p, const Mat& in, Mat& out) {
  if (in.cols != p.input_size()) throw std::invalid_argument("dense_apply: width mismatch");
  out = Mat(in.rows, p.output_size());
  for (size_t t = 0; t < in.rows; ++t) {
    matvec(p.w, in.row(t), p.b.data(), out.row(t));
    if (p.act == Activation::tanh_fn)
      for (size_t j = 0; j < out.cols; ++j) out(t, j) = std::tanh(out(t, j));
  }
}

// dL/d(output activations) arrives in `dout`; parameter gradients are
// accumulated scaled, dL/d(input rows) is written to `din`.
inline void dense_backward(const DenseParams& p, const Mat& in, const Mat& out, Mat& dout,
                           DenseParams& grads, Mat& din, double scale) {
  din = Mat(in.rows, in.cols);
  for (size_t t = 0; t < in.rows; ++t) {
    double* d = dout.row(t);
    if (p.act == Activation::tanh_fn) {
      const double* a = out.row(t);
      for (size_t j = 0; j < out.cols; ++j) d[j] *= (1.0 - a[j] * a[j]);
    }
    outer_acc(grads.w, d, in.row(t), scale);
    axpy(scale, d, grads.b.data(), p.output_size());
    matvec_t_acc(p.w, d, din.row(t));
  }
}

}  // namespace trajcast
