#pragma once

#include <cstddef>
#include <vector>

namespace trajcast {

using Vec = std::vector<double>;

// Dense row-major matrix of 64-bit reals.
struct Mat {
  size_t rows = 0;
  size_t cols = 0;
  Vec a;

  Mat() = default;
  Mat(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

  double& operator()(size_t r, size_t c) { return a[r * cols + c]; }
  double operator()(size_t r, size_t c) const { return a[r * cols + c]; }
  double* row(size_t r) { return a.data() + r * cols; }
  const double* row(size_t r) const { return a.data() + r * cols; }
  size_t numel() const { return a.size(); }

  bool operator==(const Mat& o) const = default;
};

// Dot product with four independent accumulators; the serial FP-add
// dependency chain would otherwise dominate the big matvecs.
inline double dot(const double* x, const double* y, size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

// out = W x + b
inline void matvec(const Mat& w, const double* x, const double* b, double* out) {
  for (size_t r = 0; r < w.rows; ++r) out[r] = dot(w.row(r), x, w.cols) + b[r];
}

// out += W^T y   (row-major friendly: axpy per row of W)
inline void matvec_t_acc(const Mat& w, const double* y, double* out) {
  for (size_t r = 0; r < w.rows; ++r) {
    const double yr = y[r];
    const double* wr = w.row(r);
    for (size_t c = 0; c < w.cols; ++c) out[c] += yr * wr[c];
  }
}

// W += scale * (y outer x)
inline void outer_acc(Mat& w, const double* y, const double* x, double scale) {
  for (size_t r = 0; r < w.rows; ++r) {
    const double yr = scale * y[r];
    double* wr = w.row(r);
    for (size_t c = 0; c < w.cols; ++c) wr[c] += yr * x[c];
  }
}

inline void axpy(double alpha, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace trajcast
