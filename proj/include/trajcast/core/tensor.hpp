#pragma once

#include <cstddef>
#include <vector>

#include "trajcast/core/mat.hpp"

namespace trajcast {

// N-dimensional row-major container of 64-bit reals. Used where the data
// is naturally more than two-dimensional (e.g. a minibatch of windows,
// shape B x T x N).
struct Tensor {
  std::vector<size_t> shape;
  Vec data;

  Tensor() = default;
  explicit Tensor(std::vector<size_t> s, double fill = 0.0) : shape(std::move(s)) {
    data.assign(numel_of(shape), fill);
  }

  size_t numel() const { return data.size(); }

  static size_t numel_of(const std::vector<size_t>& s) {
    size_t n = 1;
    for (size_t d : s) n *= d;
    return n;
  }

  // pointer to the slice obtained by fixing the first index
  double* slice(size_t i) {
    const size_t stride = numel() / shape.at(0);
    return data.data() + i * stride;
  }
  const double* slice(size_t i) const {
    const size_t stride = numel() / shape.at(0);
    return data.data() + i * stride;
  }
};

}  // namespace trajcast
