#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "trajcast/core/mat.hpp"

namespace trajcast {

// First-order Savitzky-Golay smoothing / differentiation.
//
// At each sample the filter fits a least-squares line over a centered
// window and evaluates it (or its slope) at the sample. Interior points
// with a symmetric window reduce to the window mean (smoothing) and to
// sum(j * s[t+j]) / sum(j^2) (slope). Boundary points keep the output
// aligned with the input by fitting over the truncated asymmetric window
// instead of mirroring or dropping samples.
struct FilterSpec {
  size_t window_length = 11;  // odd, >= 3
  int polynomial_order = 1;   // only degree 1 is supported
  double sample_period = 0.1; // seconds

  void validate() const {
    if (window_length < 3 || window_length % 2 == 0)
      throw std::invalid_argument("FilterSpec: window_length must be odd and >= 3");
    if (polynomial_order != 1)
      throw std::invalid_argument("FilterSpec: only polynomial_order 1 is supported");
    if (sample_period <= 0.0)
      throw std::invalid_argument("FilterSpec: sample_period must be positive");
  }
};

namespace detail {

// Least-squares line fit of s[lo..hi] against sample index, returning
// (value at t, slope per sample). Closed form of the 2x2 normal equations
// with indices centered on their mean.
inline void line_fit_window(const Vec& s, size_t lo, size_t hi, size_t t,
                            double& value_at_t, double& slope) {
  const size_t n = hi - lo + 1;
  double mean_i = 0.0, mean_s = 0.0;
  for (size_t i = lo; i <= hi; ++i) {
    mean_i += static_cast<double>(i);
    mean_s += s[i];
  }
  mean_i /= static_cast<double>(n);
  mean_s /= static_cast<double>(n);

  double sxy = 0.0, sxx = 0.0;
  for (size_t i = lo; i <= hi; ++i) {
    const double di = static_cast<double>(i) - mean_i;
    sxy += di * (s[i] - mean_s);
    sxx += di * di;
  }
  slope = sxy / sxx;  // n >= 2 always holds: the window half-width is >= 1
  value_at_t = mean_s + slope * (static_cast<double>(t) - mean_i);
}

inline void check_length(const Vec& s, const FilterSpec& spec) {
  spec.validate();
  if (s.size() < spec.window_length)
    throw std::invalid_argument("savgol: series shorter than window_length");
}

}  // namespace detail

inline Vec savgol_smooth(const Vec& series, const FilterSpec& spec) {
  detail::check_length(series, spec);
  const size_t n = series.size();
  const size_t h = spec.window_length / 2;
  Vec out(n);
  for (size_t t = 0; t < n; ++t) {
    const size_t lo = t >= h ? t - h : 0;
    const size_t hi = t + h < n ? t + h : n - 1;
    double value, slope;
    detail::line_fit_window(series, lo, hi, t, value, slope);
    out[t] = value;
  }
  return out;
}

// Derivative in units of 1/second (slope per sample divided by the period).
inline Vec savgol_derivative(const Vec& series, const FilterSpec& spec) {
  detail::check_length(series, spec);
  const size_t n = series.size();
  const size_t h = spec.window_length / 2;
  Vec out(n);
  for (size_t t = 0; t < n; ++t) {
    const size_t lo = t >= h ? t - h : 0;
    const size_t hi = t + h < n ? t + h : n - 1;
    double value, slope;
    detail::line_fit_window(series, lo, hi, t, value, slope);
    out[t] = slope / spec.sample_period;
  }
  return out;
}

// Per-vehicle smoothed kinematic state, frame-aligned with the raw track.
struct SmoothedTrack {
  int64_t vehicle_id = 0;
  std::vector<int64_t> frame_ids;
  Vec x;   // lateral position, m
  Vec y;   // longitudinal position, m
  Vec vx;  // lateral velocity, m/s
  Vec vy;  // longitudinal velocity, m/s

  size_t size() const { return frame_ids.size(); }
};

}  // namespace trajcast
