#pragma once

#include <cmath>
#include <stdexcept>

#include "trajcast/core/mat.hpp"

namespace trajcast {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Extended LSTM cell with forget gate. Each gate matrix acts on the
// concatenation z = [x_t, h_{t-1}]:
//   f = sig(Wf z + bf)   i = sig(Wi z + bi)   c~ = tanh(Wc z + bc)
//   m_t = f . m_{t-1} + i . c~
//   o = sig(Wo z + bo)   h_t = o . tanh(m_t)
struct LstmParams {
  Mat w_f, w_i, w_c, w_o;  // hidden x (input + hidden)
  Vec b_f, b_i, b_c, b_o;  // hidden

  size_t hidden_size() const { return w_f.rows; }
  size_t input_size() const { return w_f.cols - w_f.rows; }

  void check_shapes() const {
    const size_t h = w_f.rows, z = w_f.cols;
    if (h == 0 || z <= h) throw std::invalid_argument("LstmParams: bad gate shape");
    for (const Mat* w : {&w_i, &w_c, &w_o})
      if (w->rows != h || w->cols != z)
        throw std::invalid_argument("LstmParams: gates must share dimensions");
    for (const Vec* b : {&b_f, &b_i, &b_c, &b_o})
      if (b->size() != h) throw std::invalid_argument("LstmParams: bias size mismatch");
  }
};

// h: cell output; m: internal memory.
struct LstmState {
  Vec h, m;

  static LstmState zero(size_t hidden) { return {Vec(hidden, 0.0), Vec(hidden, 0.0)}; }
};

// Everything the backward pass needs, recorded per timestep.
struct LstmCache {
  Mat z;       // T x (in + H)
  Mat f, i, c, o;  // gate activations, c is the tanh candidate
  Mat m;       // memory after the step
  Mat tanh_m;
  Mat h;
  Vec m_init;  // memory entering t = 0
};

namespace detail {

// One step; gate rows may be null when no cache is kept.
inline void lstm_step_core(const LstmParams& p, const double* z, const double* m_prev,
                           double* f, double* i, double* c, double* o, double* m, double* tanh_m,
                           double* h) {
  const size_t H = p.hidden_size();
  matvec(p.w_f, z, p.b_f.data(), f);
  matvec(p.w_i, z, p.b_i.data(), i);
  matvec(p.w_c, z, p.b_c.data(), c);
  matvec(p.w_o, z, p.b_o.data(), o);
  for (size_t j = 0; j < H; ++j) {
    f[j] = sigmoid(f[j]);
    i[j] = sigmoid(i[j]);
    c[j] = std::tanh(c[j]);
    o[j] = sigmoid(o[j]);
    m[j] = f[j] * m_prev[j] + i[j] * c[j];
    tanh_m[j] = std::tanh(m[j]);
    h[j] = o[j] * tanh_m[j];
  }
}

}  // namespace detail

inline LstmState lstm_step(const LstmParams& params, const Vec& x, const LstmState& prev) {
  params.check_shapes();
  const size_t H = params.hidden_size(), in = params.input_size();
  if (x.size() != in) throw std::invalid_argument("lstm_step: input width mismatch");
  if (prev.h.size() != H || prev.m.size() != H)
    throw std::invalid_argument("lstm_step: state size mismatch");
  Vec z(in + H);
  std::copy(x.begin(), x.end(), z.begin());
  std::copy(prev.h.begin(), prev.h.end(), z.begin() + in);
  LstmState next = LstmState::zero(H);
  Vec f(H), i(H), c(H), o(H), tanh_m(H);
  detail::lstm_step_core(params, z.data(), prev.m.data(), f.data(), i.data(), c.data(), o.data(),
                         next.m.data(), tanh_m.data(), next.h.data());
  return next;
}

// Runs the cell over a whole sequence (rows of `inputs`), writing outputs
// into `h_out` (T x H) and returning the final state. When `cache` is
// non-null every intermediate needed by lstm_backward is recorded.
inline LstmState lstm_scan(const LstmParams& p, const Mat& inputs, const LstmState& init,
                           Mat& h_out, LstmCache* cache = nullptr) {
  const size_t T = inputs.rows, in = p.input_size(), H = p.hidden_size();
  if (inputs.cols != in) throw std::invalid_argument("lstm_scan: input width mismatch");
  h_out = Mat(T, H);

  Vec z(in + H), m_prev = init.m, h_prev = init.h;
  Vec f(H), i(H), c(H), o(H), m(H), tanh_m(H);
  if (cache) {
    cache->z = Mat(T, in + H);
    cache->f = Mat(T, H);
    cache->i = Mat(T, H);
    cache->c = Mat(T, H);
    cache->o = Mat(T, H);
    cache->m = Mat(T, H);
    cache->tanh_m = Mat(T, H);
    cache->h = Mat(T, H);
    cache->m_init = init.m;
  }

  for (size_t t = 0; t < T; ++t) {
    std::copy(inputs.row(t), inputs.row(t) + in, z.begin());
    std::copy(h_prev.begin(), h_prev.end(), z.begin() + in);
    detail::lstm_step_core(p, z.data(), m_prev.data(), f.data(), i.data(), c.data(), o.data(),
                           m.data(), tanh_m.data(), h_out.row(t));
    if (cache) {
      std::copy(z.begin(), z.end(), cache->z.row(t));
      std::copy(f.begin(), f.end(), cache->f.row(t));
      std::copy(i.begin(), i.end(), cache->i.row(t));
      std::copy(c.begin(), c.end(), cache->c.row(t));
      std::copy(o.begin(), o.end(), cache->o.row(t));
      std::copy(m.begin(), m.end(), cache->m.row(t));
      std::copy(tanh_m.begin(), tanh_m.end(), cache->tanh_m.row(t));
      std::copy(h_out.row(t), h_out.row(t) + H, cache->h.row(t));
    }
    m_prev = m;
    h_prev.assign(h_out.row(t), h_out.row(t) + H);
  }
  return {h_prev, m_prev};
}

// Backpropagation through time. `dh_ext` holds dL/dh_t from the layers
// above; parameter gradients are accumulated into `grads` scaled by
// `scale`, and dL/dx_t is accumulated into `dx` (unscaled) when non-null.
inline void lstm_backward(const LstmParams& p, const LstmCache& cache, const Mat& dh_ext,
                          LstmParams& grads, Mat* dx, double scale) {
  const size_t T = cache.h.rows, H = p.hidden_size(), in = p.input_size();
  Vec dh_rec(H, 0.0), dm(H, 0.0);
  Vec da_f(H), da_i(H), da_c(H), da_o(H), dz(in + H);

  for (size_t t = T; t-- > 0;) {
    const double* f = cache.f.row(t);
    const double* i = cache.i.row(t);
    const double* c = cache.c.row(t);
    const double* o = cache.o.row(t);
    const double* tm = cache.tanh_m.row(t);
    const double* m_prev = t == 0 ? cache.m_init.data() : cache.m.row(t - 1);

    for (size_t j = 0; j < H; ++j) {
      const double dh = dh_ext(t, j) + dh_rec[j];
      const double do_ = dh * tm[j];
      da_o[j] = do_ * o[j] * (1.0 - o[j]);
      dm[j] += dh * o[j] * (1.0 - tm[j] * tm[j]);
      const double df = dm[j] * m_prev[j];
      da_f[j] = df * f[j] * (1.0 - f[j]);
      const double di = dm[j] * c[j];
      da_i[j] = di * i[j] * (1.0 - i[j]);
      const double dc = dm[j] * i[j];
      da_c[j] = dc * (1.0 - c[j] * c[j]);
    }

    const double* z = cache.z.row(t);
    outer_acc(grads.w_f, da_f.data(), z, scale);
    outer_acc(grads.w_i, da_i.data(), z, scale);
    outer_acc(grads.w_c, da_c.data(), z, scale);
    outer_acc(grads.w_o, da_o.data(), z, scale);
    axpy(scale, da_f.data(), grads.b_f.data(), H);
    axpy(scale, da_i.data(), grads.b_i.data(), H);
    axpy(scale, da_c.data(), grads.b_c.data(), H);
    axpy(scale, da_o.data(), grads.b_o.data(), H);

    std::fill(dz.begin(), dz.end(), 0.0);
    matvec_t_acc(p.w_f, da_f.data(), dz.data());
    matvec_t_acc(p.w_i, da_i.data(), dz.data());
    matvec_t_acc(p.w_c, da_c.data(), dz.data());
    matvec_t_acc(p.w_o, da_o.data(), dz.data());

    if (dx) axpy(1.0, dz.data(), dx->row(t), in);
    std::copy(dz.begin() + in, dz.end(), dh_rec.begin());
    for (size_t j = 0; j < H; ++j) dm[j] *= f[j];
  }
}

}  // namespace trajcast
