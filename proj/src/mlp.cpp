#include "evac/mlp.hpp"

#include <cmath>

namespace evac {

Linear Linear::zeros(int in, int out) {
  Linear l;
  l.in = in;
  l.out = out;
  l.w.assign(static_cast<std::size_t>(in) * out, 0.0);
  l.b.assign(out, 0.0);
  return l;
}

Linear Linear::xavier(int in, int out, Rng& rng) {
  Linear l = zeros(in, out);
  const double scale = std::sqrt(2.0 / (in + out));
  for (double& v : l.w) v = rng.normal() * scale;
  return l;
}

void Linear::forward(const double* x, double* y) const {
  for (int o = 0; o < out; ++o) {
    double acc = b[o];
    const double* row = w.data() + static_cast<std::size_t>(o) * in;
    for (int i = 0; i < in; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
}

void LinearGrad::zero() {
  std::fill(w.begin(), w.end(), 0.0);
  std::fill(b.begin(), b.end(), 0.0);
}

void LinearGrad::backward(const Linear& layer, const double* x, const double* dy, double coeff,
                          double* dx) {
  for (int o = 0; o < layer.out; ++o) {
    const double g = dy[o] * coeff;
    if (g == 0.0) continue;
    b[o] += g;
    double* wrow = w.data() + static_cast<std::size_t>(o) * layer.in;
    const double* lrow = layer.w.data() + static_cast<std::size_t>(o) * layer.in;
    for (int i = 0; i < layer.in; ++i) {
      wrow[i] += g * x[i];
      if (dx) dx[i] += g * lrow[i];
    }
  }
}

void tanh_inplace(std::vector<double>& v) {
  for (double& x : v) x = std::tanh(x);
}

void Adam::begin_step() {
  ++t_;
  cursor_ = 0;
}

void Adam::ascend(Linear& layer, const LinearGrad& grad) {
  if (cursor_ + 2 > slots_.size()) slots_.resize(cursor_ + 2);
  ascend_tensor(layer.w, grad.w, slots_[cursor_]);
  ascend_tensor(layer.b, grad.b, slots_[cursor_ + 1]);
  cursor_ += 2;
}

void Adam::ascend_tensor(std::vector<double>& p, const std::vector<double>& g, Moments& mom) {
  if (mom.m.size() != p.size()) {
    mom.m.assign(p.size(), 0.0);
    mom.v.assign(p.size(), 0.0);
  }
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < p.size(); ++i) {
    mom.m[i] = beta1_ * mom.m[i] + (1.0 - beta1_) * g[i];
    mom.v[i] = beta2_ * mom.v[i] + (1.0 - beta2_) * g[i] * g[i];
    const double mhat = mom.m[i] / bc1;
    const double vhat = mom.v[i] / bc2;
    p[i] += lr_ * mhat / (std::sqrt(vhat) + eps_);
  }
}

}  // namespace evac
