#ifndef EVAC_MLP_HPP_
#define EVAC_MLP_HPP_

#include <cstdint>
#include <vector>

#include "evac/rng.hpp"

namespace evac {

// Dense layer, weights row-major (out x in).
struct Linear {
  int in = 0;
  int out = 0;
  std::vector<double> w;
  std::vector<double> b;

  static Linear zeros(int in, int out);
  // Xavier-normal init, suited to tanh trunks.
  static Linear xavier(int in, int out, Rng& rng);

  void forward(const double* x, double* y) const;

  std::size_t parameter_count() const { return w.size() + b.size(); }
};

// Gradient accumulator shaped like a Linear.
struct LinearGrad {
  std::vector<double> w;
  std::vector<double> b;

  explicit LinearGrad(const Linear& like) : w(like.w.size(), 0.0), b(like.b.size(), 0.0) {}
  void zero();

  // Accumulates coeff * dL/d(this layer) given upstream dy at input x, and
  // adds the propagated dL/dx into dx (when dx != nullptr).
  void backward(const Linear& layer, const double* x, const double* dy, double coeff,
                double* dx);
};

void tanh_inplace(std::vector<double>& v);

// Adam ascent on a set of tensors: params += lr * mhat / (sqrt(vhat) + eps).
class Adam {
 public:
  Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void ascend(Linear& layer, const LinearGrad& grad);
  void set_learning_rate(double lr) { lr_ = lr; }

 private:
  struct Moments {
    std::vector<double> m, v;
  };
  void ascend_tensor(std::vector<double>& p, const std::vector<double>& g, Moments& mom);

  double lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::vector<Moments> slots_;
  std::size_t cursor_ = 0;

 public:
  // Must be called once per optimization step, before ascend() calls.
  void begin_step();
};

}  // namespace evac

#endif  // EVAC_MLP_HPP_
