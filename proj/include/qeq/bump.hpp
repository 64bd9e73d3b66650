#pragma once

#include <complex>
#include <cstdint>

#include "qeq/errors.hpp"

namespace qeq {

// Periodic smoothed indicator of (-delta, delta): the r-fold convolution
//   chi = 1_[-w,w] * (u_Delta)^(*r) / Delta^r,  w = delta/2, Delta = delta/(2r),
// with closed-form Fourier coefficients
//   c(k) = sin(2 pi k w)/(pi k) * (sin(pi k Delta)/(pi k Delta))^r,  c(0) = delta.
class BumpFunction {
 public:
  // x_scale sets K = ceil(delta^-1 log^2 x) and the tail target x^-1; the
  // smoothing order r is the smallest that certifies the tail bound.
  static BumpFunction build(double delta, double x_scale);

  double delta() const { return delta_; }
  double mollifier_width() const { return Delta_; }
  int order() const { return r_; }
  long cutoff() const { return K_; }
  double x_scale() const { return x_scale_; }

  double coeff(long k) const;

  // Direct evaluation from the piecewise-polynomial convolution form
  // (Irwin-Hall CDF difference, evaluated in extended precision).
  double eval(double t) const;

  // delta + sum_{0<|k|<=K_trunc} c(k) e(kt); imaginary part vanishes by
  // symmetry and is exposed for checking.
  std::complex<double> eval_fourier_complex(double t, long K_trunc) const;
  double eval_fourier(double t, long K_trunc) const;

  // Rigorous upper bound on sum_{|k|>K_from} |c(k)|.
  double tail_bound(long K_from) const;

 private:
  BumpFunction() = default;
  double delta_ = 0.0, Delta_ = 0.0, x_scale_ = 0.0;
  int r_ = 1;
  long K_ = 0;
};

}  // namespace qeq
