#pragma once

#include <vector>

#include <gmpxx.h>

#include "qeq/frac.hpp"

namespace qeq {

// Continued-fraction convergent a/q of alpha with (a, q) = 1 and
// |alpha - a/q| < 1/q^2.
struct Convergent {
  mpz_class a;
  mpz_class q;
  // |alpha - a/q| * q^2 (certified upper endpoint), for reporting.
  double quality = 0.0;

  double q_d() const { return mpz_get_d(q.get_mpz_t()); }
};

// All convergents with q <= q_max, increasing q.  A duplicate denominator
// (only q = 1 can repeat) keeps the later, better convergent.
std::vector<Convergent> convergents(const Alpha& alpha, const mpz_class& q_max);

struct ExperimentParams {
  double theta = 0.0;
  double eta = 0.0;
  double x = 0.0;
  double delta = 0.0;  // x^-theta
  double K = 0.0;      // delta^-1 log^2 x
  double y = 0.0;      // x^(1/6 - 2 theta - eta/2)
};

// Derived quantities for a given scale; validates the theta range.
ExperimentParams derive_params(double x, double theta, double eta);

// Scale x_i solving x K(x) / y(x) = q for a convergent denominator q,
// with theta = 1/108 - 2 eps and eta = 8 eps.  Monotone bisection,
// relative residual <= 1e-6.
ExperimentParams select_scale(const Alpha& alpha, double theta, double eps,
                              const Convergent& q_target);

}  // namespace qeq
