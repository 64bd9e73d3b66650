#include "qeq/bump.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <mpfr.h>

namespace qeq {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Tail bound for given geometry, computable before committing to r.
double tail_bound_for(double delta, double Delta, int r, long K_from) {
  // |c(k)| <= min(delta, 1/(pi k)) * min(1, (pi k Delta)^-r).
  double sum = 0.0;
  const long k_flat = static_cast<long>(std::ceil(1.0 / (kPi * Delta)));  // below: no decay factor
  long k = K_from + 1;
  for (; k <= k_flat; ++k) {
    sum += std::min(delta, 1.0 / (kPi * k));
    if (k - K_from > 2'000'000) return HUGE_VAL;  // geometry hopeless at this r
  }
  // k >= k2: sum (pi k)^-1 (pi k Delta)^-r <= (1/pi)(pi Delta)^-r (k2^-(r+1) + k2^-r / r)
  const double k2 = static_cast<double>(std::max(K_from + 1, k_flat + 1)) - 1.0;
  const double decay = std::pow(kPi * Delta, -static_cast<double>(r));
  const double tail = (1.0 / kPi) * decay *
                      (std::pow(k2, -static_cast<double>(r + 1)) +
                       std::pow(k2, -static_cast<double>(r)) / r);
  return 2.0 * (sum + tail);
}

// Irwin-Hall CDF P(U_1 + ... + U_r <= z), U_i uniform on [0,1], via the
// alternating closed form in extended precision (the terms cancel badly).
double irwin_hall_cdf(int r, double z, mpfr_prec_t prec) {
  if (z <= 0.0) return 0.0;
  if (z >= r) return 1.0;
  mpfr_t acc, term, zz, base;
  mpfr_inits2(prec, acc, term, zz, base, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(acc, 1);
  mpfr_set_d(zz, z, MPFR_RNDN);
  mpz_t binom;
  mpz_init_set_ui(binom, 1);
  for (int k = 0; k <= static_cast<int>(z); ++k) {
    mpfr_sub_si(base, zz, k, MPFR_RNDN);
    mpfr_pow_si(term, base, r, MPFR_RNDN);
    mpfr_mul_z(term, term, binom, MPFR_RNDN);
    if (k % 2 == 0)
      mpfr_add(acc, acc, term, MPFR_RNDN);
    else
      mpfr_sub(acc, acc, term, MPFR_RNDN);
    mpz_mul_ui(binom, binom, r - k);
    mpz_divexact_ui(binom, binom, k + 1);
  }
  mpfr_fac_ui(term, r, MPFR_RNDN);
  mpfr_div(acc, acc, term, MPFR_RNDN);
  double out = mpfr_get_d(acc, MPFR_RNDN);
  mpz_clear(binom);
  mpfr_clears(acc, term, zz, base, static_cast<mpfr_ptr>(nullptr));
  return std::clamp(out, 0.0, 1.0);
}

}  // namespace

BumpFunction BumpFunction::build(double delta, double x_scale) {
  if (!(delta > 0.0 && delta < 0.25))
    throw InvalidSpecError("invalid-delta: need 0 < delta < 1/4");
  if (!(x_scale >= 16.0)) throw InvalidSpecError("build_bump: need x_scale >= 16");
  BumpFunction b;
  b.delta_ = delta;
  b.x_scale_ = x_scale;
  const double lx = std::log(x_scale);
  b.K_ = static_cast<long>(std::ceil(lx * lx / delta));
  const double target = 1.0 / x_scale;
  for (int r = 1; r <= 400; ++r) {
    const double Delta = delta / (2.0 * r);
    if (tail_bound_for(delta, Delta, r, b.K_) <= target) {
      b.r_ = r;
      b.Delta_ = Delta;
      return b;
    }
  }
  throw InvalidSpecError(
      "tail-target-unreachable: no smoothing order r <= 400 certifies the x^-1 tail "
      "(larger r would need a wider coefficient cutoff K)");
}

double BumpFunction::coeff(long k) const {
  if (k == 0) return delta_;
  const double ak = std::abs(static_cast<double>(k));
  const double w = delta_ / 2.0;
  const double main = std::sin(2.0 * kPi * ak * w) / (kPi * ak);
  const double z = kPi * ak * Delta_;
  return main * std::pow(std::sin(z) / z, r_);
}

double BumpFunction::eval(double t) const {
  // Reduce mod 1 and fold to |t| via symmetry.
  double u = t - std::floor(t);
  if (u > 0.5) u = 1.0 - u;
  const double w = delta_ / 2.0;
  const double half_support = w + r_ * Delta_ / 2.0;
  if (u >= half_support) return 0.0;
  if (u <= w - r_ * Delta_ / 2.0) return 1.0;
  // chi(u) = F(u + w) - F(u - w), F the CDF of the centered Irwin-Hall sum.
  const double z1 = (u + w + r_ * Delta_ / 2.0) / Delta_;
  const double z2 = (u - w + r_ * Delta_ / 2.0) / Delta_;
  const mpfr_prec_t prec = 256 + 4 * r_;
  const double v = irwin_hall_cdf(r_, std::min(z1, double(r_)), prec) -
                   irwin_hall_cdf(r_, std::max(z2, 0.0), prec);
  return std::clamp(v, 0.0, 1.0);
}

std::complex<double> BumpFunction::eval_fourier_complex(double t, long K_trunc) const {
  std::complex<double> acc(delta_, 0.0);
  for (long k = 1; k <= K_trunc; ++k) {
    const double c = coeff(k);
    const double ang = 2.0 * kPi * k * t;
    // c(k) e(kt) + c(-k) e(-kt) with c(-k) = c(k) real.
    acc += c * std::complex<double>(std::cos(ang), std::sin(ang));
    acc += c * std::complex<double>(std::cos(-ang), std::sin(-ang));
  }
  return acc;
}

double BumpFunction::eval_fourier(double t, long K_trunc) const {
  double acc = delta_;
  for (long k = 1; k <= K_trunc; ++k)
    acc += 2.0 * coeff(k) * std::cos(2.0 * kPi * k * t);
  return acc;
}

double BumpFunction::tail_bound(long K_from) const {
  if (K_from < 1) throw InvalidSpecError("tail_bound: K_from must be >= 1");
  return tail_bound_for(delta_, Delta_, r_, K_from);
}

}  // namespace qeq
