#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "qeq/errors.hpp"

namespace qeq {

using uint128 = unsigned __int128;

// Fixed-point layout: 128 fractional bits, so a FixedFrac holds
// mantissa / 2^128 in [0, 1).  The `--precision F` knob requests F
// certified bits (err <= 2^-(F-2)); the carrier width itself is fixed.
inline constexpr int kFracBits = 128;
// Multiplier guard: mul_mod1 refuses n > 2^kGuardBits so that at least
// kFracBits - kGuardBits accurate bits survive.
inline constexpr int kGuardBits = 54;
inline constexpr std::uint64_t kGuardLimit = std::uint64_t(1) << kGuardBits;

// A real number modulo 1 with a certified one-sided error bound:
// |true value - mantissa/2^128| <= err (as reals mod 1).
struct FixedFrac {
  uint128 mantissa = 0;
  double err = 0.0;

  double value() const;
};

// Exact fractional part of a double (err = 0; doubles have <= 128
// fractional bits after reduction mod 1 at this magnitude).
FixedFrac frac_from_double(double x);
// num/den mod 1; err = 0 when the division is exact in 128 bits.
FixedFrac frac_from_ratio(std::uint64_t num, std::uint64_t den);

// Addition mod 1; errors add.
FixedFrac frac_add(const FixedFrac& a, const FixedFrac& b);

// ||t||: distance to the nearest integer, in [0, 1/2].  Ties at exactly
// 1/2 return 1/2.
double frac_norm(const FixedFrac& t);

// e(t) = exp(2*pi*i*t).
std::complex<double> e_unit(const FixedFrac& t);

// {n * alpha} by full-width integer multiply (exact mod 2^128).
// Throws PrecisionError for n > 2^kGuardBits.
FixedFrac mul_mod1(const FixedFrac& alpha, std::uint64_t n);

// How alpha enters the system.  Text grammar:
//   sqrt:<int> | phi | dec:<digits> | cf:<a0>,<a1>,...
struct IrrationalSpec {
  enum class Kind { Sqrt, Phi, Decimal, ContinuedFraction, Rational };
  Kind kind = Kind::Sqrt;
  std::uint64_t radicand = 2;               // Kind::Sqrt
  std::string int_digits, frac_digits;      // Kind::Decimal
  std::vector<std::uint64_t> cf_terms;      // Kind::ContinuedFraction
  mpq_class rational;                       // Kind::Rational (test/degenerate values)
  std::string text;                         // original spec text

  static IrrationalSpec parse(std::string_view s);
};

// A realized irrational: integer part, 128-bit fractional carrier, and a
// wider GMP mantissa kept for branch disambiguation and oracle-grade norms.
class Alpha {
 public:
  // precision_bits is the requested certified F (default 128); realization
  // guarantees err <= 2^-(F-2) or throws PrecisionError / InvalidSpecError.
  explicit Alpha(const IrrationalSpec& spec, int precision_bits = kFracBits);

  static Alpha from_rational(long num, unsigned long den);

  const IrrationalSpec& spec() const { return spec_; }
  const FixedFrac& frac() const { return frac_; }
  const mpz_class& int_part() const { return int_part_; }
  int precision_bits() const { return precision_bits_; }

  // Wide-mantissa view of the fractional part: hi_mantissa / 2^hi_bits,
  // certified to |true - represented| <= hi_err.
  const mpz_class& hi_mantissa() const { return hi_mant_; }
  int hi_bits() const { return hi_bits_; }
  double hi_err() const { return hi_err_; }

  // ||n * alpha|| at the wide precision (the "doubled precision" path for
  // min-branch decisions near the boundary).
  double norm_hi(std::uint64_t n) const;

  // Certified rational interval containing the full value of alpha.
  void interval(mpq_class& lo, mpq_class& hi) const;

 private:
  Alpha() = default;
  void derive_fixed();

  IrrationalSpec spec_;
  mpz_class int_part_ = 0;
  mpz_class hi_mant_ = 0;
  int hi_bits_ = 0;
  double hi_err_ = 0.0;
  int precision_bits_ = kFracBits;
  FixedFrac frac_;
};

}  // namespace qeq
