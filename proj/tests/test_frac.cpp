#include <doctest.h>

#include <cmath>
#include <random>

#include <gmpxx.h>

#include "qeq/frac.hpp"

using namespace qeq;

namespace {

// Independent wide reference: sqrt(d) to `bits` fractional bits.
mpz_class sqrt_mantissa(unsigned long d, int bits) {
  mpz_class scaled = mpz_class(static_cast<long>(d)) << (2 * bits);
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  return root - ((root >> bits) << bits);  // fractional part at scale 2^bits
}

double frac_of_multiple(const mpz_class& mant, int bits, std::uint64_t n) {
  mpz_class prod = mant * mpz_class(static_cast<unsigned long>(n));
  prod -= (prod >> bits) << bits;
  return std::ldexp(mpz_get_d(prod.get_mpz_t()), -bits);
}

}  // namespace

TEST_CASE("frac_norm basics") {
  CHECK(frac_norm(frac_from_double(0.3)) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(frac_norm(frac_from_double(0.5)) == 0.5);
  CHECK(frac_norm(frac_from_double(0.8)) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("e_unit at quarter points") {
  auto z0 = e_unit(frac_from_double(0.0));
  CHECK(z0.real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(z0.imag() == doctest::Approx(0.0).epsilon(1e-14));
  auto zh = e_unit(frac_from_ratio(1, 2));
  CHECK(zh.real() == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(zh.imag()) < 1e-14);
  auto zq = e_unit(frac_from_ratio(1, 4));
  CHECK(std::abs(zq.real()) < 1e-14);
  CHECK(zq.imag() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(e_unit(frac_from_double(0.37))) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mul_mod1 exact rational cases") {
  const FixedFrac half = frac_from_ratio(1, 2);
  const FixedFrac t = mul_mod1(half, 3);
  CHECK(t.value() == 0.5);
  CHECK(t.err <= 1e-30);  // mantissa is exact; only the bookkeeping term remains
  CHECK(mul_mod1(half, 0).value() == 0.0);
  const FixedFrac third = frac_from_ratio(1, 3);
  CHECK(frac_norm(mul_mod1(third, 3)) < 1e-30);  // 3 * (1/3) = 1 = 0 mod 1
}

TEST_CASE("mul_mod1 10*sqrt(2) against frozen decimal oracle") {
  // 10*sqrt(2) = 14.14213562373095048801688724209698078569671875376948...
  const Alpha a(IrrationalSpec::parse("sqrt:2"));
  const FixedFrac t = mul_mod1(a.frac(), 10);
  CHECK(t.value() == doctest::Approx(0.14213562373095048801688724209698).epsilon(1e-15));
}

TEST_CASE("mul_mod1 guard refuses oversized n") {
  const Alpha a(IrrationalSpec::parse("sqrt:2"));
  CHECK_NOTHROW(mul_mod1(a.frac(), kGuardLimit));
  CHECK_THROWS_AS(mul_mod1(a.frac(), kGuardLimit + 1), PrecisionError);
}

TEST_CASE("realize sqrt:2 against frozen decimal oracle") {
  const Alpha a(IrrationalSpec::parse("sqrt:2"));
  CHECK(a.frac().value() == doctest::Approx(0.41421356237309504880168872420970).epsilon(1e-15));
  CHECK(a.int_part() == 1);
  CHECK(a.frac().err <= std::ldexp(1.0, -(a.precision_bits() - 2)));
}

TEST_CASE("realize cf spec for sqrt(2)-1 matches sqrt:2 fractional part") {
  // sqrt(2)-1 = [0; 2, 2, 2, ...]
  std::string spec = "cf:0";
  for (int i = 0; i < 100; ++i) spec += ",2";
  const Alpha via_cf(IrrationalSpec::parse(spec));
  const Alpha via_sqrt(IrrationalSpec::parse("sqrt:2"));
  CHECK(std::abs(via_cf.frac().value() - via_sqrt.frac().value()) < 1e-15);
}

TEST_CASE("realize rejects square radicand and malformed specs") {
  CHECK_THROWS_AS(Alpha(IrrationalSpec::parse("sqrt:4")), InvalidSpecError);
  CHECK_THROWS_AS(Alpha(IrrationalSpec::parse("sqrt:0")), InvalidSpecError);
  CHECK_THROWS_AS(IrrationalSpec::parse("sqrt:abc"), InvalidSpecError);
  CHECK_THROWS_AS(IrrationalSpec::parse("cf:"), InvalidSpecError);
  CHECK_THROWS_AS(IrrationalSpec::parse("cf:1,0,2"), InvalidSpecError);
  CHECK_THROWS_AS(IrrationalSpec::parse("nonsense"), InvalidSpecError);
}

TEST_CASE("decimal spec precision rules") {
  // F = 128 needs >= 43 significant digits.
  CHECK_THROWS_AS(Alpha(IrrationalSpec::parse("dec:3.14159")), PrecisionError);
  const Alpha pi(IrrationalSpec::parse(
      "dec:3.14159265358979323846264338327950288419716939937510582097"));
  CHECK(pi.frac().value() == doctest::Approx(0.14159265358979323846).epsilon(1e-15));
  CHECK(pi.int_part() == 3);
  // A shorter request is satisfiable with fewer digits.
  CHECK_NOTHROW(Alpha(IrrationalSpec::parse("dec:3.14159265358979"), 32));
}

TEST_CASE("phi realization") {
  // (1+sqrt 5)/2 = 1.61803398874989484820458683436563811772...
  const Alpha a(IrrationalSpec::parse("phi"));
  CHECK(a.int_part() == 1);
  CHECK(a.frac().value() == doctest::Approx(0.61803398874989484820458683436564).epsilon(1e-15));
}

TEST_CASE("additivity of mul_mod1 is exact on the carrier") {
  const Alpha a(IrrationalSpec::parse("sqrt:3"));
  std::mt19937_64 rng(0);
  std::uniform_int_distribution<std::uint64_t> dist(1, std::uint64_t(1) << 40);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t n1 = dist(rng), n2 = dist(rng);
    const FixedFrac s = frac_add(mul_mod1(a.frac(), n1), mul_mod1(a.frac(), n2));
    const FixedFrac t = mul_mod1(a.frac(), n1 + n2);
    CHECK(s.mantissa == t.mantissa);  // both are n * mant mod 2^128 exactly
    CHECK(std::abs(s.value() - t.value()) <= s.err + t.err + 1e-30);
  }
}

TEST_CASE("norm invariant under alpha -> alpha + 1") {
  // cf:1,2,2,... is sqrt(2); cf:2,2,2,... is sqrt(2)+1 — same fractional part.
  std::string tail;
  for (int i = 0; i < 80; ++i) tail += ",2";
  const Alpha a(IrrationalSpec::parse("cf:1" + tail));
  const Alpha b(IrrationalSpec::parse("cf:2" + tail));
  for (std::uint64_t n : {1ull, 7ull, 123456ull, 99999999ull})
    CHECK(std::abs(frac_norm(mul_mod1(a.frac(), n)) - frac_norm(mul_mod1(b.frac(), n))) < 1e-12);
}

TEST_CASE("declared err bounds are sound against a 512-bit reference") {
  const int wide = 512;
  struct Case {
    const char* spec;
    unsigned long d;
  };
  for (unsigned long d : {2ul, 3ul, 5ul, 7ul, 61ul}) {
    const Alpha a(IrrationalSpec::parse("sqrt:" + std::to_string(d)));
    const mpz_class ref = sqrt_mantissa(d, wide);
    std::mt19937_64 rng(d);
    std::uniform_int_distribution<std::uint64_t> dist(1, std::uint64_t(1) << 50);
    for (int i = 0; i < 2000; ++i) {
      const std::uint64_t n = dist(rng);
      const FixedFrac t = mul_mod1(a.frac(), n);
      const double truth = frac_of_multiple(ref, wide, n);
      double dev = std::abs(t.value() - truth);
      dev = std::min(dev, 1.0 - dev);  // mod-1 distance
      // t.err covers the 128-bit mantissa; value() and the reference each add
      // one double rounding of a number in [0, 1), i.e. up to 2^-53 apiece.
      CHECK(dev <= t.err + 3e-16);
    }
  }
}

TEST_CASE("precision flag bounds") {
  CHECK_THROWS_AS(Alpha(IrrationalSpec::parse("sqrt:2"), 8), InvalidSpecError);
  CHECK_THROWS_AS(Alpha(IrrationalSpec::parse("sqrt:2"), 200), PrecisionError);
  const Alpha a(IrrationalSpec::parse("sqrt:2"), 64);
  CHECK(a.precision_bits() == 64);
}

TEST_CASE("certified interval contains the value") {
  const Alpha a(IrrationalSpec::parse("sqrt:2"));
  mpq_class lo, hi;
  a.interval(lo, hi);
  CHECK(lo < hi);
  // sqrt(2) in [lo, hi]  <=>  lo^2 < 2 < hi^2 for positive endpoints.
  CHECK(lo * lo < 2);
  CHECK(hi * hi > 2);
  CHECK(mpq_class(hi - lo) < mpq_class(1, 1000000));
}
