#include "qeq/frac.hpp"

#include <cmath>
#include <charconv>

namespace qeq {

namespace {

constexpr long double kTwoPow64 = 18446744073709551616.0L;

long double value_long(const FixedFrac& t) {
  const std::uint64_t hi = std::uint64_t(t.mantissa >> 64);
  const std::uint64_t lo = std::uint64_t(t.mantissa);
  return (static_cast<long double>(hi) + static_cast<long double>(lo) / kTwoPow64) / kTwoPow64;
}

int hi_bits_for(int precision_bits) {
  // Wide mantissa: at least doubled precision over the request.
  return std::max(2 * precision_bits, 320);
}

}  // namespace

double FixedFrac::value() const { return static_cast<double>(value_long(*this)); }

FixedFrac frac_from_double(double x) {
  if (!std::isfinite(x)) throw InvalidSpecError("frac_from_double: non-finite value");
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;
  // A double in [0,1) has at most 1075 fractional bits in general; after
  // scaling by 2^128 anything below 2^-128 is dropped and accounted in err.
  const long double s = static_cast<long double>(f) * kTwoPow64;
  const std::uint64_t hi = static_cast<std::uint64_t>(s);
  const long double rem = (s - static_cast<long double>(hi)) * kTwoPow64;
  const std::uint64_t lo = static_cast<std::uint64_t>(rem);
  FixedFrac r;
  r.mantissa = (uint128(hi) << 64) | lo;
  const long double dropped = rem - static_cast<long double>(lo);
  r.err = dropped > 0 ? 0x1p-128 : 0.0;
  return r;
}

FixedFrac frac_from_ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw InvalidSpecError("frac_from_ratio: zero denominator");
  num %= den;
  mpz_class scaled = mpz_class(num);
  scaled <<= kFracBits;
  mpz_class q, rem;
  mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t(), mpz_class(den).get_mpz_t());
  FixedFrac r;
  r.mantissa = 0;
  for (int limb = 1; limb >= 0; --limb) {
    mpz_class part = q >> (64 * limb);
    r.mantissa = (r.mantissa << 64) | mpz_get_ui(mpz_class(part & mpz_class("18446744073709551615")).get_mpz_t());
  }
  r.err = (rem == 0) ? 0.0 : 0x1p-128;
  return r;
}

FixedFrac frac_add(const FixedFrac& a, const FixedFrac& b) {
  FixedFrac r;
  r.mantissa = a.mantissa + b.mantissa;  // wraps mod 2^128
  r.err = a.err + b.err;
  return r;
}

double frac_norm(const FixedFrac& t) {
  const uint128 half = uint128(1) << 127;
  if (t.mantissa >= half) {
    FixedFrac c;
    c.mantissa = ~t.mantissa + 1;  // 2^128 - mantissa (mod 2^128); mantissa != 0 here
    return c.mantissa == 0 ? 0.0 : static_cast<double>(value_long(c));
  }
  return t.value();
}

std::complex<double> e_unit(const FixedFrac& t) {
  const long double ang = 2.0L * 3.14159265358979323846264338327950288L * value_long(t);
  return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}

FixedFrac mul_mod1(const FixedFrac& alpha, std::uint64_t n) {
  if (n > kGuardLimit)
    throw PrecisionError("mul_mod1: multiplier exceeds the 2^54 guard budget");
  const std::uint64_t hi = std::uint64_t(alpha.mantissa >> 64);
  const std::uint64_t lo = std::uint64_t(alpha.mantissa);
  FixedFrac r;
  r.mantissa = uint128(n) * lo + ((uint128(n) * hi) << 64);  // low 128 bits: exact mod 1
  int lg = 0;
  while ((std::uint64_t(1) << lg) < n && lg < 63) ++lg;
  r.err = double(n) * alpha.err + std::ldexp(1.0, -(kFracBits - lg));
  return r;
}

// ---------------------------------------------------------------------------
// IrrationalSpec parsing

IrrationalSpec IrrationalSpec::parse(std::string_view s) {
  IrrationalSpec spec;
  spec.text = std::string(s);
  auto bad = [&](const std::string& why) -> InvalidSpecError {
    return InvalidSpecError("invalid alpha spec '" + spec.text + "': " + why);
  };
  if (s == "phi") {
    spec.kind = Kind::Phi;
    return spec;
  }
  if (s.rfind("sqrt:", 0) == 0) {
    spec.kind = Kind::Sqrt;
    std::uint64_t d = 0;
    auto body = s.substr(5);
    auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), d);
    if (ec != std::errc() || p != body.data() + body.size()) throw bad("radicand must be an integer");
    spec.radicand = d;
    return spec;
  }
  if (s.rfind("dec:", 0) == 0) {
    spec.kind = Kind::Decimal;
    auto body = s.substr(4);
    auto dot = body.find('.');
    std::string_view ip = dot == std::string_view::npos ? std::string_view("0") : body.substr(0, dot);
    std::string_view fp = dot == std::string_view::npos ? body : body.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (fp.empty()) throw bad("no fractional digits");
    for (char c : ip)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad("malformed integer part");
    for (char c : fp)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad("malformed fractional digits");
    spec.int_digits = std::string(ip);
    spec.frac_digits = std::string(fp);
    return spec;
  }
  if (s.rfind("cf:", 0) == 0) {
    spec.kind = Kind::ContinuedFraction;
    auto body = s.substr(3);
    while (!body.empty()) {
      auto comma = body.find(',');
      auto tok = body.substr(0, comma);
      std::uint64_t a = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), a);
      if (ec != std::errc() || p != tok.data() + tok.size()) throw bad("malformed partial quotient");
      spec.cf_terms.push_back(a);
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    if (spec.cf_terms.empty()) throw bad("empty continued fraction");
    for (std::size_t i = 1; i < spec.cf_terms.size(); ++i)
      if (spec.cf_terms[i] < 1) throw bad("partial quotients after the first must be >= 1");
    return spec;
  }
  throw bad("expected sqrt:<int>, phi, dec:<digits> or cf:<a0>,<a1>,...");
}

// ---------------------------------------------------------------------------
// Alpha realization

Alpha::Alpha(const IrrationalSpec& spec, int precision_bits) : spec_(spec) {
  if (precision_bits < 16) throw InvalidSpecError("precision must be >= 16 bits");
  if (precision_bits > kFracBits + 2)
    throw PrecisionError("requested precision exceeds the 128-bit carrier");
  precision_bits_ = precision_bits;
  const int B = hi_bits_for(precision_bits);
  hi_bits_ = B;

  switch (spec.kind) {
    case IrrationalSpec::Kind::Sqrt: {
      const std::uint64_t d = spec.radicand;
      mpz_class rad(static_cast<unsigned long>(d));
      if (d == 0 || mpz_perfect_square_p(rad.get_mpz_t()))
        throw InvalidSpecError("sqrt:" + std::to_string(d) + " is rational; alpha must be irrational");
      mpz_class scaled = rad << (2 * B);
      mpz_class root;
      mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());  // floor(sqrt(d) * 2^B)
      int_part_ = root >> B;
      hi_mant_ = root - (int_part_ << B);
      hi_err_ = std::ldexp(1.0, -B + 1);
      break;
    }
    case IrrationalSpec::Kind::Phi: {
      // (1 + sqrt 5) / 2: integer part 1, fractional part (sqrt 5 - 1) / 2.
      mpz_class scaled = mpz_class(5) << (2 * (B + 1));
      mpz_class root;
      mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());  // floor(sqrt 5 * 2^(B+1))
      int_part_ = 1;
      // (sqrt5 - 1) * 2^(B+1) / 4 = (sqrt5 - 1)/2 * 2^B.
      hi_mant_ = (root - (mpz_class(1) << (B + 1))) >> 2;
      hi_mant_ -= (hi_mant_ >> B) << B;
      hi_err_ = std::ldexp(1.0, -B + 1);
      break;
    }
    case IrrationalSpec::Kind::Decimal: {
      const std::size_t L = spec.frac_digits.size();
      if (3 * L < static_cast<std::size_t>(precision_bits))
        throw PrecisionError("insufficient-precision: dec spec needs >= F/3 significant digits (" +
                             std::to_string((precision_bits + 2) / 3) + " for F=" +
                             std::to_string(precision_bits) + ", got " + std::to_string(L) + ")");
      int_part_ = mpz_class(spec.int_digits, 10);
      mpz_class digits(spec.frac_digits, 10);
      mpz_class pow10;
      mpz_ui_pow_ui(pow10.get_mpz_t(), 10, L);
      hi_mant_ = (digits << B) / pow10;
      hi_err_ = std::pow(10.0, -static_cast<double>(L)) + std::ldexp(1.0, -B);
      break;
    }
    case IrrationalSpec::Kind::ContinuedFraction: {
      mpz_class p0 = 1, q0 = 0;  // p_{-1}/q_{-1}
      mpz_class p1(static_cast<unsigned long>(spec.cf_terms[0])), q1 = 1;
      for (std::size_t i = 1; i < spec.cf_terms.size(); ++i) {
        mpz_class a(static_cast<unsigned long>(spec.cf_terms[i]));
        mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
      }
      // Treat the finite list as a truncation of an infinite expansion:
      // any continuation lies within 1/(q_n (q_n + q_{n-1})) of p_n/q_n.
      mpq_class v(p1, q1);
      v.canonicalize();
      mpz_class fl = v.get_num() / v.get_den();
      if (v < 0) throw InvalidSpecError("negative continued fraction value");
      int_part_ = fl;
      mpq_class fracpart = v - mpq_class(fl);
      mpz_class num = fracpart.get_num() << B;
      hi_mant_ = num / fracpart.get_den();
      const double trunc = mpq_class(1, q1 * (q1 + q0)).get_d();
      hi_err_ = trunc + std::ldexp(1.0, -B);
      if (hi_err_ > std::ldexp(1.0, -(precision_bits - 2)))
        throw PrecisionError("insufficient-precision: continued fraction too short for F=" +
                             std::to_string(precision_bits));
      break;
    }
    case IrrationalSpec::Kind::Rational: {
      mpq_class v = spec.rational;
      v.canonicalize();
      mpz_class fl;
      mpz_fdiv_q(fl.get_mpz_t(), v.get_num().get_mpz_t(), v.get_den().get_mpz_t());
      int_part_ = fl;
      mpq_class fracpart = v - mpq_class(fl);
      mpz_class num = fracpart.get_num() << B;
      mpz_class rem;
      mpz_fdiv_qr(hi_mant_.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), fracpart.get_den().get_mpz_t());
      hi_err_ = (rem == 0) ? 0.0 : std::ldexp(1.0, -B);
      break;
    }
  }
  derive_fixed();
  if (frac_.err > std::ldexp(1.0, -(precision_bits_ - 2)))
    throw PrecisionError("insufficient-precision: spec cannot certify F=" + std::to_string(precision_bits_));
}

void Alpha::derive_fixed() {
  mpz_class top = hi_mant_ >> (hi_bits_ - kFracBits);
  frac_.mantissa = 0;
  for (int limb = 1; limb >= 0; --limb) {
    mpz_class part = (top >> (64 * limb)) & mpz_class("18446744073709551615");
    frac_.mantissa = (frac_.mantissa << 64) | mpz_get_ui(part.get_mpz_t());
  }
  const bool exact_trunc = ((hi_mant_ - (top << (hi_bits_ - kFracBits))) == 0);
  frac_.err = hi_err_ + (exact_trunc ? 0.0 : 0x1p-128);
}

Alpha Alpha::from_rational(long num, unsigned long den) {
  IrrationalSpec spec;
  spec.kind = IrrationalSpec::Kind::Rational;
  spec.rational = mpq_class(num, den);
  spec.rational.canonicalize();
  spec.text = std::to_string(num) + "/" + std::to_string(den);
  return Alpha(spec, kFracBits);
}

double Alpha::norm_hi(std::uint64_t n) const {
  mpz_class prod = hi_mant_ * mpz_class(static_cast<unsigned long>(n));
  mpz_class mod = prod - ((prod >> hi_bits_) << hi_bits_);
  mpz_class half = mpz_class(1) << (hi_bits_ - 1);
  mpz_class dist = (mod >= half) ? ((mpz_class(1) << hi_bits_) - mod) : mod;
  return std::ldexp(mpz_get_d(dist.get_mpz_t()), -hi_bits_);
}

void Alpha::interval(mpq_class& lo, mpq_class& hi) const {
  mpz_class denom = mpz_class(1) << hi_bits_;
  // Error in units of 2^-hi_bits, rounded up.
  mpz_class e(static_cast<unsigned long>(std::ceil(std::ldexp(hi_err_, hi_bits_))) + 1);
  lo = mpq_class(int_part_) + mpq_class(hi_mant_ - e, denom);
  hi = mpq_class(int_part_) + mpq_class(hi_mant_ + e, denom);
  lo.canonicalize();
  hi.canonicalize();
}

}  // namespace qeq
