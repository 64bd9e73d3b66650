#include "qeq/counting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "qeq/expsums.hpp"
#include "qeq/parallel.hpp"

namespace qeq {

namespace {

constexpr double kZeta2 = 3.14159265358979323846 * 3.14159265358979323846 / 6.0;

double norm_alpha_n_plus_beta(const Alpha& alpha, double beta, std::uint64_t n) {
  const FixedFrac t = frac_add(mul_mod1(alpha.frac(), n), frac_from_double(beta));
  return frac_norm(t);
}

// Collects the n ~ x with some r ~ y, r^2 | n-1, together with Lambda(n) and
// the multiplicity #{r ~ y : r^2 | n-1}; shared by gamma2 and gamma1_gamma3.
struct DivisorHit {
  std::uint64_t n;
  double lambda;
  std::uint32_t count;
};

std::vector<DivisorHit> collect_hits(std::uint64_t x, std::uint64_t y) {
  std::map<std::uint64_t, std::uint32_t> mult;
  for (std::uint64_t r = y + 1; r <= 2 * y; ++r) {
    const std::uint64_t r2 = r * r;
    std::uint64_t n = (x / r2) * r2 + 1;
    while (n <= x) n += r2;
    for (; n <= 2 * x; n += r2) ++mult[n];
  }
  std::vector<DivisorHit> hits;
  hits.reserve(mult.size());
  const std::uint64_t chunk = std::uint64_t(1) << 22;
  auto it = mult.begin();
  for (std::uint64_t lo = x + 1; lo <= 2 * x && it != mult.end(); lo += chunk) {
    const std::uint64_t hi = std::min(2 * x, lo + chunk - 1);
    ArithTables t(lo, std::max(hi, lo + 1));
    for (; it != mult.end() && it->first <= hi; ++it) {
      const double lam = t.mangoldt(it->first);
      if (lam != 0.0) hits.push_back({it->first, lam, it->second});
    }
  }
  return hits;
}

}  // namespace

GammaCountReport gamma_count(std::uint64_t x, const Alpha& alpha, double beta, double theta,
                             double eta) {
  if (!(theta > 0.0 && theta < 1.0 / 108.0))
    throw InvalidSpecError("gamma_count: theta must lie in (0, 1/108)");
  if (!(eta > 0.0)) throw InvalidSpecError("gamma_count: eta must be positive");
  GammaCountReport rep;
  rep.x = x;
  rep.theta = theta;
  rep.eta = eta;
  if (x < 1) return rep;
  const double exponent = 2.0 / 3.0 + 4.0 * theta + eta;

  struct Partial {
    std::uint64_t count = 0;
    std::vector<Witness> witnesses;
  };
  Partial result = chunked_reduce(
      x + 1, 2 * x, Partial{},
      [&](std::uint64_t lo, std::uint64_t hi) {
        Partial part;
        ArithTables t(lo, std::max(hi, lo + 1));
        for (std::uint64_t p = lo; p <= hi; ++p) {
          if (!t.is_prime(p)) continue;
          const SquarePart sp = square_part(p - 1);
          if (static_cast<double>(sp.s) > std::pow(static_cast<double>(p), exponent)) continue;
          const double thr = std::pow(static_cast<double>(p), -theta);
          if (norm_alpha_n_plus_beta(alpha, beta, p) >= thr) continue;
          ++part.count;
          if (part.witnesses.size() < 100) part.witnesses.push_back({p, sp.s, sp.r});
        }
        return part;
      },
      [](Partial acc, const Partial& p) {
        acc.count += p.count;
        for (const auto& w : p.witnesses)
          if (acc.witnesses.size() < 100) acc.witnesses.push_back(w);
        return acc;
      });

  rep.gamma = result.count;
  rep.witnesses = std::move(result.witnesses);
  for (const auto& w : rep.witnesses)
    if (!recheck_witness(w, alpha, beta, theta, eta))
      throw Error("gamma_count: witness failed recheck at p=" + std::to_string(w.p));
  return rep;
}

bool recheck_witness(const Witness& w, const Alpha& alpha, double beta, double theta, double eta) {
  if (!is_prime_u64(w.p)) return false;
  if (w.a * w.r * w.r + 1 != w.p) return false;
  if (static_cast<double>(w.a) >
      std::pow(static_cast<double>(w.p), 2.0 / 3.0 + 4.0 * theta + eta))
    return false;
  // Norm recomputed from the wide mantissa, independent of the 128-bit path.
  const int B = alpha.hi_bits();
  mpz_class prod = alpha.hi_mantissa() * mpz_class(static_cast<unsigned long>(w.p));
  prod -= (prod >> B) << B;
  double t = std::ldexp(mpz_get_d(prod.get_mpz_t()), -B) + beta;
  t -= std::floor(t);
  const double norm = std::min(t, 1.0 - t);
  return norm < std::pow(static_cast<double>(w.p), -theta) + 1e-12;
}

Gamma2Report gamma2(std::uint64_t x, std::uint64_t y) {
  if (y < 1 || y * y > x) throw InvalidSpecError("gamma2: need 1 <= y^2 <= x");
  Gamma2Report rep;
  for (const auto& hit : collect_hits(x, y)) rep.gamma2 += hit.lambda * hit.count;
  rep.main_term = static_cast<double>(x) / (2.0 * kZeta2 * static_cast<double>(y));
  for (std::uint64_t r = y + 1; r <= 2 * y; ++r)
    rep.phi_prediction += static_cast<double>(x) / static_cast<double>(euler_phi(r * r));
  rep.ratio_main = rep.gamma2 / rep.main_term;
  rep.ratio_phi = rep.gamma2 / rep.phi_prediction;
  return rep;
}

Gamma13Report gamma1_gamma3(std::uint64_t x, std::uint64_t y, double theta, const Alpha& alpha,
                            double beta) {
  if (x > 10'000'000ull) throw ScaleGuardError("gamma1_gamma3: desk-scale guard x <= 1e7");
  if (!(theta > 0.0)) throw InvalidSpecError("gamma1_gamma3: theta must be positive");
  Gamma13Report rep;
  rep.delta_requested = std::pow(static_cast<double>(x), -theta);
  // The bump needs delta < 1/4; at desk scale x^-theta is often above that,
  // so the plateau width is clamped.  The Fourier identity below is intrinsic
  // to whatever bump is used (its delta enters both gamma1/delta and c(0)).
  rep.delta = std::min(rep.delta_requested, 0.2);
  const BumpFunction bump = BumpFunction::build(rep.delta, static_cast<double>(x));
  rep.K = bump.cutoff();
  rep.tail = bump.tail_bound(rep.K);

  const auto hits = collect_hits(x, y);
  double gamma1 = 0.0, T = 0.0;
  for (const auto& hit : hits) {
    const FixedFrac t = frac_add(mul_mod1(alpha.frac(), hit.n), frac_from_double(beta));
    gamma1 += hit.lambda * hit.count * bump.eval(t.value());
    T += hit.lambda * hit.count;
  }
  rep.gamma1 = gamma1;
  rep.T = T;

  // gamma3 = (1/delta) sum_{0<|k|<=K} c(k) e(beta k) sum_n Lambda(n) cnt(n) e(alpha k n)
  //        = (1/delta) sum_{k=1..K} 2 Re[c(k) e(beta k) S_k].
  rep.gamma3 = chunked_reduce(
      1, static_cast<std::uint64_t>(rep.K), 0.0,
      [&](std::uint64_t klo, std::uint64_t khi) {
        double acc = 0.0;
        for (std::uint64_t k = klo; k <= khi; ++k) {
          cdouble s = 0.0;
          for (const auto& hit : hits)
            s += hit.lambda * static_cast<double>(hit.count) * e_unit(mul_mod1(alpha.frac(), k * hit.n));
          const double bang = 2.0 * 3.14159265358979323846 * beta * static_cast<double>(k);
          const cdouble twist(std::cos(bang), std::sin(bang));
          acc += 2.0 * std::real(bump.coeff(static_cast<long>(k)) * twist * s);
        }
        return acc;
      },
      std::plus<double>());
  rep.gamma3 /= rep.delta;

  const double gamma2_val = T;  // same weighted count
  rep.identity_residual = std::abs(rep.gamma1 / rep.delta - gamma2_val - rep.gamma3);
  return rep;
}

void QuadraticForm::validate() const {
  if (a <= 0) throw InvalidSpecError("invalid-form: need a > 0");
  if (std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c)) != 1)
    throw InvalidSpecError("invalid-form: need gcd(a, b, c) = 1");
  if ((a + b) % 2 == 0 && c % 2 == 0)
    throw InvalidSpecError("invalid-form: a+b and c must not both be even");
  const std::int64_t D = discriminant();
  if (D >= 0) {
    const std::int64_t s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(D)));
    for (std::int64_t t = std::max<std::int64_t>(0, s - 2); t <= s + 2; ++t)
      if (t * t == D) throw InvalidSpecError("invalid-form: discriminant is a perfect square");
  }
}

int kronecker_symbol(std::int64_t D, std::uint64_t p) {
  if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
    throw InvalidSpecError("kronecker_symbol: p must be an odd prime");
  std::int64_t r = D % static_cast<std::int64_t>(p);
  if (r < 0) r += p;
  if (r == 0) return 0;
  // Euler's criterion: D^((p-1)/2) mod p.
  std::uint64_t base = static_cast<std::uint64_t>(r), e = (p - 1) / 2, acc = 1;
  while (e > 0) {
    if (e & 1) acc = (acc * base) % p;
    base = (base * base) % p;
    e >>= 1;
  }
  return acc == 1 ? 1 : -1;
}

HlReport hl_density(const QuadraticForm& f, std::uint64_t x, std::uint64_t p_cut) {
  f.validate();
  if (p_cut < 1000) throw InvalidSpecError("hl_density: need p_cut >= 1000");
  HlReport rep;

  // Empirical: distinct primes f(n) <= x over integer n of both signs.
  std::set<std::uint64_t> primes_found;
  const auto base = primes_up_to(static_cast<std::uint32_t>(std::sqrt(static_cast<double>(x))) + 1);
  auto prime_by_trial = [&](std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint32_t p : base) {
      if (std::uint64_t(p) * p > v) break;
      if (v % p == 0) return v == p;
    }
    return true;
  };
  const double bound = std::sqrt((static_cast<double>(x) + std::abs(double(f.b)) + std::abs(double(f.c))) /
                                 static_cast<double>(f.a)) + 2.0;
  const std::int64_t nmax = static_cast<std::int64_t>(bound);
  for (std::int64_t n = -nmax; n <= nmax; ++n) {
    const std::int64_t v = f.a * n * n + f.b * n + f.c;
    if (v < 2 || static_cast<std::uint64_t>(v) > x) continue;
    if (prime_by_trial(static_cast<std::uint64_t>(v))) primes_found.insert(static_cast<std::uint64_t>(v));
  }
  rep.empirical = primes_found.size();

  // Predicted: GCD(2,a+b) sigma(D) prod_{p|a,p|b,p>2} p/(p-1), with the scale
  // factor taken in smoothed (logarithmic-integral) form.
  const std::int64_t D = f.discriminant();
  double sigma = 1.0;
  for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(p_cut))) {
    if (p == 2) continue;
    if (f.a % static_cast<std::int64_t>(p) == 0) continue;
    sigma *= 1.0 - static_cast<double>(kronecker_symbol(D, p)) / (static_cast<double>(p) - 1.0);
  }
  rep.sigma = sigma;
  double series = static_cast<double>(std::gcd<std::int64_t>(2, std::abs(f.a + f.b))) * sigma;
  for (std::uint32_t p : primes_up_to(1000))
    if (p > 2 && f.a % static_cast<std::int64_t>(p) == 0 && f.b % static_cast<std::int64_t>(p) == 0)
      series *= static_cast<double>(p) / (static_cast<double>(p) - 1.0);

  // Integral of dt / (2 sqrt(a t) log t) from t0 to x = li(sqrt(x/a)) type
  // term; computed as int du / log(a u^2) over u = sqrt(t/a) by Simpson.
  const double u_hi = std::sqrt(static_cast<double>(x) / static_cast<double>(f.a));
  const double u_lo = std::min(u_hi, 2.0);
  const int steps = 20000;
  double integral = 0.0;
  const double h = (u_hi - u_lo) / steps;
  auto g = [&](double u) { return 1.0 / std::log(static_cast<double>(f.a) * u * u); };
  for (int i = 0; i <= steps; ++i) {
    const double u = u_lo + h * i;
    const double wgt = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    integral += wgt * g(u);
  }
  integral *= h / 3.0;
  // Distinct-value count: n and -n - b/a give the same value when a | b.
  const double sides = (f.b % f.a == 0) ? 1.0 : 2.0;
  rep.predicted = sides * series * integral;
  rep.ratio = rep.predicted > 0 ? static_cast<double>(rep.empirical) / rep.predicted : 0.0;
  return rep;
}

Histogram equidist_histogram(std::uint64_t x, const Alpha& alpha, double beta, int bins,
                             const PrimalityCache* cache) {
  if (bins < 2) throw InvalidSpecError("equidist_histogram: need bins >= 2");
  if (cache && (cache->lo > 2 || cache->hi < x))
    throw InvalidSpecError("equidist_histogram: cache does not cover [2, x]");
  Histogram h;
  h.counts = chunked_reduce(
      2, x, std::vector<std::uint64_t>(bins, 0),
      [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<std::uint64_t> counts(bins, 0);
        std::optional<ArithTables> t;
        if (!cache) t.emplace(lo, std::max(hi, lo + 1));
        for (std::uint64_t p = lo; p <= hi; ++p) {
          const bool isp = cache ? cache->is_prime(p) : t->is_prime(p);
          if (!isp) continue;
          const FixedFrac v = frac_add(mul_mod1(alpha.frac(), p), frac_from_double(beta));
          int bin = static_cast<int>(v.value() * bins);
          if (bin >= bins) bin = bins - 1;
          ++counts[bin];
        }
        return counts;
      },
      [](std::vector<std::uint64_t> acc, const std::vector<std::uint64_t>& part) {
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += part[i];
        return acc;
      });
  h.total = std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t(0));
  std::uint64_t cum = 0;
  for (int i = 0; i < bins; ++i) {
    cum += h.counts[i];
    const double emp = h.total ? static_cast<double>(cum) / static_cast<double>(h.total) : 0.0;
    h.discrepancy = std::max(h.discrepancy, std::abs(emp - static_cast<double>(i + 1) / bins));
  }
  return h;
}

}  // namespace qeq
