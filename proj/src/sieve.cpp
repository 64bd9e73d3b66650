#include "qeq/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace qeq {

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<std::uint8_t> comp(limit + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (comp[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) comp[j] = 1;
  }
  return out;
}

ArithTables::ArithTables(std::uint64_t lo, std::uint64_t hi) : lo_(lo), hi_(hi) {
  if (lo < 1 || lo >= hi) throw InvalidSpecError("sieve_segment: need 1 <= lo < hi");
  if (hi - lo + 1 > kMaxSegment) throw ScaleGuardError("sieve_segment: segment-too-large");
  const auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(hi))) + 1;
  base_primes_ = primes_up_to(root);
  small_lpf_.assign(hi - lo + 1, 0);
  for (std::uint32_t p : base_primes_) {
    std::uint64_t start = std::max<std::uint64_t>(std::uint64_t(p) * p, ((lo + p - 1) / p) * p);
    for (std::uint64_t m = start; m <= hi; m += p)
      if (small_lpf_[m - lo] == 0) small_lpf_[m - lo] = p;
    // A prime p inside the segment is its own least factor.
    if (p >= lo && p <= hi) small_lpf_[p - lo] = p;
  }
}

bool ArithTables::is_prime(std::uint64_t n) const { return n >= 2 && lpf(n) == n; }

std::uint64_t ArithTables::lpf(std::uint64_t n) const {
  if (!in_range(n)) throw InvalidSpecError("lpf: n outside segment");
  if (n == 1) return 1;
  const std::uint32_t p = small_lpf_[n - lo_];
  if (p == 0) return n;  // no factor <= sqrt(hi): prime
  return p;
}

double ArithTables::mangoldt(std::uint64_t n) const {
  if (n < 2) return 0.0;
  const std::uint64_t p = lpf(n);
  if (p == n) return std::log(static_cast<double>(p));
  std::uint64_t m = n;
  while (m % p == 0) m /= p;
  return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

std::vector<std::pair<std::uint64_t, int>> ArithTables::factor(std::uint64_t n) const {
  std::vector<std::pair<std::uint64_t, int>> f;
  std::uint64_t m = n;
  for (std::uint32_t p : base_primes_) {
    if (std::uint64_t(p) * p > m) break;
    if (m % p == 0) {
      int e = 0;
      while (m % p == 0) { m /= p; ++e; }
      f.emplace_back(p, e);
    }
  }
  if (m > 1) f.emplace_back(m, 1);
  return f;
}

std::vector<std::uint64_t> ArithTables::primes() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = std::max<std::uint64_t>(2, lo_); n <= hi_; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

ArithTables sieve_segment(std::uint64_t lo, std::uint64_t hi) { return ArithTables(lo, hi); }

std::vector<std::pair<std::uint64_t, int>> factor_u64(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> f;
  std::uint64_t m = n;
  for (std::uint64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
    if (m % p == 0) {
      int e = 0;
      while (m % p == 0) { m /= p; ++e; }
      f.emplace_back(p, e);
    }
  }
  if (m > 1) f.emplace_back(m, 1);
  return f;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
    if (n % p == 0) return false;
  return true;
}

double mangoldt(std::uint64_t n) {
  if (n < 2) return 0.0;
  auto f = factor_u64(n);
  return f.size() == 1 ? std::log(static_cast<double>(f[0].first)) : 0.0;
}

namespace {
std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
}  // namespace

std::uint64_t tau_k(std::uint64_t n, int k) {
  if (n < 1 || k < 1) throw InvalidSpecError("tau_k: need n >= 1, k >= 1");
  std::uint64_t t = 1;
  for (const auto& [p, e] : factor_u64(n)) t *= binomial_u64(e + k - 1, k - 1);
  return t;
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n < 1) throw InvalidSpecError("euler_phi: need n >= 1");
  std::uint64_t r = n;
  for (const auto& [p, e] : factor_u64(n)) r -= r / p;
  return r;
}

long mobius(std::uint64_t n) {
  long m = 1;
  for (const auto& [p, e] : factor_u64(n)) {
    if (e > 1) return 0;
    m = -m;
  }
  return m;
}

SquarePart square_part(std::uint64_t n) {
  if (n < 1) throw InvalidSpecError("square_part: need n >= 1");
  SquarePart sp;
  sp.n = n;
  sp.r = 1;
  for (const auto& [p, e] : factor_u64(n))
    for (int i = 0; i < e / 2; ++i) sp.r *= p;
  sp.s = n / (sp.r * sp.r);
  return sp;
}

double chebyshev_psi(std::uint64_t x, std::uint64_t d, std::uint64_t a) {
  if (x < 1 || d < 1 || a >= d) throw InvalidSpecError("chebyshev_psi: need x,d >= 1 and 0 <= a < d");
  double sum = 0.0;
  const std::uint64_t chunk = std::uint64_t(1) << 22;
  for (std::uint64_t lo = 1; lo <= x; lo += chunk) {
    const std::uint64_t hi = std::min(x, lo + chunk - 1);
    ArithTables t(lo, std::max(hi, lo + 1));
    std::uint64_t n = (a == 0) ? d : a;
    if (n < lo) n += ((lo - n + d - 1) / d) * d;
    for (; n <= hi; n += d) sum += t.mangoldt(n);
  }
  return sum;
}

TauMomentReport tau_moment_check(std::uint64_t X, int k, int l) {
  if (k < 2 || l < 1) throw InvalidSpecError("tau_moment_check: need k >= 2, l >= 1");
  TauMomentReport rep;
  rep.X = X;
  rep.k = k;
  rep.l = l;
  double sum = 0.0;
  for (std::uint64_t n = 1; n <= X; ++n) {
    double t = static_cast<double>(tau_k(n, k));
    sum += std::pow(t, l);
  }
  rep.sum = sum;
  const double lx = std::log(std::max<double>(2.0, static_cast<double>(X)));
  rep.envelope = static_cast<double>(X) * std::pow(lx, std::pow(double(k), double(l)) - 1.0);
  rep.ratio = rep.sum / rep.envelope;
  return rep;
}

// ---------------------------------------------------------------------------
// Primality cache

bool PrimalityCache::is_prime(std::uint64_t n) const {
  if (n < lo || n > hi) throw InvalidSpecError("cache: n outside cached range");
  if (n == 2) return true;
  if (n % 2 == 0) return false;
  const std::uint64_t lo_odd = (lo % 2 == 0) ? lo + 1 : lo;
  const std::uint64_t i = (n - lo_odd) / 2;
  return (odd_bits[i / 8] >> (i % 8)) & 1;
}

PrimalityCache PrimalityCache::build(std::uint64_t lo, std::uint64_t hi) {
  PrimalityCache c;
  c.lo = lo;
  c.hi = hi;
  const std::uint64_t lo_odd = (lo % 2 == 0) ? lo + 1 : lo;
  const std::uint64_t count = (hi >= lo_odd) ? (hi - lo_odd) / 2 + 1 : 0;
  c.odd_bits.assign((count + 7) / 8, 0);
  const std::uint64_t chunk = std::uint64_t(1) << 24;
  for (std::uint64_t s = lo; s <= hi; s += chunk) {
    const std::uint64_t seg_lo = std::max<std::uint64_t>(1, s);
    ArithTables t(seg_lo, std::max(std::min(hi, s + chunk - 1), seg_lo + 1));
    for (std::uint64_t n = (s % 2 == 0 ? s + 1 : s); n <= std::min(hi, t.hi()); n += 2)
      if (n >= lo_odd && t.is_prime(n)) {
        const std::uint64_t i = (n - lo_odd) / 2;
        c.odd_bits[i / 8] |= std::uint8_t(1) << (i % 8);
      }
  }
  return c;
}

namespace {
void put_u32(std::ostream& os, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::ostream& os, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(std::uint8_t(is.get())) << (8 * i);
  return v;
}
std::uint64_t get_u64(std::istream& is) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::uint8_t(is.get())) << (8 * i);
  return v;
}
}  // namespace

void PrimalityCache::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidSpecError("cache: cannot open '" + path + "' for writing");
  os.write("QESV", 4);
  put_u32(os, 1);
  put_u64(os, lo);
  put_u64(os, hi);
  os.write(reinterpret_cast<const char*>(odd_bits.data()),
           static_cast<std::streamsize>(odd_bits.size()));
}

PrimalityCache PrimalityCache::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidSpecError("cache: cannot open '" + path + "'");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "QESV", 4) != 0) throw InvalidSpecError("cache: bad magic");
  const std::uint32_t version = get_u32(is);
  if (version != 1) throw InvalidSpecError("cache: unsupported version " + std::to_string(version));
  PrimalityCache c;
  c.lo = get_u64(is);
  c.hi = get_u64(is);
  if (c.lo < 1 || c.lo > c.hi) throw InvalidSpecError("cache: invalid bounds");
  const std::uint64_t lo_odd = (c.lo % 2 == 0) ? c.lo + 1 : c.lo;
  const std::uint64_t count = (c.hi >= lo_odd) ? (c.hi - lo_odd) / 2 + 1 : 0;
  c.odd_bits.assign((count + 7) / 8, 0);
  is.read(reinterpret_cast<char*>(c.odd_bits.data()), static_cast<std::streamsize>(c.odd_bits.size()));
  if (!is) throw InvalidSpecError("cache: truncated bitset");
  return c;
}

}  // namespace qeq
