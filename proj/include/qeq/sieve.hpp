#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qeq/errors.hpp"

namespace qeq {

// n = s * r^2 with r maximal; s is squarefree.
struct SquarePart {
  std::uint64_t n = 1, r = 1, s = 1;
};

// Least-prime-factor table over a segment [lo, hi], sieve-backed.
class ArithTables {
 public:
  static constexpr std::uint64_t kMaxSegment = std::uint64_t(1) << 26;

  ArithTables(std::uint64_t lo, std::uint64_t hi);

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }

  bool in_range(std::uint64_t n) const { return n >= lo_ && n <= hi_; }
  bool is_prime(std::uint64_t n) const;
  // Smallest prime dividing n; n itself when prime, 1 for n = 1.
  std::uint64_t lpf(std::uint64_t n) const;
  double mangoldt(std::uint64_t n) const;
  std::vector<std::pair<std::uint64_t, int>> factor(std::uint64_t n) const;

  const std::vector<std::uint32_t>& base_primes() const { return base_primes_; }

  std::vector<std::uint64_t> primes() const;

 private:
  std::uint64_t lo_, hi_;
  std::vector<std::uint32_t> small_lpf_;  // 0 => no prime factor <= sqrt(hi)
  std::vector<std::uint32_t> base_primes_;
};

ArithTables sieve_segment(std::uint64_t lo, std::uint64_t hi);

// Primes up to limit (simple whole-range sieve).
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

// Factor n by trial division (n <= ~2^52 at desk scale).
std::vector<std::pair<std::uint64_t, int>> factor_u64(std::uint64_t n);

bool is_prime_u64(std::uint64_t n);
double mangoldt(std::uint64_t n);
std::uint64_t tau_k(std::uint64_t n, int k);
std::uint64_t euler_phi(std::uint64_t n);
long mobius(std::uint64_t n);
SquarePart square_part(std::uint64_t n);

// psi(x, d, a) = sum of Lambda(n) over n <= x, n = a (mod d).
double chebyshev_psi(std::uint64_t x, std::uint64_t d, std::uint64_t a);

struct TauMomentReport {
  std::uint64_t X = 0;
  int k = 2, l = 1;
  double sum = 0.0;        // sum_{n<=X} tau_k(n)^l
  double envelope = 0.0;   // X (log X)^(k^l - 1)
  double ratio = 0.0;
};

TauMomentReport tau_moment_check(std::uint64_t X, int k, int l);

// On-disk primality cache: header {magic "QESV", version u32, lo u64, hi u64}
// followed by a little-endian packed odd-number primality bitset.
struct PrimalityCache {
  std::uint64_t lo = 0, hi = 0;
  std::vector<std::uint8_t> odd_bits;  // bit i => lo_odd + 2i is prime

  bool is_prime(std::uint64_t n) const;
  static PrimalityCache build(std::uint64_t lo, std::uint64_t hi);
  void save(const std::string& path) const;
  static PrimalityCache load(const std::string& path);
};

}  // namespace qeq
