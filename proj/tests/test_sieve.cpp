#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "qeq/sieve.hpp"

using namespace qeq;

TEST_CASE("sieve_segment small ranges") {
  const ArithTables t = sieve_segment(2, 10);
  std::vector<std::uint64_t> p = t.primes();
  CHECK(p == std::vector<std::uint64_t>{2, 3, 5, 7});
  const ArithTables u = sieve_segment(90, 100);
  CHECK(u.primes() == std::vector<std::uint64_t>{97});
}

TEST_CASE("sieve_segment [1e8, 1e8+1e3] has 54 primes") {
  const ArithTables t = sieve_segment(100'000'000, 100'001'000);
  CHECK(t.primes().size() == 54);
}

TEST_CASE("sieve_segment preconditions") {
  CHECK_THROWS_AS(sieve_segment(10, 5), InvalidSpecError);
  CHECK_THROWS_AS(sieve_segment(0, 5), InvalidSpecError);
  CHECK_THROWS_AS(sieve_segment(1, 2 + ArithTables::kMaxSegment), ScaleGuardError);
}

TEST_CASE("mangoldt values") {
  CHECK(mangoldt(8) == doctest::Approx(std::log(2.0)));
  CHECK(mangoldt(6) == 0.0);
  CHECK(mangoldt(7) == doctest::Approx(std::log(7.0)));
  CHECK(mangoldt(1) == 0.0);
}

TEST_CASE("tau_k values") {
  CHECK(tau_k(12, 2) == 6);
  CHECK(tau_k(1, 2) == 1);
  CHECK(tau_k(4, 3) == 6);
  // Brute-force tau_3 for n <= 10: count ordered triples with product n.
  for (std::uint64_t n = 1; n <= 10; ++n) {
    std::uint64_t count = 0;
    for (std::uint64_t a = 1; a <= n; ++a)
      for (std::uint64_t b = 1; a * b <= n; ++b)
        if (n % (a * b) == 0) ++count;
    CHECK(tau_k(n, 3) == count);
  }
}

TEST_CASE("tau_moment_check") {
  const auto rep = tau_moment_check(100, 2, 1);
  CHECK(rep.sum == doctest::Approx(482.0));
  CHECK(tau_moment_check(1, 2, 1).sum == doctest::Approx(1.0));
  // Ratio drift stays below 1.2 per doubling for X >= 1e4.
  double prev = tau_moment_check(10'000, 2, 1).ratio;
  for (std::uint64_t X = 20'000; X <= 80'000; X *= 2) {
    const double cur = tau_moment_check(X, 2, 1).ratio;
    CHECK(cur <= prev * 1.2);
    prev = cur;
  }
}

TEST_CASE("square_part examples and exhaustive check") {
  auto sp = square_part(12);
  CHECK(sp.r == 2);
  CHECK(sp.s == 3);
  sp = square_part(16);
  CHECK(sp.r == 4);
  CHECK(sp.s == 1);
  sp = square_part(7);
  CHECK(sp.r == 1);
  CHECK(sp.s == 7);
  for (std::uint64_t n = 1; n <= 1'000'000; ++n) {
    const SquarePart q = square_part(n);
    REQUIRE(q.s * q.r * q.r == n);
    // s squarefree, by independent trial division.
    bool squarefree = true;
    for (std::uint64_t d = 2; d * d <= q.s; ++d)
      if (q.s % (d * d) == 0) {
        squarefree = false;
        break;
      }
    REQUIRE(squarefree);
  }
}

TEST_CASE("chebyshev_psi examples") {
  CHECK(chebyshev_psi(10, 1, 0) == doctest::Approx(std::log(2520.0)).epsilon(1e-12));
  CHECK(chebyshev_psi(10, 4, 1) == doctest::Approx(std::log(15.0)).epsilon(1e-12));
  CHECK(chebyshev_psi(1, 5, 2) == 0.0);
}

TEST_CASE("euler_phi examples and phi(r^2) = r phi(r)") {
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(12) == 4);
  for (std::uint64_t r = 1; r <= 1000; ++r) CHECK(euler_phi(r * r) == r * euler_phi(r));
}

TEST_CASE("divisor-sum identities up to 1e5") {
  const std::uint64_t N = 100'000;
  std::vector<double> phi_sum(N + 1, 0.0), lam_sum(N + 1, 0.0);
  for (std::uint64_t d = 1; d <= N; ++d) {
    const double ph = static_cast<double>(euler_phi(d));
    const double lam = mangoldt(d);
    for (std::uint64_t n = d; n <= N; n += d) {
      phi_sum[n] += ph;
      lam_sum[n] += lam;
    }
  }
  for (std::uint64_t n = 1; n <= N; ++n) {
    REQUIRE(phi_sum[n] == static_cast<double>(n));
    REQUIRE(std::abs(lam_sum[n] - std::log(static_cast<double>(n))) < 1e-9);
  }
}

TEST_CASE("seam test: segmented sieve agrees with whole-range sieve") {
  const ArithTables whole(2, 2000);
  const ArithTables left(2, 1000);
  const ArithTables right(900, 2000);
  for (std::uint64_t n = 2; n <= 1000; ++n) {
    REQUIRE(left.lpf(n) == whole.lpf(n));
    REQUIRE(left.is_prime(n) == whole.is_prime(n));
  }
  for (std::uint64_t n = 900; n <= 2000; ++n) REQUIRE(right.lpf(n) == whole.lpf(n));
}

TEST_CASE("mobius and factorization sanity") {
  CHECK(mobius(1) == 1);
  CHECK(mobius(6) == 1);
  CHECK(mobius(30) == -1);
  CHECK(mobius(12) == 0);
  for (std::uint64_t n = 2; n <= 1000; ++n) {
    std::uint64_t prod = 1;
    for (auto [p, e] : factor_u64(n))
      for (int i = 0; i < e; ++i) prod *= p;
    REQUIRE(prod == n);
  }
}

TEST_CASE("primality cache round-trip") {
  const PrimalityCache built = PrimalityCache::build(2, 10'000);
  for (std::uint64_t n = 2; n <= 10'000; ++n) REQUIRE(built.is_prime(n) == is_prime_u64(n));

  const std::string path = "qeq_cache_test.bin";
  built.save(path);
  const PrimalityCache loaded = PrimalityCache::load(path);
  CHECK(loaded.lo == built.lo);
  CHECK(loaded.hi == built.hi);
  for (std::uint64_t n = 2; n <= 10'000; ++n) REQUIRE(loaded.is_prime(n) == built.is_prime(n));
  CHECK_THROWS_AS(loaded.is_prime(10'001), InvalidSpecError);

  // Corrupt the magic and expect a load failure.
  {
    std::FILE* f = std::fopen(path.c_str(), "r+b");
    REQUIRE(f != nullptr);
    std::fputc('X', f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(PrimalityCache::load(path), Error);
  std::remove(path.c_str());
}
