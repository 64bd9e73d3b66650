#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <gmpxx.h>

#include "qeq/cf.hpp"

using namespace qeq;

namespace {

// Midpoint of the certified interval, for oracle-grade comparisons.
mpq_class midpoint(const Alpha& a) {
  mpq_class lo, hi;
  a.interval(lo, hi);
  return (lo + hi) / 2;
}

}  // namespace

TEST_CASE("phi convergent denominators are Fibonacci") {
  const Alpha phi(IrrationalSpec::parse("phi"));
  const auto cs = convergents(phi, 13);
  std::vector<unsigned long> qs;
  for (const auto& c : cs) qs.push_back(mpz_get_ui(c.q.get_mpz_t()));
  CHECK(qs == std::vector<unsigned long>{1, 2, 3, 5, 8, 13});
}

TEST_CASE("sqrt:2 convergents") {
  const Alpha a(IrrationalSpec::parse("sqrt:2"));
  const auto cs = convergents(a, 29);
  REQUIRE(cs.size() == 5);
  const long want_a[] = {1, 3, 7, 17, 41};
  const long want_q[] = {1, 2, 5, 12, 29};
  for (int i = 0; i < 5; ++i) {
    CHECK(cs[i].a == want_a[i]);
    CHECK(cs[i].q == want_q[i]);
  }
}

TEST_CASE("q_max = 1 gives the single nearest-integer convergent") {
  const Alpha phi(IrrationalSpec::parse("phi"));
  const auto cs = convergents(phi, 1);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].a == 2);  // round(1.618...)
  CHECK(cs[0].q == 1);
}

TEST_CASE("quality satisfies the approximation inequality") {
  for (const char* spec : {"sqrt:2", "sqrt:7", "phi", "sqrt:61"}) {
    const Alpha a(IrrationalSpec::parse(spec));
    for (const auto& c : convergents(a, 1'000'000)) CHECK(c.quality < 1.0);
  }
}

TEST_CASE("convergent recurrence p_k = a_k p_(k-1) + p_(k-2)") {
  const Alpha a(IrrationalSpec::parse("sqrt:2"));
  const auto cs = convergents(a, 1'000'000'000);
  REQUIRE(cs.size() >= 5);
  for (std::size_t k = 2; k < cs.size(); ++k) {
    // Recover a_k from the q recurrence and demand the same a_k works for p.
    const mpz_class num = cs[k].q - cs[k - 2].q;
    REQUIRE(num % cs[k - 1].q == 0);
    const mpz_class ak = num / cs[k - 1].q;
    CHECK(ak >= 1);
    CHECK(cs[k].a == ak * cs[k - 1].a + cs[k - 2].a);
  }
}

TEST_CASE("|q alpha - p| strictly decreasing over random quadratic irrationals") {
  std::mt19937_64 rng(0);
  std::uniform_int_distribution<unsigned long> dist(2, 500);
  int tested = 0;
  while (tested < 20) {
    const unsigned long d = dist(rng);
    const unsigned long r = static_cast<unsigned long>(std::sqrt(double(d)));
    if (r * r == d) continue;
    ++tested;
    const Alpha a(IrrationalSpec::parse("sqrt:" + std::to_string(d)));
    const mpq_class mid = midpoint(a);
    const auto cs = convergents(a, mpz_class(1) << 40);
    mpq_class prev = -1;
    int checked = 0;
    for (const auto& c : cs) {
      if (++checked > 30) break;
      mpq_class dev = abs(mpq_class(c.q) * mid - mpq_class(c.a));
      if (prev >= 0) CHECK(dev < prev);
      prev = dev;
    }
  }
}

TEST_CASE("(3.1) with margin: |alpha - a/q| < 1/(q q_next)") {
  const Alpha a(IrrationalSpec::parse("sqrt:3"));
  const auto cs = convergents(a, 1'000'000);
  const mpq_class mid = midpoint(a);
  for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
    const mpq_class err = abs(mid - mpq_class(cs[i].a) / mpq_class(cs[i].q));
    CHECK(err < mpq_class(1) / (mpq_class(cs[i].q) * mpq_class(cs[i + 1].q)));
    CHECK(err < mpq_class(1) / (mpq_class(cs[i].q) * mpq_class(cs[i].q)));
  }
}

TEST_CASE("derive_params ranges and identities") {
  CHECK_THROWS_AS(derive_params(1e6, 0.02, 0.01), InvalidSpecError);  // theta >= 1/108
  CHECK_THROWS_AS(derive_params(1e6, -0.001, 0.01), InvalidSpecError);
  CHECK_THROWS_AS(derive_params(1e6, 0.005, 0.0), InvalidSpecError);
  const ExperimentParams p = derive_params(1e6, 0.005, 0.016);
  CHECK(p.delta == doctest::Approx(std::pow(1e6, -0.005)));
  CHECK(p.delta * p.K == doctest::Approx(std::pow(std::log(1e6), 2.0)).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(std::pow(1e6, 1.0 / 6.0 - 0.01 - 0.008)));
  CHECK(p.y >= 2.0);
}

TEST_CASE("select_scale solves xK/y = q") {
  const Alpha a(IrrationalSpec::parse("sqrt:2"));
  const double eps = 1e-3;
  const double theta = 1.0 / 108.0 - 2 * eps;
  const auto cs = convergents(a, 1'000'000);
  const Convergent& q = cs.back();

  const ExperimentParams p = select_scale(a, theta, eps, q);
  const double eta = 8 * eps;
  const double lhs = p.x * p.K / p.y;
  CHECK(std::abs(lhs - q.q_d()) / q.q_d() < 1e-6);
  CHECK(p.theta == doctest::Approx(theta));
  CHECK(p.eta == doctest::Approx(eta));

  // Monotone: a strictly larger q target gives a strictly larger x.
  const Convergent& q_small = cs[cs.size() - 2];
  const ExperimentParams p_small = select_scale(a, theta, eps, q_small);
  CHECK(p_small.x < p.x);

  // Independent bisection oracle at 1e-9 tolerance.
  const double c = 5.0 / 6.0 + 3.0 * theta + eta / 2.0;
  auto f = [&](double lx) { return c * lx + 2.0 * std::log(lx) - std::log(q.q_d()); };
  double lo = std::log(3.0), hi = 60.0 * std::log(2.0);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? hi : lo) = mid;
  }
  CHECK(std::abs(std::log(p.x) - lo) < 1e-5);

  // q below the minimum attainable at x = 3: no solution.
  Convergent tiny;
  tiny.a = 1;
  tiny.q = 1;
  CHECK_THROWS_AS(select_scale(a, theta, eps, tiny), InvalidSpecError);
}
