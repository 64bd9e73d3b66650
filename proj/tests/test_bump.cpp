#include <doctest.h>

#include <cmath>
#include <complex>

#include "qeq/bump.hpp"

using namespace qeq;

TEST_CASE("build parameter validation") {
  CHECK_THROWS_AS(BumpFunction::build(0.0, 100.0), InvalidSpecError);
  CHECK_THROWS_AS(BumpFunction::build(0.3, 100.0), InvalidSpecError);
  CHECK_THROWS_AS(BumpFunction::build(-0.1, 100.0), InvalidSpecError);
  CHECK_THROWS_AS(BumpFunction::build(0.1, 2.0), InvalidSpecError);
}

TEST_CASE("c(0) = delta exactly and construction invariants") {
  const BumpFunction chi = BumpFunction::build(0.1, 100.0);
  CHECK(chi.coeff(0) == 0.1);
  CHECK(chi.order() >= 1);
  CHECK(chi.order() * chi.mollifier_width() <= 0.1);
  CHECK(chi.cutoff() >= 1);
  CHECK(chi.tail_bound(chi.cutoff()) <= 1.0 / 100.0);
}

TEST_CASE("support condition: chi(1/2) = 0 for delta = 0.1") {
  const BumpFunction chi = BumpFunction::build(0.1, 100.0);
  CHECK(chi.eval(0.5) == 0.0);
  CHECK(chi.eval(0.1) == 0.0);   // boundary t = delta
  CHECK(chi.eval(0.9) == 0.0);   // 1 - delta
  CHECK(chi.eval(0.35) == 0.0);  // interior of the zero plateau
}

TEST_CASE("plateau, symmetry and range") {
  const BumpFunction chi = BumpFunction::build(0.1, 100.0);
  CHECK(chi.eval(0.0) == 1.0);
  for (double t = -0.5; t <= 0.5001; t += 0.001) {
    const double v = chi.eval(t);
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
    REQUIRE(chi.eval(-t) == doctest::Approx(v).epsilon(1e-13));
    if (std::min(std::abs(t), 1.0 - std::abs(t)) >= 0.1) REQUIRE(v == 0.0);
  }
}

TEST_CASE("max |c(k)| <= delta over |k| <= 10K") {
  const BumpFunction chi = BumpFunction::build(0.1, 100.0);
  for (long k = 1; k <= 10 * chi.cutoff(); ++k) CHECK(std::abs(chi.coeff(k)) <= 0.1);
}

TEST_CASE("Fourier evaluation matches direct evaluation within the tail bound") {
  const BumpFunction chi = BumpFunction::build(0.05, 1000.0);
  const long K = chi.cutoff();
  const double tail = chi.tail_bound(K);
  for (int i = 0; i < 1000; ++i) {
    const double t = static_cast<double>(i) / 1000.0;
    const std::complex<double> z = chi.eval_fourier_complex(t, K);
    REQUIRE(std::abs(z.imag()) < 1e-12);
    REQUIRE(std::abs(z.real() - chi.eval(t)) <= tail + 1e-12);
  }
  // K_trunc = 0 degenerates to the constant delta.
  CHECK(chi.eval_fourier(0.3, 0) == doctest::Approx(0.05));
  CHECK(std::abs(chi.eval_fourier(0.0, K) - 1.0) <= tail + 1e-12);
}

TEST_CASE("mean value is delta (Simpson quadrature)") {
  const BumpFunction chi = BumpFunction::build(0.1, 100.0);
  const int n = 20000;  // even
  const double h = 1.0 / n;
  double integral = chi.eval(0.0) + chi.eval(1.0);
  for (int i = 1; i < n; ++i) integral += (i % 2 ? 4.0 : 2.0) * chi.eval(i * h);
  integral *= h / 3.0;
  CHECK(std::abs(integral - 0.1) < 1e-9);
}

TEST_CASE("Parseval sanity") {
  const BumpFunction chi = BumpFunction::build(0.1, 100.0);
  double sum_sq = chi.coeff(0) * chi.coeff(0);
  for (long k = 1; k <= 10 * chi.cutoff(); ++k) {
    const double c = chi.coeff(k);
    sum_sq += 2.0 * c * c;
  }
  const int n = 20000;
  const double h = 1.0 / n;
  auto sq = [&](double t) {
    const double v = chi.eval(t);
    return v * v;
  };
  double integral = sq(0.0) + sq(1.0);
  for (int i = 1; i < n; ++i) integral += (i % 2 ? 4.0 : 2.0) * sq(i * h);
  integral *= h / 3.0;
  CHECK(sum_sq <= integral + 1e-9);
  CHECK(integral <= 0.1 + 1e-9);
}

TEST_CASE("tail bound is monotone and dominated by the numeric partial sum") {
  const BumpFunction chi = BumpFunction::build(0.05, 1000.0);
  const long K = chi.cutoff();
  CHECK(chi.tail_bound(2 * K) <= chi.tail_bound(K));
  double partial = 0.0;
  for (long k = K + 1; k <= 10 * K; ++k) partial += 2.0 * std::abs(chi.coeff(k));
  CHECK(partial <= chi.tail_bound(K));
  CHECK(chi.tail_bound(K) <= 1.0 / 1000.0);
}
