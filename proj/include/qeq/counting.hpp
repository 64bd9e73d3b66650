#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qeq/bump.hpp"
#include "qeq/frac.hpp"
#include "qeq/sieve.hpp"

namespace qeq {

// A prime p = a r^2 + 1 passing both Theorem-type conditions.
struct Witness {
  std::uint64_t p = 0, a = 0, r = 0;
};

struct GammaCountReport {
  std::uint64_t x = 0;
  double theta = 0.0, eta = 0.0;
  std::uint64_t gamma = 0;  // primes p ~ x with s(p-1) <= p^(2/3+4 theta+eta), ||alpha p+beta|| < p^-theta
  std::vector<Witness> witnesses;  // up to 100, rechecked on construction
};

GammaCountReport gamma_count(std::uint64_t x, const Alpha& alpha, double beta, double theta,
                             double eta);

bool recheck_witness(const Witness& w, const Alpha& alpha, double beta, double theta, double eta);

struct Gamma2Report {
  double gamma2 = 0.0;          // sum_{r~y} sum_{n~x, n=1(r^2)} Lambda(n)
  double main_term = 0.0;       // x / (2 zeta(2) y)
  double phi_prediction = 0.0;  // sum_{r~y} x / phi(r^2)
  double ratio_main = 0.0;
  double ratio_phi = 0.0;
};

Gamma2Report gamma2(std::uint64_t x, std::uint64_t y);

struct Gamma13Report {
  double gamma1 = 0.0;
  double gamma3 = 0.0;
  double identity_residual = 0.0;  // |gamma1/delta - gamma2 - gamma3|
  double delta = 0.0;              // bump plateau mass actually used
  double delta_requested = 0.0;    // x^-theta (clamped into (0, 1/4) when needed)
  long K = 0;
  double tail = 0.0;  // tail_bound(K)
  double T = 0.0;     // sum_{n~x} Lambda(n) #{r~y : r^2 | n-1}  (= gamma2)
};

Gamma13Report gamma1_gamma3(std::uint64_t x, std::uint64_t y, double theta, const Alpha& alpha,
                            double beta);

struct QuadraticForm {
  std::int64_t a = 1, b = 0, c = 1;

  std::int64_t discriminant() const { return b * b - 4 * a * c; }
  void validate() const;  // throws InvalidSpecError naming the violated hypothesis
};

struct HlReport {
  std::uint64_t empirical = 0;  // distinct primes f(n) <= x, n in Z
  double predicted = 0.0;       // smoothed main term with sigma(D) truncated at p_cut
  double sigma = 0.0;
  double ratio = 0.0;
};

HlReport hl_density(const QuadraticForm& f, std::uint64_t x, std::uint64_t p_cut);

// Legendre symbol (D/p) for odd prime p, by Euler's criterion.
int kronecker_symbol(std::int64_t D, std::uint64_t p);

struct Histogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  double discrepancy = 0.0;  // star-discrepancy estimate over bin boundaries
};

Histogram equidist_histogram(std::uint64_t x, const Alpha& alpha, double beta, int bins,
                             const PrimalityCache* cache = nullptr);

}  // namespace qeq
