#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qeq/bump.hpp"
#include "qeq/cf.hpp"
#include "qeq/frac.hpp"

namespace qeq {

using cdouble = std::complex<double>;

// sum_{n<=X, n=a(d)} e(alpha n) with the classical bound
// |sum| <= min(X/d + 1, 1/(2||alpha d||)).
struct ProgressionSum {
  cdouble sum;
  double bound = 0.0;
  double norm_alpha_d = 0.0;
  bool degenerate = false;  // ||alpha d|| = 0 within certified error
};

ProgressionSum linear_progression_sum(std::uint64_t X, std::uint64_t d, std::uint64_t a,
                                      const FixedFrac& alpha);
ProgressionSum linear_progression_sum(std::uint64_t X, std::uint64_t d, std::uint64_t a,
                                      const Alpha& alpha);

struct MinSumParams {
  double x = 0.0;
  std::uint64_t M = 1, J = 1;
  int mu = 2, zeta = 2;
  int power = 4;

  double H() const { return x / (std::pow(double(M), power) * double(J)); }
};

struct EnvelopeReport {
  double lhs = 0.0;
  double rhs = 0.0;    // analytic envelope without x^eps and implied constants
  double ratio = 0.0;  // lhs / rhs
  double q_used = 0.0;
};

// sum_{m~M} tau_mu(m) sum_{j~J} tau_zeta(j) min{x/(m^power j), 1/||alpha m^power j||},
// power 2 or 4, against the four-term envelope.
EnvelopeReport min_sum_G(const MinSumParams& p, const Alpha& alpha, const Convergent& q);

struct WeylChain {
  double G = 0.0;   // sum_h sum_j |sum_m e(alpha m^4 j h)|
  double G1 = 0.0;  // first differencing: phase (4m^3 t + 6m^2 t^2 + 4m t^3) j h
  double G2 = 0.0;  // second differencing: phase 12(m^2 t l + m l^2 t + m l t^2) j h
};

WeylChain weyl_chain_G2(const MinSumParams& p, std::uint64_t H0, const Alpha& alpha);

struct VaughanParts {
  cdouble type1;      // -sum_{d<=UV} c(d) sum f(dm), c = (Lambda_{<=U} * mu_{<=V})
  cdouble type1_log;  // sum_{b<=V} mu(b) sum log(l) f(bl)
  cdouble type2;      // bilinear remainder with divisor-bounded coefficients
  cdouble smalls;     // sum_{n<=U} Lambda(n) f(n)
  cdouble total;      // = sum_{n<=x} Lambda(n) f(n) exactly (to rounding)
};

VaughanParts vaughan_decompose(std::uint64_t x, std::uint64_t U, std::uint64_t V,
                               const std::function<cdouble(std::uint64_t)>& weight);

// Coefficients a(n) on the dyadic range n ~ N.
struct CoeffSeq {
  std::uint64_t start = 1;  // range (start, 2*start]
  std::vector<cdouble> values;
  bool divisor_bounded = false;

  cdouble at(std::uint64_t n) const { return values.at(n - start - 1); }
  void validate() const;  // |a(n)| <= tau(n) log n when flagged
};

enum class TypeKind { I, ILog, II };

struct TypeSumResult {
  cdouble W;
  EnvelopeReport env;
  std::uint64_t L = 0;
};

// The type I / I-log / II sums of the Vaughan treatment, with the c(k)e(beta k)
// twist from the bump, against the (5.10) / (5.12) envelopes.
TypeSumResult type_sum_W(TypeKind kind, std::uint64_t K0, std::uint64_t y, std::uint64_t x,
                         std::uint64_t M, const Alpha& alpha, double beta, const CoeffSeq& coeff_a,
                         const CoeffSeq* coeff_b, const BumpFunction& bump, const Convergent& q);

}  // namespace qeq
