#include "qeq/cf.hpp"

#include <cmath>

namespace qeq {

namespace {

double interval_quality(const mpq_class& lo, const mpq_class& hi, const Convergent& c) {
  mpq_class aq(c.a, c.q);
  aq.canonicalize();
  mpq_class d1 = lo - aq, d2 = hi - aq;
  if (d1 < 0) d1 = -d1;
  if (d2 < 0) d2 = -d2;
  mpq_class worst = std::max(d1, d2);
  mpq_class scaled = worst * c.q * c.q;
  return scaled.get_d();
}

void push_convergent(std::vector<Convergent>& out, Convergent c,
                     const mpq_class& lo, const mpq_class& hi) {
  c.quality = interval_quality(lo, hi, c);
  if (c.quality >= 1.0)
    throw PrecisionError("convergents: cannot certify |alpha - a/q| < 1/q^2 at q=" + c.q.get_str());
  if (!out.empty() && out.back().q == c.q)
    out.back() = c;  // only q=1 can repeat; keep the better approximation
  else
    out.push_back(c);
}

}  // namespace

std::vector<Convergent> convergents(const Alpha& alpha, const mpz_class& q_max) {
  if (q_max < 1) throw InvalidSpecError("convergents: q_max must be >= 1");
  if (alpha.spec().kind == IrrationalSpec::Kind::Rational)
    throw InvalidSpecError("convergents: alpha must be irrational");

  mpq_class lo, hi;
  alpha.interval(lo, hi);

  std::vector<Convergent> out;
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;  // p_{-2}/q_{-2}, p_{-1}/q_{-1}

  // For an explicit continued-fraction spec the partial quotients are taken
  // verbatim; otherwise they are extracted from the certified interval and
  // extraction stops (error) before an uncertain quotient would be emitted.
  const bool explicit_cf = alpha.spec().kind == IrrationalSpec::Kind::ContinuedFraction;
  std::size_t cf_index = 0;

  mpq_class xlo = lo, xhi = hi;
  while (true) {
    mpz_class ak;
    if (explicit_cf) {
      if (cf_index >= alpha.spec().cf_terms.size()) break;
      ak = mpz_class(static_cast<unsigned long>(alpha.spec().cf_terms[cf_index++]));
    } else {
      mpz_class fl_lo, fl_hi;
      mpz_fdiv_q(fl_lo.get_mpz_t(), xlo.get_num().get_mpz_t(), xlo.get_den().get_mpz_t());
      mpz_fdiv_q(fl_hi.get_mpz_t(), xhi.get_num().get_mpz_t(), xhi.get_den().get_mpz_t());
      if (fl_lo != fl_hi)
        throw PrecisionError(
            "convergents: insufficient-precision — certified resolution of alpha exhausted "
            "before q_max (last q = " + q1.get_str() + ")");
      ak = fl_lo;
    }
    mpz_class p2 = ak * p1 + p0, q2 = ak * q1 + q0;
    if (q2 > q_max) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    push_convergent(out, Convergent{p1, q1, 0.0}, lo, hi);
    if (!explicit_cf) {
      mpq_class flo = xlo - mpq_class(ak), fhi = xhi - mpq_class(ak);
      if (flo <= 0) break;  // cannot invert a zero-touching interval
      mpq_class nlo = 1 / fhi, nhi = 1 / flo;
      xlo = nlo;
      xhi = nhi;
    }
  }
  if (out.empty())
    throw PrecisionError("convergents: no convergent with q <= " + q_max.get_str());
  return out;
}

ExperimentParams derive_params(double x, double theta, double eta) {
  if (!(theta > 0.0 && theta < 1.0 / 108.0))
    throw InvalidSpecError("theta must lie in (0, 1/108)");
  if (!(eta > 0.0)) throw InvalidSpecError("eta must be positive");
  if (!(x >= 3.0)) throw InvalidSpecError("x must be >= 3");
  ExperimentParams p;
  p.theta = theta;
  p.eta = eta;
  p.x = x;
  const double lx = std::log(x);
  p.delta = std::pow(x, -theta);
  p.K = lx * lx / p.delta;
  p.y = std::pow(x, 1.0 / 6.0 - 2.0 * theta - eta / 2.0);
  return p;
}

ExperimentParams select_scale(const Alpha& alpha, double theta, double eps,
                              const Convergent& q_target) {
  (void)alpha;
  if (!(theta > 0.0 && theta < 1.0 / 108.0))
    throw InvalidSpecError("theta must lie in (0, 1/108)");
  if (!(eps > 0.0)) throw InvalidSpecError("eps must be positive");
  const double eta = 8.0 * eps;
  const double q = q_target.q_d();
  // x K / y = x^(1 - 1/6 + 3 theta + eta/2) log^2 x, strictly increasing
  // for x >= 3; solve in t = log x.
  const double c = 1.0 - 1.0 / 6.0 + 3.0 * theta + eta / 2.0;
  auto g = [&](double t) { return c * t + 2.0 * std::log(t) - std::log(q); };
  double t_lo = std::log(3.0), t_hi = 60.0 * std::log(2.0);
  if (g(t_lo) > 0.0)
    throw InvalidSpecError("select_scale: no-solution — q_target below the minimum at x = 3");
  if (g(t_hi) < 0.0)
    throw ScaleGuardError("select_scale: q_target beyond the x <= 2^60 search window");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (t_lo + t_hi);
    (g(mid) <= 0.0 ? t_lo : t_hi) = mid;
  }
  const double x = std::exp(0.5 * (t_lo + t_hi));
  ExperimentParams p = derive_params(x, theta, eta);
  if (p.y < 2.0) throw InvalidSpecError("select_scale: derived y < 2 at the solving scale");
  return p;
}

}  // namespace qeq
