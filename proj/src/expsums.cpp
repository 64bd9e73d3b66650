#include "qeq/expsums.hpp"

#include <cmath>
#include <numeric>

#include "qeq/parallel.hpp"
#include "qeq/sieve.hpp"

namespace qeq {

namespace {

constexpr std::size_t kGeomCutoff = 1024;  // term-by-term below this count

cdouble e_signed(const Alpha& alpha, __int128 v) {
  const bool neg = v < 0;
  const unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-v)
                                    : static_cast<unsigned __int128>(v);
  if (mag > kGuardLimit) throw PrecisionError("phase integer exceeds the precision guard");
  const cdouble z = e_unit(mul_mod1(alpha.frac(), static_cast<std::uint64_t>(mag)));
  return neg ? std::conj(z) : z;
}

// ||alpha v||, recomputed at wide precision when the fixed-point error band
// could flip a min-branch decision.
double certified_norm(const Alpha& alpha, std::uint64_t v, double t_other, bool* used_hi) {
  const FixedFrac f = mul_mod1(alpha.frac(), v);
  const double norm = frac_norm(f);
  if (norm > f.err * 4.0 + 1e-30) {
    // Branch ambiguity: |x/(m^p j) - 1/norm| within the norm-induced slack.
    const double recip = 1.0 / norm;
    const double slack = recip * recip * f.err * 2.0 + 1e-12;
    if (std::abs(recip - t_other) > slack) return norm;
  }
  if (used_hi) *used_hi = true;
  return alpha.norm_hi(v);
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::vector<std::uint32_t> tau_table(std::uint64_t start, int order) {
  // tau_order(n) for n in (start, 2*start]
  std::vector<std::uint32_t> t(start);
  for (std::uint64_t n = start + 1; n <= 2 * start; ++n)
    t[n - start - 1] = static_cast<std::uint32_t>(tau_k(n, order));
  return t;
}

}  // namespace

ProgressionSum linear_progression_sum(std::uint64_t X, std::uint64_t d, std::uint64_t a,
                                      const FixedFrac& alpha) {
  if (X < 1 || d < 1 || a >= d) throw InvalidSpecError("linear_progression_sum: need X,d >= 1, 0 <= a < d");
  ProgressionSum out;
  const std::uint64_t n0 = (a == 0) ? d : a;
  const FixedFrac step = mul_mod1(alpha, d);
  out.norm_alpha_d = frac_norm(step);
  out.degenerate = out.norm_alpha_d <= step.err * 4.0 + 1e-30;
  out.bound = double(X) / double(d) + 1.0;
  if (!out.degenerate) out.bound = std::min(out.bound, 1.0 / (2.0 * out.norm_alpha_d));
  if (n0 > X) {
    out.sum = 0.0;
    return out;
  }
  const std::uint64_t count = (X - n0) / d + 1;
  if (out.degenerate || count <= kGeomCutoff) {
    cdouble acc = 0.0;
    for (std::uint64_t n = n0; n <= X; n += d) acc += e_unit(mul_mod1(alpha, n));
    out.sum = acc;
    return out;
  }
  // Geometric closed form: e(alpha n0) (e(alpha d N) - 1) / (e(alpha d) - 1),
  // with the top phase taken from one exact full-width multiply.
  const cdouble first = e_unit(mul_mod1(alpha, n0));
  const cdouble ratio = e_unit(step);
  const cdouble top = e_unit(mul_mod1(alpha, d * count));
  out.sum = first * (top - 1.0) / (ratio - 1.0);
  return out;
}

ProgressionSum linear_progression_sum(std::uint64_t X, std::uint64_t d, std::uint64_t a,
                                      const Alpha& alpha) {
  return linear_progression_sum(X, d, a, alpha.frac());
}

EnvelopeReport min_sum_G(const MinSumParams& p, const Alpha& alpha, const Convergent& q) {
  if (p.power != 2 && p.power != 4) throw InvalidSpecError("min_sum_G: power must be 2 or 4");
  if (p.M < 1 || p.J < 1 || !(p.x > 0)) throw InvalidSpecError("min_sum_G: positive parameters required");
  if (p.M * p.J > 10'000'000ull) throw ScaleGuardError("min_sum_G: scale-guard-exceeded (MJ > 1e7)");
  const std::uint64_t vmax = ipow(2 * p.M, p.power) * (2 * p.J);
  if (vmax > kGuardLimit) throw PrecisionError("min_sum_G: precision-budget-exceeded (m^power j too large)");

  const auto tau_m = tau_table(p.M, p.mu);
  const auto tau_j = tau_table(p.J, p.zeta);

  const double lhs = chunked_reduce(
      p.M + 1, 2 * p.M, 0.0,
      [&](std::uint64_t mlo, std::uint64_t mhi) {
        double acc = 0.0;
        for (std::uint64_t m = mlo; m <= mhi; ++m) {
          const std::uint64_t mp = ipow(m, p.power);
          const double tm = tau_m[m - p.M - 1];
          for (std::uint64_t j = p.J + 1; j <= 2 * p.J; ++j) {
            const std::uint64_t v = mp * j;
            const double t1 = p.x / static_cast<double>(v);
            const double norm = certified_norm(alpha, v, t1, nullptr);
            acc += tm * tau_j[j - p.J - 1] * std::min(t1, 1.0 / norm);
          }
        }
        return acc;
      },
      std::plus<double>());

  EnvelopeReport rep;
  rep.lhs = lhs;
  rep.q_used = q.q_d();
  const double M = static_cast<double>(p.M), J = static_cast<double>(p.J), x = p.x, qq = rep.q_used;
  if (p.power == 2)
    rep.rhs = M * J + x / std::pow(M, 1.5) + x / (M * std::sqrt(qq)) + std::sqrt(x * qq) / M;
  else
    rep.rhs = M * J + x / std::pow(M, 25.0 / 8.0) + x / (std::pow(M, 3.0) * std::pow(qq, 0.125)) +
              std::pow(x, 7.0 / 8.0) * std::pow(qq, 0.125) / std::pow(M, 3.0);
  rep.ratio = rep.lhs / rep.rhs;
  return rep;
}

WeylChain weyl_chain_G2(const MinSumParams& p, std::uint64_t H0, const Alpha& alpha) {
  if (p.power != 4) throw InvalidSpecError("weyl_chain_G2: power must be 4");
  if (H0 * p.J * p.M > 1'000'000ull)
    throw ScaleGuardError("weyl_chain_G2: scale-guard-exceeded (H0 J M > 1e6)");
  WeylChain out;
  const std::uint64_t M = p.M, J = p.J;
  for (std::uint64_t h = H0 + 1; h <= 2 * H0; ++h) {
    for (std::uint64_t j = J + 1; j <= 2 * J; ++j) {
      cdouble inner = 0.0;
      for (std::uint64_t m = M + 1; m <= 2 * M; ++m)
        inner += e_signed(alpha, static_cast<__int128>(ipow(m, 4)) * j * h);
      out.G += std::abs(inner);

      for (std::int64_t t = -std::int64_t(M) + 1; t < std::int64_t(M); ++t) {
        if (t == 0) continue;
        cdouble in1 = 0.0;
        for (std::uint64_t m = M + 1; m <= 2 * M; ++m) {
          const __int128 mm = m, tt = t;
          const __int128 phase = (4 * mm * mm * mm * tt + 6 * mm * mm * tt * tt + 4 * mm * tt * tt * tt) *
                                 static_cast<__int128>(j) * static_cast<__int128>(h);
          in1 += e_signed(alpha, phase);
        }
        out.G1 += std::abs(in1);

        for (std::int64_t l = -std::int64_t(M) + 1; l < std::int64_t(M); ++l) {
          if (l == 0) continue;
          cdouble in2 = 0.0;
          for (std::uint64_t m = M + 1; m <= 2 * M; ++m) {
            const __int128 mm = m, tt = t, ll = l;
            const __int128 phase = 12 * (mm * mm * tt * ll + mm * ll * ll * tt + mm * ll * tt * tt) *
                                   static_cast<__int128>(j) * static_cast<__int128>(h);
            in2 += e_signed(alpha, phase);
          }
          out.G2 += std::abs(in2);
        }
      }
    }
  }
  return out;
}

VaughanParts vaughan_decompose(std::uint64_t x, std::uint64_t U, std::uint64_t V,
                               const std::function<cdouble(std::uint64_t)>& weight) {
  if (U < 2 || V < 2) throw InvalidSpecError("vaughan_decompose: need U, V >= 2");
  if (x > 10'000'000ull) throw ScaleGuardError("vaughan_decompose: scale guard x <= 1e7");
  VaughanParts out;
  if (x < 2) {
    out.total = 0.0;
    return out;
  }
  ArithTables tables(1, x);

  // smalls: n <= U
  for (std::uint64_t n = 2; n <= std::min(U, x); ++n) out.smalls += tables.mangoldt(n) * weight(n);

  // type I-log: sum_{b<=V} mu(b) sum_{l<=x/b} log(l) f(bl)
  for (std::uint64_t b = 1; b <= V && b <= x; ++b) {
    const long mu = mobius(b);
    if (mu == 0) continue;
    cdouble inner = 0.0;
    for (std::uint64_t l = 1; l <= x / b; ++l)
      inner += std::log(static_cast<double>(l)) * weight(b * l);
    out.type1_log += static_cast<double>(mu) * inner;
  }

  // type I: -sum_{d<=UV} c(d) sum_{m<=x/d} f(dm), c(d) = sum_{ab=d,a<=U,b<=V} Lambda(a) mu(b)
  const std::uint64_t UV = std::min(U * V, x);
  std::vector<double> c(UV + 1, 0.0);
  for (std::uint64_t a = 2; a <= std::min(U, UV); ++a) {
    const double lam = tables.mangoldt(a);
    if (lam == 0.0) continue;
    for (std::uint64_t b = 1; b <= V && a * b <= UV; ++b) {
      const long mu = mobius(b);
      if (mu != 0) c[a * b] += lam * static_cast<double>(mu);
    }
  }
  for (std::uint64_t d = 2; d <= UV; ++d) {
    if (c[d] == 0.0) continue;
    cdouble inner = 0.0;
    for (std::uint64_t m = 1; m <= x / d; ++m) inner += weight(d * m);
    out.type1 -= c[d] * inner;
  }

  // type II: -sum_{V<k<=x/U} g(k) sum_{U<m<=x/k} Lambda(m) f(mk),
  // g(k) = sum_{b|k, b<=V} mu(b), |g(k)| <= tau(k).
  if (x / U > V) {
    const std::uint64_t kmax = x / U;
    std::vector<double> g(kmax + 1, 0.0);
    for (std::uint64_t b = 1; b <= std::min(V, kmax); ++b) {
      const long mu = mobius(b);
      if (mu == 0) continue;
      for (std::uint64_t k = b; k <= kmax; k += b) g[k] += static_cast<double>(mu);
    }
    for (std::uint64_t k = V + 1; k <= kmax; ++k) {
      if (g[k] == 0.0) continue;
      cdouble inner = 0.0;
      for (std::uint64_t m = U + 1; m <= x / k; ++m) inner += tables.mangoldt(m) * weight(m * k);
      out.type2 -= g[k] * inner;
    }
  }

  out.total = out.smalls + out.type1_log + out.type1 + out.type2;
  return out;
}

void CoeffSeq::validate() const {
  if (!divisor_bounded) return;
  for (std::uint64_t n = start + 1; n <= start + values.size(); ++n) {
    const double cap = static_cast<double>(tau_k(n, 2)) * std::log(std::max<double>(2.0, double(n)));
    if (std::abs(at(n)) > cap + 1e-9)
      throw InvalidSpecError("CoeffSeq: coefficient exceeds tau(n) log n at n=" + std::to_string(n));
  }
}

TypeSumResult type_sum_W(TypeKind kind, std::uint64_t K0, std::uint64_t y, std::uint64_t x,
                         std::uint64_t M, const Alpha& alpha, double beta, const CoeffSeq& coeff_a,
                         const CoeffSeq* coeff_b, const BumpFunction& bump, const Convergent& q) {
  if (K0 < 1 || 2 * K0 > static_cast<std::uint64_t>(bump.cutoff()))
    throw InvalidSpecError("type_sum_W: need 1 <= K0 <= K/2");
  const std::uint64_t L = std::max<std::uint64_t>(1, x / (2 * M));
  const double x13 = std::pow(double(x), 1.0 / 3.0), x23 = std::pow(double(x), 2.0 / 3.0);
  if (kind == TypeKind::II) {
    if (double(M) < x13 * 0.99 || double(M) > x23 * 1.01)
      throw InvalidSpecError("type_sum_W: range-violation — type II needs x^(1/3) <= M <= x^(2/3)");
    if (coeff_b == nullptr) throw InvalidSpecError("type_sum_W: type II needs coeff_b");
  } else if (double(M) > x13 * 1.01) {
    throw InvalidSpecError("type_sum_W: range-violation — type I needs M <= x^(1/3)");
  }
  // y == 0 is the degenerate hook: r ranges over {1} and the congruence is vacuous.
  if (y > 1 && y * y >= L)
    throw InvalidSpecError("type_sum_W: range-violation — need y^2 < L for the residue parametrization");
  const double yd_guard = std::max<double>(1.0, static_cast<double>(y));
  const double work = double(K0) * yd_guard * double(M) * (double(L) / (yd_guard * yd_guard) + 1.0);
  if (work > 1e8) throw ScaleGuardError("type_sum_W: work guard exceeded (> 1e8 inner terms)");
  if (coeff_a.values.size() < M) throw InvalidSpecError("type_sum_W: coeff_a must cover m ~ M");
  coeff_a.validate();
  if (coeff_b) {
    if (coeff_b->values.size() < L) throw InvalidSpecError("type_sum_W: coeff_b must cover l ~ L");
    coeff_b->validate();
  }

  cdouble W = 0.0;
  for (std::uint64_t k = K0 + 1; k <= 2 * K0; ++k) {
    const double ck = bump.coeff(static_cast<long>(k));
    const double bang = 2.0 * 3.14159265358979323846 * beta * static_cast<double>(k);
    const cdouble twist = ck * cdouble(std::cos(bang), std::sin(bang));
    cdouble per_k = 0.0;
    const std::uint64_t r_lo = (y == 0) ? 1 : y + 1;
    const std::uint64_t r_hi = (y == 0) ? 1 : 2 * y;
    for (std::uint64_t r = r_lo; r <= r_hi; ++r) {
      const std::uint64_t r2 = r * r;
      for (std::uint64_t m = M + 1; m <= 2 * M; ++m) {
        if (std::gcd(m, r) != 1) continue;  // no inverse: such m contribute nothing
        // l = f + r^2 t with m f = 1 (mod r^2)
        std::uint64_t f = 1;
        if (r2 > 1) {
          mpz_class inv, mm(static_cast<unsigned long>(m % r2)), rr(static_cast<unsigned long>(r2));
          mpz_invert(inv.get_mpz_t(), mm.get_mpz_t(), rr.get_mpz_t());
          f = mpz_get_ui(inv.get_mpz_t());
        }
        const cdouble am = coeff_a.at(m);
        if (am == 0.0) continue;
        if (kind == TypeKind::I) {
          // Geometric closed form over the progression, as a prefix difference.
          const FixedFrac step_alpha = mul_mod1(alpha.frac(), m * k);
          const auto s2 = linear_progression_sum(2 * L, r2, f % r2, step_alpha);
          const auto s1 = linear_progression_sum(L, r2, f % r2, step_alpha);
          per_k += am * (s2.sum - s1.sum);
        } else {
          cdouble inner = 0.0;
          std::uint64_t l = f == 0 ? r2 : f;
          while (l <= L) l += r2;
          for (; l <= 2 * L; l += r2) {
            const cdouble ph = e_unit(mul_mod1(alpha.frac(), m * l * k));
            if (kind == TypeKind::ILog)
              inner += std::log(static_cast<double>(l)) * ph;
            else
              inner += coeff_b->at(l) * ph;
          }
          per_k += am * inner;
        }
      }
    }
    W += twist * per_k;
  }

  TypeSumResult res;
  res.W = W;
  res.L = L;
  res.env.lhs = std::abs(W);
  res.env.q_used = q.q_d();
  const double K = static_cast<double>(bump.cutoff());
  const double xd = static_cast<double>(x), yd = std::max<double>(1.0, static_cast<double>(y)),
               qq = res.env.q_used;
  if (kind == TypeKind::II)
    res.env.rhs = std::pow(xd, 0.75) * K + xd * K / std::pow(yd, 17.0 / 16.0) +
                  xd * K / (yd * std::pow(qq, 0.125)) +
                  std::pow(xd, 15.0 / 16.0) * std::pow(K, 15.0 / 16.0) * std::pow(qq, 1.0 / 16.0) / yd;
  else
    res.env.rhs = yd * x13 * K + xd * K / std::pow(yd, 1.5) + xd * K / (yd * std::sqrt(qq)) +
                  std::sqrt(xd) * std::sqrt(K) * std::sqrt(qq) / yd;
  res.env.ratio = res.env.lhs / res.env.rhs;
  return res;
}

}  // namespace qeq
