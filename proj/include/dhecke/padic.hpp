#ifndef DHECKE_PADIC_HPP
#define DHECKE_PADIC_HPP

#include <gmpxx.h>

#include <utility>

#include "dhecke/errors.hpp"

namespace dhecke {

using mpz = mpz_class;
using mpq = mpq_class;

inline mpz pow_ui(const mpz& base, unsigned long e) {
  mpz r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline mpz prime_power(long p, int m) { return pow_ui(mpz(p), static_cast<unsigned long>(m)); }

// v_p(n), capped at cap; v_p(0) = cap.
inline int p_valuation(const mpz& n, long p, int cap) {
  if (n == 0) return cap;
  mpz r = n;
  int v = 0;
  while (v < cap && mpz_divisible_ui_p(r.get_mpz_t(), static_cast<unsigned long>(p))) {
    r /= p;
    ++v;
  }
  return v;
}

inline int floor_log(long p, long k) {
  int e = 0;
  long q = p;
  while (q <= k) {
    q *= p;
    ++e;
  }
  return e;
}

// An element of Z/p^M with tracked precision: the value is known modulo p^M.
class PadicScalar {
 public:
  PadicScalar() : p_(2), M_(1), residue_(0) {}
  PadicScalar(long p, int M, mpz residue) : p_(p), M_(M), residue_(std::move(residue)) {
    if (M_ < 1) throw PrecisionTooLow("PadicScalar requires precision M >= 1");
    mpz pm = prime_power(p_, M_);
    mpz_mod(residue_.get_mpz_t(), residue_.get_mpz_t(), pm.get_mpz_t());
  }

  long prime() const { return p_; }
  int precision() const { return M_; }
  const mpz& residue() const { return residue_; }
  int resfield_deg() const { return 1; }

  int valuation() const { return p_valuation(residue_, p_, M_); }
  bool is_zero() const { return residue_ == 0; }
  bool is_unit() const { return valuation() == 0; }

  PadicScalar zero() const { return PadicScalar(p_, M_, 0); }
  PadicScalar one() const { return PadicScalar(p_, M_, 1); }
  PadicScalar from_int(const mpz& n) const { return PadicScalar(p_, M_, n); }

  PadicScalar with_precision(int M2) const {
    if (M2 > M_) throw PrecisionTooLow("cannot raise precision of a known value");
    return PadicScalar(p_, M2, residue_);
  }

  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    a.check_same(b);
    return PadicScalar(a.p_, std::min(a.M_, b.M_), a.residue_ + b.residue_);
  }
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) {
    a.check_same(b);
    return PadicScalar(a.p_, std::min(a.M_, b.M_), a.residue_ - b.residue_);
  }
  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    a.check_same(b);
    return PadicScalar(a.p_, std::min(a.M_, b.M_), a.residue_ * b.residue_);
  }
  PadicScalar operator-() const { return PadicScalar(p_, M_, -residue_); }

  // Equality at the shared precision.
  friend bool operator==(const PadicScalar& a, const PadicScalar& b) {
    a.check_same(b);
    int m = std::min(a.M_, b.M_);
    mpz pm = prime_power(a.p_, m);
    return mpz_congruent_p(a.residue_.get_mpz_t(), b.residue_.get_mpz_t(), pm.get_mpz_t()) != 0;
  }
  friend bool operator!=(const PadicScalar& a, const PadicScalar& b) { return !(a == b); }

  PadicScalar inverse() const {
    if (!is_unit()) throw NotAUnit("inverse of a non-unit p-adic scalar");
    mpz pm = prime_power(p_, M_);
    mpz inv;
    mpz_invert(inv.get_mpz_t(), residue_.get_mpz_t(), pm.get_mpz_t());
    return PadicScalar(p_, M_, inv);
  }

  PadicScalar pow(const mpz& e) const {
    if (e < 0) return inverse().pow(-e);
    mpz pm = prime_power(p_, M_);
    mpz r;
    mpz_powm(r.get_mpz_t(), residue_.get_mpz_t(), e.get_mpz_t(), pm.get_mpz_t());
    return PadicScalar(p_, M_, r);
  }

  // Exact division by p^e; the quotient is known only modulo p^(M-e).
  PadicScalar divide_exact_p(int e) const {
    if (e == 0) return *this;
    if (M_ - e < 1) throw PrecisionExhausted("division by p^e exhausts precision");
    if (p_valuation(residue_, p_, M_) < e) throw NotAUnit("inexact division by p^" + std::to_string(e));
    mpz q = residue_ / prime_power(p_, e);
    return PadicScalar(p_, M_ - e, q);
  }

 private:
  void check_same(const PadicScalar& o) const {
    if (p_ != o.p_) throw RingMismatch("p-adic scalars over different primes");
  }

  long p_;
  int M_;
  mpz residue_;
};

// Residue-field size q = p^f as an exponent pair.
template <class S>
mpz resfield_size(const S& x) {
  return prime_power(x.prime(), x.resfield_deg());
}

// Division by an integer k = p^e * k0 with exact rational bookkeeping: the
// p-part is divided out exactly (costing e digits of precision), the prime-to-p
// part is inverted modulo p^M.
template <class S>
S divide_by_int(const S& x, const mpz& k) {
  long p = x.prime();
  mpz k0 = k;
  int e = 0;
  while (mpz_divisible_ui_p(k0.get_mpz_t(), static_cast<unsigned long>(p))) {
    k0 /= p;
    ++e;
  }
  S y = e > 0 ? x.divide_exact_p(e) : x;
  if (k0 == 1) return y;
  return y * y.from_int(k0).inverse();
}

template <class S>
S mul_by_rational(const S& x, const mpq& r) {
  S y = x * x.from_int(r.get_num());
  return divide_by_int(y, mpz(r.get_den()));
}

// Teichmuller lift: the torsion unit congruent to u, by iterating u <- u^q.
// For p = 2 (rational case) the torsion subgroup is {+-1}, determined by u mod 4.
template <class S>
S teichmuller(const S& u) {
  if (u.valuation() > 0) throw NotAUnit("teichmuller of a non-unit");
  long p = u.prime();
  if (p == 2 && u.resfield_deg() == 1) {
    if (u.precision() == 1) return u.one();
    if constexpr (requires { u.residue(); }) {
      mpz r = u.residue();
      mpz_mod_ui(r.get_mpz_t(), r.get_mpz_t(), 4);
      return r == 3 ? -u.one() : u.one();
    } else {
      return (u - u.one()).valuation() >= 2 ? u.one() : -u.one();
    }
  }
  mpz q = resfield_size(u);
  S x = u;
  for (int it = 0; it <= u.precision() + 2; ++it) {
    S next = x.pow(q);
    if (next == x) return next;
    x = next;
  }
  throw NoConvergence("teichmuller iteration did not stabilize");
}

namespace detail {

// log(w) for w = 1 + z with z of positive valuation (>= 2 required when p = 2),
// by the alternating series with exact rational bookkeeping for each 1/k.
template <class S>
S log_principal(const S& w) {
  long p = w.prime();
  S z = w - w.one();
  int v1 = z.valuation();
  int M = w.precision();
  if (v1 >= M) return w.zero().with_precision(M);
  if (v1 < 1 || (p == 2 && v1 < 2)) throw PrecisionExhausted("p-adic log series does not converge");
  // smallest K with (K+1)*v1 - floor(log_p(K+1)) >= M
  long K = 1;
  while (K * v1 - floor_log(p, K) < M) ++K;
  S acc = w.zero();
  S zk = z;
  for (long k = 1; k <= K; ++k) {
    S term = divide_by_int(zk, mpz(k));
    acc = (k % 2 == 1) ? acc + term : acc - term;
    if (k < K) zk = zk * z;
  }
  int declared = M - floor_log(p, K);
  return acc.with_precision(std::min(declared, acc.precision()));
}

}  // namespace detail

// Iwasawa logarithm of an arbitrary unit: torsion is killed by raising to the
// order of the torsion subgroup, then the principal-unit series is divided back.
template <class S>
S padic_log(const S& u) {
  if (u.valuation() > 0) throw NotAUnit("padic_log of a non-unit");
  long p = u.prime();
  mpz e = resfield_size(u) - 1;
  if (p == 2) e *= 2;
  if (e == 0) e = 1;
  S w = u.pow(e);
  S lg = detail::log_principal(w);
  S out = divide_by_int(lg, e);
  if (out.precision() < 1) throw PrecisionExhausted("padic_log output precision < 1");
  return out;
}

// Torsion/principal decomposition of a unit in Z_p^x:
// u = teich * (1+p)^x for odd p, u = teich * 5^x for p = 2.
struct UnitDecomposition {
  PadicScalar teich;
  PadicScalar exponent;
};

inline UnitDecomposition unit_decompose(const PadicScalar& u) {
  if (u.valuation() > 0) throw NotAUnit("unit_decompose of a non-unit");
  PadicScalar t = teichmuller(u);
  PadicScalar principal = u * t.inverse();
  PadicScalar base = u.from_int(u.prime() == 2 ? mpz(5) : mpz(u.prime() + 1));
  PadicScalar num = padic_log(principal);
  PadicScalar den = padic_log(base);
  int vd = den.valuation();
  PadicScalar x = num.divide_exact_p(vd) * den.divide_exact_p(vd).inverse();
  return UnitDecomposition{t, x};
}

// sqrt(1+z) with s == 1 mod p, by the binomial series; coefficients of
// (1+z)^(1/2) lie in Z[1/2], so they reduce modulo p^M for odd p.
template <class S>
S binomial_sqrt(const S& z) {
  if (z.prime() == 2) throw UnsupportedPrime("binomial square root is disabled at p = 2");
  int vz = z.valuation();
  int M = z.precision();
  if (vz < 1) throw NotAUnit("binomial_sqrt requires valuation(z) >= 1");
  S acc = z.one();
  if (vz >= M) return acc;
  S zn = z;
  mpq coeff(1);
  for (long n = 1; n * vz < M; ++n) {
    // c_n = c_{n-1} * (1/2 - (n-1)) / n
    coeff *= mpq(3 - 2 * n, 2 * n);
    acc = acc + mul_by_rational(zn, coeff);
    zn = zn * z;
  }
  return acc;
}

// The unit root of X^2 - a X + c (valuation(a) = 0, valuation(c) >= 1),
// lifted by Newton iteration from the residue a mod p.
template <class S>
S hensel_unit_root(const S& a, const S& c) {
  if (a.precision() < 1) throw PrecisionTooLow("hensel_unit_root requires M >= 1");
  if (a.valuation() > 0) throw NonOrdinaryInput("quadratic has no unit root: valuation(a_p) > 0");
  if (c.valuation() < 1) throw NonOrdinaryInput("hensel_unit_root requires valuation(c) >= 1");
  S x = a;
  for (int it = 0; it <= a.precision() + 3; ++it) {
    S fx = x * x - a * x + c;
    if (fx.is_zero()) return x;
    S dfx = x + x - a;
    x = x - fx * dfx.inverse();
  }
  throw NoConvergence("hensel_unit_root did not stabilize");
}

}  // namespace dhecke

#endif
