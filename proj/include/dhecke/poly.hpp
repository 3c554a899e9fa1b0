#ifndef DHECKE_POLY_HPP
#define DHECKE_POLY_HPP

#include <gmpxx.h>

#include <algorithm>
#include <vector>

#include "dhecke/errors.hpp"
#include "dhecke/padic.hpp"

namespace dhecke {

// Dense little-endian polynomials with coefficients reduced modulo an mpz
// modulus. Used for F_p and Z/p^M arithmetic behind the unramified rings.
using Poly = std::vector<mpz>;

namespace poly {

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

inline Poly reduce(Poly f, const mpz& mod) {
  for (auto& c : f) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
  trim(f);
  return f;
}

inline Poly x_poly() { return Poly{0, 1}; }

inline Poly add(const Poly& a, const Poly& b, const mpz& mod) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return reduce(std::move(r), mod);
}

inline Poly sub(const Poly& a, const Poly& b, const mpz& mod) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return reduce(std::move(r), mod);
}

inline Poly mul(const Poly& a, const Poly& b, const mpz& mod) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return reduce(std::move(r), mod);
}

inline Poly scale(const Poly& a, const mpz& c, const mpz& mod) {
  Poly r = a;
  for (auto& x : r) x *= c;
  return reduce(std::move(r), mod);
}

// Division with remainder; the divisor's leading coefficient must be a unit
// modulo mod (always true for monic divisors).
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, const mpz& mod) {
  Poly num = reduce(a, mod);
  Poly den = reduce(b, mod);
  if (den.empty()) throw Error("polynomial division by zero");
  mpz lead_inv;
  if (mpz_invert(lead_inv.get_mpz_t(), den.back().get_mpz_t(), mod.get_mpz_t()) == 0)
    throw NotAUnit("polynomial divisor has non-unit leading coefficient");
  Poly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, 0);
  while (degree(num) >= degree(den)) {
    int shift = degree(num) - degree(den);
    mpz c = num.back() * lead_inv;
    mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
    q[shift] = c;
    for (size_t i = 0; i < den.size(); ++i) {
      num[shift + i] -= c * den[i];
      mpz_mod(num[shift + i].get_mpz_t(), num[shift + i].get_mpz_t(), mod.get_mpz_t());
    }
    trim(num);
  }
  trim(q);
  return {q, num};
}

inline Poly mod(const Poly& a, const Poly& b, const mpz& m) { return divmod(a, b, m).second; }

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& f, const mpz& m) {
  return mod(mul(a, b, m), f, m);
}

inline Poly powmod(Poly base, mpz e, const Poly& f, const mpz& m) {
  Poly r{1};
  base = mod(base, f, m);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = mulmod(r, base, f, m);
    base = mulmod(base, base, f, m);
    e >>= 1;
  }
  return r;
}

inline Poly derivative(const Poly& f, const mpz& mod) {
  Poly r;
  for (size_t i = 1; i < f.size(); ++i) r.push_back(f[i] * static_cast<long>(i));
  return reduce(std::move(r), mod);
}

inline Poly make_monic(const Poly& f, const mpz& mod) {
  if (f.empty()) return f;
  mpz inv;
  if (mpz_invert(inv.get_mpz_t(), f.back().get_mpz_t(), mod.get_mpz_t()) == 0)
    throw NotAUnit("cannot normalize: non-unit leading coefficient");
  return scale(f, inv, mod);
}

// gcd over F_p (p prime), returned monic.
inline Poly gcd_fp(Poly a, Poly b, const mpz& p) {
  a = reduce(std::move(a), p);
  b = reduce(std::move(b), p);
  while (!b.empty()) {
    Poly r = mod(a, make_monic(b, p), p);
    a = std::move(b);
    b = std::move(r);
  }
  return a.empty() ? a : make_monic(a, p);
}

// Extended gcd over F_p: returns (g, s, t) with s*a + t*b = g, g monic.
struct XGcd {
  Poly g, s, t;
};
inline XGcd xgcd_fp(const Poly& a, const Poly& b, const mpz& p) {
  Poly r0 = reduce(a, p), r1 = reduce(b, p);
  Poly s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1, p);
    Poly s2 = sub(s0, mul(q, s1, p), p);
    Poly t2 = sub(t0, mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.empty()) return {r0, s0, t0};
  mpz inv;
  mpz_invert(inv.get_mpz_t(), r0.back().get_mpz_t(), p.get_mpz_t());
  return {scale(r0, inv, p), scale(s0, inv, p), scale(t0, inv, p)};
}

namespace detail {

// Deterministic xorshift generator for the Cantor-Zassenhaus splitting; test
// reproducibility matters more than entropy here.
inline unsigned long cz_next(unsigned long& state) {
  state ^= state << 13;
  state ^= state >> 7;
  state ^= state << 17;
  return state;
}

inline void edf(const Poly& f, int d, const mpz& p, unsigned long& rng, std::vector<Poly>& out) {
  if (degree(f) == d) {
    out.push_back(make_monic(f, p));
    return;
  }
  int n = degree(f);
  while (true) {
    Poly r(n, 0);
    for (int i = 0; i < n; ++i) r[i] = mpz(cz_next(rng)) % p;
    trim(r);
    if (r.empty()) continue;
    Poly w;
    if (p == 2) {
      // trace map sum r^(2^i), i < d
      w = r;
      Poly ri = r;
      for (int i = 1; i < d; ++i) {
        ri = mulmod(ri, ri, f, p);
        w = add(w, ri, p);
      }
    } else {
      mpz e = (pow_ui(p, static_cast<unsigned long>(d)) - 1) / 2;
      w = powmod(r, e, f, p);
      w = sub(w, Poly{1}, p);
    }
    Poly g = gcd_fp(w, f, p);
    if (degree(g) > 0 && degree(g) < degree(f)) {
      edf(g, d, p, rng, out);
      edf(divmod(f, g, p).first, d, p, rng, out);
      return;
    }
  }
}

}  // namespace detail

// Factor a monic polynomial that is squarefree mod p into monic irreducible
// factors over F_p. Throws RamifiedPrime if f mod p is not squarefree.
inline std::vector<Poly> factor_squarefree_fp(const Poly& f_in, long p_l) {
  mpz p(p_l);
  Poly f = make_monic(reduce(f_in, p), p);
  if (degree(f) < 1) throw Error("factor_squarefree_fp: constant polynomial");
  if (degree(gcd_fp(f, derivative(f, p), p)) != 0)
    throw RamifiedPrime("polynomial is not squarefree modulo p");
  std::vector<Poly> out;
  unsigned long rng = 0x9e3779b97f4a7c15ULL;
  Poly rem = f;
  Poly xp_power = x_poly();  // x^(p^d) mod rem, recomputed per degree
  for (int d = 1; 2 * d <= degree(rem); ++d) {
    // recompute x^(p^d) modulo the current rem from scratch (rem shrinks)
    Poly h = x_poly();
    for (int i = 0; i < d; ++i) h = powmod(h, p, rem, p);
    Poly g = gcd_fp(sub(h, x_poly(), p), rem, p);
    if (degree(g) > 0) {
      detail::edf(g, d, p, rng, out);
      rem = divmod(rem, g, p).first;
    }
  }
  if (degree(rem) > 0) out.push_back(make_monic(rem, p));
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_irreducible_fp(const Poly& f, long p) {
  try {
    return factor_squarefree_fp(f, p).size() == 1;
  } catch (const RamifiedPrime&) {
    return false;
  }
}

namespace detail {

// One linear Hensel step: f = g*h (mod p^j) with s*g + t*h = 1 (mod p) lifts
// to f = g'*h' (mod p^(j+1)). All of f, g, h monic.
inline void hensel_step(const Poly& f, Poly& g, Poly& h, const Poly& s, const Poly& t, long p_l,
                        int j) {
  mpz pj1 = prime_power(p_l, j + 1);
  Poly e = sub(f, mul(g, h, pj1), pj1);
  auto [q, r] = divmod(mul(s, e, pj1), h, pj1);
  (void)q;
  h = add(h, r, pj1);  // r = 0 mod p^j, so h stays monic of the same degree
  auto [g2, rem] = divmod(f, h, pj1);
  if (!rem.empty()) throw Error("hensel_step: lifted cofactor does not divide");
  g = std::move(g2);
  (void)t;
}

inline void hensel_lift_list(const Poly& f, const std::vector<Poly>& factors_fp, size_t lo,
                             size_t hi, long p, int M, std::vector<Poly>& out) {
  if (hi - lo == 1) {
    out.push_back(reduce(f, prime_power(p, M)));
    return;
  }
  size_t mid = lo + (hi - lo) / 2;
  mpz pz(p);
  Poly g{1}, h{1};
  for (size_t i = lo; i < mid; ++i) g = mul(g, factors_fp[i], pz);
  for (size_t i = mid; i < hi; ++i) h = mul(h, factors_fp[i], pz);
  auto bez = xgcd_fp(g, h, pz);
  if (degree(bez.g) != 0) throw RamifiedPrime("factors not coprime modulo p");
  for (int j = 1; j < M; ++j) hensel_step(f, g, h, bez.s, bez.t, p, j);
  hensel_lift_list(g, factors_fp, lo, mid, p, M, out);
  hensel_lift_list(h, factors_fp, mid, hi, p, M, out);
}

}  // namespace detail

// Factor a monic integer polynomial, squarefree mod p, into monic factors
// modulo p^M whose reductions mod p are the irreducible factors over F_p.
inline std::vector<Poly> hensel_factor(const Poly& f, long p, int M) {
  if (M < 1) throw PrecisionTooLow("hensel_factor requires M >= 1");
  std::vector<Poly> fp = factor_squarefree_fp(f, p);
  std::vector<Poly> out;
  detail::hensel_lift_list(reduce(f, prime_power(p, M)), fp, 0, fp.size(), p, M, out);
  return out;
}

inline mpz eval(const Poly& f, const mpz& x, const mpz& mod) {
  mpz r = 0;
  for (size_t i = f.size(); i-- > 0;) {
    r = r * x + f[i];
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  }
  return r;
}

}  // namespace poly

}  // namespace dhecke

#endif
