#ifndef DHECKE_CYCLOTOMIC_HPP
#define DHECKE_CYCLOTOMIC_HPP

#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "dhecke/errors.hpp"
#include "dhecke/padic.hpp"
#include "dhecke/poly.hpp"
#include "dhecke/unramified.hpp"

namespace dhecke {

using QPoly = std::vector<mpq>;

namespace qpoly {

inline void trim(QPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const QPoly& f) { return static_cast<int>(f.size()) - 1; }

inline QPoly add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), mpq(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

inline QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), mpq(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

inline QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, mpq(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
  QPoly num = a, den = b;
  trim(num);
  trim(den);
  if (den.empty()) throw Error("rational polynomial division by zero");
  QPoly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, mpq(0));
  while (degree(num) >= degree(den)) {
    int shift = degree(num) - degree(den);
    mpq c = num.back() / den.back();
    q[shift] = c;
    for (size_t i = 0; i < den.size(); ++i) num[shift + i] -= c * den[i];
    trim(num);
  }
  trim(q);
  return {q, num};
}

inline QPoly mod(const QPoly& a, const QPoly& b) { return divmod(a, b).second; }

// Extended gcd over Q[X]: s*a + t*b = g (g monic or zero).
inline std::tuple<QPoly, QPoly, QPoly> xgcd(const QPoly& a, const QPoly& b) {
  QPoly r0 = a, r1 = b;
  qpoly::trim(r0);
  qpoly::trim(r1);
  QPoly s0{mpq(1)}, s1{}, t0{}, t1{mpq(1)};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1);
    QPoly s2 = sub(s0, mul(q, s1));
    QPoly t2 = sub(t0, mul(q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (!r0.empty()) {
    mpq lead = r0.back();
    for (auto& c : r0) c /= lead;
    for (auto& c : s0) c /= lead;
    for (auto& c : t0) c /= lead;
  }
  return {r0, s0, t0};
}

}  // namespace qpoly

// The m-th cyclotomic polynomial with integer coefficients.
inline Poly cyclotomic_polynomial(long m) {
  if (m < 1) throw Error("cyclotomic index must be positive");
  // X^m - 1 divided by the product of Phi_d for proper divisors d of m.
  QPoly num(static_cast<size_t>(m) + 1, mpq(0));
  num[0] = -1;
  num[static_cast<size_t>(m)] = 1;
  for (long d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    Poly phid = cyclotomic_polynomial(d);
    QPoly den(phid.size());
    for (size_t i = 0; i < phid.size(); ++i) den[i] = mpq(phid[i]);
    auto [q, r] = qpoly::divmod(num, den);
    if (!r.empty()) throw Error("cyclotomic division was not exact");
    num = std::move(q);
  }
  Poly out(num.size());
  for (size_t i = 0; i < num.size(); ++i) {
    if (num[i].get_den() != 1) throw Error("cyclotomic polynomial not integral");
    out[i] = num[i].get_num();
  }
  return out;
}

class CycElem;

// The ring Z[zeta_m] (with rational coefficients allowed, i.e. Q(zeta_m)),
// elements in the power basis modulo Phi_m.
class CyclotomicRing : public std::enable_shared_from_this<CyclotomicRing> {
 public:
  static std::shared_ptr<const CyclotomicRing> make(long m) {
    return std::shared_ptr<const CyclotomicRing>(new CyclotomicRing(m));
  }

  long m() const { return m_; }
  const QPoly& phi() const { return phi_; }
  int deg() const { return qpoly::degree(phi_); }

  inline CycElem element(QPoly coeffs) const;
  inline CycElem from_int(const mpz& n) const;
  inline CycElem from_rational(const mpq& r) const;
  inline CycElem zero() const;
  inline CycElem one() const;
  inline CycElem zeta(long k = 1) const;  // zeta_m^k

 private:
  explicit CyclotomicRing(long m) : m_(m) {
    Poly p = cyclotomic_polynomial(m);
    phi_.resize(p.size());
    for (size_t i = 0; i < p.size(); ++i) phi_[i] = mpq(p[i]);
  }

  long m_;
  QPoly phi_;
};

using CyclotomicRingPtr = std::shared_ptr<const CyclotomicRing>;

class CycElem {
 public:
  CycElem() = default;
  CycElem(CyclotomicRingPtr ring, QPoly coeffs) : ring_(std::move(ring)) {
    coeffs_ = qpoly::mod(std::move(coeffs), ring_->phi());
  }

  const CyclotomicRingPtr& ring() const { return ring_; }
  const QPoly& coeffs() const { return coeffs_; }
  long order() const { return ring_->m(); }

  bool is_zero() const { return coeffs_.empty(); }
  bool same_ring(const CycElem& o) const { return ring_->m() == o.ring_->m(); }

  CycElem zero() const { return CycElem(ring_, {}); }
  CycElem one() const { return CycElem(ring_, {mpq(1)}); }
  CycElem from_int(const mpz& n) const { return CycElem(ring_, {mpq(n)}); }

  friend CycElem operator+(const CycElem& a, const CycElem& b) {
    a.check(b);
    return CycElem(a.ring_, qpoly::add(a.coeffs_, b.coeffs_));
  }
  friend CycElem operator-(const CycElem& a, const CycElem& b) {
    a.check(b);
    return CycElem(a.ring_, qpoly::sub(a.coeffs_, b.coeffs_));
  }
  friend CycElem operator*(const CycElem& a, const CycElem& b) {
    a.check(b);
    return CycElem(a.ring_, qpoly::mul(a.coeffs_, b.coeffs_));
  }
  CycElem operator-() const {
    QPoly c = coeffs_;
    for (auto& x : c) x = -x;
    return CycElem(ring_, std::move(c));
  }
  friend bool operator==(const CycElem& a, const CycElem& b) {
    a.check(b);
    return qpoly::sub(a.coeffs_, b.coeffs_).empty();
  }
  friend bool operator!=(const CycElem& a, const CycElem& b) { return !(a == b); }

  CycElem inverse() const {
    if (is_zero()) throw NotAUnit("inverse of zero in a cyclotomic field");
    auto [g, s, t] = qpoly::xgcd(coeffs_, ring_->phi());
    (void)t;
    if (qpoly::degree(g) != 0) throw Error("phi_m not coprime to element");
    return CycElem(ring_, s);
  }

  CycElem pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    CycElem r = one(), b = *this;
    while (e > 0) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  // Galois twist zeta -> zeta^k, gcd(k, m) = 1. k = -1 is complex conjugation.
  CycElem galois_twist(long k) const {
    long m = ring_->m();
    k %= m;
    if (k < 0) k += m;
    CycElem zk = ring_->zeta(k);
    CycElem acc = zero();
    for (size_t i = coeffs_.size(); i-- > 0;)
      acc = acc * zk + CycElem(ring_, {coeffs_[i]});
    return acc;
  }
  CycElem conj() const { return galois_twist(-1); }

  bool is_integral() const {
    for (const auto& c : coeffs_) {
      if (c.get_den() != 1) return false;
    }
    return true;
  }

  bool is_rational() const { return coeffs_.size() <= 1; }
  mpq rational_value() const {
    if (!is_rational()) throw Error("cyclotomic element is not rational");
    return coeffs_.empty() ? mpq(0) : coeffs_[0];
  }

  // Embed into an unramified completion in which `zeta_image` is a primitive
  // m-th root of unity; rational denominators must be prime to p.
  UnramifiedScalar embed(const UnramifiedScalar& zeta_image) const {
    UnramifiedScalar acc = zeta_image.zero();
    for (size_t i = coeffs_.size(); i-- > 0;) {
      UnramifiedScalar c =
          divide_by_int(zeta_image.from_int(coeffs_[i].get_num()), mpz(coeffs_[i].get_den()));
      acc = acc * zeta_image + c;
    }
    return acc;
  }

  std::complex<double> to_complex() const {
    long m = ring_->m();
    std::complex<double> z = std::polar(1.0, 2.0 * 3.141592653589793238462643 / double(m));
    std::complex<double> acc = 0.0;
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * z + coeffs_[i].get_d();
    return acc;
  }

 private:
  void check(const CycElem& o) const {
    if (ring_->m() != o.ring_->m()) throw RingMismatch("cyclotomic elements of different level");
  }

  CyclotomicRingPtr ring_;
  QPoly coeffs_;
};

inline CycElem CyclotomicRing::element(QPoly coeffs) const {
  return CycElem(shared_from_this(), std::move(coeffs));
}
inline CycElem CyclotomicRing::from_int(const mpz& n) const { return element({mpq(n)}); }
inline CycElem CyclotomicRing::from_rational(const mpq& r) const { return element({r}); }
inline CycElem CyclotomicRing::zero() const { return element({}); }
inline CycElem CyclotomicRing::one() const { return element({mpq(1)}); }
inline CycElem CyclotomicRing::zeta(long k) const {
  k %= m_;
  if (k < 0) k += m_;
  QPoly x(static_cast<size_t>(k) + 1, mpq(0));
  x.back() = 1;
  return element(std::move(x));
}

// A place of Q(zeta_m) over p (p coprime to m): a factor of Phi_m mod p^M
// together with the image of zeta in the completion.
struct CyclotomicPlace {
  Place place;
  UnramifiedScalar zeta_image;
};

inline std::vector<CyclotomicPlace> cyclotomic_places(long m, long p, int M) {
  Poly phi = cyclotomic_polynomial(m);
  std::vector<CyclotomicPlace> out;
  for (auto& pl : hensel_factor_places(phi, p, M)) {
    CyclotomicPlace cp;
    cp.zeta_image = pl.completion->generator();
    cp.place = std::move(pl);
    out.push_back(std::move(cp));
  }
  return out;
}

}  // namespace dhecke

#endif
