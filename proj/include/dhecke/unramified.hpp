#ifndef DHECKE_UNRAMIFIED_HPP
#define DHECKE_UNRAMIFIED_HPP

#include <memory>
#include <tuple>
#include <utility>
#include <vector>

#include "dhecke/errors.hpp"
#include "dhecke/padic.hpp"
#include "dhecke/poly.hpp"

namespace dhecke {

// Ring data for O_v = Z_p[X]/(g) at precision p^M, g monic and irreducible
// modulo p. Shared by all elements of the ring.
class UnramifiedRing;
using UnramifiedRingPtr = std::shared_ptr<const UnramifiedRing>;

class UnramifiedScalar;

class UnramifiedRing : public std::enable_shared_from_this<UnramifiedRing> {
 public:
  static UnramifiedRingPtr make(long p, int M, Poly g) {
    if (M < 1) throw PrecisionTooLow("UnramifiedRing requires M >= 1");
    mpz pM = prime_power(p, M);
    g = poly::reduce(std::move(g), pM);
    if (poly::degree(g) < 1 || g.back() != 1) throw Error("defining polynomial must be monic");
    if (!poly::is_irreducible_fp(g, p))
      throw Error("defining polynomial is reducible modulo p");
    return UnramifiedRingPtr(new UnramifiedRing(p, M, std::move(g), std::move(pM)));
  }

  // Same ring at lower precision; skips the irreducibility re-check.
  UnramifiedRingPtr at_precision(int M2) const {
    if (M2 == M_) return shared_from_this();
    mpz pM2 = prime_power(p_, M2);
    return UnramifiedRingPtr(new UnramifiedRing(p_, M2, poly::reduce(g_, pM2), std::move(pM2)));
  }

  long p() const { return p_; }
  int M() const { return M_; }
  const Poly& g() const { return g_; }
  const mpz& pM() const { return pM_; }
  int deg() const { return poly::degree(g_); }

  bool same(const UnramifiedRing& o) const { return p_ == o.p_ && M_ == o.M_ && g_ == o.g_; }

  inline UnramifiedScalar element(Poly coeffs) const;
  inline UnramifiedScalar generator() const;
  inline UnramifiedScalar from_int(const mpz& n) const;

  // Image of the generator under the ring Frobenius (the automorphism lifting
  // x -> x^p on the residue field): the root of g congruent to X^p mod p.
  inline const Poly& frobenius_image() const;

 private:
  UnramifiedRing(long p, int M, Poly g, mpz pM)
      : p_(p), M_(M), g_(std::move(g)), pM_(std::move(pM)) {}

  long p_;
  int M_;
  Poly g_;
  mpz pM_;
  mutable Poly frob_;  // cached; empty until first use
};

class UnramifiedScalar {
 public:
  UnramifiedScalar() = default;
  UnramifiedScalar(UnramifiedRingPtr ring, Poly coeffs) : ring_(std::move(ring)) {
    coeffs_ = poly::mod(poly::reduce(std::move(coeffs), ring_->pM()), ring_->g(), ring_->pM());
  }

  const UnramifiedRingPtr& ring() const { return ring_; }
  const Poly& coeffs() const { return coeffs_; }
  long prime() const { return ring_->p(); }
  int precision() const { return ring_->M(); }
  int resfield_deg() const { return ring_->deg(); }

  int valuation() const {
    int v = precision();
    for (const auto& c : coeffs_) v = std::min(v, p_valuation(c, prime(), precision()));
    return v;
  }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_unit() const { return valuation() == 0; }

  UnramifiedScalar zero() const { return UnramifiedScalar(ring_, {}); }
  UnramifiedScalar one() const { return UnramifiedScalar(ring_, {mpz(1)}); }
  UnramifiedScalar from_int(const mpz& n) const { return UnramifiedScalar(ring_, {n}); }

  UnramifiedScalar with_precision(int M2) const {
    if (M2 > precision()) throw PrecisionTooLow("cannot raise precision of a known value");
    if (M2 == precision()) return *this;
    return UnramifiedScalar(ring_->at_precision(M2), coeffs_);
  }

  friend UnramifiedScalar operator+(const UnramifiedScalar& a, const UnramifiedScalar& b) {
    auto [x, y, r] = align(a, b);
    return UnramifiedScalar(r, poly::add(x, y, r->pM()));
  }
  friend UnramifiedScalar operator-(const UnramifiedScalar& a, const UnramifiedScalar& b) {
    auto [x, y, r] = align(a, b);
    return UnramifiedScalar(r, poly::sub(x, y, r->pM()));
  }
  friend UnramifiedScalar operator*(const UnramifiedScalar& a, const UnramifiedScalar& b) {
    auto [x, y, r] = align(a, b);
    return UnramifiedScalar(r, poly::mul(x, y, r->pM()));
  }
  UnramifiedScalar operator-() const {
    return UnramifiedScalar(ring_, poly::scale(coeffs_, mpz(-1), ring_->pM()));
  }

  friend bool operator==(const UnramifiedScalar& a, const UnramifiedScalar& b) {
    auto [x, y, r] = align(a, b);
    return poly::sub(x, y, r->pM()).empty();
  }
  friend bool operator!=(const UnramifiedScalar& a, const UnramifiedScalar& b) {
    return !(a == b);
  }

  UnramifiedScalar inverse() const {
    if (!is_unit()) throw NotAUnit("inverse of a non-unit unramified scalar");
    mpz p(prime());
    auto bez = poly::xgcd_fp(coeffs_, ring_->g(), p);
    if (poly::degree(bez.g) != 0) throw NotAUnit("element not invertible modulo p");
    UnramifiedScalar y(ring_, bez.s);  // inverse mod p
    UnramifiedScalar two = from_int(2);
    for (int m = 1; m < precision(); m *= 2) y = y * (two - *this * y);
    return y;
  }

  UnramifiedScalar pow(const mpz& e) const {
    if (e < 0) return inverse().pow(-e);
    return UnramifiedScalar(ring_, poly::powmod(coeffs_, e, ring_->g(), ring_->pM()));
  }

  UnramifiedScalar divide_exact_p(int e) const {
    if (e == 0) return *this;
    if (precision() - e < 1) throw PrecisionExhausted("division by p^e exhausts precision");
    if (valuation() < e) throw NotAUnit("inexact division by p^" + std::to_string(e));
    mpz pe = prime_power(prime(), e);
    Poly q = coeffs_;
    for (auto& c : q) c /= pe;
    return UnramifiedScalar(ring_->at_precision(precision() - e), q);
  }

  // Apply the ring Frobenius automorphism.
  UnramifiedScalar frobenius() const {
    const Poly& fr = ring_->frobenius_image();
    Poly r;
    for (size_t i = coeffs_.size(); i-- > 0;) {
      r = poly::mod(poly::add(poly::mul(r, fr, ring_->pM()), Poly{coeffs_[i]}, ring_->pM()),
                    ring_->g(), ring_->pM());
    }
    return UnramifiedScalar(ring_, r);
  }

  // The constant part, valid when the element lies in Z_p (all higher
  // coefficients zero at the stated precision).
  PadicScalar constant_part(int slack = 0) const {
    int Mout = precision() - slack;
    mpz pm = prime_power(prime(), Mout);
    for (size_t i = 1; i < coeffs_.size(); ++i)
      if (!mpz_divisible_p(coeffs_[i].get_mpz_t(), pm.get_mpz_t()))
        throw NonPrimeFieldResidue("element does not lie in Z_p at the stated precision");
    return PadicScalar(prime(), Mout, coeffs_.empty() ? mpz(0) : coeffs_[0]);
  }

 private:
  static std::tuple<Poly, Poly, UnramifiedRingPtr> align(const UnramifiedScalar& a,
                                                         const UnramifiedScalar& b) {
    const auto& ra = *a.ring_;
    const auto& rb = *b.ring_;
    if (ra.p() != rb.p()) throw RingMismatch("unramified scalars over different primes");
    int minM = std::min(ra.M(), rb.M());
    mpz pmin = prime_power(ra.p(), minM);
    if (poly::reduce(ra.g(), pmin) != poly::reduce(rb.g(), pmin))
      throw RingMismatch("unramified scalars from different rings");
    if (ra.M() == rb.M()) return {a.coeffs_, b.coeffs_, a.ring_};
    const UnramifiedScalar& lower = ra.M() < rb.M() ? a : b;
    UnramifiedScalar other = (ra.M() < rb.M() ? b : a).with_precision(lower.precision());
    return {ra.M() < rb.M() ? a.coeffs_ : other.coeffs_,
            ra.M() < rb.M() ? other.coeffs_ : b.coeffs_, lower.ring_};
  }

  UnramifiedRingPtr ring_;
  Poly coeffs_;
};

inline UnramifiedScalar UnramifiedRing::element(Poly coeffs) const {
  return UnramifiedScalar(shared_from_this(), std::move(coeffs));
}
inline UnramifiedScalar UnramifiedRing::generator() const { return element(poly::x_poly()); }
inline UnramifiedScalar UnramifiedRing::from_int(const mpz& n) const { return element({n}); }

// Evaluate an integer polynomial at an unramified scalar (Horner).
inline UnramifiedScalar eval_poly_at(const Poly& f, const UnramifiedScalar& x) {
  UnramifiedScalar acc = x.zero();
  for (size_t i = f.size(); i-- > 0;) acc = acc * x + x.from_int(f[i]);
  return acc;
}

inline const Poly& UnramifiedRing::frobenius_image() const {
  if (frob_.empty() && deg() > 0) {
    // start from X^p mod (g, p), Newton-lift to a root of g mod p^M
    UnramifiedScalar r = element(poly::powmod(poly::x_poly(), mpz(p_), g_, mpz(p_)));
    Poly dg = poly::derivative(g_, pM_);
    for (int it = 0; it <= M_ + 2; ++it) {
      UnramifiedScalar gr = eval_poly_at(g_, r);
      if (gr.is_zero()) break;
      r = r - gr * eval_poly_at(dg, r).inverse();
    }
    frob_ = r.coeffs();
    if (frob_.empty()) frob_ = Poly{0};  // root could be 0 only if g = X; keep cache non-empty
  }
  return frob_;
}

// A place of Q[X]/(g) over p: an irreducible factor of g modulo p lifted to
// precision p^M, together with the completion it defines.
struct Place {
  Poly factor;  // monic, modulo p^M
  UnramifiedRingPtr completion;

  int degree() const { return poly::degree(factor); }

  // Embed a polynomial in the defining root into the completion.
  UnramifiedScalar embed(const Poly& numerator) const {
    return completion->element(poly::mod(poly::reduce(numerator, completion->pM()), factor,
                                         completion->pM()));
  }
};

// Distinct places of Q[X]/(g) above p, each Hensel-lifted to precision p^M.
// Requires g squarefree modulo p.
inline std::vector<Place> hensel_factor_places(const Poly& g, long p, int M) {
  std::vector<Place> out;
  for (auto& f : poly::hensel_factor(g, p, M)) {
    Place pl;
    pl.completion = UnramifiedRing::make(p, M, f);
    pl.factor = std::move(f);
    out.push_back(std::move(pl));
  }
  return out;
}

}  // namespace dhecke

#endif
