#ifndef DHECKE_DIHEDRAL_HPP
#define DHECKE_DIHEDRAL_HPP

#include <map>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

#include "dhecke/cyclotomic.hpp"
#include "dhecke/errors.hpp"
#include "dhecke/qexp.hpp"

namespace dhecke {

// Positive definite binary quadratic form a x^2 + b x y + c y^2.
struct BQForm {
  mpz a, b, c;
  mpz disc() const { return b * b - 4 * a * c; }
  friend bool operator==(const BQForm& x, const BQForm& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c;
  }
  friend bool operator<(const BQForm& x, const BQForm& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.c < y.c;
  }
};

// An imaginary quadratic field of fundamental discriminant -D, D > 0.
class ImagQuadField {
 public:
  explicit ImagQuadField(long D) : D_(D) {
    mpz d(-D);
    long r = ((-D) % 4 + 4) % 4;
    bool ok = false;
    if (r == 1) {
      ok = squarefree(mpz(D));
    } else if (r == 0) {
      mpz m = d / 4;
      long rm = mpz_fdiv_ui(m.get_mpz_t(), 4);
      ok = (rm == 2 || rm == 3) && squarefree(-m);
    }
    if (D < 3 || !ok) throw NotFundamental("-" + std::to_string(D) + " is not a fundamental discriminant");
  }

  long D() const { return D_; }
  mpz disc() const { return mpz(-D_); }

  // Kronecker symbol (-D | n), the quadratic character attached to the field.
  int kronecker(long n) const { return mpz_kronecker_si(disc().get_mpz_t(), n); }

 private:
  static bool squarefree(const mpz& n_in) {
    mpz n = abs(n_in);
    for (mpz d = 2; d * d <= n; ++d)
      if (mpz_divisible_p(n.get_mpz_t(), mpz(d * d).get_mpz_t())) return false;
    return true;
  }

  long D_;
};

namespace detail {

// Reduce (a,b,c) to the unique reduced representative of its class.
inline BQForm reduce_form(BQForm f) {
  mpz D = f.disc();
  while (true) {
    // translate b into (-a, a]
    mpz t = f.a - f.b;
    mpz k;
    mpz_fdiv_q(k.get_mpz_t(), t.get_mpz_t(), mpz(2 * f.a).get_mpz_t());
    f.b += 2 * k * f.a;
    f.c = (f.b * f.b - D) / (4 * f.a);
    if (f.a > f.c) {
      std::swap(f.a, f.c);
      f.b = -f.b;
      continue;
    }
    break;
  }
  if ((f.a == f.c || f.a == abs(f.b)) && f.b < 0) f.b = -f.b;
  return f;
}

// Hermite basis of the ideal product, in coordinates over {1/2, sqrt(disc)/2}.
// Returns (A, B, C) for the basis (A, 0), (B, C).
inline std::tuple<mpz, mpz, mpz> hnf2(std::vector<std::pair<mpz, mpz>> v) {
  // make all second coordinates zero except one gcd row
  mpz B = 0, C = 0;
  for (auto& [x, y] : v) {
    if (y == 0) continue;
    if (C == 0) {
      B = x;
      C = y;
      continue;
    }
    mpz g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), C.get_mpz_t(), y.get_mpz_t());
    mpz B2 = s * B + t * x;
    mpz x2 = (C / g) * x - (y / g) * B;
    B = B2;
    C = g;
    x = x2;
    y = 0;
  }
  mpz A = 0;
  for (auto& [x, y] : v)
    if (y == 0 && x != 0) mpz_gcd(A.get_mpz_t(), A.get_mpz_t(), x.get_mpz_t());
  if (C < 0) {
    C = -C;
    B = -B;
  }
  if (A != 0) mpz_mod(B.get_mpz_t(), B.get_mpz_t(), A.get_mpz_t());
  return {A, B, C};
}

// Gaussian composition via multiplication of the corresponding ideal lattices.
inline BQForm compose_forms(const BQForm& f1, const BQForm& f2) {
  mpz D = f1.disc();
  if (D != f2.disc()) throw Error("composing forms of different discriminant");
  // ideal of (a,b,c): Z a + Z (-b + sqrt(D))/2; products in {1/2, sqrt(D)/2}
  std::vector<std::pair<mpz, mpz>> gens = {
      {2 * f1.a * f2.a, 0},
      {-f1.a * f2.b, f1.a},
      {-f2.a * f1.b, f2.a},
      {(f1.b * f2.b + D) / 2, -(f1.b + f2.b) / 2}};
  auto [A, B, C] = hnf2(std::move(gens));
  // lattice is C * (ideal of the composed form): a3 = A/(2C), b3 = -B/C
  if (C == 0 || !mpz_divisible_p(A.get_mpz_t(), mpz(2 * C).get_mpz_t()) ||
      !mpz_divisible_p(B.get_mpz_t(), C.get_mpz_t()))
    throw Error("form composition produced an invalid lattice");
  mpz a3 = A / (2 * C);
  mpz b3 = -B / C;
  mpz twoa = 2 * a3;
  mpz_mod(b3.get_mpz_t(), b3.get_mpz_t(), twoa.get_mpz_t());
  // fix parity: b3 must satisfy b3^2 = D mod 4 a3
  mpz rem = b3 * b3 - D;
  if (!mpz_divisible_p(rem.get_mpz_t(), mpz(4 * a3).get_mpz_t()))
    throw Error("form composition produced an invalid lattice");
  BQForm out{a3, b3, (b3 * b3 - D) / (4 * a3)};
  return reduce_form(out);
}

}  // namespace detail

// The form class group of discriminant -D: reduced forms, composition table,
// and a greedy generating set with orders.
class FormClassGroup {
 public:
  explicit FormClassGroup(const ImagQuadField& K) : D_(K.D()) {
    // enumerate reduced forms: -a < b <= a <= c, b^2 - 4ac = -D
    for (mpz a = 1; 3 * a * a <= D_; ++a) {
      for (mpz b = -a + 1; b <= a; ++b) {
        mpz num = b * b + D_;
        if (!mpz_divisible_p(num.get_mpz_t(), mpz(4 * a).get_mpz_t())) continue;
        mpz c = num / (4 * a);
        if (c < a) continue;
        if ((a == c || a == (b < 0 ? -b : b)) && b < 0) continue;
        mpz g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g != 1) continue;  // imprimitive
        forms_.push_back(BQForm{a, b, c});
      }
    }
    // include the bound edge case a with 3a^2 = D handled above; sort & index
    std::sort(forms_.begin(), forms_.end());
    for (size_t i = 0; i < forms_.size(); ++i) index_[forms_[i]] = i;

    size_t h = forms_.size();
    table_.assign(h, std::vector<size_t>(h));
    for (size_t i = 0; i < h; ++i)
      for (size_t j = i; j < h; ++j) {
        size_t k = index_.at(detail::compose_forms(forms_[i], forms_[j]));
        table_[i][j] = table_[j][i] = k;
      }
    identity_ = index_.at(detail::reduce_form(BQForm{
        mpz(1), mpz(D_ % 2 == 0 ? 0 : 1), mpz((D_ % 2 == 0 ? D_ / 4 : (D_ + 1) / 4))}));

    // greedy generating set
    std::vector<bool> span(h, false);
    span[identity_] = true;
    size_t covered = 1;
    for (size_t g = 0; g < h && covered < h; ++g) {
      if (span[g]) continue;
      generators_.push_back(g);
      gen_orders_.push_back(order_of(g));
      // close the span under the new generator
      std::vector<size_t> frontier;
      for (size_t x = 0; x < h; ++x)
        if (span[x]) frontier.push_back(x);
      for (size_t qi = 0; qi < frontier.size(); ++qi) {
        size_t y = table_[frontier[qi]][g];
        if (!span[y]) {
          span[y] = true;
          ++covered;
          frontier.push_back(y);
        }
      }
    }
    exponent_ = 1;
    for (size_t x = 0; x < h; ++x) exponent_ = std::lcm(exponent_, order_of(x));
  }

  long D() const { return D_; }
  size_t size() const { return forms_.size(); }
  const std::vector<BQForm>& forms() const { return forms_; }
  size_t identity() const { return identity_; }
  size_t compose(size_t i, size_t j) const { return table_[i][j]; }
  const std::vector<size_t>& generators() const { return generators_; }
  const std::vector<long>& generator_orders() const { return gen_orders_; }
  long exponent() const { return exponent_; }

  size_t index_of(const BQForm& f) const {
    auto it = index_.find(detail::reduce_form(f));
    if (it == index_.end()) throw Error("form does not have discriminant -D");
    return it->second;
  }

  size_t inverse(size_t i) const {
    const BQForm& f = forms_[i];
    return index_.at(detail::reduce_form(BQForm{f.a, -f.b, f.c}));
  }

  long order_of(size_t i) const {
    long n = 1;
    size_t x = i;
    while (x != identity_) {
      x = table_[x][i];
      ++n;
    }
    return n;
  }

  // class of a prime ideal above p (p split or ramified): the reduced form
  // (p, b, *) with b^2 = -D mod 4p
  size_t prime_class(long p) const {
    for (long b = (D_ % 2 == 0) ? 0 : 1; b <= p; b += 2) {
      mpz num = mpz(b) * b + D_;
      if (mpz_divisible_p(num.get_mpz_t(), mpz(4 * p).get_mpz_t()))
        return index_of(BQForm{mpz(p), mpz(b), num / (4 * p)});
    }
    throw Error("no prime ideal of norm " + std::to_string(p));
  }

 private:
  long D_;
  std::vector<BQForm> forms_;
  std::map<BQForm, size_t> index_;
  std::vector<std::vector<size_t>> table_;
  size_t identity_ = 0;
  std::vector<size_t> generators_;
  std::vector<long> gen_orders_;
  long exponent_ = 1;
};

inline FormClassGroup class_group(long D) { return FormClassGroup(ImagQuadField(D)); }

// A character of the form class group with values in Z[zeta_m], m the group
// exponent, given by root-of-unity exponents on the greedy generators.
class ClassCharacter {
 public:
  ClassCharacter(const FormClassGroup& G, std::vector<long> gen_exponents)
      : ring_(CyclotomicRing::make(G.exponent())), exps_(std::move(gen_exponents)) {
    if (exps_.size() != G.generators().size())
      throw BadCharacter("expected one exponent per group generator");
    size_t h = G.size();
    values_.assign(h, std::optional<CycElem>{});
    values_[G.identity()] = ring_->one();
    std::vector<size_t> frontier{G.identity()};
    for (size_t qi = 0; qi < frontier.size(); ++qi) {
      size_t x = frontier[qi];
      for (size_t gi = 0; gi < G.generators().size(); ++gi) {
        size_t y = G.compose(x, G.generators()[gi]);
        CycElem v = *values_[x] * ring_->zeta(exps_[gi]);
        if (!values_[y]) {
          values_[y] = v;
          frontier.push_back(y);
        } else if (*values_[y] != v) {
          throw BadCharacter("generator images do not define a character");
        }
      }
    }
    // full consistency over the whole multiplication table
    for (size_t i = 0; i < h; ++i)
      for (size_t gi = 0; gi < G.generators().size(); ++gi) {
        size_t y = G.compose(i, G.generators()[gi]);
        if (*values_[y] != *values_[i] * ring_->zeta(exps_[gi]))
          throw BadCharacter("character values are inconsistent");
      }
  }

  const CyclotomicRingPtr& ring() const { return ring_; }
  const std::vector<long>& generator_exponents() const { return exps_; }
  const CycElem& operator()(size_t class_index) const { return *values_[class_index]; }

  ClassCharacter conjugate(const FormClassGroup& G) const {
    std::vector<long> neg;
    for (long e : exps_) neg.push_back(-e);
    return ClassCharacter(G, neg);
  }

  bool is_trivial() const {
    for (const auto& v : values_)
      if (*v != ring_->one()) return false;
    return true;
  }

 private:
  CyclotomicRingPtr ring_;
  std::vector<long> exps_;
  std::vector<std::optional<CycElem>> values_;
};

// Hecke eigenvalue a_p of the dihedral form attached to chi.
inline CycElem dihedral_ap(const ImagQuadField& K, const FormClassGroup& G,
                           const ClassCharacter& chi, long p) {
  int kr = K.kronecker(p);
  if (kr == -1) return chi.ring()->zero();
  size_t c = G.prime_class(p);
  if (kr == 0) return chi(c);  // ramified: the 2-torsion class itself
  return chi(c) + chi(G.inverse(c));
}

// Weight-1 dihedral newform for the class character chi of Q(sqrt(-D)).
class DihedralForm {
 public:
  DihedralForm(long D, std::vector<long> gen_exponents)
      : K_(D), G_(K_), chi_(G_, std::move(gen_exponents)) {
    if (D == 3 || D == 4)
      throw BadCharacter("discriminants -3 and -4 have extra units and are not supported");
  }

  const ImagQuadField& field() const { return K_; }
  const FormClassGroup& group() const { return G_; }
  const ClassCharacter& chi() const { return chi_; }
  long level() const { return K_.D(); }

  CycElem ap(long p) const { return dihedral_ap(K_, G_, chi_, p); }

  NebentypusPtr<CycElem> nebentypus() const {
    auto ring = chi_.ring();
    long D = K_.D();
    return std::make_shared<const Nebentypus<CycElem>>(Nebentypus<CycElem>{
        "kronecker(-" + std::to_string(D) + ")",
        [ring, D](long n) { return ring->from_int(mpz_kronecker_si(mpz(-D).get_mpz_t(), n)); }});
  }

  // q-expansion built multiplicatively from the Euler factors at each prime.
  QExpansion<CycElem> theta_expansion(long T) const {
    if (T < 1) throw TruncationTooShort("theta_expansion needs T >= 1");
    auto ring = chi_.ring();
    // local coefficient tables a_{p^k} for each prime p <= T
    std::map<long, std::vector<CycElem>> loc;
    for (long p = 2; p <= T; ++p) {
      bool prime = true;
      for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) prime = false;
      if (!prime) continue;
      std::vector<CycElem> lp{ring->one()};
      int kr = K_.kronecker(p);
      if (kr == -1) {
        // a_{p^k} vanishes for odd k and equals 1 for even k: the only ideals
        // of norm p^{2j} are powers of the principal ideal (p)
        for (long pk = p; pk <= T; pk *= p)
          lp.push_back(lp.size() % 2 == 1 ? ring->zero() : ring->one());
      } else if (kr == 0) {
        CycElem cp = chi_(G_.prime_class(p));
        for (long pk = p; pk <= T; pk *= p) lp.push_back(lp.back() * cp);
      } else {
        size_t cls = G_.prime_class(p);
        CycElem u = chi_(cls), v = chi_(G_.inverse(cls));
        for (long pk = p; pk <= T; pk *= p) {
          long k = static_cast<long>(lp.size());
          CycElem s = ring->zero(), ui = ring->one();
          for (long i = 0; i <= k; ++i) {
            s = s + ui * v.pow(k - i);
            ui = ui * u;
          }
          lp.push_back(s);
        }
      }
      loc.emplace(p, std::move(lp));
    }
    std::vector<CycElem> a;
    a.reserve(static_cast<size_t>(T));
    for (long n = 1; n <= T; ++n) {
      CycElem an = ring->one();
      long m = n;
      for (long p = 2; p * p <= m; ++p) {
        int k = 0;
        while (m % p == 0) {
          m /= p;
          ++k;
        }
        if (k > 0) an = an * loc.at(p)[static_cast<size_t>(k)];
      }
      if (m > 1) an = an * loc.at(m)[1];
      a.push_back(an);
    }
    return QExpansion<CycElem>(1, "G1(" + std::to_string(K_.D()) + ")", std::move(a),
                               nebentypus());
  }

  DihedralForm dual() const {
    std::vector<long> neg;
    for (long e : chi_.generator_exponents()) neg.push_back(-e);
    return DihedralForm(K_.D(), neg);
  }

 private:
  ImagQuadField K_;
  FormClassGroup G_;
  ClassCharacter chi_;
};

// Push a cyclotomic q-expansion into an unramified completion, coefficient by
// coefficient, carrying the nebentypus along.
inline QExpansion<UnramifiedScalar> embed_expansion(const QExpansion<CycElem>& f,
                                                    const UnramifiedScalar& zeta_image) {
  std::vector<UnramifiedScalar> c;
  c.reserve(static_cast<size_t>(f.truncation()));
  for (long n = 1; n <= f.truncation(); ++n) c.push_back(f.a(n).embed(zeta_image));
  NebentypusPtr<UnramifiedScalar> neb;
  if (f.neben()) {
    auto old_chi = f.neben()->chi;
    UnramifiedScalar zi = zeta_image;
    neb = std::make_shared<const Nebentypus<UnramifiedScalar>>(Nebentypus<UnramifiedScalar>{
        f.neben()->name, [old_chi, zi](long n) { return old_chi(n).embed(zi); }});
  }
  return QExpansion<UnramifiedScalar>(f.weight(), f.level_tag(), std::move(c), neb);
}

// Places v of Q(f) = Q(zeta_m) above p at which a_p is a v-adic unit.
inline std::vector<CyclotomicPlace> ordinary_places(const DihedralForm& f, long p, int M) {
  CycElem ap = f.ap(p);
  std::vector<CyclotomicPlace> out;
  if (ap.is_zero()) return out;
  for (auto& cp : cyclotomic_places(f.chi().ring()->m(), p, M)) {
    if (ap.embed(cp.zeta_image).valuation() == 0) out.push_back(std::move(cp));
  }
  return out;
}

}  // namespace dhecke

#endif
