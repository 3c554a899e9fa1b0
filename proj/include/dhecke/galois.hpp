#ifndef DHECKE_GALOIS_HPP
#define DHECKE_GALOIS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "dhecke/cyclotomic.hpp"
#include "dhecke/errors.hpp"
#include "dhecke/matrix.hpp"
#include "dhecke/unramified.hpp"

namespace dhecke {

// Finite group given by its multiplication table; element 0 is the identity.
struct FiniteGroup {
  std::vector<std::vector<size_t>> table;

  size_t size() const { return table.size(); }
  size_t mul(size_t a, size_t b) const { return table[a][b]; }
  size_t inv(size_t a) const {
    for (size_t b = 0; b < size(); ++b)
      if (mul(a, b) == 0) return b;
    throw Error("group element has no inverse: bad table");
  }
  void validate() const {
    size_t n = size();
    for (size_t a = 0; a < n; ++a) {
      if (table[a].size() != n) throw Error("group table is not square");
      if (mul(0, a) != a || mul(a, 0) != a) throw Error("element 0 is not the identity");
      for (size_t b = 0; b < n; ++b)
        for (size_t c = 0; c < n; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw Error("group table not associative");
    }
  }
};

using Mat2 = Matrix<CycElem>;

// rho: G -> GL_2 over a cyclotomic coefficient ring.
struct ArtinRep {
  FiniteGroup group;
  std::vector<Mat2> rho;

  void validate() const {
    group.validate();
    if (rho.size() != group.size()) throw Error("one matrix per group element required");
    const CycElem& proto = rho[0].at(0, 0);
    Mat2 I = Mat2::identity(2, proto.one());
    if (rho[0] != I) throw RelationViolation("rho(1) must be the identity");
    for (size_t a = 0; a < group.size(); ++a) {
      for (size_t b = 0; b < group.size(); ++b)
        if (rho[group.mul(a, b)] != rho[a] * rho[b])
          throw RelationViolation("rho is not a homomorphism");
      CycElem det = rho[a].at(0, 0) * rho[a].at(1, 1) - rho[a].at(0, 1) * rho[a].at(1, 0);
      long m = proto.order();
      CycElem d = det;
      bool root = false;
      for (long k = 1; k <= 2 * m; ++k) {
        if (d == proto.one()) {
          root = true;
          break;
        }
        d = d * det;
      }
      if (!root) throw RelationViolation("det rho(sigma) is not a root of unity");
    }
  }

  // x_sigma = 2 rho(sigma) - Tr(rho(sigma)) Id
  Mat2 adjoint_vector(size_t sigma) const {
    const Mat2& r = rho[sigma];
    CycElem tr = r.at(0, 0) + r.at(1, 1);
    CycElem two = r.at(0, 0).from_int(2);
    Mat2 x(2, 2, r.at(0, 0).zero());
    x.at(0, 0) = two * r.at(0, 0) - tr;
    x.at(0, 1) = two * r.at(0, 1);
    x.at(1, 0) = two * r.at(1, 0);
    x.at(1, 1) = two * r.at(1, 1) - tr;
    return x;
  }

  // sigma . x = rho(sigma) x rho(sigma)^{-1}
  Mat2 act(size_t sigma, const Mat2& x) const {
    return rho[sigma] * x * rho[group.inv(sigma)];
  }
};

// The trace-free adjoint module spanned by chosen generators x_{sigma_i}.
struct AdjointModule {
  std::vector<size_t> gens;       // group element indices
  std::vector<Mat2> gen_vectors;  // their adjoint vectors

  static AdjointModule make(const ArtinRep& rep, std::vector<size_t> gens) {
    AdjointModule m;
    m.gens = std::move(gens);
    for (size_t g : m.gens) m.gen_vectors.push_back(rep.adjoint_vector(g));
    return m;
  }

  // Solve x = sum lambda_i x_{sigma_i} over the cyclotomic coefficient field.
  std::vector<CycElem> coordinates(const Mat2& x) const {
    const CycElem proto = gen_vectors[0].at(0, 0).zero();
    size_t k = gens.size();
    // rows: the four matrix entries; columns: generators; last column: x
    std::vector<std::vector<CycElem>> sys(4, std::vector<CycElem>(k + 1, proto));
    for (size_t j = 0; j < k; ++j)
      for (size_t r = 0; r < 2; ++r)
        for (size_t c = 0; c < 2; ++c) sys[2 * r + c][j] = gen_vectors[j].at(r, c);
    for (size_t r = 0; r < 2; ++r)
      for (size_t c = 0; c < 2; ++c) sys[2 * r + c][k] = x.at(r, c);
    std::vector<size_t> pivot_col;
    size_t row = 0;
    for (size_t col = 0; col < k && row < 4; ++col) {
      size_t pr = row;
      while (pr < 4 && sys[pr][col].is_zero()) ++pr;
      if (pr == 4) continue;
      std::swap(sys[row], sys[pr]);
      CycElem inv = sys[row][col].inverse();
      for (size_t j = col; j <= k; ++j) sys[row][j] = inv * sys[row][j];
      for (size_t i = 0; i < 4; ++i) {
        if (i == row || sys[i][col].is_zero()) continue;
        CycElem f = sys[i][col];
        for (size_t j = col; j <= k; ++j) sys[i][j] = sys[i][j] - f * sys[row][j];
      }
      pivot_col.push_back(col);
      ++row;
    }
    for (size_t i = row; i < 4; ++i)
      if (!sys[i][k].is_zero()) throw NotInSpan("vector is outside the generator span");
    std::vector<CycElem> lam(k, proto);
    for (size_t i = 0; i < pivot_col.size(); ++i) lam[pivot_col[i]] = sys[i][k];
    return lam;
  }
};

// E = Q[x]/(g) with units and the Galois action given as polynomials in the
// defining root.
struct NumberFieldData {
  Poly g;                          // monic irreducible over Q
  std::vector<QPoly> units;        // multiplicative generators used by maps
  std::vector<QPoly> unit_invs;    // stated inverses, for validation
  std::vector<QPoly> galois;       // image of the root under each group element
  std::complex<double> arch_root;  // one archimedean root of g

  QPoly gq() const {
    QPoly q(g.size());
    for (size_t i = 0; i < g.size(); ++i) q[i] = mpq(g[i]);
    return q;
  }

  QPoly apply_galois(size_t sigma, const QPoly& elem) const {
    // substitute the Galois image of the root into elem
    QPoly acc;
    const QPoly& im = galois[sigma];
    for (size_t i = elem.size(); i-- > 0;) {
      acc = qpoly::mod(qpoly::add(qpoly::mul(acc, im), QPoly{elem[i]}), gq());
    }
    return acc;
  }

  void validate(const FiniteGroup& group) const {
    if (galois.size() != group.size()) throw Error("one Galois image per group element");
    QPoly gg = gq();
    if (units.size() != unit_invs.size()) throw Error("each unit needs a stated inverse");
    for (size_t i = 0; i < units.size(); ++i) {
      QPoly prod = qpoly::mod(qpoly::mul(units[i], unit_invs[i]), gg);
      if (!(prod.size() == 1 && prod[0] == 1))
        throw RelationViolation("stated unit inverse fails");
    }
    for (size_t s = 0; s < group.size(); ++s) {
      // galois image must be a root of g
      QPoly val = apply_galois(s, QPoly{mpq(0), mpq(1)});
      QPoly gval;
      for (size_t i = gg.size(); i-- > 0;) gval = qpoly::add(qpoly::mul(gval, val), QPoly{gg[i]});
      gval = qpoly::mod(gval, gg);
      if (!gval.empty()) throw RelationViolation("Galois image is not a root of g");
    }
    // action is the right anti/homomorphism: sigma(tau(x)) = (sigma tau)(x)
    for (size_t a = 0; a < group.size(); ++a)
      for (size_t b = 0; b < group.size(); ++b) {
        QPoly lhs = apply_galois(a, galois[b]);
        if (qpoly::sub(lhs, galois[group.mul(a, b)]).empty()) continue;
        throw RelationViolation("Galois action does not match the group table");
      }
  }
};

// Formal product of units of E with rational exponents.
struct UnitTensor {
  std::vector<std::pair<QPoly, mpq>> factors;

  static UnitTensor trivial() { return {}; }

  UnitTensor& append(QPoly u, mpq e) {
    if (e != 0) factors.push_back({std::move(u), std::move(e)});
    return *this;
  }

  UnitTensor combined(const UnitTensor& o, const mpq& scale = mpq(1)) const {
    UnitTensor r = *this;
    for (const auto& [u, e] : o.factors) r.append(u, e * scale);
    return r;
  }

  UnitTensor power(const mpq& m) const {
    UnitTensor r;
    for (const auto& [u, e] : factors) r.append(u, e * m);
    return r;
  }

  UnitTensor inverse_of() const { return power(mpq(-1)); }
};

// Galois-equivariant unit map: images of the module generators.
struct UnitMap {
  std::vector<UnitTensor> images;  // one per AdjointModule generator
};

// Evaluation at an arbitrary span element.
inline UnitTensor evaluate_unit_map(const UnitMap& umap, const Mat2& x,
                                    const AdjointModule& module) {
  if (umap.images.size() != module.gens.size())
    throw Error("unit map needs one image per module generator");
  std::vector<CycElem> lam = module.coordinates(x);
  UnitTensor out;
  for (size_t i = 0; i < lam.size(); ++i) {
    if (lam[i].is_zero()) continue;
    if (!lam[i].is_rational())
      throw Error("irrational evaluation coordinates are not supported");
    out = out.combined(umap.images[i], lam[i].rational_value());
  }
  return out;
}

// Frobenius at the place w: the group element realizing the p-power map.
struct FrobeniusPlace {
  Place place;
  size_t sigma_w;
  Mat2 x_frob;
};

inline UnramifiedScalar embed_field_element(const QPoly& elem, const Place& w) {
  UnramifiedScalar root = w.completion->generator();
  UnramifiedScalar acc = root.zero();
  for (size_t i = elem.size(); i-- > 0;) {
    UnramifiedScalar c =
        divide_by_int(root.from_int(elem[i].get_num()), mpz(elem[i].get_den()));
    acc = acc * root + c;
  }
  return acc;
}

inline FrobeniusPlace detect_frobenius(const ArtinRep& rep, const NumberFieldData& field,
                                       const Place& w) {
  UnramifiedScalar root = w.completion->generator();
  UnramifiedScalar froot = root.frobenius();
  for (size_t s = 0; s < rep.group.size(); ++s) {
    if (embed_field_element(field.galois[s], w) == froot)
      return FrobeniusPlace{w, s, rep.adjoint_vector(s)};
  }
  throw NoFrobeniusMatch("no group element realizes the p-power map at this place");
}

// Reg over (Z/pZ)^x: the tensor (residue, denominator), canonicalized by
// clearing the denominator modulo p - 1 when possible.
struct ModpRegValue {
  long p;
  mpz residue;  // in (Z/pZ)^x
  mpz denom;    // exponent denominator; the value is residue^(1/denom)

  bool is_identity() const { return residue == 1; }
};

inline ModpRegValue reg_modp(const UnitTensor& tensor, const Place& w) {
  long p = w.completion->p();
  mpz den(1);
  for (const auto& [u, e] : tensor.factors) den = lcm(den, mpz(e.get_den()));
  // integer exponents after scaling by den; work in the residue field
  UnramifiedScalar acc = w.completion->from_int(1).with_precision(1);
  for (const auto& [u, e] : tensor.factors) {
    UnramifiedScalar uw = embed_field_element(u, w).with_precision(1);
    if (!uw.is_unit()) throw NotAUnit("tensor factor is not a unit at the place");
    mpz n = mpz(e.get_num()) * (den / e.get_den());
    acc = acc * uw.pow(n);
  }
  PadicScalar r = acc.constant_part();  // NonPrimeFieldResidue when not in F_p
  ModpRegValue out{p, r.residue(), den};
  // canonicalize: take the den-th root when den is invertible mod p-1
  mpz inv;
  if (mpz_invert(inv.get_mpz_t(), out.denom.get_mpz_t(), mpz(p - 1).get_mpz_t()) != 0) {
    mpz pm(p);
    mpz_powm(out.residue.get_mpz_t(), out.residue.get_mpz_t(), inv.get_mpz_t(), pm.get_mpz_t());
    out.denom = 1;
  }
  return out;
}

// Reg over Z_p: sum of lambda_i log iota_w(u_i), asserted Frobenius-fixed.
inline PadicScalar reg_Zp(const UnitTensor& tensor, const Place& w) {
  UnramifiedScalar acc = w.completion->from_int(0);
  bool any = false;
  int out_prec = w.completion->M();
  for (const auto& [u, e] : tensor.factors) {
    UnramifiedScalar uw = embed_field_element(u, w);
    if (!uw.is_unit()) throw NotAUnit("tensor factor is not a unit at the place");
    UnramifiedScalar lg = mul_by_rational(padic_log(uw), e);
    out_prec = std::min(out_prec, lg.precision());
    acc = acc + lg;
    any = true;
  }
  if (!any) return PadicScalar(w.completion->p(), w.completion->M(), 0);
  acc = acc.with_precision(out_prec);
  if (acc.frobenius() != acc)
    throw NonPrimeFieldResidue("regulator value is not Frobenius-fixed");
  return acc.constant_part();
}

// Reg over R: sum of lambda_i log |iota(u_i)| at the supplied embedding.
inline double reg_real(const UnitTensor& tensor, const NumberFieldData& field) {
  double acc = 0.0;
  for (const auto& [u, e] : tensor.factors) {
    std::complex<double> v = 0.0;
    for (size_t i = u.size(); i-- > 0;) v = v * field.arch_root + u[i].get_d();
    acc += e.get_d() * std::log(std::abs(v));
  }
  return acc;
}

// Equivariance and well-definedness of a unit map, verified numerically: the
// difference tensor of u(sigma . x_tau) and sigma(u(x_tau)) must be torsion,
// detected through a vanishing real regulator and a vanishing Z_p regulator
// at an auxiliary unramified prime.
inline void validate_unit_map(const UnitMap& umap, const ArtinRep& rep,
                              const AdjointModule& module, const NumberFieldData& field,
                              long aux_p, int M, double tol = 1e-9) {
  auto places = hensel_factor_places(field.g, aux_p, M);
  for (size_t s = 0; s < rep.group.size(); ++s) {
    for (size_t gi = 0; gi < module.gens.size(); ++gi) {
      UnitTensor lhs = evaluate_unit_map(umap, rep.act(s, module.gen_vectors[gi]), module);
      UnitTensor rhs;
      for (const auto& [u, e] : umap.images[gi].factors)
        rhs.append(field.apply_galois(s, u), e);
      UnitTensor diff = lhs.combined(rhs.inverse_of());
      if (std::abs(reg_real(diff, field)) > tol)
        throw RelationViolation("unit map is not Galois-equivariant (real test)");
      if (!reg_Zp(diff, places[0]).is_zero())
        throw RelationViolation("unit map is not Galois-equivariant (p-adic test)");
    }
  }
}

// Complete fixture: representation, field, module, and an equivariant map.
struct GaloisFixture {
  ArtinRep rep;
  NumberFieldData field;
  AdjointModule module;
  UnitMap umap;
};

}  // namespace dhecke

#include <json.hpp>

namespace dhecke {

inline GaloisFixture load_galois_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open fixture file: " + path);
  nlohmann::json j = nlohmann::json::parse(in);

  auto rat = [](const nlohmann::json& v) {
    mpq r(v.get<std::string>());
    r.canonicalize();
    return r;
  };
  auto qp = [&](const nlohmann::json& arr) {
    QPoly p;
    for (const auto& c : arr) p.push_back(rat(c));
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
  };

  GaloisFixture fx;
  fx.rep.group.table = j["group"]["table"].get<std::vector<std::vector<size_t>>>();

  auto ring = CyclotomicRing::make(j["cyc_m"].get<long>());
  for (const auto& mat : j["rho"]) {
    Mat2 r(2, 2, ring->zero());
    for (size_t i = 0; i < 2; ++i)
      for (size_t k = 0; k < 2; ++k) r.at(i, k) = ring->from_rational(rat(mat[i][k]));
    fx.rep.rho.push_back(std::move(r));
  }
  fx.rep.validate();

  for (const auto& c : j["g"]) fx.field.g.push_back(mpz(c.get<std::string>()));
  for (const auto& arr : j["galois"]) fx.field.galois.push_back(qp(arr));
  for (const auto& arr : j["units"]) fx.field.units.push_back(qp(arr));
  for (const auto& arr : j["unit_invs"]) fx.field.unit_invs.push_back(qp(arr));
  fx.field.arch_root = {j["arch_root"][0].get<double>(), j["arch_root"][1].get<double>()};
  fx.field.validate(fx.rep.group);

  fx.module = AdjointModule::make(fx.rep, j["module_gens"].get<std::vector<size_t>>());

  for (const auto& img : j["umap"]) {
    UnitTensor t;
    for (const auto& fac : img)
      t.append(fx.field.units.at(fac[0].get<size_t>()), rat(fac[1]));
    fx.umap.images.push_back(std::move(t));
  }
  return fx;
}

}  // namespace dhecke

#endif
