#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dhecke/galois.hpp>

using namespace dhecke;

namespace {

const char* kQuadFixture = "tests/fixtures/quadratic_sqrt2.json";
const char* kS3Fixture = "tests/fixtures/s3_disc23.json";

size_t element_order(const FiniteGroup& g, size_t a) {
  size_t x = a, n = 1;
  while (x != 0) {
    x = g.mul(x, a);
    ++n;
  }
  return n;
}

mpq q(long n, long d = 1) {
  mpq r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("group table validation") {
  FiniteGroup ok{{{0, 1}, {1, 0}}};
  ok.validate();
  CHECK(ok.inv(1) == 1);

  FiniteGroup bad_id{{{1, 0}, {0, 1}}};
  CHECK_THROWS_AS(bad_id.validate(), Error);

  FiniteGroup not_assoc{{{0, 1, 2}, {1, 2, 2}, {2, 0, 1}}};
  CHECK_THROWS_AS(not_assoc.validate(), Error);
}

TEST_CASE("artin rep validation and adjoint vectors") {
  auto fx = load_galois_fixture(kQuadFixture);
  const auto& rep = fx.rep;
  REQUIRE(rep.group.size() == 2);

  // x_1 = 0, x_s = diag(2, -2)
  CHECK(rep.adjoint_vector(0).is_zero());
  Mat2 xs = rep.adjoint_vector(1);
  auto one = xs.at(0, 0).one();
  CHECK(xs.at(0, 0) == one.from_int(2));
  CHECK(xs.at(1, 1) == one.from_int(-2));
  CHECK(xs.at(0, 1).is_zero());

  // conjugation action of the abelian group is trivial
  CHECK(rep.act(1, xs) == xs);

  // breaking the homomorphism property is rejected
  ArtinRep broken = rep;
  broken.rho[1].at(0, 0) = one.from_int(2);
  CHECK_THROWS_AS(broken.validate(), RelationViolation);

  // non-root-of-unity determinant is rejected
  ArtinRep scaled = rep;
  scaled.rho[0] = rep.rho[0] + rep.rho[0];
  scaled.rho[1] = rep.rho[1] + rep.rho[1];
  CHECK_THROWS_AS(scaled.validate(), RelationViolation);
}

TEST_CASE("adjoint module coordinates") {
  auto fx = load_galois_fixture(kQuadFixture);
  Mat2 xs = fx.module.gen_vectors[0];

  auto lam = fx.module.coordinates(xs);
  REQUIRE(lam.size() == 1);
  CHECK(lam[0] == xs.at(0, 0).one());

  auto lam2 = fx.module.coordinates(xs + xs);
  CHECK(lam2[0] == xs.at(0, 0).from_int(2));

  Mat2 off(2, 2, xs.at(0, 0).zero());
  off.at(0, 1) = xs.at(0, 0).one();
  CHECK_THROWS_AS(fx.module.coordinates(off), NotInSpan);
}

TEST_CASE("quadratic fixture: embeddings and pinned regulator values") {
  auto fx = load_galois_fixture(kQuadFixture);
  QPoly u = fx.field.units[0];  // 1 + sqrt(2)

  auto places = hensel_factor_places(fx.field.g, 7, 2);
  REQUIRE(places.size() == 2);
  // roots of 2 mod 49 are 10 and 39; 1 + root gives 11 and 40
  std::vector<mpz> images;
  for (const auto& w : places) {
    auto uw = embed_field_element(u, w);
    images.push_back(uw.constant_part().residue());
  }
  std::sort(images.begin(), images.end());
  CHECK(images[0] == 11);
  CHECK(images[1] == 40);

  UnitTensor t;
  t.append(u, q(1));
  for (const auto& w : places) {
    if (embed_field_element(u, w).constant_part().residue() != 11) continue;
    PadicScalar lg = reg_Zp(t, w);
    CHECK(lg.with_precision(2) == PadicScalar(7, 2, 35));
  }

  // raw per-place residues mod 7 are 4 and 5; the Frobenius-invariant norm
  // tensor gives the same value at both places
  std::vector<mpz> res;
  std::vector<mpz> norm_res;
  UnitTensor tn = t;
  tn.append(fx.field.apply_galois(1, u), q(1));
  for (const auto& w : places) {
    res.push_back(reg_modp(t, w).residue);
    auto r = reg_modp(tn, w);
    CHECK(r.denom == 1);
    norm_res.push_back(r.residue);
  }
  std::sort(res.begin(), res.end());
  CHECK(res[0] == 4);
  CHECK(res[1] == 5);
  CHECK(norm_res[0] == norm_res[1]);
  CHECK(norm_res[0] == 6);  // (1+sqrt2)(1-sqrt2) = -1

  CHECK(reg_real(t, fx.field) == doctest::Approx(0.881373587).epsilon(1e-9));
}

TEST_CASE("quadratic fixture: inert prime and Frobenius detection") {
  auto fx = load_galois_fixture(kQuadFixture);
  QPoly u = fx.field.units[0];
  UnitTensor t;
  t.append(u, q(1));

  // p = 5 is inert: one place of degree 2, Frobenius is the nontrivial element
  auto places5 = hensel_factor_places(fx.field.g, 5, 6);
  REQUIRE(places5.size() == 1);
  CHECK(places5[0].degree() == 2);
  auto fr5 = detect_frobenius(fx.rep, fx.field, places5[0]);
  CHECK(fr5.sigma_w == 1);
  CHECK(fr5.x_frob == fx.rep.adjoint_vector(1));

  // a single conjugate-swapped unit is not Frobenius-stable
  CHECK_THROWS_AS(reg_modp(t, places5[0]), NonPrimeFieldResidue);
  CHECK_THROWS_AS(reg_Zp(t, places5[0]), NonPrimeFieldResidue);

  // its norm is: residue of -1 is 4 mod 5, p-adic log vanishes
  UnitTensor tn = t;
  tn.append(fx.field.apply_galois(1, u), q(1));
  CHECK(reg_modp(tn, places5[0]).residue == 4);
  CHECK(reg_Zp(tn, places5[0]).is_zero());

  // p = 7 splits completely: identity Frobenius, zero adjoint vector
  auto places7 = hensel_factor_places(fx.field.g, 7, 4);
  for (const auto& w : places7) {
    auto fr = detect_frobenius(fx.rep, fx.field, w);
    CHECK(fr.sigma_w == 0);
    CHECK(fr.x_frob.is_zero());
    auto tv = evaluate_unit_map(fx.umap, fr.x_frob, fx.module);
    CHECK(tv.factors.empty());
    CHECK(reg_modp(tv, w).is_identity());
    CHECK(reg_Zp(tv, w).is_zero());
  }

  // a Galois action table missing the true Frobenius has no match
  GaloisFixture fake = fx;
  fake.rep.group.table = {{0}};
  fake.rep.rho.erase(fake.rep.rho.begin() + 1, fake.rep.rho.end());
  fake.field.galois.resize(1);
  CHECK_THROWS_AS(detect_frobenius(fake.rep, fake.field, places5[0]), NoFrobeniusMatch);

  // non-unit tensor factors are rejected
  UnitTensor bad;
  bad.append(QPoly{q(5)}, q(1));
  CHECK_THROWS_AS(reg_Zp(bad, places5[0]), NotAUnit);
}

TEST_CASE("quadratic fixture: log homomorphism and linearity") {
  auto fx = load_galois_fixture(kQuadFixture);
  QPoly u = fx.field.units[0];
  UnitTensor t;
  t.append(u, q(1));

  auto places = hensel_factor_places(fx.field.g, 7, 12);
  for (long m = 1; m <= 10; ++m) {
    PadicScalar base = reg_Zp(t, places[0]);
    PadicScalar lm = reg_Zp(t.power(q(m)), places[0]);
    CHECK(lm == base * PadicScalar(7, base.precision(), m));
    CHECK(base.precision() >= 8);
    CHECK(reg_real(t.power(q(m)), fx.field) ==
          doctest::Approx(m * reg_real(t, fx.field)).epsilon(1e-12));
  }
  // rational exponents too
  CHECK(reg_real(t.power(q(3, 2)), fx.field) ==
        doctest::Approx(1.5 * reg_real(t, fx.field)).epsilon(1e-12));
}

TEST_CASE("s3 fixture: structure and equivariance") {
  auto fx = load_galois_fixture(kS3Fixture);
  REQUIRE(fx.rep.group.size() == 6);

  // S3: three involutions, two 3-cycles
  int ord2 = 0, ord3 = 0;
  for (size_t a = 1; a < 6; ++a) {
    size_t o = element_order(fx.rep.group, a);
    if (o == 2) ++ord2;
    if (o == 3) ++ord3;
  }
  CHECK(ord2 == 3);
  CHECK(ord3 == 2);

  // the shipped unit map is equivariant
  validate_unit_map(fx.umap, fx.rep, fx.module, fx.field, 5, 6);

  // perturbing one image breaks equivariance
  GaloisFixture bad = fx;
  bad.umap.images[0] = bad.umap.images[0].power(q(2));
  CHECK_THROWS_AS(validate_unit_map(bad.umap, bad.rep, bad.module, bad.field, 5, 6),
                  RelationViolation);

  // the torsion relation theta0 theta1 theta2 = 1 has vanishing regulators
  UnitTensor rel;
  for (const auto& u : fx.field.units) rel.append(u, q(1));
  CHECK(std::abs(reg_real(rel, fx.field)) < 1e-12);
  auto places = hensel_factor_places(fx.field.g, 7, 8);
  CHECK(reg_Zp(rel, places[0]).is_zero());
  CHECK(reg_modp(rel, places[0]).is_identity());
}

TEST_CASE("s3 fixture: frobenius pipeline and place independence") {
  auto fx = load_galois_fixture(kS3Fixture);
  int M = 8;
  bool saw_nontrivial = false;
  for (long p : {5L, 7L, 13L, 59L}) {
    CAPTURE(p);
    auto places = hensel_factor_places(fx.field.g, p, M);
    REQUIRE(!places.empty());
    std::vector<ModpRegValue> mp;
    std::vector<PadicScalar> zp;
    double real_ref = 0.0;
    for (const auto& w : places) {
      auto fr = detect_frobenius(fx.rep, fx.field, w);
      // Frobenius order matches the residue degree
      CHECK(element_order(fx.rep.group, fr.sigma_w) ==
            (fr.sigma_w == 0 ? 1 : static_cast<size_t>(w.degree())));
      auto t = evaluate_unit_map(fx.umap, fr.x_frob, fx.module);
      if (!t.factors.empty()) saw_nontrivial = true;
      // clear the 1/6 exponents so the mod-p value has denominator 1
      auto t6 = t.power(q(6));
      mp.push_back(reg_modp(t6, w));
      zp.push_back(reg_Zp(t6, w));
    }
    for (size_t i = 1; i < places.size(); ++i) {
      CHECK(mp[i].residue == mp[0].residue);
      CHECK(mp[i].denom == mp[0].denom);
      CHECK(zp[i] == zp[0]);
    }
    (void)real_ref;
  }
  CHECK(saw_nontrivial);
}

TEST_CASE("s3 fixture: regulator linearity") {
  auto fx = load_galois_fixture(kS3Fixture);
  auto places = hensel_factor_places(fx.field.g, 7, 10);
  auto fr = detect_frobenius(fx.rep, fx.field, places[0]);
  auto t = evaluate_unit_map(fx.umap, fr.x_frob, fx.module).power(q(6));
  REQUIRE(!t.factors.empty());

  PadicScalar base = reg_Zp(t, places[0]);
  double rbase = reg_real(t, fx.field);
  for (long m = 2; m <= 10; ++m) {
    PadicScalar lm = reg_Zp(t.power(q(m)), places[0]);
    CHECK(lm == base * PadicScalar(7, base.precision(), m));
    CHECK(reg_real(t.power(q(m)), fx.field) == doctest::Approx(m * rbase).epsilon(1e-12));
  }
  // additivity of combined tensors
  UnitTensor s = t.power(q(1, 3));
  CHECK(reg_real(t.combined(s), fx.field) ==
        doctest::Approx(rbase + reg_real(s, fx.field)).epsilon(1e-12));
}
