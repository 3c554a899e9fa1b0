#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dhecke/dihedral.hpp>

using namespace dhecke;

namespace {

// Independent oracle: a_n as a lattice point count. Each reduced form F
// represents n exactly twice per ideal of norm n in its class (the two units),
// so a_n = (1/2) sum_F chi(F) #{(x,y) : F(x,y) = n}.
long representations(const BQForm& f, long n, long D) {
  long count = 0;
  long ybound = static_cast<long>(std::sqrt(4.0 * f.a.get_d() * n / D)) + 2;
  long xbound = static_cast<long>(std::sqrt(4.0 * f.c.get_d() * n / D)) + 2;
  for (long x = -xbound; x <= xbound; ++x)
    for (long y = -ybound; y <= ybound; ++y)
      if (f.a * x * x + f.b * x * y + f.c * y * y == n) ++count;
  return count;
}

CycElem theta_oracle(const FormClassGroup& G, const ClassCharacter& chi, long n) {
  CycElem acc = chi.ring()->zero();
  for (size_t i = 0; i < G.size(); ++i) {
    long r = representations(G.forms()[i], n, G.D());
    CHECK(r % 2 == 0);
    acc = acc + chi(i) * chi.ring()->from_int(r / 2);
  }
  return acc;
}

}  // namespace

TEST_CASE("class group enumeration") {
  FormClassGroup g23 = class_group(23);
  CHECK(g23.size() == 3);
  CHECK(g23.exponent() == 3);
  CHECK(g23.forms() == std::vector<BQForm>{{1, 1, 6}, {2, -1, 3}, {2, 1, 3}});

  FormClassGroup g4 = class_group(4);
  CHECK(g4.size() == 1);
  CHECK(g4.forms() == std::vector<BQForm>{{1, 0, 1}});

  FormClassGroup g20 = class_group(20);
  CHECK(g20.size() == 2);
  CHECK(g20.forms() == std::vector<BQForm>{{1, 0, 5}, {2, 2, 3}});

  CHECK_THROWS_AS(class_group(12), NotFundamental);
  CHECK_THROWS_AS(class_group(25), NotFundamental);
  CHECK_THROWS_AS(class_group(1), NotFundamental);
  CHECK_THROWS_AS(class_group(2), NotFundamental);
}

TEST_CASE("class group laws") {
  for (long D : {7L, 20L, 23L, 31L, 47L, 59L, 71L, 84L, 260L}) {
    FormClassGroup G = class_group(D);
    size_t h = G.size();
    size_t e = G.identity();
    for (size_t i = 0; i < h; ++i) {
      CHECK(G.compose(e, i) == i);
      CHECK(G.compose(i, G.inverse(i)) == e);
      CHECK(G.order_of(i) >= 1);
      CHECK(G.exponent() % G.order_of(i) == 0);
      for (size_t j = 0; j < h; ++j) {
        CHECK(G.compose(i, j) == G.compose(j, i));
        for (size_t k = 0; k < h; ++k)
          CHECK(G.compose(G.compose(i, j), k) == G.compose(i, G.compose(j, k)));
      }
    }
    // generators actually generate: BFS span must cover the group
    ClassCharacter triv(G, std::vector<long>(G.generators().size(), 0));
    CHECK(triv.is_trivial());
  }
  CHECK(class_group(71).size() == 7);
  CHECK(class_group(47).size() == 5);
  CHECK(class_group(260).size() == 8);
}

TEST_CASE("class characters") {
  FormClassGroup G = class_group(23);
  ClassCharacter chi(G, {1});
  CHECK(chi(G.identity()) == chi.ring()->one());
  for (size_t i = 0; i < G.size(); ++i) {
    CHECK(chi(i).pow(G.order_of(i)) == chi.ring()->one());
    for (size_t j = 0; j < G.size(); ++j) CHECK(chi(G.compose(i, j)) == chi(i) * chi(j));
  }
  CHECK(!chi.is_trivial());
  CHECK_THROWS_AS(ClassCharacter(G, {1, 2}), BadCharacter);

  // in a group of exponent 4 with an order-2 generator, giving that generator
  // a primitive 4th root of unity is not a character
  FormClassGroup G260 = class_group(260);
  REQUIRE(G260.generators().size() == 2);
  REQUIRE(G260.exponent() == 4);
  std::vector<long> bad(2, 0);
  size_t which = G260.generator_orders()[0] == 2 ? 0 : 1;
  REQUIRE(G260.generator_orders()[which] == 2);
  bad[which] = 1;
  CHECK_THROWS_AS(ClassCharacter(G260, bad), BadCharacter);
  bad[which] = 2;
  CHECK_NOTHROW(ClassCharacter(G260, bad));
}

TEST_CASE("hecke eigenvalues a_p") {
  DihedralForm f(23, {1});
  auto R = f.chi().ring();
  CHECK(f.ap(5) == R->zero());                       // inert
  CHECK(f.ap(2) == R->from_int(-1));                 // zeta3 + zeta3^2
  CHECK(f.ap(3) == R->from_int(-1));                 // 3 also splits into non-principal
  CHECK(f.ap(23) == R->one());                       // ramified class is principal (h odd)

  DihedralForm ftriv(23, {0});
  for (long p : {2L, 3L, 13L, 29L, 31L, 41L, 47L, 59L}) {
    if (ftriv.field().kronecker(p) == 1) CHECK(ftriv.ap(p) == R->from_int(2));
  }

  // a_p(chi) + a_p(chibar) is fixed by conjugation
  DihedralForm fbar = f.dual();
  for (long p = 2; p <= 60; ++p) {
    bool prime = p >= 2;
    for (long d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (!prime) continue;
    CycElem s = f.ap(p) + fbar.ap(p);
    CHECK(s.conj() == s);
    CHECK(fbar.ap(p) == f.ap(p).conj());
  }
}

TEST_CASE("theta expansion against the lattice oracle") {
  // nontrivial and trivial characters on several class number 3 fields
  for (long D : {23L, 31L, 59L}) {
    FormClassGroup G = class_group(D);
    REQUIRE(G.size() == 3);
    for (long e : {0L, 1L}) {
      DihedralForm f(D, {e});
      auto exp = f.theta_expansion(200);
      for (long n = 1; n <= 200; ++n) {
        CycElem want = theta_oracle(G, f.chi(), n);
        CHECK(exp.a(n) == want);
        CHECK(exp.a(n).conj() == exp.a(n));  // dihedral coefficients are real
      }
    }
  }
  // a two-generator example as well: give each generator a primitive image
  FormClassGroup G260 = class_group(260);
  std::vector<long> es;
  for (long o : G260.generator_orders()) es.push_back(G260.exponent() / o);
  DihedralForm f260(260, es);
  auto exp260 = f260.theta_expansion(120);
  for (long n = 1; n <= 120; ++n) CHECK(exp260.a(n) == theta_oracle(G260, f260.chi(), n));
}

TEST_CASE("spec-level theta values") {
  DihedralForm f(23, {1});
  auto R = f.chi().ring();
  auto exp = f.theta_expansion(8);
  // q - q^2 - q^3 + q^6 + q^8
  std::vector<long> want{1, -1, -1, 0, 0, 1, 0, 1};
  for (long n = 1; n <= 8; ++n) CHECK(exp.a(n) == R->from_int(want[static_cast<size_t>(n - 1)]));

  // trivial character: a_n counts all ideals of norm n; both 2 and 3 split,
  // so a_2 = a_3 = 2 and a_4 = 3 (p^2, pbar^2, p pbar) -- this is what the
  // lattice oracle gives and what the Hecke recursion a_4 = a_2^2 - chi(2)
  // forces
  DihedralForm ft(23, {0});
  auto expt = ft.theta_expansion(4);
  std::vector<long> wantt{1, 2, 2, 3};
  for (long n = 1; n <= 4; ++n) CHECK(expt.a(n) == R->from_int(wantt[static_cast<size_t>(n - 1)]));

  // a_1 = 1 always
  for (long D : {20L, 23L, 84L}) {
    DihedralForm g(D, std::vector<long>(class_group(D).generators().size(), 0));
    CHECK(g.theta_expansion(1).a(1) == g.chi().ring()->one());
  }
}

TEST_CASE("multiplicativity of coefficients") {
  DihedralForm f(23, {1});
  long T = 5000;
  auto exp = f.theta_expansion(T);
  for (long m = 2; m <= 100; ++m)
    for (long n = m + 1; n <= 100; ++n) {
      if (std::gcd(m, n) != 1 || m * n > T) continue;
      CHECK(exp.a(m * n) == exp.a(m) * exp.a(n));
    }
}

TEST_CASE("eigenform property") {
  DihedralForm f(23, {1});
  auto exp = f.theta_expansion(200);
  for (long p = 2; p <= 50; ++p) {
    bool prime = true;
    for (long d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (!prime || 23 % p == 0) continue;
    auto rep = qexp::is_eigen(exp, p, f.ap(p));
    CHECK(rep.pass);
  }
  // spec-pinned instances
  CHECK(qexp::is_eigen(exp, 2, f.chi().ring()->from_int(-1)).pass);
  CHECK(qexp::is_eigen(exp, 5, f.chi().ring()->zero()).pass);
  // T_5(f) = 0 termwise since a_5 = 0 and chi_{-23}(5) = -1 kills nothing:
  // the eigen identity with lambda = 0 is the full check above
}

TEST_CASE("duality") {
  DihedralForm f(23, {1});
  DihedralForm fb = f.dual();
  auto e1 = f.theta_expansion(60);
  auto e2 = fb.dual().theta_expansion(60);
  for (long n = 1; n <= 60; ++n) CHECK(e1.a(n) == e2.a(n));
  CHECK(fb.ap(2) == f.chi().ring()->from_int(-1));

  DihedralForm ft(23, {0});
  auto t1 = ft.theta_expansion(30);
  auto t2 = ft.dual().theta_expansion(30);
  for (long n = 1; n <= 30; ++n) CHECK(t1.a(n) == t2.a(n));
}

TEST_CASE("ordinary places") {
  DihedralForm f(23, {1});
  // p = 2: a_2 = -1 is a unit at the single (inert) place of Q(zeta_3)
  auto pl2 = ordinary_places(f, 2, 8);
  REQUIRE(pl2.size() == 1);
  CHECK(pl2[0].place.degree() == 2);

  // p = 5: a_5 = 0, nothing is ordinary
  CHECK(ordinary_places(f, 5, 8).empty());

  // p = 7 splits Phi_3 (7 = 1 mod 3): both places, a_7 a root of unity times
  // unit sum; check each reported place really sees a unit
  for (long p : {7L, 13L, 29L, 31L}) {
    auto pls = ordinary_places(f, p, 6);
    for (const auto& cp : pls) CHECK(f.ap(p).embed(cp.zeta_image).valuation() == 0);
    if (!f.ap(p).is_zero()) CHECK(!pls.empty());
  }

  // excluded small discriminants
  CHECK_THROWS_AS(DihedralForm(3, {0}), BadCharacter);
  CHECK_THROWS_AS(DihedralForm(4, {0}), BadCharacter);
}
