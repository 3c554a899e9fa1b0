#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dhecke/ordinary.hpp>
#include <dhecke/stabilization.hpp>

using namespace dhecke;

namespace {

unsigned long rng_state = 0x9e3779b97f4a7c15ULL;
unsigned long next_rand() {
  rng_state ^= rng_state << 13;
  rng_state ^= rng_state >> 7;
  rng_state ^= rng_state << 17;
  return rng_state;
}

PadicScalar ps(long p, int M, long r) { return PadicScalar(p, M, mpz(r)); }
using Mat = Matrix<PadicScalar>;

Mat random_matrix(long p, int M, size_t d, long mod) {
  Mat m(d, d, ps(p, M, 0));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) m.at(i, j) = ps(p, M, static_cast<long>(next_rand() % mod));
  return m;
}

// commuting ordinary pair: unit scalars plus p * (polynomials in one matrix)
HeckePair<PadicScalar> random_ordinary_pair(long p, int M, size_t d) {
  Mat X = random_matrix(p, M, d, 1000);
  auto poly_in_x = [&](long unit) {
    Mat acc = ps(p, M, unit) * Mat::identity(d, ps(p, M, 1));
    Mat xp = Mat::identity(d, ps(p, M, 1));
    for (int k = 0; k < 3; ++k) {
      xp = xp * X;
      acc = acc + ps(p, M, p * static_cast<long>(next_rand() % 50)) * xp;
    }
    return acc;
  };
  long u = 1 + static_cast<long>(next_rand() % static_cast<unsigned long>(p - 1));
  long w = 1 + static_cast<long>(next_rand() % static_cast<unsigned long>(p - 1));
  return HeckePair<PadicScalar>(poly_in_x(u), poly_in_x(w));
}

Mat diag(long p, int M, const std::vector<long>& es) {
  Mat m(es.size(), es.size(), ps(p, M, 0));
  for (size_t i = 0; i < es.size(); ++i) m.at(i, i) = ps(p, M, es[i]);
  return m;
}

}  // namespace

TEST_CASE("hecke pair validation") {
  long p = 5;
  int M = 8;
  Mat I = Mat::identity(3, ps(p, M, 1));
  CHECK_NOTHROW(HeckePair<PadicScalar>(diag(p, M, {1, 2, 3}), diag(p, M, {1, 1, 2})));
  // non-commuting
  Mat a(2, 2, ps(p, M, 0)), b(2, 2, ps(p, M, 0));
  a.at(0, 0) = ps(p, M, 1);
  a.at(0, 1) = ps(p, M, 1);
  a.at(1, 1) = ps(p, M, 1);
  b.at(0, 0) = ps(p, M, 1);
  b.at(1, 0) = ps(p, M, 1);
  b.at(1, 1) = ps(p, M, 1);
  CHECK_THROWS_AS(HeckePair<PadicScalar>(a, b), RelationViolation);
  // singular diamond
  CHECK_THROWS_AS(HeckePair<PadicScalar>(diag(p, M, {1, 1}), diag(p, M, {1, 5})), NotAUnit);
}

TEST_CASE("ordinary projector") {
  long p = 5;
  int M = 10;
  // identity -> identity
  {
    HeckePair<PadicScalar> pr(Mat::identity(3, ps(p, M, 1)), Mat::identity(3, ps(p, M, 1)));
    auto e = ordinary_projector(pr, M);
    CHECK(e.e == Mat::identity(3, ps(p, M, 1)));
    CHECK(e.rank() == 3);
  }
  // diag(u, p) -> diag(1, 0)
  {
    HeckePair<PadicScalar> pr(diag(p, M, {3, p}), Mat::identity(2, ps(p, M, 1)));
    auto e = ordinary_projector(pr, M);
    CHECK(e.e == diag(p, M, {1, 0}));
    CHECK(e.rank() == 1);
  }
  // p * anything -> 0
  {
    Mat X = ps(p, M, p) * random_matrix(p, M, 3, 50);
    HeckePair<PadicScalar> pr(X, Mat::identity(3, ps(p, M, 1)));
    auto e = ordinary_projector(pr, M);
    CHECK(e.e.is_zero());
    CHECK(e.rank() == 0);
  }
  // diagonal fixtures up to dim 6: idempotent, commuting, rank = unit count
  for (long pp : {5L, 7L}) {
    std::vector<long> entries{2, pp, 3, 2 * pp, 1, 4};
    for (size_t d = 1; d <= 6; ++d) {
      std::vector<long> es(entries.begin(), entries.begin() + d);
      std::vector<long> ds(d, 1);
      HeckePair<PadicScalar> pr(diag(pp, 10, es), diag(pp, 10, ds));
      auto op = ordinary_projector(pr, 10);
      CHECK(op.e * op.e == op.e);
      CHECK(op.e * pr.Tp == pr.Tp * op.e);
      CHECK(op.e * pr.diamond == pr.diamond * op.e);
      long units = 0;
      for (long v : es)
        if (v % pp != 0) ++units;
      CHECK(op.rank() == units);
    }
  }
}

TEST_CASE("projector on random commuting pairs") {
  int M = 10;
  for (long p : {5L, 7L, 11L}) {
    for (int trial = 0; trial < 100; ++trial) {
      auto pr = random_ordinary_pair(p, M, 3);
      auto op = ordinary_projector(pr, M);
      CHECK(op.e * op.e == op.e);
      CHECK(op.e * pr.Tp == pr.Tp * op.e);
      CHECK(op.e * pr.diamond == pr.diamond * op.e);
      CHECK(op.rank() == 3);  // unit + p*(...) is invertible, fully ordinary
    }
  }
}

TEST_CASE("restriction to the image of e") {
  long p = 7;
  int M = 10;
  // block diagonal: ordinary part diag(2, 3), non-ordinary diag(p)
  HeckePair<PadicScalar> pr(diag(p, M, {2, p, 3}), diag(p, M, {1, 1, 2}));
  auto op = ordinary_projector(pr, M);
  CHECK(op.rank() == 2);
  auto rp = op.restrict(pr);
  CHECK(rp.dim() == 2);
  // restricted Tp is invertible and has the unit eigenvalues
  CHECK_NOTHROW(rp.Tp.inverse());
  // A on the restriction satisfies the quadratic
  Mat A = operator_A_iterate(rp, M);
  Mat resid = A * A - rp.Tp * A + ps(p, M, p) * rp.diamond;
  CHECK(resid.is_zero());
}

TEST_CASE("operator A scalar cases") {
  int M = 12;
  // d=1: A = hensel unit root of X^2 - a_p X + w p
  for (long p : {5L, 7L, 13L}) {
    for (long ap : {1L, 2L, 3L}) {
      for (long w : {1L, -1L, 2L}) {
        Mat tp(1, 1, ps(p, M, ap)), dm(1, 1, ps(p, M, w));
        HeckePair<PadicScalar> pr(tp, dm);
        Mat A = operator_A_iterate(pr, M);
        PadicScalar root = hensel_unit_root(ps(p, M, ap), ps(p, M, w * p));
        CHECK(A.at(0, 0) == root);
        Mat B = operator_A_binomial(pr, M);
        CHECK((A - B).min_valuation() >= M - 2);
      }
    }
  }
  // the pinned value: p=5, a_p=1, w=1 at M=2 gives 21 mod 25
  {
    Mat tp(1, 1, ps(5, 12, 1)), dm(1, 1, ps(5, 12, 1));
    HeckePair<PadicScalar> pr(tp, dm);
    Mat A = operator_A_iterate(pr, 12);
    CHECK(A.at(0, 0).with_precision(2) == ps(5, 2, 21));
    Mat B = operator_A_binomial(pr, 12);
    CHECK(B.at(0, 0).with_precision(2) == ps(5, 2, 21));
  }
  // Tp = u I, diamond = I: A = alpha(u) I
  {
    long p = 7, u = 3;
    Mat tp = ps(p, M, u) * Mat::identity(4, ps(p, M, 1));
    HeckePair<PadicScalar> pr(tp, Mat::identity(4, ps(p, M, 1)));
    Mat A = operator_A_iterate(pr, M);
    PadicScalar root = hensel_unit_root(ps(p, M, u), ps(p, M, p));
    CHECK(A == root * Mat::identity(4, ps(p, M, 1)));
  }
}

TEST_CASE("operator A on random pairs") {
  int M = 12;
  for (long p : {5L, 7L, 11L}) {
    for (int trial = 0; trial < 100; ++trial) {
      auto pr = random_ordinary_pair(p, M, 4);
      Mat A = operator_A_iterate(pr, M);
      // quadratic mod p^12
      Mat resid = A * A - pr.Tp * A + ps(p, M, p) * pr.diamond;
      CHECK(resid.is_zero());
      // A = Tp mod p, commutes with both
      CHECK((A - pr.Tp).min_valuation() >= 1);
      CHECK(A * pr.Tp == pr.Tp * A);
      CHECK(A * pr.diamond == pr.diamond * A);
      // agreement of the two paths mod p^10
      Mat B = operator_A_binomial(pr, M);
      CHECK((A - B).min_valuation() >= 10);
    }
  }
}

TEST_CASE("iteration contraction and uniqueness") {
  long p = 7;
  int M = 12;
  auto pr = random_ordinary_pair(p, M, 3);
  // contraction: consecutive differences gain at least one digit
  Mat c = ps(p, M, p) * pr.diamond;
  Mat a_prev = pr.Tp;
  Mat a_cur = pr.Tp - c * a_prev.inverse();
  int last = (a_cur - a_prev).min_valuation();
  for (int it = 0; it < 8 && last < M; ++it) {
    Mat a_next = pr.Tp - c * a_cur.inverse();
    int v = (a_next - a_cur).min_valuation();
    CHECK(v >= std::min(M, last + 1));
    a_prev = a_cur;
    a_cur = a_next;
    last = v;
  }
  // uniqueness: perturbing A by p^k noise breaks the quadratic for k < M
  Mat A = operator_A_iterate(pr, M);
  for (int k = 1; k < M; k += 3) {
    Mat pk(3, 3, ps(p, M, 0));
    for (size_t i = 0; i < 3; ++i) pk.at(i, i) = PadicScalar(p, M, prime_power(p, k));
    Mat Ap = A + pk;
    Mat resid = Ap * Ap - pr.Tp * Ap + ps(p, M, p) * pr.diamond;
    CHECK(!resid.is_zero());
  }
}

TEST_CASE("operator A error paths") {
  long p = 5;
  int M = 10;
  // singular Tp on the claimed ordinary part
  auto pr = HeckePair<PadicScalar>::unchecked(diag(p, M, {p, p}), diag(p, M, {1, 1}));
  CHECK_THROWS_AS(operator_A_iterate(pr, M), SingularIterate);
  CHECK_THROWS_AS(operator_A_binomial(pr, M), SingularIterate);

  // p = 2 binomial path is disabled
  auto pr2 = HeckePair<PadicScalar>(diag(2, M, {1}), diag(2, M, {1}));
  CHECK_THROWS_AS(operator_A_binomial(pr2, M), UnsupportedPrime);
  CHECK_NOTHROW(operator_A_iterate(pr2, M));

  // formally zero <p>p: A = Tp
  auto przero = HeckePair<PadicScalar>::unchecked(diag(p, M, {2, 3}), diag(p, M, {0, 0}));
  Mat A = operator_A_binomial(przero, M);
  CHECK(A == przero.Tp);
  CHECK(operator_A_iterate(przero, M) == przero.Tp);
}

TEST_CASE("lifted form coefficients") {
  long p = 7;
  int M = 10;
  auto pr = random_ordinary_pair(p, M, 3);
  Mat A = operator_A_iterate(pr, M);
  Mat I = Mat::identity(3, ps(p, M, 1));
  Mat pdm = ps(p, M, p) * pr.diamond;

  auto [c1, c2] = lift_form_coeffs(1, A, pr.diamond, p);
  CHECK(c1 == I);
  CHECK(c2 == -(A.inverse() * pdm));

  // scalar case matches the alpha stabilization shape with omega = <p>p
  {
    Mat tp(1, 1, ps(p, M, 3)), dm(1, 1, ps(p, M, 2));
    HeckePair<PadicScalar> spr(tp, dm);
    Mat sA = operator_A_iterate(spr, M);
    auto vec = stabilized_vector(4, sA.at(0, 0), ps(p, M, 2 * p));
    auto [s1, s2] = lift_form_coeffs(4, sA, spr.diamond, p);
    CHECK(s1.at(0, 0) == vec.coords[4]);
    CHECK(s2.at(0, 0) == vec.coords[3]);
  }

  // transition compatibility for n <= 6: the level n+1 coefficients map to the
  // level n ones under (f_i -> f_i, f_{n+1} -> Tp f_n - <p>p f_{n-1})
  for (long n = 1; n <= 6; ++n) {
    auto [an1, bn1] = lift_form_coeffs(n + 1, A, pr.diamond, p);  // (A^-n, -A^-(n+1)<p>p)
    auto [an, bn] = lift_form_coeffs(n, A, pr.diamond, p);
    // f_{n-1} component: -<p>p * A^{-n} = bn
    CHECK(-(pdm * an1) == bn);
    // f_n component: bn1 + Tp * an1 = an
    CHECK(bn1 + pr.Tp * an1 == an);
  }

  CHECK_THROWS_AS(lift_form_coeffs(2, ps(p, M, p) * I, pr.diamond, p), SingularA);
}
