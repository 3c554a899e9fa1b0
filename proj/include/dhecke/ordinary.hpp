#ifndef DHECKE_ORDINARY_HPP
#define DHECKE_ORDINARY_HPP

#include <utility>
#include <vector>

#include "dhecke/errors.hpp"
#include "dhecke/matrix.hpp"

namespace dhecke {

// Commuting pair (T_p, <p>) acting on a free module of finite rank.
template <class S>
struct HeckePair {
  Matrix<S> Tp;
  Matrix<S> diamond;

  HeckePair(Matrix<S> tp, Matrix<S> dia) : Tp(std::move(tp)), diamond(std::move(dia)) {
    if (Tp.rows() != Tp.cols() || diamond.rows() != diamond.cols() ||
        Tp.rows() != diamond.rows())
      throw Error("HeckePair needs square matrices of equal size");
    if (Tp * diamond != diamond * Tp)
      throw RelationViolation("T_p and <p> must commute");
    diamond.inverse();  // throws NotAUnit when <p> is not invertible
  }

  size_t dim() const { return Tp.rows(); }
  const S& proto() const { return Tp.at(0, 0); }

  // skip the invariant checks (for degenerate formal inputs in tests)
  static HeckePair unchecked(Matrix<S> tp, Matrix<S> dia) {
    HeckePair pr;
    pr.Tp = std::move(tp);
    pr.diamond = std::move(dia);
    return pr;
  }

 private:
  HeckePair() : Tp(0, 0, S()), diamond(0, 0, S()) {}
};

// The unit-root idempotent together with the data needed to restrict to its
// image.
template <class S>
struct OrdinaryPart {
  Matrix<S> e;

  long rank() const {
    S t = e.at(0, 0).zero();
    for (size_t i = 0; i < e.rows(); ++i) t = t + e.at(i, i);
    if (t.is_zero()) return 0;
    if constexpr (requires { t.residue(); }) {
      return t.residue().get_si();
    } else {
      return t.constant_part().residue().get_si();
    }
  }

  // Basis of the image of e as columns, with a left inverse for coordinates.
  std::pair<Matrix<S>, Matrix<S>> image_basis() const {
    size_t d = e.rows();
    // unit-pivot column echelon on a working copy to locate basis columns
    Matrix<S> w = e;
    std::vector<size_t> basis_cols;
    size_t row_mark = 0;
    std::vector<bool> used_row(d, false);
    for (size_t j = 0; j < d; ++j) {
      size_t piv = d;
      for (size_t i = 0; i < d; ++i)
        if (!used_row[i] && w.at(i, j).is_unit()) {
          piv = i;
          break;
        }
      if (piv == d) continue;
      used_row[piv] = true;
      basis_cols.push_back(j);
      S inv = w.at(piv, j).inverse();
      for (size_t jj = 0; jj < d; ++jj) {
        if (jj == j) continue;
        S f = inv * w.at(piv, jj);
        if (f.is_zero()) continue;
        for (size_t i = 0; i < d; ++i) w.at(i, jj) = w.at(i, jj) - f * w.at(i, j);
      }
    }
    (void)row_mark;
    size_t r = basis_cols.size();
    Matrix<S> B(d, r, e.at(0, 0).zero());
    for (size_t k = 0; k < r; ++k)
      for (size_t i = 0; i < d; ++i) B.at(i, k) = e.at(i, basis_cols[k]);
    // pick rows making B square invertible (unit-pivot row selection)
    Matrix<S> wb = B;
    std::vector<size_t> rows;
    std::vector<bool> used(d, false);
    for (size_t k = 0; k < r; ++k) {
      size_t piv = d;
      for (size_t i = 0; i < d; ++i)
        if (!used[i] && wb.at(i, k).is_unit()) {
          piv = i;
          break;
        }
      if (piv == d) throw Error("idempotent image has no unit-pivot basis");
      used[piv] = true;
      rows.push_back(piv);
      S inv = wb.at(piv, k).inverse();
      for (size_t kk = 0; kk < r; ++kk) {
        if (kk == k) continue;
        S f = inv * wb.at(piv, kk);
        if (f.is_zero()) continue;
        for (size_t i = 0; i < d; ++i) wb.at(i, kk) = wb.at(i, kk) - f * wb.at(i, k);
      }
    }
    Matrix<S> sq(r, r, e.at(0, 0).zero());
    for (size_t a = 0; a < r; ++a)
      for (size_t b = 0; b < r; ++b) sq.at(a, b) = B.at(rows[a], b);
    Matrix<S> sqinv = sq.inverse();
    Matrix<S> Q(r, d, e.at(0, 0).zero());
    for (size_t a = 0; a < r; ++a)
      for (size_t b = 0; b < r; ++b) Q.at(a, rows[b]) = sqinv.at(a, b);
    return {B, Q};
  }

  // The Hecke pair restricted to the image of e (Q * X * B coordinates).
  HeckePair<S> restrict(const HeckePair<S>& pair) const {
    auto [B, Q] = image_basis();
    return HeckePair<S>(Q * (pair.Tp * B), Q * (pair.diamond * B));
  }
};

// e = lim T_p^{(q-1) p^m}, the projector onto the unit-root subspace.
template <class S>
OrdinaryPart<S> ordinary_projector(const HeckePair<S>& pair, int M) {
  const S& proto = pair.proto();
  mpz q = resfield_size(proto);
  long p = proto.prime();
  Matrix<S> prev = pair.Tp.pow(q - 1);
  int stable = 0;
  for (int m = 0; m <= M + 5; ++m) {
    Matrix<S> next = prev.pow(mpz(p));
    if (next == prev) {
      if (++stable >= 2) {
        Matrix<S> e = next;
        if (e * e != e) throw NoConvergence("projector limit is not idempotent");
        return OrdinaryPart<S>{std::move(e)};
      }
    } else {
      stable = 0;
    }
    prev = std::move(next);
  }
  throw NoConvergence("ordinary projector did not stabilize; raise the precision");
}

// A as the limit of A_0 = T_p, A_n = T_p - <p>p A_{n-1}^{-1}, on a pair whose
// T_p is invertible (i.e. already restricted to the ordinary part).
template <class S>
Matrix<S> operator_A_iterate(const HeckePair<S>& pair, int M) {
  const S& proto = pair.proto();
  Matrix<S> c = proto.from_int(proto.prime()) * pair.diamond;
  Matrix<S> a = pair.Tp;
  for (int it = 0; it <= M + 5; ++it) {
    Matrix<S> ainv = [&] {
      try {
        return a.inverse();
      } catch (const NotAUnit&) {
        throw SingularIterate("iterate became singular: input is not ordinary");
      }
    }();
    Matrix<S> next = pair.Tp - c * ainv;
    if (next == a) return next;
    a = std::move(next);
  }
  throw NoConvergence("operator A iteration did not stabilize");
}

// A = (T_p / 2)(1 + sqrt(1 - 4 <p> p T_p^{-2})) via the matrix binomial
// series; the series coefficients lie in Z[1/2], so p must be odd.
template <class S>
Matrix<S> operator_A_binomial(const HeckePair<S>& pair, int M) {
  const S& proto = pair.proto();
  if (proto.prime() == 2) throw UnsupportedPrime("binomial path is disabled at p = 2");
  Matrix<S> tpinv = [&] {
    try {
      return pair.Tp.inverse();
    } catch (const NotAUnit&) {
      throw SingularIterate("T_p is singular: input is not ordinary");
    }
  }();
  size_t d = pair.dim();
  Matrix<S> I = Matrix<S>::identity(d, proto);
  Matrix<S> Z = -(proto.from_int(4 * proto.prime()) * (pair.diamond * (tpinv * tpinv)));
  int vz = Z.min_valuation();
  if (vz < 1) throw NoConvergence("binomial series argument is not topologically small");
  Matrix<S> acc = I;
  Matrix<S> zn = Z;
  mpq coeff(1);
  for (long n = 1; n * vz < M; ++n) {
    coeff *= mpq(3 - 2 * n, 2 * n);
    Matrix<S> term = zn;
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) term.at(i, j) = mul_by_rational(term.at(i, j), coeff);
    acc = acc + term;
    zn = zn * Z;
  }
  S half = proto.from_int(2).inverse();
  return half * (pair.Tp * (I + acc));
}

// Coefficients (A^{1-n}, -A^{-n} <p> p) of the lifted form at level n.
template <class S>
std::pair<Matrix<S>, Matrix<S>> lift_form_coeffs(long n, const Matrix<S>& A,
                                                 const Matrix<S>& diamond, long p) {
  Matrix<S> ainv = [&] {
    try {
      return A.inverse();
    } catch (const NotAUnit&) {
      throw SingularA("A is not invertible");
    }
  }();
  const S& proto = A.at(0, 0);
  Matrix<S> first = ainv.pow(mpz(n - 1));
  Matrix<S> second = -(proto.from_int(p) * (ainv.pow(mpz(n)) * diamond));
  return {first, second};
}

}  // namespace dhecke

#endif
