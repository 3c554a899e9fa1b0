#ifndef DHECKE_MATRIX_HPP
#define DHECKE_MATRIX_HPP

#include <vector>

#include "dhecke/errors.hpp"
#include "dhecke/padic.hpp"

namespace dhecke {

// Dense matrix over a local-ring scalar type (PadicScalar, UnramifiedScalar).
template <class S>
class Matrix {
 public:
  Matrix(size_t rows, size_t cols, const S& zero)
      : rows_(rows), cols_(cols), e_(rows * cols, zero) {}

  static Matrix identity(size_t n, const S& proto) {
    Matrix m(n, n, proto.zero());
    for (size_t i = 0; i < n; ++i) m.at(i, i) = proto.one();
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  S& at(size_t i, size_t j) { return e_[i * cols_ + j]; }
  const S& at(size_t i, size_t j) const { return e_[i * cols_ + j]; }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.shape_check(b, true);
    Matrix r = a;
    for (size_t k = 0; k < r.e_.size(); ++k) r.e_[k] = r.e_[k] + b.e_[k];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.shape_check(b, true);
    Matrix r = a;
    for (size_t k = 0; k < r.e_.size(); ++k) r.e_[k] = r.e_[k] - b.e_[k];
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix product shape mismatch");
    Matrix r(a.rows_, b.cols_, a.e_[0].zero());
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (size_t j = 0; j < b.cols_; ++j) r.at(i, j) = r.at(i, j) + aik * b.at(k, j);
      }
    return r;
  }
  friend Matrix operator*(const S& c, const Matrix& a) {
    Matrix r = a;
    for (auto& x : r.e_) x = c * x;
    return r;
  }
  Matrix operator-() const {
    Matrix r = *this;
    for (auto& x : r.e_) x = -x;
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    a.shape_check(b, true);
    for (size_t k = 0; k < a.e_.size(); ++k)
      if (a.e_[k] != b.e_[k]) return false;
    return true;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  bool is_zero() const {
    for (const auto& x : e_)
      if (!x.is_zero()) return false;
    return true;
  }

  int min_valuation() const {
    int v = e_.empty() ? 0 : e_[0].precision();
    for (const auto& x : e_) v = std::min(v, x.valuation());
    return v;
  }

  Matrix apply(S (*f)(const S&)) const {
    Matrix r = *this;
    for (auto& x : r.e_) x = f(x);
    return r;
  }

  // Gauss-Jordan inverse over the local ring; pivots must be units.
  Matrix inverse() const {
    if (rows_ != cols_) throw Error("inverse of a non-square matrix");
    size_t n = rows_;
    Matrix a = *this;
    Matrix inv = identity(n, e_[0]);
    for (size_t col = 0; col < n; ++col) {
      size_t piv = col;
      while (piv < n && !a.at(piv, col).is_unit()) ++piv;
      if (piv == n) throw NotAUnit("matrix is not invertible over the local ring");
      if (piv != col) {
        for (size_t j = 0; j < n; ++j) {
          std::swap(a.at(piv, j), a.at(col, j));
          std::swap(inv.at(piv, j), inv.at(col, j));
        }
      }
      S d = a.at(col, col).inverse();
      for (size_t j = 0; j < n; ++j) {
        a.at(col, j) = d * a.at(col, j);
        inv.at(col, j) = d * inv.at(col, j);
      }
      for (size_t i = 0; i < n; ++i) {
        if (i == col || a.at(i, col).is_zero()) continue;
        S f = a.at(i, col);
        for (size_t j = 0; j < n; ++j) {
          a.at(i, j) = a.at(i, j) - f * a.at(col, j);
          inv.at(i, j) = inv.at(i, j) - f * inv.at(col, j);
        }
      }
    }
    return inv;
  }

  Matrix pow(mpz e) const {
    if (rows_ != cols_) throw Error("power of a non-square matrix");
    Matrix r = identity(rows_, e_[0]);
    Matrix b = *this;
    if (e < 0) {
      b = b.inverse();
      e = -e;
    }
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  std::vector<S> mul_vec(const std::vector<S>& v) const {
    if (v.size() != cols_) throw Error("matrix-vector shape mismatch");
    std::vector<S> r(rows_, e_[0].zero());
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) r[i] = r[i] + at(i, j) * v[j];
    return r;
  }

 private:
  void shape_check(const Matrix& o, bool same) const {
    if (same && (rows_ != o.rows_ || cols_ != o.cols_)) throw Error("matrix shape mismatch");
  }

  size_t rows_, cols_;
  std::vector<S> e_;
};

}  // namespace dhecke

#endif
