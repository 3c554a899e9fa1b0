#ifndef DHECKE_STABILIZATION_HPP
#define DHECKE_STABILIZATION_HPP

#include <string>
#include <vector>

#include "dhecke/errors.hpp"
#include "dhecke/matrix.hpp"
#include "dhecke/qexp.hpp"

namespace dhecke {

// A vector in the span of f*_0, ..., f*_n at level index n.
template <class S>
struct OldSpaceVector {
  long n;
  std::vector<S> coords;  // c_0 .. c_n
};

// Trace map from level n+1 down to level n in the f*_i coordinates:
// f*_i -> p f*_i for i <= n, f*_{n+1} -> a_p f*_n - omega_p f*_{n-1}.
template <class S>
Matrix<S> trace_matrix(long n, long p, const S& a_p, const S& omega_p) {
  if (n < 1) throw LevelTooLow("trace map is defined for source level >= 2 (n >= 1)");
  size_t rows = static_cast<size_t>(n) + 1, cols = static_cast<size_t>(n) + 2;
  Matrix<S> tr(rows, cols, a_p.zero());
  S ps = a_p.from_int(p);
  for (size_t i = 0; i < rows; ++i) tr.at(i, i) = ps;
  tr.at(rows - 2, cols - 1) = -omega_p;
  tr.at(rows - 1, cols - 1) = a_p;
  return tr;
}

// Composition Tr_{m,n} of the trace maps from level m down to level n.
template <class S>
Matrix<S> trace_compose(long m, long n, long p, const S& a_p, const S& omega_p) {
  if (n < 1 || m < n) throw BadIndices("trace_compose requires m >= n >= 1");
  Matrix<S> acc = Matrix<S>::identity(static_cast<size_t>(n) + 1, a_p.one());
  for (long k = n; k < m; ++k) acc = acc * trace_matrix(k, p, a_p, omega_p);
  return acc;
}

// Coordinates of the stabilized element at level n: alpha^{1-n} f*_n minus
// alpha^{-n} omega_p f*_{n-1}, with the level-0 convention c = (1).
template <class S>
OldSpaceVector<S> stabilized_vector(long n, const S& alpha, const S& omega_p) {
  if (n < 0) throw BadIndices("stabilized_vector requires n >= 0");
  if (alpha.valuation() != 0) throw NonUnitAlpha("stabilization requires a unit alpha");
  OldSpaceVector<S> v{n, std::vector<S>(static_cast<size_t>(n) + 1, alpha.zero())};
  if (n == 0) {
    v.coords[0] = alpha.one();
    return v;
  }
  S ainv = alpha.inverse();
  v.coords[static_cast<size_t>(n) - 1] = -ainv.pow(n) * omega_p;
  v.coords[static_cast<size_t>(n)] = ainv.pow(n - 1);
  return v;
}

// Minimal valuation across Tr_{n+2k, n}; for non-ordinary a_p this is >= k.
template <class S>
int decay_valuation(long n, int k, long p, const S& a_p, const S& omega_p) {
  if (a_p.valuation() == 0)
    throw OrdinaryInput("decay bound applies only to non-ordinary a_p");
  if (k < 1) throw BadIndices("decay_valuation requires k >= 1");
  return trace_compose(n + 2 * k, n, p, a_p, omega_p).min_valuation();
}

// Realize an old-space vector as a q-expansion: sum_i c_i V_{p^i}(f_star).
template <class S>
QExpansion<S> realize_qexp(const OldSpaceVector<S>& vec, const QExpansion<S>& f_star, long p,
                           long T) {
  if (f_star.truncation() < T)
    throw TruncationTooShort("realize_qexp needs f* out to q^" + std::to_string(T));
  std::string tag = "G01(p^" + std::to_string(vec.n) + "," + f_star.level_tag() + ")";
  QExpansion<S> level = f_star.truncated(T).with_level_tag(tag);
  QExpansion<S> acc = qexp::scale(vec.coords[0], level);
  for (size_t i = 1; i < vec.coords.size(); ++i) {
    level = qexp::V_p(level, p).truncated(T);
    acc = qexp::add(acc, qexp::scale(vec.coords[i], level));
  }
  return acc;
}

// f times the realized stabilized vector; the weight-2 object of the norm maps.
template <class S>
QExpansion<S> weight2_product(const QExpansion<S>& f, const OldSpaceVector<S>& vec,
                              const QExpansion<S>& f_star, long p, long T) {
  QExpansion<S> fs = realize_qexp(vec, f_star, p, T);
  return qexp::mul(f.truncated(std::min(T, f.truncation())).with_level_tag(fs.level_tag()), fs);
}

}  // namespace dhecke

#endif
