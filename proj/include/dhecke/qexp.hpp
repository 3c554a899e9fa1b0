#ifndef DHECKE_QEXP_HPP
#define DHECKE_QEXP_HPP

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dhecke/errors.hpp"
#include "dhecke/padic.hpp"

namespace dhecke {

// Dirichlet character handle used as nebentypus; chi(n) must be 0 whenever n
// shares a factor with the conductor.
template <class Elem>
struct Nebentypus {
  std::string name;
  std::function<Elem(long)> chi;
};

template <class Elem>
using NebentypusPtr = std::shared_ptr<const Nebentypus<Elem>>;

// Truncated q-expansion a_1 q + ... + a_T q^T (cuspidal, a_0 = 0).
// Coefficients beyond T are unknown; operations never invent them.
template <class Elem>
class QExpansion {
 public:
  QExpansion(int weight, std::string level_tag, std::vector<Elem> coeffs,
             NebentypusPtr<Elem> neben = nullptr)
      : weight_(weight),
        level_tag_(std::move(level_tag)),
        a_(std::move(coeffs)),
        neben_(std::move(neben)) {
    if (a_.empty()) throw TruncationTooShort("q-expansion needs at least a_1");
  }

  int weight() const { return weight_; }
  const std::string& level_tag() const { return level_tag_; }
  long truncation() const { return static_cast<long>(a_.size()); }
  const std::vector<Elem>& coeffs() const { return a_; }
  const NebentypusPtr<Elem>& neben() const { return neben_; }

  // a_n, 1 <= n <= T
  const Elem& a(long n) const {
    if (n < 1 || n > truncation())
      throw TruncationTooShort("coefficient a_" + std::to_string(n) +
                               " beyond truncation " + std::to_string(truncation()));
    return a_[static_cast<size_t>(n - 1)];
  }

  QExpansion truncated(long T) const {
    if (T < 1 || T > truncation())
      throw TruncationTooShort("cannot truncate to length " + std::to_string(T));
    return QExpansion(weight_, level_tag_,
                      std::vector<Elem>(a_.begin(), a_.begin() + T), neben_);
  }

  QExpansion with_level_tag(std::string tag) const {
    return QExpansion(weight_, std::move(tag), a_, neben_);
  }

  Elem chi(long n) const {
    if (!neben_) return a_[0].from_int(1);
    return neben_->chi(n);
  }

 private:
  int weight_;
  std::string level_tag_;
  std::vector<Elem> a_;
  NebentypusPtr<Elem> neben_;
};

namespace qexp {

inline std::string join_level(const std::string& a, const std::string& b) {
  if (a == b || b.empty()) return a;
  if (a.empty()) return b;
  if (b.find(a) != std::string::npos) return b;
  if (a.find(b) != std::string::npos) return a;
  return a + "*" + b;
}

template <class Elem>
QExpansion<Elem> add(const QExpansion<Elem>& f, const QExpansion<Elem>& g) {
  if (f.weight() != g.weight()) throw WeightMismatch("adding q-expansions of different weight");
  if (f.level_tag() != g.level_tag()) throw LevelMismatch("adding q-expansions of different level");
  long T = std::min(f.truncation(), g.truncation());
  std::vector<Elem> c;
  c.reserve(static_cast<size_t>(T));
  for (long n = 1; n <= T; ++n) c.push_back(f.a(n) + g.a(n));
  return QExpansion<Elem>(f.weight(), f.level_tag(), std::move(c), f.neben());
}

template <class Elem>
QExpansion<Elem> scale(const Elem& c, const QExpansion<Elem>& f) {
  std::vector<Elem> out;
  out.reserve(static_cast<size_t>(f.truncation()));
  for (long n = 1; n <= f.truncation(); ++n) out.push_back(c * f.a(n));
  return QExpansion<Elem>(f.weight(), f.level_tag(), std::move(out), f.neben());
}

// Cauchy product of two cuspidal expansions: c_n = sum_{i+j=n} a_i b_j with
// i, j >= 1, so c_1 = 0 and all c_n with n <= min(T_f, T_g) are exact.
template <class Elem>
QExpansion<Elem> mul(const QExpansion<Elem>& f, const QExpansion<Elem>& g) {
  long T = std::min(f.truncation(), g.truncation());
  std::vector<Elem> c(static_cast<size_t>(T), f.a(1).zero());
  for (long i = 1; i < T; ++i)
    for (long j = 1; i + j <= T; ++j)
      c[static_cast<size_t>(i + j - 1)] = c[static_cast<size_t>(i + j - 1)] + f.a(i) * g.a(j);
  NebentypusPtr<Elem> neb = f.neben();
  if (f.neben() && g.neben()) {
    auto cf = f.neben()->chi;
    auto cg = g.neben()->chi;
    neb = std::make_shared<const Nebentypus<Elem>>(Nebentypus<Elem>{
        f.neben()->name + "*" + g.neben()->name,
        [cf, cg](long n) { return cf(n) * cg(n); }});
  } else if (g.neben()) {
    neb = g.neben();
  }
  return QExpansion<Elem>(f.weight() + g.weight(),
                          join_level(f.level_tag(), g.level_tag()), std::move(c), neb);
}

// V_p: (V_p f)(q) = f(q^p). Coefficients are known out to p*T + (p-1) since
// indices prime to p vanish identically.
template <class Elem>
QExpansion<Elem> V_p(const QExpansion<Elem>& f, long p) {
  long T_out = p * f.truncation() + (p - 1);
  std::vector<Elem> c(static_cast<size_t>(T_out), f.a(1).zero());
  for (long n = 1; n <= f.truncation(); ++n) c[static_cast<size_t>(n * p - 1)] = f.a(n);
  return QExpansion<Elem>(f.weight(), f.level_tag(), std::move(c), f.neben());
}

// U_p: a_n -> a_{np}. The requested output truncation must be honestly
// available from the input, otherwise TruncationTooShort.
template <class Elem>
QExpansion<Elem> U_p(const QExpansion<Elem>& f, long p, long T_out = 0) {
  if (T_out == 0) T_out = f.truncation() / p;
  if (T_out < 1 || T_out * p > f.truncation())
    throw TruncationTooShort("U_p needs coefficients up to index " + std::to_string(T_out * p));
  std::vector<Elem> c;
  c.reserve(static_cast<size_t>(T_out));
  for (long n = 1; n <= T_out; ++n) c.push_back(f.a(n * p));
  return QExpansion<Elem>(f.weight(), f.level_tag(), std::move(c), f.neben());
}

// T_p = U_p + chi(p) p^{k-1} V_p at a level prime to p.
template <class Elem>
QExpansion<Elem> T_p(const QExpansion<Elem>& f, long p, long T_out = 0) {
  if (T_out == 0) T_out = f.truncation() / p;
  if (T_out < 1 || T_out * p > f.truncation())
    throw TruncationTooShort("T_p needs coefficients up to index " + std::to_string(T_out * p));
  Elem cp = f.chi(p) * f.a(1).from_int(prime_power(p, f.weight() - 1));
  std::vector<Elem> c;
  c.reserve(static_cast<size_t>(T_out));
  for (long n = 1; n <= T_out; ++n) {
    Elem v = f.a(n * p);
    if (n % p == 0) v = v + cp * f.a(n / p);
    c.push_back(v);
  }
  return QExpansion<Elem>(f.weight(), f.level_tag(), std::move(c), f.neben());
}

template <class Elem>
struct EigenReport {
  bool pass = true;
  long first_fail = 0;  // index of the first failing coefficient, 0 if none
  long checked = 0;
};

// Does T_p f = lambda f hold as far as the truncation allows?
template <class Elem>
EigenReport<Elem> is_eigen(const QExpansion<Elem>& f, long p, const Elem& lambda,
                           long T_check = 0) {
  QExpansion<Elem> tf = T_p(f, p, T_check);
  EigenReport<Elem> rep;
  rep.checked = tf.truncation();
  for (long n = 1; n <= tf.truncation(); ++n) {
    if (!(tf.a(n) - lambda * f.a(n)).is_zero()) {
      rep.pass = false;
      rep.first_fail = n;
      return rep;
    }
  }
  return rep;
}

}  // namespace qexp

}  // namespace dhecke

#endif
