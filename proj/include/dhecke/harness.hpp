#ifndef DHECKE_HARNESS_HPP
#define DHECKE_HARNESS_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dhecke/dihedral.hpp"
#include "dhecke/errors.hpp"
#include "dhecke/stabilization.hpp"

namespace dhecke {

// Stand-in for the pairing functional on weight-2 expansions: given the level
// exponent n, a weight-2 q-expansion, and a modulus exponent m, produce a
// residue mod p^m. The genuine class is never computed here; the provenance
// label says where values come from.
struct PairingBackend {
  std::string provenance;
  std::function<mpz(int n, const QExpansion<UnramifiedScalar>& w2, int m)> eval;
};

inline PairingBackend zero_backend() {
  return {"mock:zero", [](int, const QExpansion<UnramifiedScalar>&, int) { return mpz(0); }};
}

// The functional "first Fourier coefficient", reduced into Z/p^m.
inline PairingBackend a1_backend() {
  return {"mock:a1", [](int, const QExpansion<UnramifiedScalar>& w2, int m) {
            return w2.a(1).with_precision(m).constant_part().residue();
          }};
}

// Values looked up by level exponent; missing levels are an explicit failure.
inline PairingBackend table_backend(std::map<int, mpz> entries,
                                    std::string provenance = "table") {
  return {std::move(provenance),
          [entries = std::move(entries)](int n, const QExpansion<UnramifiedScalar>&, int m) {
            auto it = entries.find(n);
            if (it == entries.end()) throw BackendFailure(n, "pairing table has no entry");
            (void)m;
            return it->second;
          }};
}

struct NormReport {
  long p = 0;
  int place_degree = 0;
  std::string provenance;
  std::vector<PadicScalar> values;  // value at level n is mod p^n
  bool stabilized = false;
  long first_incompatible = 0;  // smallest n whose value fails to reduce; 0 if none

  const PadicScalar& final_value() const {
    if (!stabilized || values.empty()) throw Error("norm sequence did not stabilize");
    return values.back();
  }
};

// The per-level pairing values of f times the realized stabilized vectors,
// with the coherence of the sequence checked level by level.
inline NormReport norm_Zp(const DihedralForm& f, long p, const CyclotomicPlace& v,
                          const PairingBackend& backend, int n_max, int M, long T = 0) {
  if (n_max < 1) throw BadIndices("norm_Zp requires n_max >= 1");
  if (M < n_max) throw PrecisionTooLow("norm_Zp needs precision at least p^n_max");
  UnramifiedScalar ap = f.ap(p).embed(v.zeta_image);
  if (!ap.is_unit()) throw NonOrdinaryPlace("a_p is not a unit at this place");
  UnramifiedScalar omega = ap.from_int(f.field().kronecker(p));
  UnramifiedScalar alpha = hensel_unit_root(ap, omega * ap.from_int(p));

  if (T == 0) {
    T = 2;
    for (int i = 0; i < n_max - 1; ++i) T *= p;  // covers q^{1 + p^{n-1}}
    T += 2;
  }
  auto femb = embed_expansion(f.theta_expansion(T), v.zeta_image);
  auto fstar = embed_expansion(f.dual().theta_expansion(T), v.zeta_image);

  NormReport rep;
  rep.p = p;
  rep.place_degree = v.place.degree();
  rep.provenance = backend.provenance;
  for (int n = 1; n <= n_max; ++n) {
    auto vec = stabilized_vector(n, alpha, omega);
    auto w2 = weight2_product(femb, vec, fstar, p, T);
    mpz val = backend.eval(n, w2, n);
    rep.values.push_back(PadicScalar(p, n, val));
    if (n >= 2 && rep.first_incompatible == 0 &&
        rep.values.back().with_precision(n - 1) != rep.values[static_cast<size_t>(n) - 2])
      rep.first_incompatible = n;
  }
  rep.stabilized = rep.first_incompatible == 0;
  return rep;
}

// The mod-p norm: the pairing applied to f(z) f*(pz) as a weight-2 expansion
// at level tag G01(p, N); any Gamma-trace is the backend's responsibility.
inline PadicScalar norm_modp(const DihedralForm& f, long p, const CyclotomicPlace& v,
                             const PairingBackend& backend, long T = 24) {
  auto femb = embed_expansion(f.theta_expansion(T), v.zeta_image);
  auto fstar = embed_expansion(f.dual().theta_expansion(T), v.zeta_image);
  auto vpfs = qexp::V_p(fstar, p).truncated(T);
  auto w2 = qexp::mul(femb.with_level_tag(vpfs.level_tag()), vpfs)
                .with_level_tag("G01(p," + std::to_string(f.level()) + ")");
  return PadicScalar(p, 1, backend.eval(1, w2, 1));
}

struct ConjectureReport {
  bool equal = false;
  int t = 0;  // tolerance exponent: comparison is mod p^t
  PadicScalar residual;
};

// Numerical comparison of a norm value against a regulator value mod p^t.
// This reports agreement, never proof.
inline ConjectureReport conjecture_report(const std::optional<PadicScalar>& norm,
                                          const std::optional<PadicScalar>& reg, int t) {
  if (!norm || !reg) throw PrecisionMismatch("both sides of the comparison are required");
  if (norm->precision() < t || reg->precision() < t)
    throw PrecisionMismatch("inputs carry fewer than p^t digits");
  ConjectureReport rep;
  rep.t = t;
  rep.residual = (*norm - *reg).with_precision(t);
  rep.equal = rep.residual.is_zero();
  return rep;
}

}  // namespace dhecke

#endif
