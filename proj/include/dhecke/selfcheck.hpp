#ifndef DHECKE_SELFCHECK_HPP
#define DHECKE_SELFCHECK_HPP

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "dhecke/galois.hpp"
#include "dhecke/harness.hpp"
#include "dhecke/ordinary.hpp"

namespace dhecke {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace selfcheck {

struct Ctx {
  bool ok = true;
  std::string why;

  void require(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      why = msg;
    }
  }
};

inline unsigned long rng_step(unsigned long& s) {
  s ^= s << 13;
  s ^= s >> 7;
  s ^= s << 17;
  return s;
}

template <class F>
CheckResult timed(const std::string& name, double limit_s, F body) {
  CheckResult r{name, false, ""};
  auto t0 = std::chrono::steady_clock::now();
  Ctx c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(dt < limit_s, "runtime limit exceeded");
  r.pass = c.ok;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2fs", dt);
  r.detail = c.ok ? std::string(buf) : c.why + " [" + buf + "]";
  return r;
}

// 1: alpha for (5, 1, 1) is 21 mod 25 (exhaustive oracle) and the quadratic
// vanishes at 5^20
inline CheckResult check_hensel() {
  return timed("hensel-stabilization-identity", 1.0, [](Ctx& c) {
    PadicScalar ap(5, 20, 1), w(5, 20, 1);
    PadicScalar alpha = hensel_unit_root(ap, w * PadicScalar(5, 20, 5));
    c.require(alpha.with_precision(2) == PadicScalar(5, 2, 21), "alpha != 21 mod 25");
    c.require((alpha * alpha - ap * alpha + PadicScalar(5, 20, 5)).is_zero(),
              "quadratic nonzero mod 5^20");
    long found = -1;
    for (long r = 0; r < 25; ++r)
      if (r % 5 != 0 && (r * r - r + 5) % 25 == 0) found = r;
    c.require(found == 21, "exhaustive search disagrees");
  });
}

namespace detail {

inline long representations(const BQForm& f, long n, long D) {
  long count = 0;
  long yb = static_cast<long>(std::sqrt(4.0 * f.a.get_d() * n / D)) + 2;
  long xb = static_cast<long>(std::sqrt(4.0 * f.c.get_d() * n / D)) + 2;
  for (long x = -xb; x <= xb; ++x)
    for (long y = -yb; y <= yb; ++y)
      if (f.a * x * x + f.b * x * y + f.c * y * y == n) ++count;
  return count;
}

}  // namespace detail

// 2: class number, a_p against the lattice oracle, pinned values, and the
// eigen identity on long truncations
inline CheckResult check_dihedral() {
  return timed("dihedral-correctness", 10.0, [](Ctx& c) {
    DihedralForm f(23, {1});
    const auto& G = f.group();
    c.require(G.size() == 3, "h(-23) != 3");
    c.require(f.ap(5).is_zero(), "a_5 != 0");
    c.require(f.ap(2) == f.ap(2).from_int(-1), "a_2 != -1");
    for (long p = 2; p <= 100; ++p) {
      bool prime = p > 1;
      for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) prime = false;
      if (!prime) continue;
      CycElem oracle = f.chi().ring()->zero();
      for (size_t i = 0; i < G.size(); ++i) {
        long r = detail::representations(G.forms()[i], p, 23);
        oracle = oracle + f.chi()(i) * f.chi().ring()->from_int(r / 2);
      }
      c.require(f.ap(p) == oracle, "a_" + std::to_string(p) + " disagrees with the oracle");
    }
    auto theta = f.theta_expansion(500);
    for (long p : {2L, 3L, 13L}) {
      auto rep = qexp::is_eigen(theta, p, f.ap(p));
      c.require(rep.pass, "eigen identity fails at p=" + std::to_string(p));
    }
  });
}

struct OrdTriple {
  long p;
  UnramifiedScalar ap, omega, alpha;
};

inline std::vector<OrdTriple> ordinary_triples(int M) {
  std::vector<OrdTriple> out;
  DihedralForm f23(23, {1});
  auto pls = ordinary_places(f23, 2, M);
  UnramifiedScalar a2 = f23.ap(2).embed(pls[0].zeta_image);
  UnramifiedScalar w2 = a2.from_int(f23.field().kronecker(2));
  out.push_back({2, a2, w2, hensel_unit_root(a2, w2 * a2.from_int(2))});
  for (auto [p, ap, w] : {std::tuple<long, long, long>{5, 1, 1}, {7, 3, -1}, {13, 2, 1}}) {
    auto ring = UnramifiedRing::make(p, M, poly::x_poly());
    UnramifiedScalar a = ring->from_int(ap), om = ring->from_int(w);
    out.push_back({p, a, om, hensel_unit_root(a, om * a.from_int(p))});
  }
  return out;
}

// 3: trace(n) applied to the stabilized vector at n+1 returns the one at n
inline CheckResult check_projective_compat() {
  return timed("projective-system-compatibility", 30.0, [](Ctx& c) {
    auto fixtures = ordinary_triples(10);
    c.require(fixtures.size() >= 3, "need at least 3 ordinary fixtures");
    for (const auto& fx : fixtures) {
      for (long n = 1; n <= 8; ++n) {
        auto up = stabilized_vector(n + 1, fx.alpha, fx.omega);
        auto down = stabilized_vector(n, fx.alpha, fx.omega);
        auto mapped = trace_matrix(n, fx.p, fx.ap, fx.omega).mul_vec(up.coords);
        for (size_t i = 0; i < mapped.size(); ++i)
          c.require(mapped[i] == down.coords[i],
                    "compatibility fails at p=" + std::to_string(fx.p) +
                        " n=" + std::to_string(n));
      }
    }
  });
}

// 4: iterated traces gain one digit per double step when a_p is non-ordinary
inline CheckResult check_decay() {
  return timed("non-ordinary-decay", 10.0, [](Ctx& c) {
    for (long p : {3L, 5L}) {
      auto ring = UnramifiedRing::make(p, 8, poly::x_poly());
      UnramifiedScalar w = ring->from_int(1);
      for (long apv : {0L, p}) {
        UnramifiedScalar ap = ring->from_int(apv);
        for (int k = 1; k <= 4; ++k)
          c.require(decay_valuation(1, k, p, ap, w) >= k,
                    "decay < k at p=" + std::to_string(p) + " k=" + std::to_string(k));
      }
    }
  });
}

inline HeckePair<UnramifiedScalar> random_pair(long p, int M, size_t d, unsigned long& seed) {
  auto ring = UnramifiedRing::make(p, M, poly::x_poly());
  Matrix<UnramifiedScalar> X(d, d, ring->from_int(0));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      X.at(i, j) = ring->from_int(static_cast<long>(rng_step(seed) % 1024));
  auto poly_in = [&](long c0, long c1, long c2) {
    auto I = Matrix<UnramifiedScalar>::identity(d, ring->from_int(1));
    return ring->from_int(c0) * I +
           ring->from_int(p) * (ring->from_int(c1) * X + ring->from_int(c2) * (X * X));
  };
  long u1 = 1 + static_cast<long>(rng_step(seed) % static_cast<unsigned long>(p - 1));
  long u2 = 1 + static_cast<long>(rng_step(seed) % static_cast<unsigned long>(p - 1));
  auto Tp = poly_in(u1, 1 + static_cast<long>(rng_step(seed) % 8),
                    static_cast<long>(rng_step(seed) % 8));
  auto dia = poly_in(u2, 1 + static_cast<long>(rng_step(seed) % 8),
                     static_cast<long>(rng_step(seed) % 8));
  return HeckePair<UnramifiedScalar>(Tp, dia);
}

// 5: the operator A satisfies its quadratic; both construction paths agree;
// the scalar case is the Hensel root
inline CheckResult check_operator_A() {
  return timed("operator-A", 30.0, [](Ctx& c) {
    unsigned long seed = 0x243f6a8885a308d3UL;
    for (long p : {5L, 7L, 11L}) {
      for (int trial = 0; trial < 100; ++trial) {
        auto pr = random_pair(p, 12, 4, seed);
        auto A = operator_A_iterate(pr, 12);
        auto quad = A * A - pr.Tp * A + pr.proto().from_int(p) * pr.diamond;
        c.require(quad.is_zero(), "quadratic nonzero at p=" + std::to_string(p));
        auto B = operator_A_binomial(pr, 12);
        bool agree = true;
        for (size_t i = 0; i < 4 && agree; ++i)
          for (size_t j = 0; j < 4 && agree; ++j)
            agree = A.at(i, j).with_precision(10) == B.at(i, j).with_precision(10);
        c.require(agree, "paths disagree mod p^10 at p=" + std::to_string(p));
      }
    }
    // scalar case
    auto ring = UnramifiedRing::make(5, 12, poly::x_poly());
    Matrix<UnramifiedScalar> tp(1, 1, ring->from_int(1)), dm(1, 1, ring->from_int(1));
    HeckePair<UnramifiedScalar> pr(tp, dm);
    auto A = operator_A_iterate(pr, 12);
    c.require(A.at(0, 0) == hensel_unit_root(ring->from_int(1), ring->from_int(5)),
              "scalar A != Hensel root");
  });
}

// 6: the projector is idempotent, commutes, and has the right rank on
// diagonal fixtures
inline CheckResult check_projector() {
  return timed("ordinary-projector", 30.0, [](Ctx& c) {
    long p = 5;
    auto ring = UnramifiedRing::make(p, 10, poly::x_poly());
    for (size_t d = 1; d <= 6; ++d) {
      for (size_t units = 0; units <= d; ++units) {
        Matrix<UnramifiedScalar> tp(d, d, ring->from_int(0));
        Matrix<UnramifiedScalar> dia(d, d, ring->from_int(0));
        for (size_t i = 0; i < d; ++i) {
          long u = 1 + static_cast<long>(i) % (p - 1);
          tp.at(i, i) = ring->from_int(i < units ? u : u * p);
          dia.at(i, i) = ring->from_int(1 + static_cast<long>(i * 2) % (p - 1));
        }
        HeckePair<UnramifiedScalar> pr(tp, dia);
        auto part = ordinary_projector(pr, 10);
        c.require((part.e * part.e) == part.e, "e^2 != e");
        c.require(part.e * pr.Tp == pr.Tp * part.e, "e does not commute with Tp");
        c.require(part.e * pr.diamond == pr.diamond * part.e, "e does not commute with <p>");
        c.require(part.rank() == static_cast<long>(units), "wrong rank");
      }
    }
  });
}

// 7: U_p V_p = Id and the T_p decomposition on random expansions
inline CheckResult check_hecke_algebra() {
  return timed("hecke-operator-algebra", 10.0, [](Ctx& c) {
    unsigned long seed = 0x13198a2e03707344UL;
    long p = 5;
    auto chi = std::make_shared<const Nebentypus<PadicScalar>>(Nebentypus<PadicScalar>{
        "kronecker(-3)",
        [](long n) {
          int r = static_cast<int>(n % 3);
          return PadicScalar(5, 8, r == 0 ? 0 : (r == 1 ? 1 : -1));
        }});
    for (int weight : {1, 2}) {
      for (int trial = 0; trial < 50; ++trial) {
        long T = 20 + static_cast<long>(rng_step(seed) % 20);
        std::vector<PadicScalar> a;
        for (long n = 0; n < T; ++n)
          a.push_back(PadicScalar(5, 8, static_cast<long>(rng_step(seed) % 4096)));
        QExpansion<PadicScalar> f(weight, "L", a, chi);

        auto uv = qexp::U_p(qexp::V_p(f, p), p, T);
        for (long n = 1; n <= T; ++n)
          c.require(uv.a(n) == f.a(n), "U_p V_p != Id");

        long T_out = T / p;
        auto tp = qexp::T_p(f, p, T_out);
        PadicScalar cp = chi->chi(p) * PadicScalar(5, 8, prime_power(p, weight - 1));
        auto vp = qexp::V_p(f, p);
        for (long n = 1; n <= T_out; ++n) {
          PadicScalar rhs = f.a(n * p);
          if (n % p == 0) rhs = rhs + cp * vp.a(n);
          c.require(tp.a(n) == rhs, "T_p decomposition fails");
        }
      }
    }
  });
}

// 8: regulators are place-independent, logarithmic, and linear
inline CheckResult check_regulators(const std::string& fixture_dir) {
  return timed("regulator-suite", 5.0, [fixture_dir](Ctx& c) {
    auto quad = load_galois_fixture(fixture_dir + "/quadratic_sqrt2.json");
    QPoly u = quad.field.units[0];
    UnitTensor t;
    t.append(u, mpq(1));

    // log homomorphism at precision >= p^8, log of torsion = 0
    auto places7 = hensel_factor_places(quad.field.g, 7, 12);
    PadicScalar base = reg_Zp(t, places7[0]);
    c.require(base.precision() >= 8, "log precision < 8");
    for (long m = 2; m <= 10; ++m) {
      mpq mm(m);
      c.require(reg_Zp(t.power(mm), places7[0]) ==
                    base * PadicScalar(7, base.precision(), m),
                "reg_Zp not linear at m=" + std::to_string(m));
      c.require(std::abs(reg_real(t.power(mm), quad.field) - m * reg_real(t, quad.field)) <
                    1e-12,
                "reg_real not linear");
    }
    UnramifiedScalar uw = embed_field_element(u, places7[0]);
    c.require(padic_log(teichmuller(uw)).is_zero(), "log(torsion) != 0");

    // place independence of Frobenius-stable tensors over >= 3 primes
    for (long p : {7L, 17L, 23L}) {
      auto pls = hensel_factor_places(quad.field.g, p, 10);
      UnitTensor norm = t;
      norm.append(quad.field.apply_galois(1, u), mpq(1));
      std::vector<mpz> res;
      for (const auto& w : pls) {
        res.push_back(reg_modp(norm, w).residue);
        c.require(reg_Zp(norm, w).is_zero(), "norm tensor has nonzero log");
      }
      for (const auto& r : res)
        c.require(r == res[0], "reg_modp place-dependent at p=" + std::to_string(p));
    }

    auto s3 = load_galois_fixture(fixture_dir + "/s3_disc23.json");
    for (long p : {5L, 7L, 13L}) {
      auto pls = hensel_factor_places(s3.field.g, p, 10);
      std::vector<mpz> res;
      std::vector<PadicScalar> logs;
      for (const auto& w : pls) {
        auto fr = detect_frobenius(s3.rep, s3.field, w);
        auto tv = evaluate_unit_map(s3.umap, fr.x_frob, s3.module).power(mpq(6));
        res.push_back(reg_modp(tv, w).residue);
        logs.push_back(reg_Zp(tv, w));
      }
      for (size_t i = 1; i < res.size(); ++i) {
        c.require(res[i] == res[0], "s3 reg_modp place-dependent at p=" + std::to_string(p));
        c.require(logs[i] == logs[0], "s3 reg_Zp place-dependent at p=" + std::to_string(p));
      }
    }
  });
}

// 9: the mock-backed pipeline and the report verdicts
inline CheckResult check_pipeline(const std::string&) {
  return timed("pipeline", 30.0, [](Ctx& c) {
    DihedralForm f(23, {1});
    auto pls = ordinary_places(f, 2, 10);
    auto rep = norm_Zp(f, 2, pls[0], a1_backend(), 5, 10);
    c.require(rep.stabilized, "a_1 sequence did not stabilize");
    for (const auto& v : rep.values)
      c.require(v.is_zero(), "a_1 sequence not identically zero");

    // closed form: the product at level n is supported from q^{1 + 2^{n-1}}
    UnramifiedScalar a2 = f.ap(2).embed(pls[0].zeta_image);
    UnramifiedScalar om = a2.from_int(1);
    UnramifiedScalar alpha = hensel_unit_root(a2, om * a2.from_int(2));
    auto femb = embed_expansion(f.theta_expansion(40), pls[0].zeta_image);
    auto fstar = embed_expansion(f.dual().theta_expansion(40), pls[0].zeta_image);
    for (long n = 1; n <= 5; ++n) {
      auto w2 = weight2_product(femb, stabilized_vector(n, alpha, om), fstar, 2, 40);
      long first = 0;
      for (long k = 1; k <= w2.truncation() && first == 0; ++k)
        if (!w2.a(k).is_zero()) first = k;
      c.require(first == 1 + (1L << (n - 1)), "support index wrong at n=" + std::to_string(n));
    }

    PadicScalar x(2, 8, 37);
    c.require(conjecture_report(x, x, 8).equal, "equal inputs not EQUAL");
    PadicScalar y(2, 8, 37 + 32);
    c.require(conjecture_report(x, y, 5).equal, "p^t perturbation not EQUAL at t");
    c.require(!conjecture_report(x, y, 6).equal, "p^t perturbation EQUAL at t+1");
    bool threw = false;
    try {
      conjecture_report(std::nullopt, x, 4);
    } catch (const PrecisionMismatch&) {
      threw = true;
    }
    c.require(threw, "missing side did not raise PrecisionMismatch");
  });
}

}  // namespace selfcheck

inline std::vector<CheckResult> acceptance_checks(const std::string& fixture_dir) {
  using namespace selfcheck;
  return {check_hensel(),
          check_dihedral(),
          check_projective_compat(),
          check_decay(),
          check_operator_A(),
          check_projector(),
          check_hecke_algebra(),
          check_regulators(fixture_dir),
          check_pipeline(fixture_dir)};
}

}  // namespace dhecke

#endif
