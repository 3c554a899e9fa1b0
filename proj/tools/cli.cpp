#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <dhecke/io.hpp>
#include <dhecke/selfcheck.hpp>

using namespace dhecke;
using nlohmann::json;

namespace {

int default_prec() {
  if (const char* env = std::getenv("PADIC_PREC")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 12;
}

json place_json(const CyclotomicPlace& v) {
  return {{"degree", v.place.degree()}, {"factor", io::poly_to_json(v.place.factor)}};
}

void emit(const json& j) { std::cout << j.dump(1) << "\n"; }

int run(int argc, char** argv) {
  CLI::App app{"computable pipeline for p-adic stabilization, ordinary theory, and regulators"};
  app.require_subcommand(1);

  int prec = default_prec();
  long disc = 23, p = 2;
  std::vector<long> chi{1};
  long trunc = 100, pmax = 100, nlevel = 6, dim = 1;
  long ap_in = 1, omega_in = 1;
  unsigned long seed = 1;
  std::string fixture, table_file, backend_name = "zero", suite = "all";
  std::string fixtures_dir = "tests/fixtures";
  std::string norm_s, reg_s;
  int tol = 0;

  auto add_form_opts = [&](CLI::App* c) {
    c->add_option("--disc", disc, "positive fundamental discriminant D for Q(sqrt(-D))");
    c->add_option("--chi", chi, "character exponents on the class-group generators");
  };
  auto add_prec = [&](CLI::App* c) {
    c->add_option("--prec", prec, "precision exponent M (work mod p^M); env PADIC_PREC");
  };

  auto* cd = app.add_subcommand("dihedral", "theta q-expansion of a dihedral form");
  add_form_opts(cd);
  cd->add_option("--trunc", trunc, "truncation length");

  auto* ca = app.add_subcommand("ap-table", "Hecke eigenvalues a_p up to a bound");
  add_form_opts(ca);
  ca->add_option("--pmax", pmax, "largest prime");

  auto* ch = app.add_subcommand("hensel", "unit root of X^2 - a_p X + omega p");
  ch->add_option("--p", p, "prime");
  ch->add_option("--ap", ap_in, "a_p value");
  ch->add_option("--omega", omega_in, "omega(p) value");
  add_prec(ch);

  auto* cs = app.add_subcommand("stabilize", "stabilized vector and trace compatibility");
  add_form_opts(cs);
  cs->add_option("--p", p, "prime");
  cs->add_option("--n", nlevel, "level exponent");
  add_prec(cs);

  auto* co = app.add_subcommand("ordinary-A", "the operator A with A^2 - T_p A + <p>p = 0");
  co->add_option("--p", p, "prime");
  co->add_option("--ap", ap_in, "scalar T_p (dim 1)");
  co->add_option("--omega", omega_in, "scalar <p> (dim 1)");
  co->add_option("--dim", dim, "matrix dimension (random commuting pair when > 1)");
  co->add_option("--seed", seed, "seed for the random pair");
  add_prec(co);

  auto* cr = app.add_subcommand("regulator", "regulator values of a Galois fixture");
  cr->add_option("--fixture", fixture, "fixture JSON path")->required();
  cr->add_option("--p", p, "prime");
  add_prec(cr);

  auto* cn = app.add_subcommand("norm", "per-level pairing sequence of f times f-hat-star");
  add_form_opts(cn);
  cn->add_option("--p", p, "prime");
  cn->add_option("--n-max", nlevel, "largest level exponent");
  cn->add_option("--backend", backend_name, "zero | a1 | table");
  cn->add_option("--table", table_file, "pairing table JSON (backend=table)");
  add_prec(cn);

  auto* cc = app.add_subcommand("conjecture", "compare a norm value against a regulator value");
  cc->add_option("--p", p, "prime");
  cc->add_option("--norm", norm_s, "norm residue (decimal)")->required();
  cc->add_option("--reg", reg_s, "regulator residue (decimal)")->required();
  cc->add_option("--t", tol, "tolerance exponent")->required();
  add_prec(cc);

  auto* cv = app.add_subcommand("verify", "run the property suites");
  cv->add_option("--suite", suite, "which suite (all)");
  cv->add_option("--fixtures", fixtures_dir, "fixture directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (cd->parsed()) {
    DihedralForm f(disc, chi);
    json out = io::form_to_json(f);
    out["qexp"] = io::qexp_to_json(f.theta_expansion(trunc));
    emit(out);
    return 0;
  }

  if (ca->parsed()) {
    DihedralForm f(disc, chi);
    json rows = json::array();
    for (long q = 2; q <= pmax; ++q) {
      bool prime = q > 1;
      for (long d = 2; d * d <= q; ++d)
        if (q % d == 0) prime = false;
      if (!prime) continue;
      rows.push_back({{"p", q}, {"value", io::cyc_to_json(f.ap(q))}});
    }
    emit({{"form", io::form_to_json(f)}, {"ap", rows}});
    return 0;
  }

  if (ch->parsed()) {
    PadicScalar ap(p, prec, ap_in), om(p, prec, omega_in);
    PadicScalar alpha = hensel_unit_root(ap, om * PadicScalar(p, prec, p));
    PadicScalar quad = alpha * alpha - ap * alpha + om * PadicScalar(p, prec, p);
    emit({{"alpha", io::padic_to_json(alpha)}, {"quadratic_zero", quad.is_zero()}});
    return quad.is_zero() ? 0 : 1;
  }

  if (cs->parsed()) {
    DihedralForm f(disc, chi);
    auto places = ordinary_places(f, p, prec);
    if (places.empty()) {
      std::cerr << "no ordinary place above " << p << "\n";
      return 1;
    }
    const auto& v = places[0];
    UnramifiedScalar ap = f.ap(p).embed(v.zeta_image);
    UnramifiedScalar om = ap.from_int(f.field().kronecker(p));
    UnramifiedScalar alpha = hensel_unit_root(ap, om * ap.from_int(p));
    auto vec = stabilized_vector(nlevel, alpha, om);
    json coords = json::array();
    for (const auto& c : vec.coords) coords.push_back(io::poly_to_json(c.coeffs()));
    json log = json::array();
    bool all_ok = true;
    for (long n = 1; n < nlevel; ++n) {
      auto up = stabilized_vector(n + 1, alpha, om);
      auto down = stabilized_vector(n, alpha, om);
      auto mapped = trace_matrix(n, p, ap, om).mul_vec(up.coords);
      bool ok = true;
      for (size_t i = 0; i < mapped.size(); ++i) ok = ok && mapped[i] == down.coords[i];
      all_ok = all_ok && ok;
      log.push_back({{"n", n}, {"trace_compatible", ok}});
    }
    emit({{"p", p},
          {"place", place_json(v)},
          {"alpha", io::unram_to_json(alpha)},
          {"n", nlevel},
          {"coords", coords},
          {"compatibility", log}});
    return all_ok ? 0 : 1;
  }

  if (co->parsed()) {
    if (dim <= 1) {
      auto ring = UnramifiedRing::make(p, prec, poly::x_poly());
      Matrix<UnramifiedScalar> tp(1, 1, ring->from_int(ap_in));
      Matrix<UnramifiedScalar> dm(1, 1, ring->from_int(omega_in));
      HeckePair<UnramifiedScalar> pr(tp, dm);
      auto A = operator_A_iterate(pr, prec);
      emit({{"p", p}, {"dim", 1}, {"A", io::unram_to_json(A.at(0, 0))}});
      return 0;
    }
    unsigned long s = seed;
    auto pr = selfcheck::random_pair(p, prec, static_cast<size_t>(dim), s);
    auto A = operator_A_iterate(pr, prec);
    auto quad = A * A - pr.Tp * A + pr.proto().from_int(p) * pr.diamond;
    json rows = json::array();
    for (size_t i = 0; i < A.rows(); ++i) {
      json row = json::array();
      for (size_t j = 0; j < A.cols(); ++j) row.push_back(io::poly_to_json(A.at(i, j).coeffs()));
      rows.push_back(row);
    }
    emit({{"p", p}, {"dim", dim}, {"seed", seed}, {"A", rows}, {"quadratic_zero", quad.is_zero()}});
    return quad.is_zero() ? 0 : 1;
  }

  if (cr->parsed()) {
    std::ifstream probe(fixture);
    if (!probe) {
      std::cerr << "cannot open fixture " << fixture << "\n";
      return 3;
    }
    auto fx = load_galois_fixture(fixture);
    auto places = hensel_factor_places(fx.field.g, p, prec);
    json rows = json::array();
    for (const auto& w : places) {
      auto fr = detect_frobenius(fx.rep, fx.field, w);
      auto t = evaluate_unit_map(fx.umap, fr.x_frob, fx.module);
      json row = {{"place", {{"degree", w.degree()}, {"factor", io::poly_to_json(w.factor)}}},
                  {"frobenius", fr.sigma_w},
                  {"tensor_factors", t.factors.size()},
                  {"reg_real", reg_real(t, fx.field)}};
      auto m = reg_modp(t, w);
      row["reg_modp"] = {{"residue", m.residue.get_str()}, {"denom", m.denom.get_str()}};
      row["reg_Zp"] = io::padic_to_json(reg_Zp(t, w));
      rows.push_back(row);
    }
    emit({{"p", p}, {"fixture", fixture}, {"places", rows}});
    return 0;
  }

  if (cn->parsed()) {
    DihedralForm f(disc, chi);
    auto places = ordinary_places(f, p, prec);
    if (places.empty()) {
      std::cerr << "no ordinary place above " << p << "\n";
      return 1;
    }
    PairingBackend backend = zero_backend();
    if (backend_name == "a1") {
      backend = a1_backend();
    } else if (backend_name == "table") {
      std::ifstream in(table_file);
      if (!in) throw BackendFailure(0, "cannot open pairing table " + table_file);
      auto [tp, tb] = io::backend_from_json(json::parse(in));
      if (tp != p) throw BackendFailure(0, "pairing table is for a different prime");
      backend = std::move(tb);
    } else if (backend_name != "zero") {
      std::cerr << "unknown backend: " << backend_name << "\n";
      return 2;
    }
    auto rep = norm_Zp(f, p, places[0], backend, static_cast<int>(nlevel), prec);
    emit(io::norm_report_to_json(rep));
    return 0;
  }

  if (cc->parsed()) {
    PadicScalar a(p, prec, mpz(norm_s)), b(p, prec, mpz(reg_s));
    auto rep = conjecture_report(a, b, tol);
    emit(io::conjecture_to_json(rep));
    return rep.equal ? 0 : 1;
  }

  if (cv->parsed()) {
    if (suite != "all") {
      std::cerr << "unknown suite: " << suite << "\n";
      return 2;
    }
    auto results = acceptance_checks(fixtures_dir);
    bool all = true;
    for (const auto& r : results) {
      std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name << ": " << r.detail << "\n";
      all = all && r.pass;
    }
    return all ? 0 : 1;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const BackendFailure& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
