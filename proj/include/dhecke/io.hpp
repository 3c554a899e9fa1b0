#ifndef DHECKE_IO_HPP
#define DHECKE_IO_HPP

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dhecke/dihedral.hpp"
#include "dhecke/harness.hpp"

namespace dhecke::io {

using nlohmann::json;

// All big integers travel as decimal strings; rationals as "num/den".

inline json padic_to_json(const PadicScalar& x) {
  return {{"p", x.prime()}, {"M", x.precision()}, {"residue", x.residue().get_str()}};
}

inline PadicScalar padic_from_json(const json& j) {
  return PadicScalar(j.at("p").get<long>(), j.at("M").get<int>(),
                     mpz(j.at("residue").get<std::string>()));
}

inline json poly_to_json(const Poly& g) {
  json a = json::array();
  for (const auto& c : g) a.push_back(c.get_str());
  return a;
}

inline Poly poly_from_json(const json& j) {
  Poly g;
  for (const auto& c : j) g.push_back(mpz(c.get<std::string>()));
  return g;
}

inline json unram_to_json(const UnramifiedScalar& x) {
  return {{"p", x.prime()},
          {"M", x.precision()},
          {"g", poly_to_json(x.ring()->g())},
          {"coeffs", poly_to_json(x.coeffs())}};
}

inline UnramifiedScalar unram_from_json(const json& j) {
  auto ring = UnramifiedRing::make(j.at("p").get<long>(), j.at("M").get<int>(),
                                   poly_from_json(j.at("g")));
  return ring->element(poly_from_json(j.at("coeffs")));
}

inline json cyc_to_json(const CycElem& x) {
  json c = json::array();
  for (const auto& q : x.coeffs()) c.push_back(q.get_str());
  return {{"m", x.order()}, {"coeffs", c}};
}

inline CycElem cyc_from_json(const json& j) {
  auto ring = CyclotomicRing::make(j.at("m").get<long>());
  QPoly c;
  for (const auto& s : j.at("coeffs")) {
    mpq q(s.get<std::string>());
    q.canonicalize();
    c.push_back(q);
  }
  return ring->element(c);
}

// q-expansions: the nebentypus is a function handle, so only its name
// survives a round trip; coefficients, weight, and level are exact.
inline json qexp_to_json(const QExpansion<CycElem>& f) {
  json c = json::array();
  for (long n = 1; n <= f.truncation(); ++n) {
    json a = json::array();
    for (const auto& q : f.a(n).coeffs()) a.push_back(q.get_str());
    c.push_back(a);
  }
  return {{"weight", f.weight()},
          {"level_tag", f.level_tag()},
          {"T", f.truncation()},
          {"ring", {{"type", "cyclotomic"}, {"m", f.a(1).order()}}},
          {"neben", f.neben() ? f.neben()->name : ""},
          {"coeffs", c}};
}

inline QExpansion<CycElem> qexp_cyc_from_json(const json& j) {
  auto ring = CyclotomicRing::make(j.at("ring").at("m").get<long>());
  std::vector<CycElem> c;
  for (const auto& a : j.at("coeffs")) {
    QPoly q;
    for (const auto& s : a) {
      mpq r(s.get<std::string>());
      r.canonicalize();
      q.push_back(r);
    }
    c.push_back(ring->element(q));
  }
  return QExpansion<CycElem>(j.at("weight").get<int>(), j.at("level_tag").get<std::string>(),
                             std::move(c));
}

inline json qexp_to_json(const QExpansion<UnramifiedScalar>& f) {
  json c = json::array();
  for (long n = 1; n <= f.truncation(); ++n) c.push_back(poly_to_json(f.a(n).coeffs()));
  const auto& ring = f.a(1).ring();
  return {{"weight", f.weight()},
          {"level_tag", f.level_tag()},
          {"T", f.truncation()},
          {"ring",
           {{"type", "unramified"}, {"p", ring->p()}, {"M", ring->M()}, {"g", poly_to_json(ring->g())}}},
          {"neben", f.neben() ? f.neben()->name : ""},
          {"coeffs", c}};
}

inline QExpansion<UnramifiedScalar> qexp_unram_from_json(const json& j) {
  const json& r = j.at("ring");
  auto ring = UnramifiedRing::make(r.at("p").get<long>(), r.at("M").get<int>(),
                                   poly_from_json(r.at("g")));
  std::vector<UnramifiedScalar> c;
  for (const auto& a : j.at("coeffs")) c.push_back(ring->element(poly_from_json(a)));
  return QExpansion<UnramifiedScalar>(j.at("weight").get<int>(),
                                      j.at("level_tag").get<std::string>(), std::move(c));
}

// Form descriptor: discriminant plus character exponents on the class-group
// generators.
inline json form_to_json(const DihedralForm& f) {
  return {{"disc", f.field().D()},
          {"chi", f.chi().generator_exponents()},
          {"class_number", f.group().size()}};
}

inline DihedralForm form_from_json(const json& j) {
  return DihedralForm(j.at("disc").get<long>(), j.at("chi").get<std::vector<long>>());
}

// Pairing table file: residues by level exponent.
inline json table_to_json(long p, const std::map<int, mpz>& entries,
                          const std::string& provenance = "table") {
  json e = json::array();
  for (const auto& [n, v] : entries) e.push_back({{"n", n}, {"value", v.get_str()}});
  return {{"p", p}, {"provenance", provenance}, {"entries", e}};
}

inline std::pair<long, PairingBackend> backend_from_json(const json& j) {
  std::map<int, mpz> entries;
  for (const auto& e : j.at("entries"))
    entries[e.at("n").get<int>()] = mpz(e.at("value").get<std::string>());
  return {j.at("p").get<long>(),
          table_backend(std::move(entries), j.value("provenance", "table"))};
}

inline json norm_report_to_json(const NormReport& r) {
  json vals = json::array();
  for (const auto& v : r.values) vals.push_back(padic_to_json(v));
  json out = {{"p", r.p},
              {"place_degree", r.place_degree},
              {"provenance", r.provenance},
              {"values", vals},
              {"stabilized", r.stabilized},
              {"first_incompatible", r.first_incompatible}};
  if (r.stabilized && !r.values.empty()) out["final"] = padic_to_json(r.final_value());
  return out;
}

inline NormReport norm_report_from_json(const json& j) {
  NormReport r;
  r.p = j.at("p").get<long>();
  r.place_degree = j.at("place_degree").get<int>();
  r.provenance = j.at("provenance").get<std::string>();
  for (const auto& v : j.at("values")) r.values.push_back(padic_from_json(v));
  r.stabilized = j.at("stabilized").get<bool>();
  r.first_incompatible = j.at("first_incompatible").get<long>();
  return r;
}

inline json conjecture_to_json(const ConjectureReport& r) {
  return {{"verdict", r.equal ? "EQUAL" : "UNEQUAL"},
          {"tolerance_exponent", r.t},
          {"residual", padic_to_json(r.residual)}};
}

}  // namespace dhecke::io

#endif
