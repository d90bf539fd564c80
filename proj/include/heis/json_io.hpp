#pragma once

// JSON persistence. Rationals are "num/den" strings; object keys are sorted,
// so equal values serialize to equal bytes.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "heis/canonrep.hpp"

namespace heis {

using json = nlohmann::json;

// ---------------------------------------------------------------- values

inline json cyc_to_json(const CycNum& a) {
  json c = json::array();
  for (const auto& q : a.coeffs()) c.push_back(rational_to_string(q));
  return {{"conductor", a.conductor()}, {"coeffs", c}};
}

inline CycNum cyc_from_json(const json& j) {
  const int64_t n = j.at("conductor").get<int64_t>();
  if (n < 1) throw InputError("json: conductor must be positive");
  std::vector<mpq_class> c;
  for (const auto& s : j.at("coeffs")) c.push_back(rational_from_string(s.get<std::string>()));
  if (static_cast<int64_t>(c.size()) != nt::euler_phi(n)) throw InputError("json: coeffs must have length phi(conductor)");
  return CycNum::from_coeffs(n, c);
}

inline json matrix_to_json(const CycMatrix& m) {
  json rows = json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(cyc_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline CycMatrix matrix_from_json(const json& j) {
  const size_t r = j.size(), c = r ? j.at(0).size() : 0;
  CycMatrix m(r, c);
  for (size_t i = 0; i < r; ++i) {
    if (j.at(i).size() != c) throw InputError("json: ragged matrix");
    for (size_t k = 0; k < c; ++k) m(i, k) = cyc_from_json(j.at(i).at(k));
  }
  return m;
}

inline json group_to_json(const AbGroup& g) { return {{"orders", g.orders()}}; }
inline AbGroup group_from_json(const json& j) { return AbGroup(j.at("orders").get<std::vector<int64_t>>()); }

inline json subgroup_to_json(const Subgroup& s) { return {{"ambient", group_to_json(s.ambient())}, {"gens", s.gens()}}; }
inline Subgroup subgroup_from_json(const json& j) {
  const AbGroup g = group_from_json(j.at("ambient"));
  std::vector<Elem> gens;
  for (const auto& x : j.at("gens")) gens.push_back(g.reduce(x.get<Elem>()));
  return Subgroup::from_gens(g, gens);
}

inline json module_to_json(const SympMod& m) { return {{"orders", m.group().orders()}, {"n", m.n()}, {"gram", m.gram()}}; }
inline SympMod module_from_json(const json& j) {
  try {
    return SympMod(group_from_json(j), j.at("n").get<int64_t>(), j.at("gram").get<IntMat>());
  } catch (const json::exception& e) {
    throw InputError(std::string("module file: ") + e.what());
  }
}

inline json enh_to_json(const EnhLag& e) { return {{"gens", e.lag.gens()}, {"eps", e.eps}}; }
inline EnhLag enh_from_json(const json& j, const AbGroup& g) {
  std::vector<Elem> gens;
  for (const auto& x : j.at("gens")) gens.push_back(g.reduce(x.get<Elem>()));
  const int eps = j.at("eps").get<int>();
  if (eps != 1 && eps != -1) throw InputError("enhanced lagrangian: eps must be +1 or -1");
  return {Subgroup::from_gens(g, gens), eps};
}

inline json aut_to_json(const SympAut& g) { return g.matrix(); }
inline SympAut aut_from_json(const json& j, const AbGroup& g) { return SympAut(g, j.get<IntMat>()); }

inline json helem_to_json(const HElem& x) { return {x.m, x.a}; }
inline HElem helem_from_json(const json& j) { return {j.at(0).get<Elem>(), j.at(1).get<int64_t>()}; }

/// FNV-1a over the canonical module serialization.
inline std::string module_hash(const SympMod& m) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : module_to_json(m).dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline json induced_to_json(const InducedModule& v) {
  json gens = json::array();
  for (const auto& g : v.grp().generators())
    gens.push_back({{"element", helem_to_json(g)}, {"matrix", matrix_to_json(v.rho(g).to_cyc())}});
  return {{"lagrangian", subgroup_to_json(v.lag())}, {"dim", v.dim()}, {"generators", gens}};
}

// ---------------------------------------------------------------- canonical system table

struct SystemEntry {
  CycNum scalar;
  CycMatrix matrix;  // F = scalar * T
};

struct SystemTable {
  SympMod module;
  EnhLag basepoint;
  std::optional<Subgroup> S;
  std::vector<std::string> lagrangians;          // keys with + lift
  std::map<std::string, SystemEntry> entries;    // "N+|L+" -> F
};

inline std::string pair_key(const EnhLag& a, const EnhLag& b) { return a.key() + "|" + b.key(); }

/// All pairs of + lifts (other lifts follow by the sign rule), up to
/// `max_lagrangians` lagrangians (0 = all).
template <class Family>
SystemTable system_table(const Family& sys, const EnhLag& basepoint, size_t max_lagrangians = 0) {
  SystemTable t{sys.module(), basepoint, std::nullopt, {}, {}};
  const auto& lags = sys.lagrangians();
  const size_t nl = max_lagrangians ? std::min(max_lagrangians, lags.size()) : lags.size();
  for (size_t a = 0; a < nl; ++a) t.lagrangians.push_back(EnhLag{lags[a], 1}.key());
  for (size_t a = 0; a < nl; ++a)
    for (size_t b = 0; b < nl; ++b) {
      const EnhLag n0{lags[a], 1}, l0{lags[b], 1};
      const CycNum s = sys.scalar(n0, l0);
      t.entries[pair_key(n0, l0)] = {s, s * sys.T(a, b).to_cyc()};
    }
  return t;
}

inline json table_to_json(const SystemTable& t) {
  json e = json::object();
  for (const auto& [k, v] : t.entries) e[k] = {{"scalar", cyc_to_json(v.scalar)}, {"matrix", matrix_to_json(v.matrix)}};
  json j = {{"module", module_to_json(t.module)},
            {"module_hash", module_hash(t.module)},
            {"basepoint", enh_to_json(t.basepoint)},
            {"lagrangians", t.lagrangians},
            {"sign_rule", "flipping the lift of either argument negates the entry"},
            {"entries", e}};
  if (t.S) j["S"] = subgroup_to_json(*t.S);
  return j;
}

inline SystemTable table_from_json(const json& j) {
  SystemTable t;
  t.module = module_from_json(j.at("module"));
  if (j.at("module_hash").get<std::string>() != module_hash(t.module)) throw InputError("system file: module hash mismatch");
  t.basepoint = enh_from_json(j.at("basepoint"), t.module.group());
  if (j.contains("S")) t.S = subgroup_from_json(j.at("S"));
  t.lagrangians = j.at("lagrangians").get<std::vector<std::string>>();
  for (const auto& [k, v] : j.at("entries").items())
    t.entries[k] = {cyc_from_json(v.at("scalar")), matrix_from_json(v.at("matrix"))};
  return t;
}

inline bool operator==(const SystemEntry& a, const SystemEntry& b) { return a.scalar == b.scalar && a.matrix == b.matrix; }

inline bool operator==(const SystemTable& a, const SystemTable& b) {
  return a.module.group().orders() == b.module.group().orders() && a.module.n() == b.module.n() &&
         a.module.gram() == b.module.gram() && a.basepoint == b.basepoint && a.S == b.S && a.lagrangians == b.lagrangians &&
         a.entries == b.entries;
}

// ---------------------------------------------------------------- pi export

struct PiExport {
  size_t dim = 0;
  SympMod module;
  std::optional<EnhLag> basepoint;
  std::vector<std::pair<HElem, CycMatrix>> h_generators;
  std::vector<std::pair<SympAut, CycMatrix>> g_matrices;
  std::vector<std::vector<int64_t>> g_conductors;  // minimal conductor per entry, row-major
  std::vector<std::pair<HElem, CycNum>> characters;
  FieldReport field;
};

/// Class representatives of H: the centre, then (m, 0) for m running over the
/// basis. Other classes carry value 0 by the orthogonality check.
inline std::vector<HElem> class_representatives(const HeisGrp& h) {
  std::vector<HElem> out;
  for (int64_t a = 0; a < h.n(); ++a) out.push_back(h.central(a));
  for (size_t i = 0; i < h.group().rank(); ++i) out.push_back(h.lift(h.group().basis(i)));
  return out;
}

inline PiExport pi_export(const CanonicalRep& pi, const std::vector<SympAut>& gs) {
  PiExport e;
  e.dim = pi.dim();
  e.module = pi.module();
  if (pi.parts().size() == 1 && pi.parts()[0]->sys) e.basepoint = pi.basepoint();
  for (const auto& g : pi.heis().generators()) e.h_generators.emplace_back(g, pi.act(g).to_cyc());
  for (const auto& g : gs) {
    const CycMatrix w = pi.act(g).dense();
    std::vector<int64_t> cond;
    for (const auto& x : w.entries()) cond.push_back(x.is_zero() ? 1 : min_conductor(x));
    e.g_matrices.emplace_back(g, w);
    e.g_conductors.push_back(cond);
  }
  for (const auto& x : class_representatives(pi.heis())) e.characters.emplace_back(x, pi.character(x));
  e.field = field_report(pi, gs, pi.heis().order() > 4096 ? 512 : 0);
  return e;
}

inline json field_to_json(const FieldReport& f) {
  return {{"entries", f.entries},
          {"entries_in_K", f.entries_in_K},
          {"entries_in_Kprime", f.entries_in_Kprime},
          {"entries_outside_Kprime", f.entries_outside_Kprime},
          {"characters", f.characters},
          {"characters_in_Kprime", f.characters_in_Kprime},
          {"max_conductor", f.max_conductor}};
}

inline FieldReport field_from_json(const json& j) {
  FieldReport f;
  f.entries = j.at("entries").get<size_t>();
  f.entries_in_K = j.at("entries_in_K").get<bool>();
  f.entries_in_Kprime = j.at("entries_in_Kprime").get<bool>();
  f.entries_outside_Kprime = j.at("entries_outside_Kprime").get<size_t>();
  f.characters = j.at("characters").get<size_t>();
  f.characters_in_Kprime = j.at("characters_in_Kprime").get<bool>();
  f.max_conductor = j.at("max_conductor").get<int64_t>();
  return f;
}

inline json pi_to_json(const PiExport& e) {
  json hg = json::array(), gg = json::array(), ch = json::array();
  for (const auto& [x, m] : e.h_generators) hg.push_back({{"element", helem_to_json(x)}, {"matrix", matrix_to_json(m)}});
  for (size_t i = 0; i < e.g_matrices.size(); ++i)
    gg.push_back({{"g", aut_to_json(e.g_matrices[i].first)},
                  {"matrix", matrix_to_json(e.g_matrices[i].second)},
                  {"conductors", e.g_conductors[i]}});
  for (const auto& [x, v] : e.characters) ch.push_back({{"element", helem_to_json(x)}, {"value", cyc_to_json(v)}});
  json j = {{"dim", e.dim},
            {"module", module_to_json(e.module)},
            {"module_hash", module_hash(e.module)},
            {"H_generators", hg},
            {"G_matrices", gg},
            {"characters", ch},
            {"field", field_to_json(e.field)}};
  j["basepoint"] = e.basepoint ? enh_to_json(*e.basepoint) : json(nullptr);
  return j;
}

inline PiExport pi_from_json(const json& j) {
  PiExport e;
  e.dim = j.at("dim").get<size_t>();
  e.module = module_from_json(j.at("module"));
  if (j.at("module_hash").get<std::string>() != module_hash(e.module)) throw InputError("pi file: module hash mismatch");
  if (!j.at("basepoint").is_null()) e.basepoint = enh_from_json(j.at("basepoint"), e.module.group());
  for (const auto& x : j.at("H_generators")) e.h_generators.emplace_back(helem_from_json(x.at("element")), matrix_from_json(x.at("matrix")));
  for (const auto& x : j.at("G_matrices")) {
    e.g_matrices.emplace_back(aut_from_json(x.at("g"), e.module.group()), matrix_from_json(x.at("matrix")));
    e.g_conductors.push_back(x.at("conductors").get<std::vector<int64_t>>());
  }
  for (const auto& x : j.at("characters")) e.characters.emplace_back(helem_from_json(x.at("element")), cyc_from_json(x.at("value")));
  e.field = field_from_json(j.at("field"));
  return e;
}

// ---------------------------------------------------------------- files

inline json read_json_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw InputError("cannot open " + path);
  std::string s;
  char buf[65536];
  size_t k;
  while ((k = std::fread(buf, 1, sizeof buf, f)) > 0) s.append(buf, k);
  std::fclose(f);
  try {
    return json::parse(s);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace heis
