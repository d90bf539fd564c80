// heis: build and verify the canonical representation of a finite Heisenberg group.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "heis/json_io.hpp"

using namespace heis;

namespace {

struct Options {
  std::string input, out, base, level = "quick", budget;
  uint64_t seed = 1;
  size_t random_forms = 0;
  int64_t max_order = 81;
};

Budget parse_budget(const std::string& s) {
  Budget b = default_budget();
  if (s.empty()) return b;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    try {
      if (eq == std::string::npos) {
        b.lagrangians = std::stoll(item);
        continue;
      }
      const std::string k = item.substr(0, eq);
      const int64_t v = std::stoll(item.substr(eq + 1));
      if (k == "lagrangians") b.lagrangians = v;
      else if (k == "sp") b.sp_enumerate = v;
      else if (k == "elements") b.elements = v;
      else throw InputError("--budget: unknown key " + k);
    } catch (const std::logic_error&) {
      throw InputError("--budget: cannot parse '" + item + "'");
    }
  }
  return b;
}

/// "p^k:d+..." with d hyperbolic blocks of (Z/p^k)^2 each; ":d" and "^k" are optional.
SympMod parse_standard(const std::string& spec) {
  std::vector<std::pair<int64_t, int>> blocks;
  std::stringstream ss(spec);
  std::string term;
  while (std::getline(ss, term, '+')) {
    int64_t p = 0, k = 1;
    int d = 1;
    try {
      const auto colon = term.find(':');
      const std::string base = term.substr(0, colon);
      if (colon != std::string::npos) d = std::stoi(term.substr(colon + 1));
      const auto caret = base.find('^');
      p = std::stoll(base.substr(0, caret));
      if (caret != std::string::npos) k = std::stoll(base.substr(caret + 1));
    } catch (const std::logic_error&) {
      throw InputError("standard: cannot parse term '" + term + "' (expected p^k:d)");
    }
    if (p == 2) throw InputError("standard: p = 2 rejected; even order is not supported, only odd order");
    if (!nt::is_prime(p)) throw InputError("standard: " + std::to_string(p) + " is not prime");
    if (k < 1 || d < 1) throw InputError("standard: exponent and multiplicity must be positive");
    blocks.emplace_back(nt::ipow(p, k), d);
  }
  if (blocks.empty()) throw InputError("standard: empty spec");
  return standard_module(blocks);
}

void emit(const json& j, const Options& o) {
  const std::string s = j.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << s;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError("cannot write " + o.out);
  f << s;
}

/// A module file, or an inline standard spec such as "3^2:1+3:1".
SympMod load_module(const Options& o) {
  std::ifstream probe(o.input);
  if (!probe && !o.input.empty() && o.input.find_first_not_of("0123456789^:+") == std::string::npos)
    return parse_standard(o.input);
  return module_from_json(read_json_file(o.input));
}

std::optional<EnhLag> parse_base(const Options& o, const SympMod& m, const Budget& b) {
  if (o.base.empty()) return std::nullopt;
  if (o.base.find_first_not_of("0123456789") == std::string::npos) {
    LiftedSystem s(m, std::nullopt, b);
    const auto e = s.enhanced();
    const size_t i = std::stoul(o.base);
    if (i >= e.size()) throw InputError("--base: index out of range (" + std::to_string(e.size()) + " enhanced lagrangians)");
    return e[i];
  }
  return enh_from_json(read_json_file(o.base), m.group());
}

json primary_split(const SympMod& m) {
  json out = json::array();
  if (m.n() == 1) return out;
  for (int64_t p : nt::prime_divisors(m.n())) {
    int64_t order = 1;
    for (auto d : m.group().orders()) order *= nt::ipow(p, nt::valuation(d, p));
    out.push_back({{"p", p}, {"order", order}, {"n_p", nt::ipow(p, nt::valuation(m.n(), p))}});
  }
  return out;
}

int cmd_info(const Options& o) {
  const SympMod m = load_module(o);
  emit({{"order", m.order()},
        {"n", m.n()},
        {"rank", m.rank()},
        {"orders", m.group().orders()},
        {"exponent", m.group().exponent()},
        {"half_order", m.half_order()},
        {"elementary", m.is_elementary()},
        {"primary_split", primary_split(m)},
        {"module_hash", module_hash(m)},
        {"valid", true}},
       o);
  return 0;
}

int cmd_lagrangians(const Options& o) {
  const SympMod m = load_module(o);
  const auto lags = enumerate_lagrangians(m, parse_budget(o.budget));
  json l = json::array();
  for (const auto& x : lags) l.push_back(x.gens());
  emit({{"count", lags.size()}, {"lagrangians", l}, {"module_hash", module_hash(m)}}, o);
  return 0;
}

int cmd_reduce(const Options& o) {
  const SympMod m = load_module(o);
  const auto primes = m.n() > 1 ? nt::prime_divisors(m.n()) : std::vector<int64_t>{};
  if (primes.size() != 1) throw InputError("reduce: module must be p-primary");
  Reduction r(m);
  emit({{"S", subgroup_to_json(r.S())},
        {"S_perp", subgroup_to_json(r.perp())},
        {"Mc", module_to_json(r.mc())},
        {"exponent_chain", r.exponent_chain()},
        {"module_hash", module_hash(m)}},
       o);
  return 0;
}

int cmd_system(const Options& o) {
  const SympMod m = load_module(o);
  const Budget b = parse_budget(o.budget);
  const auto primes = m.n() > 1 ? nt::prime_divisors(m.n()) : std::vector<int64_t>{};
  if (primes.size() != 1 || m.order() == 1) throw InputError("system: module must be nonzero and p-primary");
  LiftedSystem s(m, parse_base(o, m, b), b);
  SystemTable t = system_table(s, s.basepoint());
  t.S = s.reduction().S();
  emit(table_to_json(t), o);
  return 0;
}

std::vector<SympAut> g_sample(const SympMod& m, uint64_t seed, size_t count) {
  if (m.order() == 1) return {SympAut::identity(m.group())};
  std::vector<SympAut> gs = {SympAut::identity(m.group())};
  for (const auto& g : sp_sample(m, seed, count)) gs.push_back(g);
  return gs;
}

int cmd_pi(const Options& o) {
  const SympMod m = load_module(o);
  const Budget b = parse_budget(o.budget);
  CanonicalRep pi(m, parse_base(o, m, b), b);
  emit(pi_to_json(pi_export(pi, g_sample(m, o.seed, 3))), o);
  return 0;
}

json gauss_entry(const AbGroup& l, const IntMat& form) {
  const CycNum g = gauss_sum(l, form);
  const CycNum g4 = g.pow(4);
  const CycNum want(static_cast<long>(l.order() * l.order()));
  return {{"orders", l.orders()}, {"form", form}, {"value", cyc_to_json(g)}, {"fourth_power", cyc_to_json(g4)},
          {"order_squared", l.order() * l.order()}, {"holds", g4 == want}};
}

json gauss_random(size_t count, int64_t max_order, uint64_t seed, bool& all) {
  std::mt19937_64 rng(seed);
  const auto groups = odd_abelian_groups(max_order);
  if (groups.empty()) throw InputError("gauss: --max-order admits no nontrivial odd group");
  json runs = json::array();
  all = true;
  for (size_t i = 0; i < count; ++i) {
    const AbGroup& l = groups[rng() % groups.size()];
    json e = gauss_entry(l, random_symmetric_form(l, rng));
    all = all && e["holds"].get<bool>();
    runs.push_back(e);
  }
  return runs;
}

int cmd_gauss(const Options& o) {
  if (!o.input.empty()) {
    const json j = read_json_file(o.input);
    const AbGroup l(j.at("orders").get<std::vector<int64_t>>());
    json e = gauss_entry(l, j.at("form").get<IntMat>());
    emit(e, o);
    return e["holds"].get<bool>() ? 0 : 1;
  }
  bool all = true;
  json runs = gauss_random(o.random_forms ? o.random_forms : 50, o.max_order, o.seed, all);
  emit({{"forms", runs.size()}, {"all_hold", all}, {"runs", runs}}, o);
  return all ? 0 : 1;
}

// ---------------------------------------------------------------- verify

json suite(const std::string& name, bool ok, json counts, const std::string& failure) {
  json j = {{"suite", name}, {"passed", ok}, {"counts", std::move(counts)}};
  if (!ok) j["first_failure"] = failure;
  return j;
}

int cmd_verify(const Options& o) {
  const SympMod m = load_module(o);
  const Budget b = parse_budget(o.budget);
  if (o.level != "quick" && o.level != "full") throw InputError("--level must be quick or full");
  const bool full = o.level == "full";
  json suites = json::array();
  bool all = true;
  auto add = [&](json s) {
    all = all && s["passed"].get<bool>();
    suites.push_back(std::move(s));
  };

  CanonicalRep pi(m, std::nullopt, b);
  const HeisGrp& h = pi.heis();

  {
    SvnReport r = verify_svn(pi, b, full);
    add(suite("stone_von_neumann", r.ok(),
              {{"lagrangians", r.lagrangians}, {"pairs", r.pairs}, {"orthogonality_sum", r.orthogonality_sum.to_string()}},
              r.failure));
  }

  std::mt19937_64 rng(o.seed);
  for (const auto& part : pi.parts()) {
    if (!part->sys) continue;
    const LiftedSystem& s = *part->sys;
    const SympMod& mp = part->mod;
    const std::string tag = "p=" + std::to_string(part->p);
    std::vector<SympAut> gs;
    if (full && mp.order() <= 25) gs = sp_enumerate(mp, b);
    else gs = sp_sample(mp, o.seed, full ? 20 : 3);
    const size_t nl = s.lagrangians().size();
    const size_t triples = full ? (nl * nl * nl <= 100000 ? 0 : 10000) : 200;
    SystemReport r = verify_family(s, gs, triples, o.seed);
    add(suite("canonical_system " + tag, r.ok(),
              {{"lagrangians", nl}, {"triples", r.triples}, {"equivariance_checks", r.equivariance_checks}}, r.failure));

    // reduction: S characteristic, lifts lagrangian
    const Reduction& red = s.reduction();
    bool ok = true;
    std::string fail;
    size_t autos = 0;
    for (const auto& g : sp_sample(mp, o.seed + 1, full ? 50 : 5)) {
      ++autos;
      if (!(g(red.S()) == red.S()) && ok) ok = false, fail = "S not fixed by " + g.to_string();
    }
    for (size_t t = 0; t < (full ? 50u : 5u); ++t) {
      ++autos;
      SympAut a = random_group_automorphism(mp.group(), rng);
      if (!(a(red.S()) == red.S()) && ok) ok = false, fail = "S not fixed by group automorphism " + a.to_string();
    }
    for (const auto& l : s.lagrangians())
      if (!is_lagrangian(mp, l) && ok) ok = false, fail = "lifted subgroup is not lagrangian";
    add(suite("reduction " + tag, ok,
              {{"automorphisms", autos}, {"S_order", red.S().order()}, {"Mc_order", red.mc().order()},
               {"exponent_chain", red.exponent_chain()}},
              fail));

    // uniqueness across basepoints
    std::vector<EnhLag> bases = s.enhanced();
    if (!(full && bases.size() <= 16)) {
      std::vector<EnhLag> pick;
      for (size_t t = 0; t < (full ? 3u : 2u); ++t) pick.push_back(bases[rng() % bases.size()]);
      bases = pick;
    }
    if (part->whole) {
      UniquenessReport u = uniqueness_probe(mp, bases, b);
      add(suite("uniqueness " + tag, u.ok, {{"builds", u.builds}, {"commutant_dim", u.commutant_dim}}, u.failure));
    }
  }

  {
    std::vector<SympAut> gs;
    if (m.order() == 1) gs = {SympAut::identity(m.group())};
    else if (full && m.order() <= 25) gs = sp_enumerate(m, b);
    else gs = sp_sample(m, o.seed + 2, full ? 8 : 3);
    std::vector<HElem> hs;
    if (full && h.order() <= 243) {
      hs = h.elements();
    } else {
      for (size_t t = 0; t < (full ? 12u : 4u); ++t) hs.push_back(h.element(rng() % static_cast<uint64_t>(h.order())));
    }
    WeilReport w = verify_weil(pi, gs, hs);
    add(suite("weil", w.ok(), {{"products", w.products}, {"conjugations", w.conjugations}}, w.failure));

    FieldReport f = field_report(pi, gs, h.order() > 4096 ? 512 : 0, o.seed);
    add(suite("field", f.entries_in_K && f.characters_in_Kprime, field_to_json(f),
              f.entries_in_K ? "character value outside Q(mu_n)" : "system entry outside K"));
  }

  {
    bool ok = true;
    json runs = gauss_random(full ? 50 : 10, 81, o.seed, ok);
    add(suite("gauss", ok, {{"forms", runs.size()}}, "G(L, b)^4 != |L|^2"));
  }

  emit({{"module_hash", module_hash(m)}, {"level", o.level}, {"seed", o.seed}, {"passed", all}, {"suites", suites}}, o);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical representation of a finite Heisenberg group"};
  app.require_subcommand(1);
  Options o;
  std::string spec;

  auto* standard = app.add_subcommand("standard", "write the standard module for a spec like 3^2:1+3^1:1");
  standard->add_option("spec", spec, "blocks p^k:d")->required();
  auto add_common = [&](CLI::App* c, bool input_required = true) {
    auto* opt = c->add_option("input", o.input, "module JSON file or inline standard spec");
    if (input_required) opt->required();
    c->add_option("--out", o.out, "output path (default stdout)");
    c->add_option("--budget", o.budget, "N or lagrangians=N,sp=N,elements=N");
    c->add_option("--seed", o.seed, "sampling seed");
  };
  standard->add_option("--out", o.out, "output path (default stdout)");
  auto* info = app.add_subcommand("info", "module summary and validation");
  add_common(info);
  auto* lags = app.add_subcommand("lagrangians", "enumerate lagrangian subgroups");
  add_common(lags);
  auto* reduce = app.add_subcommand("reduce", "canonical isotropic subgroup and reduced module");
  add_common(reduce);
  auto* system = app.add_subcommand("system", "canonical intertwining system");
  add_common(system);
  system->add_option("--base", o.base, "basepoint: index into the enhanced lagrangians, or a JSON file");
  auto* pi = app.add_subcommand("pi", "export the canonical representation");
  add_common(pi);
  pi->add_option("--base", o.base, "basepoint: index into the enhanced lagrangians, or a JSON file");
  auto* gauss = app.add_subcommand("gauss", "Gauss sum of a symmetric form, or random checks");
  add_common(gauss, false);
  gauss->add_option("--random", o.random_forms, "number of random forms");
  gauss->add_option("--max-order", o.max_order, "largest group order for random forms");
  auto* verify = app.add_subcommand("verify", "run the property suites");
  add_common(verify);
  verify->add_option("--level", o.level, "quick or full");
  bool full_flag = false;
  verify->add_flag("--full", full_flag, "same as --level full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*standard) {
      emit(module_to_json(parse_standard(spec)), o);
      return 0;
    }
    if (*info) return cmd_info(o);
    if (*lags) return cmd_lagrangians(o);
    if (*reduce) return cmd_reduce(o);
    if (*system) return cmd_system(o);
    if (*pi) return cmd_pi(o);
    if (*gauss) return cmd_gauss(o);
    if (*verify) {
      if (full_flag) o.level = "full";
      return cmd_verify(o);
    }
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << " (raise --budget)\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
