#pragma once

// The canonical representation pi of H x| Sp(M), realized on the basepoint
// model H_B of each primary part, and its verification suites.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "heis/parallel.hpp"
#include "heis/reduction.hpp"

namespace heis {

/// One primary factor: H_p with its lifted canonical system (absent when M_p = 0).
struct RepPart {
  int64_t p = 1, np = 1;
  bool whole = true;  // M is already p-primary: no coordinate change
  PrimaryPart coords;
  SympMod mod;
  std::unique_ptr<LiftedSystem> sys;
  size_t base = 0;
  int64_t unit = 1;  // (n / n_p)^{-1} mod n_p
  int64_t idem = 1;  // multiplication by idem projects M onto M_p

  size_t dim() const { return sys ? sys->induced(base).dim() : 1; }
  HElem to_part(const HElem& h) const {
    return {whole ? h.m : coords.restrict(scaled(h.m)), nt::mod(h.a * unit, np)};
  }
  SympAut to_part(const SympAut& g) const { return whole ? g : restrict_aut(coords, g); }

 private:
  Elem scaled(const Elem& m) const { return coords.mp.ambient().scale(idem, m); }
};

class CanonicalRep {
 public:
  /// `basepoint` (in the coordinates of M) is honoured when n is a prime power.
  explicit CanonicalRep(const SympMod& m, std::optional<EnhLag> basepoint = {}, const Budget& budget = default_budget())
      : h_(m) {
    if (m.n() % 2 == 0) throw InputError("even order is not supported");
    const auto primes = m.n() > 1 ? nt::prime_divisors(m.n()) : std::vector<int64_t>{};
    if (basepoint && primes.size() != 1) throw InputError("a basepoint can only be given for a p-primary module");
    for (int64_t p : primes) {
      auto part = std::make_unique<RepPart>();
      part->p = p;
      part->np = nt::ipow(p, nt::valuation(m.n(), p));
      part->whole = primes.size() == 1;
      if (part->whole) {
        part->mod = m;
      } else {
        part->coords = heis_primary(h_, p);
        part->mod = part->coords.hp.base();
      }
      part->unit = nt::inv_mod(nt::mod(m.n() / part->np, part->np), part->np);
      const int64_t e = m.group().exponent(), ep = nt::ipow(p, nt::valuation(e, p));
      part->idem = ep == 1 ? 0 : (e / ep) * nt::inv_mod(nt::mod(e / ep, ep), ep);
      if (part->mod.order() > 1) {
        part->sys = std::make_unique<LiftedSystem>(part->mod, basepoint, budget);
        part->base = part->sys->lag_index(part->sys->basepoint().lag);
      }
      parts_.push_back(std::move(part));
    }
  }

  const HeisGrp& heis() const { return h_; }
  const SympMod& module() const { return h_.base(); }
  int64_t n() const { return h_.n(); }
  const std::vector<std::unique_ptr<RepPart>>& parts() const { return parts_; }
  size_t dim() const {
    size_t d = 1;
    for (const auto& p : parts_) d *= p->dim();
    return d;
  }
  /// Basepoint of a p-primary module.
  EnhLag basepoint() const {
    if (parts_.size() != 1 || !parts_[0]->sys) throw InputError("basepoint: module is not a nonzero p-primary module");
    return parts_[0]->sys->basepoint();
  }

  MonoMatrix act(const HElem& h) const {
    MonoMatrix out = MonoMatrix::identity(1, std::max<int64_t>(n(), 1));
    for (const auto& p : parts_) {
      const HElem hp = p->to_part(h);
      out = kron(out, p->sys ? p->sys->induced(p->base).rho(hp) : MonoMatrix(p->np, std::vector<size_t>{0}, std::vector<int64_t>{hp.a}));
    }
    return out.lifted(std::max<int64_t>(n(), 1));
  }

  /// g acts by f_{B^0} -> g(f_{g^{-1}B^0}) = Tr_g F_{g^{-1}B^0, B^0} f_{B^0}.
  ScaledMatrix act(const SympAut& g) const {
    ScaledMatrix out{CycNum(1L), RootMatrix::identity(1, 1)};
    for (const auto& p : parts_) out = kron(out, part_action(*p, p->to_part(g)));
    return {out.scalar, out.base.lifted(nt::lcm(out.base.order(), std::max<int64_t>(n(), 1)))};
  }

  /// rho(h) rho(g)
  ScaledMatrix act(const HElem& h, const SympAut& g) const {
    const ScaledMatrix w = act(g);
    return {w.scalar, act(h) * w.base};
  }

  CycNum character(const HElem& h) const { return act(h).trace(); }
  CycNum character(const HElem& h, const SympAut& g) const { return act(h, g).trace(); }

 private:
  static ScaledMatrix part_action(const RepPart& p, const SympAut& g) {
    if (!p.sys) return {CycNum(1L), RootMatrix::identity(1, p.np)};
    const LiftedSystem& s = *p.sys;
    const EnhLag b0 = s.basepoint();
    const EnhLag l0 = s.act(g.inverse(), b0);
    const size_t il = s.lag_index(l0.lag);
    const MonoMatrix tr = s.induced(il).transport_to(g, s.induced(p.base));
    return {s.scalar(l0, b0), tr * s.T(il, p.base)};
  }

  HeisGrp h_;
  std::vector<std::unique_ptr<RepPart>> parts_;
};

inline CanonicalRep build_pi(const SympMod& m, std::optional<EnhLag> basepoint = {}, const Budget& budget = default_budget()) {
  return CanonicalRep(m, basepoint, budget);
}

// ---------------------------------------------------------------- verification

struct SvnReport {
  bool dimension = true, irreducible = true, commutant = true, pairwise = true, pi_iso = true, central = true;
  CycNum orthogonality_sum;
  size_t lagrangians = 0, pairs = 0;
  std::string failure;
  bool ok() const { return dimension && irreducible && commutant && pairwise && pi_iso && central; }
};

/// (1/|H|) sum_h chi(h) conj(chi(h)), with conj the Galois automorphism z -> z^{-1}.
inline CycNum orthogonality_sum(const CanonicalRep& pi) {
  const HeisGrp& h = pi.heis();
  const size_t total = static_cast<size_t>(h.order());
  std::vector<CycNum> vals(total);
  parallel_for(total, [&](size_t i) {
    const CycNum c = pi.character(h.element(i));
    vals[i] = c * c.conj();
  });
  CycNum acc(0L);
  for (const auto& v : vals) acc += v;
  return acc / CycNum(static_cast<long>(total));
}

/// Stone-von Neumann checks: every H_L irreducible, all pairwise isomorphic,
/// pi isomorphic to them, dim = sqrt|M|, character orthogonality sum = 1,
/// central character tautological.
inline SvnReport verify_svn(const CanonicalRep& pi, const Budget& budget = default_budget(), bool all_pairs = true) {
  SvnReport rep;
  const HeisGrp& h = pi.heis();
  const SympMod& m = pi.module();
  auto fail = [&](bool& flag, const std::string& what) {
    if (flag && rep.failure.empty()) rep.failure = what;
    flag = false;
  };
  if (static_cast<int64_t>(pi.dim()) != m.half_order()) fail(rep.dimension, "dim pi != sqrt|M|");
  for (int64_t a = 0; a < h.n(); ++a) {
    RootMatrix z(pi.dim(), pi.dim(), h.n());
    for (size_t i = 0; i < pi.dim(); ++i) z.add(i, i, a);
    if (pi.act(h.central(a)).to_root() != z) fail(rep.central, "central character is not tautological at a = " + std::to_string(a));
  }
  rep.orthogonality_sum = orthogonality_sum(pi);
  if (!rep.orthogonality_sum.is_one()) fail(rep.irreducible, "character orthogonality sum is " + rep.orthogonality_sum.to_string());
  if (m.order() > 1) {
    const auto lags = enumerate_lagrangians(m, budget);
    rep.lagrangians = lags.size();
    std::vector<std::vector<MonoMatrix>> gens;
    for (const auto& l : lags) gens.push_back(InducedModule(h, l).generator_matrices());
    std::vector<MonoMatrix> pig;
    for (const auto& g : h.generators()) pig.push_back(pi.act(g));
    for (size_t i = 0; i < lags.size(); ++i) {
      if (hom_dim(gens[i], gens[i]) != 1) fail(rep.commutant, "commutant of H_L is not 1-dimensional");
      if (hom_dim(pig, gens[i]) != 1) fail(rep.pi_iso, "pi is not isomorphic to H_L");
      for (size_t j = all_pairs ? i + 1 : lags.size(); j < lags.size(); ++j) {
        ++rep.pairs;
        if (hom_dim(gens[i], gens[j]) != 1) fail(rep.pairwise, "Hom(H_L, H_N) is not 1-dimensional");
      }
    }
  }
  return rep;
}

struct UniquenessReport {
  bool ok = true;
  size_t builds = 0, commutant_dim = 0;
  std::string failure;
};

/// Rebuild each primary system from the given basepoints (M-coordinates, p-primary
/// M only) and require identical coherence tables; require End_H(pi) = K.
inline UniquenessReport uniqueness_probe(const SympMod& m, const std::vector<EnhLag>& basepoints,
                                         const Budget& budget = default_budget()) {
  UniquenessReport rep;
  CanonicalRep pi(m, std::nullopt, budget);
  std::vector<MonoMatrix> pig;
  for (const auto& g : pi.heis().generators()) pig.push_back(pi.act(g));
  rep.commutant_dim = hom_dim(pig, pig);
  if (rep.commutant_dim != 1) {
    rep.ok = false;
    rep.failure = "End_H(pi) is not the scalars";
  }
  for (const auto& part : pi.parts()) {
    if (!part->sys) continue;
    const auto ref = part->sys->coherence_table();
    for (const auto& b : basepoints) {
      if (!part->whole) break;
      ++rep.builds;
      LiftedSystem other(part->mod, b, budget);
      if (other.coherence_table() != ref) {
        rep.ok = false;
        if (rep.failure.empty()) rep.failure = "coherence table differs for basepoint " + b.key();
      }
    }
  }
  return rep;
}

struct FieldReport {
  bool entries_in_K = true;       // every system entry lies in K
  bool entries_in_Kprime = true;  // ... and in Q(mu_n): the system descends to K'
  bool characters_in_Kprime = true;
  size_t entries = 0, entries_outside_Kprime = 0, characters = 0;
  int64_t max_conductor = 1;
};

/// Field diagnostics over every entry of every F_{N^0,L^0} of each primary
/// system, and characters of pi on all of H and on (h, g) for the given g.
inline FieldReport field_report(const CanonicalRep& pi, const std::vector<SympAut>& gs, size_t h_samples = 0,
                                uint64_t seed = 1) {
  FieldReport rep;
  for (const auto& part : pi.parts()) {
    if (!part->sys) continue;
    const LiftedSystem& s = *part->sys;
    const size_t nl = s.lagrangians().size();
    for (size_t a = 0; a < nl; ++a)
      for (size_t b = 0; b < nl; ++b) {
        const CycNum sc = s.scalar({s.lagrangians()[a], 1}, {s.lagrangians()[b], 1});
        const RootMatrix& t = s.T(a, b);
        for (size_t i = 0; i < t.rows(); ++i)
          for (size_t j = 0; j < t.cols(); ++j) {
            if (t.entry_is_zero(i, j)) continue;
            const CycNum e = sc * t.entry(i, j);
            ++rep.entries;
            rep.max_conductor = std::max(rep.max_conductor, min_conductor(e));
            if (!in_field_K(e, part->np)) rep.entries_in_K = false;
            if (!in_cyclotomic_subfield(e, part->np)) {
              rep.entries_in_Kprime = false;
              ++rep.entries_outside_Kprime;
            }
          }
      }
  }
  const HeisGrp& h = pi.heis();
  const int64_t n = std::max<int64_t>(h.n(), 1);
  std::vector<HElem> hs;
  if (h_samples == 0) {
    hs = h.elements();
  } else {
    std::mt19937_64 rng(seed);
    for (size_t i = 0; i < h_samples; ++i) hs.push_back(h.element(rng() % static_cast<uint64_t>(h.order())));
  }
  for (const auto& x : hs) {
    ++rep.characters;
    if (!in_cyclotomic_subfield(pi.character(x), n)) rep.characters_in_Kprime = false;
  }
  for (const auto& g : gs) {
    const ScaledMatrix w = pi.act(g);
    for (size_t k = 0; k < std::min<size_t>(hs.size(), 8); ++k) {
      ++rep.characters;
      if (!in_cyclotomic_subfield(w.scalar * (pi.act(hs[k]) * w.base).trace(), n)) rep.characters_in_Kprime = false;
    }
  }
  return rep;
}

struct WeilReport {
  bool multiplicative = true, semidirect = true, heisenberg = true;
  size_t products = 0, conjugations = 0;
  std::string failure;
  bool ok() const { return multiplicative && semidirect && heisenberg; }
};

/// rho(g1) rho(g2) = rho(g1 g2), rho(g) rho(h) rho(g)^{-1} = rho(g.h), and
/// rho(h1) rho(h2) = rho(h1 h2) on the given sets.
inline WeilReport verify_weil(const CanonicalRep& pi, const std::vector<SympAut>& gs, const std::vector<HElem>& hs) {
  WeilReport rep;
  const HeisGrp& h = pi.heis();
  std::vector<ScaledMatrix> w;
  for (const auto& g : gs) w.push_back(pi.act(g));
  for (size_t i = 0; i < gs.size(); ++i)
    for (size_t j = 0; j < gs.size(); ++j) {
      ++rep.products;
      if (!(w[i] * w[j] == pi.act(gs[i] * gs[j])) && rep.multiplicative) {
        rep.multiplicative = false;
        if (rep.failure.empty()) rep.failure = "rho(g1) rho(g2) != rho(g1 g2) for g1 = " + gs[i].to_string() + ", g2 = " + gs[j].to_string();
      }
    }
  for (size_t i = 0; i < gs.size(); ++i)
    for (const auto& x : hs) {
      ++rep.conjugations;
      // rho(g) rho(h) = rho(g.h) rho(g)
      const RootMatrix lhs = w[i].base * pi.act(x);
      const RootMatrix rhs = pi.act(h.act(gs[i], x)) * w[i].base;
      if (lhs != rhs && rep.semidirect) {
        rep.semidirect = false;
        if (rep.failure.empty()) rep.failure = "semidirect relation fails for g = " + gs[i].to_string();
      }
    }
  for (const auto& x : hs)
    for (const auto& y : hs)
      if (pi.act(x) * pi.act(y) != pi.act(h.mul(x, y)) && rep.heisenberg) {
        rep.heisenberg = false;
        if (rep.failure.empty()) rep.failure = "rho is not multiplicative on H";
      }
  return rep;
}

}  // namespace heis
