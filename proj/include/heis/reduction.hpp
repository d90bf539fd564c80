#pragma once

// Reduction of a p-primary module to the F_p-space M_c = S^perp / S through the
// canonical isotropic subgroup S, and lifting of the canonical system.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heis/intertwine.hpp"

namespace heis {

struct IsotropicChain {
  Subgroup s;
  std::vector<int64_t> exponent_chain;  // r_s at each recursion level
};

inline int64_t single_prime(const SympMod& m) {
  if (m.order() == 1) return 0;
  auto ps = nt::prime_divisors(m.order());
  if (ps.size() != 1) throw InputError("module is not p-primary");
  return ps.front();
}

inline IsotropicChain canonical_isotropic_chain(const SympMod& m) {
  const int64_t p = single_prime(m);
  if (p == 0) return {Subgroup::trivial(m.group()), {0}};
  const int64_t r = nt::valuation(m.group().exponent(), p);
  if (r <= 1) return {Subgroup::trivial(m.group()), {r}};
  const int64_t rp = (r + 1) / 2;
  const Subgroup s1 = Subgroup::whole(m.group()).scaled(nt::ipow(p, rp));
  const InducedForm f1 = induced_form(m, s1);
  if (f1.mc.group().exponent() >= m.group().exponent()) throw DefectError("canonical_isotropic: exponent did not drop");
  IsotropicChain sub = canonical_isotropic_chain(f1.mc);
  std::vector<Elem> gens = s1.gens();
  for (const auto& g : sub.s.gens()) gens.push_back(f1.lift(g));
  IsotropicChain out{Subgroup::from_gens(m.group(), gens), {r}};
  out.exponent_chain.insert(out.exponent_chain.end(), sub.exponent_chain.begin(), sub.exponent_chain.end());
  return out;
}

/// S: isotropic, fixed by Aut(M, omega), with S^perp / S elementary.
inline Subgroup canonical_isotropic(const SympMod& m) { return canonical_isotropic_chain(m).s; }

/// M, S, M_c = S^perp / S over F_p and the maps between them. The reduced
/// Heisenberg group H_c = M_c x Z/p receives H^S = S^perp x Z/n through the
/// pushout M_c x Z/n (cocycle (n/p) beta_c), into which H_c embeds by
/// (m, c) -> (m, (n/p) c).
class Reduction {
 public:
  explicit Reduction(const SympMod& m) : m_(m) {
    p_ = single_prime(m);
    if (p_ == 0) p_ = m.n() > 1 ? nt::prime_divisors(m.n()).front() : 1;
    IsotropicChain c = canonical_isotropic_chain(m);
    chain_ = c.exponent_chain;
    form_ = induced_form(m, c.s, p_);
    if (!form_.mc.is_elementary() && form_.mc.order() != 1) throw DefectError("reduction: S^perp/S is not elementary");
    hc_ = HeisGrp(form_.mc);
  }

  const SympMod& module() const { return m_; }
  int64_t p() const { return p_; }
  int64_t scale() const { return form_.scale; }  // n / p
  const Subgroup& S() const { return form_.s; }
  const Subgroup& perp() const { return form_.perp; }
  const SympMod& mc() const { return form_.mc; }
  const HeisGrp& hc() const { return hc_; }
  const InducedForm& form() const { return form_; }
  const std::vector<int64_t>& exponent_chain() const { return chain_; }

  Elem project(const Elem& m) const { return form_.project(m); }
  Elem section(const Elem& mc) const { return form_.lift(mc); }

  bool in_HS(const HElem& x) const { return form_.perp.contains(x.m); }

  /// H^S -> M_c x Z/n, (m, a) -> (m mod S, a).
  HElem alpha(const HElem& x) const {
    if (!in_HS(x)) throw InputError("alpha: element is not in H^S");
    return {project(x.m), x.a};
  }
  HElem pushout_mul(const HElem& x, const HElem& y) const {
    return {mc().group().add(x.m, y.m), nt::mod(x.a + y.a + scale() * mc().beta(x.m, y.m), m_.n())};
  }
  HElem embed_hc(const HElem& xc) const { return {xc.m, nt::mod(scale() * xc.a, m_.n())}; }
  /// An element of H^S over a given element of H_c.
  HElem lift_hc(const HElem& xc) const { return {section(xc.m), nt::mod(scale() * xc.a, m_.n())}; }

  Subgroup lag_lift(const Subgroup& lc) const {
    std::vector<Elem> gens = S().gens();
    for (const auto& g : lc.gens()) gens.push_back(section(g));
    return Subgroup::from_gens(m_.group(), gens);
  }
  Subgroup lag_project(const Subgroup& l) const {
    if (!(S() + l == l) || !(perp() + l == perp())) throw InputError("lag_project: subgroup does not lie between S and S^perp");
    std::vector<Elem> gens;
    for (const auto& g : l.gens()) gens.push_back(project(g));
    return Subgroup::from_gens(mc().group(), gens);
  }

  SympAut g_to_gc(const SympAut& g) const {
    if (!(g(S()) == S())) throw DefectError("g_to_gc: automorphism does not preserve S");
    std::vector<Elem> images;
    for (size_t i = 0; i < mc().rank(); ++i) images.push_back(project(g(section(mc().group().basis(i)))));
    return SympAut::from_images(mc().group(), images);
  }

  /// tau_{L_c}: H_{L_c} -> (H_L)^S, f -> (f o alpha) extended by zero, as a
  /// matrix from vc's basis to vl's basis.
  RootMatrix tau(const InducedModule& vc, const InducedModule& vl) const {
    RootMatrix t(vl.dim(), vc.dim(), m_.n());
    for (size_t i = 0; i < vl.dim(); ++i) {
      const Elem& r = vl.reps()[i];
      if (!perp().contains(r)) continue;
      const Elem rb = project(r);
      t.add(i, vc.coset(rb), scale() * vc.phase(rb));
    }
    return t;
  }

 private:
  SympMod m_;
  int64_t p_ = 1;
  std::vector<int64_t> chain_;
  InducedForm form_;
  HeisGrp hc_;
};

/// The family F_{N^0,L^0} over lagrangians S <= L <= S^perp of a p-primary
/// module, lifted from the canonical system on M_c: the unique intertwiner
/// H_L -> H_N agreeing with tau_N F^c tau_L^{-1} on S-invariants.
class LiftedSystem {
 public:
  explicit LiftedSystem(const SympMod& m, std::optional<EnhLag> basepoint = {}, const Budget& budget = default_budget())
      : red_(m), h_(m) {
    EnhLag bc;
    if (basepoint) {
      bc = {red_.lag_project(basepoint->lag), basepoint->eps};
    } else {
      auto lc = enumerate_lagrangians(red_.mc(), budget);
      bc = {lc.front(), 1};
    }
    sys_ = std::make_unique<CanonicalSystem>(red_.mc(), bc, budget);
    const size_t nl = sys_->lagrangians().size();
    for (size_t i = 0; i < nl; ++i) {
      lags_.push_back(red_.lag_lift(sys_->lagrangians()[i]));
      index_[lags_.back().hnf()] = i;
      modules_.emplace_back(h_, lags_.back());
      taus_.push_back(red_.tau(sys_->induced(i), modules_.back()));
    }
    table_.resize(nl * nl);
    for (size_t a = 0; a < nl; ++a)
      for (size_t b = 0; b < nl; ++b) {
        auto kappa = proportionality(taus_[a] * sys_->T(a, b), T(a, b) * taus_[b]);
        if (!kappa) throw DefectError("lift: tau_N T^c is not proportional to T tau_L on S-invariants");
        table_[a * nl + b] = sys_->scalar({sys_->lagrangians()[a], 1}, {sys_->lagrangians()[b], 1}) * *kappa;
      }
  }
  LiftedSystem(LiftedSystem&&) = default;

  const SympMod& module() const { return red_.module(); }
  const Reduction& reduction() const { return red_; }
  const CanonicalSystem& reduced() const { return *sys_; }
  const HeisGrp& heis() const { return h_; }
  const std::vector<Subgroup>& lagrangians() const { return lags_; }
  const InducedModule& induced(size_t i) const { return modules_[i]; }
  const RootMatrix& tau(size_t i) const { return taus_[i]; }
  size_t lag_index(const Subgroup& l) const {
    auto it = index_.find(l.hnf());
    if (it == index_.end()) throw InputError("lifted system: lagrangian does not lie between S and S^perp");
    return it->second;
  }
  EnhLag basepoint() const {
    const EnhLag& b = sys_->basepoint();
    return {red_.lag_lift(b.lag), b.eps};
  }
  std::vector<EnhLag> enhanced() const {
    std::vector<EnhLag> out;
    for (const auto& l : lags_) {
      out.push_back({l, 1});
      out.push_back({l, -1});
    }
    return out;
  }

  EnhLag act(const SympAut& g, const EnhLag& e) const {
    if (red_.mc().order() == 1) return {g(e.lag), e.eps};
    const EnhLag ec{red_.lag_project(e.lag), e.eps};
    const EnhLag r = act_enhanced(red_.mc(), red_.g_to_gc(g), ec);
    return {red_.lag_lift(r.lag), r.eps};
  }

  const RootMatrix& T(size_t in, size_t il) const {
    auto key = std::make_pair(in, il);
    auto it = tcache_.find(key);
    if (it == tcache_.end()) it = tcache_.emplace(key, standard_T(modules_[in], modules_[il])).first;
    return it->second;
  }
  CycNum scalar(const EnhLag& n0, const EnhLag& l0) const {
    const CycNum& s = table_[lag_index(n0.lag) * lags_.size() + lag_index(l0.lag)];
    return n0.eps * l0.eps == 1 ? s : -s;
  }
  ScaledMatrix op(const EnhLag& n0, const EnhLag& l0) const {
    return {scalar(n0, l0), T(lag_index(n0.lag), lag_index(l0.lag))};
  }

  /// scalar(L^0, R^0) for every enhanced L^0, with R^0 the first lagrangian
  /// with its + lift.
  std::vector<std::pair<std::string, CycNum>> coherence_table() const {
    std::vector<std::pair<std::string, CycNum>> out;
    const EnhLag r0{lags_[0], 1};
    for (const auto& e : enhanced()) out.emplace_back(e.key(), scalar(e, r0));
    return out;
  }

 private:
  Reduction red_;
  HeisGrp h_;
  std::unique_ptr<CanonicalSystem> sys_;
  std::vector<Subgroup> lags_;
  std::map<IntMat, size_t> index_;
  std::vector<InducedModule> modules_;
  std::vector<RootMatrix> taus_;
  std::vector<CycNum> table_;
  mutable std::map<std::pair<size_t, size_t>, RootMatrix> tcache_;
};

/// g restricted to M_p, in the coordinates of the primary part.
inline SympAut restrict_aut(const PrimaryPart& pp, const SympAut& g) {
  const AbGroup& gp = pp.hp.group();
  std::vector<Elem> images;
  for (size_t i = 0; i < gp.rank(); ++i) images.push_back(pp.restrict(g(pp.embed(gp.basis(i)))));
  return SympAut::from_images(gp, images);
}

}  // namespace heis
