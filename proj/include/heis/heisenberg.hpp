#pragma once

// The Heisenberg group H = M x Z/n with (m1, a1)(m2, a2) = (m1 + m2, a1 + a2 + beta(m1, m2)),
// and the induced modules H_L realized on lex-minimal coset representatives of M/L.

#include <cstdint>
#include <string>
#include <vector>

#include "heis/matrix.hpp"
#include "heis/symplectic.hpp"

namespace heis {

/// (m, a) with a the exponent of zeta_n.
struct HElem {
  Elem m;
  int64_t a = 0;
  friend bool operator==(const HElem& x, const HElem& y) { return x.a == y.a && x.m == y.m; }
  friend bool operator<(const HElem& x, const HElem& y) { return x.m != y.m ? x.m < y.m : x.a < y.a; }
};

class HeisGrp {
 public:
  HeisGrp() = default;
  explicit HeisGrp(SympMod base) : base_(std::move(base)) {}

  const SympMod& base() const { return base_; }
  const AbGroup& group() const { return base_.group(); }
  int64_t n() const { return base_.n(); }
  int64_t order() const { return base_.n() * base_.order(); }

  HElem identity() const { return {group().zero(), 0}; }
  HElem central(int64_t a) const { return {group().zero(), nt::mod(a, n())}; }
  HElem lift(const Elem& m) const { return {m, 0}; }

  HElem mul(const HElem& x, const HElem& y) const {
    return {group().add(x.m, y.m), nt::mod(x.a + y.a + base_.beta(x.m, y.m), n())};
  }
  HElem inv(const HElem& x) const { return {group().neg(x.m), nt::mod(-x.a, n())}; }
  HElem sigma(const HElem& x) const { return {group().neg(x.m), x.a}; }
  HElem commutator(const HElem& x, const HElem& y) const { return mul(mul(x, y), mul(inv(x), inv(y))); }
  HElem act(const SympAut& g, const HElem& x) const { return {g(x.m), x.a}; }

  size_t index(const HElem& x) const { return group().index(x.m) * static_cast<size_t>(n()) + static_cast<size_t>(x.a); }
  HElem element(size_t idx) const {
    return {group().element(idx / static_cast<size_t>(n())), static_cast<int64_t>(idx % static_cast<size_t>(n()))};
  }
  std::vector<HElem> elements() const {
    std::vector<HElem> out;
    for (size_t i = 0; i < static_cast<size_t>(order()); ++i) out.push_back(element(i));
    return out;
  }

  /// (e_i, 0) for each basis vector, then (0, 1).
  std::vector<HElem> generators() const {
    std::vector<HElem> g;
    for (size_t i = 0; i < group().rank(); ++i) g.push_back(lift(group().basis(i)));
    g.push_back(central(1));
    return g;
  }

 private:
  SympMod base_;
};

/// H_p inside H: M_p in invariant-factor coordinates, centre Z/n_p with
/// a_p -> (n / n_p) a_p.
struct PrimaryPart {
  int64_t p = 0;
  int64_t np = 1;
  HeisGrp hp;
  Subgroup mp;  // M_p inside M
  Quotient coords;

  Elem embed(const Elem& x) const { return coords.section(x); }
  Elem restrict(const Elem& m) const { return coords.project(m); }
  int64_t cofactor(int64_t n) const { return n / np; }
};

inline PrimaryPart heis_primary(const HeisGrp& h, int64_t p) {
  const SympMod& m = h.base();
  const int64_t np = nt::ipow(p, nt::valuation(m.n(), p));
  Subgroup mp = primary_component(m.group(), p);
  Quotient q(mp, Subgroup::trivial(m.group()));
  const AbGroup& g = q.group();
  const int64_t scale = m.n() / np;
  IntMat gram(g.rank(), Elem(g.rank()));
  for (size_t i = 0; i < g.rank(); ++i)
    for (size_t j = 0; j < g.rank(); ++j) {
      const int64_t v = m.pair(q.section(g.basis(i)), q.section(g.basis(j)));
      if (v % scale != 0) throw DefectError("heis_primary: pairing on M_p not divisible by n/n_p");
      gram[i][j] = v / scale;
    }
  return PrimaryPart{p, np, HeisGrp(SympMod(g, np, gram)), mp, q};
}

/// H_L on the right-translation model. theta(l) = zeta_n^{<w, l>}; w = 0 gives
/// the trivial extension of the tautological character.
class InducedModule {
 public:
  InducedModule() = default;
  InducedModule(const HeisGrp& h, Subgroup lag, Elem theta_w = {})
      : h_(h), lag_(std::move(lag)), w_(theta_w.empty() ? h.group().zero() : std::move(theta_w)) {
    const SympMod& m = h_.base();
    if (!is_lagrangian(m, lag_)) throw InputError("induce: subgroup is not lagrangian");
    reps_ = lag_.coset_reps();
    radix_.resize(m.rank());
    for (size_t i = 0; i < m.rank(); ++i) radix_[i] = lag_.hnf()[i][i];
    const size_t size = static_cast<size_t>(m.order());
    coset_.resize(size);
    phase_.resize(size);
    for (size_t idx = 0; idx < size; ++idx) {
      const Elem x = m.group().element(idx);
      const Elem r = lag_.coset_rep(x);
      const Elem l = m.group().sub(x, r);
      coset_[idx] = static_cast<uint32_t>(rep_index(r));
      phase_[idx] = nt::mod(-m.beta(l, r) + m.pair(w_, l), m.n());
    }
  }

  const HeisGrp& grp() const { return h_; }
  const SympMod& base() const { return h_.base(); }
  const Subgroup& lag() const { return lag_; }
  const Elem& theta() const { return w_; }
  size_t dim() const { return reps_.size(); }
  int64_t n() const { return h_.n(); }
  const std::vector<Elem>& reps() const { return reps_; }

  size_t rep_index(const Elem& r) const {
    size_t idx = 0;
    for (size_t i = 0; i < r.size(); ++i) idx = idx * static_cast<size_t>(radix_[i]) + static_cast<size_t>(r[i]);
    return idx;
  }
  size_t coset(const Elem& m) const { return coset_[base().group().index(m)]; }
  int64_t phase(const Elem& m) const { return phase_[base().group().index(m)]; }

  /// Value of the basis function f_r at (m, a).
  std::pair<size_t, int64_t> basis_value(const HElem& x) const {
    return {coset(x.m), nt::mod(x.a + phase(x.m), n())};
  }

  /// chi_L(l, a) exponent.
  int64_t chi(const HElem& lbar) const {
    if (!lag_.contains(lbar.m)) throw InputError("chi_L: element not in L-bar");
    return nt::mod(lbar.a + base().pair(w_, lbar.m), n());
  }

  /// (h f)(x) = f(x h) in the coset basis.
  MonoMatrix rho(const HElem& h) const {
    const SympMod& m = base();
    std::vector<size_t> cols(dim());
    std::vector<int64_t> exps(dim());
    for (size_t i = 0; i < dim(); ++i) {
      const Elem& r = reps_[i];
      const Elem rm = m.group().add(r, h.m);
      const size_t idx = m.group().index(rm);
      cols[i] = coset_[idx];
      exps[i] = h.a + m.beta(r, h.m) + phase_[idx];
    }
    return MonoMatrix(n(), cols, exps);
  }

  std::vector<MonoMatrix> generator_matrices() const {
    std::vector<MonoMatrix> out;
    for (const auto& g : h_.generators()) out.push_back(rho(g));
    return out;
  }

  /// (g f)(x) = f(g^{-1} x): the isomorphism H_L -> H_{gL}, as a matrix from
  /// this module's basis to `target`'s basis.
  MonoMatrix transport_to(const SympAut& g, const InducedModule& target) const {
    const SympAut gi = g.inverse();
    std::vector<size_t> cols(target.dim());
    std::vector<int64_t> exps(target.dim());
    for (size_t i = 0; i < target.dim(); ++i) {
      const Elem y = gi(target.reps_[i]);
      const size_t idx = base().group().index(y);
      cols[i] = coset_[idx];
      exps[i] = phase_[idx];
    }
    return MonoMatrix(n(), cols, exps);
  }

  InducedModule transported(const SympAut& g) const { return InducedModule(h_, g(lag_), g(w_)); }

 private:
  HeisGrp h_;
  Subgroup lag_;
  Elem w_;
  std::vector<Elem> reps_;
  std::vector<int64_t> radix_;
  std::vector<uint32_t> coset_;
  std::vector<int64_t> phase_;
};

/// Transport matrix H_L -> H_{gL} together with the target module.
struct Transport {
  InducedModule target;
  MonoMatrix matrix;
};

inline Transport g_transport(const SympAut& g, const InducedModule& v) {
  InducedModule t = v.transported(g);
  MonoMatrix mat = v.transport_to(g, t);
  return {std::move(t), std::move(mat)};
}

}  // namespace heis
