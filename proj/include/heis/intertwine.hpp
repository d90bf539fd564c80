#pragma once

// Averaging intertwiners T_{N,L}: H_L -> H_N, Hom-space dimensions, kernels,
// and the canonical system {F_{N^0,L^0}} over an elementary abelian module.

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "heis/heisenberg.hpp"

namespace heis {

/// (T f)(h) = sum over n in N / (N cap L) of chi_N(n)^{-1} f(n h), as a matrix
/// from the basis of vl to the basis of vn. Both modules use trivial theta.
inline RootMatrix standard_T(const InducedModule& vn, const InducedModule& vl) {
  const SympMod& m = vn.base();
  const Elem zero = m.group().zero();
  if (vn.theta() != zero || vl.theta() != zero) throw InputError("standard_T: modules must use the trivial extension of chi");
  const Subgroup inter = vn.lag().intersect(vl.lag());
  std::vector<Elem> nreps;
  for (const auto& x : vn.lag().elements())
    if (inter.coset_rep(x) == x) nreps.push_back(x);
  RootMatrix t(vn.dim(), vl.dim(), m.n());
  for (size_t i = 0; i < vn.dim(); ++i) {
    const Elem& r = vn.reps()[i];
    for (const auto& nn : nreps) {
      const Elem y = m.group().add(nn, r);
      t.add(i, vl.coset(y), m.beta(nn, r) + vl.phase(y));
    }
  }
  if (t.is_zero()) throw DefectError("standard_T: averaging operator vanished");
  return t;
}

// ---------------------------------------------------------------- Hom-space dimension

/// dim Hom_H(V, W) for monomial representations given on a common generating
/// set. Each equation X rho_V(h) = rho_W(h) X ties two unknowns by a root of
/// unity, so the solution space splits over connected components; a component
/// contributes 1 iff its cycle holonomy is trivial.
inline size_t hom_dim(const std::vector<MonoMatrix>& rv, const std::vector<MonoMatrix>& rw) {
  if (rv.size() != rw.size() || rv.empty()) throw InputError("hom_dim: generator lists differ");
  const size_t dv = rv[0].dim(), dw = rw[0].dim();
  const int64_t n = rv[0].order();
  const size_t u = dv * dw;
  std::vector<size_t> parent(u);
  std::vector<int64_t> pot(u, 0);
  std::vector<char> bad(u, 0);
  for (size_t i = 0; i < u; ++i) parent[i] = i;
  auto find = [&](size_t x) {
    int64_t acc = 0;
    size_t r = x;
    while (parent[r] != r) {
      acc += pot[r];
      r = parent[r];
    }
    // path compression
    int64_t rest = acc;
    while (parent[x] != x) {
      const size_t nx = parent[x];
      const int64_t px = pot[x];
      parent[x] = r;
      pot[x] = nt::mod(rest, n);
      rest -= px;
      x = nx;
    }
    return std::make_pair(r, nt::mod(acc, n));
  };
  for (size_t g = 0; g < rv.size(); ++g) {
    const MonoMatrix& a = rv[g];
    const MonoMatrix& b = rw[g];
    if (a.order() != n || b.order() != n) throw InputError("hom_dim: mixed root orders");
    for (size_t i = 0; i < dw; ++i)
      for (size_t k = 0; k < dv; ++k) {
        // X[i][k] = zeta^{b_i - a_k} X[tau(i)][sigma(k)]
        const size_t x = i * dv + k, y = b.col(i) * dv + a.col(k);
        const int64_t c = nt::mod(b.exp(i) - a.exp(k), n);
        auto [rx, px] = find(x);
        auto [ry, py] = find(y);
        const int64_t diff = nt::mod(c + py - px, n);
        if (rx == ry) {
          if (diff != 0) bad[rx] = 1;
        } else {
          parent[rx] = ry;
          pot[rx] = diff;
          bad[ry] = static_cast<char>(bad[ry] | bad[rx]);
        }
      }
  }
  size_t dim = 0;
  for (size_t i = 0; i < u; ++i)
    if (parent[i] == i && !bad[i]) ++dim;
  return dim;
}

inline size_t hom_dim(const InducedModule& v, const InducedModule& w) {
  return hom_dim(v.generator_matrices(), w.generator_matrices());
}

/// Same dimension by dense Gaussian elimination over the cyclotomic field.
inline size_t hom_dim_dense(const std::vector<CycMatrix>& rv, const std::vector<CycMatrix>& rw) {
  const size_t dv = rv[0].rows(), dw = rw[0].rows(), u = dv * dw;
  CycMatrix sys(rv.size() * u, u);
  size_t row = 0;
  for (size_t g = 0; g < rv.size(); ++g)
    for (size_t i = 0; i < dw; ++i)
      for (size_t j = 0; j < dv; ++j, ++row) {
        // (X A - B X)_{ij} = sum_r X_{ir} A_{rj} - sum_r B_{ir} X_{rj}
        for (size_t r = 0; r < dv; ++r)
          if (!rv[g](r, j).is_zero()) sys(row, i * dv + r) += rv[g](r, j);
        for (size_t r = 0; r < dw; ++r)
          if (!rw[g](i, r).is_zero()) sys(row, r * dv + j) -= rw[g](i, r);
      }
  return u - sys.rank();
}

/// delta(N, L) with T_{L,N} T_{N,L} = delta * id.
inline CycNum composition_scalar(const InducedModule& vl, const InducedModule& vn) {
  RootMatrix prod = standard_T(vl, vn) * standard_T(vn, vl);
  auto r = proportionality(prod, RootMatrix::identity(vl.dim(), vl.n()));
  if (!r) throw DefectError("composition_scalar: T_{L,N} T_{N,L} is not scalar");
  return *r;
}

// ---------------------------------------------------------------- kernels

/// Function H -> K, indexed by HeisGrp::index.
struct Kernel {
  std::vector<CycNum> values;
};

namespace detail {

inline std::optional<CycNum> proportional_to(const CycMatrix& f, const RootMatrix& t) {
  for (size_t i = 0; i < t.rows(); ++i)
    for (size_t j = 0; j < t.cols(); ++j) {
      if (t.entry_is_zero(i, j)) continue;
      CycNum r = f(i, j) / t.entry(i, j);
      if (r * t.to_cyc() != f) return std::nullopt;
      return r;
    }
  return std::nullopt;
}

}  // namespace detail

/// Kernel k with (F f)(h1) = sum_{h2} k(h1 h2^{-1}) f(h2). It satisfies
/// k(nbar x lbar) = chi_N(nbar) k(x) chi_L(lbar), is supported on the preimage of
/// N + L, and kernel_of(c T_{N,L}) = (c / |Lbar|) k_0 with k_0(nbar lbar) = chi_N chi_L.
inline Kernel kernel_of(const CycMatrix& f, const InducedModule& vn, const InducedModule& vl) {
  auto c = detail::proportional_to(f, standard_T(vn, vl));
  if (!c) throw InputError("kernel_of: operator is not an intertwiner H_L -> H_N");
  const HeisGrp& h = vn.grp();
  const SympMod& m = h.base();
  const CycNum scale = *c / CycNum(h.n() * vl.lag().order());
  Kernel k;
  k.values.assign(static_cast<size_t>(h.order()), CycNum::zero(1));
  std::vector<char> done(static_cast<size_t>(m.order()), 0);
  for (const auto& nn : vn.lag().elements())
    for (const auto& ll : vl.lag().elements()) {
      const Elem x = m.group().add(nn, ll);
      const size_t xi = m.group().index(x);
      if (done[xi]) continue;
      done[xi] = 1;
      // (n, b)(l, c) = (n + l, b + c + beta(n, l)), value zeta^{b + c}
      for (int64_t a = 0; a < h.n(); ++a)
        k.values[h.index({x, a})] = scale * root_of_unity(h.n(), a - m.beta(nn, ll));
    }
  return k;
}

inline CycMatrix operator_from_kernel(const Kernel& k, const InducedModule& vn, const InducedModule& vl) {
  const HeisGrp& h = vn.grp();
  if (k.values.size() != static_cast<size_t>(h.order())) throw InputError("operator_from_kernel: kernel has wrong size");
  // bicovariance on generators of Nbar and Lbar
  std::vector<HElem> ngens = {h.central(1)}, lgens = {h.central(1)};
  for (const auto& g : vn.lag().gens()) ngens.push_back(h.lift(g));
  for (const auto& g : vl.lag().gens()) lgens.push_back(h.lift(g));
  for (const auto& x : h.elements()) {
    const CycNum& kx = k.values[h.index(x)];
    for (const auto& g : ngens)
      if (k.values[h.index(h.mul(g, x))] != root_of_unity(h.n(), vn.chi(g)) * kx)
        throw InputError("operator_from_kernel: kernel is not left N-covariant");
    for (const auto& g : lgens)
      if (k.values[h.index(h.mul(x, g))] != kx * root_of_unity(h.n(), vl.chi(g)))
        throw InputError("operator_from_kernel: kernel is not right L-covariant");
  }
  CycMatrix f(vn.dim(), vl.dim());
  for (size_t i = 0; i < vn.dim(); ++i) {
    const HElem r = h.lift(vn.reps()[i]);
    for (const auto& h2 : h.elements()) {
      const CycNum& kv = k.values[h.index(h.mul(r, h.inv(h2)))];
      if (kv.is_zero()) continue;
      auto [col, e] = vl.basis_value(h2);
      f(i, col) += kv * root_of_unity(h.n(), e);
    }
  }
  return f;
}

// ---------------------------------------------------------------- canonical system

namespace detail {

/// Inverse of a square matrix over F_p; throws if singular.
inline IntMat inv_mod_matrix(IntMat a, int64_t p) {
  const size_t n = a.size();
  IntMat inv(n, Elem(n, 0));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t r = c;
    while (r < n && nt::mod(a[r][c], p) == 0) ++r;
    if (r == n) throw DefectError("inv_mod_matrix: singular");
    std::swap(a[r], a[c]);
    std::swap(inv[r], inv[c]);
    const int64_t iv = nt::inv_mod(a[c][c], p);
    for (size_t k = 0; k < n; ++k) {
      a[c][k] = nt::mod(a[c][k] * iv, p);
      inv[c][k] = nt::mod(inv[c][k] * iv, p);
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const int64_t f = a[i][c];
      for (size_t k = 0; k < n; ++k) {
        a[i][k] = nt::mod(a[i][k] - f * a[c][k], p);
        inv[i][k] = nt::mod(inv[i][k] - f * inv[c][k], p);
      }
    }
  }
  return inv;
}

/// coef * x^k
struct Mono {
  CycNum coef;
  int64_t k = 0;
};

}  // namespace detail

/// Generators of Sp(M)(F_p) adapted to a lagrangian B: a Levi part and a shear
/// (all fixing B), and one Weyl element moving B to a transverse lagrangian.
struct SpGenerators {
  std::vector<SympAut> parabolic;
  SympAut weyl;
};

inline SpGenerators sp_generators(const SympMod& m, const Subgroup& b, const std::vector<Subgroup>& lags) {
  const int64_t p = m.n();
  const auto es = b.gens();
  const size_t d = es.size();
  SpGenerators out;
  if (d == 0) return out;
  const Subgroup* c = nullptr;
  for (const auto& l : lags)
    if (l.intersect(b).order() == 1) {
      c = &l;
      break;
    }
  if (!c) throw DefectError("sp_generators: no transverse lagrangian");
  const auto cs = c->gens();
  IntMat a(d, Elem(d));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) a[i][j] = m.pair(es[i], cs[j]);
  const IntMat ainv = detail::inv_mod_matrix(a, p);
  std::vector<Elem> fs(d, m.group().zero());
  for (size_t j = 0; j < d; ++j)
    for (size_t k = 0; k < d; ++k) fs[j] = m.group().add(fs[j], m.group().scale(ainv[k][j], cs[k]));
  // P: columns e_1..e_d, f_1..f_d in standard coordinates.
  const size_t r = 2 * d;
  IntMat pm(r, Elem(r));
  for (size_t j = 0; j < d; ++j)
    for (size_t i = 0; i < r; ++i) {
      pm[i][j] = es[j][i];
      pm[i][d + j] = fs[j][i];
    }
  const IntMat pinv = detail::inv_mod_matrix(pm, p);
  auto make = [&](const IntMat& x) {
    IntMat g(r, Elem(r, 0));
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < r; ++j) {
        int64_t acc = 0;
        for (size_t k = 0; k < r; ++k)
          for (size_t l = 0; l < r; ++l) acc = nt::mod(acc + pm[i][k] * x[k][l] % p * pinv[l][j], p);
        g[i][j] = acc;
      }
    SympAut s(m.group(), g);
    if (!s.is_symplectic(m)) throw DefectError("sp_generators: generator is not symplectic");
    return s;
  };
  auto ident = [&] {
    IntMat x(r, Elem(r, 0));
    for (size_t i = 0; i < r; ++i) x[i][i] = 1;
    return x;
  };
  // Levi: e_j -> e_j + e_i, f_i -> f_i - f_j
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      IntMat x = ident();
      x[i][j] = 1;
      x[d + j][d + i] = p - 1;
      out.parabolic.push_back(make(x));
    }
  {
    const int64_t gamma = nt::primitive_root(p);
    IntMat x = ident();
    x[0][0] = gamma;
    x[d][d] = nt::inv_mod(gamma, p);
    out.parabolic.push_back(make(x));
  }
  {
    IntMat x = ident();  // f_1 -> f_1 + e_1
    x[0][d] = 1;
    out.parabolic.push_back(make(x));
  }
  {
    IntMat x = ident();  // e_1 -> f_1, f_1 -> -e_1
    x[0][0] = 0;
    x[d][d] = 0;
    x[d][0] = 1;
    x[0][d] = p - 1;
    out.weyl = make(x);
  }
  return out;
}

class SystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The family F_{N^0,L^0} = scalar(N^0, L^0) * T_{N,L} over all enhanced
/// lagrangians of an elementary abelian module (or M = 0).
class CanonicalSystem {
 public:
  CanonicalSystem(const SympMod& m, const EnhLag& basepoint, const Budget& budget = default_budget())
      : m_(m), h_(m), base_(basepoint) {
    require_elementary(m);
    lags_ = enumerate_lagrangians(m, budget);
    for (size_t i = 0; i < lags_.size(); ++i) {
      index_[lags_[i].hnf()] = i;
      modules_.emplace_back(h_, lags_[i]);
    }
    if (!index_.count(basepoint.lag.hnf())) throw InputError("canonical system: basepoint is not a lagrangian");
    if (basepoint.eps != 1 && basepoint.eps != -1) throw InputError("canonical system: eps must be +1 or -1");
    solve();
    build_table();
  }

  const SympMod& module() const { return m_; }
  const HeisGrp& heis() const { return h_; }
  const EnhLag& basepoint() const { return base_; }
  const std::vector<Subgroup>& lagrangians() const { return lags_; }
  const InducedModule& induced(size_t i) const { return modules_[i]; }
  size_t lag_index(const Subgroup& l) const {
    auto it = index_.find(l.hnf());
    if (it == index_.end()) throw InputError("canonical system: not a lagrangian of this module");
    return it->second;
  }
  std::vector<EnhLag> enhanced() const {
    std::vector<EnhLag> out;
    for (const auto& l : lags_) {
      out.push_back({l, 1});
      out.push_back({l, -1});
    }
    return out;
  }
  EnhLag act(const SympAut& g, const EnhLag& e) const { return m_.order() == 1 ? e : act_enhanced(m_, g, e); }

  /// The Weyl-generator unknown and the equations that pinned it.
  const CycNum& weyl_value() const { return x_; }
  size_t equation_count() const { return equations_; }

  const RootMatrix& T(size_t in, size_t il) const {
    auto key = std::make_pair(in, il);
    auto it = tcache_.find(key);
    if (it == tcache_.end()) it = tcache_.emplace(key, standard_T(modules_[in], modules_[il])).first;
    return it->second;
  }

  /// F_{N^0,L^0} = scalar * T_{N,L}
  CycNum scalar(const EnhLag& n0, const EnhLag& l0) const {
    const CycNum& s = table_[lag_index(n0.lag) * lags_.size() + lag_index(l0.lag)];
    return n0.eps * l0.eps == 1 ? s : -s;
  }

  ScaledMatrix op(const EnhLag& n0, const EnhLag& l0) const {
    return {scalar(n0, l0), T(lag_index(n0.lag), lag_index(l0.lag))};
  }

  /// c_{L^0} with F_{L^0,B^0} = c * T_{L,B}.
  CycNum anchor(const EnhLag& l0) const { return l0.eps == 1 ? cplus_[lag_index(l0.lag)] : -cplus_[lag_index(l0.lag)]; }

  /// Table keyed by enhanced-lagrangian keys, relative to the first enhanced
  /// lagrangian R^0: entries scalar(L^0, R^0). Independent of the basepoint
  /// exactly when the system is.
  std::vector<std::pair<std::string, CycNum>> coherence_table() const {
    std::vector<std::pair<std::string, CycNum>> out;
    const EnhLag r0{lags_[0], 1};
    for (const auto& e : enhanced()) out.emplace_back(e.key(), scalar(e, r0));
    return out;
  }

  /// Replace the anchor scalar of one lagrangian (used to probe which axioms
  /// pin the system); rebuilds the table.
  void perturb_anchor(size_t il, const CycNum& factor) {
    cplus_[il] = cplus_[il] * factor;
    build_table();
  }

 private:
  void solve() {
    const size_t nl = lags_.size();
    const size_t ib = lag_index(base_.lag);
    cplus_.assign(nl, CycNum(1L));
    if (m_.order() == 1) {
      cplus_[ib] = CycNum(static_cast<long>(base_.eps));
      x_ = CycNum(1L);
      return;
    }
    const SpGenerators gens = sp_generators(m_, base_.lag, lags_);
    std::vector<SympAut> all = gens.parabolic;
    all.push_back(gens.weyl);
    // Node (lag index, eps) -> monomial.
    std::map<std::pair<size_t, int>, detail::Mono> val;
    std::deque<std::pair<size_t, int>> queue;
    auto assign = [&](const EnhLag& e, const detail::Mono& v) {
      const size_t i = lag_index(e.lag);
      val[{i, e.eps}] = v;
      val[{i, -e.eps}] = {-v.coef, v.k};
      queue.push_back({i, e.eps});
    };
    assign(base_, {CycNum(1L), 0});
    const EnhLag wb = act_enhanced(m_, gens.weyl, base_);
    assign(wb, {CycNum(1L), 1});
    // x^e = r equations
    std::vector<std::pair<int64_t, CycNum>> eqs;
    auto lookup = [&](const EnhLag& e) -> const detail::Mono& {
      auto it = val.find({lag_index(e.lag), e.eps});
      if (it == val.end()) throw DefectError("canonical system: seed missing");
      return it->second;
    };
    while (!queue.empty()) {
      auto [il, eps] = queue.front();
      queue.pop_front();
      const EnhLag l0{lags_[il], eps};
      const detail::Mono cl = val[{il, eps}];
      for (const auto& s : all) {
        const EnhLag sl = act_enhanced(m_, s, l0);
        const EnhLag sb = act_enhanced(m_, s, base_);
        const detail::Mono& csb = lookup(sb);
        const size_t isl = lag_index(sl.lag), isb = lag_index(sb.lag);
        // Equivariance: F_{sL^0,sB^0} = c_L T_{sL,sB}, hence
        // c_{sL^0} T_{sL,B} = c_L c_{sB^0} T_{sL,sB} T_{sB,B}.
        auto nu = proportionality(T(isl, isb) * T(isb, ib), T(isl, ib));
        if (!nu) throw DefectError("canonical system: T_{sL,sB} T_{sB,B} not proportional to T_{sL,B}");
        const detail::Mono cand{cl.coef * csb.coef * *nu, cl.k + csb.k};
        auto it = val.find({isl, sl.eps});
        if (it == val.end()) {
          assign(sl, cand);
          continue;
        }
        const int64_t e = cand.k - it->second.k;
        const CycNum r = it->second.coef / cand.coef;
        if (e == 0) {
          if (!r.is_one())
            throw SystemError("canonical system: inconsistent constraint at " + sl.key() + " via generator " + s.to_string());
          continue;
        }
        eqs.emplace_back(e, r);
      }
    }
    if (val.size() != 2 * nl) throw DefectError("canonical system: Sp generators did not reach every lagrangian");
    equations_ = eqs.size();
    // Combine x^{e_i} = r_i into x^g = r with g = gcd.
    int64_t g = 0;
    CycNum r(1L);
    for (const auto& [e0, r0] : eqs) {
      int64_t e = e0;
      CycNum rr = r0;
      if (e < 0) {
        e = -e;
        rr = rr.inverse();
      }
      auto [gg, u, v] = nt::ext_gcd(g, e);
      r = (g == 0 ? CycNum(1L) : r.pow(u)) * rr.pow(v);
      g = gg;
    }
    if (g != 1) throw SystemError("canonical system: axioms do not pin system (exponent gcd " + std::to_string(g) + ")");
    x_ = r;
    for (const auto& [e, rr] : eqs)
      if (x_.pow(e) != rr) throw SystemError("canonical system: inconsistent equivariance constraints");
    for (const auto& [key, mono] : val)
      if (key.second == 1) cplus_[key.first] = mono.coef * x_.pow(mono.k);
  }

  void build_table() {
    const size_t nl = lags_.size();
    const size_t ib = lag_index(base_.lag);
    std::vector<CycNum> delta(nl);
    for (size_t l = 0; l < nl; ++l) {
      auto d = proportionality(T(ib, l) * T(l, ib), RootMatrix::identity(modules_[ib].dim(), m_.n()));
      if (!d) throw DefectError("canonical system: T_{B,L} T_{L,B} is not scalar");
      delta[l] = *d;
    }
    table_.assign(nl * nl, CycNum());
    for (size_t a = 0; a < nl; ++a)
      for (size_t b = 0; b < nl; ++b) {
        // F_{N,L} = F_{N,B} F_{L,B}^{-1} = (c_N / c_L) T_{N,B} T_{B,L} / delta(L, B)
        auto rho = proportionality(T(a, ib) * T(ib, b), T(a, b));
        if (!rho) throw DefectError("canonical system: T_{N,B} T_{B,L} not proportional to T_{N,L}");
        table_[a * nl + b] = cplus_[a] / cplus_[b] / delta[b] * *rho;
      }
  }

  SympMod m_;
  HeisGrp h_;
  EnhLag base_;
  std::vector<Subgroup> lags_;
  std::map<IntMat, size_t> index_;
  std::vector<InducedModule> modules_;
  std::vector<CycNum> cplus_, table_;
  CycNum x_;
  size_t equations_ = 0;
  mutable std::map<std::pair<size_t, size_t>, RootMatrix> tcache_;
};

struct SystemReport {
  bool identity = true, transitivity = true, genuineness = true, equivariance = true, in_K = true;
  size_t triples = 0, equivariance_checks = 0;
  std::string failure;
  bool ok() const { return identity && transitivity && genuineness && equivariance && in_K; }
};

/// Check the axioms on a family of operators scalar(N^0, L^0) * T_{N,L}:
/// identity, transitivity (all triples, or `triple_limit` random ones),
/// genuineness, equivariance under each g in `gs` for every pair, and that every
/// scalar lies in K.
template <class Family>
SystemReport verify_family(const Family& sys, const std::vector<SympAut>& gs, size_t triple_limit = 0, uint64_t seed = 1) {
  SystemReport rep;
  const SympMod& m = sys.module();
  const auto& lags = sys.lagrangians();
  const size_t nl = lags.size();
  auto fail = [&](bool& flag, const std::string& what) {
    if (flag && rep.failure.empty()) rep.failure = what;
    flag = false;
  };
  for (size_t i = 0; i < nl; ++i) {
    const EnhLag l0{lags[i], 1};
    if (!sys.scalar(l0, l0).is_one() || sys.T(i, i) != RootMatrix::identity(sys.induced(i).dim(), m.n()))
      fail(rep.identity, "identity fails at " + l0.key());
  }
  for (size_t a = 0; a < nl; ++a)
    for (size_t b = 0; b < nl; ++b) {
      const EnhLag n0{lags[a], 1}, l0{lags[b], 1};
      const CycNum s = sys.scalar(n0, l0);
      if (sys.scalar(n0.flipped(), l0) != -s || sys.scalar(n0, l0.flipped()) != -s ||
          sys.scalar(n0.flipped(), l0.flipped()) != s)
        fail(rep.genuineness, "genuineness fails at " + n0.key() + ", " + l0.key());
      if (!in_field_K(s, m.n())) fail(rep.in_K, "scalar outside K at " + n0.key() + ", " + l0.key());
    }
  auto check_triple = [&](size_t r, size_t a, size_t b) {
    const EnhLag r0{lags[r], 1}, n0{lags[a], 1}, l0{lags[b], 1};
    ++rep.triples;
    if (!scaled_equal(sys.scalar(r0, n0) * sys.scalar(n0, l0), sys.T(r, a) * sys.T(a, b), sys.scalar(r0, l0), sys.T(r, b)))
      fail(rep.transitivity, "transitivity fails at " + r0.key() + ", " + n0.key() + ", " + l0.key());
  };
  if (triple_limit == 0 || triple_limit >= nl * nl * nl) {
    for (size_t r = 0; r < nl; ++r)
      for (size_t a = 0; a < nl; ++a)
        for (size_t b = 0; b < nl; ++b) check_triple(r, a, b);
  } else {
    std::mt19937_64 rng(seed);
    for (size_t t = 0; t < triple_limit; ++t) check_triple(rng() % nl, rng() % nl, rng() % nl);
  }
  if (m.order() > 1) {
    for (const auto& g : gs) {
      std::vector<MonoMatrix> tr;
      std::vector<size_t> img;
      for (size_t i = 0; i < nl; ++i) {
        img.push_back(sys.lag_index(g(lags[i])));
        tr.push_back(sys.induced(i).transport_to(g, sys.induced(img.back())));
      }
      for (size_t a = 0; a < nl; ++a)
        for (size_t b = 0; b < nl; ++b) {
          ++rep.equivariance_checks;
          const EnhLag n0{lags[a], 1}, l0{lags[b], 1};
          const EnhLag gn = sys.act(g, n0), gl = sys.act(g, l0);
          const RootMatrix lhs = tr[a] * sys.T(a, b) * tr[b].inverse();
          if (!scaled_equal(sys.scalar(n0, l0), lhs, sys.scalar(gn, gl), sys.T(img[a], img[b])))
            fail(rep.equivariance, "equivariance fails for g = " + g.to_string() + " at " + n0.key() + ", " + l0.key());
        }
    }
  }
  return rep;
}

inline SystemReport verify_system(const CanonicalSystem& sys, const std::vector<SympAut>& gs, size_t triple_limit = 0,
                                  uint64_t seed = 1) {
  return verify_family(sys, gs, triple_limit, seed);
}

inline CanonicalSystem solve_canonical_system(const SympMod& m, const EnhLag& basepoint,
                                              const Budget& budget = default_budget()) {
  return CanonicalSystem(m, basepoint, budget);
}

}  // namespace heis
