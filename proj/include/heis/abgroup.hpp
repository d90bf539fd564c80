#pragma once

// Finite abelian groups Z/d_1 x ... x Z/d_m, subgroups in Hermite normal form,
// quotients with Smith-normal-form coordinates and lexicographic sections.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "heis/numtheory.hpp"

namespace heis {

using Elem = std::vector<int64_t>;
using IntMat = std::vector<std::vector<int64_t>>;

class AbGroup {
 public:
  AbGroup() = default;
  explicit AbGroup(std::vector<int64_t> orders) : orders_(std::move(orders)) {
    for (auto d : orders_)
      if (d < 1) throw InputError("AbGroup: orders must be positive");
  }

  const std::vector<int64_t>& orders() const { return orders_; }
  size_t rank() const { return orders_.size(); }
  int64_t order() const {
    int64_t o = 1;
    for (auto d : orders_) o *= d;
    return o;
  }
  int64_t exponent() const {
    int64_t e = 1;
    for (auto d : orders_) e = nt::lcm(e, d);
    return e;
  }

  Elem zero() const { return Elem(rank(), 0); }
  Elem basis(size_t i) const {
    Elem e = zero();
    e[i] = 1 % orders_[i];
    return e;
  }
  bool is_valid(const Elem& x) const {
    if (x.size() != rank()) return false;
    for (size_t i = 0; i < rank(); ++i)
      if (x[i] < 0 || x[i] >= orders_[i]) return false;
    return true;
  }
  Elem reduce(Elem x) const {
    if (x.size() != rank()) throw InputError("element has wrong length");
    for (size_t i = 0; i < rank(); ++i) x[i] = nt::mod(x[i], orders_[i]);
    return x;
  }
  Elem add(const Elem& a, const Elem& b) const {
    Elem c(rank());
    for (size_t i = 0; i < rank(); ++i) {
      c[i] = a[i] + b[i];
      if (c[i] >= orders_[i]) c[i] -= orders_[i];
    }
    return c;
  }
  Elem neg(const Elem& a) const {
    Elem c(rank());
    for (size_t i = 0; i < rank(); ++i) c[i] = a[i] == 0 ? 0 : orders_[i] - a[i];
    return c;
  }
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  Elem scale(int64_t k, const Elem& a) const {
    Elem c(rank());
    for (size_t i = 0; i < rank(); ++i) c[i] = nt::mod(static_cast<int64_t>((__int128)k * a[i] % orders_[i]), orders_[i]);
    return c;
  }
  int64_t element_order(const Elem& a) const {
    int64_t o = 1;
    for (size_t i = 0; i < rank(); ++i) o = nt::lcm(o, orders_[i] / nt::gcd(a[i], orders_[i]));
    return o;
  }

  /// Mixed-radix index; the first coordinate is most significant, so index
  /// order is lexicographic order.
  size_t index(const Elem& a) const {
    size_t idx = 0;
    for (size_t i = 0; i < rank(); ++i) idx = idx * static_cast<size_t>(orders_[i]) + static_cast<size_t>(a[i]);
    return idx;
  }
  Elem element(size_t idx) const {
    Elem a(rank());
    for (size_t i = rank(); i-- > 0;) {
      a[i] = static_cast<int64_t>(idx % static_cast<size_t>(orders_[i]));
      idx /= static_cast<size_t>(orders_[i]);
    }
    return a;
  }
  std::vector<Elem> elements() const {
    std::vector<Elem> out;
    const size_t n = static_cast<size_t>(order());
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back(element(i));
    return out;
  }

  friend bool operator==(const AbGroup& a, const AbGroup& b) { return a.orders_ == b.orders_; }
  friend bool operator!=(const AbGroup& a, const AbGroup& b) { return !(a == b); }

  std::string to_string() const {
    if (orders_.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < rank(); ++i) s += (i ? " x Z/" : "Z/") + std::to_string(orders_[i]);
    return s;
  }

 private:
  std::vector<int64_t> orders_;
};

namespace detail {

/// Row-style Hermite normal form of the lattice spanned by `rows` together with
/// d_i e_i. Result is m x m upper triangular with positive pivots h_ii | d_i and
/// entries above each pivot reduced into [0, h_ii).
inline IntMat hermite_with_relations(const std::vector<int64_t>& d, const std::vector<Elem>& rows) {
  const size_t m = d.size();
  std::vector<Elem> pool;
  for (const auto& r : rows) {
    Elem x(m);
    for (size_t j = 0; j < m; ++j) x[j] = nt::mod(r[j], d[j]);
    pool.push_back(std::move(x));
  }
  for (size_t j = 0; j < m; ++j) {
    Elem x(m, 0);
    x[j] = d[j];
    pool.push_back(std::move(x));
  }
  IntMat h(m, Elem(m, 0));
  for (size_t c = 0; c < m; ++c) {
    // Euclid on column c across the pool.
    for (;;) {
      size_t best = pool.size();
      for (size_t i = 0; i < pool.size(); ++i)
        if (pool[i][c] != 0 && (best == pool.size() || std::llabs(pool[i][c]) < std::llabs(pool[best][c]))) best = i;
      if (best == pool.size()) throw DefectError("hermite: lattice lost full rank");
      bool done = true;
      for (size_t i = 0; i < pool.size(); ++i) {
        if (i == best || pool[i][c] == 0) continue;
        const int64_t q = pool[i][c] / pool[best][c];
        for (size_t k = c; k < m; ++k) pool[i][k] -= q * pool[best][k];
        for (size_t k = c + 1; k < m; ++k) pool[i][k] = nt::mod(pool[i][k], d[k]);
        if (pool[i][c] != 0) done = false;
      }
      if (done) {
        Elem piv = pool[best];
        if (piv[c] < 0)
          for (size_t k = c; k < m; ++k) piv[k] = -piv[k];
        for (size_t k = c + 1; k < m; ++k) piv[k] = nt::mod(piv[k], d[k]);
        h[c] = piv;
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
        std::erase_if(pool, [&](const Elem& x) { return std::all_of(x.begin(), x.end(), [](int64_t v) { return v == 0; }); });
        break;
      }
    }
  }
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < i; ++j) {
      const int64_t q = h[j][i] >= 0 ? h[j][i] / h[i][i] : -((-h[j][i] + h[i][i] - 1) / h[i][i]);
      if (q == 0) continue;
      for (size_t k = i; k < m; ++k) h[j][k] -= q * h[i][k];
    }
  return h;
}

/// Smith normal form D = U A V of a square integer matrix; returns diag, V, V^{-1}.
struct SmithResult {
  std::vector<int64_t> diag;
  IntMat v, vinv;
};

inline SmithResult smith(IntMat a) {
  const size_t m = a.size();
  IntMat v(m, Elem(m, 0)), vinv(m, Elem(m, 0));
  for (size_t i = 0; i < m; ++i) v[i][i] = vinv[i][i] = 1;
  // Column op on A: col_j -= q col_i  <=>  V: col_j -= q col_i, Vinv: row_i += q row_j.
  auto col_sub = [&](size_t j, size_t i, int64_t q) {
    for (size_t r = 0; r < m; ++r) a[r][j] -= q * a[r][i];
    for (size_t r = 0; r < m; ++r) v[r][j] -= q * v[r][i];
    for (size_t c = 0; c < m; ++c) vinv[i][c] += q * vinv[j][c];
  };
  auto col_swap = [&](size_t i, size_t j) {
    for (size_t r = 0; r < m; ++r) std::swap(a[r][i], a[r][j]);
    for (size_t r = 0; r < m; ++r) std::swap(v[r][i], v[r][j]);
    std::swap(vinv[i], vinv[j]);
  };
  auto row_sub = [&](size_t j, size_t i, int64_t q) {
    for (size_t c = 0; c < m; ++c) a[j][c] -= q * a[i][c];
  };
  for (size_t t = 0; t < m; ++t) {
    for (;;) {
      // Smallest nonzero entry in the trailing block moves to (t, t).
      size_t bi = m, bj = m;
      for (size_t i = t; i < m; ++i)
        for (size_t j = t; j < m; ++j)
          if (a[i][j] != 0 && (bi == m || std::llabs(a[i][j]) < std::llabs(a[bi][bj]))) bi = i, bj = j;
      if (bi == m) break;
      std::swap(a[t], a[bi]);
      if (bj != t) col_swap(t, bj);
      bool clean = true;
      for (size_t i = t + 1; i < m; ++i)
        if (a[i][t] != 0) {
          row_sub(i, t, a[i][t] / a[t][t]);
          if (a[i][t] != 0) clean = false;
        }
      for (size_t j = t + 1; j < m; ++j)
        if (a[t][j] != 0) {
          col_sub(j, t, a[t][j] / a[t][t]);
          if (a[t][j] != 0) clean = false;
        }
      if (!clean) continue;
      // Divisibility: fold any entry not divisible by the pivot into row t.
      bool divides = true;
      for (size_t i = t + 1; i < m && divides; ++i)
        for (size_t j = t + 1; j < m; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (size_t c = 0; c < m; ++c) a[t][c] += a[i][c];
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (t < m && a[t][t] < 0) a[t] = [&] {
        Elem r = a[t];
        for (auto& x : r) x = -x;
        return r;
      }();
  }
  SmithResult res;
  for (size_t i = 0; i < m; ++i) res.diag.push_back(a[i][i]);
  res.v = std::move(v);
  res.vinv = std::move(vinv);
  return res;
}

}  // namespace detail

/// Subgroup of an AbGroup, stored via the Hermite normal form of its preimage
/// lattice in Z^m. Equality of subgroups is equality of these forms.
class Subgroup {
 public:
  Subgroup() = default;

  static Subgroup from_gens(const AbGroup& g, const std::vector<Elem>& gens) {
    for (const auto& x : gens)
      if (x.size() != g.rank()) throw InputError("subgroup generator has wrong length");
    Subgroup s;
    s.ambient_ = g;
    s.hnf_ = detail::hermite_with_relations(g.orders(), gens);
    return s;
  }
  static Subgroup whole(const AbGroup& g) {
    std::vector<Elem> gens;
    for (size_t i = 0; i < g.rank(); ++i) gens.push_back(g.basis(i));
    return from_gens(g, gens);
  }
  static Subgroup trivial(const AbGroup& g) { return from_gens(g, {}); }

  const AbGroup& ambient() const { return ambient_; }
  const IntMat& hnf() const { return hnf_; }

  /// Canonical generators: HNF rows reduced mod the orders, zero rows dropped.
  std::vector<Elem> gens() const {
    std::vector<Elem> out;
    for (const auto& row : hnf_) {
      Elem x = ambient_.reduce(row);
      if (std::any_of(x.begin(), x.end(), [](int64_t v) { return v != 0; })) out.push_back(x);
    }
    return out;
  }

  int64_t order() const {
    int64_t o = 1;
    for (size_t i = 0; i < hnf_.size(); ++i) o *= ambient_.orders()[i] / hnf_[i][i];
    return o;
  }
  int64_t index() const { return ambient_.order() / order(); }

  /// Lexicographically smallest element of the coset x + S.
  Elem coset_rep(Elem x) const {
    for (size_t i = 0; i < hnf_.size(); ++i) {
      const int64_t q = nt::mod(x[i], ambient_.orders()[i]) / hnf_[i][i];
      if (q != 0)
        for (size_t k = i; k < x.size(); ++k) x[k] -= q * hnf_[i][k];
      x[i] = nt::mod(x[i], ambient_.orders()[i]);
    }
    return ambient_.reduce(x);
  }

  bool contains(const Elem& x) const {
    if (x.size() != ambient_.rank()) return false;
    Elem r = coset_rep(x);
    return std::all_of(r.begin(), r.end(), [](int64_t v) { return v == 0; });
  }

  bool contains(const Subgroup& t) const {
    for (const auto& g : t.gens())
      if (!contains(g)) return false;
    return true;
  }

  /// All elements, ordered by the mixed-radix HNF coordinates.
  std::vector<Elem> elements() const {
    const size_t m = hnf_.size();
    std::vector<int64_t> range(m);
    for (size_t i = 0; i < m; ++i) range[i] = ambient_.orders()[i] / hnf_[i][i];
    std::vector<Elem> out;
    out.reserve(static_cast<size_t>(order()));
    std::vector<int64_t> c(m, 0);
    for (;;) {
      Elem x(m, 0);
      for (size_t i = 0; i < m; ++i)
        if (c[i])
          for (size_t k = i; k < m; ++k) x[k] += c[i] * hnf_[i][k];
      out.push_back(ambient_.reduce(x));
      size_t i = m;
      while (i-- > 0) {
        if (++c[i] < range[i]) break;
        c[i] = 0;
      }
      if (i == static_cast<size_t>(-1)) break;
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Lex-minimal coset representatives of ambient/S, in lexicographic order.
  std::vector<Elem> coset_reps() const {
    const size_t m = hnf_.size();
    std::vector<Elem> out;
    out.reserve(static_cast<size_t>(index()));
    Elem c(m, 0);
    for (;;) {
      out.push_back(c);
      size_t i = m;
      while (i-- > 0) {
        if (++c[i] < hnf_[i][i]) break;
        c[i] = 0;
      }
      if (i == static_cast<size_t>(-1)) break;
    }
    return out;
  }

  Subgroup operator+(const Subgroup& t) const {
    auto g = gens();
    for (const auto& x : t.gens()) g.push_back(x);
    return from_gens(ambient_, g);
  }

  Subgroup intersect(const Subgroup& t) const {
    const Subgroup& small = order() <= t.order() ? *this : t;
    const Subgroup& big = order() <= t.order() ? t : *this;
    std::vector<Elem> keep;
    for (const auto& x : small.elements())
      if (big.contains(x)) keep.push_back(x);
    return from_gens(ambient_, keep);
  }

  Subgroup scaled(int64_t k) const {
    std::vector<Elem> g;
    for (const auto& x : gens()) g.push_back(ambient_.scale(k, x));
    return from_gens(ambient_, g);
  }

  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.ambient_ == b.ambient_ && a.hnf_ == b.hnf_; }
  friend bool operator!=(const Subgroup& a, const Subgroup& b) { return !(a == b); }
  friend bool operator<(const Subgroup& a, const Subgroup& b) { return a.gens() < b.gens(); }

 private:
  AbGroup ambient_;
  IntMat hnf_;
};

/// A / B for subgroups B of A of a common ambient group, presented as an
/// AbGroup in invariant-factor form with projection and lexicographic section.
class Quotient {
 public:
  Quotient() = default;
  Quotient(const Subgroup& a, const Subgroup& b) : a_(a), b_(b) {
    if (!a.contains(b)) throw InputError("quotient: not a subgroup");
    const size_t m = a.ambient().rank();
    // Express the rows of hnf(B) in the basis given by the rows of hnf(A).
    IntMat x(m);
    for (size_t i = 0; i < m; ++i) x[i] = coords_in_a(b.hnf()[i]);
    auto s = detail::smith(x);
    for (size_t i = 0; i < m; ++i)
      if (s.diag[i] != 1) {
        keep_.push_back(i);
        orders_.push_back(s.diag[i]);
      }
    v_ = std::move(s.v);
    vinv_ = std::move(s.vinv);
    group_ = AbGroup(orders_);
  }

  const AbGroup& group() const { return group_; }
  const Subgroup& numerator() const { return a_; }
  const Subgroup& denominator() const { return b_; }

  Elem project(const Elem& x) const {
    if (!a_.contains(x)) throw InputError("quotient: element outside the numerator subgroup");
    Elem c = coords_in_a(x);
    Elem q(keep_.size());
    for (size_t t = 0; t < keep_.size(); ++t) {
      __int128 acc = 0;
      for (size_t i = 0; i < c.size(); ++i) acc += (__int128)c[i] * v_[i][keep_[t]];
      q[t] = nt::mod(static_cast<int64_t>(acc % orders_[t]), orders_[t]);
    }
    return q;
  }

  Elem section(const Elem& q) const {
    const size_t m = a_.ambient().rank();
    Elem full(m, 0);
    for (size_t t = 0; t < keep_.size(); ++t) full[keep_[t]] = q[t];
    Elem c(m, 0);
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < m; ++j) c[j] += full[i] * vinv_[i][j];
    Elem x(m, 0);
    for (size_t i = 0; i < m; ++i) {
      const int64_t ci = c[i];
      if (ci)
        for (size_t k = i; k < m; ++k) x[k] = nt::mod(x[k] + ci * a_.hnf()[i][k], a_.ambient().orders()[k]);
    }
    return b_.coset_rep(x);
  }

 private:
  Elem coords_in_a(Elem x) const {
    const auto& h = a_.hnf();
    const size_t m = h.size();
    Elem c(m, 0);
    for (size_t i = 0; i < m; ++i) {
      if (x[i] % h[i][i] != 0) throw DefectError("quotient: element not in lattice");
      c[i] = x[i] / h[i][i];
      if (c[i])
        for (size_t k = i; k < m; ++k) x[k] -= c[i] * h[i][k];
    }
    return c;
  }

  Subgroup a_, b_;
  std::vector<size_t> keep_;
  std::vector<int64_t> orders_;
  IntMat v_, vinv_;
  AbGroup group_;
};

/// Kernel of the homomorphism G -> Z/t_1 x ... x Z/t_k sending e_i to images[i].
inline Subgroup kernel_of_hom(const AbGroup& g, const std::vector<int64_t>& target, const std::vector<Elem>& images) {
  const size_t k = target.size(), m = g.rank();
  std::vector<int64_t> d = target;
  d.insert(d.end(), g.orders().begin(), g.orders().end());
  std::vector<Elem> rows;
  for (size_t i = 0; i < m; ++i) {
    Elem r(k + m, 0);
    for (size_t j = 0; j < k; ++j) {
      if (nt::mod(g.orders()[i] * images[i][j], target[j]) != 0) throw InputError("kernel_of_hom: map is not well defined");
      r[j] = images[i][j];
    }
    r[k + i] = 1;
    rows.push_back(r);
  }
  auto h = detail::hermite_with_relations(d, rows);
  std::vector<Elem> gens;
  for (size_t i = k; i < k + m; ++i) gens.emplace_back(h[i].begin() + static_cast<std::ptrdiff_t>(k), h[i].end());
  return Subgroup::from_gens(g, gens);
}

inline Quotient quotient(const AbGroup& g, const Subgroup& s) {
  if (s.ambient() != g) throw InputError("quotient: subgroup of a different group");
  return Quotient(Subgroup::whole(g), s);
}

/// Returns (G[p^k], p^k G).
inline std::pair<Subgroup, Subgroup> torsion_and_scale(const AbGroup& g, int64_t p, int k) {
  std::vector<Elem> tors, scl;
  const int64_t pk = nt::ipow(p, k);
  for (size_t i = 0; i < g.rank(); ++i) {
    const int64_t d = g.orders()[i];
    tors.push_back(g.scale(d / nt::gcd(d, pk), g.basis(i)));
    scl.push_back(g.scale(pk, g.basis(i)));
  }
  return {Subgroup::from_gens(g, tors), Subgroup::from_gens(g, scl)};
}

/// rho_k(G) = G[p^k] / (G[p^{k-1}] + p G[p^{k+1}]).
inline AbGroup rho_k(const AbGroup& g, int64_t p, int k) {
  if (k < 1) throw InputError("rho_k: k must be positive");
  auto a = torsion_and_scale(g, p, k).first;
  auto b1 = torsion_and_scale(g, p, k - 1).first;
  auto b2 = torsion_and_scale(g, p, k + 1).first.scaled(p);
  return Quotient(a, b1 + b2).group();
}

inline Subgroup primary_component(const AbGroup& g, int64_t p) {
  std::vector<Elem> gens;
  for (size_t i = 0; i < g.rank(); ++i) {
    int64_t d = g.orders()[i], cof = d;
    while (cof % p == 0) cof /= p;
    gens.push_back(g.scale(cof, g.basis(i)));
  }
  return Subgroup::from_gens(g, gens);
}

}  // namespace heis
