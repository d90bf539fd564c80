#pragma once

// Symplectic modules (M, <,>), the half form beta, lagrangians, Sp(M) and
// enhanced lagrangians over F_p, Gauss sums of symmetric forms.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "heis/abgroup.hpp"
#include "heis/cyclo.hpp"

namespace heis {

struct Budget {
  int64_t lagrangians = 6561;  // |M| limit for enumerate_lagrangians
  int64_t sp_enumerate = 81;   // |M| limit for full Sp enumeration
  int64_t elements = 1 << 22;  // |M| limit for element-wise sweeps
};

inline Budget& default_budget() {
  static Budget b;
  return b;
}

/// Finite abelian group with an alternating nondegenerate pairing valued in
/// Z/n, read as omega(m, m') = zeta_n^<m, m'>.
class SympMod {
 public:
  SympMod() = default;
  SympMod(AbGroup g, int64_t n, IntMat gram) : group_(std::move(g)), n_(n), gram_(std::move(gram)) {
    for (auto& row : gram_)
      for (auto& x : row) x = nt::mod(x, n_ < 1 ? 1 : n_);
    validate();
  }

  const AbGroup& group() const { return group_; }
  int64_t n() const { return n_; }
  const IntMat& gram() const { return gram_; }
  size_t rank() const { return group_.rank(); }
  int64_t order() const { return group_.order(); }

  int64_t pair(const Elem& a, const Elem& b) const {
    __int128 acc = 0;
    for (size_t i = 0; i < rank(); ++i) {
      if (a[i] == 0) continue;
      int64_t row = 0;
      for (size_t j = 0; j < rank(); ++j)
        if (b[j]) row = (row + gram_[i][j] * b[j]) % n_;
      acc += (__int128)a[i] * row;
    }
    return nt::mod(static_cast<int64_t>(acc % n_), n_);
  }

  int64_t beta(const Elem& a, const Elem& b) const { return nt::mod(((n_ + 1) / 2) * pair(a, b), n_); }

  /// sqrt|M|
  int64_t half_order() const { return nt::exact_sqrt(order()); }

  bool is_elementary() const {
    return nt::is_prime(n_) && std::all_of(group_.orders().begin(), group_.orders().end(), [&](int64_t d) { return d == n_; });
  }

  /// Throws InputError naming the first violated invariant.
  void validate() const {
    if (n_ < 1 || n_ % 2 == 0) throw InputError("symplectic module: n must be odd (even order is not supported)");
    if (gram_.size() != rank()) throw InputError("symplectic module: gram has wrong size");
    for (const auto& row : gram_)
      if (row.size() != rank()) throw InputError("symplectic module: gram has wrong size");
    const int64_t e = group_.exponent();
    if (n_ % e != 0) throw InputError("symplectic module: exponent of M must divide n");
    const int64_t s = half_order();
    if (s < 0) throw InputError("symplectic module: |M| is not a square");
    if (s % e != 0) throw InputError("symplectic module: exponent of M must divide sqrt|M|");
    for (size_t i = 0; i < rank(); ++i) {
      if (gram_[i][i] != 0) throw InputError("symplectic module: pairing is not alternating");
      for (size_t j = 0; j < rank(); ++j) {
        if (nt::mod(gram_[i][j] + gram_[j][i], n_) != 0) throw InputError("symplectic module: pairing is not alternating");
        if (nt::mod(gram_[i][j] * group_.orders()[i], n_) != 0)
          throw InputError("symplectic module: pairing is not well defined on Z/d");
      }
    }
    // Nondegenerate iff the radical is trivial.
    std::vector<Elem> images;
    for (size_t i = 0; i < rank(); ++i) {
      Elem r(rank());
      for (size_t j = 0; j < rank(); ++j) r[j] = gram_[i][j];
      images.push_back(r);
    }
    auto rad = kernel_of_hom(group_, std::vector<int64_t>(rank(), n_), images);
    if (rad.order() != 1) throw InputError("symplectic module: pairing is degenerate");
  }

  friend bool operator==(const SympMod& a, const SympMod& b) {
    return a.group_ == b.group_ && a.n_ == b.n_ && a.gram_ == b.gram_;
  }

 private:
  AbGroup group_;
  int64_t n_ = 1;
  IntMat gram_;
};

/// Orthogonal sum of hyperbolic blocks (Z/q)^d x (Z/q)^d, <e_i, f_i> = n/q.
inline SympMod standard_module(const std::vector<std::pair<int64_t, int>>& blocks) {
  int64_t n = 1;
  for (auto [q, d] : blocks) {
    if (q < 3 || q % 2 == 0) throw InputError("standard module: q = " + std::to_string(q) + " must be odd and > 1 (even order is not supported)");
    if (d < 0) throw InputError("standard module: negative multiplicity");
    n = nt::lcm(n, q);
  }
  std::vector<int64_t> orders;
  for (auto [q, d] : blocks)
    for (int t = 0; t < 2 * d; ++t) orders.push_back(q);
  const size_t m = orders.size();
  IntMat gram(m, Elem(m, 0));
  size_t off = 0;
  for (auto [q, d] : blocks) {
    for (int i = 0; i < d; ++i) {
      gram[off + i][off + d + i] = n / q;
      gram[off + d + i][off + i] = n - n / q;
    }
    off += 2 * static_cast<size_t>(d);
  }
  return SympMod(AbGroup(orders), n, gram);
}

inline Subgroup orth_complement(const SympMod& m, const Subgroup& s) {
  std::vector<Elem> images(m.rank());
  const auto gens = s.gens();
  for (size_t i = 0; i < m.rank(); ++i) {
    images[i].resize(gens.size());
    for (size_t k = 0; k < gens.size(); ++k) images[i][k] = m.pair(m.group().basis(i), gens[k]);
  }
  return kernel_of_hom(m.group(), std::vector<int64_t>(gens.size(), m.n()), images);
}

inline bool is_isotropic(const SympMod& m, const Subgroup& s) {
  auto g = s.gens();
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = i + 1; j < g.size(); ++j)
      if (m.pair(g[i], g[j]) != 0) return false;
  return true;
}

inline bool is_lagrangian(const SympMod& m, const Subgroup& s) { return orth_complement(m, s) == s; }

/// All lagrangian subgroups, sorted by canonical generators.
inline std::vector<Subgroup> enumerate_lagrangians(const SympMod& m, const Budget& budget = default_budget()) {
  if (m.order() > budget.lagrangians)
    throw BudgetError("enumerate_lagrangians: |M| = " + std::to_string(m.order()) + " exceeds budget " +
                      std::to_string(budget.lagrangians) + " (raise it with --budget)");
  const int64_t target = m.half_order();
  std::set<IntMat> seen;
  std::vector<Subgroup> frontier = {Subgroup::trivial(m.group())}, out;
  seen.insert(frontier[0].hnf());
  while (!frontier.empty()) {
    std::vector<Subgroup> next;
    for (const auto& iso : frontier) {
      if (iso.order() == target) {
        out.push_back(iso);
        continue;
      }
      const Subgroup perp = orth_complement(m, iso);
      // One generator per cyclic extension: coset reps of perp/iso suffice.
      for (const auto& x : perp.elements()) {
        if (iso.contains(x) || iso.coset_rep(x) != x) continue;
        auto gens = iso.gens();
        gens.push_back(x);
        Subgroup bigger = Subgroup::from_gens(m.group(), gens);
        if (seen.insert(bigger.hnf()).second) next.push_back(bigger);
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Group endomorphism of M as an integer matrix acting on column vectors.
class SympAut {
 public:
  SympAut() = default;
  SympAut(const AbGroup& g, IntMat mat) : group_(g), mat_(std::move(mat)) {
    for (size_t i = 0; i < g.rank(); ++i)
      for (size_t j = 0; j < g.rank(); ++j) mat_[i][j] = nt::mod(mat_[i][j], g.orders()[i]);
  }
  static SympAut identity(const AbGroup& g) {
    IntMat m(g.rank(), Elem(g.rank(), 0));
    for (size_t i = 0; i < g.rank(); ++i) m[i][i] = 1 % g.orders()[i];
    return SympAut(g, m);
  }
  /// Column j is the image of e_j.
  static SympAut from_images(const AbGroup& g, const std::vector<Elem>& images) {
    IntMat m(g.rank(), Elem(g.rank(), 0));
    for (size_t j = 0; j < g.rank(); ++j)
      for (size_t i = 0; i < g.rank(); ++i) m[i][j] = images[j][i];
    return SympAut(g, m);
  }

  const AbGroup& group() const { return group_; }
  const IntMat& matrix() const { return mat_; }

  Elem operator()(const Elem& x) const {
    Elem y(group_.rank(), 0);
    for (size_t i = 0; i < group_.rank(); ++i) {
      __int128 acc = 0;
      for (size_t j = 0; j < group_.rank(); ++j) acc += (__int128)mat_[i][j] * x[j];
      y[i] = nt::mod(static_cast<int64_t>(acc % group_.orders()[i]), group_.orders()[i]);
    }
    return y;
  }

  Elem image(size_t j) const {
    Elem y(group_.rank());
    for (size_t i = 0; i < group_.rank(); ++i) y[i] = mat_[i][j];
    return y;
  }

  Subgroup operator()(const Subgroup& s) const {
    std::vector<Elem> g;
    for (const auto& x : s.gens()) g.push_back((*this)(x));
    return Subgroup::from_gens(group_, g);
  }

  friend SympAut operator*(const SympAut& a, const SympAut& b) {
    std::vector<Elem> imgs;
    for (size_t j = 0; j < a.group_.rank(); ++j) imgs.push_back(a(b.image(j)));
    return from_images(a.group_, imgs);
  }

  friend bool operator==(const SympAut& a, const SympAut& b) { return a.mat_ == b.mat_; }
  friend bool operator<(const SympAut& a, const SympAut& b) { return a.mat_ < b.mat_; }

  bool is_bijective() const {
    std::vector<Elem> imgs;
    for (size_t j = 0; j < group_.rank(); ++j) imgs.push_back(image(j));
    return well_defined() && Subgroup::from_gens(group_, imgs).order() == group_.order();
  }

  bool well_defined() const {
    for (size_t j = 0; j < group_.rank(); ++j)
      if (group_.orders()[j] % group_.element_order(image(j)) != 0) return false;
    return true;
  }

  bool preserves(const SympMod& m) const {
    for (size_t i = 0; i < group_.rank(); ++i)
      for (size_t j = 0; j < group_.rank(); ++j)
        if (m.pair(image(i), image(j)) != m.gram()[i][j]) return false;
    return true;
  }

  bool is_symplectic(const SympMod& m) const { return well_defined() && is_bijective() && preserves(m); }

  SympAut inverse() const {
    const SympAut id = identity(group_);
    SympAut prev = id, p = *this;
    for (int k = 0; k < 100000; ++k) {
      if (p == id) return prev;
      prev = p;
      p = p * (*this);
    }
    throw DefectError("SympAut::inverse: order too large");
  }

  std::string to_string() const {
    std::string s = "[";
    for (size_t i = 0; i < mat_.size(); ++i) {
      s += i ? ",[" : "[";
      for (size_t j = 0; j < mat_[i].size(); ++j) s += (j ? "," : "") + std::to_string(mat_[i][j]);
      s += "]";
    }
    return s + "]";
  }

 private:
  AbGroup group_;
  IntMat mat_;
};

/// m -> m + lambda <m, v> v
inline SympAut transvection(const SympMod& m, const Elem& v, int64_t lambda) {
  std::vector<Elem> imgs;
  for (size_t j = 0; j < m.rank(); ++j) {
    const Elem e = m.group().basis(j);
    imgs.push_back(m.group().add(e, m.group().scale(nt::mod(lambda * m.pair(e, v), m.n()), v)));
  }
  return SympAut::from_images(m.group(), imgs);
}

/// Every symplectic automorphism, by backtracking over basis images.
inline std::vector<SympAut> sp_enumerate(const SympMod& m, const Budget& budget = default_budget()) {
  if (m.order() > budget.sp_enumerate)
    throw BudgetError("sp_elements: full enumeration needs |M| <= " + std::to_string(budget.sp_enumerate) +
                      " (|M| = " + std::to_string(m.order()) + "; use sampling or raise --budget)");
  const auto& g = m.group();
  const auto all = g.elements();
  std::vector<SympAut> out;
  std::vector<Elem> imgs;
  std::function<void(size_t)> rec = [&](size_t j) {
    if (j == m.rank()) {
      SympAut a = SympAut::from_images(g, imgs);
      if (a.is_bijective()) out.push_back(a);
      return;
    }
    for (const auto& x : all) {
      if (g.element_order(x) != g.element_order(g.basis(j))) continue;
      bool ok = true;
      for (size_t i = 0; i < j && ok; ++i) ok = m.pair(imgs[i], x) == m.gram()[i][j];
      if (!ok) continue;
      imgs.push_back(x);
      rec(j + 1);
      imgs.pop_back();
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

/// All transvections t_{v, lambda}, deduplicated, sorted.
inline std::vector<SympAut> sp_transvections(const SympMod& m, const Budget& budget = default_budget()) {
  if (m.order() * m.n() > budget.elements) throw BudgetError("sp_transvections: too many (v, lambda) pairs");
  std::set<SympAut> seen;
  for (const auto& v : m.group().elements())
    for (int64_t l = 0; l < m.n(); ++l) seen.insert(transvection(m, v, l));
  return {seen.begin(), seen.end()};
}

/// Deterministic pseudorandom products of transvections.
inline std::vector<SympAut> sp_sample(const SympMod& m, uint64_t seed, size_t count, size_t length = 0) {
  std::mt19937_64 rng(seed);
  if (length == 0) length = 2 * m.rank() + 4;
  std::vector<SympAut> out;
  const uint64_t order = static_cast<uint64_t>(m.order());
  for (size_t c = 0; c < count; ++c) {
    SympAut g = SympAut::identity(m.group());
    for (size_t t = 0; t < length; ++t) {
      Elem v = m.group().element(static_cast<size_t>(rng() % order));
      int64_t l = static_cast<int64_t>(rng() % static_cast<uint64_t>(m.n()));
      g = transvection(m, v, l) * g;
    }
    out.push_back(g);
  }
  return out;
}

/// Pseudorandom group automorphism of G (not necessarily symplectic): product
/// of elementary shears e_j -> e_j + c x and unit scalings.
inline SympAut random_group_automorphism(const AbGroup& g, std::mt19937_64& rng, size_t steps = 12) {
  SympAut a = SympAut::identity(g);
  const size_t r = g.rank();
  if (r == 0) return a;
  for (size_t s = 0; s < steps; ++s) {
    const size_t j = static_cast<size_t>(rng() % r), i = static_cast<size_t>(rng() % r);
    std::vector<Elem> imgs;
    for (size_t k = 0; k < r; ++k) imgs.push_back(g.basis(k));
    if (i == j) {
      int64_t u;
      do u = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(std::max<int64_t>(g.orders()[j], 2)));
      while (nt::gcd(u, g.orders()[j]) != 1);
      imgs[j] = g.scale(u, g.basis(j));
    } else {
      // e_j -> e_j + c * (scaled e_i) where the added term has order dividing d_j.
      const int64_t di = g.orders()[i], dj = g.orders()[j];
      const int64_t unit = di / nt::gcd(di, dj);
      const int64_t c = static_cast<int64_t>(rng() % static_cast<uint64_t>(di));
      imgs[j][i] = nt::mod(c * unit, di);
    }
    a = SympAut::from_images(g, imgs) * a;
  }
  return a;
}

/// M_c = S^perp / S with the induced pairing <,>_c = <,> / scale, valued in Z/n_c.
struct InducedForm {
  SympMod mc;
  Subgroup s, perp;
  Quotient q;
  int64_t scale;

  Elem project(const Elem& x) const { return q.project(x); }
  Elem lift(const Elem& y) const { return q.section(y); }
};

/// n_c defaults to exponent(S^perp/S), or to the smallest prime of n when the
/// quotient is trivial.
inline InducedForm induced_form(const SympMod& m, const Subgroup& s, int64_t nc = 0) {
  if (!is_isotropic(m, s)) throw InputError("induced_form: S is not isotropic");
  Subgroup perp = orth_complement(m, s);
  Quotient q(perp, s);
  const AbGroup& g = q.group();
  if (nc == 0) nc = g.exponent() > 1 ? g.exponent() : (m.n() > 1 ? nt::prime_divisors(m.n()).front() : 1);
  if (m.n() % nc != 0) throw InputError("induced_form: n_c must divide n");
  const int64_t scale = m.n() / nc;
  IntMat gram(g.rank(), Elem(g.rank()));
  for (size_t i = 0; i < g.rank(); ++i)
    for (size_t j = 0; j < g.rank(); ++j) {
      const int64_t v = m.pair(q.section(g.basis(i)), q.section(g.basis(j)));
      if (v % scale != 0) throw InputError("induced_form: pairing values on S^perp are not divisible by n/n_c");
      gram[i][j] = v / scale;
    }
  return InducedForm{SympMod(g, nc, gram), s, perp, q, scale};
}

// ---------------------------------------------------------------- enhanced lagrangians

struct EnhLag {
  Subgroup lag;
  int eps = 1;

  EnhLag flipped() const { return {lag, -eps}; }
  friend bool operator==(const EnhLag& a, const EnhLag& b) { return a.eps == b.eps && a.lag == b.lag; }
  friend bool operator!=(const EnhLag& a, const EnhLag& b) { return !(a == b); }
  friend bool operator<(const EnhLag& a, const EnhLag& b) {
    if (a.lag != b.lag) return a.lag < b.lag;
    return a.eps > b.eps;
  }
  std::string key() const {
    std::string s;
    for (const auto& g : lag.gens()) {
      s += "(";
      for (size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + std::to_string(g[i]);
      s += ")";
    }
    if (s.empty()) s = "0";
    return s + (eps > 0 ? "+" : "-");
  }
};

inline std::pair<EnhLag, EnhLag> enhanced_points(const Subgroup& l) { return {EnhLag{l, 1}, EnhLag{l, -1}}; }

inline void require_elementary(const SympMod& m) {
  if (!m.is_elementary() && m.order() != 1) throw InputError("enhanced lagrangians need an elementary abelian module over F_p");
}

/// u in F_p^* with g(b_L) = u b_{gL}, where b_L is the wedge of the canonical
/// (reduced echelon) generators of L.
inline int64_t wedge_ratio(const SympMod& m, const SympAut& g, const Subgroup& l) {
  const int64_t p = m.n();
  const auto src = l.gens();
  const Subgroup gl = g(l);
  const auto dst = gl.gens();
  const size_t d = src.size();
  if (dst.size() != d) throw DefectError("wedge_ratio: dimension mismatch");
  std::vector<size_t> piv(d);
  for (size_t k = 0; k < d; ++k) {
    size_t c = 0;
    while (dst[k][c] == 0) ++c;
    piv[k] = c;
  }
  // A[i][k] = coefficient of dst[k] in g(src[i]) = entry at dst[k]'s pivot.
  IntMat a(d, Elem(d));
  for (size_t i = 0; i < d; ++i) {
    Elem y = g(src[i]);
    for (size_t k = 0; k < d; ++k) a[i][k] = y[piv[k]];
  }
  int64_t det = 1;
  for (size_t c = 0; c < d; ++c) {
    size_t r = c;
    while (r < d && a[r][c] % p == 0) ++r;
    if (r == d) throw DefectError("wedge_ratio: singular transition matrix");
    if (r != c) {
      std::swap(a[r], a[c]);
      det = -det;
    }
    det = nt::mod(det * a[c][c], p);
    const int64_t inv = nt::inv_mod(a[c][c], p);
    for (size_t i = c + 1; i < d; ++i) {
      const int64_t f = nt::mod(a[i][c] * inv, p);
      for (size_t k = c; k < d; ++k) a[i][k] = nt::mod(a[i][k] - f * a[c][k], p);
    }
  }
  return nt::mod(det, p);
}

inline EnhLag act_enhanced(const SympMod& m, const SympAut& g, const EnhLag& l0) {
  require_elementary(m);
  if (m.order() == 1) return l0;
  const int64_t u = wedge_ratio(m, g, l0.lag);
  return {g(l0.lag), l0.eps * nt::legendre(u, m.n())};
}

/// Both lifts of every lagrangian, sorted.
inline std::vector<EnhLag> enumerate_enhanced(const SympMod& m, const Budget& budget = default_budget()) {
  require_elementary(m);
  std::vector<EnhLag> out;
  for (const auto& l : enumerate_lagrangians(m, budget)) {
    out.push_back({l, 1});
    out.push_back({l, -1});
  }
  return out;
}

// ---------------------------------------------------------------- Gauss sums

/// G(L, b) = sum_l zeta_e^{b(l, l)} for a symmetric nondegenerate pairing b on L
/// given by its Gram matrix valued in Z/e, e = exponent(L).
inline CycNum gauss_sum(const AbGroup& l, const IntMat& b) {
  const int64_t e = l.exponent();
  if (l.order() % 2 == 0) throw InputError("gauss_sum: |L| must be odd");
  const size_t r = l.rank();
  if (b.size() != r) throw InputError("gauss_sum: gram has wrong size");
  std::vector<Elem> images(r, Elem(r));
  for (size_t i = 0; i < r; ++i) {
    if (b[i].size() != r) throw InputError("gauss_sum: gram has wrong size");
    for (size_t j = 0; j < r; ++j) {
      if (nt::mod(b[i][j] - b[j][i], e) != 0) throw InputError("gauss_sum: pairing is not symmetric");
      if (nt::mod(b[i][j] * l.orders()[i], e) != 0) throw InputError("gauss_sum: pairing is not well defined");
      images[i][j] = nt::mod(b[i][j], e);
    }
  }
  if (kernel_of_hom(l, std::vector<int64_t>(r, e), images).order() != 1) throw InputError("gauss_sum: pairing is degenerate");
  std::vector<int64_t> counts(static_cast<size_t>(e), 0);
  for (const auto& x : l.elements()) {
    int64_t q = 0;
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < r; ++j) q = nt::mod(q + x[i] * x[j] % e * nt::mod(b[i][j], e), e);
    ++counts[static_cast<size_t>(q)];
  }
  return CycNum::from_root_counts(e, counts);
}

/// Random symmetric nondegenerate Gram matrix on L valued in Z/exponent(L),
/// by rejection.
inline IntMat random_symmetric_form(const AbGroup& l, std::mt19937_64& rng, size_t tries = 1000) {
  const int64_t e = l.exponent();
  const size_t r = l.rank();
  for (size_t t = 0; t < tries; ++t) {
    IntMat b(r, Elem(r, 0));
    std::vector<Elem> images(r, Elem(r));
    for (size_t i = 0; i < r; ++i)
      for (size_t j = i; j < r; ++j) {
        const int64_t unit = e / nt::gcd(l.orders()[i], l.orders()[j]);
        b[i][j] = b[j][i] = nt::mod(unit * static_cast<int64_t>(rng() % static_cast<uint64_t>(e)), e);
      }
    for (size_t i = 0; i < r; ++i) images[i] = b[i];
    if (kernel_of_hom(l, std::vector<int64_t>(r, e), images).order() == 1) return b;
  }
  throw BudgetError("random_symmetric_form: no nondegenerate form found");
}

/// Abelian groups of odd order <= max_order, one per isomorphism class, in
/// invariant-factor form d_1 | d_2 | ...
inline std::vector<AbGroup> odd_abelian_groups(int64_t max_order) {
  std::vector<AbGroup> out;
  std::function<void(std::vector<int64_t>&, int64_t)> rec = [&](std::vector<int64_t>& cur, int64_t order) {
    if (!cur.empty()) out.emplace_back(cur);
    for (int64_t d = cur.empty() ? 3 : cur.back(); order * d <= max_order; d += 2) {
      if (!cur.empty() && d % cur.back() != 0) continue;
      cur.push_back(d);
      rec(cur, order * d);
      cur.pop_back();
    }
  };
  std::vector<int64_t> cur;
  rec(cur, 1);
  return out;
}

}  // namespace heis
