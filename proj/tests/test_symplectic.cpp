#include <gtest/gtest.h>

#include <random>
#include <set>

#include "heis/symplectic.hpp"

using namespace heis;

namespace {

// Oracle: all subgroups of order k by brute-force spans of pairs of elements
// (enough for rank <= 2 subgroups), filtered to isotropic ones.
size_t brute_lagrangian_count(const SympMod& m) {
  const auto all = m.group().elements();
  const int64_t target = m.half_order();
  std::set<IntMat> found;
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i; j < all.size(); ++j) {
      if (m.pair(all[i], all[j]) != 0) continue;
      auto s = Subgroup::from_gens(m.group(), {all[i], all[j]});
      if (s.order() == target) found.insert(s.hnf());
    }
  return found.size();
}

int64_t sp_order_elementary(int64_t p, int d) {
  int64_t o = nt::ipow(p, d * d);
  for (int i = 1; i <= d; ++i) o *= nt::ipow(p, 2 * i) - 1;
  return o;
}

}  // namespace

TEST(Symplectic, StandardModule) {
  auto m = standard_module({{3, 1}});
  EXPECT_EQ(m.group(), AbGroup({3, 3}));
  EXPECT_EQ(m.gram(), (IntMat{{0, 1}, {2, 0}}));
  auto m9 = standard_module({{9, 1}});
  EXPECT_EQ(m9.n(), 9);
  EXPECT_EQ(m9.order(), 81);
  auto m4 = standard_module({{3, 2}});
  EXPECT_EQ(m4.group(), AbGroup({3, 3, 3, 3}));
  EXPECT_EQ(m4.gram()[0][2], 1);
  EXPECT_EQ(m4.gram()[1][3], 1);
  EXPECT_EQ(m4.gram()[0][3], 0);
  EXPECT_THROW(standard_module({{2, 1}}), InputError);
  EXPECT_THROW(standard_module({{1, 1}}), InputError);
  auto mixed = standard_module({{9, 1}, {3, 1}});
  EXPECT_EQ(mixed.n(), 9);
  EXPECT_EQ(mixed.gram()[2][3], 3);
}

TEST(Symplectic, ValidationRejects) {
  EXPECT_THROW(SympMod(AbGroup({3, 3}), 3, {{1, 1}, {2, 0}}), InputError);  // not alternating
  EXPECT_THROW(SympMod(AbGroup({3, 3}), 3, {{0, 0}, {0, 0}}), InputError);  // degenerate
  EXPECT_THROW(SympMod(AbGroup({9, 9}), 3, {{0, 1}, {2, 0}}), InputError);  // exponent does not divide n
  EXPECT_THROW(SympMod(AbGroup({9, 3}), 9, {{0, 3}, {6, 0}}), InputError);  // not a square
}

TEST(Symplectic, BetaProperties) {
  auto m = standard_module({{3, 1}});
  for (const auto& a : m.group().elements())
    for (const auto& b : m.group().elements()) {
      EXPECT_EQ(m.beta(a, b), nt::mod(2 * m.pair(a, b), 3));
      EXPECT_EQ(nt::mod(2 * m.beta(a, b), 3), m.pair(a, b));
      EXPECT_EQ(nt::mod(m.beta(a, b) + m.beta(b, a), 3), 0);
    }
  // uniqueness over all biadditive alternating forms on (Z/3)^2: b determined by b(e1,e2)
  int solutions = 0;
  for (int64_t c = 0; c < 3; ++c) {
    bool ok = true;
    for (const auto& a : m.group().elements())
      for (const auto& b : m.group().elements()) {
        int64_t v = nt::mod(c * (a[0] * b[1] - a[1] * b[0]), 3);
        if (nt::mod(2 * v, 3) != m.pair(a, b)) ok = false;
      }
    if (ok) {
      ++solutions;
      EXPECT_EQ(c, m.beta(m.group().basis(0), m.group().basis(1)));
    }
  }
  EXPECT_EQ(solutions, 1);
}

TEST(Symplectic, OrthComplement) {
  auto m = standard_module({{9, 1}});
  auto s = Subgroup::trivial(m.group());
  EXPECT_EQ(orth_complement(m, s), Subgroup::whole(m.group()));
  auto three = Subgroup::whole(m.group()).scaled(3);
  EXPECT_EQ(orth_complement(m, three), three);
  // oracle: brute-force complement on a mixed module
  auto mm = standard_module({{9, 1}, {3, 1}});
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    auto sub = Subgroup::from_gens(mm.group(), {mm.group().element(rng() % 729)});
    auto perp = orth_complement(mm, sub);
    size_t count = 0;
    for (const auto& x : mm.group().elements()) {
      bool in = true;
      for (const auto& g : sub.gens()) in = in && mm.pair(x, g) == 0;
      EXPECT_EQ(in, perp.contains(x));
      count += in;
    }
    EXPECT_EQ(sub.order() * perp.order(), mm.order());
    EXPECT_EQ(orth_complement(mm, perp), sub);
  }
}

TEST(Symplectic, LagrangianCounts) {
  auto m3 = standard_module({{3, 1}});
  EXPECT_EQ(enumerate_lagrangians(m3).size(), 4u);
  EXPECT_EQ(brute_lagrangian_count(m3), 4u);
  auto m34 = standard_module({{3, 2}});
  EXPECT_EQ(enumerate_lagrangians(m34).size(), 40u);
  EXPECT_EQ(brute_lagrangian_count(m34), 40u);
  auto m5 = standard_module({{5, 1}});
  EXPECT_EQ(enumerate_lagrangians(m5).size(), 6u);
  EXPECT_EQ(brute_lagrangian_count(m5), 6u);
  auto m7 = standard_module({{7, 1}});
  EXPECT_EQ(enumerate_lagrangians(m7).size(), 8u);
  for (const auto& mod : {m3, m34, m5, m7, standard_module({{9, 1}}), standard_module({{9, 1}, {3, 1}})}) {
    for (const auto& l : enumerate_lagrangians(mod)) {
      EXPECT_EQ(l.order(), mod.half_order());
      EXPECT_TRUE(is_lagrangian(mod, l));
    }
  }
  EXPECT_EQ(enumerate_lagrangians(standard_module({{9, 1}})).size(), brute_lagrangian_count(standard_module({{9, 1}})));
  Budget small;
  small.lagrangians = 10;
  EXPECT_THROW(enumerate_lagrangians(m34, small), BudgetError);
}

TEST(Symplectic, InducedFormExample) {
  // Quotient S^perp / S for S = 3 (Z/9)^2 inside (Z/9)^2 + (Z/3)^2
  auto m = standard_module({{9, 1}, {3, 1}});
  auto s = Subgroup::from_gens(m.group(), {{3, 0, 0, 0}, {0, 3, 0, 0}});
  auto perp = orth_complement(m, s);
  Quotient q(perp, s);
  EXPECT_EQ(q.group(), AbGroup({3, 3}));
}

TEST(Symplectic, SpEnumerate) {
  auto m = standard_module({{3, 1}});
  auto sp = sp_enumerate(m);
  EXPECT_EQ(sp.size(), 24u);
  // oracle: all 2x2 matrices over F_3 with determinant 1
  int count = 0;
  for (int a = 0; a < 81; ++a) {
    int x = a % 3, y = a / 3 % 3, z = a / 9 % 3, w = a / 27;
    if (nt::mod(x * w - y * z, 3) == 1) ++count;
  }
  EXPECT_EQ(count, 24);
  EXPECT_TRUE(std::find(sp.begin(), sp.end(), SympAut::identity(m.group())) != sp.end());
  for (const auto& g : sp) EXPECT_TRUE(g.is_symplectic(m));
  EXPECT_EQ(sp_enumerate(standard_module({{5, 1}})).size(), static_cast<size_t>(sp_order_elementary(5, 1)));
  EXPECT_EQ(sp_enumerate(standard_module({{3, 2}})).size(), static_cast<size_t>(sp_order_elementary(3, 2)));
  EXPECT_THROW(sp_enumerate(standard_module({{5, 2}})), BudgetError);
}

TEST(Symplectic, Transvections) {
  std::mt19937_64 rng(2);
  for (const auto& m : {standard_module({{3, 1}}), standard_module({{9, 1}, {3, 1}}), standard_module({{5, 1}})}) {
    const uint64_t o = static_cast<uint64_t>(m.order());
    for (int t = 0; t < 30; ++t) {
      Elem v = m.group().element(rng() % o);
      int64_t l = static_cast<int64_t>(rng() % static_cast<uint64_t>(m.n()));
      auto tr = transvection(m, v, l);
      EXPECT_TRUE(tr.is_symplectic(m));
      for (int k = 0; k < 5; ++k) {
        Elem a = m.group().element(rng() % o), b = m.group().element(rng() % o);
        EXPECT_EQ(m.pair(tr(a), tr(b)), m.pair(a, b));
        // direct formula
        EXPECT_EQ(tr(a), m.group().add(a, m.group().scale(l * m.pair(a, v), v)));
      }
      EXPECT_EQ(tr * tr.inverse(), SympAut::identity(m.group()));
    }
  }
  auto m = standard_module({{3, 1}});
  EXPECT_EQ(sp_transvections(m).size(), 9u);  // identity + 8 nontrivial transvections in SL(2,3)
  auto s1 = sp_sample(m, 42, 10), s2 = sp_sample(m, 42, 10);
  EXPECT_EQ(s1, s2);
  for (const auto& g : s1) EXPECT_TRUE(g.is_symplectic(m));
}

TEST(Symplectic, SpActionOnLagrangians) {
  auto m = standard_module({{3, 2}});
  auto lags = enumerate_lagrangians(m);
  std::set<IntMat> lagset;
  for (const auto& l : lags) lagset.insert(l.hnf());
  for (const auto& g : sp_sample(m, 7, 20))
    for (const auto& l : lags) EXPECT_TRUE(lagset.count(g(l).hnf()));
}

TEST(Symplectic, EnhancedPoints) {
  auto m = standard_module({{3, 1}});
  auto l = Subgroup::from_gens(m.group(), {{1, 0}});
  auto [a, b] = enhanced_points(l);
  EXPECT_EQ(a.flipped(), b);
  auto id = SympAut::identity(m.group());
  EXPECT_EQ(act_enhanced(m, id, a), a);
  // diag(2, 2^{-1}) = diag(2, 2)
  SympAut d(m.group(), {{2, 0}, {0, 2}});
  ASSERT_TRUE(d.is_symplectic(m));
  EXPECT_EQ(wedge_ratio(m, d, l), 2);
  EXPECT_EQ(act_enhanced(m, d, a), b);
  auto sp = sp_enumerate(m);
  auto enh = enumerate_enhanced(m);
  EXPECT_EQ(enh.size(), 8u);
  for (const auto& g : sp)
    for (const auto& h : sp)
      for (const auto& e : enh) {
        EXPECT_EQ(act_enhanced(m, g * h, e), act_enhanced(m, g, act_enhanced(m, h, e)));
        EXPECT_EQ(act_enhanced(m, g, e.flipped()), act_enhanced(m, g, e).flipped());
      }
  EXPECT_THROW(act_enhanced(standard_module({{9, 1}}), SympAut::identity(AbGroup({9, 9})), a), InputError);
}

TEST(Symplectic, GaussSums) {
  EXPECT_EQ(gauss_sum(AbGroup({3}), {{1}}), CycNum(1L) + CycNum(2L) * root_of_unity(3, 1));
  EXPECT_EQ(gauss_sum(AbGroup({5}), {{1}}), gauss_sum_quadratic(5));
  auto g33 = gauss_sum(AbGroup({3, 3}), {{1, 0}, {0, 1}});
  auto g3 = gauss_sum_quadratic(3);
  EXPECT_EQ(g33, g3 * g3);
  EXPECT_EQ(g33.pow(4), CycNum(81L));
  EXPECT_THROW(gauss_sum(AbGroup({3}), {{0}}), InputError);
  EXPECT_THROW(gauss_sum(AbGroup({3, 3}), {{1, 1}, {0, 1}}), InputError);
}
