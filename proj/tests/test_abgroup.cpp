#include <gtest/gtest.h>

#include <random>
#include <set>

#include "heis/abgroup.hpp"

using namespace heis;

namespace {

// Oracle: span of generators by closure under addition.
std::set<Elem> brute_span(const AbGroup& g, const std::vector<Elem>& gens) {
  std::set<Elem> s = {g.zero()};
  std::vector<Elem> todo = {g.zero()};
  while (!todo.empty()) {
    Elem x = todo.back();
    todo.pop_back();
    for (const auto& y : gens) {
      Elem z = g.add(x, g.reduce(y));
      if (s.insert(z).second) todo.push_back(z);
    }
  }
  return s;
}

}  // namespace

TEST(AbGroup, SubgroupExamples) {
  AbGroup z9({9});
  EXPECT_EQ(Subgroup::from_gens(z9, {{3}}).order(), 3);
  AbGroup z33({3, 3});
  EXPECT_EQ(Subgroup::from_gens(z33, {{1, 0}, {0, 1}}).order(), 9);
  AbGroup z93({9, 3});
  auto s = Subgroup::from_gens(z93, {{3, 1}});
  EXPECT_EQ(s.order(), 3);
  auto want = brute_span(z93, {{3, 1}});
  auto got = s.elements();
  EXPECT_EQ(std::set<Elem>(got.begin(), got.end()), want);
}

TEST(AbGroup, NormalFormUniqueness) {
  std::mt19937_64 rng(5);
  const std::vector<AbGroup> groups = {AbGroup({9, 3}), AbGroup({3, 3, 3}), AbGroup({27, 9}), AbGroup({15, 5}),
                                       AbGroup({5, 25})};
  for (const auto& g : groups)
    for (int t = 0; t < 40; ++t) {
      std::vector<Elem> gens;
      const int k = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < k; ++i) gens.push_back(g.element(rng() % static_cast<uint64_t>(g.order())));
      auto s = Subgroup::from_gens(g, gens);
      auto span = brute_span(g, gens);
      ASSERT_EQ(s.order(), static_cast<int64_t>(span.size()));
      for (const auto& x : g.elements()) ASSERT_EQ(s.contains(x), span.count(x) == 1);
      // Regenerate from random elements of the span until they generate it.
      std::vector<Elem> elems(span.begin(), span.end()), regen;
      while (static_cast<int64_t>(brute_span(g, regen).size()) != s.order())
        regen.push_back(elems[rng() % elems.size()]);
      EXPECT_EQ(Subgroup::from_gens(g, regen), s);
      EXPECT_EQ(Subgroup::from_gens(g, s.gens()), s);
    }
}

TEST(AbGroup, QuotientExamples) {
  AbGroup z9({9});
  auto q = quotient(z9, Subgroup::from_gens(z9, {{3}}));
  EXPECT_EQ(q.group(), AbGroup({3}));
  AbGroup z33({3, 3});
  auto qd = quotient(z33, Subgroup::from_gens(z33, {{1, 1}}));
  EXPECT_EQ(qd.group().order(), 3);
  auto qt = quotient(z33, Subgroup::whole(z33));
  EXPECT_EQ(qt.group().order(), 1);
}

TEST(AbGroup, QuotientProperties) {
  std::mt19937_64 rng(9);
  const std::vector<AbGroup> groups = {AbGroup({9, 3}), AbGroup({3, 3, 3}), AbGroup({27, 9}), AbGroup({45, 5})};
  for (const auto& g : groups)
    for (int t = 0; t < 20; ++t) {
      std::vector<Elem> gens = {g.element(rng() % static_cast<uint64_t>(g.order())),
                                g.element(rng() % static_cast<uint64_t>(g.order()))};
      auto s = Subgroup::from_gens(g, gens);
      auto q = quotient(g, s);
      EXPECT_EQ(g.order(), s.order() * q.group().order());
      for (size_t i = 1; i < q.group().rank(); ++i) EXPECT_EQ(q.group().orders()[i] % q.group().orders()[i - 1], 0);
      EXPECT_EQ(q.section(q.group().zero()), g.zero());
      for (const auto& y : q.group().elements()) {
        Elem x = q.section(y);
        ASSERT_EQ(q.project(x), y);
        // lexicographically smallest in its coset (oracle: scan the coset)
        Elem best = x;
        for (const auto& sv : s.elements()) best = std::min(best, g.add(x, sv));
        ASSERT_EQ(best, x);
      }
      // projection is a homomorphism
      for (int k = 0; k < 20; ++k) {
        Elem a = g.element(rng() % static_cast<uint64_t>(g.order())), b = g.element(rng() % static_cast<uint64_t>(g.order()));
        EXPECT_EQ(q.project(g.add(a, b)), q.group().add(q.project(a), q.project(b)));
      }
    }
}

TEST(AbGroup, TorsionAndScale) {
  AbGroup z9({9});
  auto [t, s] = torsion_and_scale(z9, 3, 1);
  EXPECT_EQ(t, Subgroup::from_gens(z9, {{3}}));
  EXPECT_EQ(s, Subgroup::from_gens(z9, {{3}}));
  AbGroup z93({9, 3});
  auto [t2, s2] = torsion_and_scale(z93, 3, 1);
  EXPECT_EQ(t2.order(), 9);
  EXPECT_EQ(Quotient(Subgroup::whole(z93), Subgroup::trivial(z93)).group().order(), 27);
  EXPECT_EQ(s2.order(), 3);
  EXPECT_EQ(Quotient(t2, Subgroup::trivial(z93)).group(), AbGroup({3, 3}));
  AbGroup z25({25});
  auto [t3, s3] = torsion_and_scale(z25, 3, 1);
  EXPECT_EQ(t3.order(), 1);
  EXPECT_EQ(s3, Subgroup::whole(z25));
  auto [t0, s0] = torsion_and_scale(z93, 3, 0);
  EXPECT_EQ(t0.order(), 1);
  EXPECT_EQ(s0, Subgroup::whole(z93));
}

TEST(AbGroup, RhoK) {
  for (int64_t p : {3, 5})
    for (int m = 1; m <= 3; ++m)
      for (int k = 1; k <= 4; ++k) {
        auto r = rho_k(AbGroup({nt::ipow(p, m)}), p, k);
        EXPECT_EQ(r.order(), m == k ? p : 1) << p << " " << m << " " << k;
      }
  EXPECT_EQ(rho_k(AbGroup({9, 3}), 3, 1), AbGroup({3}));
  // multiplicativity and elementary abelian
  const std::vector<std::vector<int64_t>> gs = {{9}, {3, 27}, {9, 9, 3}, {27}};
  for (const auto& a : gs)
    for (const auto& b : gs)
      for (int k = 1; k <= 4; ++k) {
        std::vector<int64_t> ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        auto r = rho_k(AbGroup(ab), 3, k);
        EXPECT_EQ(r.order(), rho_k(AbGroup(a), 3, k).order() * rho_k(AbGroup(b), 3, k).order());
        for (auto d : r.orders()) EXPECT_EQ(d, 3);
      }
}

TEST(AbGroup, PrimaryComponents) {
  AbGroup z15({15});
  EXPECT_EQ(primary_component(z15, 3).order(), 3);
  EXPECT_EQ(primary_component(z15, 7).order(), 1);
  AbGroup g({45, 5});
  auto p5 = primary_component(g, 5);
  // oracle: count elements of 5-power order
  int count = 0;
  for (const auto& x : g.elements())
    if (g.element_order(x) == 1 || g.element_order(x) == 5 || g.element_order(x) == 25) ++count;
  EXPECT_EQ(p5.order(), count);
  EXPECT_EQ(Quotient(p5, Subgroup::trivial(g)).group(), AbGroup({5, 5}));
  auto p3 = primary_component(g, 3);
  EXPECT_EQ(p3.order() * p5.order(), g.order());
  EXPECT_EQ(p3.intersect(p5).order(), 1);
}

TEST(AbGroup, KernelOfHom) {
  AbGroup g({9, 3});
  // (x, y) -> x + 3y mod 9
  auto k = kernel_of_hom(g, {9}, {{1}, {3}});
  int count = 0;
  for (const auto& x : g.elements())
    if ((x[0] + 3 * x[1]) % 9 == 0) {
      ++count;
      EXPECT_TRUE(k.contains(x));
    }
  EXPECT_EQ(k.order(), count);
}
