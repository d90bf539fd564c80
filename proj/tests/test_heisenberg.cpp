#include <gtest/gtest.h>

#include <map>
#include <random>

#include "heis/heisenberg.hpp"

using namespace heis;

namespace {

HElem random_h(const HeisGrp& h, std::mt19937_64& rng) {
  return h.element(static_cast<size_t>(rng() % static_cast<uint64_t>(h.order())));
}

// Oracle: the induced module as explicit functions on H, built only from the
// group law and chi_L. Returns, for each basis index r, the full table of
// exponents (or -1 for zero) of f_r over H.
std::vector<std::vector<int64_t>> brute_basis(const HeisGrp& h, const Subgroup& l, const std::vector<Elem>& reps) {
  std::vector<std::vector<int64_t>> out;
  for (const auto& r : reps) {
    std::vector<int64_t> f(static_cast<size_t>(h.order()), -1);
    for (const auto& lv : l.elements())
      for (int64_t a = 0; a < h.n(); ++a) {
        HElem x = h.mul({lv, a}, h.lift(r));
        f[h.index(x)] = a;  // chi_L(l, a) = zeta^a with theta trivial
      }
    out.push_back(f);
  }
  return out;
}

}  // namespace

TEST(Heisenberg, GroupAxioms) {
  std::mt19937_64 rng(1);
  for (const auto& m : {standard_module({{3, 1}}), standard_module({{9, 1}, {3, 1}}), standard_module({{15, 1}})}) {
    HeisGrp h(m);
    EXPECT_EQ(h.order(), m.n() * m.order());
    for (int t = 0; t < 100; ++t) {
      HElem x = random_h(h, rng), y = random_h(h, rng), z = random_h(h, rng);
      EXPECT_EQ(h.mul(h.mul(x, y), z), h.mul(x, h.mul(y, z)));
      EXPECT_EQ(h.mul(x, h.identity()), x);
      EXPECT_EQ(h.mul(x, h.inv(x)), h.identity());
      EXPECT_EQ(h.inv(x), (HElem{m.group().neg(x.m), nt::mod(-x.a, m.n())}));
      EXPECT_EQ(h.commutator(x, y), h.central(m.pair(x.m, y.m)));
      EXPECT_EQ(h.sigma(h.mul(x, y)), h.mul(h.sigma(x), h.sigma(y)));
      EXPECT_EQ(h.sigma(h.sigma(x)), x);
      EXPECT_EQ(h.sigma(h.central(x.a)), h.central(x.a));
    }
  }
  HeisGrp h(standard_module({{3, 1}}));
  EXPECT_EQ(h.commutator(h.lift({1, 0}), h.lift({0, 1})), h.central(1));
  // exhaustive commutator identity for |H| = 27
  for (const auto& x : h.elements())
    for (const auto& y : h.elements()) ASSERT_EQ(h.commutator(x, y), h.central(h.base().pair(x.m, y.m)));
}

TEST(Heisenberg, SymplecticAction) {
  std::mt19937_64 rng(2);
  auto m = standard_module({{3, 2}});
  HeisGrp h(m);
  for (const auto& g : sp_sample(m, 3, 10)) {
    for (int t = 0; t < 30; ++t) {
      HElem x = random_h(h, rng), y = random_h(h, rng);
      EXPECT_EQ(h.act(g, h.mul(x, y)), h.mul(h.act(g, x), h.act(g, y)));
      EXPECT_EQ(h.act(g, h.sigma(x)), h.sigma(h.act(g, x)));
    }
    EXPECT_EQ(h.act(g, h.central(2)), h.central(2));
  }
  HElem x{{1, 2, 0, 1}, 2};
  EXPECT_EQ(h.act(SympAut::identity(m.group()), x), x);
}

TEST(Heisenberg, Primary) {
  auto m = standard_module({{15, 1}});
  HeisGrp h(m);
  auto h3 = heis_primary(h, 3), h5 = heis_primary(h, 5);
  EXPECT_EQ(h3.hp.base().group(), AbGroup({3, 3}));
  EXPECT_EQ(h5.hp.base().group(), AbGroup({5, 5}));
  EXPECT_EQ(h3.np * h5.np, 15);
  for (const auto& x : h3.hp.base().group().elements())
    for (const auto& y : h5.hp.base().group().elements()) {
      HElem a = h.lift(h3.embed(x)), b = h.lift(h5.embed(y));
      EXPECT_EQ(h.mul(a, b), h.mul(b, a));
    }
  // embedding is a homomorphism H_3 -> H
  for (const auto& x : h3.hp.elements())
    for (const auto& y : h3.hp.elements()) {
      auto emb = [&](const HElem& z) { return HElem{h3.embed(z.m), z.a * h3.cofactor(15)}; };
      ASSERT_EQ(emb(h3.hp.mul(x, y)), h.mul(emb(x), emb(y)));
    }
  auto m9 = standard_module({{9, 1}});
  auto p9 = heis_primary(HeisGrp(m9), 3);
  EXPECT_EQ(p9.hp.base().order(), 81);
  EXPECT_EQ(p9.np, 9);
}

TEST(Heisenberg, ChiL) {
  auto m = standard_module({{3, 1}});
  HeisGrp h(m);
  auto l = Subgroup::from_gens(m.group(), {{1, 0}});
  InducedModule v(h, l);
  for (const auto& x : l.elements())
    for (int64_t a = 0; a < 3; ++a) EXPECT_EQ(v.chi({x, a}), a);
  for (const Elem& w : {Elem{0, 0}, Elem{0, 1}, Elem{1, 1}}) {
    InducedModule vw(h, l, w);
    bool sigma_inv = true;
    for (const auto& x : l.elements())
      for (const auto& y : l.elements())
        for (int64_t a = 0; a < 3; ++a) {
          HElem p{x, a}, q{y, 0};
          EXPECT_EQ(vw.chi(h.mul(p, q)), nt::mod(vw.chi(p) + vw.chi(q), 3));
          if (vw.chi(h.sigma(p)) != vw.chi(p)) sigma_inv = false;
        }
    bool trivial = true;
    for (const auto& x : l.elements()) trivial = trivial && m.pair(w, x) == 0;
    EXPECT_EQ(sigma_inv, trivial);
  }
}

TEST(Heisenberg, InduceMatchesFunctionModel) {
  for (const auto& m : {standard_module({{3, 1}}), standard_module({{9, 1}}), standard_module({{5, 1}})}) {
    HeisGrp h(m);
    for (const auto& l : enumerate_lagrangians(m)) {
      InducedModule v(h, l);
      ASSERT_EQ(static_cast<int64_t>(v.dim()), m.half_order());
      auto basis = brute_basis(h, l, v.reps());
      for (size_t r = 0; r < v.dim(); ++r)
        for (const auto& x : h.elements()) {
          auto [c, e] = v.basis_value(x);
          const int64_t want = basis[r][h.index(x)];
          if (c == r)
            ASSERT_EQ(e, want);
          else
            ASSERT_EQ(want, -1);
        }
      // rho(h) against right translation of the brute-force functions
      for (const auto& g : h.elements()) {
        MonoMatrix rho = v.rho(g);
        for (size_t r = 0; r < v.dim(); ++r) {
          // (g f)(r, 0) = f((r,0) g); row r of rho is the coefficient map.
          HElem x = h.mul(h.lift(v.reps()[r]), g);
          size_t c = rho.col(r);
          ASSERT_EQ(basis[c][h.index(x)], rho.exp(r));
        }
      }
    }
  }
}

TEST(Heisenberg, RhoHomomorphism) {
  auto m = standard_module({{3, 1}});
  HeisGrp h(m);
  auto l = Subgroup::from_gens(m.group(), {{1, 0}});
  InducedModule v(h, l);
  EXPECT_EQ(v.dim(), 3u);
  for (const auto& x : h.elements())
    for (const auto& y : h.elements()) ASSERT_EQ(v.rho(x) * v.rho(y), v.rho(h.mul(x, y)));
  for (int64_t a = 0; a < 3; ++a) EXPECT_EQ(v.rho(h.central(a)).to_cyc(), root_of_unity(3, a) * CycMatrix::identity(3));
  // rho(e1) diagonal, rho(e2) a permutation
  MonoMatrix r1 = v.rho(h.lift({1, 0})), r2 = v.rho(h.lift({0, 1}));
  for (size_t i = 0; i < 3; ++i) EXPECT_EQ(r1.col(i), i);
  for (size_t i = 0; i < 3; ++i) EXPECT_EQ(r2.exp(i), 0);
  EXPECT_EQ(InducedModule(HeisGrp(standard_module({{3, 2}})), Subgroup::from_gens(AbGroup({3, 3, 3, 3}), {{1, 0, 0, 0}, {0, 1, 0, 0}})).dim(), 9u);
  std::mt19937_64 rng(4);
  auto mm = standard_module({{9, 1}, {3, 1}});
  HeisGrp hm(mm);
  for (const auto& lag : enumerate_lagrangians(mm)) {
    InducedModule w(hm, lag);
    for (int t = 0; t < 5; ++t) {
      HElem x = random_h(hm, rng), y = random_h(hm, rng);
      ASSERT_EQ(w.rho(x) * w.rho(y), w.rho(hm.mul(x, y)));
    }
  }
  EXPECT_THROW(InducedModule(h, Subgroup::trivial(m.group())), InputError);
}

TEST(Heisenberg, Transport) {
  std::mt19937_64 rng(5);
  for (const auto& m : {standard_module({{3, 1}}), standard_module({{3, 2}}), standard_module({{9, 1}, {3, 1}})}) {
    HeisGrp h(m);
    auto lags = enumerate_lagrangians(m);
    auto gs = m.order() <= 81 && m.rank() == 2 ? sp_enumerate(m) : sp_sample(m, 9, 8);
    for (const auto& g : gs) {
      const auto& l = lags[rng() % lags.size()];
      InducedModule v(h, l);
      auto tr = g_transport(g, v);
      EXPECT_EQ(tr.target.lag(), g(l));
      for (int t = 0; t < 5; ++t) {
        HElem x = random_h(h, rng);
        ASSERT_EQ(tr.matrix * v.rho(x), tr.target.rho(h.act(g, x)) * tr.matrix);
      }
      // composition
      const auto& g2 = gs[rng() % gs.size()];
      auto tr2 = g_transport(g2, tr.target);
      auto tr12 = g_transport(g2 * g, v);
      EXPECT_EQ(tr2.matrix * tr.matrix, tr12.matrix);
    }
    InducedModule v(h, lags[0]);
    EXPECT_EQ(g_transport(SympAut::identity(m.group()), v).matrix, MonoMatrix::identity(v.dim(), m.n()));
  }
}
