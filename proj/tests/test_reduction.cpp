#include <gtest/gtest.h>

#include <random>

#include "heis/reduction.hpp"

using namespace heis;

namespace {

SympMod mixed() { return standard_module({{9, 1}, {3, 1}}); }

// pair'(x, y) = pair(Ax, Ay)
SympMod pulled_back(const SympMod& m, const SympAut& a) {
  const size_t r = m.rank();
  IntMat gram(r, Elem(r));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) gram[i][j] = m.pair(a(m.group().basis(i)), a(m.group().basis(j)));
  return SympMod(m.group(), m.n(), gram);
}

std::vector<SympMod> corpus() {
  std::vector<SympMod> out = {standard_module({{3, 1}}),         standard_module({{9, 1}}),
                              standard_module({{27, 1}}),        standard_module({{9, 1}, {3, 1}}),
                              standard_module({{3, 1}, {3, 1}, {3, 1}}), standard_module({{25, 1}}),
                              standard_module({{5, 1}, {5, 1}})};
  std::mt19937_64 rng(11);
  for (size_t i : {2u, 3u, 5u}) out.push_back(pulled_back(out[i], random_group_automorphism(out[i].group(), rng)));
  return out;
}

}  // namespace

TEST(Reduction, HandDerivedExamples) {
  {
    SympMod m = standard_module({{3, 1}, {3, 1}});
    IsotropicChain c = canonical_isotropic_chain(m);
    EXPECT_EQ(c.s.order(), 1);
    EXPECT_EQ(c.exponent_chain, (std::vector<int64_t>{1}));
  }
  {
    SympMod m = standard_module({{9, 1}});
    Reduction r(m);
    EXPECT_EQ(r.S(), Subgroup::whole(m.group()).scaled(3));
    EXPECT_EQ(r.mc().order(), 1);
    EXPECT_EQ(r.exponent_chain(), (std::vector<int64_t>{2, 0}));
  }
  {
    SympMod m = standard_module({{27, 1}});
    Reduction r(m);
    EXPECT_EQ(r.S(), Subgroup::whole(m.group()).scaled(9));
    EXPECT_EQ(r.perp(), Subgroup::whole(m.group()).scaled(3));
    EXPECT_EQ(r.mc().group().orders(), (std::vector<int64_t>{3, 3}));
    EXPECT_EQ(r.mc().n(), 3);
    EXPECT_EQ(r.exponent_chain(), (std::vector<int64_t>{3, 1}));
  }
  {
    SympMod m = mixed();
    Reduction r(m);
    EXPECT_EQ(r.S(), Subgroup::from_gens(m.group(), {{3, 0, 0, 0}, {0, 3, 0, 0}}));
    EXPECT_EQ(r.perp(), Subgroup::from_gens(m.group(), {{3, 0, 0, 0}, {0, 3, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}));
    EXPECT_EQ(r.mc().order(), 9);
    EXPECT_TRUE(r.mc().is_elementary());
    EXPECT_EQ(r.exponent_chain(), (std::vector<int64_t>{2, 1}));
  }
}

TEST(Reduction, CanonicalIsotropicProperties) {
  for (const auto& m : corpus()) {
    Reduction r(m);
    EXPECT_TRUE(is_isotropic(m, r.S()));
    EXPECT_EQ(r.S().order() * r.S().order() * r.mc().order(), m.order());
    EXPECT_TRUE(r.mc().is_elementary() || r.mc().order() == 1);
    // the exponent strictly drops along the chain
    const auto& ch = r.exponent_chain();
    for (size_t i = 1; i < ch.size(); ++i) EXPECT_LT(ch[i], ch[i - 1]);
    for (const auto& g : sp_sample(m, 5, 100)) ASSERT_EQ(g(r.S()), r.S());
    std::mt19937_64 rng(6);
    for (int t = 0; t < 100; ++t) ASSERT_EQ(random_group_automorphism(m.group(), rng)(r.S()), r.S());
    // beta_c alternating with 2 beta_c = omega_c
    const SympMod& mc = r.mc();
    for (size_t i = 0; i < static_cast<size_t>(mc.order()); ++i) {
      const Elem x = mc.group().element(i);
      EXPECT_EQ(mc.beta(x, x), 0);
      for (size_t j = 0; j < static_cast<size_t>(mc.order()); j += 4) {
        const Elem y = mc.group().element(j);
        EXPECT_EQ(nt::mod(2 * mc.beta(x, y), mc.n()), mc.pair(x, y));
      }
    }
  }
}

TEST(Reduction, LagLift) {
  for (const auto& m : corpus()) {
    Reduction r(m);
    for (const auto& lc : enumerate_lagrangians(r.mc())) {
      Subgroup l = r.lag_lift(lc);
      EXPECT_TRUE(is_lagrangian(m, l));
      EXPECT_EQ(orth_complement(m, l), l);
      EXPECT_EQ(l.order(), r.S().order() * lc.order());
      EXPECT_EQ(l.order(), m.half_order());
      EXPECT_EQ(r.lag_project(l), lc);
    }
  }
}

TEST(Reduction, AlphaIsHomomorphismIntoPushout) {
  std::mt19937_64 rng(3);
  for (const auto& m : {mixed(), standard_module({{27, 1}}), standard_module({{9, 1}})}) {
    Reduction r(m);
    HeisGrp h(m);
    std::vector<HElem> hs;
    for (const auto& x : r.perp().elements())
      for (int64_t a = 0; a < m.n(); ++a) hs.push_back({x, a});
    for (int t = 0; t < 2000; ++t) {
      const HElem& x = hs[rng() % hs.size()];
      const HElem& y = hs[rng() % hs.size()];
      ASSERT_EQ(r.alpha(h.mul(x, y)), r.pushout_mul(r.alpha(x), r.alpha(y)));
      ASSERT_EQ(r.alpha(h.sigma(x)), (HElem{r.mc().group().neg(r.alpha(x).m), x.a}));
    }
    // kernel is S x {0}
    size_t ker = 0;
    for (const auto& x : hs)
      if (r.alpha(x) == HElem{r.mc().group().zero(), 0}) {
        ++ker;
        EXPECT_TRUE(r.S().contains(x.m) && x.a == 0);
      }
    EXPECT_EQ(static_cast<int64_t>(ker), r.S().order());
    // H_c embeds homomorphically in the pushout
    const HeisGrp& hc = r.hc();
    for (const auto& x : hc.elements())
      for (const auto& y : hc.elements()) ASSERT_EQ(r.embed_hc(hc.mul(x, y)), r.pushout_mul(r.embed_hc(x), r.embed_hc(y)));
  }
}

TEST(Reduction, DirectCentreMapsAreNotHomomorphisms) {
  // (m, a) -> (m mod S, u a mod p) into H_c fails for every u when n > p and M_c != 0.
  for (const auto& m : {mixed(), standard_module({{27, 1}})}) {
    Reduction r(m);
    HeisGrp h(m);
    const HeisGrp& hc = r.hc();
    for (int64_t u = 0; u < r.p(); ++u) {
      bool hom = true;
      auto f = [&](const HElem& x) { return HElem{r.project(x.m), nt::mod(u * x.a, r.p())}; };
      for (const auto& x : r.perp().elements())
        for (const auto& y : r.perp().elements()) {
          const HElem hx{x, 1}, hy{y, 0};
          if (f(h.mul(hx, hy)) != hc.mul(f(hx), f(hy))) hom = false;
        }
      EXPECT_FALSE(hom) << "u = " << u;
    }
  }
}

TEST(Reduction, Tau) {
  for (const auto& m : {mixed(), standard_module({{27, 1}}), standard_module({{3, 1}})}) {
    Reduction r(m);
    HeisGrp h(m);
    for (const auto& lc : enumerate_lagrangians(r.mc())) {
      InducedModule vc(r.hc(), lc), vl(h, r.lag_lift(lc));
      RootMatrix t = r.tau(vc, vl);
      // intertwines H_c with its lift in H^S
      for (const auto& g : r.hc().generators()) ASSERT_EQ(t * vc.rho(g), vl.rho(r.lift_hc(g)) * t);
      for (int64_t a = 0; a < r.p(); ++a) ASSERT_EQ(t * vc.rho(r.hc().central(a)), vl.rho(r.lift_hc(r.hc().central(a))) * t);
      // image is S-invariant and of full rank; invariants have dimension sqrt|M_c|
      for (const auto& s : r.S().gens()) ASSERT_EQ(vl.rho(h.lift(s)) * t, t);
      EXPECT_EQ(t.to_cyc().rank(), vc.dim());
      RootMatrix proj(vl.dim(), vl.dim(), m.n());
      for (const auto& s : r.S().elements()) proj = proj + vl.rho(h.lift(s)).to_root();
      EXPECT_EQ(proj.to_cyc().rank(), static_cast<size_t>(r.mc().half_order()));
      if (r.S().order() == 1) {
        EXPECT_EQ(t, RootMatrix::identity(vl.dim(), m.n()));
      }
    }
  }
  Reduction r(mixed());
  EXPECT_EQ(r.mc().half_order(), 3);
}

TEST(Reduction, GToGc) {
  SympMod m = mixed();
  Reduction r(m);
  EXPECT_EQ(r.g_to_gc(SympAut::identity(m.group())), SympAut::identity(r.mc().group()));
  // acts on the (Z/9)^2 block only
  SympAut t = transvection(m, {1, 0, 0, 0}, 1);
  ASSERT_TRUE(t.is_symplectic(m));
  EXPECT_EQ(r.g_to_gc(t), SympAut::identity(r.mc().group()));
  auto gs = sp_sample(m, 9, 20);
  for (size_t i = 0; i + 1 < gs.size(); ++i) {
    EXPECT_TRUE(r.g_to_gc(gs[i]).is_symplectic(r.mc()));
    EXPECT_EQ(r.g_to_gc(gs[i] * gs[i + 1]), r.g_to_gc(gs[i]) * r.g_to_gc(gs[i + 1]));
  }
}

TEST(Reduction, LiftedSystemAxioms) {
  for (const auto& m : {mixed(), standard_module({{27, 1}}), standard_module({{9, 1}})}) {
    LiftedSystem sys(m);
    SystemReport rep = verify_family(sys, sp_sample(m, 4, 10));
    EXPECT_TRUE(rep.ok()) << rep.failure;
    // unique up to scalar: agrees with tau F^c tau^{-1} on S-invariants
    const size_t nl = sys.lagrangians().size();
    for (size_t a = 0; a < nl; ++a)
      for (size_t b = 0; b < nl; ++b) {
        EXPECT_EQ(hom_dim(sys.induced(a), sys.induced(b)), 1u);
        const auto& lc = sys.reduced().lagrangians();
        ScaledMatrix fc = sys.reduced().op({lc[a], 1}, {lc[b], 1});
        ScaledMatrix f = sys.op({sys.lagrangians()[a], 1}, {sys.lagrangians()[b], 1});
        EXPECT_TRUE(scaled_equal(f.scalar, f.base * sys.tau(b), fc.scalar, sys.tau(a) * fc.base));
      }
  }
  // M_c = 0: the table is {+-id}
  LiftedSystem s9(standard_module({{9, 1}}));
  ASSERT_EQ(s9.lagrangians().size(), 1u);
  const EnhLag l0 = s9.enhanced()[0];
  EXPECT_EQ(s9.induced(0).dim(), 9u);
  EXPECT_EQ(s9.scalar(l0, l0), CycNum(1L));
  EXPECT_EQ(s9.scalar(l0.flipped(), l0), CycNum(-1L));
}

TEST(Reduction, ElementaryLiftIsIdentity) {
  SympMod m = standard_module({{3, 1}});
  LiftedSystem lifted(m);
  const CanonicalSystem& c = lifted.reduced();
  for (const auto& a : c.enhanced())
    for (const auto& b : c.enhanced()) EXPECT_EQ(lifted.scalar(a, b), c.scalar(a, b));
}

// Replacing zeta_n by zeta_n^k is the same as scaling the form by k; the
// rebuilt system is the Galois conjugate sigma_k of the original.
TEST(Reduction, GeneratorChoiceActsByGalois) {
  for (auto [q, d, k] : std::vector<std::tuple<int64_t, int, int64_t>>{{3, 1, 2}, {5, 1, 2}, {5, 1, 4}, {7, 1, 3}, {9, 1, 2}, {27, 1, 5}}) {
    SympMod m = standard_module({{q, d}});
    IntMat gk = m.gram();
    for (auto& row : gk)
      for (auto& x : row) x = nt::mod(k * x, m.n());
    SympMod mk(m.group(), m.n(), gk);
    LiftedSystem s(m), sk(mk);
    ASSERT_EQ(s.lagrangians().size(), sk.lagrangians().size());
    for (size_t a = 0; a < s.lagrangians().size(); ++a)
      for (size_t b = 0; b < s.lagrangians().size(); ++b) {
        const EnhLag n0{s.lagrangians()[a], 1}, l0{s.lagrangians()[b], 1};
        const CycMatrix f = s.scalar(n0, l0) * s.T(a, b).to_cyc();
        const CycMatrix fk = sk.scalar(n0, l0) * sk.T(sk.lag_index(n0.lag), sk.lag_index(l0.lag)).to_cyc();
        for (size_t i = 0; i < f.rows(); ++i)
          for (size_t j = 0; j < f.cols(); ++j) {
            const auto down = cyc_descend(f(i, j), m.n());
            ASSERT_TRUE(down.has_value());
            ASSERT_EQ(down->galois(k), fk(i, j)) << q << " k=" << k;
          }
      }
  }
}
