#include <gtest/gtest.h>

#include "kergen/unitriangular.hpp"
#include "support.hpp"

using namespace kergen;

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// Central, injective, exact at E, section round-trip; checked entry by entry.
void expect_valid_extension(const CentralExtension& ext) {
  SCOPED_TRACE(ext.label);
  EXPECT_TRUE(ext.verify());
  EXPECT_EQ(ext.Z->order(), ext.p);
  EXPECT_TRUE(ext.iota.verify_all_pairs());
  EXPECT_TRUE(ext.lambda.verify_all_pairs());
  EXPECT_TRUE(ext.iota.is_injective());
  EXPECT_TRUE(ext.lambda.is_surjective());
  EXPECT_EQ(ext.lambda.kernel(), ext.iota.image());
  for (Elem z = 0; z < ext.Z->order(); ++z)
    for (Elem e = 0; e < ext.E->order(); ++e) EXPECT_TRUE(ext.E->commutes(ext.iota(z), e));
  EXPECT_EQ(ext.section[0], 0u);
  for (Elem x = 0; x < ext.Gbar->order(); ++x) EXPECT_EQ(ext.lambda(ext.section[x]), x);
}

}  // namespace

TEST(Unitriangular, OrdersFollowTheCountingFormula) {
  for (auto [n, m] : std::vector<std::pair<unsigned, unsigned>>{{1, 2}, {1, 5}, {2, 2}, {2, 3}, {2, 4}, {3, 2}, {2, 5}, {3, 3}}) {
    auto g = build_unitriangular(n, m);
    EXPECT_EQ(g->order(), ipow(m, n * (n + 1) / 2)) << n << " " << m;
    EXPECT_EQ(g->generators().size(), n);
  }
}

TEST(Unitriangular, SmallCases) {
  auto u1 = build_unitriangular(1, 3);
  EXPECT_TRUE(u1->is_abelian());
  EXPECT_EQ(u1->exponent(), 3u);
  EXPECT_EQ(signature(build_unitriangular(2, 2)), signature(builtin_group("D4")));
  auto u23 = build_unitriangular(2, 3);
  EXPECT_EQ(u23->order(), 27u);
  EXPECT_EQ(u23->exponent(), 3u);
}

TEST(Unitriangular, ConcreteElementsAreUnipotent) {
  auto g = build_unitriangular(3, 2);
  for (const auto& m : g->concrete())
    for (unsigned i = 0; i < m.degree; ++i)
      for (unsigned j = 0; j <= i; ++j) EXPECT_EQ(m.entry(i, j), i == j ? 1 : 0);
}

TEST(Unitriangular, BarExtensions) {
  for (auto [n, m] : std::vector<std::pair<unsigned, unsigned>>{{1, 2}, {1, 4}, {1, 9}, {2, 2}, {2, 3}, {2, 4}, {3, 2}}) {
    auto ext = build_bar_extension(n, m);
    expect_valid_extension(ext);
    EXPECT_EQ(ext.Gbar->order() * ext.p, ext.E->order());
  }
  auto e12 = build_bar_extension(1, 4);
  EXPECT_EQ(e12.E->order(), 4u);
  EXPECT_EQ(e12.Gbar->order(), 2u);
  EXPECT_EQ(e12.E->exponent(), 4u);
  auto e22 = build_bar_extension(2, 2);
  EXPECT_EQ(e22.E->order(), 8u);
  EXPECT_EQ(e22.Gbar->order(), 4u);
  EXPECT_EQ(e22.Gbar->exponent(), 2u);
  EXPECT_TRUE(e22.Gbar->is_abelian());
}

TEST(Unitriangular, SectionHasSmallCornerEntries) {
  auto ext = build_bar_extension(2, 9);
  for (Elem x = 0; x < ext.Gbar->order(); ++x) {
    const auto& m = ext.E->concrete()[ext.section[x]];
    EXPECT_LT(static_cast<unsigned>(m.entry(0, 2)), 3u);
  }
}

TEST(Unitriangular, GammaHomsHaveTriviallyMeetingKernels) {
  for (auto [n, m] : std::vector<std::pair<unsigned, unsigned>>{{1, 4}, {1, 9}, {2, 2}, {2, 3}, {3, 2}, {2, 4}}) {
    auto ext = build_bar_extension(n, m);
    auto [g1, g2] = gamma_homs(ext);
    EXPECT_TRUE(g1.verify_all_pairs());
    EXPECT_TRUE(g2.verify_all_pairs());
    auto k = intersect_subgroups({g1.kernel(), g2.kernel()});
    EXPECT_TRUE(k.is_trivial()) << n << " " << m;
    EXPECT_TRUE(kernels_intersect_trivially({g1, g2}));
  }
}

TEST(Unitriangular, Mp3Presentation) {
  for (unsigned p : {3u, 5u}) {
    auto ext = build_mp3(p);
    expect_valid_extension(ext);
    auto e = ext.E;
    EXPECT_EQ(e->order(), p * p * p);
    EXPECT_EQ(e->exponent(), p * p);
    EXPECT_EQ(ext.Gbar->order(), p * p);
    EXPECT_EQ(ext.Gbar->exponent(), p);
    // generators r, s with r^(p^2) = s^p = 1 and [r,s] = r^p
    ASSERT_EQ(e->generators().size(), 2u);
    const Elem r = e->generators()[0], s = e->generators()[1];
    EXPECT_EQ(e->element_order(r), p * p);
    EXPECT_EQ(e->pow(s, p), 0u);
    EXPECT_EQ(e->commutator(r, s), e->pow(r, p));
    auto z = kt::brute_center(e);
    EXPECT_EQ(z.order(), p);
    EXPECT_EQ(z, subgroup_generated(e, {e->pow(r, p)}));
  }
  EXPECT_THROW(build_mp3(2), InvalidInput);
}

TEST(Unitriangular, ElementaryAbelianCoordinates) {
  auto g = elementary_abelian(3, 2);
  EXPECT_EQ(g->order(), 9u);
  std::set<std::vector<unsigned>> coords;
  for (Elem x = 0; x < g->order(); ++x) coords.insert(elementary_coordinates(*g, x));
  EXPECT_EQ(coords.size(), 9u);
  for (Elem a = 0; a < g->order(); ++a)
    for (Elem b = 0; b < g->order(); ++b) {
      auto ca = elementary_coordinates(*g, a), cb = elementary_coordinates(*g, b);
      auto cab = elementary_coordinates(*g, g->mul(a, b));
      for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(cab[i], (ca[i] + cb[i]) % 3);
    }
}

TEST(Unitriangular, FamilyShapes) {
  const auto& z22 = family_from_label("zassenhaus:2:2");
  ASSERT_EQ(z22.members.size(), 1u);
  EXPECT_EQ(z22.members[0].ext.E->order(), 8u);
  EXPECT_EQ(z22.members[0].ext.Gbar->order(), 4u);

  for (unsigned p : {2u, 3u}) {
    const auto& lc = family_from_label("lower-central:2:" + std::to_string(p));
    ASSERT_EQ(lc.members.size(), 2u);
    // s = 1: Z/p^2 over Z/p; s = 2: U_2(Z/p) over its quotient
    EXPECT_EQ(lc.members[0].ext.E->order(), p * p);
    EXPECT_TRUE(lc.members[0].ext.E->is_abelian());
    EXPECT_EQ(lc.members[0].ext.Gbar->order(), p);
    EXPECT_EQ(lc.members[1].ext.E->order(), p * p * p);
    EXPECT_FALSE(lc.members[1].ext.E->is_abelian());
  }
  const auto& lc3 = family_from_label("lower-central:3:2");
  ASSERT_EQ(lc3.members.size(), 3u);
  EXPECT_EQ(lc3.members[0].ext.E->order(), 8u);    // Z/8
  EXPECT_EQ(lc3.members[1].ext.E->order(), 64u);   // U_2(Z/4)
  EXPECT_EQ(lc3.members[2].ext.E->order(), 64u);   // U_3(Z/2)

  const auto& mixed = family_from_label("mixed:3");
  ASSERT_EQ(mixed.members.size(), 2u);
  EXPECT_EQ(mixed.members[0].ext.E->order(), 9u);
  EXPECT_EQ(mixed.members[1].ext.E->order(), 27u);
  EXPECT_EQ(mixed.members[1].ext.Gbar->order(), 9u);
  EXPECT_THROW(family_from_label("mixed:2"), InvalidInput);
  EXPECT_THROW(family_from_label("bogus:1"), InvalidInput);
}

TEST(Unitriangular, FamiliesCarryWitnesses) {
  for (const char* label : {"zassenhaus:2:2", "zassenhaus:3:2", "zassenhaus:2:3", "lower-central:2:2",
                            "lower-central:3:2", "lower-central:2:3", "mixed:3", "mixed:5"}) {
    const auto& fam = family_from_label(label);
    SCOPED_TRACE(label);
    EXPECT_TRUE(fam.verify());
    for (const auto& m : fam.members) {
      expect_valid_extension(m.ext);
      ASSERT_FALSE(m.gammas.empty());
      for (const auto& g : m.gammas) {
        EXPECT_TRUE(g.verify_all_pairs());
        EXPECT_EQ(g.domain()->order(), m.ext.Gbar->order());
        EXPECT_EQ(g.codomain()->order(), m.ext.E->order());
      }
      EXPECT_TRUE(kernels_intersect_trivially(m.gammas));
      EXPECT_TRUE(m.z_embedding.verify_all_pairs());
      EXPECT_TRUE(m.z_embedding.is_injective());
    }
  }
}

TEST(Unitriangular, MixedWitnessEmbedding) {
  const auto& mixed = family_from_label("mixed:3");
  const auto& m = mixed.members[1];
  EXPECT_EQ(m.z_embedding.domain()->order(), 3u);
  EXPECT_EQ(m.z_embedding.codomain()->order(), 9u);
  // (1,0) -> r^p, (0,1) -> s r^p
  ASSERT_EQ(m.gammas.size(), 1u);
  const auto& emb = m.gammas[0];
  auto e = m.ext.E;
  const Elem r = e->generators()[0], s = e->generators()[1];
  const auto& gbar = *m.ext.Gbar;
  EXPECT_EQ(emb(gbar.generators()[0]), e->pow(r, 3));
  EXPECT_EQ(emb(gbar.generators()[1]), e->mul(s, e->pow(r, 3)));
  EXPECT_TRUE(emb.is_injective());
  EXPECT_THROW(family_from_label("zassenhaus:1:2"), InvalidInput);
}

TEST(Unitriangular, ReductionWitnessesAreHomomorphisms) {
  for (unsigned s = 1; s <= 3; ++s) {
    auto maps = reduction_witnesses(3, s, 2);
    for (const auto& f : maps) EXPECT_TRUE(f.verify_all_pairs());
  }
}

TEST(Unitriangular, PrimeOfPower) {
  unsigned e = 0;
  EXPECT_EQ(prime_of_power(27, &e), 3u);
  EXPECT_EQ(e, 3u);
  EXPECT_EQ(prime_of_power(12), 0u);
  EXPECT_EQ(prime_of_power(2), 2u);
}
