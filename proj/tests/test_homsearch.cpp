#include <gtest/gtest.h>

#include <numeric>

#include "kergen/filtrations.hpp"
#include "kergen/homsearch.hpp"
#include "kergen/unitriangular.hpp"
#include "support.hpp"

using namespace kergen;
using kt::uniform;

namespace {

std::vector<std::string> families_for(unsigned p) {
  if (p == 2) return {"zassenhaus:2:2", "zassenhaus:3:2", "lower-central:2:2", "lower-central:3:2"};
  return {"zassenhaus:2:" + std::to_string(p), "lower-central:2:" + std::to_string(p), "mixed:" + std::to_string(p)};
}

bool lifts_by_enumeration(const CentralExtension& ext, const GroupHom& composite) {
  bool found = false;
  for_each_hom(composite.domain(), ext.E, [&](const std::vector<Elem>& img) {
    for (Elem x = 0; x < img.size(); ++x)
      if (ext.lambda(img[x]) != composite(x)) return true;
    found = true;
    return false;
  });
  return found;
}

}  // namespace

TEST(Homsearch, SmallCounts) {
  EXPECT_EQ(count_homs(builtin_group("El:2:2"), builtin_group("Z/2")), 4u);
  EXPECT_EQ(count_homs(builtin_group("Z/4"), builtin_group("Z/2")), 2u);
  EXPECT_EQ(count_homs(builtin_group("D4"), builtin_group("Z/2")), 4u);
  EXPECT_EQ(count_homs(builtin_group("Z/1"), builtin_group("D4")), 1u);
}

TEST(Homsearch, AbelianCountsFromElementaryDivisors) {
  const std::vector<unsigned> ns{2, 3, 4, 6, 8, 9};
  for (unsigned a : ns)
    for (unsigned b : ns)
      EXPECT_EQ(count_homs(builtin_group("Z/" + std::to_string(a)), builtin_group("Z/" + std::to_string(b))),
                std::gcd(a, b))
          << a << " " << b;
  for (auto [a, b] : std::vector<std::pair<unsigned, unsigned>>{{2, 4}, {4, 4}, {3, 9}, {2, 2}})
    for (unsigned n : {2u, 4u, 8u, 3u, 9u}) {
      auto src = builtin_group("Z/" + std::to_string(a) + " x Z/" + std::to_string(b));
      EXPECT_EQ(count_homs(src, builtin_group("Z/" + std::to_string(n))), std::gcd(a, n) * std::gcd(b, n));
    }
}

TEST(Homsearch, EnumerationMatchesBruteForce) {
  const std::vector<std::string> refs{"Z/4", "El:2:2", "D4", "Q8", "Z/4 x Z/2", "El:3:2", "Z/9", "Mp3:3"};
  for (const auto& a : refs)
    for (const auto& b : refs) {
      auto g = builtin_group(a), u = builtin_group(b);
      if (g->order() % 2 != u->order() % 2) continue;
      auto set = enumerate_homs(g, u);
      std::set<std::vector<Elem>> got;
      for (const auto& h : set.homs) {
        EXPECT_TRUE(h.verify_all_pairs());
        got.insert(h.images());
      }
      auto brute = kt::brute_homs(g, u);
      EXPECT_EQ(got, std::set<std::vector<Elem>>(brute.begin(), brute.end())) << a << " -> " << b;
      EXPECT_EQ(got.size(), set.homs.size());
      EXPECT_TRUE(got.count(std::vector<Elem>(g->order(), 0)));
    }
}

TEST(Homsearch, BudgetIsReported) {
  auto g = builtin_group("El:2:3");
  auto u = builtin_group("U:3:2");
  try {
    count_homs(g, u, 5);
    FAIL() << "expected the budget to be exhausted";
  } catch (const BudgetExceeded& e) {
    EXPECT_GE(e.explored(), 5u);
  }
}

TEST(Homsearch, TSubgroupMatchesBruteForce) {
  const std::vector<std::string> us{"Z/2", "Z/4", "D4", "Q8", "Z/3", "Z/9", "Mp3:3", "U:2:3"};
  for (const auto& s : kt::small_samples()) {
    auto g = builtin_group(s.ref);
    if (g->order() > 32) continue;
    for (const auto& uref : us) {
      auto u = builtin_group(uref);
      if (u->order() % s.p != 0) continue;
      EXPECT_EQ(t_subgroup(g, u), kt::brute_t_subgroup(g, u)) << s.ref << " / " << uref;
    }
    EXPECT_TRUE(t_subgroup(g, builtin_group("Z/1")).is_whole());
  }
}

TEST(Homsearch, TOfCyclicPIsFrattiniTerm) {
  for (const auto& e : sweep_catalog()) {
    auto t = t_subgroup(e.group, builtin_group("Z/" + std::to_string(e.p)));
    EXPECT_EQ(t, lower_p_central(e.group, e.p, 2).term(2)) << e.ref;
  }
}

TEST(Homsearch, D4DetectedByItself) {
  auto d4 = builtin_group("D4");
  auto t = intersect_subgroups({t_subgroup(d4, builtin_group("Z/4")), t_subgroup(d4, d4)});
  EXPECT_TRUE(t.is_trivial());
  EXPECT_EQ(t_subgroup(d4, builtin_group("Z/4")).order(), 2u);
}

TEST(Homsearch, BundleInclusionsAndNormality) {
  for (const auto& s : kt::small_samples()) {
    auto g = builtin_group(s.ref);
    for (const auto& label : families_for(s.p)) {
      const auto& fam = family_from_label(label);
      auto b = t_bundle(g, fam);
      SCOPED_TRACE(s.ref + " " + label);
      EXPECT_TRUE(b.T.subset_of(b.Tbar));
      EXPECT_TRUE(is_normal(b.T));
      EXPECT_TRUE(is_normal(b.Tbar));
      EXPECT_EQ(b.T, intersect_subgroups(b.kernels_total));
      EXPECT_EQ(b.Tbar, intersect_subgroups(b.kernels_bar));
      for (std::size_t i = 0; i < fam.members.size(); ++i) {
        EXPECT_EQ(b.kernels_total[i], t_subgroup(g, fam.members[i].ext.E));
        EXPECT_EQ(b.kernels_bar[i], t_subgroup(g, fam.members[i].ext.Gbar));
      }
    }
  }
}

TEST(Homsearch, BarKernelOfZassenhausIsOneSizeSmaller) {
  for (auto [n, p] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {3, 2}, {2, 3}}) {
    const auto& fam = family_from_label("zassenhaus:" + std::to_string(n) + ":" + std::to_string(p));
    auto smaller = build_unitriangular(n - 1, p);
    for (const auto& e : sweep_catalog()) {
      if (e.p != p) continue;
      EXPECT_EQ(t_bundle(e.group, fam).Tbar, t_subgroup(e.group, smaller)) << e.ref << " n=" << n;
    }
  }
}

TEST(Homsearch, LowerCentralBarKernelFromSmallerMembers) {
  for (unsigned n : {2u, 3u}) {
    const auto& fam = family_from_label("lower-central:" + std::to_string(n) + ":2");
    for (const auto& e : sweep_catalog()) {
      if (e.p != 2) continue;
      std::vector<Subgroup> parts;
      for (unsigned s = 1; s < n; ++s) {
        unsigned m = 1;
        for (unsigned i = 0; i < n - s; ++i) m *= 2;
        parts.push_back(t_subgroup(e.group, build_unitriangular(s, m)));
      }
      EXPECT_EQ(t_bundle(e.group, fam).Tbar, intersect_subgroups(parts)) << e.ref << " n=" << n;
    }
  }
}

TEST(Homsearch, TbarOverTIsElementaryAbelianSection) {
  for (const auto& e : sweep_catalog()) {
    for (const auto& label : families_for(e.p)) {
      auto b = t_bundle(e.group, family_from_label(label));
      EXPECT_TRUE(power_commutator_subgroup(e.group, b.Tbar, e.p).subset_of(b.T)) << e.ref << " " << label;
      EXPECT_TRUE(is_elementary_abelian_section(b.Tbar, b.T, e.p));
    }
  }
}

TEST(Homsearch, LiftExamples) {
  for (unsigned p : {2u, 3u}) {
    auto ext = build_bar_extension(1, p * p);  // Z/p -> Z/p^2 -> Z/p
    // identity of Z/p^2 over its own quotient
    auto g = ext.E;
    GroupHom pi = ext.lambda;
    GroupHom id(ext.Gbar, ext.Gbar, kt::elements_of(*ext.Gbar));
    auto lift = lift_hom(ext, pi, id);
    ASSERT_TRUE(lift.has_value());
    EXPECT_TRUE(lift->verify_all_pairs());
    for (Elem x = 0; x < g->order(); ++x) EXPECT_EQ(ext.lambda((*lift)(x)), pi(x));
    // trivial map always lifts
    GroupHom triv(ext.Gbar, ext.Gbar, std::vector<Elem>(ext.Gbar->order(), 0));
    EXPECT_TRUE(lift_hom(ext, pi, triv).has_value());
    // first projection of (Z/p)^2 does not lift to Z/p^2
    auto v = elementary_abelian(p, 2);
    GroupHom idv(v, v, kt::elements_of(*v));
    auto proj = hom_from_generator_images(v, ext.Gbar, {ext.Gbar->generators()[0], 0});
    ASSERT_TRUE(proj.has_value());
    EXPECT_FALSE(lift_hom(ext, idv, *proj).has_value());
  }
}

TEST(Homsearch, LiftSearchMatchesFullEnumeration) {
  std::size_t checked = 0;
  for (const auto& s : kt::small_samples()) {
    auto g = builtin_group(s.ref);
    if (g->order() > 32) continue;
    for (const auto& label : families_for(s.p)) {
      const auto& fam = family_from_label(label);
      for (const auto& m : fam.members) {
        if (m.ext.E->order() > 64) continue;
        std::size_t seen = 0;
        for_each_hom(g, m.ext.Gbar, [&](const std::vector<Elem>& img) {
          GroupHom to_gbar(g, m.ext.Gbar, img);
          auto lift = lift_map(m.ext, to_gbar);
          EXPECT_EQ(lift.has_value(), lifts_by_enumeration(m.ext, to_gbar)) << s.ref << " " << m.ext.label;
          if (lift)
            for (Elem x = 0; x < g->order(); ++x) EXPECT_EQ(m.ext.lambda((*lift)(x)), img[x]);
          ++checked;
          return ++seen < 40;
        });
      }
    }
  }
  EXPECT_GT(checked, 300u);
}

TEST(Homsearch, TransferOfTAlongQuotients) {
  for (const auto& s : kt::small_samples()) {
    auto g = builtin_group(s.ref);
    for (const auto& label : families_for(s.p)) {
      const auto& fam = family_from_label(label);
      auto b = t_bundle(g, fam);
      for (const auto& n : normal_subgroups(g, Subgroup::whole(g))) {
        auto q = quotient_group(g, n);
        auto bq = t_bundle(q.group, fam);
        SCOPED_TRACE(s.ref + " " + label + " |N|=" + std::to_string(n.order()));
        // images land inside
        EXPECT_TRUE(q.projection.image_of(b.T).subset_of(bq.T));
        EXPECT_TRUE(q.projection.image_of(b.Tbar).subset_of(bq.Tbar));
        // pulling back recovers the group exactly when N is already inside
        EXPECT_EQ(n.subset_of(b.T), b.T == q.projection.preimage(bq.T));
        EXPECT_EQ(n.subset_of(b.Tbar), b.Tbar == q.projection.preimage(bq.Tbar));
      }
    }
  }
}

TEST(Homsearch, CharactersOfQuotientInsideTbar) {
  for (const auto& s : kt::small_samples()) {
    auto g = builtin_group(s.ref);
    auto zp = builtin_group("Z/" + std::to_string(s.p));
    for (const auto& label : families_for(s.p)) {
      auto b = t_bundle(g, family_from_label(label));
      for (const auto& n : normal_subgroups(g, b.Tbar)) {
        auto q = quotient_group(g, n);
        std::set<std::vector<Elem>> pulled;
        for (const auto& h : enumerate_homs(q.group, zp).homs) pulled.insert(h.compose_after(q.projection).images());
        std::set<std::vector<Elem>> direct;
        for (const auto& h : enumerate_homs(g, zp).homs) direct.insert(h.images());
        EXPECT_EQ(pulled, direct) << s.ref << " " << label;
      }
    }
  }
}
