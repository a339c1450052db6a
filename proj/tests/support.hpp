#pragma once

// Brute-force reference computations and random generators shared by the suites.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kergen/catalog.hpp"
#include "kergen/cohomology.hpp"
#include "kergen/group.hpp"
#include "kergen/linalg.hpp"
#include "kergen/magnus.hpp"

namespace kt {

using namespace kergen;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20261014);
  return gen;
}

inline unsigned uniform(unsigned lo, unsigned hi) {
  return std::uniform_int_distribution<unsigned>(lo, hi)(rng());
}

// Small groups used by the property tests, covering p = 2, 3, 5.
struct Sample {
  std::string ref;
  unsigned p;
};

inline const std::vector<Sample>& small_samples() {
  static const std::vector<Sample> s{
      {"Z/2", 2},   {"Z/4", 2},     {"Z/8", 2},    {"El:2:2", 2}, {"El:2:3", 2},  {"D4", 2},
      {"Q8", 2},    {"U:3:2", 2},   {"Dih:8", 2},  {"M16", 2},    {"Z/4 x Z/2", 2},
      {"Z/3", 3},   {"Z/9", 3},     {"El:3:2", 3}, {"Mp3:3", 3},  {"Heis:3", 3},  {"Ex2:3", 3},
      {"Z/5", 5},   {"El:5:2", 5},
  };
  return s;
}

// Closure of a seed by repeated products of all pairs until nothing new appears.
inline std::vector<Elem> brute_closure(const FiniteGroup& g, const std::vector<Elem>& seed) {
  std::set<Elem> s(seed.begin(), seed.end());
  s.insert(0);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Elem> cur(s.begin(), s.end());
    for (Elem a : cur)
      for (Elem b : cur)
        if (s.insert(g.mul(a, b)).second) grew = true;
  }
  return {s.begin(), s.end()};
}

inline Subgroup brute_subgroup(const GroupPtr& g, const std::vector<Elem>& seed) {
  return Subgroup(g, brute_closure(*g, seed));
}

inline bool brute_is_normal(const GroupPtr& g, const std::vector<Elem>& members) {
  std::set<Elem> s(members.begin(), members.end());
  for (Elem x = 0; x < g->order(); ++x)
    for (Elem n : members)
      if (!s.count(g->mul(g->mul(x, n), g->inv(x)))) return false;
  return true;
}

inline Subgroup brute_normal_closure(const GroupPtr& g, const std::vector<Elem>& seed) {
  std::vector<Elem> cur = brute_closure(*g, seed);
  while (true) {
    std::vector<Elem> conjs;
    for (Elem x = 0; x < g->order(); ++x)
      for (Elem n : cur) conjs.push_back(g->mul(g->mul(x, n), g->inv(x)));
    auto next = brute_closure(*g, conjs);
    if (next == cur) return Subgroup(g, cur);
    cur = next;
  }
}

inline Subgroup brute_center(const GroupPtr& g) {
  std::vector<Elem> z;
  for (Elem a = 0; a < g->order(); ++a) {
    bool central = true;
    for (Elem b = 0; b < g->order() && central; ++b) central = g->mul(a, b) == g->mul(b, a);
    if (central) z.push_back(a);
  }
  return Subgroup(g, z);
}

inline Subgroup brute_commutators(const GroupPtr& g, const Subgroup& a, const Subgroup& b) {
  std::vector<Elem> seed;
  for (Elem x : a.members())
    for (Elem y : b.members()) seed.push_back(g->commutator(x, y));
  return brute_subgroup(g, seed);
}

// A^m [G, A], straight from the definition.
inline Subgroup brute_power_commutator(const GroupPtr& g, const Subgroup& a, unsigned m) {
  std::vector<Elem> seed;
  for (Elem x : a.members()) seed.push_back(g->pow(x, m));
  for (Elem x = 0; x < g->order(); ++x)
    for (Elem y : a.members()) seed.push_back(g->commutator(x, y));
  return brute_subgroup(g, seed);
}

inline std::vector<Subgroup> brute_lower_central(const GroupPtr& g, unsigned p, std::size_t upto) {
  std::vector<Subgroup> t{Subgroup::whole(g)};
  while (t.size() < upto) t.push_back(brute_power_commutator(g, t.back(), p));
  return t;
}

inline std::vector<Subgroup> brute_zassenhaus(const GroupPtr& g, unsigned p, std::size_t upto) {
  std::vector<Subgroup> t{Subgroup::whole(g)};
  for (std::size_t n = 2; n <= upto; ++n) {
    std::vector<Elem> seed;
    const Subgroup& base = t[(n + p - 1) / p - 1];
    for (Elem x : base.members()) seed.push_back(g->pow(x, p));
    for (std::size_t i = 1; i < n; ++i)
      for (Elem x : t[i - 1].members())
        for (Elem y : t[n - i - 1].members()) seed.push_back(g->commutator(x, y));
    t.push_back(brute_subgroup(g, seed));
  }
  return t;
}

// Every hom G -> U, found by trying all images of the full generator list,
// extending along BFS words and checking all |G|^2 products.
inline std::vector<std::vector<Elem>> brute_homs(const GroupPtr& g, const GroupPtr& u) {
  const auto& gens = g->generators();
  const std::size_t d = gens.size();
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> choice(d, 0);
  while (true) {
    std::vector<Elem> img(g->order(), 0);
    for (Elem x = 1; x < g->order(); ++x) {
      // parents precede children in id order
      img[x] = u->mul(img[g->parent(x)], choice[static_cast<std::size_t>(g->parent_gen(x))]);
    }
    bool ok = true;
    for (std::size_t i = 0; i < d && ok; ++i) ok = img[gens[i]] == choice[i];
    for (Elem a = 0; a < g->order() && ok; ++a)
      for (Elem b = 0; b < g->order() && ok; ++b) ok = img[g->mul(a, b)] == u->mul(img[a], img[b]);
    if (ok) out.push_back(img);
    std::size_t i = 0;
    while (i < d && ++choice[i] == u->order()) choice[i++] = 0;
    if (i == d) break;
  }
  return out;
}

inline Subgroup brute_t_subgroup(const GroupPtr& g, const GroupPtr& u) {
  std::vector<Elem> keep;
  auto homs = brute_homs(g, u);
  for (Elem x = 0; x < g->order(); ++x) {
    bool all = true;
    for (const auto& h : homs) all = all && h[x] == 0;
    if (all) keep.push_back(x);
  }
  return Subgroup(g, keep);
}

// dim Z^2 - dim B^2 on the full normalized cochain space, no spanning tree.
inline std::size_t brute_h2_dim(const GroupPtr& g, unsigned p) {
  const std::size_t n = g->order();
  if (n == 1) return 0;
  const std::size_t m = n - 1;
  auto var = [&](Elem a, Elem b) { return static_cast<std::uint32_t>((a - 1) * m + (b - 1)); };
  fp::EquationSystem z2(m * m, p);
  for (Elem a = 1; a < n; ++a)
    for (Elem b = 1; b < n; ++b)
      for (Elem c = 1; c < n; ++c) {
        // f(a,b) + f(ab,c) - f(b,c) - f(a,bc) = 0
        std::vector<std::pair<std::uint32_t, std::uint8_t>> terms;
        auto add = [&](Elem x, Elem y, unsigned s) {
          if (x != 0 && y != 0) terms.emplace_back(var(x, y), static_cast<std::uint8_t>(s % p));
        };
        add(a, b, 1);
        add(g->mul(a, b), c, 1);
        add(b, c, p - 1);
        add(a, g->mul(b, c), p - 1);
        z2.add(terms);
      }
  const std::size_t dim_z2 = m * m - z2.rank();
  fp::Mat cob;
  for (Elem x = 1; x < n; ++x) {
    Cochain1 e = Cochain1::zero(g, p);
    e.values[x] = 1;
    Cocycle2 d = coboundary(e);
    fp::Vec v(m * m, 0);
    for (Elem a = 1; a < n; ++a)
      for (Elem b = 1; b < n; ++b) v[var(a, b)] = static_cast<std::uint8_t>(d(a, b));
    cob.push_back(v);
  }
  return dim_z2 - fp::rank(cob, p);
}

// f = delta c for some normalized 1-cochain c, decided on the full table.
inline bool brute_is_coboundary(const Cocycle2& f) {
  const GroupPtr& g = f.group;
  const unsigned p = f.p;
  const std::size_t n = g->order();
  fp::Mat a;
  fp::Vec rhs;
  for (Elem x = 1; x < n; ++x)
    for (Elem y = 1; y < n; ++y) {
      fp::Vec row(n, 0);
      row[x] = static_cast<std::uint8_t>((row[x] + 1) % p);
      row[y] = static_cast<std::uint8_t>((row[y] + 1) % p);
      Elem xy = g->mul(x, y);
      row[xy] = static_cast<std::uint8_t>((row[xy] + p - 1) % p);
      row[0] = 0;
      a.push_back(row);
      rhs.push_back(static_cast<std::uint8_t>(f(x, y)));
    }
  return fp::solve(a, n, rhs, p).has_value();
}

inline bool brute_same_class(const Cocycle2& a, const Cocycle2& b) { return brute_is_coboundary(a - b); }

inline FreeWord random_word(unsigned k, unsigned max_len) {
  FreeWord w;
  const unsigned len = uniform(0, max_len);
  for (unsigned i = 0; i < len; ++i) {
    int letter = static_cast<int>(uniform(1, k));
    w.push_back(uniform(0, 1) ? letter : -letter);
  }
  return w;
}

inline std::vector<Elem> elements_of(const FiniteGroup& g) {
  std::vector<Elem> v(g.order());
  for (Elem x = 0; x < g.order(); ++x) v[x] = x;
  return v;
}

}  // namespace kt
