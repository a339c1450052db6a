#include "kergen/filtrations.hpp"

namespace kergen {

std::vector<std::size_t> FiltrationChain::orders() const {
  std::vector<std::size_t> o;
  for (const auto& t : terms) o.push_back(t.order());
  return o;
}

FiltrationChain lower_p_central(const GroupPtr& g, unsigned p, std::size_t upto) {
  FiltrationChain c{FiltrationKind::LowerCentral, p, {}};
  if (upto == 0) return c;
  c.terms.push_back(Subgroup::whole(g));
  while (c.terms.size() < upto) {
    const Subgroup& last = c.terms.back();
    if (last.is_trivial())
      c.terms.push_back(last);
    else
      c.terms.push_back(power_commutator_subgroup(g, last, p));
  }
  return c;
}

FiltrationChain zassenhaus(const GroupPtr& g, unsigned p, std::size_t upto) {
  FiltrationChain c{FiltrationKind::Zassenhaus, p, {}};
  if (upto == 0) return c;
  c.terms.push_back(Subgroup::whole(g));
  for (std::size_t n = 2; n <= upto; ++n) {
    if (c.terms.back().is_trivial()) {
      c.terms.push_back(c.terms.back());
      continue;
    }
    const Subgroup& base = c.term((n + p - 1) / p);
    std::vector<Elem> seed;
    for (Elem x : base.members()) seed.push_back(g->pow(x, p));
    Subgroup acc = subgroup_generated(g, seed);
    for (std::size_t i = 1; i <= n / 2; ++i) {
      const Subgroup& a = c.term(i);
      const Subgroup& b = c.term(n - i);
      if (a.is_trivial() || b.is_trivial()) continue;
      acc = join_subgroups(acc, commutator_subgroup(g, a, b));
    }
    c.terms.push_back(acc);
  }
  return c;
}

bool is_elementary_abelian(const FiniteGroup& q, unsigned p) {
  if (!q.is_abelian()) return false;
  for (Elem x = 0; x < q.order(); ++x)
    if (q.pow(x, p) != 0) return false;
  return true;
}

bool is_elementary_abelian_section(const Subgroup& a, const Subgroup& b, unsigned p) {
  const auto& g = *a.parent();
  for (Elem x : a.members()) {
    if (!b.contains(g.pow(x, p))) return false;
    for (Elem y : subgroup_generators(a))
      if (!b.contains(g.commutator(x, y))) return false;
  }
  return true;
}

}  // namespace kergen
