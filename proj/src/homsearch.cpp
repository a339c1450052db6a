#include "kergen/homsearch.hpp"

#include <stdexcept>

namespace kergen {

namespace {

// Prefix subgroups H_j = <y_1..y_j> with BFS trees in the prefix generators.
struct PrefixTrees {
  std::vector<Elem> gens;
  std::vector<std::vector<Elem>> elems;           // elems[j]: members of H_(j+1) in BFS order
  std::vector<std::vector<Elem>> parent;          // parallel to elems[j]
  std::vector<std::vector<std::uint32_t>> pgen;   // parallel to elems[j]

  explicit PrefixTrees(const FiniteGroup& g) : gens(irredundant_generators(g)) {
    for (std::size_t j = 0; j < gens.size(); ++j) {
      std::vector<char> seen(g.order(), 0);
      std::vector<Elem> el{0}, par{0};
      std::vector<std::uint32_t> pg{0};
      seen[0] = 1;
      for (std::size_t head = 0; head < el.size(); ++head)
        for (std::size_t i = 0; i <= j; ++i) {
          Elem z = g.mul(el[head], gens[i]);
          if (!seen[z]) {
            seen[z] = 1;
            el.push_back(z);
            par.push_back(el[head]);
            pg.push_back(static_cast<std::uint32_t>(i));
          }
        }
      elems.push_back(std::move(el));
      parent.push_back(std::move(par));
      pgen.push_back(std::move(pg));
    }
  }
};

class Searcher {
 public:
  Searcher(const GroupPtr& dom, const GroupPtr& cod, std::vector<std::vector<Elem>> candidates,
           const PrefixTrees& trees, std::uint64_t budget,
           const std::function<bool(const std::vector<Elem>&)>& visit)
      : g_(*dom), u_(*cod), cand_(std::move(candidates)), trees_(trees), budget_(budget), visit_(visit),
        phi_(dom->order(), 0), images_(trees.gens.size(), 0) {}

  SearchStats run() {
    if (trees_.gens.empty()) {
      stats_.explored = 1;
      stats_.found = 1;
      visit_(phi_);
      return stats_;
    }
    recurse(0);
    return stats_;
  }

 private:
  // Evaluates the prefix map on H_(j+1) and checks every generator edge inside it.
  bool consistent(std::size_t j) {
    const auto& el = trees_.elems[j];
    const auto& par = trees_.parent[j];
    const auto& pg = trees_.pgen[j];
    for (std::size_t t = 1; t < el.size(); ++t) phi_[el[t]] = u_.mul(phi_[par[t]], images_[pg[t]]);
    for (std::size_t i = 0; i <= j; ++i)
      if (phi_[trees_.gens[i]] != images_[i]) return false;
    for (Elem h : el)
      for (std::size_t i = 0; i <= j; ++i)
        if (phi_[g_.mul(h, trees_.gens[i])] != u_.mul(phi_[h], images_[i])) return false;
    return true;
  }

  bool recurse(std::size_t j) {
    for (Elem c : cand_[j]) {
      if (++stats_.explored > budget_) throw BudgetExceeded("hom search budget exhausted", stats_.explored);
      images_[j] = c;
      if (!consistent(j)) continue;
      if (j + 1 == trees_.gens.size()) {
        ++stats_.found;
        if (!visit_(phi_)) return false;
      } else if (!recurse(j + 1)) {
        return false;
      }
    }
    return true;
  }

  const FiniteGroup& g_;
  const FiniteGroup& u_;
  std::vector<std::vector<Elem>> cand_;
  const PrefixTrees& trees_;
  std::uint64_t budget_;
  std::function<bool(const std::vector<Elem>&)> visit_;
  std::vector<Elem> phi_;
  std::vector<Elem> images_;
  SearchStats stats_;
};

std::vector<std::size_t> orders_of(const FiniteGroup& u) {
  std::vector<std::size_t> o(u.order());
  for (Elem x = 0; x < u.order(); ++x) o[x] = u.element_order(x);
  return o;
}

}  // namespace

SearchStats for_each_hom(const GroupPtr& domain, const GroupPtr& codomain,
                         const std::function<bool(const std::vector<Elem>&)>& visit, std::uint64_t budget,
                         const CandidateFilter& filter) {
  PrefixTrees trees(*domain);
  const auto cod_orders = orders_of(*codomain);
  std::vector<std::vector<Elem>> cand(trees.gens.size());
  for (std::size_t j = 0; j < trees.gens.size(); ++j) {
    const std::size_t ord = domain->element_order(trees.gens[j]);
    for (Elem u = 0; u < codomain->order(); ++u)
      if (ord % cod_orders[u] == 0 && (!filter || filter(j, u))) cand[j].push_back(u);
  }
  Searcher s(domain, codomain, std::move(cand), trees, budget, visit);
  return s.run();
}

HomSet enumerate_homs(const GroupPtr& domain, const GroupPtr& codomain, std::uint64_t budget) {
  HomSet set{domain, codomain, {}, {}};
  set.stats = for_each_hom(
      domain, codomain,
      [&](const std::vector<Elem>& img) {
        set.homs.emplace_back(domain, codomain, img);
        return true;
      },
      budget);
  return set;
}

std::uint64_t count_homs(const GroupPtr& domain, const GroupPtr& codomain, std::uint64_t budget) {
  return for_each_hom(domain, codomain, [](const std::vector<Elem>&) { return true; }, budget).found;
}

Subgroup t_subgroup(const GroupPtr& g, const GroupPtr& u, std::uint64_t budget) {
  std::vector<char> in(g->order(), 1);
  std::size_t remaining = g->order();
  for_each_hom(
      g, u,
      [&](const std::vector<Elem>& img) {
        for (Elem x = 1; x < img.size(); ++x)
          if (in[x] && img[x] != 0) {
            in[x] = 0;
            --remaining;
          }
        return remaining > 1;
      },
      budget);
  std::vector<Elem> k;
  for (Elem x = 0; x < g->order(); ++x)
    if (in[x]) k.push_back(x);
  return Subgroup(g, std::move(k));
}

TBundle t_bundle(const GroupPtr& g, const OmegaFamily& fam, std::uint64_t budget) {
  TBundle b;
  b.family = &fam;
  for (const auto& m : fam.members) {
    b.kernels_total.push_back(t_subgroup(g, m.ext.E, budget));
    b.kernels_bar.push_back(t_subgroup(g, m.ext.Gbar, budget));
  }
  b.T = intersect_subgroups(b.kernels_total);
  b.Tbar = intersect_subgroups(b.kernels_bar);
  if (!b.T.subset_of(b.Tbar)) throw std::logic_error("T(G) is not contained in Tbar(G)");
  return b;
}

std::optional<GroupHom> lift_map(const CentralExtension& ext, const GroupHom& to_gbar, std::uint64_t budget,
                                 SearchStats* stats) {
  const GroupPtr& g = to_gbar.domain();
  PrefixTrees trees(*g);
  std::vector<std::vector<Elem>> cand(trees.gens.size());
  for (std::size_t j = 0; j < trees.gens.size(); ++j) {
    const Elem target = ext.section[to_gbar(trees.gens[j])];
    for (Elem z = 0; z < ext.Z->order(); ++z) cand[j].push_back(ext.E->mul(target, ext.iota(z)));
  }
  std::optional<GroupHom> found;
  auto visit = [&](const std::vector<Elem>& img) {
    found.emplace(g, ext.E, img);
    return false;
  };
  Searcher s(g, ext.E, std::move(cand), trees, budget, visit);
  auto st = s.run();
  if (stats) *stats = st;
  return found;
}

std::optional<GroupHom> lift_hom(const CentralExtension& ext, const GroupHom& pi, const GroupHom& rhobar,
                                 std::uint64_t budget, SearchStats* stats) {
  if (pi.codomain() != rhobar.domain() || rhobar.codomain() != ext.Gbar)
    throw InvalidInput("lift_hom: maps do not compose into the extension quotient");
  return lift_map(ext, rhobar.compose_after(pi), budget, stats);
}

}  // namespace kergen
