#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "kergen/group.hpp"
#include "kergen/unitriangular.hpp"

namespace kergen {

inline constexpr std::uint64_t kDefaultPrefixBudget = std::uint64_t{1} << 31;

struct SearchStats {
  std::uint64_t explored = 0;  // partial assignments visited
  std::uint64_t found = 0;
};

struct HomSet {
  GroupPtr domain, codomain;
  std::vector<GroupHom> homs;
  SearchStats stats;
};

// Restricts the images allowed for a domain generator (index into the
// irredundant generator list); an empty optional means unrestricted.
using CandidateFilter = std::function<bool(std::size_t gen_index, Elem image)>;

// Calls visit(images) for every hom domain -> codomain, images indexed by domain id.
// The visitor may return false to stop early.
SearchStats for_each_hom(const GroupPtr& domain, const GroupPtr& codomain,
                         const std::function<bool(const std::vector<Elem>&)>& visit,
                         std::uint64_t budget = kDefaultPrefixBudget, const CandidateFilter& filter = {});

HomSet enumerate_homs(const GroupPtr& domain, const GroupPtr& codomain,
                      std::uint64_t budget = kDefaultPrefixBudget);
std::uint64_t count_homs(const GroupPtr& domain, const GroupPtr& codomain,
                         std::uint64_t budget = kDefaultPrefixBudget);

// Intersection of the kernels of all homs domain -> u.
Subgroup t_subgroup(const GroupPtr& g, const GroupPtr& u, std::uint64_t budget = kDefaultPrefixBudget);

struct TBundle {
  const OmegaFamily* family = nullptr;
  Subgroup T, Tbar;
  std::vector<Subgroup> kernels_total;  // T^{U_omega}(G) per member
  std::vector<Subgroup> kernels_bar;    // T^{Ubar_omega}(G) per member
};

TBundle t_bundle(const GroupPtr& g, const OmegaFamily& fam, std::uint64_t budget = kDefaultPrefixBudget);

// A hom rho: G -> E with lambda o rho = rhobar o pi, found by assigning each
// generator of G one of the |Z| preimages of its required image.
std::optional<GroupHom> lift_hom(const CentralExtension& ext, const GroupHom& pi, const GroupHom& rhobar,
                                 std::uint64_t budget = kDefaultPrefixBudget, SearchStats* stats = nullptr);

// Same question for the composite map G -> Gbar directly.
std::optional<GroupHom> lift_map(const CentralExtension& ext, const GroupHom& to_gbar,
                                 std::uint64_t budget = kDefaultPrefixBudget, SearchStats* stats = nullptr);

}  // namespace kergen
