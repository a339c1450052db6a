#pragma once

#include <vector>

#include "kergen/group.hpp"

namespace kergen {

enum class FiltrationKind { LowerCentral, Zassenhaus };

struct FiltrationChain {
  FiltrationKind kind = FiltrationKind::LowerCentral;
  unsigned p = 0;
  std::vector<Subgroup> terms;  // terms[0] is the first term (the whole group)

  // 1-based access matching the usual indexing of filtrations.
  const Subgroup& term(std::size_t i) const { return terms.at(i - 1); }
  std::vector<std::size_t> orders() const;
};

// G^(1)=G, G^(i+1) = (G^(i))^p [G, G^(i)]; terms 1..upto.
FiltrationChain lower_p_central(const GroupPtr& g, unsigned p, std::size_t upto);

// G_(1)=G, G_(n) = (G_(ceil(n/p)))^p prod_{i+j=n} [G_(i), G_(j)]; terms 1..upto.
FiltrationChain zassenhaus(const GroupPtr& g, unsigned p, std::size_t upto);

bool is_elementary_abelian(const FiniteGroup& q, unsigned p);

// Elementary abelian check for a section A/B of normal subgroups B <= A.
bool is_elementary_abelian_section(const Subgroup& a, const Subgroup& b, unsigned p);

}  // namespace kergen
