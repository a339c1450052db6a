#pragma once

#include <string>
#include <vector>

#include "kergen/group.hpp"

namespace kergen {

// Closure of concrete generators. An empty generator list gives the trivial group.
GroupPtr generate_group(const std::vector<ConcreteElement>& gens, std::size_t cap = kDefaultClosureCap,
                        std::string name = "");

// Permutation from cycle notation such as "(0 1 2 3)(4 5)" on `degree` points.
ConcreteElement permutation_from_cycles(const std::string& cycles, unsigned degree);

// Unipotent upper-triangular (dim x dim) matrix over Z/m with a single off-diagonal entry.
ConcreteElement elementary_matrix(unsigned modulus, unsigned dim, unsigned row, unsigned col, int value);

GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b, std::string name = "");

}  // namespace kergen
