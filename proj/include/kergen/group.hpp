#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kergen/errors.hpp"

namespace kergen {

using Elem = std::uint32_t;

inline constexpr std::size_t kDefaultClosureCap = 8192;

enum class ElementKind { Permutation, Matrix, Residue };

// Input representation before closure. Permutations multiply left to right:
// (a*b)(i) = b(a(i)). Matrices multiply as written. Residues add.
struct ConcreteElement {
  ElementKind kind = ElementKind::Residue;
  unsigned modulus = 1;  // matrix and residue kinds
  unsigned degree = 1;   // points moved (permutation) or matrix dimension
  std::vector<int> data; // images, row-major entries, or the residue

  static ConcreteElement permutation(std::vector<int> images);
  static ConcreteElement matrix(unsigned modulus, unsigned dim, std::vector<int> entries);
  static ConcreteElement residue(unsigned modulus, int value);
  ConcreteElement identity_like() const;
  bool compatible(const ConcreteElement& o) const;
  int entry(unsigned i, unsigned j) const { return data[i * degree + j]; }
  std::string key() const;
  bool operator==(const ConcreteElement& o) const = default;
};

ConcreteElement compose(const ConcreteElement& a, const ConcreteElement& b);

struct ConcreteHash {
  std::size_t operator()(const ConcreteElement& c) const;
};

// A finite group stored as a dense multiplication table. Element 0 is the
// identity; ids follow the breadth-first order in which the closure reached them.
class FiniteGroup {
 public:
  // Raw closure data: right multiplication by generators plus the BFS tree.
  struct ClosureData {
    std::vector<Elem> generators;                // id of each listed generator
    std::vector<Elem> parent;                    // BFS parent (0 for the identity)
    std::vector<std::int32_t> parent_gen;        // generator index of the BFS edge, -1 for the identity
    std::vector<std::vector<Elem>> right_mult;   // right_mult[g][i] = g * generators[i]
  };

  FiniteGroup(std::string name, ClosureData data);

  std::size_t order() const { return n_; }
  static constexpr Elem identity() { return 0; }
  Elem mul(Elem a, Elem b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  Elem pow(Elem a, long long e) const;
  // [a,b] = a^-1 b^-1 a b
  Elem commutator(Elem a, Elem b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }
  // g^-1 h g
  Elem conj(Elem h, Elem g) const { return mul(mul(inv(g), h), g); }

  const std::vector<Elem>& generators() const { return generators_; }
  std::vector<std::uint32_t> word(Elem g) const;
  Elem eval_word(const std::vector<std::uint32_t>& w) const;
  Elem parent(Elem g) const { return parent_[g]; }
  std::int32_t parent_gen(Elem g) const { return parent_gen_[g]; }

  std::size_t element_order(Elem g) const;
  std::size_t exponent() const;
  bool is_abelian() const;
  bool commutes(Elem a, Elem b) const { return mul(a, b) == mul(b, a); }

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  std::uint64_t hash() const { return hash_; }

  // Exhaustive up to order 512, sampled (>= 10 order^2 triples) above.
  bool verify_tables() const;

  // Concrete realizations, present when the group came from generate_group.
  bool has_concrete() const { return !concrete_.empty(); }
  const std::vector<ConcreteElement>& concrete() const { return concrete_; }
  std::optional<Elem> find(const ConcreteElement& c) const;
  void attach_concrete(std::vector<ConcreteElement> elems);

 private:
  std::string name_;
  std::size_t n_;
  std::vector<std::uint16_t> table_;
  std::vector<Elem> inv_;
  std::vector<Elem> generators_;
  std::vector<Elem> parent_;
  std::vector<std::int32_t> parent_gen_;
  std::uint64_t hash_ = 0;
  std::vector<ConcreteElement> concrete_;
  std::unordered_map<std::string, Elem> concrete_index_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Breadth-first closure over an arbitrary element type.
template <class T, class Hash, class Mul>
GroupPtr closure_group(const T& identity, const std::vector<T>& gens, Mul&& mul, std::size_t cap,
                       std::string name, std::vector<T>* elements_out = nullptr) {
  std::vector<T> elems{identity};
  std::unordered_map<T, Elem, Hash> index;
  index.emplace(identity, 0);
  FiniteGroup::ClosureData data;
  data.parent.push_back(0);
  data.parent_gen.push_back(-1);
  const std::size_t d = gens.size();
  for (std::size_t head = 0; head < elems.size(); ++head) {
    std::vector<Elem> row(d);
    for (std::size_t i = 0; i < d; ++i) {
      T prod = mul(elems[head], gens[i]);
      auto it = index.find(prod);
      if (it == index.end()) {
        if (elems.size() >= cap)
          throw ClosureCapExceeded("closure exceeds cap of " + std::to_string(cap) + " elements");
        Elem id = static_cast<Elem>(elems.size());
        index.emplace(prod, id);
        elems.push_back(std::move(prod));
        data.parent.push_back(static_cast<Elem>(head));
        data.parent_gen.push_back(static_cast<std::int32_t>(i));
        row[i] = id;
      } else {
        row[i] = it->second;
      }
    }
    data.right_mult.push_back(std::move(row));
  }
  for (const auto& g : gens) data.generators.push_back(index.at(g));
  auto group = std::make_shared<FiniteGroup>(std::move(name), std::move(data));
  if (elements_out) *elements_out = std::move(elems);
  return group;
}

class Subgroup {
 public:
  Subgroup() = default;
  Subgroup(GroupPtr parent, std::vector<Elem> members);  // members need not be sorted
  static Subgroup whole(const GroupPtr& g);
  static Subgroup trivial(const GroupPtr& g);

  const GroupPtr& parent() const { return parent_; }
  const std::vector<Elem>& members() const { return members_; }
  std::size_t order() const { return members_.size(); }
  bool contains(Elem g) const { return mask_[g] != 0; }
  bool is_trivial() const { return members_.size() == 1; }
  bool is_whole() const { return parent_ && members_.size() == parent_->order(); }
  bool subset_of(const Subgroup& other) const;
  bool operator==(const Subgroup& other) const { return members_ == other.members_; }
  bool operator!=(const Subgroup& other) const { return !(*this == other); }

  // Structural validity: identity, closure, inverses, Lagrange.
  bool verify() const;

 private:
  GroupPtr parent_;
  std::vector<Elem> members_;
  std::vector<char> mask_;
};

class GroupHom {
 public:
  GroupHom() = default;
  GroupHom(GroupPtr domain, GroupPtr codomain, std::vector<Elem> image);

  const GroupPtr& domain() const { return domain_; }
  const GroupPtr& codomain() const { return codomain_; }
  Elem operator()(Elem g) const { return image_[g]; }
  const std::vector<Elem>& images() const { return image_; }

  // Full check on all |G|^2 pairs.
  bool verify_all_pairs() const;
  // Check on the edges (g, generator); equivalent for a map fixing the identity.
  bool verify_edges() const;

  Subgroup kernel() const;
  Subgroup image() const;
  Subgroup image_of(const Subgroup& s) const;
  Subgroup preimage(const Subgroup& s) const;
  bool is_injective() const;
  bool is_surjective() const;
  GroupHom compose_after(const GroupHom& first) const;  // (*this) o first

 private:
  GroupPtr domain_, codomain_;
  std::vector<Elem> image_;
};

// Deterministic irredundant subsequence of the group's generators.
std::vector<Elem> irredundant_generators(const FiniteGroup& g);
// Greedy irredundant generating set of a subgroup, scanning members in id order.
std::vector<Elem> subgroup_generators(const Subgroup& s);

// Evaluates generator images into a hom if they define one.
std::optional<GroupHom> hom_from_generator_images(const GroupPtr& domain, const GroupPtr& codomain,
                                                  const std::vector<Elem>& images);

Subgroup subgroup_generated(const GroupPtr& g, const std::vector<Elem>& seed);
Subgroup normal_closure(const GroupPtr& g, const std::vector<Elem>& seed);
bool is_normal(const Subgroup& s);
Subgroup commutator_subgroup(const GroupPtr& g, const Subgroup& a, const Subgroup& b);
Subgroup power_commutator_subgroup(const GroupPtr& g, const Subgroup& a, unsigned m);
Subgroup intersect_subgroups(const std::vector<Subgroup>& list);
Subgroup join_subgroups(const Subgroup& a, const Subgroup& b);
Subgroup center(const GroupPtr& g);
// All normal subgroups of g contained in `within`, ordered by (order, members).
std::vector<Subgroup> normal_subgroups(const GroupPtr& g, const Subgroup& within);

struct Quotient {
  GroupPtr group;
  GroupHom projection;
};
Quotient quotient_group(const GroupPtr& g, const Subgroup& n);

struct SubgroupAsGroup {
  GroupPtr group;
  GroupHom embedding;  // group -> parent
};
SubgroupAsGroup subgroup_as_group(const Subgroup& s);

// For surjections pi1: G -> Q1 and pi2: G -> Q2 with ker pi1 <= ker pi2,
// the induced map Q1 -> Q2.
GroupHom induced_hom(const GroupHom& pi1, const GroupHom& pi2);

// Conjugacy class representatives (smallest id in each class).
std::vector<Elem> conjugacy_class_representatives(const FiniteGroup& g);

// Invariant signature used in place of isomorphism testing.
struct GroupSignature {
  std::size_t order = 0;
  std::size_t exponent = 0;
  std::size_t abelianization_order = 0;
  std::size_t center_order = 0;
  std::vector<std::size_t> order_counts;  // order_counts[k] = #elements of order k
  bool operator==(const GroupSignature& o) const = default;
};
GroupSignature signature(const GroupPtr& g);

}  // namespace kergen
