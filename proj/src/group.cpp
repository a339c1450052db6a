#include "kergen/group.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace kergen {

FiniteGroup::FiniteGroup(std::string name, ClosureData data)
    : name_(std::move(name)),
      n_(data.parent.size()),
      generators_(std::move(data.generators)),
      parent_(std::move(data.parent)),
      parent_gen_(std::move(data.parent_gen)) {
  if (n_ > 65535) throw ClosureCapExceeded("group order exceeds table storage limit");
  table_.assign(n_ * n_, 0);
  for (std::size_t a = 0; a < n_; ++a) {
    std::uint16_t* row = &table_[a * n_];
    row[0] = static_cast<std::uint16_t>(a);
    for (std::size_t b = 1; b < n_; ++b) {
      Elem q = parent_[b];
      row[b] = static_cast<std::uint16_t>(data.right_mult[row[q]][static_cast<std::size_t>(parent_gen_[b])]);
    }
  }
  inv_.assign(n_, 0);
  for (std::size_t a = 0; a < n_; ++a) {
    const std::uint16_t* row = &table_[a * n_];
    for (std::size_t b = 0; b < n_; ++b)
      if (row[b] == 0) {
        inv_[a] = static_cast<Elem>(b);
        break;
      }
  }
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  mix(n_);
  for (auto v : table_) mix(v);
  hash_ = h;
}

Elem FiniteGroup::pow(Elem a, long long e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  Elem result = 0, base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::vector<std::uint32_t> FiniteGroup::word(Elem g) const {
  std::vector<std::uint32_t> w;
  while (g != 0) {
    w.push_back(static_cast<std::uint32_t>(parent_gen_[g]));
    g = parent_[g];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

Elem FiniteGroup::eval_word(const std::vector<std::uint32_t>& w) const {
  Elem g = 0;
  for (auto i : w) g = mul(g, generators_.at(i));
  return g;
}

std::size_t FiniteGroup::element_order(Elem g) const {
  std::size_t k = 1;
  for (Elem x = g; x != 0; x = mul(x, g)) ++k;
  return k;
}

std::size_t FiniteGroup::exponent() const {
  std::size_t e = 1;
  for (Elem g = 0; g < n_; ++g) e = std::lcm(e, element_order(g));
  return e;
}

bool FiniteGroup::is_abelian() const {
  for (Elem a : generators_)
    for (Elem b : generators_)
      if (!commutes(a, b)) return false;
  return true;
}

bool FiniteGroup::verify_tables() const {
  for (Elem g = 0; g < n_; ++g) {
    if (mul(0, g) != g || mul(g, 0) != g) return false;
    if (mul(g, inv(g)) != 0 || mul(inv(g), g) != 0) return false;
    if (eval_word(word(g)) != g) return false;
  }
  if (n_ <= 512) {
    for (Elem a = 0; a < n_; ++a)
      for (Elem b = 0; b < n_; ++b) {
        Elem ab = mul(a, b);
        for (Elem c = 0; c < n_; ++c)
          if (mul(ab, c) != mul(a, mul(b, c))) return false;
      }
    return true;
  }
  std::mt19937_64 rng(n_ * 7919 + 17);
  std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(n_ - 1));
  const std::size_t samples = 10 * n_ * n_;
  for (std::size_t s = 0; s < samples; ++s) {
    Elem a = pick(rng), b = pick(rng), c = pick(rng);
    if (mul(mul(a, b), c) != mul(a, mul(b, c))) return false;
  }
  return true;
}

std::optional<Elem> FiniteGroup::find(const ConcreteElement& c) const {
  auto it = concrete_index_.find(c.key());
  if (it == concrete_index_.end()) return std::nullopt;
  return it->second;
}

void FiniteGroup::attach_concrete(std::vector<ConcreteElement> elems) {
  concrete_ = std::move(elems);
  concrete_index_.clear();
  for (Elem i = 0; i < concrete_.size(); ++i) concrete_index_.emplace(concrete_[i].key(), i);
}

Subgroup::Subgroup(GroupPtr parent, std::vector<Elem> members) : parent_(std::move(parent)) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  members_ = std::move(members);
  mask_.assign(parent_->order(), 0);
  for (Elem g : members_) mask_[g] = 1;
}

Subgroup Subgroup::whole(const GroupPtr& g) {
  std::vector<Elem> all(g->order());
  std::iota(all.begin(), all.end(), 0);
  return Subgroup(g, std::move(all));
}

Subgroup Subgroup::trivial(const GroupPtr& g) { return Subgroup(g, {0}); }

bool Subgroup::subset_of(const Subgroup& other) const {
  for (Elem g : members_)
    if (!other.contains(g)) return false;
  return true;
}

bool Subgroup::verify() const {
  if (members_.empty() || members_.front() != 0) return false;
  if (parent_->order() % members_.size() != 0) return false;
  for (Elem a : members_) {
    if (!contains(parent_->inv(a))) return false;
    for (Elem b : members_)
      if (!contains(parent_->mul(a, b))) return false;
  }
  return true;
}

GroupHom::GroupHom(GroupPtr domain, GroupPtr codomain, std::vector<Elem> image)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), image_(std::move(image)) {
  if (image_.size() != domain_->order()) throw InvalidInput("hom image array has wrong length");
}

bool GroupHom::verify_all_pairs() const {
  if (image_[0] != 0) return false;
  const auto n = domain_->order();
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      if (image_[domain_->mul(a, b)] != codomain_->mul(image_[a], image_[b])) return false;
  return true;
}

bool GroupHom::verify_edges() const {
  if (image_[0] != 0) return false;
  const auto n = domain_->order();
  for (Elem x : domain_->generators())
    for (Elem a = 0; a < n; ++a)
      if (image_[domain_->mul(a, x)] != codomain_->mul(image_[a], image_[x])) return false;
  return true;
}

Subgroup GroupHom::kernel() const {
  std::vector<Elem> k;
  for (Elem g = 0; g < image_.size(); ++g)
    if (image_[g] == 0) k.push_back(g);
  return Subgroup(domain_, std::move(k));
}

Subgroup GroupHom::image() const { return Subgroup(codomain_, image_); }

Subgroup GroupHom::image_of(const Subgroup& s) const {
  std::vector<Elem> im;
  im.reserve(s.order());
  for (Elem g : s.members()) im.push_back(image_[g]);
  return Subgroup(codomain_, std::move(im));
}

Subgroup GroupHom::preimage(const Subgroup& s) const {
  std::vector<Elem> pre;
  for (Elem g = 0; g < image_.size(); ++g)
    if (s.contains(image_[g])) pre.push_back(g);
  return Subgroup(domain_, std::move(pre));
}

bool GroupHom::is_injective() const { return kernel().is_trivial(); }

bool GroupHom::is_surjective() const { return image().order() == codomain_->order(); }

GroupHom GroupHom::compose_after(const GroupHom& first) const {
  std::vector<Elem> im(first.domain()->order());
  for (Elem g = 0; g < im.size(); ++g) im[g] = image_[first(g)];
  return GroupHom(first.domain(), codomain_, std::move(im));
}

namespace {

// Incrementally maintained subgroup closure inside a fixed group.
struct SubBuilder {
  const FiniteGroup& g;
  std::vector<char> mask;
  std::vector<Elem> members{0};
  std::vector<Elem> gens;

  explicit SubBuilder(const FiniteGroup& group) : g(group), mask(group.order(), 0) { mask[0] = 1; }

  bool add(Elem s) {
    if (mask[s]) return false;
    gens.push_back(s);
    for (std::size_t head = 0; head < members.size(); ++head) {
      Elem x = members[head];
      for (Elem y : gens) {
        Elem z = g.mul(x, y);
        if (!mask[z]) {
          mask[z] = 1;
          members.push_back(z);
        }
      }
    }
    return true;
  }
};

}  // namespace

std::vector<Elem> irredundant_generators(const FiniteGroup& g) {
  SubBuilder b(g);
  for (Elem x : g.generators()) b.add(x);
  return b.gens;
}

std::vector<Elem> subgroup_generators(const Subgroup& s) {
  SubBuilder b(*s.parent());
  for (Elem x : s.members()) b.add(x);
  return b.gens;
}

std::optional<GroupHom> hom_from_generator_images(const GroupPtr& domain, const GroupPtr& codomain,
                                                  const std::vector<Elem>& images) {
  const auto& gens = domain->generators();
  if (images.size() != gens.size()) throw InvalidInput("generator image count mismatch");
  std::vector<Elem> phi(domain->order(), 0);
  for (Elem g = 1; g < domain->order(); ++g)
    phi[g] = codomain->mul(phi[domain->parent(g)], images[static_cast<std::size_t>(domain->parent_gen(g))]);
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (phi[gens[i]] != images[i]) return std::nullopt;
  GroupHom h(domain, codomain, std::move(phi));
  if (!h.verify_edges()) return std::nullopt;
  return h;
}

Subgroup subgroup_generated(const GroupPtr& g, const std::vector<Elem>& seed) {
  SubBuilder b(*g);
  for (Elem s : seed) b.add(s);
  return Subgroup(g, b.members);
}

Subgroup normal_closure(const GroupPtr& g, const std::vector<Elem>& seed) {
  SubBuilder b(*g);
  for (Elem s : seed) b.add(s);
  const auto ggens = irredundant_generators(*g);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < b.gens.size(); ++i)
      for (Elem x : ggens)
        if (b.add(g->conj(b.gens[i], x))) changed = true;
  }
  return Subgroup(g, b.members);
}

bool is_normal(const Subgroup& s) {
  const auto& g = *s.parent();
  for (Elem x : irredundant_generators(g))
    for (Elem h : s.members())
      if (!s.contains(g.conj(h, x))) return false;
  return true;
}

Subgroup commutator_subgroup(const GroupPtr& g, const Subgroup& a, const Subgroup& b) {
  if (a.parent() != g || b.parent() != g) throw MixedParents("commutator arguments from another group");
  if (!is_normal(a) && !is_normal(b))
    throw NonNormalArguments("commutator subgroup needs a normal argument");
  SubBuilder sb(*g);
  for (Elem x : a.members())
    for (Elem y : b.members()) sb.add(g->commutator(x, y));
  return Subgroup(g, sb.members);
}

Subgroup power_commutator_subgroup(const GroupPtr& g, const Subgroup& a, unsigned m) {
  if (a.parent() != g) throw MixedParents("subgroup from another group");
  if (!is_normal(a)) throw NonNormalArguments("power-commutator subgroup needs a normal argument");
  std::vector<Elem> seed;
  for (Elem x : a.members()) seed.push_back(g->pow(x, m));
  for (Elem y : irredundant_generators(*g))
    for (Elem x : a.members()) seed.push_back(g->commutator(y, x));
  return normal_closure(g, seed);
}

Subgroup intersect_subgroups(const std::vector<Subgroup>& list) {
  if (list.empty()) throw EmptyList("intersection of an empty list");
  for (const auto& s : list)
    if (s.parent() != list.front().parent()) throw MixedParents("intersection across different groups");
  std::vector<Elem> out;
  for (Elem x : list.front().members()) {
    bool all = true;
    for (std::size_t i = 1; i < list.size() && all; ++i) all = list[i].contains(x);
    if (all) out.push_back(x);
  }
  return Subgroup(list.front().parent(), std::move(out));
}

Subgroup join_subgroups(const Subgroup& a, const Subgroup& b) {
  if (a.parent() != b.parent()) throw MixedParents("join across different groups");
  auto seed = subgroup_generators(a);
  auto more = subgroup_generators(b);
  seed.insert(seed.end(), more.begin(), more.end());
  return subgroup_generated(a.parent(), seed);
}

Subgroup center(const GroupPtr& g) {
  const auto gens = irredundant_generators(*g);
  std::vector<Elem> z;
  for (Elem x = 0; x < g->order(); ++x) {
    bool central = true;
    for (Elem y : gens)
      if (!g->commutes(x, y)) {
        central = false;
        break;
      }
    if (central) z.push_back(x);
  }
  return Subgroup(g, std::move(z));
}

std::vector<Subgroup> normal_subgroups(const GroupPtr& g, const Subgroup& within) {
  std::vector<Subgroup> atoms;
  for (Elem x : within.members()) {
    Subgroup c = normal_closure(g, {x});
    if (std::find(atoms.begin(), atoms.end(), c) == atoms.end()) atoms.push_back(std::move(c));
  }
  std::vector<Subgroup> all = atoms;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (const auto& a : atoms) {
      if (a.subset_of(all[i])) continue;
      Subgroup j = join_subgroups(all[i], a);
      if (std::find(all.begin(), all.end(), j) == all.end()) all.push_back(std::move(j));
    }
  std::sort(all.begin(), all.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.members() < b.members();
  });
  return all;
}

Quotient quotient_group(const GroupPtr& g, const Subgroup& n) {
  if (n.parent() != g) throw MixedParents("quotient by a subgroup of another group");
  if (!is_normal(n)) throw NotNormal("quotient by a non-normal subgroup");
  const std::size_t order = g->order();
  std::vector<Elem> coset(order, static_cast<Elem>(-1));
  std::vector<Elem> rep;
  for (Elem x = 0; x < order; ++x) {
    if (coset[x] != static_cast<Elem>(-1)) continue;
    Elem c = static_cast<Elem>(rep.size());
    rep.push_back(x);
    for (Elem y : n.members()) coset[g->mul(x, y)] = c;
  }
  std::vector<Elem> gens;
  for (Elem x : g->generators()) gens.push_back(coset[x]);
  std::vector<Elem> order_of_cosets;
  auto mul = [&](Elem a, Elem b) { return coset[g->mul(rep[a], rep[b])]; };
  auto q = closure_group<Elem, std::hash<Elem>>(Elem{0}, gens, mul, order + 1,
                                               g->name() + "/N", &order_of_cosets);
  std::vector<Elem> newid(rep.size());
  for (Elem i = 0; i < order_of_cosets.size(); ++i) newid[order_of_cosets[i]] = i;
  std::vector<Elem> image(order);
  for (Elem x = 0; x < order; ++x) image[x] = newid[coset[x]];
  return Quotient{q, GroupHom(g, q, std::move(image))};
}

SubgroupAsGroup subgroup_as_group(const Subgroup& s) {
  const auto& g = s.parent();
  auto gens = subgroup_generators(s);
  std::vector<Elem> elems;
  auto mul = [&](Elem a, Elem b) { return g->mul(a, b); };
  auto h = closure_group<Elem, std::hash<Elem>>(Elem{0}, gens, mul, g->order() + 1, g->name() + "[sub]",
                                               &elems);
  return SubgroupAsGroup{h, GroupHom(h, g, elems)};
}

GroupHom induced_hom(const GroupHom& pi1, const GroupHom& pi2) {
  if (pi1.domain() != pi2.domain()) throw MixedParents("induced map needs a common domain");
  std::vector<Elem> map(pi1.codomain()->order(), static_cast<Elem>(-1));
  for (Elem g = 0; g < pi1.domain()->order(); ++g) {
    Elem& slot = map[pi1(g)];
    if (slot == static_cast<Elem>(-1))
      slot = pi2(g);
    else if (slot != pi2(g))
      throw InvalidInput("kernel of the first projection is not inside the second");
  }
  return GroupHom(pi1.codomain(), pi2.codomain(), std::move(map));
}

std::vector<Elem> conjugacy_class_representatives(const FiniteGroup& g) {
  const auto gens = irredundant_generators(g);
  std::vector<char> seen(g.order(), 0);
  std::vector<Elem> reps;
  for (Elem x = 0; x < g.order(); ++x) {
    if (seen[x]) continue;
    reps.push_back(x);
    std::vector<Elem> orbit{x};
    seen[x] = 1;
    for (std::size_t head = 0; head < orbit.size(); ++head)
      for (Elem y : gens) {
        Elem z = g.conj(orbit[head], y);
        if (!seen[z]) {
          seen[z] = 1;
          orbit.push_back(z);
        }
      }
  }
  return reps;
}

GroupSignature signature(const GroupPtr& g) {
  GroupSignature s;
  s.order = g->order();
  s.exponent = g->exponent();
  auto derived = commutator_subgroup(g, Subgroup::whole(g), Subgroup::whole(g));
  s.abelianization_order = g->order() / derived.order();
  s.center_order = center(g).order();
  s.order_counts.assign(s.exponent + 1, 0);
  for (Elem x = 0; x < g->order(); ++x) s.order_counts[g->element_order(x)]++;
  return s;
}

}  // namespace kergen
