#include "kergen/concrete.hpp"

#include <sstream>
#include <utility>

namespace kergen {

namespace {

int mod(long long v, unsigned m) {
  long long r = v % static_cast<long long>(m);
  return static_cast<int>(r < 0 ? r + m : r);
}

}  // namespace

ConcreteElement ConcreteElement::permutation(std::vector<int> images) {
  ConcreteElement c;
  c.kind = ElementKind::Permutation;
  c.modulus = 0;
  c.degree = static_cast<unsigned>(images.size());
  std::vector<char> seen(images.size(), 0);
  for (int v : images) {
    if (v < 0 || static_cast<std::size_t>(v) >= images.size() || seen[v])
      throw InvalidInput("permutation images are not a bijection");
    seen[v] = 1;
  }
  c.data = std::move(images);
  return c;
}

ConcreteElement ConcreteElement::matrix(unsigned modulus, unsigned dim, std::vector<int> entries) {
  if (modulus < 2) throw InvalidInput("matrix modulus must be at least 2");
  if (entries.size() != static_cast<std::size_t>(dim) * dim) throw InvalidInput("matrix entry count mismatch");
  ConcreteElement c;
  c.kind = ElementKind::Matrix;
  c.modulus = modulus;
  c.degree = dim;
  for (auto& e : entries) e = mod(e, modulus);
  c.data = std::move(entries);
  return c;
}

ConcreteElement ConcreteElement::residue(unsigned modulus, int value) {
  if (modulus < 1) throw InvalidInput("residue modulus must be positive");
  ConcreteElement c;
  c.kind = ElementKind::Residue;
  c.modulus = modulus;
  c.degree = 1;
  c.data = {mod(value, modulus)};
  return c;
}

ConcreteElement ConcreteElement::identity_like() const {
  switch (kind) {
    case ElementKind::Permutation: {
      std::vector<int> id(degree);
      for (unsigned i = 0; i < degree; ++i) id[i] = static_cast<int>(i);
      return permutation(std::move(id));
    }
    case ElementKind::Matrix: {
      std::vector<int> id(static_cast<std::size_t>(degree) * degree, 0);
      for (unsigned i = 0; i < degree; ++i) id[i * degree + i] = 1;
      return matrix(modulus, degree, std::move(id));
    }
    case ElementKind::Residue:
      return residue(modulus, 0);
  }
  return *this;
}

bool ConcreteElement::compatible(const ConcreteElement& o) const {
  return kind == o.kind && degree == o.degree && modulus == o.modulus;
}

std::string ConcreteElement::key() const {
  std::string k;
  k.reserve(data.size() * 2 + 2);
  k.push_back(static_cast<char>('0' + static_cast<int>(kind)));
  for (int v : data) {
    k.push_back(static_cast<char>(v & 0xff));
    k.push_back(static_cast<char>((v >> 8) & 0xff));
  }
  return k;
}

ConcreteElement compose(const ConcreteElement& a, const ConcreteElement& b) {
  if (!a.compatible(b)) throw MixedElementKinds("cannot compose elements of different kinds");
  ConcreteElement c = a;
  switch (a.kind) {
    case ElementKind::Permutation:
      for (unsigned i = 0; i < a.degree; ++i) c.data[i] = b.data[a.data[i]];
      break;
    case ElementKind::Matrix: {
      const unsigned n = a.degree, m = a.modulus;
      for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
          long long s = 0;
          for (unsigned k = 0; k < n; ++k) s += static_cast<long long>(a.data[i * n + k]) * b.data[k * n + j];
          c.data[i * n + j] = mod(s, m);
        }
      break;
    }
    case ElementKind::Residue:
      c.data[0] = mod(static_cast<long long>(a.data[0]) + b.data[0], a.modulus);
      break;
  }
  return c;
}

std::size_t ConcreteHash::operator()(const ConcreteElement& c) const {
  std::size_t h = static_cast<std::size_t>(c.kind) * 1000003u + c.modulus * 31u + c.degree;
  for (int v : c.data) h = h * 1315423911u + static_cast<std::size_t>(v) + 0x9e3779b9u;
  return h;
}

GroupPtr generate_group(const std::vector<ConcreteElement>& gens, std::size_t cap, std::string name) {
  ConcreteElement id = ConcreteElement::residue(1, 0);
  if (!gens.empty()) {
    for (const auto& g : gens)
      if (!g.compatible(gens.front())) throw MixedElementKinds("generators of different kinds or shapes");
    id = gens.front().identity_like();
  }
  std::vector<ConcreteElement> elems;
  auto group = closure_group<ConcreteElement, ConcreteHash>(id, gens, compose, cap, std::move(name), &elems);
  auto mutable_group = std::const_pointer_cast<FiniteGroup>(group);
  mutable_group->attach_concrete(std::move(elems));
  return group;
}

ConcreteElement permutation_from_cycles(const std::string& cycles, unsigned degree) {
  std::vector<int> images(degree);
  for (unsigned i = 0; i < degree; ++i) images[i] = static_cast<int>(i);
  std::size_t pos = 0;
  while ((pos = cycles.find('(', pos)) != std::string::npos) {
    auto close = cycles.find(')', pos);
    if (close == std::string::npos) throw InvalidInput("unbalanced cycle notation");
    std::string inner = cycles.substr(pos + 1, close - pos - 1);
    for (auto& ch : inner)
      if (ch == ',') ch = ' ';
    std::istringstream in(inner);
    std::vector<int> cyc;
    int v;
    while (in >> v) {
      if (v < 0 || static_cast<unsigned>(v) >= degree) throw InvalidInput("cycle point out of range");
      cyc.push_back(v);
    }
    for (std::size_t i = 0; i < cyc.size(); ++i) images[cyc[i]] = cyc[(i + 1) % cyc.size()];
    pos = close + 1;
  }
  return ConcreteElement::permutation(std::move(images));
}

ConcreteElement elementary_matrix(unsigned modulus, unsigned dim, unsigned row, unsigned col, int value) {
  std::vector<int> e(static_cast<std::size_t>(dim) * dim, 0);
  for (unsigned i = 0; i < dim; ++i) e[i * dim + i] = 1;
  e[row * dim + col] = value;
  return ConcreteElement::matrix(modulus, dim, std::move(e));
}

GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b, std::string name) {
  using Pair = std::pair<Elem, Elem>;
  struct PairHash {
    std::size_t operator()(const Pair& p) const { return p.first * 1000003u + p.second; }
  };
  std::vector<Pair> gens;
  for (Elem x : a->generators()) gens.emplace_back(x, 0);
  for (Elem y : b->generators()) gens.emplace_back(0, y);
  auto mul = [&](const Pair& u, const Pair& v) { return Pair{a->mul(u.first, v.first), b->mul(u.second, v.second)}; };
  if (name.empty()) name = a->name() + "*" + b->name();
  return closure_group<Pair, PairHash>(Pair{0, 0}, gens, mul, a->order() * b->order() + 1, std::move(name));
}

}  // namespace kergen
