#include "kergen/unitriangular.hpp"

#include <map>
#include <mutex>
#include <sstream>

#include "kergen/concrete.hpp"

namespace kergen {

unsigned prime_of_power(unsigned m, unsigned* exponent) {
  if (m < 2) return 0;
  unsigned p = 2;
  while (m % p != 0) ++p;
  unsigned k = 0;
  while (m % p == 0) {
    m /= p;
    ++k;
  }
  if (m != 1) return 0;
  if (exponent) *exponent = k;
  return p;
}

unsigned CentralExtension::iota_inverse(Elem e) const {
  for (Elem z = 0; z < Z->order(); ++z)
    if (iota(z) == e) return z_value[z];
  throw InvalidInput("element is not in the image of the kernel");
}

bool CentralExtension::verify() const {
  if (!iota.verify_all_pairs() || !lambda.verify_edges()) return false;
  if (!iota.is_injective() || !lambda.is_surjective()) return false;
  if (lambda.kernel() != iota.image()) return false;
  const Subgroup central = iota.image();
  for (Elem z : central.members())
    for (Elem x : E->generators())
      if (!E->commutes(z, x)) return false;
  if (section.size() != Gbar->order() || section[0] != 0) return false;
  for (Elem x = 0; x < Gbar->order(); ++x)
    if (lambda(section[x]) != x) return false;
  return true;
}

bool OmegaFamily::verify() const {
  if (members.empty()) return false;
  for (const auto& m : members) {
    if (!m.ext.verify()) return false;
    for (const auto& g : m.gammas)
      if (g.domain() != m.ext.Gbar || g.codomain() != m.ext.E || !g.verify_all_pairs()) return false;
    if (!kernels_intersect_trivially(m.gammas)) return false;
    if (m.z_embedding.domain() != m.ext.Z || m.z_embedding.codomain() != m.ext.Gbar) return false;
    if (!m.z_embedding.verify_all_pairs() || !m.z_embedding.is_injective()) return false;
  }
  return true;
}

GroupPtr build_unitriangular(unsigned n, unsigned m, std::size_t cap) {
  if (n < 1 || m < 2) throw InvalidInput("unitriangular group needs n >= 1 and m >= 2");
  std::vector<ConcreteElement> gens;
  for (unsigned i = 0; i < n; ++i) gens.push_back(elementary_matrix(m, n + 1, i, i + 1, 1));
  std::ostringstream name;
  name << "U_" << n << "(Z/" << m << ")";
  return generate_group(gens, cap, name.str());
}

namespace {

GroupPtr cyclic_residues(unsigned p) {
  return generate_group({ConcreteElement::residue(p, 1)}, kDefaultClosureCap, "Z/" + std::to_string(p));
}

std::vector<unsigned> residue_values(const GroupPtr& z) {
  std::vector<unsigned> v(z->order());
  for (Elem i = 0; i < z->order(); ++i) v[i] = static_cast<unsigned>(z->concrete()[i].data[0]);
  return v;
}

unsigned ipow(unsigned b, unsigned e) {
  unsigned r = 1;
  while (e--) r *= b;
  return r;
}

// Map Gbar -> target determined by transforming section representatives.
template <class F>
GroupHom hom_by_matrix_map(const CentralExtension& ext, const GroupPtr& target, F&& transform) {
  std::vector<Elem> image(ext.Gbar->order());
  for (Elem x = 0; x < ext.Gbar->order(); ++x) {
    ConcreteElement m = transform(ext.E->concrete()[ext.section[x]]);
    auto id = target->find(m);
    if (!id) throw InvalidInput("transformed matrix is outside the target group");
    image[x] = *id;
  }
  return GroupHom(ext.Gbar, target, std::move(image));
}

}  // namespace

CentralExtension build_bar_extension(unsigned n, unsigned m) {
  unsigned k = 0;
  unsigned p = prime_of_power(m, &k);
  if (p == 0) throw InvalidInput("modulus must be a prime power");
  CentralExtension ext;
  ext.p = p;
  ext.dim = n + 1;
  ext.modulus = m;
  ext.E = build_unitriangular(n, m);
  ext.Z = cyclic_residues(p);
  ext.z_value = residue_values(ext.Z);
  const unsigned step = ipow(p, k - 1);
  std::vector<Elem> iota(ext.Z->order());
  for (Elem z = 0; z < ext.Z->order(); ++z) {
    auto id = ext.E->find(elementary_matrix(m, n + 1, 0, n, static_cast<int>(ext.z_value[z] * step)));
    iota[z] = *id;
  }
  ext.iota = GroupHom(ext.Z, ext.E, std::move(iota));
  auto q = quotient_group(ext.E, ext.iota.image());
  ext.Gbar = q.group;
  ext.lambda = q.projection;
  ext.section.assign(ext.Gbar->order(), 0);
  for (Elem g = 0; g < ext.E->order(); ++g)
    if (static_cast<unsigned>(ext.E->concrete()[g].entry(0, n)) < step) ext.section[ext.lambda(g)] = g;
  std::ostringstream label;
  label << "U_" << n << "(Z/" << m << ") over its quotient by the order-" << p << " corner";
  ext.label = label.str();
  std::ostringstream gname;
  gname << "Ubar_" << n << "(Z/" << m << ")";
  std::const_pointer_cast<FiniteGroup>(ext.Gbar)->set_name(gname.str());
  return ext;
}

std::pair<GroupHom, GroupHom> gamma_homs(const CentralExtension& ext) {
  if (ext.dim == 0) throw InvalidInput("gamma maps need a unitriangular extension");
  const unsigned d = ext.dim, m = ext.modulus, p = ext.p;
  auto g1 = hom_by_matrix_map(ext, ext.E, [&](ConcreteElement c) {
    for (unsigned j = 1; j < d; ++j) c.data[j] = static_cast<int>(static_cast<unsigned>(c.data[j]) * p % m);
    return c;
  });
  auto g2 = hom_by_matrix_map(ext, ext.E, [&](ConcreteElement c) {
    for (unsigned i = 0; i + 1 < d; ++i) c.data[i * d + d - 1] = 0;
    return c;
  });
  return {g1, g2};
}

GroupPtr elementary_abelian(unsigned p, unsigned k) {
  std::vector<ConcreteElement> gens;
  for (unsigned i = 0; i < k; ++i) gens.push_back(elementary_matrix(p, k + 1, i, k, 1));
  std::ostringstream name;
  name << "(Z/" << p << ")^" << k;
  if (k == 0) return generate_group({}, kDefaultClosureCap, name.str());
  return generate_group(gens, kDefaultClosureCap, name.str());
}

std::vector<unsigned> elementary_coordinates(const FiniteGroup& g, Elem x) {
  const auto& c = g.concrete().at(x);
  const unsigned k = c.degree - 1;
  std::vector<unsigned> v(k);
  for (unsigned i = 0; i < k; ++i) v[i] = static_cast<unsigned>(c.entry(i, k));
  return v;
}

CentralExtension build_mp3(unsigned p) {
  if (p < 3 || prime_of_power(p) != p) throw InvalidInput("build_mp3 needs an odd prime");
  const unsigned m = p * p;
  auto r = ConcreteElement::matrix(m, 2, {1, 1, 0, 1});
  auto s = ConcreteElement::matrix(m, 2, {1, 0, 0, static_cast<int>(1 + p)});
  CentralExtension ext;
  ext.p = p;
  ext.E = generate_group({r, s}, kDefaultClosureCap, "M_" + std::to_string(p * p * p));
  const Elem rid = ext.E->generators()[0], sid = ext.E->generators()[1];
  const Elem rp = ext.E->pow(rid, p);
  if (ext.E->order() != p * p * p || ext.E->element_order(rid) != p * p || ext.E->element_order(sid) != p ||
      ext.E->commutator(rid, sid) != rp)
    throw InvalidInput("matrix model does not satisfy the presentation");
  ext.Gbar = elementary_abelian(p, 2);
  ext.Z = cyclic_residues(p);
  ext.z_value = residue_values(ext.Z);
  std::vector<Elem> iota(p);
  for (Elem z = 0; z < p; ++z) iota[z] = ext.E->pow(rp, ext.z_value[z]);
  ext.iota = GroupHom(ext.Z, ext.E, std::move(iota));
  auto lam = hom_from_generator_images(ext.E, ext.Gbar, ext.Gbar->generators());
  if (!lam) throw InvalidInput("projection onto (Z/p)^2 is not a homomorphism");
  ext.lambda = *lam;
  ext.section.assign(ext.Gbar->order(), 0);
  for (Elem x = 0; x < ext.Gbar->order(); ++x) {
    auto c = elementary_coordinates(*ext.Gbar, x);
    ext.section[x] = ext.E->mul(ext.E->pow(sid, c[1]), ext.E->pow(rid, c[0]));
  }
  ext.label = "M_" + std::to_string(p * p * p) + " over (Z/" + std::to_string(p) + ")^2";
  return ext;
}

namespace {

GroupHom z_into_gbar(const CentralExtension& ext, Elem target) {
  auto h = hom_from_generator_images(ext.Z, ext.Gbar, {target});
  if (!h) throw InvalidInput("kernel does not embed in the quotient");
  return *h;
}

OmegaMember unitriangular_member(unsigned s, unsigned m) {
  OmegaMember mem;
  mem.ext = build_bar_extension(s, m);
  auto [g1, g2] = gamma_homs(mem.ext);
  mem.gammas = {g1, g2};
  unsigned k = 0;
  const unsigned p = prime_of_power(m, &k);
  Elem target;
  if (s >= 2) {
    target = mem.ext.lambda(*mem.ext.E->find(elementary_matrix(m, s + 1, 0, 1, static_cast<int>(ipow(p, k - 1)))));
  } else {
    if (k < 2) throw InvalidInput("quotient of Z/p by itself is trivial; kernel cannot embed");
    target = mem.ext.lambda(*mem.ext.E->find(elementary_matrix(m, 2, 0, 1, static_cast<int>(ipow(p, k - 2)))));
  }
  mem.z_embedding = z_into_gbar(mem.ext, target);
  return mem;
}

}  // namespace

std::string family_label(FamilyKind kind, unsigned n, unsigned p) {
  switch (kind) {
    case FamilyKind::Zassenhaus:
      return "zassenhaus:" + std::to_string(n) + ":" + std::to_string(p);
    case FamilyKind::LowerCentral:
      return "lower-central:" + std::to_string(n) + ":" + std::to_string(p);
    case FamilyKind::Mixed:
      return "mixed:" + std::to_string(p);
  }
  return "";
}

OmegaFamily omega_family(FamilyKind kind, unsigned n, unsigned p) {
  if (prime_of_power(p) != p) throw InvalidInput("family prime must be prime");
  OmegaFamily fam;
  fam.kind = kind;
  fam.p = p;
  fam.n = n;
  fam.label = family_label(kind, n, p);
  switch (kind) {
    case FamilyKind::Zassenhaus:
      if (n < 2) throw InvalidInput("zassenhaus family needs n >= 2");
      fam.members.push_back(unitriangular_member(n, p));
      break;
    case FamilyKind::LowerCentral:
      if (n < 2) throw InvalidInput("lower-central family needs n >= 2");
      for (unsigned s = 1; s <= n; ++s) fam.members.push_back(unitriangular_member(s, ipow(p, n - s + 1)));
      break;
    case FamilyKind::Mixed: {
      if (p == 2) throw InvalidInput("mixed family needs an odd prime");
      fam.n = 2;
      fam.members.push_back(unitriangular_member(1, p * p));
      OmegaMember mp;
      mp.ext = build_mp3(p);
      const Elem r = mp.ext.E->generators()[0], s = mp.ext.E->generators()[1];
      const Elem rp = mp.ext.E->pow(r, p);
      auto g = hom_from_generator_images(mp.ext.Gbar, mp.ext.E, {rp, mp.ext.E->mul(s, rp)});
      if (!g) throw InvalidInput("(Z/p)^2 does not embed as prescribed");
      mp.gammas = {*g};
      mp.z_embedding = z_into_gbar(mp.ext, mp.ext.Gbar->generators()[0]);
      fam.members.push_back(std::move(mp));
      break;
    }
  }
  return fam;
}

const OmegaFamily& family_from_label(const std::string& label) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<OmegaFamily>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(label);
  if (it != cache.end()) return *it->second;
  std::vector<std::string> parts;
  std::stringstream ss(label);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  FamilyKind kind;
  unsigned n = 0, p = 0;
  try {
    if (parts.size() == 3 && parts[0] == "zassenhaus") {
      kind = FamilyKind::Zassenhaus;
      n = static_cast<unsigned>(std::stoul(parts[1]));
      p = static_cast<unsigned>(std::stoul(parts[2]));
    } else if (parts.size() == 3 && parts[0] == "lower-central") {
      kind = FamilyKind::LowerCentral;
      n = static_cast<unsigned>(std::stoul(parts[1]));
      p = static_cast<unsigned>(std::stoul(parts[2]));
    } else if (parts.size() == 2 && parts[0] == "mixed") {
      kind = FamilyKind::Mixed;
      p = static_cast<unsigned>(std::stoul(parts[1]));
    } else {
      throw InvalidInput("unknown family label: " + label);
    }
  } catch (const std::logic_error&) {
    throw InvalidInput("malformed family label: " + label);
  }
  auto fam = std::make_unique<OmegaFamily>(omega_family(kind, n, p));
  auto& ref = *fam;
  cache.emplace(label, std::move(fam));
  return ref;
}

std::vector<GroupHom> reduction_witnesses(unsigned n, unsigned s, unsigned p) {
  if (s < 1 || s > n || n < 2) throw InvalidInput("reduction witnesses need 1 <= s <= n, n >= 2");
  const unsigned k = n - s + 1;
  const unsigned m = ipow(p, k);
  auto ext = build_bar_extension(s, m);
  std::vector<GroupHom> maps;
  if (s >= 2) {
    auto block_group = build_unitriangular(s - 1, m);
    auto block = [&](unsigned offset) {
      return hom_by_matrix_map(ext, block_group, [&](const ConcreteElement& c) {
        std::vector<int> e(static_cast<std::size_t>(s) * s);
        for (unsigned i = 0; i < s; ++i)
          for (unsigned j = 0; j < s; ++j) e[i * s + j] = c.entry(i + offset, j + offset);
        return ConcreteElement::matrix(m, s, std::move(e));
      });
    };
    maps.push_back(block(0));
    maps.push_back(block(1));
  }
  if (s < n) {
    const unsigned m2 = ipow(p, k - 1);
    auto reduced_group = build_unitriangular(s, m2);
    maps.push_back(hom_by_matrix_map(ext, reduced_group, [&](const ConcreteElement& c) {
      return ConcreteElement::matrix(m2, s + 1, c.data);
    }));
  }
  return maps;
}

bool kernels_intersect_trivially(const std::vector<GroupHom>& maps) {
  if (maps.empty()) return false;
  const auto& dom = maps.front().domain();
  for (Elem x = 1; x < dom->order(); ++x) {
    bool in_all = true;
    for (const auto& h : maps)
      if (h(x) != 0) {
        in_all = false;
        break;
      }
    if (in_all) return false;
  }
  return true;
}

}  // namespace kergen
