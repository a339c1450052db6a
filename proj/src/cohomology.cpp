#include "kergen/cohomology.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "kergen/filtrations.hpp"

namespace kergen {

// ---- cochains ----

Cochain1 Cochain1::zero(const GroupPtr& g, unsigned p) { return Cochain1{g, p, std::vector<std::uint8_t>(g->order(), 0)}; }

bool Cochain1::is_hom() const {
  if (values[0] != 0) return false;
  for (Elem a = 0; a < group->order(); ++a)
    for (Elem y : group->generators())
      if (values[group->mul(a, y)] != (values[a] + values[y]) % p) return false;
  return true;
}

Cochain1 operator+(const Cochain1& a, const Cochain1& b) {
  Cochain1 r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = static_cast<std::uint8_t>((a.values[i] + b.values[i]) % a.p);
  return r;
}

Cochain1 scale(const Cochain1& a, unsigned s) {
  Cochain1 r = a;
  for (auto& v : r.values) v = static_cast<std::uint8_t>(v * s % a.p);
  return r;
}

Cocycle2 Cocycle2::zero(const GroupPtr& g, unsigned p) {
  return Cocycle2{g, p, std::vector<std::uint8_t>(g->order() * g->order(), 0)};
}

bool Cocycle2::is_normalized() const {
  for (Elem g = 0; g < group->order(); ++g)
    if ((*this)(0, g) != 0 || (*this)(g, 0) != 0) return false;
  return true;
}

bool Cocycle2::is_cocycle() const {
  const auto& G = *group;
  const std::size_t n = G.order();
  for (Elem g = 0; g < n; ++g)
    for (Elem h = 0; h < n; ++h) {
      const unsigned gh = G.mul(g, h);
      const unsigned fgh = (*this)(g, h);
      for (Elem k = 0; k < n; ++k)
        if ((fgh + (*this)(gh, k)) % p != ((*this)(h, k) + (*this)(g, G.mul(h, k))) % p) return false;
    }
  return true;
}

Cocycle2 operator+(const Cocycle2& a, const Cocycle2& b) {
  Cocycle2 r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = static_cast<std::uint8_t>((a.values[i] + b.values[i]) % a.p);
  return r;
}

Cocycle2 operator-(const Cocycle2& a, const Cocycle2& b) {
  Cocycle2 r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i)
    r.values[i] = static_cast<std::uint8_t>((a.values[i] + a.p - b.values[i]) % a.p);
  return r;
}

Cocycle2 scale(const Cocycle2& a, unsigned s) {
  Cocycle2 r = a;
  for (auto& v : r.values) v = static_cast<std::uint8_t>(v * s % a.p);
  return r;
}

Cocycle2 coboundary(const Cochain1& c) {
  Cocycle2 f = Cocycle2::zero(c.group, c.p);
  const auto& G = *c.group;
  for (Elem g = 0; g < G.order(); ++g)
    for (Elem h = 0; h < G.order(); ++h) f.set(g, h, (c(g) + c(h) + c.p - c(G.mul(g, h))) % c.p);
  return f;
}

// ---- H^2 ----

H2Space::H2Space(GroupPtr g, unsigned p, std::size_t cap) : g_(std::move(g)), p_(p), solver_(0, p) {
  const auto& G = *g_;
  const std::size_t n = G.order();
  if (n > cap) throw GroupTooLarge("H^2 needs |G| <= " + std::to_string(cap) + ", got " + std::to_string(n));
  gens_ = irredundant_generators(G);
  const std::size_t d = gens_.size();

  parent_.assign(n, 0);
  pgen_.assign(n, 0);
  std::vector<char> seen(n, 0);
  bfs_ = {0};
  seen[0] = 1;
  for (std::size_t head = 0; head < bfs_.size(); ++head)
    for (std::size_t i = 0; i < d; ++i) {
      Elem z = G.mul(bfs_[head], gens_[i]);
      if (!seen[z]) {
        seen[z] = 1;
        parent_[z] = bfs_[head];
        pgen_[z] = static_cast<std::uint32_t>(i);
        bfs_.push_back(z);
      }
    }

  var_.assign(n * d, -1);
  for (Elem a = 0; a < n; ++a)
    for (std::size_t i = 0; i < d; ++i) {
      Elem h = G.mul(a, gens_[i]);
      const bool tree = h != 0 && parent_[h] == a && pgen_[h] == i;
      if (!tree) var_[a * d + i] = static_cast<std::int64_t>(unknowns_++);
    }
  const std::size_t U = unknowns_;

  // f(g, h) as a linear form in the non-tree edge values, for each g in turn.
  fp::EquationSystem sys(U, p_);
  std::vector<fp::Vec> form(n, fp::Vec(U, 0));
  std::vector<std::pair<std::uint32_t, std::uint8_t>> terms;
  fp::Vec eq(U);
  for (Elem g = 1; g < n && sys.rank() < U; ++g) {
    for (std::size_t t = 1; t < bfs_.size(); ++t) {
      const Elem h = bfs_[t];
      form[h] = form[parent_[h]];
      auto v = var_[static_cast<std::size_t>(G.mul(g, parent_[h])) * d + pgen_[h]];
      if (v >= 0) form[h][v] = static_cast<std::uint8_t>((form[h][v] + 1) % p_);
    }
    for (Elem h = 0; h < n; ++h)
      for (std::size_t i = 0; i < d; ++i) {
        auto vh = var_[h * d + i];
        if (vh < 0) continue;
        eq = fp::sub(form[G.mul(h, gens_[i])], form[h], p_);
        auto vg = var_[static_cast<std::size_t>(G.mul(g, h)) * d + i];
        if (vg >= 0) eq[vg] = static_cast<std::uint8_t>((eq[vg] + p_ - 1) % p_);
        eq[vh] = static_cast<std::uint8_t>((eq[vh] + 1) % p_);
        terms.clear();
        for (std::size_t c = 0; c < U; ++c)
          if (eq[c]) terms.emplace_back(static_cast<std::uint32_t>(c), eq[c]);
        if (!terms.empty()) sys.add(terms);
      }
  }
  fp::Mat zt = sys.nullspace();

  letter_counts_.assign(d, fp::Vec(n, 0));
  for (std::size_t t = 1; t < bfs_.size(); ++t) {
    const Elem h = bfs_[t];
    for (std::size_t i = 0; i < d; ++i)
      letter_counts_[i][h] = static_cast<std::uint8_t>((letter_counts_[i][parent_[h]] + (pgen_[h] == i ? 1 : 0)) % p_);
  }

  solver_ = fp::Echelon(U, p_);
  for (std::size_t i = 0; i < d; ++i) {
    fp::Vec b(U, 0);
    for (Elem a = 0; a < n; ++a)
      for (std::size_t j = 0; j < d; ++j) {
        auto v = var_[a * d + j];
        if (v < 0) continue;
        b[v] = static_cast<std::uint8_t>(
            (letter_counts_[i][a] + (i == j ? 1 : 0) + p_ - letter_counts_[i][G.mul(a, gens_[j])]) % p_);
      }
    if (solver_.insert(b)) cob_index_.push_back(i);
  }
  coboundary_rank_ = cob_index_.size();
  for (const auto& z : zt)
    if (solver_.insert(z)) basis_u_.push_back(z);
  for (const auto& u : basis_u_) basis_.push_back(expand_edges(u));
}

fp::Vec H2Space::edge_vector(const EdgeValues& f, std::vector<int>* shift) const {
  const auto& G = *g_;
  const std::size_t n = G.order(), d = gens_.size();
  std::vector<int> c(n, 0);
  for (std::size_t t = 1; t < bfs_.size(); ++t) {
    const Elem h = bfs_[t];
    c[h] = static_cast<int>((c[parent_[h]] + p_ - f(parent_[h], pgen_[h]) % p_) % p_);
  }
  fp::Vec u(unknowns_, 0);
  for (Elem a = 0; a < n; ++a)
    for (std::size_t i = 0; i < d; ++i) {
      auto v = var_[a * d + i];
      if (v < 0) continue;
      u[v] = static_cast<std::uint8_t>((f(a, i) % p_ + p_ - c[a] + c[G.mul(a, gens_[i])]) % p_);
    }
  if (shift) *shift = std::move(c);
  return u;
}

fp::Vec H2Space::coordinates(const EdgeValues& f) const {
  auto full = solver_.coordinates(edge_vector(f, nullptr));
  if (!full) throw InvalidInput("edge values do not come from a 2-cocycle");
  return fp::Vec(full->begin() + static_cast<std::ptrdiff_t>(coboundary_rank_), full->end());
}

fp::Vec H2Space::coordinates(const Cocycle2& f) const {
  if (f.group->order() != g_->order() || f.p != p_) throw InvalidInput("cocycle lives on a different group");
  return coordinates([&](Elem a, std::size_t i) { return f(a, gens_[i]); });
}

std::optional<Cochain1> H2Space::coboundary_witness(const Cocycle2& f) const {
  std::vector<int> c;
  auto u = edge_vector([&](Elem a, std::size_t i) { return f(a, gens_[i]); }, &c);
  auto full = solver_.coordinates(u);
  if (!full) throw InvalidInput("table is not a 2-cocycle");
  for (std::size_t k = coboundary_rank_; k < full->size(); ++k)
    if ((*full)[k]) return std::nullopt;
  Cochain1 w = Cochain1::zero(g_, p_);
  for (Elem g = 0; g < g_->order(); ++g) {
    unsigned v = static_cast<unsigned>(c[g]);
    for (std::size_t k = 0; k < coboundary_rank_; ++k) v += (*full)[k] * letter_counts_[cob_index_[k]][g];
    w.values[g] = static_cast<std::uint8_t>(v % p_);
  }
  return w;
}

Cocycle2 H2Space::expand_edges(const fp::Vec& u) const {
  const auto& G = *g_;
  const std::size_t d = gens_.size();
  Cocycle2 f = Cocycle2::zero(g_, p_);
  for (Elem g = 0; g < G.order(); ++g)
    for (std::size_t t = 1; t < bfs_.size(); ++t) {
      const Elem h = bfs_[t], par = parent_[h];
      auto v = var_[static_cast<std::size_t>(G.mul(g, par)) * d + pgen_[h]];
      f.set(g, h, (f(g, par) + (v >= 0 ? u[v] : 0)) % p_);
    }
  return f;
}

Cocycle2 H2Space::expand(const fp::Vec& coords) const {
  if (coords.size() != dim()) throw InvalidInput("coordinate vector has the wrong length");
  fp::Vec u(unknowns_, 0);
  for (std::size_t k = 0; k < coords.size(); ++k) fp::axpy(u, coords[k], basis_u_[k], p_);
  return expand_edges(u);
}

// ---- H^1 ----

std::vector<Cochain1> h1(const GroupPtr& g, unsigned p) {
  Subgroup frattini = power_commutator_subgroup(g, Subgroup::whole(g), p);
  Quotient q = quotient_group(g, frattini);
  const auto& Q = *q.group;
  auto basis = irredundant_generators(Q);
  const std::size_t r = basis.size();
  std::vector<std::vector<std::uint8_t>> coord(Q.order(), std::vector<std::uint8_t>(r, 0));
  std::vector<unsigned> a(r, 0);
  for (std::size_t count = 0; count < Q.order(); ++count) {
    Elem x = 0;
    for (std::size_t i = 0; i < r; ++i) x = Q.mul(x, Q.pow(basis[i], a[i]));
    for (std::size_t i = 0; i < r; ++i) coord[x][i] = static_cast<std::uint8_t>(a[i]);
    for (std::size_t i = 0; i < r; ++i) {
      if (++a[i] < p) break;
      a[i] = 0;
    }
  }
  std::vector<Cochain1> out;
  for (std::size_t i = 0; i < r; ++i) {
    Cochain1 c = Cochain1::zero(g, p);
    for (Elem x = 0; x < g->order(); ++x) c.values[x] = coord[q.projection(x)][i];
    out.push_back(std::move(c));
  }
  return out;
}

fp::Vec h1_coordinates(const std::vector<Cochain1>& basis, const Cochain1& phi) {
  const auto gens = irredundant_generators(*phi.group);
  fp::Mat a(gens.size(), fp::Vec(basis.size(), 0));
  fp::Vec b(gens.size(), 0);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t k = 0; k < basis.size(); ++k) a[i][k] = basis[k].values[gens[i]];
    b[i] = phi.values[gens[i]];
  }
  auto x = fp::solve(a, basis.size(), b, phi.p);
  if (!x) throw InvalidInput("cochain is not in the span of the H^1 basis");
  return *x;
}

// ---- extensions and products ----

Cocycle2 classifying_cocycle(const CentralExtension& ext, const std::vector<Elem>& section) {
  const auto& Q = *ext.Gbar;
  const auto& E = *ext.E;
  Cocycle2 f = Cocycle2::zero(ext.Gbar, ext.p);
  for (Elem x = 0; x < Q.order(); ++x)
    for (Elem y = 0; y < Q.order(); ++y)
      f.set(x, y, ext.iota_inverse(E.mul(E.mul(section[x], section[y]), E.inv(section[Q.mul(x, y)]))));
  return f;
}

Cocycle2 classifying_cocycle(const CentralExtension& ext) { return classifying_cocycle(ext, ext.section); }

std::vector<Elem> alternative_section(const CentralExtension& ext) {
  std::vector<Elem> s = ext.section;
  for (Elem x = 1; x < s.size(); ++x) s[x] = ext.E->mul(s[x], ext.iota(static_cast<Elem>((x * 7 + 1) % ext.Z->order())));
  return s;
}

Cocycle2 pullback(const Cocycle2& alpha, const GroupHom& rho) {
  if (rho.codomain()->order() != alpha.group->order()) throw InvalidInput("pullback: codomain mismatch");
  const auto& Q = *rho.domain();
  Cocycle2 f = Cocycle2::zero(rho.domain(), alpha.p);
  for (Elem x = 0; x < Q.order(); ++x)
    for (Elem y = 0; y < Q.order(); ++y) f.set(x, y, alpha(rho(x), rho(y)));
  return f;
}

Cocycle2 cup(const Cochain1& phi, const Cochain1& psi) {
  if (phi.group != psi.group && phi.group->hash() != psi.group->hash()) throw InvalidInput("cup: different groups");
  const std::size_t n = phi.group->order();
  Cocycle2 f = Cocycle2::zero(phi.group, phi.p);
  for (Elem g = 0; g < n; ++g)
    for (Elem h = 0; h < n; ++h) f.set(g, h, phi(g) * psi(h) % phi.p);
  return f;
}

Cocycle2 bockstein(const Cochain1& phi) {
  const auto& G = *phi.group;
  const unsigned p = phi.p;
  Cocycle2 f = Cocycle2::zero(phi.group, p);
  for (Elem g = 0; g < G.order(); ++g)
    for (Elem h = 0; h < G.order(); ++h) {
      const unsigned num = phi(g) + phi(h) + p - phi(G.mul(g, h));  // p * carry + p
      f.set(g, h, ((num / p) + p - 1) % p);
    }
  return f;
}

fp::Vec inflate_coordinates(const Cocycle2& alpha, const H2Space& target, const GroupHom& pi) {
  const auto& gens = target.generators();
  return target.coordinates([&](Elem a, std::size_t i) { return alpha(pi(a), pi(gens[i])); });
}

fp::Mat inflation_matrix(const H2Space& source, const H2Space& target, const GroupHom& pi) {
  fp::Mat m(target.dim(), fp::Vec(source.dim(), 0));
  for (std::size_t k = 0; k < source.dim(); ++k) {
    auto col = inflate_coordinates(source.basis()[k], target, pi);
    for (std::size_t i = 0; i < target.dim(); ++i) m[i][k] = col[i];
  }
  return m;
}

// ---- invariants and transgression ----

InvariantH1 conj_invariant_h1(const GroupPtr& g, const Subgroup& n, unsigned p) {
  if (!is_normal(n)) throw NotNormal("conj_invariant_h1 needs a normal subgroup");
  InvariantH1 inv;
  inv.normal = n;
  inv.as_group = subgroup_as_group(n);
  inv.to_local.assign(g->order(), -1);
  for (Elem x = 0; x < inv.as_group.group->order(); ++x) inv.to_local[inv.as_group.embedding(x)] = x;
  inv.all = h1(inv.as_group.group, p);
  const auto local_gens = irredundant_generators(*inv.as_group.group);
  const std::size_t r = inv.all.size();
  fp::Mat sys;
  for (Elem t : g->generators())
    for (Elem m : local_gens) {
      const Elem conj = static_cast<Elem>(inv.to_local[g->conj(inv.as_group.embedding(m), t)]);
      fp::Vec row(r, 0);
      for (std::size_t k = 0; k < r; ++k) row[k] = static_cast<std::uint8_t>((inv.all[k](conj) + p - inv.all[k](m)) % p);
      sys.push_back(std::move(row));
    }
  for (const auto& x : fp::nullspace(sys, r, p)) {
    Cochain1 c = Cochain1::zero(inv.as_group.group, p);
    for (std::size_t k = 0; k < r; ++k)
      if (x[k]) c = c + scale(inv.all[k], x[k]);
    inv.basis.push_back(std::move(c));
  }
  return inv;
}

std::vector<Elem> coset_section(const Quotient& q, bool largest) {
  const std::size_t nq = q.group->order();
  std::vector<Elem> t(nq, 0);
  std::vector<char> set(nq, 0);
  const std::size_t n = q.projection.domain()->order();
  for (Elem g = 0; g < n; ++g) {
    const Elem x = q.projection(g);
    if (!set[x] || largest) {
      t[x] = g;
      set[x] = 1;
    }
  }
  return t;
}

Cocycle2 transgression(const Quotient& q, const InvariantH1& inv, const Cochain1& psi, bool largest_section) {
  const auto& G = *q.projection.domain();
  if (q.projection.kernel() != inv.normal) throw InvalidInput("transgression: quotient is not by the given subgroup");
  if (psi.group != inv.as_group.group) throw InvalidInput("transgression: cochain is not on the subgroup");
  if (!psi.is_hom()) throw NotInvariant("transgression needs a homomorphism on the subgroup");
  for (Elem t : G.generators())
    for (Elem m : inv.normal.members())
      if (psi(static_cast<Elem>(inv.to_local[G.conj(m, t)])) != psi(static_cast<Elem>(inv.to_local[m])))
        throw NotInvariant("cochain on the subgroup is not conjugation invariant");
  const auto t = coset_section(q, largest_section);
  const auto& Q = *q.group;
  Cocycle2 f = Cocycle2::zero(q.group, psi.p);
  for (Elem x = 0; x < Q.order(); ++x)
    for (Elem y = 0; y < Q.order(); ++y) {
      const Elem e = G.mul(G.mul(t[x], t[y]), G.inv(t[Q.mul(x, y)]));
      const auto loc = inv.to_local[e];
      if (loc < 0) throw std::logic_error("section defect outside the normal subgroup");
      f.set(x, y, psi(static_cast<Elem>(loc)));
    }
  return f;
}

// ---- Massey products ----

Cochain1 superdiagonal_entry(const CentralExtension& ext, const GroupHom& rhobar, unsigned i) {
  if (ext.dim == 0 || i + 1 >= ext.dim) throw InvalidInput("superdiagonal entry out of range");
  Cochain1 c = Cochain1::zero(rhobar.domain(), ext.p);
  for (Elem x = 0; x < rhobar.domain()->order(); ++x)
    c.values[x] = static_cast<std::uint8_t>(ext.E->concrete()[ext.section[rhobar(x)]].entry(i, i + 1) % ext.p);
  return c;
}

MasseyResult massey_pullback_set(const H2Space& h2q, const std::vector<Cochain1>& phis, const OmegaFamily& fam,
                                 std::uint64_t budget) {
  if (fam.kind != FamilyKind::Zassenhaus) throw InvalidInput("Massey products use the zassenhaus family");
  if (phis.size() != fam.n) throw InvalidInput("need one character per superdiagonal entry");
  const auto& ext = fam.members.front().ext;
  if (ext.modulus != ext.p) throw InvalidInput("Massey products need coefficients Z/p");
  const GroupPtr& q = h2q.group();
  const auto& gens = h2q.generators();
  const std::size_t nbar = ext.Gbar->order();
  std::vector<std::vector<unsigned>> superdiag(nbar, std::vector<unsigned>(fam.n));
  for (Elem x = 0; x < nbar; ++x)
    for (unsigned i = 0; i < fam.n; ++i)
      superdiag[x][i] = static_cast<unsigned>(ext.E->concrete()[ext.section[x]].entry(i, i + 1)) % ext.p;
  CandidateFilter filter = [&](std::size_t j, Elem image) {
    for (unsigned i = 0; i < fam.n; ++i)
      if (superdiag[image][i] != phis[i](gens[j])) return false;
    return true;
  };
  const Cocycle2 alpha = classifying_cocycle(ext);
  MasseyResult res;
  std::set<fp::Vec> seen;
  res.stats = for_each_hom(
      q, ext.Gbar,
      [&](const std::vector<Elem>& img) {
        res.rhobars.emplace_back(q, ext.Gbar, img);
        auto c = inflate_coordinates(alpha, h2q, res.rhobars.back());
        if (seen.insert(c).second) {
          res.classes.push_back(c);
          res.class_witness.push_back(res.rhobars.size() - 1);
        }
        return true;
      },
      budget, filter);
  return res;
}

}  // namespace kergen
