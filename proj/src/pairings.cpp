#include "kergen/pairings.hpp"

#include <stdexcept>

#include "kergen/filtrations.hpp"

namespace kergen {

// ---- generic bilinear maps ----

PairingKernels pairing_kernels(const PairingMatrix& m) {
  PairingKernels k;
  const std::size_t r = m.rows(), c = m.cols();
  k.rank = r && c ? fp::rank(m.entries, m.p) : 0;
  k.right_kernel = c ? fp::nullspace(m.entries, c, m.p) : fp::Mat{};
  k.left_kernel = r ? fp::nullspace(fp::transpose(m.entries, c), r, m.p) : fp::Mat{};
  // Left map L -> Hom(R, Z/p) is onto iff rank = dim R; right map onto iff rank = dim L.
  k.left_surjective = k.rank == c;
  k.right_surjective = k.rank == r;
  k.non_degenerate = k.left_kernel.empty() && k.right_kernel.empty();
  k.perfect = r == c && k.rank == r;
  return k;
}

PairingMatrix induced_coker_ker(const PairingMatrix& p1, const PairingMatrix& p2, const fp::Mat& alpha,
                                const fp::Mat& beta) {
  const unsigned p = p2.p;
  const std::size_t a1 = p1.rows(), b1 = p1.cols(), a2 = p2.rows(), b2 = p2.cols();
  if (alpha.size() != a2 || beta.size() != b1) throw InvalidInput("induced_coker_ker: map sizes do not match");
  auto alpha_at = [&](std::size_t l, std::size_t i) -> unsigned { return alpha[l][i]; };
  auto beta_at = [&](std::size_t k, std::size_t j) -> unsigned { return beta[k][j]; };
  for (std::size_t i = 0; i < a1; ++i)
    for (std::size_t j = 0; j < b2; ++j) {
      unsigned lhs = 0, rhs = 0;
      for (std::size_t k = 0; k < b1; ++k) lhs += p1.entries[i][k] * beta_at(k, j);
      for (std::size_t l = 0; l < a2; ++l) rhs += alpha_at(l, i) * p2.entries[l][j];
      if (lhs % p != rhs % p) throw NonCommutingSquare("pairing square does not commute");
    }
  // Coker(alpha): unit vectors of A2 extending a basis of the image.
  fp::Echelon im(a2, p);
  for (std::size_t i = 0; i < a1; ++i) {
    fp::Vec col(a2, 0);
    for (std::size_t l = 0; l < a2; ++l) col[l] = static_cast<std::uint8_t>(alpha_at(l, i));
    im.insert(col);
  }
  std::vector<std::size_t> reps;
  for (std::size_t l = 0; l < a2; ++l)
    if (im.insert(fp::unit(a2, l))) reps.push_back(l);
  fp::Mat ker;
  if (b1 > 0) {
    ker = fp::nullspace(beta, b2, p);
  } else {
    for (std::size_t j = 0; j < b2; ++j) ker.push_back(fp::unit(b2, j));
  }
  PairingMatrix out;
  out.p = p;
  for (auto l : reps) out.left_labels.push_back(p2.left_labels[l] + " mod im");
  for (std::size_t j = 0; j < ker.size(); ++j) out.right_labels.push_back("ker[" + std::to_string(j) + "]");
  auto value = [&](const fp::Vec& a, const fp::Vec& b) {
    unsigned v = 0;
    for (std::size_t l = 0; l < a2; ++l)
      for (std::size_t j = 0; j < b2; ++j) v += a[l] * p2.entries[l][j] * b[j];
    return v % p;
  };
  for (auto l : reps) {
    fp::Vec row;
    for (const auto& kv : ker) row.push_back(static_cast<std::uint8_t>(value(fp::unit(a2, l), kv)));
    out.entries.push_back(std::move(row));
  }
  // Shifting a representative by the image of A1 leaves every value unchanged.
  for (std::size_t i = 0; i < a1; ++i) {
    fp::Vec col(a2, 0);
    for (std::size_t l = 0; l < a2; ++l) col[l] = static_cast<std::uint8_t>(alpha_at(l, i));
    for (const auto& kv : ker)
      if (value(col, kv) != 0) throw NonCommutingSquare("induced pairing is not well defined");
  }
  return out;
}

// ---- liftability ----

LiftabilityReport liftability_crosscheck(const CentralExtension& ext, const GroupHom& pi, const GroupHom& rhobar,
                                         const H2Space& h2g, const H2Space& h2q, std::uint64_t budget) {
  if (!pi.is_surjective()) throw InvalidInput("liftability check needs a surjection");
  LiftabilityReport rep;
  const GroupHom composite = rhobar.compose_after(pi);
  auto lift = lift_map(ext, composite, budget, &rep.stats);
  rep.search_lifts = lift.has_value();
  const Cocycle2 alpha = classifying_cocycle(ext);
  rep.inflation_vanishes = fp::is_zero(inflate_coordinates(alpha, h2g, composite));

  const GroupPtr& g = pi.domain();
  const Subgroup n = pi.kernel();
  const InvariantH1 inv = conj_invariant_h1(g, n, ext.p);
  const Quotient q{pi.codomain(), pi};
  const fp::Vec target = inflate_coordinates(alpha, h2q, rhobar);
  const std::size_t t = inv.basis.size();
  fp::Mat columns(h2q.dim(), fp::Vec(t, 0));
  for (std::size_t k = 0; k < t; ++k) {
    auto c = h2q.coordinates(transgression(q, inv, inv.basis[k]));
    for (std::size_t i = 0; i < h2q.dim(); ++i) columns[i][k] = c[i];
  }
  std::optional<fp::Vec> sol;
  if (h2q.dim() == 0)
    sol = fp::Vec(t, 0);
  else
    sol = fp::solve(columns, t, target, ext.p);
  rep.transgression_preimage = sol.has_value();
  rep.psi_unique = (h2q.dim() == 0 ? 0 : fp::rank(columns, ext.p)) == t;
  if (sol) {
    Cochain1 psi = Cochain1::zero(inv.as_group.group, ext.p);
    for (std::size_t k = 0; k < t; ++k)
      if ((*sol)[k]) psi = psi + scale(inv.basis[k], (*sol)[k]);
    if (lift && rep.psi_unique)
      for (Elem x : n.members())
        if (psi(static_cast<Elem>(inv.to_local[x])) != ext.iota_inverse((*lift)(x))) rep.psi_matches_lift = false;
    rep.psi = std::move(psi);
  }
  return rep;
}

// ---- subspaces ----

bool SubspaceHandle::contains(const fp::Vec& v) const {
  if (fp::is_zero(v)) return true;
  return fp::span_contains(basis, v, ambient->dim(), ambient->p());
}

bool SubspaceHandle::contains(const SubspaceHandle& other) const {
  for (const auto& v : other.basis)
    if (!contains(v)) return false;
  return true;
}

// ---- context ----

PairingContext::PairingContext(GroupPtr g, const OmegaFamily& fam, PairingOptions opts)
    : g_(std::move(g)), fam_(fam), opts_(opts) {
  for (const auto& m : fam_.members) alphas_.push_back(classifying_cocycle(m.ext));
}

const TBundle& PairingContext::bundle() {
  if (!bundle_) bundle_ = t_bundle(g_, fam_, opts_.budget);
  return *bundle_;
}

const H2Space& PairingContext::h2_group() {
  if (!h2g_) h2g_ = std::make_unique<H2Space>(g_, fam_.p, opts_.h2_cap);
  return *h2g_;
}

PairingContext::QuotientInfo& PairingContext::quotient(const Subgroup& n) {
  auto it = quotients_.find(n.members());
  if (it != quotients_.end()) return *it->second;
  auto info = std::make_unique<QuotientInfo>();
  info->n = n;
  info->q = quotient_group(g_, n);
  info->h2 = std::make_shared<H2Space>(info->q.group, fam_.p, opts_.h2_cap);
  auto& ref = *info;
  quotients_.emplace(n.members(), std::move(info));
  return ref;
}

const TBundle& PairingContext::quotient_bundle(const Subgroup& n) {
  auto it = qbundles_.find(n.members());
  if (it != qbundles_.end()) return *it->second;
  auto b = std::make_unique<TBundle>(t_bundle(quotient(n).q.group, fam_, opts_.budget));
  auto& ref = *b;
  qbundles_.emplace(n.members(), std::move(b));
  return ref;
}

bool PairingContext::lifts(std::size_t member, const GroupHom& to_gbar, std::optional<GroupHom>* lift) {
  ++lift_checks_;
  const auto& ext = fam_.members[member].ext;
  std::optional<bool> by_search, by_inflation;
  if (opts_.lift_mode != LiftMode::Search)
    by_inflation = fp::is_zero(inflate_coordinates(alphas_[member], h2_group(), to_gbar));
  if (opts_.lift_mode != LiftMode::Inflation || lift) {
    auto l = lift_map(ext, to_gbar, opts_.budget);
    by_search = l.has_value();
    if (lift) *lift = std::move(l);
  }
  if (by_search && by_inflation && *by_search != *by_inflation)
    throw std::logic_error("lift search and inflation disagree on liftability");
  return by_inflation ? *by_inflation : *by_search;
}

const std::vector<PullbackRecord>& PairingContext::pullbacks(const Subgroup& n) {
  auto& info = quotient(n);
  if (info.pullbacks_ready) return info.pullbacks;
  const GroupPtr& q = info.q.group;
  for (std::size_t m = 0; m < fam_.members.size(); ++m) {
    const auto& gbar = fam_.members[m].ext.Gbar;
    auto st = for_each_hom(
        q, gbar,
        [&](const std::vector<Elem>& img) {
          PullbackRecord rec;
          rec.member = m;
          rec.rhobar = GroupHom(q, gbar, img);
          rec.coords = inflate_coordinates(alphas_[m], *info.h2, rec.rhobar);
          rec.liftable = lifts(m, rec.rhobar.compose_after(info.q.projection));
          info.pullbacks.push_back(std::move(rec));
          return true;
        },
        opts_.budget);
    info.pullback_stats.explored += st.explored;
    info.pullback_stats.found += st.found;
  }
  info.pullbacks_ready = true;
  return info.pullbacks;
}

// ---- A, B, C ----

namespace {

void require_chain(const Subgroup& n1, const Subgroup& n2) {
  if (!n1.subset_of(n2)) throw InvalidInput("pairing needs N1 <= N2");
  if (!is_normal(n1) || !is_normal(n2)) throw NotNormal("pairing needs normal subgroups");
}

fp::Mat inflation_between(PairingContext& ctx, const Subgroup& n1, const Subgroup& n2) {
  auto& q1 = ctx.quotient(n1);
  auto& q2 = ctx.quotient(n2);
  GroupHom pi12 = induced_hom(q1.q.projection, q2.q.projection);
  return inflation_matrix(*q2.h2, *q1.h2, pi12);
}

bool killed(const fp::Mat& inf, const fp::Vec& v, unsigned p) {
  return inf.empty() || fp::is_zero(fp::apply(inf, v, p));
}

}  // namespace

std::vector<Elem> coset_basis(const Subgroup& big, const Subgroup& small) {
  std::vector<Elem> reps;
  Subgroup span = small;
  for (Elem x : big.members()) {
    if (span.contains(x)) continue;
    reps.push_back(x);
    span = join_subgroups(span, subgroup_generated(big.parent(), {x}));
  }
  return reps;
}

SubspaceHandle a_space(PairingContext& ctx, const Subgroup& n1, const Subgroup& n2) {
  require_chain(n1, n2);
  auto& q2 = ctx.quotient(n2);
  SubspaceHandle a;
  a.ambient = q2.h2;
  const std::size_t dim = q2.h2->dim();
  if (dim == 0) return a;
  fp::Mat inf = inflation_between(ctx, n1, n2);
  if (inf.empty()) {
    for (std::size_t i = 0; i < dim; ++i) a.basis.push_back(fp::unit(dim, i));
  } else {
    a.basis = fp::nullspace(inf, dim, ctx.p());
  }
  return a;
}

unsigned APairing::evaluate(Elem sigma, const fp::Vec& x) const {
  const auto& ambient = *a.ambient;
  if (ambient.dim() == 0 || fp::is_zero(x)) return 0;
  // x = sum lambda_j a_j, then <sigma, x> = sum lambda_j psi_j(sigma N1).
  fp::Mat cols(ambient.dim(), fp::Vec(a.dim(), 0));
  for (std::size_t j = 0; j < a.dim(); ++j)
    for (std::size_t i = 0; i < ambient.dim(); ++i) cols[i][j] = a.basis[j][i];
  auto lam = fp::solve(cols, a.dim(), x, p);
  if (!lam) throw InvalidInput("class is outside A");
  const auto loc = invariant.to_local[pi1(sigma)];
  if (loc < 0) throw InvalidInput("element is outside N2");
  unsigned v = 0;
  for (std::size_t j = 0; j < a.dim(); ++j) v += (*lam)[j] * psis[j](static_cast<Elem>(loc));
  return v % p;
}

APairing a_pairing(PairingContext& ctx, const Subgroup& n1, const Subgroup& n2) {
  require_chain(n1, n2);
  const unsigned p = ctx.p();
  const GroupPtr& g = ctx.group();
  APairing out;
  out.p = p;
  out.a = a_space(ctx, n1, n2);
  auto& q1 = ctx.quotient(n1);
  auto& q2 = ctx.quotient(n2);
  out.pi1 = q1.q.projection;
  GroupHom pi12 = induced_hom(q1.q.projection, q2.q.projection);
  const Subgroup m = pi12.kernel();
  out.invariant = conj_invariant_h1(q1.q.group, m, p);
  const Quotient over{q2.q.group, pi12};
  const auto& h2q2 = *q2.h2;
  const std::size_t t = out.invariant.basis.size(), dim = h2q2.dim();
  fp::Mat columns(dim, fp::Vec(t, 0));
  for (std::size_t k = 0; k < t; ++k) {
    auto c = h2q2.coordinates(transgression(over, out.invariant, out.invariant.basis[k]));
    for (std::size_t i = 0; i < dim; ++i) columns[i][k] = c[i];
  }
  for (const auto& aj : out.a.basis) {
    auto sol = fp::solve(columns, t, aj, p);
    if (!sol) throw TransgressionSolveFailed("class of A is not a transgression");
    Cochain1 psi = Cochain1::zero(out.invariant.as_group.group, p);
    for (std::size_t k = 0; k < t; ++k)
      if ((*sol)[k]) psi = psi + scale(out.invariant.basis[k], (*sol)[k]);
    out.psis.push_back(std::move(psi));
  }
  out.left_kernel_subgroup = join_subgroups(n1, power_commutator_subgroup(g, n2, p));
  out.left_reps = coset_basis(n2, out.left_kernel_subgroup);
  out.matrix.p = p;
  for (Elem s : out.left_reps) out.matrix.left_labels.push_back("g" + std::to_string(s));
  for (std::size_t j = 0; j < out.a.dim(); ++j) out.matrix.right_labels.push_back("A[" + std::to_string(j) + "]");
  for (Elem s : out.left_reps) {
    fp::Vec row(out.a.dim(), 0);
    const auto loc = out.invariant.to_local[out.pi1(s)];
    for (std::size_t j = 0; j < out.a.dim(); ++j) row[j] = static_cast<std::uint8_t>(out.psis[j](static_cast<Elem>(loc)));
    out.matrix.entries.push_back(std::move(row));
  }
  return out;
}

SubspaceHandle liftable_pullback_space(PairingContext& ctx, const Subgroup& n) {
  const auto& recs = ctx.pullbacks(n);
  auto& info = ctx.quotient(n);
  SubspaceHandle s;
  s.ambient = info.h2;
  fp::Echelon e(info.h2->dim(), ctx.p());
  for (std::size_t i = 0; i < recs.size(); ++i)
    if (recs[i].liftable && e.insert(recs[i].coords)) {
      s.basis.push_back(recs[i].coords);
      s.provenance.push_back(i);
    }
  return s;
}

SubspaceHandle b_space(PairingContext& ctx, const Subgroup& n1, const Subgroup& n2) {
  require_chain(n1, n2);
  const auto& recs = ctx.pullbacks(n2);
  auto& info = ctx.quotient(n2);
  fp::Mat inf = info.h2->dim() ? inflation_between(ctx, n1, n2) : fp::Mat{};
  SubspaceHandle s;
  s.ambient = info.h2;
  fp::Echelon e(info.h2->dim(), ctx.p());
  for (std::size_t i = 0; i < recs.size(); ++i)
    if (recs[i].liftable && killed(inf, recs[i].coords, ctx.p()) && e.insert(recs[i].coords)) {
      s.basis.push_back(recs[i].coords);
      s.provenance.push_back(i);
    }
  return s;
}

SubspaceHandle c_space(PairingContext& ctx, const Subgroup& n1, const Subgroup& n2) {
  require_chain(n1, n2);
  SubspaceHandle lift = liftable_pullback_space(ctx, n2);
  SubspaceHandle a = a_space(ctx, n1, n2);
  SubspaceHandle c;
  c.ambient = a.ambient;
  c.basis = fp::intersect_spans(lift.basis, a.basis, a.ambient->dim(), ctx.p());
  c.provenance = lift.provenance;
  return c;
}

KernelCondition kernel_generating_condition(PairingContext& ctx, const Subgroup& n1, const Subgroup& n2) {
  KernelCondition kc;
  SubspaceHandle a = a_space(ctx, n1, n2);
  SubspaceHandle b = b_space(ctx, n1, n2);
  SubspaceHandle c = c_space(ctx, n1, n2);
  kc.dim_a = a.dim();
  kc.dim_b = b.dim();
  kc.dim_c = c.dim();
  kc.chain_ok = c.contains(b) && a.contains(c);
  kc.holds = kc.chain_ok && b.contains(c);
  if (!kc.holds)
    for (const auto& v : c.basis)
      if (!b.contains(v)) {
        kc.witness = v;
        break;
      }
  return kc;
}

TransferReport transfer_check(PairingContext& ctx, const Subgroup& n) {
  const TBundle& tb = ctx.bundle();
  if (!n.subset_of(tb.Tbar)) throw InvalidInput("transfer check needs N <= Tbar(G)");
  TransferReport r;
  r.order_g = ctx.group()->order();
  r.order_n = n.order();
  r.order_t = tb.T.order();
  r.order_tbar = tb.Tbar.order();
  const auto& info = ctx.quotient(n);
  const Subgroup image = info.q.projection.image_of(tb.T);
  const Subgroup tq = ctx.quotient_bundle(n).T;
  r.order_image_t = image.order();
  r.order_t_quotient = tq.order();
  r.condition_a = image == tq;
  r.condition_b = kernel_generating_condition(ctx, n, tb.Tbar);
  return r;
}

namespace {

PairingMatrix restricted_pairing(const APairing& ap, const std::vector<Elem>& reps, const SubspaceHandle& right,
                                 const std::string& tag) {
  PairingMatrix m;
  m.p = ap.p;
  for (Elem s : reps) m.left_labels.push_back("g" + std::to_string(s));
  for (std::size_t j = 0; j < right.dim(); ++j) m.right_labels.push_back(tag + "[" + std::to_string(j) + "]");
  for (Elem s : reps) {
    fp::Vec row;
    for (const auto& v : right.basis) row.push_back(static_cast<std::uint8_t>(ap.evaluate(s, v)));
    m.entries.push_back(std::move(row));
  }
  return m;
}

bool annihilates(const APairing& ap, const Subgroup& left, const SubspaceHandle& right) {
  for (Elem s : subgroup_generators(left))
    for (const auto& v : right.basis)
      if (ap.evaluate(s, v) != 0) return false;
  return true;
}

}  // namespace

CPairingResult c_pairing(PairingContext& ctx, const Subgroup& n1, const Subgroup& n2) {
  require_chain(n1, n2);
  const unsigned p = ctx.p();
  CPairingResult r;
  APairing ap = a_pairing(ctx, n1, n2);
  r.a = ap.matrix;
  r.ka = pairing_kernels(r.a);
  r.spaces = kernel_generating_condition(ctx, n1, n2);
  SubspaceHandle b = b_space(ctx, n1, n2);
  SubspaceHandle c = c_space(ctx, n1, n2);

  const Subgroup t_q1 = ctx.quotient_bundle(n1).T;
  r.left_b = intersect_subgroups({n2, ctx.quotient(n1).q.projection.preimage(t_q1)});
  r.left_c = intersect_subgroups({n2, join_subgroups(n1, ctx.bundle().T)});
  r.left_chain_ok = ap.left_kernel_subgroup.subset_of(r.left_c) && r.left_c.subset_of(r.left_b);

  r.b = restricted_pairing(ap, coset_basis(n2, r.left_b), b, "B");
  r.c = restricted_pairing(ap, coset_basis(n2, r.left_c), c, "C");
  r.kb = pairing_kernels(r.b);
  r.kc = pairing_kernels(r.c);
  r.b_well_defined = annihilates(ap, r.left_b, b);
  r.c_well_defined = annihilates(ap, r.left_c, c);

  // Recompute the C entries from lifts of liftable pullbacks on G/N2.
  r.lift_route_agrees = true;
  if (c.dim() > 0) {
    const auto& recs = ctx.pullbacks(n2);
    SubspaceHandle lift_space = liftable_pullback_space(ctx, n2);
    const std::size_t dim = lift_space.ambient->dim(), L = lift_space.dim();
    fp::Mat cols(dim, fp::Vec(L, 0));
    for (std::size_t k = 0; k < L; ++k)
      for (std::size_t i = 0; i < dim; ++i) cols[i][k] = lift_space.basis[k][i];
    std::vector<GroupHom> lifts;
    for (auto idx : lift_space.provenance) {
      const auto& rec = recs[idx];
      std::optional<GroupHom> lift;
      if (!ctx.lifts(rec.member, rec.rhobar.compose_after(ctx.quotient(n2).q.projection), &lift) || !lift)
        throw std::logic_error("liftable pullback has no lift");
      lifts.push_back(*lift);
    }
    const auto reps = coset_basis(n2, r.left_c);
    for (std::size_t j = 0; j < c.dim(); ++j) {
      auto lam = fp::solve(cols, L, c.basis[j], p);
      if (!lam) throw std::logic_error("class of C is outside the liftable span");
      for (std::size_t i = 0; i < reps.size(); ++i) {
        unsigned v = 0;
        for (std::size_t k = 0; k < L; ++k)
          v += (*lam)[k] * ctx.family().members[recs[lift_space.provenance[k]].member].ext.iota_inverse(lifts[k](reps[i]));
        if (v % p != r.c.entries[i][j]) r.lift_route_agrees = false;
      }
    }
  }
  return r;
}

}  // namespace kergen
