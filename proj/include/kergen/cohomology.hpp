#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "kergen/group.hpp"
#include "kergen/homsearch.hpp"
#include "kergen/linalg.hpp"
#include "kergen/unitriangular.hpp"

// Mod-p cohomology of finite groups with trivial coefficients, normalized cochains.
namespace kergen {

inline constexpr std::size_t kDefaultH2Cap = 128;

struct Cochain1 {
  GroupPtr group;
  unsigned p = 0;
  std::vector<std::uint8_t> values;  // indexed by element id

  static Cochain1 zero(const GroupPtr& g, unsigned p);
  unsigned operator()(Elem g) const { return values[g]; }
  bool is_hom() const;
};

Cochain1 operator+(const Cochain1& a, const Cochain1& b);
Cochain1 scale(const Cochain1& a, unsigned s);

struct Cocycle2 {
  GroupPtr group;
  unsigned p = 0;
  std::vector<std::uint8_t> values;  // row-major n x n table

  static Cocycle2 zero(const GroupPtr& g, unsigned p);
  unsigned operator()(Elem a, Elem b) const { return values[static_cast<std::size_t>(a) * group->order() + b]; }
  void set(Elem a, Elem b, unsigned v) { values[static_cast<std::size_t>(a) * group->order() + b] = static_cast<std::uint8_t>(v); }
  bool is_normalized() const;
  // f(g,h) + f(gh,k) = f(h,k) + f(g,hk) on all triples.
  bool is_cocycle() const;
};

Cocycle2 operator+(const Cocycle2& a, const Cocycle2& b);
Cocycle2 operator-(const Cocycle2& a, const Cocycle2& b);
Cocycle2 scale(const Cocycle2& a, unsigned s);

// delta c (g,h) = c(g) + c(h) - c(gh)
Cocycle2 coboundary(const Cochain1& c);

// Cocycle values on the edges (a, y_i) of the generator graph; enough to determine a class.
using EdgeValues = std::function<unsigned(Elem a, std::size_t gen_index)>;

// H^2(G, Z/p) presented as tree-normalized cocycles modulo the coboundaries of
// the letter-count cochains of a BFS spanning tree.
class H2Space {
 public:
  H2Space(GroupPtr g, unsigned p, std::size_t cap = kDefaultH2Cap);

  const GroupPtr& group() const { return g_; }
  unsigned p() const { return p_; }
  std::size_t dim() const { return basis_u_.size(); }
  const std::vector<Cocycle2>& basis() const { return basis_; }
  const std::vector<Elem>& generators() const { return gens_; }

  // Coordinates of a cocycle class in the basis; throws InvalidInput for non-cocycles.
  fp::Vec coordinates(const Cocycle2& f) const;
  fp::Vec coordinates(const EdgeValues& f) const;
  bool is_coboundary(const Cocycle2& f) const { return fp::is_zero(coordinates(f)); }
  bool same_class(const Cocycle2& a, const Cocycle2& b) const { return is_coboundary(a - b); }
  // Some c with f = delta c, when f is a coboundary.
  std::optional<Cochain1> coboundary_witness(const Cocycle2& f) const;
  // Representative of the class with the given coordinates.
  Cocycle2 expand(const fp::Vec& coords) const;

  std::size_t unknowns() const { return unknowns_; }
  // d - rank of the letter-count coboundaries; equals dim H^1.
  std::size_t h1_dim_from_coboundaries() const { return gens_.size() - coboundary_rank_; }

 private:
  fp::Vec edge_vector(const EdgeValues& f, std::vector<int>* shift) const;
  Cocycle2 expand_edges(const fp::Vec& u) const;

  GroupPtr g_;
  unsigned p_;
  std::vector<Elem> gens_;
  std::vector<Elem> parent_;
  std::vector<std::uint32_t> pgen_;
  std::vector<Elem> bfs_;
  std::vector<std::int64_t> var_;  // var_[a * d + i], -1 on tree edges
  std::size_t unknowns_ = 0;
  fp::Mat letter_counts_;          // letter_counts_[i][g]
  std::size_t coboundary_rank_ = 0;
  std::vector<std::size_t> cob_index_;  // which letter-count coboundaries were accepted
  fp::Mat basis_u_;
  std::vector<Cocycle2> basis_;
  fp::Echelon solver_;
};

// Basis of Hom(G, Z/p), read off the Frattini quotient G / G^(2,p).
std::vector<Cochain1> h1(const GroupPtr& g, unsigned p);

// Coefficients of a hom over the h1 basis (via values on generators).
fp::Vec h1_coordinates(const std::vector<Cochain1>& basis, const Cochain1& phi);

// f(x,y) = iota^-1(s(x) s(y) s(xy)^-1) for the stored section.
Cocycle2 classifying_cocycle(const CentralExtension& ext);
Cocycle2 classifying_cocycle(const CentralExtension& ext, const std::vector<Elem>& section);
// A second normalized section, shifting each nonidentity representative by a central element.
std::vector<Elem> alternative_section(const CentralExtension& ext);

Cocycle2 pullback(const Cocycle2& alpha, const GroupHom& rho);
Cocycle2 cup(const Cochain1& phi, const Cochain1& psi);
Cocycle2 bockstein(const Cochain1& phi);

// dim(H^2(G)) x dim(H^2(Q)) matrix of inflation along a surjection G -> Q.
fp::Mat inflation_matrix(const H2Space& source, const H2Space& target, const GroupHom& pi);
// Coordinates in H^2(G) of the pullback of a cocycle on Q along pi: G -> Q.
fp::Vec inflate_coordinates(const Cocycle2& alpha, const H2Space& target, const GroupHom& pi);

// H^1(N)^G for a normal subgroup N, with cochains on N realized as a group.
struct InvariantH1 {
  Subgroup normal;
  SubgroupAsGroup as_group;
  std::vector<std::int64_t> to_local;  // parent id -> id in as_group.group, -1 outside N
  std::vector<Cochain1> all;           // basis of Hom(N, Z/p)
  std::vector<Cochain1> basis;         // basis of the G-invariant homs
};
InvariantH1 conj_invariant_h1(const GroupPtr& g, const Subgroup& n, unsigned p);

// Smallest id in each coset (the BFS coset section) or largest id.
std::vector<Elem> coset_section(const Quotient& q, bool largest = false);

// trg(psi)(x,y) = psi(t(x) t(y) t(xy)^-1) on G/N.
Cocycle2 transgression(const Quotient& q, const InvariantH1& inv, const Cochain1& psi, bool largest_section = false);

struct MasseyResult {
  std::vector<GroupHom> rhobars;            // every hom with the prescribed superdiagonal
  std::vector<fp::Vec> classes;             // distinct pullback classes in H^2(Q) coordinates
  std::vector<std::size_t> class_witness;   // index into rhobars for each class
  SearchStats stats;
};

// Entry (i, i+1) of a hom into Ubar_n(Z/p) as an F_p-valued hom.
Cochain1 superdiagonal_entry(const CentralExtension& ext, const GroupHom& rhobar, unsigned i);

// Pullbacks of the Ubar_n classifying class along homs Q -> Ubar_n(Z/p) whose
// superdiagonal entries are the given characters.
MasseyResult massey_pullback_set(const H2Space& h2q, const std::vector<Cochain1>& phis, const OmegaFamily& fam,
                                 std::uint64_t budget = kDefaultPrefixBudget);

}  // namespace kergen
