#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kergen/group.hpp"

namespace kergen {

// 0 -> Z -> E -> Gbar -> 1 with Z cyclic of order p and central in E.
struct CentralExtension {
  std::string label;
  unsigned p = 0;
  GroupPtr Z, E, Gbar;
  GroupHom iota;    // Z -> E
  GroupHom lambda;  // E -> Gbar
  std::vector<Elem> section;   // Gbar id -> E id, section[0] = 0
  std::vector<unsigned> z_value;  // Z id -> residue mod p
  unsigned dim = 0;       // matrix size for unitriangular extensions, 0 otherwise
  unsigned modulus = 0;   // matrix modulus for unitriangular extensions

  // Z -> Z/p coordinate of an element of iota(Z); throws if outside.
  unsigned iota_inverse(Elem e) const;
  bool verify() const;
};

struct OmegaMember {
  CentralExtension ext;
  std::vector<GroupHom> gammas;  // Gbar -> E with trivially intersecting kernels
  GroupHom z_embedding;          // Z -> Gbar
};

enum class FamilyKind { Zassenhaus, LowerCentral, Mixed };

struct OmegaFamily {
  FamilyKind kind = FamilyKind::Zassenhaus;
  unsigned n = 0;
  unsigned p = 0;
  std::string label;
  std::vector<OmegaMember> members;
  bool verify() const;
};

GroupPtr build_unitriangular(unsigned n, unsigned m, std::size_t cap = kDefaultClosureCap);

// E = U_n(Z/m) with m = p^k; Z is the order-p subgroup of the corner copy of Z/m.
// The section picks the representative whose corner entry lies in [0, p^(k-1)).
CentralExtension build_bar_extension(unsigned n, unsigned m);

// gamma_1 multiplies the first row's off-diagonal entries by p (which zeroes
// them when m = p); gamma_2 zeroes the last column's off-diagonal entries.
std::pair<GroupHom, GroupHom> gamma_homs(const CentralExtension& ext);

// Extra-special group of order p^3 and exponent p^2 over (Z/p)^2; p odd.
CentralExtension build_mp3(unsigned p);

// (Z/p)^k realized as unipotent matrices supported on the last column.
GroupPtr elementary_abelian(unsigned p, unsigned k);
// Coordinates of an element of elementary_abelian(p, k).
std::vector<unsigned> elementary_coordinates(const FiniteGroup& g, Elem x);

OmegaFamily omega_family(FamilyKind kind, unsigned n, unsigned p);
// "zassenhaus:n:p", "lower-central:n:p", "mixed:p".
const OmegaFamily& family_from_label(const std::string& label);
std::string family_label(FamilyKind kind, unsigned n, unsigned p);

// The maps out of the quotient of U_s(Z/p^(n-s+1)) used to present the
// lower-central family's Tbar by one size smaller: block projections onto
// U_(s-1)(Z/p^(n-s+1)) (s >= 2) and entrywise reduction onto U_s(Z/p^(n-s)) (s < n).
std::vector<GroupHom> reduction_witnesses(unsigned n, unsigned s, unsigned p);

bool kernels_intersect_trivially(const std::vector<GroupHom>& maps);

// Prime p with m = p^k, or 0 if m is not a prime power.
unsigned prime_of_power(unsigned m, unsigned* exponent = nullptr);

}  // namespace kergen
