#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kergen/group.hpp"
#include "kergen/linalg.hpp"

// Free-group words, truncated Magnus series, Lyndon words and the
// free-nilpotent stand-ins.
namespace kergen {

// Letters are +i for x_i and -i for x_i^-1, with 1 <= i <= k.
using FreeWord = std::vector<int>;

FreeWord inverse_word(const FreeWord& w);
FreeWord concat(const FreeWord& a, const FreeWord& b);
// [a,b] = a^-1 b^-1 a b
FreeWord commutator_word(const FreeWord& a, const FreeWord& b);
// g^-1 w g
FreeWord conjugate_word(const FreeWord& w, const FreeWord& g);
FreeWord power_word(const FreeWord& w, unsigned e);
// Cancels adjacent inverse pairs.
FreeWord reduce_word(const FreeWord& w);
std::string word_to_string(const FreeWord& w);

// Element of F_p<<X_1..X_k>> modulo monomials of degree > deg. A monomial
// X_(i_1)...X_(i_l) sits at offset(l) + sum (i_t - 1) k^(l - t).
class TruncatedSeries {
 public:
  TruncatedSeries(unsigned k, unsigned p, unsigned deg);  // zero series
  static TruncatedSeries one(unsigned k, unsigned p, unsigned deg);
  // 1 + X_i
  static TruncatedSeries generator(unsigned k, unsigned p, unsigned deg, unsigned i);

  unsigned k() const { return k_; }
  unsigned p() const { return p_; }
  unsigned deg() const { return deg_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<std::uint8_t>& coeffs() const { return coeffs_; }

  // Coefficient of X_(letters[0]) X_(letters[1]) ..., letters 1-based.
  unsigned coeff(const std::vector<unsigned>& letters) const;
  void set_coeff(const std::vector<unsigned>& letters, unsigned v);
  unsigned constant() const { return coeffs_[0]; }
  // Coefficients of the monomials of length d, in index order (k^d entries).
  fp::Vec component(unsigned d) const;
  // Constant term 1 and no terms of degree 1..d.
  bool is_one_through(unsigned d) const;
  // Lowest positive degree with a nonzero coefficient, or deg + 1.
  unsigned valuation() const;

  TruncatedSeries operator*(const TruncatedSeries& o) const;
  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  // Inverse of a series with constant term 1, by the geometric series.
  TruncatedSeries inverse() const;
  bool operator==(const TruncatedSeries& o) const = default;

  std::size_t offset(unsigned len) const { return offsets_[len]; }
  std::size_t monomial_index(const std::vector<unsigned>& letters) const;

 private:
  unsigned k_, p_, deg_;
  std::vector<std::size_t> offsets_;  // deg + 2 entries
  std::vector<std::size_t> powers_;   // k^l
  std::vector<std::uint8_t> coeffs_;
};

struct SeriesHash {
  std::size_t operator()(const TruncatedSeries& s) const;
};

TruncatedSeries magnus_image(const FreeWord& w, unsigned k, unsigned p, unsigned deg);

struct MembershipVerdict {
  bool magnus = false;       // image is 1 through degree n
  bool matrix = false;       // trivial under every tuple into U_n(Z/p)
  bool matrix_ran = false;
  std::uint64_t tuples = 0;  // generator-image tuples evaluated
  bool member() const { return magnus; }
};

// Membership of w in S_(n+1,p) for the free group S on k letters. The matrix
// criterion conjugates the first image to a class representative. Throws
// std::logic_error when both criteria ran and disagree.
MembershipVerdict zassenhaus_membership(const FreeWord& w, unsigned k, unsigned p, unsigned n,
                                        std::uint64_t tuple_budget = std::uint64_t{1} << 26);

enum class StandinKind { Zassenhaus, LowerCentral };

// Finite quotient of the free group on k letters: S/S_(n+1,p) or S/S^(n+1,p).
// Implicit stand-ins keep the generator series and have no table.
struct Standin {
  StandinKind kind = StandinKind::Zassenhaus;
  unsigned k = 0, p = 0, n = 0;
  bool implicit = false;
  GroupPtr group;                        // null when implicit
  std::vector<Elem> generators;          // images of x_1..x_k
  std::vector<TruncatedSeries> series;   // Zassenhaus kind: 1 + X_i
  // Image of a free word: table element, or the series when implicit.
  Elem evaluate(const FreeWord& w) const;
  TruncatedSeries evaluate_series(const FreeWord& w) const;
};

// Zassenhaus kind: closure of the 1 + X_i among truncated series of degree n.
// Lower-central kind: image of S in the product of its maps to the members of
// the lower-central family of size n. `implicit` applies to the Zassenhaus kind only.
Standin free_nilpotent_standin(unsigned k, unsigned p, StandinKind kind, unsigned n,
                               std::size_t cap = kDefaultClosureCap, bool implicit = false);

// Same quotient, built as the image in a product of copies of a finite group,
// one per generator tuple whose map does not already factor through the partial image.
GroupPtr relatively_free_quotient(unsigned k, const std::vector<GroupPtr>& targets, std::size_t cap = kDefaultClosureCap,
                                  std::vector<Elem>* generators = nullptr);

using LyndonWord = std::vector<unsigned>;  // 1-based letters

bool is_lyndon(const LyndonWord& w);
// Duval's generation restricted to length n, lexicographic order.
std::vector<LyndonWord> lyndon_words(unsigned k, unsigned n);
// Filters all k^n words by the definition.
std::vector<LyndonWord> lyndon_words_brute(unsigned k, unsigned n);
// Aperiodic necklace count (1/n) sum_(d|n) mu(d) k^(n/d).
std::uint64_t lyndon_count(unsigned k, unsigned n);

// [a_1,[a_2,...[a_(n-1),a_n]...]]; throws WordTooShort for |w| < 2.
FreeWord tau(const LyndonWord& w);

struct CounterexampleReport {
  unsigned p = 2, n = 2, k = 9;
  std::size_t target_order = 0;   // |U_n(Z/p)|
  bool hypothesis_holds = false;  // k >= |U| + n - 1
  // (i)
  std::size_t independence_rows = 0, independence_cols = 0, independence_rank = 0;
  bool tau_in_filtration = false;  // every tau_ij is 1 through degree n - 1
  // (ii)
  std::size_t relator_span_rank = 0;
  bool tau_outside_span = false;
  std::size_t conjugates_checked = 0;
  bool conjugates_agree = false;
  // search over assignments
  std::uint64_t explored = 0;      // partial assignments visited
  std::uint64_t partitions = 0;    // (f(1), f(2)) pairs
  std::uint64_t trivial_subtrees = 0;  // subtrees cut because the common commutator is already 1
  std::uint64_t violations = 0;    // full assignments meeting the constraint with common commutator != 1
  std::string verdict;             // "transfer fails" or "hypothesis fails"
};

CounterexampleReport counterexample_harness(unsigned p = 2, unsigned n = 2, unsigned k = 9, std::uint64_t seed = 1);

// The order-32 stand-in Q = S/S_(3,2) on two letters with
// N = normal closure of {x_1^2 [x_1,x_2]^-1, x_2^2 [x_1,x_2]^-1}, so Q/N is quaternion.
struct FiniteCounterexample {
  GroupPtr q;
  Subgroup n;
  std::vector<Elem> generators;
};
FiniteCounterexample finite_counterexample_instance();

}  // namespace kergen
