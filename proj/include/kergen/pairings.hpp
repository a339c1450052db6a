#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kergen/cohomology.hpp"
#include "kergen/homsearch.hpp"

namespace kergen {

// Entry (i, j) is the pairing of left basis element i with right basis element j.
struct PairingMatrix {
  unsigned p = 0;
  std::vector<std::string> left_labels, right_labels;
  fp::Mat entries;
  std::size_t rows() const { return left_labels.size(); }
  std::size_t cols() const { return right_labels.size(); }
};

struct PairingKernels {
  fp::Mat left_kernel, right_kernel;
  std::size_t rank = 0;
  bool left_surjective = false, right_surjective = false, non_degenerate = false, perfect = false;
};
PairingKernels pairing_kernels(const PairingMatrix& m);

// Square A1 x B1 -> Z over A2 x B2 -> Z with alpha: A1 -> A2 (dim A2 x dim A1)
// and beta: B2 -> B1 (dim B1 x dim B2), commuting as P1 beta = alpha^T P2.
// Returns the pairing on unit-vector representatives of Coker(alpha) against a basis of Ker(beta).
PairingMatrix induced_coker_ker(const PairingMatrix& p1, const PairingMatrix& p2, const fp::Mat& alpha,
                                const fp::Mat& beta);

// Search, inflation and matrix criteria side by side for one square G -> Q -> Gbar.
struct LiftabilityReport {
  bool search_lifts = false;
  bool inflation_vanishes = false;
  bool transgression_preimage = false;
  bool psi_unique = false;
  bool psi_matches_lift = true;  // psi equals the restriction of the found lift to the kernel
  std::optional<Cochain1> psi;   // on the kernel of pi, realized as a group
  SearchStats stats;
  bool agree() const { return search_lifts == inflation_vanishes && inflation_vanishes == transgression_preimage; }
};
LiftabilityReport liftability_crosscheck(const CentralExtension& ext, const GroupHom& pi, const GroupHom& rhobar,
                                         const H2Space& h2g, const H2Space& h2q,
                                         std::uint64_t budget = kDefaultPrefixBudget);

enum class LiftMode { Search, Inflation, Both };

struct PairingOptions {
  std::uint64_t budget = kDefaultPrefixBudget;
  LiftMode lift_mode = LiftMode::Both;
  std::size_t h2_cap = kDefaultH2Cap;
};

struct PullbackRecord {
  std::size_t member = 0;
  GroupHom rhobar;  // G/N -> Ubar_omega
  fp::Vec coords;   // class of the pullback in H^2(G/N)
  bool liftable = false;
};

struct SubspaceHandle {
  std::shared_ptr<const H2Space> ambient;
  fp::Mat basis;                        // coordinate vectors, independent
  std::vector<std::size_t> provenance;  // pullback indices whose classes were taken into the basis
  std::size_t dim() const { return basis.size(); }
  bool contains(const fp::Vec& v) const;
  bool contains(const SubspaceHandle& other) const;
};

// Shared state for all pairing computations on one group and family.
class PairingContext {
 public:
  struct QuotientInfo {
    Subgroup n;
    Quotient q;
    std::shared_ptr<const H2Space> h2;
    bool pullbacks_ready = false;
    std::vector<PullbackRecord> pullbacks;
    SearchStats pullback_stats;
  };

  PairingContext(GroupPtr g, const OmegaFamily& fam, PairingOptions opts = {});

  const GroupPtr& group() const { return g_; }
  const OmegaFamily& family() const { return fam_; }
  const PairingOptions& options() const { return opts_; }
  unsigned p() const { return fam_.p; }

  const TBundle& bundle();
  const H2Space& h2_group();
  QuotientInfo& quotient(const Subgroup& n);
  // Every hom G/N -> Ubar_omega with its pullback class and its liftability to G.
  const std::vector<PullbackRecord>& pullbacks(const Subgroup& n);
  // T(G/N) computed on the quotient group.
  const TBundle& quotient_bundle(const Subgroup& n);

  // Decides whether to_gbar: G -> Ubar_omega lifts to U_omega.
  bool lifts(std::size_t member, const GroupHom& to_gbar, std::optional<GroupHom>* lift = nullptr);
  std::uint64_t liftability_checks() const { return lift_checks_; }

 private:
  GroupPtr g_;
  const OmegaFamily& fam_;
  PairingOptions opts_;
  std::optional<TBundle> bundle_;
  std::unique_ptr<H2Space> h2g_;
  std::vector<Cocycle2> alphas_;
  std::map<std::vector<Elem>, std::unique_ptr<QuotientInfo>> quotients_;
  std::map<std::vector<Elem>, std::unique_ptr<TBundle>> qbundles_;
  std::uint64_t lift_checks_ = 0;
};

// A_G(N1,N2): kernel of inflation H^2(G/N2) -> H^2(G/N1).
SubspaceHandle a_space(PairingContext& ctx, const Subgroup& n1, const Subgroup& n2);

struct APairing {
  PairingMatrix matrix;
  SubspaceHandle a;
  std::vector<Elem> left_reps;        // elements of N2 (ids of G)
  std::vector<Cochain1> psis;         // psi_j with trg(psi_j) = a_j, on pi1(N2) as a group
  InvariantH1 invariant;              // H^1(N2/N1)^(G/N1)
  Subgroup left_kernel_subgroup;      // N1 N2^p [G, N2]
  // <sigma, x> for sigma in N2 and x in A given in H^2(G/N2) coordinates.
  unsigned evaluate(Elem sigma, const fp::Vec& x) const;
  GroupHom pi1;                        // G -> G/N1
  unsigned p = 0;
};
APairing a_pairing(PairingContext& ctx, const Subgroup& n1, const Subgroup& n2);

SubspaceHandle liftable_pullback_space(PairingContext& ctx, const Subgroup& n);
SubspaceHandle b_space(PairingContext& ctx, const Subgroup& n1, const Subgroup& n2);
SubspaceHandle c_space(PairingContext& ctx, const Subgroup& n1, const Subgroup& n2);

struct KernelCondition {
  bool holds = false;
  std::size_t dim_a = 0, dim_b = 0, dim_c = 0;
  bool chain_ok = false;  // B <= C <= A
  std::optional<fp::Vec> witness;  // a class of C outside B
};
KernelCondition kernel_generating_condition(PairingContext& ctx, const Subgroup& n1, const Subgroup& n2);

struct TransferReport {
  std::size_t order_g = 0, order_n = 0, order_t = 0, order_tbar = 0;
  std::size_t order_image_t = 0, order_t_quotient = 0;
  bool condition_a = false;
  KernelCondition condition_b;
  bool agree() const { return condition_a == condition_b.holds; }
};
TransferReport transfer_check(PairingContext& ctx, const Subgroup& n);

struct CPairingResult {
  PairingMatrix a, b, c;
  PairingKernels ka, kb, kc;
  Subgroup left_b, left_c;  // N2 cap pi1^-1[T(G/N1)], N2 cap N1 T(G)
  bool left_chain_ok = false;       // N1 N2^p[G,N2] <= left_c <= left_b
  bool b_well_defined = false, c_well_defined = false;
  bool lift_route_agrees = false;   // C-pairing entries recomputed from lifts of pullbacks
  KernelCondition spaces;
};
CPairingResult c_pairing(PairingContext& ctx, const Subgroup& n1, const Subgroup& n2);

// Greedy elements of `big` (in id order) whose images form a basis of big/small.
std::vector<Elem> coset_basis(const Subgroup& big, const Subgroup& small);

}  // namespace kergen
