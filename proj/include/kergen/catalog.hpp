#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kergen/group.hpp"
#include "kergen/pairings.hpp"

namespace kergen {

// Builtin group references:
//   Z/n (or Z:n)  El:p:k  D4  Q8  Dih:n (order 2n)  Quat:n (order n, n = 2^k >= 8)
//   U:n:m  Heis:p  Mp3:p  Semi:m:r:l (Z/m by Z/l acting as r)  Ex2:p (= Semi:p^2:1+p:p^2)
//   SD16  M16  Free:zassenhaus:k:p:n  Free:lower-central:k:p:n
//   A x B  (direct product)   BASE/i  (quotient by the i-th normal subgroup inside the
//   top filtration term of a Free: stand-in, in normal_subgroups order)
GroupPtr builtin_group(const std::string& ref, std::size_t cap = kDefaultClosureCap);

struct CatalogEntry {
  std::string ref;
  unsigned p = 0;
  GroupPtr group;
};

// The agreement-sweep catalog: named groups of order <= 128 plus seeded
// quotients of stand-ins by normal subgroups inside their top filtration term.
std::vector<CatalogEntry> sweep_catalog(std::uint64_t seed = 7);

// Family labels applied to p-groups for prime p in the sweep.
std::vector<std::string> sweep_families(unsigned p);

struct SweepRecord {
  std::string group_ref;
  std::string family;
  std::size_t order_n = 0;
  std::size_t instance = 0;  // index of N among the sampled normal subgroups
  TransferReport report;
  bool pairings_perfect = false;  // A, B, C with N1 = 1, N2 = N
  bool pairing_checks = false;    // left chain, well-definedness, lift route
  bool ok() const { return report.agree() && report.condition_b.chain_ok && pairings_perfect && pairing_checks; }
};

struct SweepOptions {
  std::size_t max_instances_per_pair = 24;  // normal subgroups sampled per (group, family)
  bool with_pairings = true;
  unsigned jobs = 1;  // worker threads over (group, family) pairs; output order is fixed
  PairingOptions pairing;
};

// Runs transfer_check over every normal N inside Tbar(G) (sampled deterministically
// beyond the per-pair limit). The callback receives each record as it completes.
std::vector<SweepRecord> transfer_sweep(const std::vector<CatalogEntry>& catalog, const SweepOptions& opts = {},
                                        const std::function<void(const SweepRecord&)>& on_record = {},
                                        const std::vector<std::string>& family_filter = {});

// Normal subgroups of g inside `within`, thinned to at most `limit` entries
// while always keeping the smallest and the largest.
std::vector<Subgroup> sample_normal_subgroups(const GroupPtr& g, const Subgroup& within, std::size_t limit);

}  // namespace kergen
