#include "kergen/catalog.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "kergen/concrete.hpp"
#include "kergen/filtrations.hpp"
#include "kergen/magnus.hpp"
#include "kergen/unitriangular.hpp"

namespace kergen {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

unsigned to_uint(const std::string& s, const std::string& ref) {
  try {
    std::size_t used = 0;
    unsigned long v = std::stoul(s, &used);
    if (used != s.size() || v == 0 || v > 1000000) throw InvalidInput("");
    return static_cast<unsigned>(v);
  } catch (const std::exception&) {
    throw InvalidInput("malformed group reference: " + ref);
  }
}

struct PairHash {
  std::size_t operator()(const std::array<unsigned, 3>& a) const { return (a[0] * 1000003u + a[1]) * 1000003u + a[2]; }
};

// Z/m x| Z/l with the generator of Z/l acting by a -> r a; t^l = x^(shift) when twisted.
// Elements (a, e) = x^a y^e; y^l = x^shift.
GroupPtr metacyclic(unsigned m, unsigned r, unsigned l, unsigned shift, const std::string& name, std::size_t cap) {
  std::vector<unsigned> rpow(l + 1, 1);
  for (unsigned e = 1; e <= l; ++e) rpow[e] = static_cast<unsigned>(static_cast<unsigned long long>(rpow[e - 1]) * r % m);
  if (rpow[l] != 1 % m) throw InvalidInput("action does not have order dividing l in " + name);
  using T = std::array<unsigned, 3>;
  auto mul = [&](const T& a, const T& b) {
    unsigned x = static_cast<unsigned>((a[0] + static_cast<unsigned long long>(rpow[a[1]]) * b[0]) % m);
    unsigned e = a[1] + b[1];
    if (e >= l) {
      e -= l;
      x = (x + shift) % m;
    }
    return T{x, e, 0};
  };
  return closure_group<T, PairHash>(T{0, 0, 0}, {T{1 % m, 0, 0}, T{0, l > 1 ? 1u : 0u, 0}}, mul, cap, name);
}

// Triples (a, b, c) with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
GroupPtr heisenberg(unsigned p, const std::string& name, std::size_t cap) {
  using T = std::array<unsigned, 3>;
  auto mul = [p](const T& x, const T& y) { return T{(x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p}; };
  return closure_group<T, PairHash>(T{0, 0, 0}, {T{1, 0, 0}, T{0, 1, 0}}, mul, cap, name);
}

GroupPtr dihedral_perm(unsigned n, const std::string& name, std::size_t cap) {
  std::vector<int> rot(n), ref(n);
  for (unsigned i = 0; i < n; ++i) {
    rot[i] = static_cast<int>((i + 1) % n);
    ref[i] = static_cast<int>((n - i) % n);
  }
  return generate_group({ConcreteElement::permutation(rot), ConcreteElement::permutation(ref)}, cap, name);
}

GroupPtr renamed(const GroupPtr& g, const std::string& name) {
  auto c = std::make_shared<FiniteGroup>(*g);
  c->set_name(name);
  return c;
}

Standin standin_from_ref(const std::vector<std::string>& parts, const std::string& ref, std::size_t cap) {
  if (parts.size() != 5) throw InvalidInput("malformed stand-in reference: " + ref);
  StandinKind kind;
  if (parts[1] == "zassenhaus")
    kind = StandinKind::Zassenhaus;
  else if (parts[1] == "lower-central")
    kind = StandinKind::LowerCentral;
  else
    throw InvalidInput("unknown stand-in kind: " + ref);
  return free_nilpotent_standin(to_uint(parts[2], ref), to_uint(parts[3], ref), kind, to_uint(parts[4], ref), cap);
}

GroupPtr build_single(const std::string& ref, std::size_t cap) {
  auto parts = split(ref, ':');
  const std::string& head = parts.empty() ? ref : parts[0];
  if (ref == "D4") return dihedral_perm(4, "D4", cap);
  if (ref == "Q8")
    return generate_group({permutation_from_cycles("(0 1 2 3)(4 5 6 7)", 8), permutation_from_cycles("(0 4 2 6)(1 7 3 5)", 8)},
                          cap, "Q8");
  if (ref == "SD16") return metacyclic(8, 3, 2, 0, "SD16", cap);
  if (ref == "M16") return metacyclic(8, 5, 2, 0, "M16", cap);
  if (head == "Z" && parts.size() == 2) return generate_group({ConcreteElement::residue(to_uint(parts[1], ref), 1)}, cap, ref);
  if (ref.rfind("Z/", 0) == 0) return generate_group({ConcreteElement::residue(to_uint(ref.substr(2), ref), 1)}, cap, ref);
  if (head == "El" && parts.size() == 3) return renamed(elementary_abelian(to_uint(parts[1], ref), to_uint(parts[2], ref)), ref);
  if (head == "Dih" && parts.size() == 2) return dihedral_perm(to_uint(parts[1], ref), ref, cap);
  if (head == "Quat" && parts.size() == 2) {
    const unsigned n = to_uint(parts[1], ref);
    if (n < 8 || (n & (n - 1))) throw InvalidInput("Quat needs a power of two >= 8: " + ref);
    return metacyclic(n / 2, n / 2 - 1, 2, n / 4, ref, cap);
  }
  if (head == "U" && parts.size() == 3) return renamed(build_unitriangular(to_uint(parts[1], ref), to_uint(parts[2], ref), cap), ref);
  if (head == "Heis" && parts.size() == 2) return heisenberg(to_uint(parts[1], ref), ref, cap);
  if (head == "Mp3" && parts.size() == 2) return renamed(build_mp3(to_uint(parts[1], ref)).E, ref);
  if (head == "Semi" && parts.size() == 4)
    return metacyclic(to_uint(parts[1], ref), to_uint(parts[2], ref), to_uint(parts[3], ref), 0, ref, cap);
  if (head == "Ex2" && parts.size() == 2) {
    const unsigned p = to_uint(parts[1], ref);
    return metacyclic(p * p, 1 + p, p * p, 0, ref, cap);
  }
  if (head == "Free") return renamed(standin_from_ref(parts, ref, cap).group, ref);
  throw InvalidInput("unknown group reference: " + ref);
}

GroupPtr build_ref(const std::string& ref, std::size_t cap) {
  const auto x = ref.find(" x ");
  if (x != std::string::npos) {
    auto a = build_ref(ref.substr(0, x), cap);
    auto b = build_ref(ref.substr(x + 3), cap);
    if (a->order() * b->order() > cap) throw ClosureCapExceeded("direct product exceeds cap: " + ref);
    return direct_product(a, b, ref);
  }
  const auto slash = ref.rfind("Free:", 0) == 0 ? ref.find('/') : std::string::npos;
  if (slash != std::string::npos) {
    const std::string base = ref.substr(0, slash);
    const std::string tail = ref.substr(slash + 1);
    const std::size_t idx = tail == "0" ? 0 : to_uint(tail, ref);
    auto parts = split(base, ':');
    if (parts.empty() || parts[0] != "Free") throw InvalidInput("quotients are defined for stand-ins only: " + ref);
    auto s = standin_from_ref(parts, base, cap);
    const Subgroup top = s.kind == StandinKind::Zassenhaus ? zassenhaus(s.group, s.p, s.n).term(s.n)
                                                           : lower_p_central(s.group, s.p, s.n).term(s.n);
    auto ns = normal_subgroups(s.group, top);
    if (idx >= ns.size()) throw InvalidInput("quotient index out of range: " + ref);
    return renamed(quotient_group(s.group, ns[idx]).group, ref);
  }
  return build_single(ref, cap);
}

}  // namespace

GroupPtr builtin_group(const std::string& ref, std::size_t cap) {
  static std::mutex mu;
  static std::map<std::pair<std::string, std::size_t>, GroupPtr> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({ref, cap});
    if (it != cache.end()) return it->second;
  }
  auto g = build_ref(ref, cap);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::make_pair(ref, cap), g);
  return g;
}

std::vector<CatalogEntry> sweep_catalog(std::uint64_t seed) {
  const std::vector<std::pair<std::string, unsigned>> named = {
      {"Z/2", 2},      {"Z/4", 2},      {"Z/8", 2},         {"Z/16", 2},        {"El:2:2", 2},  {"El:2:3", 2},
      {"D4", 2},       {"Q8", 2},       {"U:2:2", 2},       {"U:3:2", 2},       {"Dih:8", 2},   {"Quat:16", 2},
      {"SD16", 2},     {"M16", 2},      {"Z/4 x Z/2", 2},   {"Z/4 x Z/4", 2},   {"Q8 x Z/2", 2}, {"D4 x Z/2", 2},
      {"Z/3", 3},      {"Z/9", 3},      {"Z/27", 3},        {"El:3:2", 3},      {"El:3:3", 3},  {"Mp3:3", 3},
      {"Heis:3", 3},   {"U:2:3", 3},    {"Ex2:3", 3},       {"Z/9 x Z/3", 3},   {"Z/5", 5},     {"Z/25", 5},
      {"El:5:2", 5},   {"Mp3:5", 5},    {"Heis:5", 5},
  };
  std::vector<CatalogEntry> out;
  for (const auto& [ref, p] : named) out.push_back({ref, p, builtin_group(ref)});

  // Quotients of stand-ins by seeded normal subgroups inside the top filtration term.
  struct Base {
    std::string ref;
    unsigned p;
    unsigned picks;
  };
  const std::vector<Base> bases = {
      {"Free:zassenhaus:2:2:2", 2, 2},     {"Free:zassenhaus:2:2:3", 2, 3}, {"Free:lower-central:2:2:2", 2, 2},
      {"Free:zassenhaus:3:2:2", 2, 2},     {"Free:zassenhaus:2:3:2", 3, 1}, {"Free:lower-central:2:3:2", 3, 2},
      {"Free:lower-central:2:2:3", 2, 2},
  };
  std::mt19937_64 rng(seed);
  for (const auto& b : bases) {
    auto parts = split(b.ref, ':');
    auto s = standin_from_ref(parts, b.ref, kDefaultClosureCap);
    const Subgroup top = s.kind == StandinKind::Zassenhaus ? zassenhaus(s.group, s.p, s.n).term(s.n)
                                                           : lower_p_central(s.group, s.p, s.n).term(s.n);
    auto ns = normal_subgroups(s.group, top);
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const std::size_t q = s.group->order() / ns[i].order();
      if (!ns[i].is_trivial() && q <= 128 && q >= 8) eligible.push_back(i);
    }
    std::shuffle(eligible.begin(), eligible.end(), rng);
    eligible.resize(std::min<std::size_t>(eligible.size(), b.picks));
    std::sort(eligible.begin(), eligible.end());
    for (std::size_t i : eligible) {
      const std::string ref = b.ref + "/" + std::to_string(i);
      out.push_back({ref, b.p, builtin_group(ref)});
    }
  }
  return out;
}

std::vector<std::string> sweep_families(unsigned p) {
  if (p == 2) return {"zassenhaus:2:2", "zassenhaus:3:2", "lower-central:2:2", "lower-central:3:2"};
  return {family_label(FamilyKind::Zassenhaus, 2, p), family_label(FamilyKind::LowerCentral, 2, p),
          family_label(FamilyKind::Mixed, 0, p)};
}

std::vector<Subgroup> sample_normal_subgroups(const GroupPtr& g, const Subgroup& within, std::size_t limit) {
  auto all = normal_subgroups(g, within);
  if (all.size() <= limit || limit < 2) return all;
  std::vector<Subgroup> out;
  for (std::size_t t = 0; t < limit; ++t) {
    const std::size_t i = t * (all.size() - 1) / (limit - 1);
    if (out.empty() || out.back() != all[i]) out.push_back(all[i]);
  }
  return out;
}

namespace {

std::vector<SweepRecord> sweep_pair(const CatalogEntry& e, const std::string& label, const SweepOptions& opts) {
  std::vector<SweepRecord> recs;
  PairingContext ctx(e.group, family_from_label(label), opts.pairing);
  auto ns = sample_normal_subgroups(e.group, ctx.bundle().Tbar, opts.max_instances_per_pair);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    SweepRecord r;
    r.group_ref = e.ref;
    r.family = label;
    r.order_n = ns[i].order();
    r.instance = i;
    r.report = transfer_check(ctx, ns[i]);
    if (opts.with_pairings) {
      r.pairings_perfect = true;
      r.pairing_checks = true;
      // N1 = 1 and N1 = the largest sampled normal subgroup strictly inside N.
      std::vector<Subgroup> n1s{Subgroup::trivial(e.group)};
      for (std::size_t j = i; j-- > 0;)
        if (ns[j].subset_of(ns[i]) && ns[j] != ns[i] && !ns[j].is_trivial()) {
          n1s.push_back(ns[j]);
          break;
        }
      for (const auto& n1 : n1s) {
        auto c = c_pairing(ctx, n1, ns[i]);
        r.pairings_perfect = r.pairings_perfect && c.ka.perfect && c.kb.perfect && c.kc.perfect;
        r.pairing_checks = r.pairing_checks && c.left_chain_ok && c.b_well_defined && c.c_well_defined &&
                           c.lift_route_agrees && c.spaces.chain_ok;
      }
    } else {
      r.pairings_perfect = r.pairing_checks = true;
    }
    recs.push_back(std::move(r));
  }
  return recs;
}

}  // namespace

std::vector<SweepRecord> transfer_sweep(const std::vector<CatalogEntry>& catalog, const SweepOptions& opts,
                                        const std::function<void(const SweepRecord&)>& on_record,
                                        const std::vector<std::string>& family_filter) {
  std::vector<std::pair<std::size_t, std::string>> work;
  for (std::size_t i = 0; i < catalog.size(); ++i)
    for (const auto& f : sweep_families(catalog[i].p))
      if (family_filter.empty() || std::find(family_filter.begin(), family_filter.end(), f) != family_filter.end())
        work.emplace_back(i, f);

  std::vector<std::vector<SweepRecord>> results(work.size());
  std::vector<char> done(work.size(), 0);
  std::size_t emitted = 0;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  // Records are handed to the callback in work order.
  auto flush = [&]() {
    while (emitted < work.size() && done[emitted]) {
      if (on_record)
        for (const auto& r : results[emitted]) on_record(r);
      ++emitted;
    }
  };
  auto worker = [&]() {
    while (true) {
      const std::size_t w = next++;
      if (w >= work.size()) return;
      std::vector<SweepRecord> recs;
      try {
        recs = sweep_pair(catalog[work[w].first], work[w].second, opts);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next = work.size();
        return;
      }
      std::lock_guard<std::mutex> lock(mu);
      results[w] = std::move(recs);
      done[w] = 1;
      flush();
    }
  };
  const unsigned jobs = std::max(1u, opts.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<SweepRecord> all;
  for (auto& r : results) all.insert(all.end(), r.begin(), r.end());
  return all;
}

}  // namespace kergen
