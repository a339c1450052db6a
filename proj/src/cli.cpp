#include "kergen/cli.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "kergen/catalog.hpp"
#include "kergen/cohomology.hpp"
#include "kergen/concrete.hpp"
#include "kergen/filtrations.hpp"
#include "kergen/magnus.hpp"
#include "kergen/pairings.hpp"
#include "kergen/unitriangular.hpp"

namespace kergen::cli {

namespace {

std::string hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

json conventions() {
  return {
      {"commutator", "[a,b] = a^-1 b^-1 a b"},
      {"conjugation", "h^g = g^-1 h g"},
      {"permutation_product", "left to right: (a*b)(i) = b(a(i))"},
      {"unitriangular_size", "U_n is (n+1) x (n+1)"},
      {"section", "corner entry reduced into [0, p^(k-1)); BFS-smallest coset representatives for quotients"},
      {"cochains", "normalized, trivial coefficients Z/p"},
      {"tau", "right-nested [a_1,[a_2,...[a_(n-1),a_n]]]"},
  };
}

json group_json(const GroupPtr& g, const std::string& ref) {
  return {{"ref", ref}, {"name", g->name()}, {"order", g->order()}, {"hash", hex(g->hash())}};
}

std::string ref_string(const json& ref) {
  if (ref.is_string()) return ref.get<std::string>();
  return ref.dump();
}

unsigned get_uint(const json& job, const char* key, std::optional<unsigned> fallback = std::nullopt) {
  if (!job.contains(key)) {
    if (fallback) return *fallback;
    throw InvalidInput(std::string("missing field: ") + key);
  }
  const auto& v = job.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw InvalidInput(std::string("field must be a nonnegative integer: ") + key);
  return v.get<unsigned>();
}

std::string get_string(const json& job, const char* key, std::optional<std::string> fallback = std::nullopt) {
  if (!job.contains(key)) {
    if (fallback) return *fallback;
    throw InvalidInput(std::string("missing field: ") + key);
  }
  if (!job.at(key).is_string()) throw InvalidInput(std::string("field must be a string: ") + key);
  return job.at(key).get<std::string>();
}

Elem eval_word(const FiniteGroup& g, const json& word) {
  if (!word.is_array()) throw InvalidInput("a word is a list of signed generator indices");
  Elem x = 0;
  for (const auto& l : word) {
    const int i = l.get<int>();
    const auto& gens = g.generators();
    if (i == 0 || static_cast<std::size_t>(std::abs(i)) > gens.size()) throw InvalidInput("word letter out of range");
    const Elem y = gens[static_cast<std::size_t>(std::abs(i)) - 1];
    x = g.mul(x, i > 0 ? y : g.inv(y));
  }
  return x;
}


// Subgroup specs: "trivial", "whole", "center", "derived", "T", "Tbar", "index:i"
// (i-th normal subgroup inside Tbar), {"filtration": kind, "p": p, "term": i},
// {"normal_closure": [words]}, {"generated": [words]}, {"elements": [ids]}.
Subgroup resolve_subgroup(const GroupPtr& g, const json& spec, PairingContext* ctx) {
  if (spec.is_string()) {
    const std::string s = spec.get<std::string>();
    if (s == "trivial") return Subgroup::trivial(g);
    if (s == "whole") return Subgroup::whole(g);
    if (s == "center") return center(g);
    if (s == "derived") return commutator_subgroup(g, Subgroup::whole(g), Subgroup::whole(g));
    if (s == "T" || s == "Tbar" || s.rfind("index:", 0) == 0) {
      if (!ctx) throw InvalidInput("subgroup spec " + s + " needs a family");
      if (s == "T") return ctx->bundle().T;
      if (s == "Tbar") return ctx->bundle().Tbar;
      const auto ns = normal_subgroups(g, ctx->bundle().Tbar);
      std::size_t i = 0;
      try {
        i = std::stoul(s.substr(6));
      } catch (const std::exception&) {
        throw InvalidInput("malformed subgroup index: " + s);
      }
      if (i >= ns.size()) throw InvalidInput("subgroup index out of range: " + s);
      return ns[i];
    }
    throw InvalidInput("unknown subgroup spec: " + s);
  }
  if (!spec.is_object()) throw InvalidInput("subgroup spec must be a string or an object");
  if (spec.contains("filtration")) {
    const std::string kind = spec.at("filtration").get<std::string>();
    const unsigned p = get_uint(spec, "p", ctx ? std::optional<unsigned>(ctx->p()) : std::nullopt);
    const unsigned term = get_uint(spec, "term");
    if (term == 0) throw InvalidInput("filtration terms start at 1");
    if (kind == "zassenhaus") return zassenhaus(g, p, term).term(term);
    if (kind == "lower-central") return lower_p_central(g, p, term).term(term);
    throw InvalidInput("unknown filtration kind: " + kind);
  }
  auto words = [&](const char* key) {
    std::vector<Elem> out;
    for (const auto& w : spec.at(key)) out.push_back(eval_word(*g, w));
    return out;
  };
  if (spec.contains("normal_closure")) return normal_closure(g, words("normal_closure"));
  if (spec.contains("generated")) return subgroup_generated(g, words("generated"));
  if (spec.contains("elements")) {
    std::vector<Elem> ids;
    for (const auto& e : spec.at("elements")) {
      const auto id = e.get<long long>();
      if (id < 0 || static_cast<std::size_t>(id) >= g->order()) throw InvalidInput("element id out of range");
      ids.push_back(static_cast<Elem>(id));
    }
    return subgroup_generated(g, ids);
  }
  throw InvalidInput("unknown subgroup spec: " + spec.dump());
}

json subgroup_json(const Subgroup& s) {
  return {{"order", s.order()}, {"generators", subgroup_generators(s)}};
}

json matrix_json(const PairingMatrix& m, const PairingKernels& k) {
  return {{"rows", m.rows()},      {"cols", m.cols()},          {"rank", k.rank},
          {"perfect", k.perfect},  {"non_degenerate", k.non_degenerate}, {"entries", m.entries},
          {"left", m.left_labels}, {"right", m.right_labels}};
}

json kernel_condition_json(const KernelCondition& kc) {
  json j = {{"holds", kc.holds}, {"dim_a", kc.dim_a}, {"dim_b", kc.dim_b}, {"dim_c", kc.dim_c}, {"chain_ok", kc.chain_ok}};
  if (kc.witness) j["witness"] = *kc.witness;
  return j;
}

json transfer_json(const TransferReport& r) {
  return {{"order_g", r.order_g},
          {"order_n", r.order_n},
          {"order_t", r.order_t},
          {"order_tbar", r.order_tbar},
          {"order_image_t", r.order_image_t},
          {"order_t_quotient", r.order_t_quotient},
          {"condition_a", r.condition_a},
          {"condition_b", kernel_condition_json(r.condition_b)},
          {"agree", r.agree()}};
}

PairingOptions pairing_options(const json& job, const GlobalOptions& opts) {
  PairingOptions po;
  po.budget = opts.budget_prefixes;
  const std::string mode = get_string(job, "lift_mode", "both");
  if (mode == "both")
    po.lift_mode = LiftMode::Both;
  else if (mode == "search")
    po.lift_mode = LiftMode::Search;
  else if (mode == "inflation")
    po.lift_mode = LiftMode::Inflation;
  else
    throw InvalidInput("lift_mode must be both, search or inflation");
  return po;
}

struct JobOutcome {
  std::string status = "OK";
  json result = json::object();
  json group;
};

JobOutcome do_group_info(const json& job, const GlobalOptions& o) {
  JobOutcome out;
  auto g = resolve_group(job.at("group"), o.cap_order);
  out.group = group_json(g, ref_string(job.at("group")));
  const auto sig = signature(g);
  out.result = {{"order", g->order()},
                {"exponent", sig.exponent},
                {"abelian", g->is_abelian()},
                {"center_order", sig.center_order},
                {"abelianization_order", sig.abelianization_order},
                {"derived_order", commutator_subgroup(g, Subgroup::whole(g), Subgroup::whole(g)).order()},
                {"order_counts", sig.order_counts},
                {"generators", g->generators()},
                {"irredundant_generators", irredundant_generators(*g)},
                {"conjugacy_classes", conjugacy_class_representatives(*g).size()},
                {"tables_verified", g->verify_tables()}};
  unsigned e = 0;
  const unsigned p = prime_of_power(static_cast<unsigned>(g->order()), &e);
  out.result["p_group_prime"] = p;
  return out;
}

JobOutcome do_filtration(const json& job, const GlobalOptions& o) {
  JobOutcome out;
  auto g = resolve_group(job.at("group"), o.cap_order);
  out.group = group_json(g, ref_string(job.at("group")));
  const unsigned p = get_uint(job, "p");
  const unsigned upto = get_uint(job, "upto", 4u);
  const std::string kind = get_string(job, "kind", "lower-central");
  FiltrationChain chain;
  if (kind == "lower-central")
    chain = lower_p_central(g, p, upto);
  else if (kind == "zassenhaus")
    chain = zassenhaus(g, p, upto);
  else
    throw InvalidInput("kind must be lower-central or zassenhaus");
  json sections = json::array();
  for (std::size_t i = 1; i < chain.terms.size(); ++i)
    sections.push_back(is_elementary_abelian_section(chain.terms[i - 1], chain.terms[i], p));
  out.result = {{"kind", kind}, {"p", p}, {"orders", chain.orders()}, {"sections_elementary_abelian", sections}};
  return out;
}

JobOutcome do_t_subgroups(const json& job, const GlobalOptions& o) {
  JobOutcome out;
  auto g = resolve_group(job.at("group"), o.cap_order);
  out.group = group_json(g, ref_string(job.at("group")));
  if (job.contains("target")) {
    auto u = resolve_group(job.at("target"), o.cap_order);
    out.result = {{"target", group_json(u, ref_string(job.at("target")))},
                  {"t", subgroup_json(t_subgroup(g, u, o.budget_prefixes))}};
    return out;
  }
  const std::string label = get_string(job, "family");
  const auto& fam = family_from_label(label);
  const auto b = t_bundle(g, fam, o.budget_prefixes);
  json members = json::array();
  for (std::size_t i = 0; i < fam.members.size(); ++i)
    members.push_back({{"label", fam.members[i].ext.label},
                       {"kernel_total_order", b.kernels_total[i].order()},
                       {"kernel_bar_order", b.kernels_bar[i].order()}});
  out.result = {{"family", label}, {"members", members}, {"T", subgroup_json(b.T)}, {"Tbar", subgroup_json(b.Tbar)}};
  return out;
}

JobOutcome do_hom_count(const json& job, const GlobalOptions& o) {
  JobOutcome out;
  auto g = resolve_group(job.at("group"), o.cap_order);
  auto u = resolve_group(job.at("target"), o.cap_order);
  out.group = group_json(g, ref_string(job.at("group")));
  json witnesses = json::array();
  const std::size_t max_w = get_uint(job, "witnesses", 0u);
  const auto gens = irredundant_generators(*g);
  auto stats = for_each_hom(
      g, u,
      [&](const std::vector<Elem>& img) {
        if (witnesses.size() < max_w) {
          json w = json::array();
          for (Elem x : gens) w.push_back(img[x]);
          witnesses.push_back(w);
        }
        return true;
      },
      o.budget_prefixes);
  out.result = {{"target", group_json(u, ref_string(job.at("target")))},
                {"count", stats.found},
                {"explored", stats.explored},
                {"generators", gens},
                {"witnesses", witnesses}};
  return out;
}

JobOutcome do_h2(const json& job, const GlobalOptions& o) {
  JobOutcome out;
  auto g = resolve_group(job.at("group"), o.cap_order);
  out.group = group_json(g, ref_string(job.at("group")));
  const unsigned p = get_uint(job, "p");
  H2Space h(g, p);
  out.result = {{"p", p},
                {"dim_h1", h1(g, p).size()},
                {"dim_h2", h.dim()},
                {"unknowns", h.unknowns()},
                {"generators", h.generators()}};
  return out;
}

JobOutcome do_massey(const json& job, const GlobalOptions& o) {
  JobOutcome out;
  auto g = resolve_group(job.at("group"), o.cap_order);
  out.group = group_json(g, ref_string(job.at("group")));
  const unsigned p = get_uint(job, "p");
  const unsigned n = get_uint(job, "n", 2u);
  H2Space h(g, p);
  const auto basis = h1(g, p);
  if (basis.empty()) throw InvalidInput("H^1 is zero; no characters to combine");
  std::vector<Cochain1> phis;
  if (job.contains("characters")) {
    for (const auto& c : job.at("characters")) {
      const auto coords = c.get<std::vector<unsigned>>();
      if (coords.size() != basis.size()) throw InvalidInput("character coordinates must match dim H^1");
      Cochain1 phi = Cochain1::zero(g, p);
      for (std::size_t i = 0; i < coords.size(); ++i) phi = phi + scale(basis[i], coords[i] % p);
      phis.push_back(phi);
    }
  } else {
    for (unsigned i = 0; i < n; ++i) phis.push_back(basis[i % basis.size()]);
  }
  const auto& fam = family_from_label(family_label(FamilyKind::Zassenhaus, static_cast<unsigned>(phis.size()), p));
  auto res = massey_pullback_set(h, phis, fam, o.budget_prefixes);
  bool has_zero = false;
  for (const auto& c : res.classes) has_zero = has_zero || fp::is_zero(c);
  out.result = {{"p", p},
                {"n", phis.size()},
                {"defining_homs", res.rhobars.size()},
                {"classes", res.classes},
                {"contains_zero", has_zero},
                {"explored", res.stats.explored}};
  if (phis.size() == 2) out.result["cup_class"] = h.coordinates(cup(phis[0], phis[1]));
  return out;
}

JobOutcome do_pairings(const json& job, const GlobalOptions& o) {
  JobOutcome out;
  auto g = resolve_group(job.at("group"), o.cap_order);
  out.group = group_json(g, ref_string(job.at("group")));
  const std::string label = get_string(job, "family");
  PairingContext ctx(g, family_from_label(label), pairing_options(job, o));
  const Subgroup n1 = resolve_subgroup(g, job.value("n1", json("trivial")), &ctx);
  const Subgroup n2 = resolve_subgroup(g, job.value("n2", json("Tbar")), &ctx);
  auto r = c_pairing(ctx, n1, n2);
  const bool ok = r.ka.perfect && r.kb.perfect && r.kc.perfect && r.left_chain_ok && r.b_well_defined &&
                  r.c_well_defined && r.lift_route_agrees && r.spaces.chain_ok;
  out.status = ok ? "PASS" : "FAIL";
  out.result = {{"family", label},
                {"n1", subgroup_json(n1)},
                {"n2", subgroup_json(n2)},
                {"a", matrix_json(r.a, r.ka)},
                {"b", matrix_json(r.b, r.kb)},
                {"c", matrix_json(r.c, r.kc)},
                {"left_b", subgroup_json(r.left_b)},
                {"left_c", subgroup_json(r.left_c)},
                {"left_chain_ok", r.left_chain_ok},
                {"b_well_defined", r.b_well_defined},
                {"c_well_defined", r.c_well_defined},
                {"lift_route_agrees", r.lift_route_agrees},
                {"spaces", kernel_condition_json(r.spaces)}};
  return out;
}

JobOutcome do_kernel_condition(const json& job, const GlobalOptions& o) {
  JobOutcome out;
  auto g = resolve_group(job.at("group"), o.cap_order);
  out.group = group_json(g, ref_string(job.at("group")));
  const std::string label = get_string(job, "family");
  PairingContext ctx(g, family_from_label(label), pairing_options(job, o));
  const Subgroup n1 = resolve_subgroup(g, job.value("n1", json("trivial")), &ctx);
  const Subgroup n2 = resolve_subgroup(g, job.value("n2", json("Tbar")), &ctx);
  auto kc = kernel_generating_condition(ctx, n1, n2);
  out.status = kc.chain_ok ? "OK" : "FAIL";
  out.result = kernel_condition_json(kc);
  out.result["family"] = label;
  out.result["n1"] = subgroup_json(n1);
  out.result["n2"] = subgroup_json(n2);
  return out;
}

JobOutcome do_transfer_check(const json& job, const GlobalOptions& o) {
  JobOutcome out;
  auto g = resolve_group(job.at("group"), o.cap_order);
  out.group = group_json(g, ref_string(job.at("group")));
  const std::string label = get_string(job, "family");
  PairingContext ctx(g, family_from_label(label), pairing_options(job, o));
  const Subgroup n = resolve_subgroup(g, job.value("n", json("Tbar")), &ctx);
  auto r = transfer_check(ctx, n);
  out.status = r.agree() && r.condition_b.chain_ok ? "PASS" : "FAIL";
  out.result = transfer_json(r);
  out.result["family"] = label;
  return out;
}

JobOutcome do_transfer_sweep(const json& job, const GlobalOptions& o) {
  JobOutcome out;
  const std::string catalog = get_string(job, "catalog", "builtin");
  if (catalog != "builtin") throw InvalidInput("only the builtin catalog is available");
  std::vector<std::string> families;
  if (job.contains("family")) {
    if (job.at("family").is_array())
      families = job.at("family").get<std::vector<std::string>>();
    else
      families.push_back(job.at("family").get<std::string>());
  }
  for (const auto& f : families) family_from_label(f);
  SweepOptions so;
  so.pairing = pairing_options(job, o);
  if (!job.contains("lift_mode")) so.pairing.lift_mode = LiftMode::Inflation;
  so.max_instances_per_pair = get_uint(job, "max_instances", static_cast<unsigned>(so.max_instances_per_pair));
  so.with_pairings = job.value("pairings", true);
  so.jobs = o.jobs;
  const auto cat = sweep_catalog(get_uint(job, "seed", 7u));
  auto recs = transfer_sweep(cat, so, {}, families);
  json inst = json::array();
  std::size_t pass = 0, cond_a_false = 0;
  for (const auto& r : recs) {
    pass += r.ok();
    cond_a_false += !r.report.condition_a;
    inst.push_back({{"group", r.group_ref},
                    {"family", r.family},
                    {"order_n", r.order_n},
                    {"status", r.ok() ? "PASS" : "FAIL"},
                    {"condition_a", r.report.condition_a},
                    {"condition_b", r.report.condition_b.holds},
                    {"dims", {r.report.condition_b.dim_a, r.report.condition_b.dim_b, r.report.condition_b.dim_c}},
                    {"pairings_perfect", r.pairings_perfect}});
  }
  out.status = pass == recs.size() ? "PASS" : "FAIL";
  out.group = {{"ref", "catalog:" + catalog}, {"order", nullptr}, {"hash", nullptr}};
  out.result = {{"catalog_size", cat.size()},
                {"instances", recs.size()},
                {"passed", pass},
                {"condition_a_false", cond_a_false},
                {"families", families},
                {"records", inst}};
  return out;
}

JobOutcome do_counterexample(const json& job, const GlobalOptions& o) {
  JobOutcome out;
  const unsigned p = get_uint(job, "p", 2u), n = get_uint(job, "n", 2u), k = get_uint(job, "k", 9u);
  auto r = counterexample_harness(p, n, k, get_uint(job, "seed", 1u));
  out.group = {{"ref", "Free:zassenhaus:" + std::to_string(k) + ":" + std::to_string(p) + ":" + std::to_string(n)},
               {"order", nullptr},
               {"hash", nullptr},
               {"implicit", true}};
  out.result = {{"hypothesis_holds", r.hypothesis_holds},
                {"target_order", r.target_order},
                {"independence", {{"rows", r.independence_rows}, {"cols", r.independence_cols}, {"rank", r.independence_rank},
                                  {"tau_in_filtration", r.tau_in_filtration}}},
                {"non_membership", {{"relator_span_rank", r.relator_span_rank}, {"tau_outside_span", r.tau_outside_span},
                                    {"conjugates_checked", r.conjugates_checked}, {"conjugates_agree", r.conjugates_agree},
                                    {"reduction", "conjugation changes Magnus images only in degree > n"}}},
                {"search", {{"explored", r.explored}, {"partitions", r.partitions}, {"trivial_subtrees", r.trivial_subtrees},
                            {"violations", r.violations}}},
                {"verdict", r.verdict}};
  bool ok = r.verdict == "transfer fails";
  if (r.hypothesis_holds && p == 2 && n == 2) {
    auto fi = finite_counterexample_instance();
    PairingContext ctx(fi.q, family_from_label("zassenhaus:2:2"), pairing_options(job, o));
    auto tr = transfer_check(ctx, fi.n);
    out.result["finite_instance"] = transfer_json(tr);
    out.result["finite_instance"]["group"] = group_json(fi.q, "Free:zassenhaus:2:2:2");
    out.result["finite_instance"]["quotient_order"] = fi.q->order() / fi.n.order();
    ok = ok && !tr.condition_a && !tr.condition_b.holds && tr.agree();
  } else if (!r.hypothesis_holds) {
    ok = r.verdict == "hypothesis fails";
  }
  out.status = ok ? "PASS" : "FAIL";
  return out;
}

JobOutcome do_lyndon(const json& job, const GlobalOptions&) {
  JobOutcome out;
  const unsigned k = get_uint(job, "k", 2u), n = get_uint(job, "n");
  const auto duval = lyndon_words(k, n);
  const auto brute = lyndon_words_brute(k, n);
  const auto count = lyndon_count(k, n);
  out.status = duval == brute && duval.size() == count ? "PASS" : "FAIL";
  out.group = nullptr;
  out.result = {{"k", k}, {"n", n}, {"words", duval}, {"count_duval", duval.size()}, {"count_brute", brute.size()},
                {"count_necklace", count}};
  return out;
}

using Handler = JobOutcome (*)(const json&, const GlobalOptions&);

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h = {
      {"group-info", do_group_info},       {"filtration", do_filtration},
      {"t-subgroups", do_t_subgroups},     {"hom-count", do_hom_count},
      {"h2", do_h2},                       {"massey", do_massey},
      {"pairings", do_pairings},           {"kernel-condition", do_kernel_condition},
      {"transfer-check", do_transfer_check}, {"transfer-sweep", do_transfer_sweep},
      {"counterexample", do_counterexample}, {"lyndon", do_lyndon},
  };
  return h;
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, _] : handlers()) v.push_back(n);
    return v;
  }();
  return names;
}

GroupPtr group_from_document(const json& doc, std::size_t cap) {
  if (!doc.is_object()) throw InvalidInput("group document must be an object");
  const std::string kind = get_string(doc, "kind");
  const std::string name = doc.value("name", std::string("custom"));
  if (!doc.contains("generators") || !doc.at("generators").is_array()) throw InvalidInput("group document needs generators");
  std::vector<ConcreteElement> gens;
  for (const auto& gen : doc.at("generators")) {
    if (kind == "permutation") {
      const unsigned degree = get_uint(doc, "degree");
      if (gen.is_string()) {
        gens.push_back(permutation_from_cycles(gen.get<std::string>(), degree));
      } else {
        auto images = gen.get<std::vector<int>>();
        if (images.size() != degree) throw InvalidInput("permutation length differs from degree");
        gens.push_back(ConcreteElement::permutation(images));
      }
    } else if (kind == "matrix") {
      const unsigned m = get_uint(doc, "modulus"), d = get_uint(doc, "degree");
      std::vector<int> entries;
      for (const auto& e : gen) {
        if (e.is_array())
          for (const auto& x : e) entries.push_back(x.get<int>());
        else
          entries.push_back(e.get<int>());
      }
      if (entries.size() != static_cast<std::size_t>(d) * d) throw InvalidInput("matrix entry count differs from degree^2");
      gens.push_back(ConcreteElement::matrix(m, d, entries));
    } else if (kind == "residue") {
      gens.push_back(ConcreteElement::residue(get_uint(doc, "modulus"), gen.get<int>()));
    } else {
      throw InvalidInput("unknown element kind: " + kind);
    }
  }
  return generate_group(gens, cap, name);
}

GroupPtr resolve_group(const json& ref, std::size_t cap) {
  if (ref.is_object()) return group_from_document(ref, cap);
  if (!ref.is_string()) throw InvalidInput("group reference must be a string or a document");
  const std::string s = ref.get<std::string>();
  if (!s.empty() && s[0] == '@') {
    std::ifstream in(s.substr(1));
    if (!in) throw InvalidInput("cannot open group document " + s.substr(1));
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw InvalidInput(std::string("malformed group document: ") + e.what());
    }
    return group_from_document(doc, cap);
  }
  return builtin_group(s, cap);
}

json run_job(const json& job, const GlobalOptions& opts, std::size_t index) {
  json rep = {{"schema_version", kSchemaVersion},
              {"job_index", index},
              {"command", job.value("command", std::string())},
              {"conventions", conventions()}};
  GlobalOptions o = opts;
  if (job.contains("budget_prefixes")) o.budget_prefixes = job.at("budget_prefixes").get<std::uint64_t>();
  if (job.contains("cap_order")) o.cap_order = job.at("cap_order").get<std::size_t>();
  rep["budgets"] = {{"prefixes", o.budget_prefixes}, {"cap_order", o.cap_order}, {"h2_cap", kDefaultH2Cap}};
  rep["group"] = nullptr;
  if (job.contains("group")) rep["group"] = {{"ref", ref_string(job.at("group"))}};
  try {
    const std::string cmd = get_string(job, "command");
    Handler h = nullptr;
    for (const auto& [name, fn] : handlers())
      if (name == cmd) h = fn;
    if (!h) throw InvalidInput("unknown command: " + cmd);
    JobOutcome out = h(job, o);
    rep["status"] = out.status;
    rep["result"] = out.result;
    if (!out.group.is_null()) rep["group"] = out.group;
  } catch (const BudgetExceeded& e) {
    rep["status"] = "BUDGET";
    rep["error"] = {{"code", e.code()}, {"message", e.what()}, {"explored", e.explored()}};
  } catch (const Error& e) {
    rep["status"] = "ERROR";
    rep["error"] = {{"code", e.code()}, {"message", e.what()}};
  } catch (const json::exception& e) {
    rep["status"] = "ERROR";
    rep["error"] = {{"code", "InvalidInput"}, {"message", e.what()}};
  } catch (const std::logic_error& e) {
    // criteria disagreeing is a FAIL, not an input error
    rep["status"] = "FAIL";
    rep["error"] = {{"code", "CrossCheckFailed"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    rep["status"] = "ERROR";
    rep["error"] = {{"code", "Internal"}, {"message", e.what()}};
  }
  return rep;
}

std::vector<json> parse_manifest(const json& manifest) {
  const json* jobs = nullptr;
  if (manifest.is_array())
    jobs = &manifest;
  else if (manifest.is_object() && manifest.contains("jobs") && manifest.at("jobs").is_array())
    jobs = &manifest.at("jobs");
  else
    throw InvalidInput("manifest must be an array of jobs or an object with a jobs array");
  std::vector<json> out;
  for (const auto& j : *jobs) {
    if (!j.is_object() || !j.contains("command") || !j.at("command").is_string())
      throw InvalidInput("every job needs a command string");
    const auto cmd = j.at("command").get<std::string>();
    const auto& names = known_commands();
    if (std::find(names.begin(), names.end(), cmd) == names.end()) throw InvalidInput("unknown command: " + cmd);
    for (const char* key : {"budget_prefixes", "cap_order"})
      if (j.contains(key) && (!j.at(key).is_number_integer() || j.at(key).get<long long>() <= 0))
        throw InvalidInput(std::string("budgets must be positive: ") + key);
    out.push_back(j);
  }
  return out;
}

std::vector<json> run_jobs(const std::vector<json>& jobs, const GlobalOptions& opts) {
  std::vector<json> reports(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < jobs.size(); i = next++) reports[i] = run_job(jobs[i], opts, i);
  };
  const unsigned width = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(jobs.size())));
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < width; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return reports;
}

int exit_code(const std::vector<json>& reports) {
  bool fail = false, budget = false, error = false;
  for (const auto& r : reports) {
    const auto s = r.value("status", std::string("ERROR"));
    fail = fail || s == "FAIL";
    budget = budget || s == "BUDGET";
    error = error || s == "ERROR";
  }
  if (fail) return kExitFail;
  if (budget) return kExitBudget;
  if (error) return kExitError;
  return kExitOk;
}

namespace {

json parse_value(const std::string& s) {
  if (!s.empty() && (s[0] == '{' || s[0] == '[')) return json::parse(s);
  return json(s);
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"Finite-scale engine for kernel-intersection subgroups, filtrations and H^2 pairings"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  GlobalOptions g;
  std::string manifest_path, out_path;
  app.add_option("--manifest", manifest_path, "JSON manifest of jobs");
  app.add_option("--jobs", g.jobs, "concurrent jobs")->check(CLI::PositiveNumber);
  app.add_option("--budget-prefixes", g.budget_prefixes, "hom-search prefix budget")->check(CLI::PositiveNumber);
  app.add_option("--cap-order", g.cap_order, "closure cap on group orders")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "write JSON lines here instead of stdout");

  json job = json::object();
  auto str = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help, bool req = false) {
    auto* opt = sub->add_option_function<std::string>(flag, [&job, key](const std::string& v) { job[key] = parse_value(v); }, help);
    if (req) opt->required();
  };
  auto num = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help, bool req = false) {
    auto* opt = sub->add_option_function<unsigned>(flag, [&job, key](unsigned v) { job[key] = v; }, help);
    if (req) opt->required();
  };

  std::vector<CLI::App*> subs;
  auto add = [&](const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    subs.push_back(s);
    return s;
  };
  auto* s = add("group-info", "order, exponent, signature and generators");
  str(s, "--group", "group", "group reference", true);
  s = add("filtration", "lower p-central or Zassenhaus term orders");
  str(s, "--group", "group", "group reference", true);
  num(s, "--p", "p", "prime", true);
  str(s, "--kind", "kind", "lower-central | zassenhaus");
  num(s, "--upto", "upto", "number of terms");
  s = add("t-subgroups", "T and Tbar for a family, or T^U for a target group");
  str(s, "--group", "group", "group reference", true);
  str(s, "--family", "family", "family label");
  str(s, "--target", "target", "target group reference");
  s = add("hom-count", "number of homomorphisms into a target");
  str(s, "--group", "group", "group reference", true);
  str(s, "--target", "target", "target group reference", true);
  num(s, "--witnesses", "witnesses", "how many homs to print");
  s = add("h2", "dimensions of H^1 and H^2 with Z/p coefficients");
  str(s, "--group", "group", "group reference", true);
  num(s, "--p", "p", "prime", true);
  s = add("massey", "pullback set of the Ubar_n class along homs with given characters");
  str(s, "--group", "group", "group reference", true);
  num(s, "--p", "p", "prime", true);
  num(s, "--n", "n", "number of characters");
  str(s, "--characters", "characters", "JSON list of H^1 coordinate vectors");
  for (const char* name : {"pairings", "kernel-condition"}) {
    s = add(name, std::string(name) == "pairings" ? "A, B and C pairings with perfectness" : "compare B and C inside A");
    str(s, "--group", "group", "group reference", true);
    str(s, "--family", "family", "family label", true);
    str(s, "--n1", "n1", "subgroup spec for N1");
    str(s, "--n2", "n2", "subgroup spec for N2");
    str(s, "--lift-mode", "lift_mode", "both | search | inflation");
  }
  s = add("transfer-check", "both conditions of the transfer criterion for N <= Tbar(G)");
  str(s, "--group", "group", "group reference", true);
  str(s, "--family", "family", "family label", true);
  str(s, "--n", "n", "subgroup spec");
  str(s, "--lift-mode", "lift_mode", "both | search | inflation");
  s = add("transfer-sweep", "agreement sweep over the builtin catalog");
  str(s, "--catalog", "catalog", "builtin");
  str(s, "--family", "family", "restrict to one family label");
  num(s, "--max-instances", "max_instances", "normal subgroups per (group, family)");
  num(s, "--seed", "seed", "seed for the catalog quotients");
  s = add("counterexample", "linear-independence and pigeonhole harness");
  num(s, "--p", "p", "prime");
  num(s, "--n", "n", "commutator length");
  num(s, "--k", "k", "number of free generators");
  num(s, "--seed", "seed", "seed for the conjugate check");
  s = add("lyndon", "Lyndon words with two enumerations and the necklace count");
  num(s, "--k", "k", "alphabet size");
  num(s, "--n", "n", "word length", true);
  auto* run = app.add_subcommand("run", "run a manifest");
  run->add_option("--manifest", manifest_path, "JSON manifest of jobs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "malformed JSON argument: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<json> jobs;
  try {
    bool picked = false;
    for (auto* sub : subs)
      if (sub->parsed()) {
        job["command"] = sub->get_name();
        jobs.push_back(job);
        picked = true;
      }
    if (!picked) {
      if (manifest_path.empty()) {
        std::cerr << app.help();
        return kExitUsage;
      }
      std::ifstream in(manifest_path);
      if (!in) throw InvalidInput("cannot open manifest " + manifest_path);
      json m;
      try {
        in >> m;
      } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed manifest: ") + e.what());
      }
      jobs = parse_manifest(m);
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  auto reports = run_jobs(jobs, g);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "cannot write " << out_path << "\n";
      return kExitUsage;
    }
    os = &file;
  }
  for (const auto& r : reports) *os << r.dump() << "\n";
  return exit_code(reports);
}

}  // namespace kergen::cli
