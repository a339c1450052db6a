#include "kergen/magnus.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

#include "kergen/filtrations.hpp"
#include "kergen/unitriangular.hpp"

namespace kergen {

FreeWord inverse_word(const FreeWord& w) {
  FreeWord r(w.rbegin(), w.rend());
  for (int& l : r) l = -l;
  return r;
}

FreeWord concat(const FreeWord& a, const FreeWord& b) {
  FreeWord r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

FreeWord commutator_word(const FreeWord& a, const FreeWord& b) {
  return concat(concat(inverse_word(a), inverse_word(b)), concat(a, b));
}

FreeWord conjugate_word(const FreeWord& w, const FreeWord& g) { return concat(concat(inverse_word(g), w), g); }

FreeWord power_word(const FreeWord& w, unsigned e) {
  FreeWord r;
  for (unsigned i = 0; i < e; ++i) r = concat(r, w);
  return r;
}

FreeWord reduce_word(const FreeWord& w) {
  FreeWord r;
  for (int l : w) {
    if (!r.empty() && r.back() == -l)
      r.pop_back();
    else
      r.push_back(l);
  }
  return r;
}

std::string word_to_string(const FreeWord& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += 'x' + std::to_string(std::abs(w[i]));
    if (w[i] < 0) s += "^-1";
  }
  return s;
}

// ---------------------------------------------------------------------------

TruncatedSeries::TruncatedSeries(unsigned k, unsigned p, unsigned deg) : k_(k), p_(p), deg_(deg) {
  if (k == 0 || p < 2) throw InvalidInput("truncated series needs k >= 1 and p >= 2");
  powers_.push_back(1);
  offsets_.push_back(0);
  for (unsigned l = 0; l <= deg; ++l) {
    offsets_.push_back(offsets_.back() + powers_.back());
    powers_.push_back(powers_.back() * k);
  }
  coeffs_.assign(offsets_[deg + 1], 0);
}

TruncatedSeries TruncatedSeries::one(unsigned k, unsigned p, unsigned deg) {
  TruncatedSeries s(k, p, deg);
  s.coeffs_[0] = 1;
  return s;
}

TruncatedSeries TruncatedSeries::generator(unsigned k, unsigned p, unsigned deg, unsigned i) {
  if (i < 1 || i > k) throw InvalidInput("generator index out of range");
  TruncatedSeries s = one(k, p, deg);
  if (deg >= 1) s.coeffs_[s.offsets_[1] + i - 1] = 1;
  return s;
}

std::size_t TruncatedSeries::monomial_index(const std::vector<unsigned>& letters) const {
  if (letters.size() > deg_) throw InvalidInput("monomial longer than the truncation degree");
  std::size_t v = 0;
  for (unsigned l : letters) {
    if (l < 1 || l > k_) throw InvalidInput("monomial letter out of range");
    v = v * k_ + (l - 1);
  }
  return offsets_[letters.size()] + v;
}

unsigned TruncatedSeries::coeff(const std::vector<unsigned>& letters) const {
  return coeffs_[monomial_index(letters)];
}

void TruncatedSeries::set_coeff(const std::vector<unsigned>& letters, unsigned v) {
  coeffs_[monomial_index(letters)] = static_cast<std::uint8_t>(v % p_);
}

fp::Vec TruncatedSeries::component(unsigned d) const {
  if (d > deg_) throw InvalidInput("component degree above truncation");
  return fp::Vec(coeffs_.begin() + static_cast<std::ptrdiff_t>(offsets_[d]),
                 coeffs_.begin() + static_cast<std::ptrdiff_t>(offsets_[d + 1]));
}

bool TruncatedSeries::is_one_through(unsigned d) const {
  if (coeffs_[0] != 1) return false;
  const std::size_t end = offsets_[std::min(d, deg_) + 1];
  for (std::size_t i = 1; i < end; ++i)
    if (coeffs_[i]) return false;
  return true;
}

unsigned TruncatedSeries::valuation() const {
  for (unsigned l = 1; l <= deg_; ++l)
    for (std::size_t i = offsets_[l]; i < offsets_[l + 1]; ++i)
      if (coeffs_[i]) return l;
  return deg_ + 1;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  if (k_ != o.k_ || p_ != o.p_ || deg_ != o.deg_) throw InvalidInput("series parameters differ");
  std::vector<unsigned> acc(coeffs_.size(), 0);
  for (unsigned la = 0; la <= deg_; ++la)
    for (std::size_t va = 0; va < powers_[la]; ++va) {
      const unsigned a = coeffs_[offsets_[la] + va];
      if (!a) continue;
      for (unsigned lb = 0; la + lb <= deg_; ++lb) {
        const std::size_t base = offsets_[la + lb] + va * powers_[lb];
        const std::size_t ob = o.offsets_[lb];
        for (std::size_t vb = 0; vb < powers_[lb]; ++vb) {
          const unsigned b = o.coeffs_[ob + vb];
          if (b) acc[base + vb] += a * b;
        }
      }
    }
  TruncatedSeries r(k_, p_, deg_);
  for (std::size_t i = 0; i < acc.size(); ++i) r.coeffs_[i] = static_cast<std::uint8_t>(acc[i] % p_);
  return r;
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  TruncatedSeries r = *this;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = static_cast<std::uint8_t>((coeffs_[i] + o.coeffs_[i]) % p_);
  return r;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
  TruncatedSeries r = *this;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    r.coeffs_[i] = static_cast<std::uint8_t>((coeffs_[i] + p_ - o.coeffs_[i]) % p_);
  return r;
}

TruncatedSeries TruncatedSeries::inverse() const {
  if (coeffs_[0] != 1) throw InvalidInput("series inverse needs constant term 1");
  // (1 + a)^-1 = sum_j (-a)^j, exact below the truncation.
  TruncatedSeries neg(k_, p_, deg_);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) neg.coeffs_[i] = static_cast<std::uint8_t>((p_ - coeffs_[i]) % p_);
  TruncatedSeries term = one(k_, p_, deg_), sum = one(k_, p_, deg_);
  for (unsigned j = 1; j <= deg_; ++j) {
    term = term * neg;
    sum = sum + term;
  }
  return sum;
}

std::size_t SeriesHash::operator()(const TruncatedSeries& s) const {
  std::uint64_t h = 1469598103934665603ull;
  for (auto c : s.coeffs()) h = (h ^ c) * 1099511628211ull;
  return static_cast<std::size_t>(h);
}

TruncatedSeries magnus_image(const FreeWord& w, unsigned k, unsigned p, unsigned deg) {
  if (deg < 1) throw InvalidInput("magnus image needs deg >= 1");
  std::vector<TruncatedSeries> pos, neg;
  for (unsigned i = 1; i <= k; ++i) {
    pos.push_back(TruncatedSeries::generator(k, p, deg, i));
    neg.push_back(pos.back().inverse());
  }
  TruncatedSeries r = TruncatedSeries::one(k, p, deg);
  for (int l : w) {
    const unsigned i = static_cast<unsigned>(std::abs(l));
    if (i < 1 || i > k) throw InvalidInput("word letter out of range");
    r = r * (l > 0 ? pos[i - 1] : neg[i - 1]);
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct MatrixTarget {
  GroupPtr u;
  std::vector<Elem> reps;
};

// U_n(Z/p) with class representatives, or null when it exceeds the closure cap.
const MatrixTarget* matrix_target(unsigned n, unsigned p) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, unsigned>, std::unique_ptr<MatrixTarget>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, p);
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::unique_ptr<MatrixTarget> t;
    try {
      auto u = build_unitriangular(n, p);
      t = std::make_unique<MatrixTarget>(MatrixTarget{u, conjugacy_class_representatives(*u)});
    } catch (const ClosureCapExceeded&) {
    }
    it = cache.emplace(key, std::move(t)).first;
  }
  return it->second.get();
}

Elem evaluate_in(const FiniteGroup& u, const FreeWord& w, const std::vector<Elem>& img, const std::vector<Elem>& inv) {
  Elem x = 0;
  for (int l : w) x = u.mul(x, l > 0 ? img[l - 1] : inv[-l - 1]);
  return x;
}

}  // namespace

MembershipVerdict zassenhaus_membership(const FreeWord& w, unsigned k, unsigned p, unsigned n,
                                        std::uint64_t tuple_budget) {
  if (n < 1) throw InvalidInput("membership level must be >= 1");
  for (int l : w)
    if (l == 0 || static_cast<unsigned>(std::abs(l)) > k) throw InvalidInput("word letter out of range");
  MembershipVerdict v;
  v.magnus = magnus_image(w, k, p, n).is_one_through(n);

  const MatrixTarget* t = matrix_target(n, p);
  if (!t) return v;
  const FiniteGroup& u = *t->u;
  std::uint64_t total = t->reps.size();
  for (unsigned i = 1; i < k; ++i) {
    total *= u.order();
    if (total > tuple_budget) return v;
  }
  v.matrix_ran = true;
  v.matrix = true;
  // Simultaneous conjugation fixes the verdict, so the first image runs over class representatives.
  std::vector<Elem> img(k, 0), inv(k, 0);
  std::vector<std::size_t> digit(k, 0);
  while (true) {
    img[0] = t->reps[digit[0]];
    for (unsigned i = 1; i < k; ++i) img[i] = static_cast<Elem>(digit[i]);
    for (unsigned i = 0; i < k; ++i) inv[i] = u.inv(img[i]);
    ++v.tuples;
    if (evaluate_in(u, w, img, inv) != 0) {
      v.matrix = false;
      break;
    }
    unsigned pos = 0;
    for (; pos < k; ++pos) {
      const std::size_t radix = pos == 0 ? t->reps.size() : u.order();
      if (++digit[pos] < radix) break;
      digit[pos] = 0;
    }
    if (pos == k) break;
  }
  if (v.matrix != v.magnus)
    throw std::logic_error("membership criteria disagree for " + word_to_string(w) + " at level " +
                           std::to_string(n + 1));
  return v;
}

// ---------------------------------------------------------------------------

Elem Standin::evaluate(const FreeWord& w) const {
  if (!group) throw std::logic_error("implicit stand-in has no table");
  Elem x = 0;
  for (int l : w) {
    if (l == 0 || static_cast<unsigned>(std::abs(l)) > k) throw InvalidInput("word letter out of range");
    const Elem g = generators[static_cast<std::size_t>(std::abs(l)) - 1];
    x = group->mul(x, l > 0 ? g : group->inv(g));
  }
  return x;
}

TruncatedSeries Standin::evaluate_series(const FreeWord& w) const {
  if (kind != StandinKind::Zassenhaus) throw std::logic_error("series evaluation needs the Zassenhaus stand-in");
  return magnus_image(w, k, p, n);
}

namespace {

struct ElemVecHash {
  std::size_t operator()(const std::vector<Elem>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (Elem e : v) h = (h ^ e) * 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

GroupPtr relatively_free_quotient(unsigned k, const std::vector<GroupPtr>& targets, std::size_t cap,
                                  std::vector<Elem>* generators) {
  if (k == 0) throw InvalidInput("relatively free quotient needs k >= 1");
  std::vector<std::pair<std::size_t, std::vector<Elem>>> factors;
  auto build = [&]() {
    std::vector<std::vector<Elem>> gens(k, std::vector<Elem>(factors.size()));
    for (std::size_t f = 0; f < factors.size(); ++f)
      for (unsigned i = 0; i < k; ++i) gens[i][f] = factors[f].second[i];
    auto mul = [&](const std::vector<Elem>& a, const std::vector<Elem>& b) {
      std::vector<Elem> c(a.size());
      for (std::size_t f = 0; f < a.size(); ++f) c[f] = targets[factors[f].first]->mul(a[f], b[f]);
      return c;
    };
    return closure_group<std::vector<Elem>, ElemVecHash>(std::vector<Elem>(factors.size(), 0), gens, mul, cap, "");
  };
  GroupPtr cur = build();
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const std::size_t m = targets[t]->order();
    std::vector<Elem> tuple(k, 0);
    while (true) {
      if (!hom_from_generator_images(cur, targets[t], tuple)) {
        factors.emplace_back(t, tuple);
        cur = build();
      }
      unsigned pos = 0;
      for (; pos < k; ++pos) {
        if (++tuple[pos] < m) break;
        tuple[pos] = 0;
      }
      if (pos == k) break;
    }
  }
  if (generators) *generators = cur->generators();
  return cur;
}

Standin free_nilpotent_standin(unsigned k, unsigned p, StandinKind kind, unsigned n, std::size_t cap, bool implicit) {
  if (k == 0 || n == 0) throw InvalidInput("stand-in needs k >= 1 and n >= 1");
  if (prime_of_power(p) != p) throw InvalidInput("stand-in needs a prime p");
  Standin s;
  s.kind = kind;
  s.k = k;
  s.p = p;
  s.n = n;
  const std::string tag = std::to_string(k) + ":" + std::to_string(p) + ":" + std::to_string(n);
  if (kind == StandinKind::Zassenhaus) {
    for (unsigned i = 1; i <= k; ++i) s.series.push_back(TruncatedSeries::generator(k, p, n, i));
    if (implicit) {
      s.implicit = true;
      for (const auto& g : s.series)
        if (g.is_one_through(1) || g.valuation() != 1) throw std::logic_error("generator series degenerate");
      return s;
    }
    auto mul = [](const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; };
    s.group = closure_group<TruncatedSeries, SeriesHash>(TruncatedSeries::one(k, p, n), s.series, mul, cap,
                                                         "Free:zassenhaus:" + tag);
    s.generators = s.group->generators();
    const auto chain = zassenhaus(s.group, p, n + 1);
    if (!chain.term(n + 1).is_trivial()) throw std::logic_error("Zassenhaus stand-in has nontrivial top term");
  } else {
    if (implicit) throw InvalidInput("implicit stand-ins exist for the Zassenhaus kind only");
    const OmegaFamily fam = omega_family(FamilyKind::LowerCentral, n, p);
    std::vector<GroupPtr> targets;
    for (const auto& m : fam.members) targets.push_back(m.ext.E);
    auto q = relatively_free_quotient(k, targets, cap, &s.generators);
    auto named = std::make_shared<FiniteGroup>(*q);
    named->set_name("Free:lower-central:" + tag);
    s.group = named;
    const auto chain = lower_p_central(s.group, p, n + 1);
    if (!chain.term(n + 1).is_trivial()) throw std::logic_error("lower-central stand-in has nontrivial top term");
  }
  return s;
}

// ---------------------------------------------------------------------------

bool is_lyndon(const LyndonWord& w) {
  if (w.empty()) return false;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (!std::lexicographical_compare(w.begin(), w.end(), w.begin() + static_cast<std::ptrdiff_t>(i), w.end()))
      return false;
  return true;
}

std::vector<LyndonWord> lyndon_words(unsigned k, unsigned n) {
  std::vector<LyndonWord> out;
  if (k == 0 || n == 0) return out;
  std::vector<int> w{-1};
  while (!w.empty()) {
    ++w.back();
    if (w.size() == n) {
      LyndonWord lw;
      for (int c : w) lw.push_back(static_cast<unsigned>(c) + 1);
      out.push_back(std::move(lw));
    }
    const std::size_t m = w.size();
    while (w.size() < n) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == static_cast<int>(k) - 1) w.pop_back();
  }
  return out;
}

std::vector<LyndonWord> lyndon_words_brute(unsigned k, unsigned n) {
  std::vector<LyndonWord> out;
  if (k == 0 || n == 0) return out;
  LyndonWord w(n, 1);
  while (true) {
    if (is_lyndon(w)) out.push_back(w);
    int pos = static_cast<int>(n) - 1;
    for (; pos >= 0; --pos) {
      if (++w[pos] <= k) break;
      w[pos] = 1;
    }
    if (pos < 0) break;
  }
  return out;
}

std::uint64_t lyndon_count(unsigned k, unsigned n) {
  if (n == 0) return 0;
  auto mobius = [](unsigned d) {
    int mu = 1;
    for (unsigned q = 2; q * q <= d; ++q)
      if (d % q == 0) {
        d /= q;
        if (d % q == 0) return 0;
        mu = -mu;
      }
    if (d > 1) mu = -mu;
    return mu;
  };
  std::int64_t sum = 0;
  for (unsigned d = 1; d <= n; ++d)
    if (n % d == 0) {
      std::int64_t pw = 1;
      for (unsigned i = 0; i < n / d; ++i) pw *= k;
      sum += mobius(d) * pw;
    }
  return static_cast<std::uint64_t>(sum / n);
}

FreeWord tau(const LyndonWord& w) {
  if (w.size() < 2) throw WordTooShort("tau needs a word of length >= 2");
  FreeWord c = commutator_word({static_cast<int>(w[w.size() - 2])}, {static_cast<int>(w.back())});
  for (std::size_t t = w.size() - 2; t-- > 0;) c = commutator_word({static_cast<int>(w[t])}, c);
  return c;
}

// ---------------------------------------------------------------------------

CounterexampleReport counterexample_harness(unsigned p, unsigned n, unsigned k, std::uint64_t seed) {
  if (n < 2 || k < n) throw InvalidInput("harness needs n >= 2 and k >= n");
  CounterexampleReport rep;
  rep.p = p;
  rep.n = n;
  rep.k = k;
  auto u = build_unitriangular(n, p);
  rep.target_order = u->order();
  rep.hypothesis_holds = k >= u->order() + n - 1;

  // Pairs n-1 <= i < j <= k and the words x_1 ... x_(n-2) x_i x_j.
  std::vector<std::pair<unsigned, unsigned>> pairs;
  std::vector<FreeWord> taus;
  for (unsigned i = n - 1; i <= k; ++i)
    for (unsigned j = i + 1; j <= k; ++j) {
      LyndonWord w;
      for (unsigned t = 1; t + 2 <= n; ++t) w.push_back(t);
      w.push_back(i);
      w.push_back(j);
      pairs.emplace_back(i, j);
      taus.push_back(tau(w));
    }

  // (i)
  fp::Mat comps;
  rep.tau_in_filtration = true;
  for (const auto& t : taus) {
    auto img = magnus_image(t, k, p, n);
    if (!img.is_one_through(n - 1)) rep.tau_in_filtration = false;
    comps.push_back(img.component(n));
  }
  rep.independence_rows = comps.size();
  rep.independence_cols = comps.empty() ? 0 : comps[0].size();
  rep.independence_rank = fp::rank(comps, p);

  // (ii) relators tau_0 tau_ij^-1 with tau_0 the first pair.
  std::vector<FreeWord> relators;
  fp::Mat rel_comps;
  for (std::size_t r = 1; r < taus.size(); ++r) {
    relators.push_back(concat(taus[0], inverse_word(taus[r])));
    rel_comps.push_back(magnus_image(relators.back(), k, p, n).component(n));
  }
  const std::size_t dim = rep.independence_cols;
  rep.relator_span_rank = fp::rank(rel_comps, p);
  rep.tau_outside_span = !fp::span_contains(fp::span_basis(rel_comps, dim, p), comps[0], dim, p);

  std::mt19937_64 rng(seed);
  rep.conjugates_agree = true;
  if (!relators.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, relators.size() - 1);
    std::uniform_int_distribution<int> len(1, 6), letter(1, static_cast<int>(k)), sign(0, 1);
    for (int t = 0; t < 100; ++t) {
      const std::size_t r = pick(rng);
      FreeWord g;
      for (int l = len(rng); l > 0; --l) g.push_back(sign(rng) ? letter(rng) : -letter(rng));
      auto img = magnus_image(conjugate_word(relators[r], g), k, p, n);
      if (!img.is_one_through(n - 1) || img.component(n) != rel_comps[r]) rep.conjugates_agree = false;
      ++rep.conjugates_checked;
    }
  }

  // assignments f: letters -> U with rho(tau_ij) equal to rho(tau_0) for all pairs.
  // Pair (i, j) only involves letters <= j, so it is checked as soon as f(j) is set.
  std::vector<std::vector<std::size_t>> closing(k + 1);
  for (std::size_t r = 0; r < pairs.size(); ++r) closing[pairs[r].second].push_back(r);
  std::vector<Elem> img(k, 0), inv(k, 0);
  Elem common = 0;
  std::function<void(unsigned)> extend = [&](unsigned d) {
    // d letters assigned
    if (d == n) {
      common = evaluate_in(*u, taus[0], img, inv);
      if (common == 0) {
        ++rep.trivial_subtrees;
        return;
      }
    }
    if (d >= n) {
      for (std::size_t r : closing[d])
        if (evaluate_in(*u, taus[r], img, inv) != common) return;
      if (d == k) {
        ++rep.violations;
        return;
      }
    }
    for (Elem x = 0; x < u->order(); ++x) {
      ++rep.explored;
      img[d] = x;
      inv[d] = u->inv(x);
      extend(d + 1);
    }
  };
  for (Elem a = 0; a < u->order(); ++a)
    for (Elem b = 0; b < u->order(); ++b) {
      ++rep.partitions;
      rep.explored += 2;
      img[0] = a;
      inv[0] = u->inv(a);
      img[1] = b;
      inv[1] = u->inv(b);
      extend(2);
    }

  const bool separation = rep.independence_rank == rep.independence_rows && rep.tau_in_filtration &&
                          rep.tau_outside_span && rep.conjugates_agree && rep.violations == 0;
  if (!rep.hypothesis_holds)
    rep.verdict = "hypothesis fails";
  else if (separation)
    rep.verdict = "transfer fails";
  else
    rep.verdict = "inconclusive";
  return rep;
}

FiniteCounterexample finite_counterexample_instance() {
  auto s = free_nilpotent_standin(2, 2, StandinKind::Zassenhaus, 2);
  const FreeWord c = commutator_word({1}, {2});
  const Elem r1 = s.evaluate(concat({1, 1}, inverse_word(c)));
  const Elem r2 = s.evaluate(concat({2, 2}, inverse_word(c)));
  return FiniteCounterexample{s.group, normal_closure(s.group, {r1, r2}), s.generators};
}

}  // namespace kergen
