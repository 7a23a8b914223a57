#include "synchrolab/genx.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "synchrolab/bounds.hpp"
#include "synchrolab/canonical.hpp"
#include "synchrolab/search.hpp"
#include "synchrolab/structure.hpp"

namespace synchrolab {

namespace {

std::string ahu_encode(const Transformation& t, const std::vector<std::vector<State>>& children,
                       State v) {
  std::vector<std::string> subs;
  for (State c : children[v]) subs.push_back(ahu_encode(t, children, c));
  std::sort(subs.begin(), subs.end());
  std::string s = "(";
  for (auto& x : subs) s += x;
  s += ")";
  return s;
}

}  // namespace

std::string functional_graph_key(const Transformation& t) {
  const int n = t.size();
  StateSet cyc = t.cyclic_states();
  std::vector<std::vector<State>> children(n);
  for (State q = 0; q < n; ++q)
    if (!cyc.contains(q)) children[t(q)].push_back(q);

  std::vector<std::string> comps;
  uint64_t left = cyc.bits;
  while (left) {
    State q = std::countr_zero(left);
    std::vector<std::string> ring;
    State p = q;
    do {
      left &= ~(uint64_t(1) << p);
      ring.push_back(ahu_encode(t, children, p));
      p = t(p);
    } while (p != q);
    // lexicographically minimal rotation; conjugation preserves orientation
    std::string best;
    for (size_t r = 0; r < ring.size(); ++r) {
      std::string cand;
      for (size_t i = 0; i < ring.size(); ++i) cand += ring[(r + i) % ring.size()] + "|";
      if (best.empty() || cand < best) best = cand;
    }
    comps.push_back(best);
  }
  std::sort(comps.begin(), comps.end());
  std::string key;
  for (auto& c : comps) key += "[" + c + "]";
  return key;
}

std::vector<Automaton> enumerate_unary(int n) {
  if (n < 1) throw std::invalid_argument("state count must be >= 1");
  std::vector<Automaton> out;
  std::unordered_set<std::string> seen;
  std::vector<uint8_t> map(n, 0);

  // The class minimum always sends state 0 to 0 or 1 (relabel a fixed point
  // to 0, or a cycle edge to 0 -> 1), so other first digits can be skipped.
  const int first_cap = n == 1 ? 0 : 1;
  for (int first = 0; first <= first_cap; ++first) {
    std::fill(map.begin(), map.end(), 0);
    map[0] = static_cast<uint8_t>(first);
    for (;;) {
      Transformation t(map);
      if (seen.insert(functional_graph_key(t)).second) out.emplace_back(n, 1, map);
      // odometer over positions 1..n-1
      int pos = n - 1;
      while (pos >= 1 && map[pos] == n - 1) map[pos--] = 0;
      if (pos < 1) break;
      ++map[pos];
    }
    if (n == 1) break;
  }
  return out;
}

std::string canonical_key(const Automaton& a, bool permute_letters) {
  Automaton canon = canonical_form(a, permute_letters);
  return std::string(canon.table().begin(), canon.table().end());
}

void extend_one_letter(const Automaton& a, const std::function<bool(const Automaton&)>& prune,
                       bool dedupe_letters, const std::function<void(const Automaton&)>& emit) {
  const int n = a.n();
  // non-identity automorphisms with their inverses, for orbit-minimum checks
  std::vector<std::pair<std::vector<State>, std::vector<State>>> auts;
  for (const auto& sigma : automorphisms(a)) {
    bool ident = true;
    for (State q = 0; q < n; ++q) ident = ident && sigma[q] == q;
    if (ident) continue;
    std::vector<State> iv(n);
    for (State q = 0; q < n; ++q) iv[sigma[q]] = q;
    auts.emplace_back(sigma, std::move(iv));
  }

  std::unordered_set<std::string> seen;
  std::vector<uint8_t> map(n, 0);
  std::vector<uint8_t> conj(n);
  for (;;) {
    // keep only the lexicographic minimum of the Aut(a)-orbit
    bool minimal = true;
    for (const auto& [sigma, iv] : auts) {
      for (State q = 0; q < n; ++q) conj[q] = static_cast<uint8_t>(sigma[map[iv[q]]]);
      if (std::lexicographical_compare(conj.begin(), conj.end(), map.begin(), map.end())) {
        minimal = false;
        break;
      }
    }
    if (minimal) {
      Automaton b = a.extended(Transformation(map));
      bool fresh = true;
      if (dedupe_letters) fresh = seen.insert(canonical_key(b, true)).second;
      if (fresh && (!prune || !prune(b))) emit(b);
    }
    int pos = n - 1;
    while (pos >= 0 && map[pos] == n - 1) map[pos--] = 0;
    if (pos < 0) break;
    ++map[pos];
  }
}

long long extension_reset_ubound(const Automaton& a, long long franklpin_budget) {
  const int n = a.n();
  long long best = kNoUpperBound;
  PairSet p = compressible_pairs(a);
  if (p.count > 0 && n >= 2) {
    long long sum = 0;
    for (int m = 2; m <= n; ++m) {
      auto fp = max_franklpin(p, n, m, franklpin_budget);
      sum += theorem1_bound(n, m, static_cast<long long>(fp.sequence.size()), p.height);
    }
    best = std::min(best, sum);
  }
  for (Letter x = 0; x < a.k(); ++x) {
    auto occ = one_cluster_data(a, x);
    if (occ && occ->m >= 2)
      best = std::min(best, theorem2_bound(n, 1, occ->level, occ->m, dstar_table(occ->m)));
  }
  return best;
}

bool ClassFilters::pass(const Automaton& a) const {
  if (strongly_connected && !is_strongly_connected(a)) return false;
  if (irreducible && !(is_synchronizing(a) && is_irreducibly_synchronizing(a))) return false;
  return true;
}

std::vector<Automaton> plan_parents(const GenerationPlan& plan) {
  if (plan.k < 1) throw std::invalid_argument("target alphabet size must be >= 1");
  std::vector<Automaton> parents = enumerate_unary(plan.n);
  for (int stage = 2; stage < plan.k; ++stage) {
    std::vector<Automaton> next;
    std::unordered_set<std::string> seen;
    for (const Automaton& parent : parents) {
      if (plan.prune_threshold > 0 &&
          extension_reset_ubound(parent) < plan.prune_threshold)
        continue;
      extend_one_letter(parent, nullptr, false, [&](const Automaton& b) {
        if (seen.insert(canonical_key(b, plan.dedupe_letters)).second) next.push_back(b);
      });
    }
    parents = std::move(next);
  }
  return parents;
}

std::vector<GenCandidate> expand_final(const GenerationPlan& plan,
                                       const std::vector<Automaton>& parents, size_t begin,
                                       size_t end) {
  std::vector<GenCandidate> out;
  for (size_t i = begin; i < end && i < parents.size(); ++i) {
    const Automaton& parent = parents[i];
    if (plan.k == 1) {
      if (plan.filters.pass(parent))
        out.push_back({parent, canonical_key(parent, plan.dedupe_letters)});
      continue;
    }
    if (plan.prune_threshold > 0 && extension_reset_ubound(parent) < plan.prune_threshold)
      continue;
    extend_one_letter(parent, nullptr, false, [&](const Automaton& b) {
      if (plan.filters.pass(b)) out.push_back({b, canonical_key(b, plan.dedupe_letters)});
    });
  }
  return out;
}

void run_plan(const GenerationPlan& plan, const std::function<void(const Automaton&)>& emit) {
  std::vector<Automaton> parents = plan_parents(plan);
  std::unordered_set<std::string> seen;
  for (size_t i = 0; i < parents.size(); ++i) {
    auto cands = expand_final(plan, parents, i, i + 1);
    for (auto& c : cands)
      if (seen.insert(std::move(c.canonical_key)).second) emit(c.automaton);
  }
}

}  // namespace synchrolab
