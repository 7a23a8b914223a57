#include "synchrolab/structure.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <unordered_set>
#include <vector>

#include "synchrolab/canonical.hpp"
#include "synchrolab/fixtures.hpp"
#include "synchrolab/search.hpp"

namespace synchrolab {

bool is_strongly_connected(const Automaton& a) {
  const int n = a.n();
  if (n == 1) return true;
  std::vector<char> fwd(n, 0), bwd(n, 0);
  std::vector<State> stack{0};
  fwd[0] = 1;
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (Letter x = 0; x < a.k(); ++x) {
      State t = a.next(q, x);
      if (!fwd[t]) {
        fwd[t] = 1;
        stack.push_back(t);
      }
    }
  }
  std::vector<std::vector<State>> pre(n);
  for (Letter x = 0; x < a.k(); ++x)
    for (State q = 0; q < n; ++q) pre[a.next(q, x)].push_back(q);
  stack.assign(1, 0);
  bwd[0] = 1;
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (State p : pre[q])
      if (!bwd[p]) {
        bwd[p] = 1;
        stack.push_back(p);
      }
  }
  for (State q = 0; q < n; ++q)
    if (!fwd[q] || !bwd[q]) return false;
  return true;
}

namespace {

// packed base-n encoding of a transformation; fits uint64 for n <= 16
uint64_t pack_map(const Transformation& t, int n) {
  uint64_t code = 0;
  for (int q = n - 1; q >= 0; --q) code = code * n + t.map[q];
  return code;
}

}  // namespace

AperiodicityScan aperiodicity_scan(const Automaton& a, size_t element_cap) {
  const int n = a.n(), k = a.k();
  AperiodicityScan scan;
  if (n == 1 || k == 0) {
    scan.aperiodic = Tri::yes;
    return scan;
  }

  std::vector<Transformation> letters;
  for (Letter x = 0; x < k; ++x) letters.push_back(a.letter_action(x));

  const bool packable = n <= 16;
  std::unordered_set<uint64_t> seen_packed;
  std::unordered_set<std::string> seen_str;
  auto insert = [&](const Transformation& t) {
    if (packable) return seen_packed.insert(pack_map(t, n)).second;
    return seen_str.insert(std::string(t.map.begin(), t.map.end())).second;
  };

  std::vector<Transformation> queue;
  for (const auto& t : letters) {
    if (t.has_nontrivial_cycle()) {
      scan.aperiodic = Tri::no;
      scan.semigroup_size = queue.size();
      return scan;
    }
    if (insert(t)) queue.push_back(t);
  }
  for (size_t head = 0; head < queue.size(); ++head) {
    Transformation cur = queue[head];
    for (const auto& g : letters) {
      Transformation u = cur.then(g);
      if (!insert(u)) continue;
      if (u.has_nontrivial_cycle()) {
        scan.aperiodic = Tri::no;
        scan.semigroup_size = queue.size();
        return scan;
      }
      if (queue.size() >= element_cap) {
        scan.aperiodic = Tri::unknown;
        scan.truncated = true;
        scan.semigroup_size = queue.size();
        return scan;
      }
      queue.push_back(std::move(u));
    }
  }
  scan.aperiodic = Tri::yes;
  scan.semigroup_size = queue.size();
  return scan;
}

bool is_irreducibly_synchronizing(const Automaton& a) {
  if (!is_synchronizing(a)) throw std::invalid_argument("automaton is not synchronizing");
  const int k = a.k();
  for (uint32_t sub = 1; sub + 1 < (uint32_t(1) << k); ++sub) {
    std::vector<Letter> letters;
    for (Letter x = 0; x < k; ++x)
      if (sub >> x & 1) letters.push_back(x);
    if (is_synchronizing(restrict_alphabet(a, letters))) return false;
  }
  return true;
}

bool is_bidirectional_path(const Automaton& a) {
  const int n = a.n();
  if (n == 1) return true;
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (Letter x = 0; x < a.k(); ++x)
    for (State q = 0; q < n; ++q)
      if (a.next(q, x) != q) adj[q][a.next(q, x)] = 1;
  int edges = 0;
  std::vector<int> deg(n, 0);
  for (State u = 0; u < n; ++u)
    for (State v = u + 1; v < n; ++v) {
      if (adj[u][v] != adj[v][u]) return false;  // every edge must be doubled
      if (adj[u][v]) {
        ++edges;
        ++deg[u];
        ++deg[v];
      }
    }
  if (edges != n - 1) return false;
  for (State q = 0; q < n; ++q)
    if (deg[q] > 2) return false;
  // connected + n-1 edges + max degree 2 => a simple path on all states
  std::vector<char> vis(n, 0);
  std::vector<State> stack{0};
  vis[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    State u = stack.back();
    stack.pop_back();
    for (State v = 0; v < n; ++v)
      if ((adj[u][v] || adj[v][u]) && !vis[v]) {
        vis[v] = 1;
        ++count;
        stack.push_back(v);
      }
  }
  return count == n;
}

bool is_permutation_automaton(const Automaton& a) {
  for (Letter x = 0; x < a.k(); ++x)
    if (!a.letter_action(x).is_permutation()) return false;
  return true;
}

namespace {

struct Components {
  std::vector<int> comp_of;
  int count = 0;
};

Components weak_components(const Automaton& a) {
  const int n = a.n();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int q) {
    while (parent[q] != q) q = parent[q] = parent[parent[q]];
    return q;
  };
  for (Letter x = 0; x < a.k(); ++x)
    for (State q = 0; q < n; ++q) {
      int ra = find(q), rb = find(a.next(q, x));
      if (ra != rb) parent[ra] = rb;
    }
  Components c;
  c.comp_of.assign(n, -1);
  for (State q = 0; q < n; ++q) {
    int r = find(q);
    if (c.comp_of[r] == -1) c.comp_of[r] = c.count++;
    c.comp_of[q] = c.comp_of[r];
  }
  return c;
}

// letter actions restricted to one component, identities dropped, duplicates
// merged; this is exactly what a trivial extension cannot change
std::vector<std::vector<uint8_t>> reduced_actions(const Automaton& a,
                                                  const std::vector<State>& states) {
  std::vector<int> local(a.n(), -1);
  for (size_t i = 0; i < states.size(); ++i) local[states[i]] = static_cast<int>(i);
  std::vector<std::vector<uint8_t>> actions;
  for (Letter x = 0; x < a.k(); ++x) {
    std::vector<uint8_t> act(states.size());
    bool ident = true;
    for (size_t i = 0; i < states.size(); ++i) {
      act[i] = static_cast<uint8_t>(local[a.next(states[i], x)]);
      ident = ident && act[i] == i;
    }
    if (ident) continue;
    if (std::find(actions.begin(), actions.end(), act) == actions.end())
      actions.push_back(std::move(act));
  }
  return actions;
}

const Automaton& kari_canonical() {
  static Automaton k = canonical_form(fixture("kari"), true);
  return k;
}

}  // namespace

bool is_kari_like(const Automaton& a) {
  Components comps = weak_components(a);
  std::vector<std::vector<State>> members(comps.count);
  for (State q = 0; q < a.n(); ++q) members[comps.comp_of[q]].push_back(q);

  int kari_components = 0;
  for (const auto& states : members) {
    // a weak component is closed under every letter
    bool permutation = true;
    std::vector<int> local(a.n(), -1);
    for (size_t i = 0; i < states.size(); ++i) local[states[i]] = static_cast<int>(i);
    for (Letter x = 0; x < a.k() && permutation; ++x) {
      uint64_t seen = 0;
      for (State q : states) {
        int t = local[a.next(q, x)];
        if (seen >> t & 1) {
          permutation = false;
          break;
        }
        seen |= uint64_t(1) << t;
      }
    }
    if (permutation) continue;

    if (states.size() != 6) return false;
    auto actions = reduced_actions(a, states);
    if (actions.size() != 2) return false;
    std::vector<uint8_t> delta;
    for (auto& act : actions) delta.insert(delta.end(), act.begin(), act.end());
    Automaton comp(6, 2, std::move(delta));
    if (canonical_form(comp, true) != kari_canonical()) return false;
    ++kari_components;
  }
  return kari_components == 1;
}

}  // namespace synchrolab
