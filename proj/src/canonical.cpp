#include "synchrolab/canonical.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace synchrolab {

Automaton relabel(const Automaton& a, const std::vector<State>& sigma) {
  const int n = a.n(), k = a.k();
  if (static_cast<int>(sigma.size()) != n) throw std::invalid_argument("permutation size mismatch");
  std::vector<uint8_t> d(size_t(n) * size_t(k));
  for (Letter x = 0; x < k; ++x)
    for (State q = 0; q < n; ++q)
      d[size_t(x) * n + sigma[q]] = static_cast<uint8_t>(sigma[a.next(q, x)]);
  return Automaton(n, k, std::move(d));
}

namespace {

// Exact lexicographic minimum over all state permutations for one fixed
// letter order. Candidates are compared entry by entry against the best
// table so far, abandoning a permutation at the first larger entry.
void min_over_states(const std::vector<uint8_t>& delta, int n, int k,
                     const std::vector<int>& letter_order, std::vector<uint8_t>& best,
                     bool& have_best) {
  std::vector<int> sigma(n);  // sigma[old] = new label
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<int> inv(n);
  std::vector<uint8_t> cand(size_t(n) * k);
  do {
    for (int q = 0; q < n; ++q) inv[sigma[q]] = q;
    bool smaller = false, abandoned = false;
    size_t idx = 0;
    for (int xi = 0; xi < k && !abandoned; ++xi) {
      const uint8_t* row = delta.data() + size_t(letter_order[xi]) * n;
      for (int q = 0; q < n; ++q, ++idx) {
        uint8_t v = static_cast<uint8_t>(sigma[row[inv[q]]]);
        if (have_best && !smaller) {
          if (v > best[idx]) {
            abandoned = true;
            break;
          }
          if (v < best[idx]) smaller = true;
        }
        cand[idx] = v;
      }
    }
    if (!abandoned && (!have_best || smaller)) {
      best = cand;
      have_best = true;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
}

Automaton canonical_bruteforce(const Automaton& a, bool permute_letters) {
  const int n = a.n(), k = a.k();
  std::vector<uint8_t> best;
  bool have_best = false;
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  if (permute_letters && k > 1) {
    do {
      min_over_states(a.table(), n, k, order, best, have_best);
    } while (std::next_permutation(order.begin(), order.end()));
  } else {
    min_over_states(a.table(), n, k, order, best, have_best);
  }
  return Automaton(n, k, std::move(best));
}

// ---- partition refinement path (n > 8) ----

struct Refiner {
  const Automaton& a;
  int n, k;
  long long leaves = 0;
  static constexpr long long kLeafCap = 500000;
  std::vector<uint8_t> best;
  bool have_best = false;
  bool permute_letters;

  explicit Refiner(const Automaton& au, bool pl)
      : a(au), n(au.n()), k(au.k()), permute_letters(pl) {}

  using Partition = std::vector<std::vector<State>>;  // ordered cells

  // Splits cells by out/in signatures until stable. Sub-cells are ordered by
  // signature so the resulting cell order depends only on the structure.
  void refine(Partition& cells) const {
    bool changed = true;
    std::vector<int> cell_of(n);
    while (changed) {
      changed = false;
      for (size_t c = 0; c < cells.size(); ++c)
        for (State q : cells[c]) cell_of[q] = static_cast<int>(c);
      Partition next;
      for (auto& cell : cells) {
        size_t before = next.size();
        if (cell.size() == 1) {
          next.push_back(cell);
          continue;
        }
        // signature: image cells per letter, then in-degree from each cell per letter
        std::vector<std::pair<std::vector<int>, State>> sig;
        sig.reserve(cell.size());
        for (State q : cell) {
          std::vector<int> s;
          s.reserve(size_t(k) * (1 + cells.size()));
          for (Letter x = 0; x < k; ++x) s.push_back(cell_of[a.next(q, x)]);
          for (size_t c = 0; c < cells.size(); ++c)
            for (Letter x = 0; x < k; ++x) {
              int cnt = 0;
              for (State p : cells[c])
                if (a.next(p, x) == q) ++cnt;
              s.push_back(cnt);
            }
          sig.emplace_back(std::move(s), q);
        }
        std::stable_sort(sig.begin(), sig.end(),
                         [](const auto& l, const auto& r) { return l.first < r.first; });
        std::vector<State> cur{sig[0].second};
        for (size_t i = 1; i < sig.size(); ++i) {
          if (sig[i].first != sig[i - 1].first) {
            next.push_back(cur);
            cur.clear();
          }
          cur.push_back(sig[i].second);
        }
        next.push_back(cur);
        if (next.size() - before > 1) changed = true;
      }
      cells = std::move(next);
    }
  }

  void leaf(const Partition& cells) {
    if (++leaves > kLeafCap)
      throw std::runtime_error("canonical_form: refinement branch limit exceeded");
    std::vector<int> sigma(n);
    int label = 0;
    for (auto& cell : cells) sigma[cell[0]] = label++;
    std::vector<uint8_t> cand(size_t(n) * k);
    std::vector<std::vector<uint8_t>> relab(k, std::vector<uint8_t>(n));
    for (Letter x = 0; x < k; ++x)
      for (State q = 0; q < n; ++q) relab[x][sigma[q]] = static_cast<uint8_t>(sigma[a.next(q, x)]);
    if (permute_letters) std::sort(relab.begin(), relab.end());
    for (Letter x = 0; x < k; ++x)
      std::copy(relab[x].begin(), relab[x].end(), cand.begin() + size_t(x) * n);
    if (!have_best || cand < best) {
      best = std::move(cand);
      have_best = true;
    }
  }

  void descend(Partition cells) {
    refine(cells);
    size_t target = cells.size();
    for (size_t c = 0; c < cells.size(); ++c)
      if (cells[c].size() > 1) {
        target = c;
        break;
      }
    if (target == cells.size()) {
      leaf(cells);
      return;
    }
    for (State q : cells[target]) {
      Partition child;
      child.reserve(cells.size() + 1);
      for (size_t c = 0; c < cells.size(); ++c) {
        if (c != target) {
          child.push_back(cells[c]);
          continue;
        }
        child.push_back({q});
        std::vector<State> rest;
        for (State p : cells[c])
          if (p != q) rest.push_back(p);
        child.push_back(std::move(rest));
      }
      descend(std::move(child));
    }
  }
};

Automaton canonical_refined(const Automaton& a, bool permute_letters) {
  Refiner r(a, permute_letters);
  std::vector<State> all(a.n());
  std::iota(all.begin(), all.end(), 0);
  r.descend({all});
  return Automaton(a.n(), a.k(), std::move(r.best));
}

}  // namespace

Automaton canonical_form(const Automaton& a, bool permute_letters) {
  if (a.n() <= 8) return canonical_bruteforce(a, permute_letters);
  return canonical_refined(a, permute_letters);
}

bool isomorphic(const Automaton& a, const Automaton& b, bool permute_letters) {
  if (a.n() != b.n() || a.k() != b.k()) return false;
  return canonical_form(a, permute_letters) == canonical_form(b, permute_letters);
}

namespace {

struct AutSearch {
  const Automaton& a;
  int n, k;
  std::vector<int> sigma;   // -1 = unassigned
  std::vector<char> used;
  std::vector<std::vector<State>> found;

  explicit AutSearch(const Automaton& au)
      : a(au), n(au.n()), k(au.k()), sigma(au.n(), -1), used(au.n(), 0) {}

  // Assigns sigma[q] = r and propagates images forced through the letters.
  // Returns false on conflict; records assignments in trail for rollback.
  bool assign(State q, State r, std::vector<State>& trail) {
    if (sigma[q] != -1) return sigma[q] == r;
    if (used[r]) return false;
    sigma[q] = r;
    used[r] = 1;
    trail.push_back(q);
    std::vector<State> stack{q};
    while (!stack.empty()) {
      State p = stack.back();
      stack.pop_back();
      for (Letter x = 0; x < k; ++x) {
        State u = a.next(p, x), v = a.next(sigma[p], x);
        if (sigma[u] == -1) {
          if (used[v]) return false;
          sigma[u] = v;
          used[v] = 1;
          trail.push_back(u);
          stack.push_back(u);
        } else if (sigma[u] != v) {
          return false;
        }
      }
    }
    return true;
  }

  void undo(const std::vector<State>& trail) {
    for (State q : trail) {
      used[sigma[q]] = 0;
      sigma[q] = -1;
    }
  }

  void search() {
    State q = -1;
    for (State i = 0; i < n; ++i)
      if (sigma[i] == -1) {
        q = i;
        break;
      }
    if (q == -1) {
      found.emplace_back(sigma.begin(), sigma.end());
      return;
    }
    for (State r = 0; r < n; ++r) {
      if (used[r]) continue;
      std::vector<State> trail;
      if (assign(q, r, trail)) search();
      undo(trail);
    }
  }
};

}  // namespace

std::vector<std::vector<State>> automorphisms(const Automaton& a) {
  AutSearch s(a);
  s.search();
  return s.found;
}

}  // namespace synchrolab
