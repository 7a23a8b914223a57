#include "synchrolab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "synchrolab/search.hpp"

namespace synchrolab {

PairSet compressible_pairs(const Automaton& a) {
  const int n = a.n(), k = a.k();
  PairSet p;
  p.n = n;
  p.merge_len.assign(size_t(n) * (n - 1) / 2, -1);
  if (n < 2) return p;

  std::vector<std::vector<State>> pre(size_t(k) * n);
  for (Letter x = 0; x < k; ++x)
    for (State q = 0; q < n; ++q) pre[size_t(x) * n + a.next(q, x)].push_back(q);

  std::queue<std::pair<State, State>> queue;
  auto label = [&](State u, State v, int d) {
    int& slot = p.merge_len[PairSet::index(n, u, v)];
    if (slot >= 0) return;
    slot = d;
    ++p.count;
    p.height = std::max(p.height, d);
    queue.emplace(std::min(u, v), std::max(u, v));
  };

  for (State u = 0; u < n; ++u)
    for (State v = u + 1; v < n; ++v)
      for (Letter x = 0; x < k; ++x)
        if (a.next(u, x) == a.next(v, x)) {
          label(u, v, 1);
          break;
        }

  while (!queue.empty()) {
    auto [u, v] = queue.front();
    queue.pop();
    int d = p.merge_len[PairSet::index(n, u, v)];
    for (Letter x = 0; x < k; ++x)
      for (State pu : pre[size_t(x) * n + u])
        for (State pv : pre[size_t(x) * n + v])
          if (pu != pv) label(pu, pv, d + 1);
  }
  return p;
}

bool franklpin_valid(const std::vector<FranklPinEntry>& seq, const PairSet& p, int n, int m) {
  for (size_t i = 0; i < seq.size(); ++i) {
    const auto& e = seq[i];
    if (e.subset.size() != m) return false;
    if (!e.subset.subset_of(StateSet::full(n))) return false;
    if (e.x == e.y || !e.subset.contains(e.x) || !e.subset.contains(e.y)) return false;
    if (!p.contains(e.x, e.y)) return false;
    for (size_t j = 0; j < i; ++j)
      if (seq[j].subset.contains(e.x) && seq[j].subset.contains(e.y)) return false;
  }
  return true;
}

namespace {

struct PairList {
  std::vector<std::pair<State, State>> pairs;
  std::vector<uint64_t> pair_mask;  // pair_mask[i] = bit mask of the two states
};

PairList collect_pairs(const PairSet& p, int n) {
  PairList out;
  for (State x = 0; x < n; ++x)
    for (State y = x + 1; y < n; ++y)
      if (p.contains(x, y)) {
        out.pairs.emplace_back(x, y);
        out.pair_mask.push_back((uint64_t(1) << x) | (uint64_t(1) << y));
      }
  return out;
}

// Pairs of P fully contained in `subset`, as indices into the pair list.
std::vector<int> pairs_inside(const PairList& pl, uint64_t subset) {
  std::vector<int> out;
  for (size_t i = 0; i < pl.pairs.size(); ++i)
    if ((pl.pair_mask[i] & ~subset) == 0) out.push_back(static_cast<int>(i));
  return out;
}

struct GreedyBuilder {
  const PairList& pl;
  int n, m;

  // Fills the subset up to m states, preferring fillers that swallow the
  // fewest still-available pairs.
  uint64_t fill(uint64_t base, const std::vector<char>& blocked) const {
    uint64_t subset = base;
    while (std::popcount(subset) < m) {
      int best_state = -1;
      int best_damage = std::numeric_limits<int>::max();
      for (State s = 0; s < n; ++s) {
        if (subset >> s & 1) continue;
        uint64_t cand = subset | (uint64_t(1) << s);
        int damage = 0;
        for (size_t i = 0; i < pl.pairs.size(); ++i)
          if (!blocked[i] && (pl.pair_mask[i] & ~cand) == 0 && (pl.pair_mask[i] & ~subset) != 0)
            ++damage;
        if (damage < best_damage) {
          best_damage = damage;
          best_state = s;
        }
      }
      subset |= uint64_t(1) << best_state;
    }
    return subset;
  }
};

std::vector<FranklPinEntry> franklpin_greedy(const PairList& pl, int n, int m) {
  std::vector<FranklPinEntry> seq;
  std::vector<char> blocked(pl.pairs.size(), 0);
  GreedyBuilder gb{pl, n, m};
  for (;;) {
    int pick = -1;
    for (size_t i = 0; i < pl.pairs.size(); ++i)
      if (!blocked[i]) {
        pick = static_cast<int>(i);
        break;
      }
    if (pick < 0) break;
    uint64_t subset = gb.fill(pl.pair_mask[pick], blocked);
    seq.push_back({StateSet{subset}, pl.pairs[pick].first, pl.pairs[pick].second});
    for (size_t i = 0; i < pl.pairs.size(); ++i)
      if (!blocked[i] && (pl.pair_mask[i] & ~subset) == 0) blocked[i] = 1;
  }
  return seq;
}

struct FranklPinBnb {
  const PairList& pl;
  int n, m;
  long long budget;
  bool exhausted = false;
  std::vector<FranklPinEntry> best;
  std::vector<FranklPinEntry> cur;
  std::vector<char> blocked;

  void run() {
    blocked.assign(pl.pairs.size(), 0);
    dfs();
  }

  void dfs() {
    if (cur.size() > best.size()) best = cur;
    if (exhausted) return;
    if (--budget < 0) {
      exhausted = true;
      return;
    }
    int avail = 0;
    for (char b : blocked)
      if (!b) ++avail;
    if (cur.size() + avail <= best.size()) return;

    for (size_t i = 0; i < pl.pairs.size() && !exhausted; ++i) {
      if (blocked[i]) continue;
      // choose the m-2 filler states
      std::vector<State> others;
      for (State s = 0; s < n; ++s)
        if (!(pl.pair_mask[i] >> s & 1)) others.push_back(s);
      choose_fillers(i, others, 0, pl.pair_mask[i]);
    }
  }

  void choose_fillers(size_t pair_idx, const std::vector<State>& others, size_t from,
                      uint64_t subset) {
    if (exhausted) return;
    if (--budget < 0) {
      exhausted = true;
      return;
    }
    if (std::popcount(subset) == m) {
      std::vector<int> newly;
      for (size_t i = 0; i < pl.pairs.size(); ++i)
        if (!blocked[i] && (pl.pair_mask[i] & ~subset) == 0) {
          blocked[i] = 1;
          newly.push_back(static_cast<int>(i));
        }
      cur.push_back(
          {StateSet{subset}, pl.pairs[pair_idx].first, pl.pairs[pair_idx].second});
      dfs();
      cur.pop_back();
      for (int i : newly) blocked[i] = 0;
      return;
    }
    int need = m - std::popcount(subset);
    for (size_t j = from; j + need <= others.size(); ++j)
      choose_fillers(pair_idx, others, j + 1, subset | (uint64_t(1) << others[j]));
  }
};

}  // namespace

FranklPinResult max_franklpin(const PairSet& p, int n, int m, long long budget) {
  if (m < 2 || m > n) throw std::invalid_argument("subset size out of range");
  FranklPinResult res;
  PairList pl = collect_pairs(p, n);
  if (pl.pairs.empty()) {
    res.exact = true;
    return res;
  }
  if (m == 2) {
    // each pair once, as its own subset; both conditions hold trivially
    for (size_t i = 0; i < pl.pairs.size(); ++i)
      res.sequence.push_back({StateSet{pl.pair_mask[i]}, pl.pairs[i].first, pl.pairs[i].second});
    res.exact = true;
    return res;
  }
  res.sequence = franklpin_greedy(pl, n, m);
  if (budget > 0) {
    FranklPinBnb bnb{pl, n, m, budget};
    bnb.best = res.sequence;
    bnb.run();
    if (bnb.best.size() > res.sequence.size()) res.sequence = std::move(bnb.best);
    res.exact = !bnb.exhausted;
  }
  return res;
}

long long theorem1_bound(int n, int m, long long p, long long h) {
  if (m < 2 || m > n) throw std::invalid_argument("subset size out of range");
  long long t = n - m + 2;
  return t * (t - 1) / 2 - p + h;
}

long long pin_rank_step(long long wlen, int n, int r) {
  if (r < 2 || wlen < 0) throw std::invalid_argument("pin_rank_step: bad arguments");
  return 2 * wlen + n - r + 1;
}

bool is_prime(int m) {
  if (m < 2) return false;
  for (int d = 2; d * d <= m; ++d)
    if (m % d == 0) return false;
  return true;
}

namespace {

using Poly = std::vector<long long>;  // coefficients, low degree first

int degree(const Poly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p[i] != 0) return i;
  return -1;
}

// Remainder of a by a monic divisor; exact integer arithmetic.
Poly poly_mod(Poly a, const Poly& monic) {
  int dm = degree(monic);
  for (int da = degree(a); da >= dm; da = degree(a)) {
    long long c = a[da];
    for (int i = 0; i <= dm; ++i) a[da - dm + i] -= c * monic[i];
  }
  return a;
}

Poly poly_divide_exact(Poly a, const Poly& monic) {
  int dm = degree(monic);
  int da = degree(a);
  Poly q(std::max(0, da - dm + 1), 0);
  for (; da >= dm; da = degree(a)) {
    long long c = a[da];
    q[da - dm] = c;
    for (int i = 0; i <= dm; ++i) a[da - dm + i] -= c * monic[i];
  }
  if (degree(a) >= 0) throw std::logic_error("inexact polynomial division");
  return q;
}

Poly cyclotomic_impl(int d, std::map<int, Poly>& cache) {
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  // x^d - 1 divided by all proper cyclotomic factors
  Poly p(d + 1, 0);
  p[0] = -1;
  p[d] = 1;
  for (int e = 1; e < d; ++e)
    if (d % e == 0) p = poly_divide_exact(std::move(p), cyclotomic_impl(e, cache));
  cache[d] = p;
  return p;
}

Poly cyclotomic(int d) {
  static std::map<int, Poly> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  return cyclotomic_impl(d, cache);
}

bool divides_gamma(const Poly& phi, const Poly& g) {
  Poly r = poly_mod(g, phi);
  return degree(r) < 0;
}

// least positive shift fixing S, over divisors of m
int cyclic_period(uint64_t s, int m) {
  const uint64_t mask = (m == 64) ? ~uint64_t(0) : (uint64_t(1) << m) - 1;
  for (int q = 1; q <= m; ++q) {
    if (m % q != 0) continue;
    uint64_t rot = ((s << q) | (s >> (m - q))) & mask;
    if (rot == s) return q;
  }
  return m;
}

// iterate k-subsets of [0, m) as bit masks (Gosper)
template <typename F>
void for_each_subset(int m, int k, F f) {
  uint64_t s = (uint64_t(1) << k) - 1;
  const uint64_t limit = uint64_t(1) << m;
  while (s < limit) {
    f(s);
    uint64_t c = s & -s, r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
}

int rank_of_circulant(const Poly& g, int m) {
  // rows are the m cyclic shifts; Bareiss fraction-free elimination
  std::vector<std::vector<__int128>> a(m, std::vector<__int128>(m, 0));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) a[j][(i + j) % m] = g[i];
  int rank = 0;
  __int128 prev = 1;
  for (int col = 0; col < m && rank < m; ++col) {
    int pivot = -1;
    for (int r = rank; r < m; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[rank], a[pivot]);
    for (int r = rank + 1; r < m; ++r) {
      for (int c = col + 1; c < m; ++c)
        a[r][c] = (a[r][c] * a[rank][col] - a[r][col] * a[rank][c]) / prev;
      a[r][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

Poly gamma_poly(uint64_t s, int m, int k) {
  Poly g(m, -k);
  for (int i = 0; i < m; ++i)
    if (s >> i & 1) g[i] += m;
  return g;
}

}  // namespace

int dstar(int m, int k) {
  if (m < 2 || k < 1 || k > m - 1) throw std::invalid_argument("dstar: parameter range");
  if (m > 30) throw std::invalid_argument("dstar: m too large");
  std::vector<Poly> factors;
  for (int d = 1; d <= m; ++d)
    if (m % d == 0) factors.push_back(cyclotomic(d));
  int best = std::numeric_limits<int>::max();
  for_each_subset(m, k, [&](uint64_t s) {
    int q = cyclic_period(s, m);
    Poly g = gamma_poly(s, m, k);
    int gcd_deg = 0;
    for (const Poly& phi : factors)
      if (divides_gamma(phi, g)) gcd_deg += degree(phi);
    int dim = m - gcd_deg;
    best = std::min(best, m - q + dim);
  });
  return best;
}

int dstar_bruteforce(int m, int k) {
  if (m < 2 || k < 1 || k > m - 1) throw std::invalid_argument("dstar: parameter range");
  if (m > 16) throw std::invalid_argument("dstar_bruteforce: m too large");
  int best = std::numeric_limits<int>::max();
  const uint64_t mask = (uint64_t(1) << m) - 1;
  for_each_subset(m, k, [&](uint64_t s) {
    int q = m;
    for (int shift = 1; shift <= m; ++shift) {
      uint64_t rot = ((s << shift) | (s >> (m - shift))) & mask;
      if (rot == s) {
        q = shift;
        break;
      }
    }
    Poly g = gamma_poly(s, m, k);
    int dim = rank_of_circulant(g, m);
    best = std::min(best, m - q + dim);
  });
  return best;
}

long long DStarTable::sum() const {
  return std::accumulate(values.begin(), values.end(), 0LL);
}

DStarTable dstar_table(int m) {
  static std::map<int, DStarTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  DStarTable t;
  t.m = m;
  for (int k = 1; k <= m - 1; ++k) t.values.push_back(dstar(m, k));
  return cache[m] = t;
}

long long theorem2_bound(int n, int s, int l, int m, const DStarTable& table) {
  if (m < 2 || s < 1 || l < 0) throw std::invalid_argument("theorem2_bound: parameter range");
  if (table.m != m) throw std::invalid_argument("theorem2_bound: table mismatch");
  return static_cast<long long>(s) * (l + m - 2) * (m - 1) +
         static_cast<long long>(n + 1) * (m - 1) + static_cast<long long>(s) * l - table.sum();
}

long long corollary3_bound(int n, int m) {
  if (m < 2) throw std::invalid_argument("corollary3_bound: m >= 2 required");
  double v = 2.0 * n * m - 4.0 * m * std::log((m + 3) / 2.0) + 2.0 * m - n + 1;
  return static_cast<long long>(std::ceil(v));
}

long long steinberg_eq1_bound(int n, int l, int m) {
  if (!is_prime(m)) throw std::invalid_argument("steinberg_eq1_bound: m must be prime");
  if (l < 0) throw std::invalid_argument("steinberg_eq1_bound: level must be >= 0");
  return n - m + 1 + 2LL * l + static_cast<long long>(m - 2) * (n + l);
}

std::optional<OneClusterData> one_cluster_of(const Transformation& t) {
  if (t.cycle_count() != 1) return std::nullopt;
  OneClusterData d;
  d.cycle = t.cyclic_states();
  d.m = d.cycle.size();
  StateSet s = StateSet::full(t.size());
  while (s != d.cycle) {
    StateSet next;
    for (uint64_t m = s.bits; m; m &= m - 1) next.insert(t(std::countr_zero(m)));
    s = next;
    ++d.level;
  }
  State q = d.cycle.lowest();
  for (int i = 0; i < d.m; ++i) {
    d.cycle_order.push_back(q);
    q = t(q);
  }
  return d;
}

std::optional<OneClusterData> one_cluster_data(const Automaton& a, Letter x) {
  auto d = one_cluster_of(a.letter_action(x));
  if (d) d->letter = x;
  return d;
}

BoundReport bound_report(const Automaton& a, int word_cap) {
  const int n = a.n();
  BoundReport rep;
  rep.synchronizing = is_synchronizing(a);
  if (!rep.synchronizing) return rep;

  PairSet p = compressible_pairs(a);
  if (p.count > 0 && n >= 2) {
    long long sum = 0;
    for (int m = 2; m <= n; ++m) {
      auto fp = max_franklpin(p, n, m);
      sum += theorem1_bound(n, m, static_cast<long long>(fp.sequence.size()), p.height);
    }
    rep.items.push_back({"theorem1_sum", {{"pairs", p.count}, {"h", p.height}}, sum});
  }
  {
    long long wlen = 0;
    for (int r = n; r >= 2; --r) wlen = pin_rank_step(wlen, n, r);
    rep.items.push_back({"pin_chain", {{"n", n}}, wlen});
  }

  // scan short words for one-cluster transformations
  std::optional<BoundItem> thm2, eq1, cor3;
  std::vector<Transformation> frontier{Transformation::identity(n)};
  std::vector<Transformation> seen;
  for (int len = 1; len <= word_cap; ++len) {
    std::vector<Transformation> next;
    for (const auto& t : frontier)
      for (Letter x = 0; x < a.k(); ++x) {
        Transformation u = t.then(a.letter_action(x));
        if (std::find(seen.begin(), seen.end(), u) != seen.end()) continue;
        seen.push_back(u);
        next.push_back(u);
        auto occ = one_cluster_of(u);
        if (!occ || occ->m < 2) continue;
        long long v = theorem2_bound(n, len, occ->level, occ->m, dstar_table(occ->m));
        if (!thm2 || v < thm2->value)
          thm2 = BoundItem{"theorem2", {{"s", len}, {"l", occ->level}, {"m", occ->m}}, v};
        if (len == 1) {
          long long c3 = corollary3_bound(n, occ->m);
          if (!cor3 || c3 < cor3->value)
            cor3 = BoundItem{"corollary3", {{"m", occ->m}}, c3};
          if (is_prime(occ->m)) {
            long long e1 = steinberg_eq1_bound(n, occ->level, occ->m);
            if (!eq1 || e1 < eq1->value)
              eq1 = BoundItem{"steinberg_eq1", {{"l", occ->level}, {"m", occ->m}}, e1};
          }
        }
      }
    frontier = std::move(next);
  }
  if (thm2) rep.items.push_back(*thm2);
  if (cor3) rep.items.push_back(*cor3);
  if (eq1) rep.items.push_back(*eq1);

  for (const auto& item : rep.items)
    if (!rep.best || item.value < *rep.best) rep.best = item.value;
  return rep;
}

}  // namespace synchrolab
