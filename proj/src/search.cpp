#include "synchrolab/search.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "synchrolab/bounds.hpp"

namespace synchrolab {

int max_subset_bits() {
  static int bits = [] {
    if (const char* s = std::getenv("SYNCHROLAB_MAX_SUBSET_BITS")) {
      int v = std::atoi(s);
      if (v >= 1 && v <= 30) return v;
    }
    return 24;
  }();
  return bits;
}

void check_subset_guard(int n) {
  if (n > max_subset_bits())
    throw SubsetGuardError("subset table for n = " + std::to_string(n) +
                           " exceeds the 2^" + std::to_string(max_subset_bits()) +
                           " guard (set SYNCHROLAB_MAX_SUBSET_BITS to override)");
}

namespace {

constexpr uint32_t kNoDist = std::numeric_limits<uint32_t>::max();

// Per-letter byte-sliced lookup: the image of a subset is the OR of one
// table entry per byte of the mask.
struct ImageTables {
  int n, k, nbytes;
  std::vector<uint64_t> tbl;

  ImageTables(const Automaton& a, bool preimage) : n(a.n()), k(a.k()) {
    nbytes = (n + 7) / 8;
    tbl.assign(size_t(k) * nbytes * 256, 0);
    for (Letter x = 0; x < k; ++x) {
      std::vector<uint64_t> point(n, 0);
      if (preimage) {
        for (State q = 0; q < n; ++q) point[a.next(q, x)] |= uint64_t(1) << q;
      } else {
        for (State q = 0; q < n; ++q) point[q] = uint64_t(1) << a.next(q, x);
      }
      for (int b = 0; b < nbytes; ++b) {
        uint64_t* slot = tbl.data() + (size_t(x) * nbytes + b) * 256;
        for (int v = 1; v < 256; ++v) {
          int low = v & -v;
          int q = b * 8 + std::countr_zero(unsigned(low));
          slot[v] = slot[v ^ low] | (q < n ? point[q] : 0);
        }
      }
    }
  }

  uint64_t map(uint64_t s, Letter x) const {
    const uint64_t* base = tbl.data() + size_t(x) * nbytes * 256;
    uint64_t out = 0;
    for (int b = 0; b < nbytes; ++b) out |= base[size_t(b) * 256 + ((s >> (8 * b)) & 0xff)];
    return out;
  }
};

// Forward BFS from Q; stops at the first subset satisfying `stop`.
template <typename Stop>
std::optional<ResetResult> power_bfs(const Automaton& a, Stop stop) {
  const int n = a.n();
  check_subset_guard(n);
  const uint64_t full = StateSet::full(n).bits;
  if (stop(full)) return ResetResult{0, {}};
  const size_t nsub = size_t(1) << n;
  ImageTables img(a, false);

  std::vector<uint32_t> dist(nsub, kNoDist);
  std::vector<uint32_t> parent(nsub);
  std::vector<uint8_t> parent_letter(nsub);
  std::vector<uint32_t> queue;
  queue.reserve(1024);
  dist[full] = 0;
  queue.push_back(static_cast<uint32_t>(full));

  for (size_t head = 0; head < queue.size(); ++head) {
    uint32_t s = queue[head];
    for (Letter x = 0; x < a.k(); ++x) {
      uint32_t t = static_cast<uint32_t>(img.map(s, x));
      if (dist[t] != kNoDist) continue;
      dist[t] = dist[s] + 1;
      parent[t] = s;
      parent_letter[t] = static_cast<uint8_t>(x);
      if (stop(t)) {
        ResetResult r;
        r.length = dist[t];
        for (uint32_t cur = t; cur != full; cur = parent[cur])
          r.witness.push_back(parent_letter[cur]);
        std::reverse(r.witness.begin(), r.witness.end());
        return r;
      }
      queue.push_back(t);
    }
  }
  return std::nullopt;
}

}  // namespace

bool is_synchronizing(const Automaton& a) {
  if (a.n() == 1) return true;
  PairSet p = compressible_pairs(a);
  return p.count == a.n() * (a.n() - 1) / 2;
}

std::optional<ResetResult> reset_length(const Automaton& a) {
  return power_bfs(a, [](uint64_t s) { return std::has_single_bit(s); });
}

std::optional<ResetResult> shortest_word_of_rank(const Automaton& a, int r) {
  if (r < 1 || r > a.n()) throw std::invalid_argument("rank target out of range");
  return power_bfs(a, [r](uint64_t s) { return std::popcount(s) <= r; });
}

std::vector<long long> rank_word_lengths(const Automaton& a) {
  const int n = a.n();
  check_subset_guard(n);
  const size_t nsub = size_t(1) << n;
  ImageTables img(a, false);
  const uint64_t full = StateSet::full(n).bits;

  std::vector<uint32_t> dist(nsub, kNoDist);
  std::vector<uint32_t> queue;
  dist[full] = 0;
  queue.push_back(static_cast<uint32_t>(full));
  std::vector<long long> min_by_card(n + 1, kUnreachable);
  min_by_card[n] = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    uint32_t s = queue[head];
    for (Letter x = 0; x < a.k(); ++x) {
      uint32_t t = static_cast<uint32_t>(img.map(s, x));
      if (dist[t] != kNoDist) continue;
      dist[t] = dist[s] + 1;
      int c = std::popcount(t);
      if (dist[t] < min_by_card[c]) min_by_card[c] = dist[t];
      queue.push_back(t);
    }
  }
  // a word of rank <= r exists at any cardinality c <= r
  std::vector<long long> lengths(n + 1, kUnreachable);
  long long best = kUnreachable;
  for (int r = 1; r <= n; ++r) {
    best = std::min(best, min_by_card[r]);
    lengths[r] = best;
  }
  return lengths;
}

std::optional<ResetResult> avoid_length(const Automaton& a, State q) {
  if (q < 0 || q >= a.n()) throw std::invalid_argument("state out of range");
  return power_bfs(a, [q](uint64_t s) { return !(s >> q & 1); });
}

SyncProfile sync_profile(const Automaton& a) {
  const int n = a.n();
  check_subset_guard(n);
  const size_t nsub = size_t(1) << n;
  ImageTables img(a, false);

  SyncProfile p;
  p.n = n;
  p.levels.assign(nsub, SyncProfile::kInf);
  std::vector<uint32_t> pending;
  pending.reserve(nsub);
  for (size_t s = 1; s < nsub; ++s) {
    if (std::has_single_bit(s))
      p.levels[s] = 0;
    else
      pending.push_back(static_cast<uint32_t>(s));
  }
  // round t labels the subsets some letter maps into a level t-1 subset
  for (uint32_t t = 1; !pending.empty(); ++t) {
    std::vector<uint32_t> next;
    next.reserve(pending.size());
    bool progress = false;
    for (uint32_t s : pending) {
      bool hit = false;
      for (Letter x = 0; x < a.k() && !hit; ++x)
        hit = p.levels[img.map(s, x)] == t - 1;
      if (hit) {
        p.levels[s] = t;
        progress = true;
      } else {
        next.push_back(s);
      }
    }
    if (!progress) break;
    pending.swap(next);
  }
  return p;
}

Word profile_witness(const Automaton& a, const SyncProfile& p, StateSet s) {
  if (!p.synchronizable(s)) throw std::invalid_argument("subset is not synchronizable");
  Word w;
  StateSet cur = s;
  while (p[cur] > 0) {
    for (Letter x = 0; x < a.k(); ++x) {
      StateSet t = a.image(cur, x);
      if (p[t] == p[cur] - 1) {
        w.push_back(x);
        cur = t;
        break;
      }
    }
  }
  return w;
}

std::optional<long long> greedy_compress_worst(const Automaton& a) {
  const int n = a.n();
  if (n == 1) return 0;
  check_subset_guard(n);
  if (!is_synchronizing(a)) return std::nullopt;
  const size_t nsub = size_t(1) << n;
  ImageTables img(a, false);

  std::vector<int64_t> worst(nsub, -1);
  for (int q = 0; q < n; ++q) worst[uint64_t(1) << q] = 0;
  std::vector<uint32_t> d(nsub, 0);
  std::vector<int64_t> m(nsub, 0);

  std::vector<std::vector<uint32_t>> by_card(n + 1);
  for (size_t s = 1; s < nsub; ++s) by_card[std::popcount(s)].push_back(uint32_t(s));

  for (int c = 2; c <= n; ++c) {
    auto& cls = by_card[c];
    // shortest compressing length per subset, relaxed level by level
    std::vector<uint32_t> pending;
    for (uint32_t s : cls) {
      bool drop = false;
      for (Letter x = 0; x < a.k() && !drop; ++x)
        drop = std::popcount(img.map(s, x)) < c;
      if (drop)
        d[s] = 1;
      else {
        d[s] = 0;
        pending.push_back(s);
      }
    }
    for (uint32_t t = 2; !pending.empty(); ++t) {
      std::vector<uint32_t> next;
      bool progress = false;
      for (uint32_t s : pending) {
        bool hit = false;
        for (Letter x = 0; x < a.k() && !hit; ++x) {
          uint64_t u = img.map(s, x);
          hit = std::popcount(u) == c && d[u] == t - 1;
        }
        if (hit) {
          d[s] = t;
          progress = true;
        } else {
          next.push_back(s);
        }
      }
      if (!progress)
        return std::nullopt;  // incompressible subset in a synchronizing automaton
      pending.swap(next);
    }
    // adversarial continuation, in increasing d order
    std::vector<uint32_t> order = cls;
    std::sort(order.begin(), order.end(),
              [&](uint32_t l, uint32_t r) { return d[l] != d[r] ? d[l] < d[r] : l < r; });
    for (uint32_t s : order) {
      int64_t best = -1;
      if (d[s] == 1) {
        for (Letter x = 0; x < a.k(); ++x) {
          uint64_t u = img.map(s, x);
          if (std::popcount(u) < c) best = std::max(best, worst[u]);
        }
      } else {
        for (Letter x = 0; x < a.k(); ++x) {
          uint64_t u = img.map(s, x);
          if (std::popcount(u) == c && d[u] == d[s] - 1) best = std::max(best, m[u]);
        }
      }
      m[s] = best;
      worst[s] = d[s] + best;
    }
  }
  return worst[StateSet::full(n).bits];
}

std::optional<long long> greedy_extend_worst(const Automaton& a, ExtendStart start) {
  const int n = a.n();
  if (n == 1) return 0;
  check_subset_guard(n);
  if (!is_synchronizing(a)) return std::nullopt;
  // extensibility of every proper subset needs strong connectivity
  {
    std::vector<char> fwd(n, 0), bwd(n, 0);
    std::vector<State> stack{0};
    fwd[0] = 1;
    while (!stack.empty()) {
      State q = stack.back();
      stack.pop_back();
      for (Letter x = 0; x < a.k(); ++x)
        if (!fwd[a.next(q, x)]) {
          fwd[a.next(q, x)] = 1;
          stack.push_back(a.next(q, x));
        }
    }
    stack.assign(1, 0);
    bwd[0] = 1;
    while (!stack.empty()) {
      State q = stack.back();
      stack.pop_back();
      for (State p = 0; p < n; ++p) {
        if (bwd[p]) continue;
        for (Letter x = 0; x < a.k(); ++x)
          if (a.next(p, x) == q) {
            bwd[p] = 1;
            stack.push_back(p);
            break;
          }
      }
    }
    for (int q = 0; q < n; ++q)
      if (!fwd[q] || !bwd[q]) return std::nullopt;
  }

  const size_t nsub = size_t(1) << n;
  ImageTables pre(a, true);
  std::vector<int64_t> worst(nsub, -1);
  worst[StateSet::full(n).bits] = 0;
  std::vector<uint32_t> d(nsub, 0);
  std::vector<int64_t> m(nsub, 0);

  for (int c = n - 1; c >= 1; --c) {
    // domain: all subsets of size <= c; a run at size c stops at the first
    // preimage larger than c
    std::vector<uint32_t> domain;
    for (size_t s = 1; s < nsub; ++s)
      if (std::popcount(s) <= c) domain.push_back(uint32_t(s));
    std::vector<uint32_t> pending;
    for (uint32_t s : domain) {
      bool grow = false;
      for (Letter x = 0; x < a.k() && !grow; ++x)
        grow = std::popcount(pre.map(s, x)) > c;
      if (grow)
        d[s] = 1;
      else {
        d[s] = 0;
        pending.push_back(s);
      }
    }
    for (uint32_t t = 2; !pending.empty(); ++t) {
      std::vector<uint32_t> next;
      bool progress = false;
      for (uint32_t s : pending) {
        bool hit = false;
        for (Letter x = 0; x < a.k() && !hit; ++x) {
          uint64_t u = pre.map(s, x);
          hit = std::popcount(u) <= c && d[u] != 0 && d[u] == t - 1;
        }
        if (hit) {
          d[s] = t;
          progress = true;
        } else {
          next.push_back(s);
        }
      }
      if (!progress) break;  // unreachable extensions stay at d = 0
      pending.swap(next);
    }
    std::vector<uint32_t> order;
    for (uint32_t s : domain)
      if (d[s] != 0) order.push_back(s);
    std::sort(order.begin(), order.end(),
              [&](uint32_t l, uint32_t r) { return d[l] != d[r] ? d[l] < d[r] : l < r; });
    bool stuck = false;
    for (uint32_t s : order) {
      int64_t best = -1;
      if (d[s] == 1) {
        for (Letter x = 0; x < a.k(); ++x) {
          uint64_t u = pre.map(s, x);
          if (std::popcount(u) > c) {
            if (worst[u] < 0) stuck = true;
            best = std::max(best, worst[u]);
          }
        }
      } else {
        for (Letter x = 0; x < a.k(); ++x) {
          uint64_t u = pre.map(s, x);
          if (std::popcount(u) <= c && d[u] == d[s] - 1) best = std::max(best, m[u]);
        }
      }
      m[s] = best;
      if (std::popcount(s) == c) worst[s] = d[s] + best;
    }
    if (stuck) return std::nullopt;
    for (uint32_t s : domain)
      if (std::popcount(s) == c && d[s] == 0) return std::nullopt;  // inextensible subset
  }

  long long result = start == ExtendStart::adversarial ? -1 : std::numeric_limits<long long>::max();
  for (int q = 0; q < n; ++q) {
    int64_t w = worst[uint64_t(1) << q];
    if (w < 0) return std::nullopt;
    result = start == ExtendStart::adversarial ? std::max<long long>(result, w)
                                               : std::min<long long>(result, w);
  }
  return result;
}

OneClusterExtensionScan one_cluster_extension_max(const Automaton& a, Letter x) {
  auto occ = one_cluster_data(a, x);
  if (!occ) throw std::invalid_argument("letter is not one-cluster");
  const int n = a.n();
  check_subset_guard(n);
  OneClusterExtensionScan scan;
  if (occ->m < 2) return scan;

  const size_t nsub = size_t(1) << n;
  ImageTables pre(a, true);
  const uint64_t cyc = occ->cycle.bits;

  std::vector<uint32_t> stamp(nsub, 0);
  uint32_t epoch = 0;
  std::vector<uint32_t> queue;
  std::vector<uint32_t> depth;

  // enumerate non-empty proper subsets of the cycle
  for (uint64_t s = (cyc - 1) & cyc; s != 0; s = (s - 1) & cyc) {
    const int target = std::popcount(s);
    uint64_t t0 = s;
    for (int i = 0; i < occ->level; ++i) t0 = pre.map(t0, x);
    ++epoch;
    queue.clear();
    depth.clear();
    queue.push_back(static_cast<uint32_t>(t0));
    depth.push_back(0);
    stamp[t0] = epoch;
    long long found = -1;
    if (std::popcount(t0 & cyc) > target) found = 0;
    for (size_t head = 0; head < queue.size() && found < 0; ++head) {
      uint64_t cur = queue[head];
      for (Letter y = 0; y < a.k(); ++y) {
        uint64_t u = pre.map(cur, y);
        if (stamp[u] == epoch) continue;
        stamp[u] = epoch;
        if (std::popcount(u & cyc) > target) {
          found = depth[head] + 1;
          break;
        }
        queue.push_back(static_cast<uint32_t>(u));
        depth.push_back(depth[head] + 1);
      }
    }
    if (found < 0) {
      scan.all_extendable = false;
      scan.stuck_subset = StateSet{s};
      return scan;
    }
    if (found > scan.max_word_len) {
      scan.max_word_len = found;
      scan.worst_subset = StateSet{s};
    }
  }
  return scan;
}

}  // namespace synchrolab
