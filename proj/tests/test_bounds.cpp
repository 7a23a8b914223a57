#include <doctest.h>

#include <map>
#include <queue>

#include "oracles.hpp"
#include "synchrolab/automaton.hpp"
#include "synchrolab/bounds.hpp"
#include "synchrolab/fixtures.hpp"
#include "synchrolab/search.hpp"

using namespace synchrolab;
namespace oracle = synchrolab::testing;

namespace {

// independent pair-graph BFS, forward from one pair
long long pair_merge_oracle(const Automaton& a, State x, State y) {
  std::map<std::pair<State, State>, long long> dist;
  std::queue<std::pair<State, State>> q;
  auto norm = [](State u, State v) { return std::make_pair(std::min(u, v), std::max(u, v)); };
  dist[norm(x, y)] = 0;
  q.push(norm(x, y));
  while (!q.empty()) {
    auto [u, v] = q.front();
    q.pop();
    for (Letter l = 0; l < a.k(); ++l) {
      State nu = a.next(u, l), nv = a.next(v, l);
      if (nu == nv) return dist[norm(u, v)] + 1;
      auto key = norm(nu, nv);
      if (!dist.count(key)) {
        dist[key] = dist[norm(u, v)] + 1;
        q.push(key);
      }
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("compressible pairs") {
  Automaton c4 = fixture("cerny", 4);
  PairSet p = compressible_pairs(c4);
  CHECK(p.count == 6);  // synchronizing: all pairs compressible
  long long worst = 0;
  for (State x = 0; x < 4; ++x)
    for (State y = x + 1; y < 4; ++y) {
      long long expect = pair_merge_oracle(c4, x, y);
      CHECK(p.length(x, y) == expect);
      worst = std::max(worst, expect);
    }
  CHECK(p.height == worst);

  PairSet empty = compressible_pairs(Automaton(4, 1, {0, 1, 2, 3}));
  CHECK(empty.count == 0);
  CHECK(empty.height == 0);
}

TEST_CASE("compressible pairs match the oracle on random automata") {
  std::mt19937 rng(42);
  for (int i = 0; i < 120; ++i) {
    Automaton a = oracle::random_automaton(rng, 2 + i % 6, 1 + i % 3);
    PairSet p = compressible_pairs(a);
    for (State x = 0; x < a.n(); ++x)
      for (State y = x + 1; y < a.n(); ++y)
        CHECK(p.length(x, y) == pair_merge_oracle(a, x, y));
  }
}

TEST_CASE("frankl-pin sequences") {
  Automaton c4 = fixture("cerny", 4);
  PairSet p = compressible_pairs(c4);

  // every 2-subset once: all six pairs of a 4-state synchronizing automaton
  auto fp2 = max_franklpin(p, 4, 2);
  CHECK(fp2.sequence.size() == 6);
  CHECK(fp2.exact);
  CHECK(franklpin_valid(fp2.sequence, p, 4, 2));

  PairSet none = compressible_pairs(Automaton(4, 1, {0, 1, 2, 3}));
  CHECK(max_franklpin(none, 4, 3).sequence.empty());

  // single compressible pair
  Automaton two(2, 1, {0, 0});
  PairSet single = compressible_pairs(two);
  CHECK(max_franklpin(single, 2, 2).sequence.size() == 1);

  // branch and bound never returns an invalid or shorter-than-greedy sequence
  std::mt19937 rng(77);
  for (int i = 0; i < 40; ++i) {
    Automaton a = oracle::random_automaton(rng, 3 + i % 4, 2);
    PairSet pa = compressible_pairs(a);
    for (int m = 2; m <= a.n(); ++m) {
      auto greedy = max_franklpin(pa, a.n(), m, 0);
      auto bnb = max_franklpin(pa, a.n(), m, 20000);
      CHECK(franklpin_valid(greedy.sequence, pa, a.n(), m));
      CHECK(franklpin_valid(bnb.sequence, pa, a.n(), m));
      CHECK(bnb.sequence.size() >= greedy.sequence.size());
    }
  }
}

TEST_CASE("theorem1 bound arithmetic") {
  CHECK(theorem1_bound(5, 3, 0, 0) == 6);
  CHECK(theorem1_bound(5, 3, 4, 2) == 4);
  // with no pair information the per-m bounds telescope to the classic cubic
  for (int n = 2; n <= 12; ++n) {
    long long sum = 0;
    for (int m = 2; m <= n; ++m) sum += theorem1_bound(n, m, 0, 0);
    CHECK(sum == static_cast<long long>(n) * n * n / 6 - n / 6);
    CHECK(sum == (static_cast<long long>(n) * n * n - n) / 6);
  }
}

TEST_CASE("theorem1 dominates true compressing lengths on small automata") {
  // every compressible m-subset of every binary 3- and 4-state automaton
  for (int n = 3; n <= 4; ++n) {
    const uint64_t tables = 1;
    uint64_t total = 1;
    for (int i = 0; i < 2 * n; ++i) total *= n;
    (void)tables;
    for (uint64_t code = 0; code < total; ++code) {
      uint64_t c = code;
      std::vector<uint8_t> d(2 * n);
      for (auto& v : d) {
        v = static_cast<uint8_t>(c % n);
        c /= n;
      }
      Automaton a(n, 2, d);
      PairSet p = compressible_pairs(a);
      if (p.count == 0) continue;
      for (int m = 2; m <= n; ++m) {
        long long bound =
            theorem1_bound(n, m, max_franklpin(p, n, m).sequence.size(), p.height);
        for (uint64_t s = 1; s < (uint64_t(1) << n); ++s) {
          if (std::popcount(s) != m) continue;
          long long true_len = oracle::oracle_compress_distance(a, s);
          if (true_len >= 0) CHECK(true_len <= bound);
        }
      }
    }
  }
}

TEST_CASE("pin rank step") {
  CHECK(pin_rank_step(0, 6, 6) == 1);
  CHECK(pin_rank_step(10, 10, 3) == 28);
  CHECK_THROWS_AS(pin_rank_step(0, 5, 1), std::invalid_argument);

  // chaining from rank n down to 1 bounds the reset length
  std::mt19937 rng(11);
  int checked = 0;
  while (checked < 50) {
    Automaton a = oracle::random_automaton(rng, 2 + checked % 5, 2);
    auto r = reset_length(a);
    if (!r) continue;
    long long wlen = 0;
    for (int rank = a.n(); rank >= 2; --rank) wlen = pin_rank_step(wlen, a.n(), rank);
    CHECK(wlen >= r->length);
    ++checked;
  }
}

TEST_CASE("dstar: cyclotomic route equals the rational-rank oracle") {
  for (int m = 2; m <= 12; ++m)
    for (int k = 1; k <= m - 1; ++k) {
      int a = dstar(m, k), b = dstar_bruteforce(m, k);
      CHECK(a == b);
      CHECK(a == dstar(m, m - k));  // complement symmetry
      CHECK(b == dstar_bruteforce(m, m - k));
      if (is_prime(m)) CHECK(a == m - 1);
    }
  CHECK(dstar(4, 1) == 3);
  CHECK(dstar(4, 2) == 2);
  CHECK(dstar(4, 3) == 3);
  CHECK(dstar(2, 1) == 1);
  CHECK_THROWS_AS(dstar(4, 0), std::invalid_argument);
  CHECK_THROWS_AS(dstar(4, 4), std::invalid_argument);
}

TEST_CASE("theorem2 bound") {
  CHECK(theorem2_bound(6, 1, 2, 4, dstar_table(4)) == 27);
  // prime cycles: the sum of D* collapses to (m-1)^2 and the bound becomes
  // (m-1)(n+l) + l, which is Steinberg's bound plus m-1
  for (int m : {3, 5, 7})
    for (int n = m; n <= m + 4; ++n)
      for (int l = 0; l <= 3; ++l) {
        long long direct = theorem2_bound(n, 1, l, m, dstar_table(m));
        CHECK(direct == static_cast<long long>(m - 1) * (n + l) + l);
        CHECK(direct == steinberg_eq1_bound(n, l, m) + (m - 1));
      }
  CHECK_THROWS_AS(theorem2_bound(6, 0, 0, 4, dstar_table(4)), std::invalid_argument);
  CHECK_THROWS_AS(theorem2_bound(6, 1, 0, 4, dstar_table(5)), std::invalid_argument);
}

TEST_CASE("corollary3 bound") {
  CHECK(corollary3_bound(10, 2) == 28);
  CHECK(corollary3_bound(2, 2) == 4);
  CHECK_THROWS_AS(corollary3_bound(5, 1), std::invalid_argument);
}

TEST_CASE("steinberg eq1 bound") {
  CHECK(steinberg_eq1_bound(5, 0, 5) == 16);
  CHECK(steinberg_eq1_bound(6, 1, 5) == 25);
  CHECK_THROWS_AS(steinberg_eq1_bound(6, 0, 4), std::invalid_argument);
}

TEST_CASE("one cluster data") {
  for (int n : {4, 5, 6}) {
    auto occ = one_cluster_data(fixture("cerny", n), 0);
    REQUIRE(occ);
    CHECK(occ->m == n);
    CHECK(occ->level == 0);
    CHECK(occ->cycle == StateSet::full(n));
    CHECK(static_cast<int>(occ->cycle_order.size()) == n);
  }
  CHECK_FALSE(one_cluster_data(fixture("kari"), 0));          // two 3-cycles
  CHECK_FALSE(one_cluster_data(fixture("aperiodic3", 6), 0)); // two fixed points
  CHECK_FALSE(one_cluster_data(fixture("cerny", 4), 1));      // three fixed points

  // level counts the tail: a one-cluster map with a 2-chain into a fixed point
  Automaton chain(3, 1, {1, 2, 2});
  auto occ = one_cluster_data(chain, 0);
  REQUIRE(occ);
  CHECK(occ->m == 1);
  CHECK(occ->level == 2);
}

TEST_CASE("one-cluster bounds dominate reset lengths on the cerny series") {
  for (int n = 3; n <= 9; ++n) {
    Automaton a = fixture("cerny", n);
    long long reset = reset_length(a)->length;
    auto occ = one_cluster_data(a, 0);
    REQUIRE(occ);
    CHECK(theorem2_bound(n, 1, occ->level, occ->m, dstar_table(occ->m)) >= reset);
    CHECK(corollary3_bound(n, occ->m) >= reset);
    if (is_prime(occ->m)) CHECK(steinberg_eq1_bound(n, occ->level, occ->m) >= reset);
  }
}

TEST_CASE("bound report") {
  BoundReport none = bound_report(Automaton(4, 1, {0, 1, 2, 3}));
  CHECK_FALSE(none.synchronizing);  // no reset word, so no reset bounds apply
  CHECK(none.items.empty());

  Automaton c5 = fixture("cerny", 5);
  BoundReport rep = bound_report(c5);
  CHECK(rep.synchronizing);
  REQUIRE(rep.best);
  CHECK(*rep.best >= reset_length(c5)->length);
  bool has_thm2 = false, has_eq1 = false, has_thm1 = false, has_pin = false;
  for (auto& item : rep.items) {
    if (item.name == "theorem2") has_thm2 = true;
    if (item.name == "steinberg_eq1") has_eq1 = true;
    if (item.name == "theorem1_sum") has_thm1 = true;
    if (item.name == "pin_chain") has_pin = true;
    CHECK(item.value >= reset_length(c5)->length);
  }
  CHECK(has_thm2);
  CHECK(has_eq1);
  CHECK(has_thm1);
  CHECK(has_pin);
}
