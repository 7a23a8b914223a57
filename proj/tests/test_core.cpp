#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "synchrolab/automaton.hpp"
#include "synchrolab/canonical.hpp"
#include "synchrolab/fixtures.hpp"

using namespace synchrolab;
namespace oracle = synchrolab::testing;

namespace {

StateSet set_of(std::initializer_list<State> states) {
  StateSet s;
  for (State q : states) s.insert(q);
  return s;
}

}  // namespace

TEST_CASE("corpus line format round trip") {
  Automaton c4 = fixture("cerny", 4);
  CHECK(to_line(c4) == "4 2 : 1 2 3 0 ; 1 1 2 3");
  CHECK(parse_line(to_line(c4)) == c4);

  std::mt19937 rng(20439);
  for (int i = 0; i < 200; ++i) {
    int n = 1 + i % 8, k = i % 4;
    Automaton a = oracle::random_automaton(rng, n, k);
    CHECK(parse_line(to_line(a)) == a);
  }
}

TEST_CASE("line parser rejects malformed input") {
  CHECK_THROWS_AS(parse_line("4 2 : 1 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_line("4 2 : 1 2 3 4 ; 1 1 2 3"), std::invalid_argument);  // target = n
  CHECK_THROWS_AS(parse_line("0 1 :"), std::invalid_argument);
  CHECK_THROWS_AS(parse_line("4 2 1 2 3 0 ; 1 1 2 3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_line("4 2 : 1 2 3 0 ; 1 1 2 3 7"), std::invalid_argument);
  CHECK(parse_line("1 0 :").n() == 1);
}

TEST_CASE("apply on fixtures") {
  Automaton c4 = fixture("cerny", 4);
  CHECK(apply(c4, StateSet::full(4), {1}) == set_of({1, 2, 3}));
  CHECK(apply(c4, set_of({0, 2}), {}) == set_of({0, 2}));

  Automaton g1 = fixture("g1");
  CHECK(apply(g1, StateSet::full(5), {1}) == set_of({0, 1, 3, 4}));
  CHECK_THROWS_AS(apply(g1, StateSet::full(5), {3}), std::invalid_argument);
}

TEST_CASE("action of a word is a monoid homomorphism") {
  std::mt19937 rng(7781);
  for (int i = 0; i < 100; ++i) {
    Automaton a = oracle::random_automaton(rng, 2 + i % 6, 1 + i % 3);
    std::uniform_int_distribution<int> letter(0, a.k() - 1);
    Word u, v;
    for (int j = 0; j < i % 5; ++j) u.push_back(letter(rng));
    for (int j = 0; j < (i / 3) % 5; ++j) v.push_back(letter(rng));
    std::uniform_int_distribution<uint64_t> bits(0, StateSet::full(a.n()).bits);
    StateSet s{bits(rng)};
    Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    CHECK(apply(a, s, uv) == apply(a, apply(a, s, u), v));
    CHECK(apply(a, s, uv).size() <= s.size());
  }
}

TEST_CASE("word_rank") {
  Automaton ident(3, 1, {0, 1, 2});
  CHECK(word_rank(ident, {0, 0}) == 3);
  Automaton c4 = fixture("cerny", 4);
  CHECK(word_rank(c4, {}) == 4);
}

TEST_CASE("restrict_alphabet") {
  Automaton c4 = fixture("cerny", 4);
  Automaton a_only = restrict_alphabet(c4, {0});
  CHECK(to_line(a_only) == "4 1 : 1 2 3 0");
  CHECK(restrict_alphabet(c4, {0, 1}) == c4);
  CHECK_THROWS_AS(restrict_alphabet(c4, {}), std::invalid_argument);

  // dropping letter c of the fig. 1 automaton kills synchronization
  Automaton f = fixture("fig1");
  CHECK_FALSE(oracle::oracle_synchronizing(restrict_alphabet(f, {0, 1})));
}

TEST_CASE("canonical form is constant on isomorphism orbits and idempotent") {
  std::mt19937 rng(555);
  for (int i = 0; i < 60; ++i) {
    Automaton a = oracle::random_automaton(rng, 2 + i % 6, 1 + i % 3);
    Automaton canon = canonical_form(a, false);
    Automaton b = relabel(a, oracle::random_permutation(rng, a.n()));
    CHECK(canonical_form(b, false) == canon);
    CHECK(canonical_form(canon, false) == canon);
    CHECK(canonical_form(relabel(b, oracle::random_permutation(rng, a.n())), true) ==
          canonical_form(a, true));
  }
}

TEST_CASE("canonical form handles letter permutations") {
  Automaton c4 = fixture("cerny", 4);
  std::vector<uint8_t> swapped;
  auto rb = c4.row(1), ra = c4.row(0);
  swapped.insert(swapped.end(), rb.begin(), rb.end());
  swapped.insert(swapped.end(), ra.begin(), ra.end());
  Automaton c4_swapped(4, 2, swapped);
  CHECK(canonical_form(c4_swapped, true) == canonical_form(c4, true));
  CHECK(canonical_form(c4_swapped, false) != canonical_form(c4, false));
}

TEST_CASE("refinement canonical form stays constant on orbits past the cutoff") {
  std::mt19937 rng(808);
  Automaton base = oracle::random_automaton(rng, 9, 2);
  Automaton canon = canonical_form(base, false);
  for (int i = 0; i < 20; ++i)
    CHECK(canonical_form(relabel(base, oracle::random_permutation(rng, 9)), false) == canon);
  Automaton fig = fixture("fig1");
  CHECK(canonical_form(relabel(fig, oracle::random_permutation(rng, 12)), true) ==
        canonical_form(fig, true));
}

TEST_CASE("two-state unary automata fall into three classes") {
  std::set<std::string> canons;
  for (int v0 = 0; v0 < 2; ++v0)
    for (int v1 = 0; v1 < 2; ++v1) {
      Automaton a(2, 1, {uint8_t(v0), uint8_t(v1)});
      auto t = canonical_form(a, false).table();
      canons.insert(std::string(t.begin(), t.end()));
    }
  CHECK(canons.size() == 3);
}

TEST_CASE("automorphisms") {
  Automaton ident(3, 1, {0, 1, 2});
  CHECK(automorphisms(ident).size() == 6);

  CHECK(automorphisms(fixture("cerny", 4)).size() == 1);

  Automaton cycle5(5, 1, {1, 2, 3, 4, 0});
  CHECK(automorphisms(cycle5).size() == 5);
}

TEST_CASE("automorphisms form a group") {
  std::mt19937 rng(99);
  for (int i = 0; i < 25; ++i) {
    Automaton a = oracle::random_automaton(rng, 2 + i % 5, 1 + i % 2);
    auto auts = automorphisms(a);
    std::set<std::vector<State>> group(auts.begin(), auts.end());
    std::vector<State> ident(a.n());
    for (int q = 0; q < a.n(); ++q) ident[q] = q;
    CHECK(group.count(ident) == 1);
    for (const auto& f : auts) {
      std::vector<State> inv(a.n());
      for (int q = 0; q < a.n(); ++q) inv[f[q]] = q;
      CHECK(group.count(inv) == 1);
      for (const auto& g : auts) {
        std::vector<State> fg(a.n());
        for (int q = 0; q < a.n(); ++q) fg[q] = g[f[q]];
        CHECK(group.count(fg) == 1);
      }
    }
  }
}

TEST_CASE("fixture tables") {
  CHECK(to_line(fixture("fig1")) ==
        "12 3 : 0 2 1 4 3 6 5 8 7 10 9 11 ; 1 0 7 7 5 4 6 3 9 8 11 10 ; "
        "0 1 3 2 4 5 6 7 8 9 10 11");
  CHECK(to_line(fixture("g1")) == "5 3 : 2 1 2 3 4 ; 3 1 3 0 4 ; 1 0 2 4 3");
  CHECK(to_line(fixture("g2")) == "6 3 : 2 1 2 3 4 5 ; 3 1 3 0 5 4 ; 1 0 2 4 3 5");
  CHECK(to_line(fixture("g3")) == "6 3 : 1 0 2 4 3 5 ; 3 4 2 4 1 5 ; 0 2 3 2 5 4");
  CHECK(to_line(fixture("g4")) == "6 3 : 3 1 2 3 4 5 ; 4 2 1 4 0 5 ; 1 0 2 3 5 4");
  CHECK(to_line(fixture("kari")) == "6 2 : 1 2 0 4 5 3 ; 0 1 5 3 2 2");
  CHECK(to_line(fixture("kari_prime")) ==
        "9 3 : 1 2 0 4 5 3 6 7 8 ; 0 1 5 3 2 2 7 8 6 ; 1 2 0 4 5 3 7 6 8");
  // a, b act as the identity at n = 2; c sends v1 to v2
  CHECK(to_line(fixture("aperiodic3", 2)) == "2 3 : 0 1 ; 0 1 ; 1 1");
  CHECK(to_line(fixture("aperiodic3", 6)) == "6 3 : 1 2 3 4 4 5 ; 0 0 1 2 3 5 ; 0 1 5 3 4 5");
  CHECK_THROWS_AS(fixture("nope"), std::invalid_argument);
  CHECK_THROWS_AS(fixture("cerny", 1), std::invalid_argument);
  CHECK_THROWS_AS(fixture("aperiodic3"), std::invalid_argument);
}

TEST_CASE("g1 reproduces the published adversarial greedy trace") {
  // {1..5} -b-> {1,2,4,5} -aca-> {3,4,5} -bcbacb-> {1,4} -acbbcbaca-> {3},
  // each step a shortest compressing word for its set (1-based states).
  Automaton g1 = fixture("g1");
  struct Step {
    Word w;
    StateSet next;
  };
  const std::vector<Step> steps = {
      {{1}, set_of({0, 1, 3, 4})},
      {{0, 2, 0}, set_of({2, 3, 4})},
      {{1, 2, 1, 0, 2, 1}, set_of({0, 3})},
      {{0, 2, 1, 1, 2, 1, 0, 2, 0}, set_of({2})},
  };
  StateSet cur = StateSet::full(5);
  long long total = 0;
  for (const auto& step : steps) {
    CHECK(oracle::oracle_compress_distance(g1, cur.bits) ==
          static_cast<long long>(step.w.size()));
    StateSet next = apply(g1, cur, step.w);
    CHECK(next == step.next);
    CHECK(next.size() < cur.size());
    total += static_cast<long long>(step.w.size());
    cur = next;
  }
  CHECK(cur.size() == 1);
  CHECK(total == 19);
}
