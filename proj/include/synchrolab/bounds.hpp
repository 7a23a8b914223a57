#pragma once
#include <optional>
#include <string>
#include <vector>

#include "synchrolab/automaton.hpp"

namespace synchrolab {

// All unordered compressible pairs with their shortest merge lengths.
struct PairSet {
  int n = 0;
  std::vector<int> merge_len;  // triangular index; -1 = incompressible
  int count = 0;               // compressible pairs
  int height = 0;              // h(P): max shortest merge length

  static size_t index(int n, State x, State y) {
    if (x > y) std::swap(x, y);
    return size_t(x) * n - size_t(x) * (x + 1) / 2 + (y - x - 1);
  }
  int length(State x, State y) const { return merge_len[index(n, x, y)]; }
  bool contains(State x, State y) const { return length(x, y) >= 0; }
};

PairSet compressible_pairs(const Automaton& a);

// One entry of an m-subset Frankl-Pin sequence: a marked pair inside an
// m-subset. Condition two forbids the pair of a later entry from lying
// inside an earlier subset.
struct FranklPinEntry {
  StateSet subset;
  State x, y;
};

struct FranklPinResult {
  std::vector<FranklPinEntry> sequence;
  bool exact = false;  // true when branch and bound finished within budget
};

// Longest m-subset Frankl-Pin sequence over P found within the node budget
// (budget 0: greedy construction only). Any returned sequence is valid, so
// its length can stand in for p(P) without breaking Theorem 1.
FranklPinResult max_franklpin(const PairSet& p, int n, int m, long long budget = 0);

bool franklpin_valid(const std::vector<FranklPinEntry>& seq, const PairSet& p, int n, int m);

// binom(n-m+2, 2) - p + h
long long theorem1_bound(int n, int m, long long p, long long h);

// 2|w| + n - r + 1
long long pin_rank_step(long long wlen, int n, int r);

bool is_prime(int m);

// D*(m, k) over subsets of cycle positions: min of m - q_S + dim W_S.
// The primary route tests divisibility of the scaled deviation polynomial by
// each cyclotomic factor of x^m - 1; the brute-force route computes the
// rational rank of the circulant of shifts directly.
int dstar(int m, int k);
int dstar_bruteforce(int m, int k);

struct DStarTable {
  int m = 0;
  std::vector<int> values;  // values[k-1] = D*(m, k), k = 1..m-1
  int operator()(int k) const { return values[k - 1]; }
  long long sum() const;
};
DStarTable dstar_table(int m);  // cached; cyclotomic route

long long theorem2_bound(int n, int s, int l, int m, const DStarTable& table);
long long corollary3_bound(int n, int m);
long long steinberg_eq1_bound(int n, int l, int m);  // m must be prime

// Cycle, cycle length and level of a one-cluster transformation.
struct OneClusterData {
  Letter letter = -1;  // -1 when derived from a word
  StateSet cycle;
  int m = 0;
  int level = 0;
  std::vector<State> cycle_order;
};

std::optional<OneClusterData> one_cluster_of(const Transformation& t);
std::optional<OneClusterData> one_cluster_data(const Automaton& a, Letter x);

struct BoundItem {
  std::string name;
  std::vector<std::pair<std::string, long long>> inputs;
  long long value = 0;
};

struct BoundReport {
  bool synchronizing = false;
  std::vector<BoundItem> items;
  std::optional<long long> best;
};

// Evaluates every applicable bound for one automaton. Words inducing
// one-cluster transformations are searched up to word_cap letters.
BoundReport bound_report(const Automaton& a, int word_cap = 3);

}  // namespace synchrolab
