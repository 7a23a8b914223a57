#pragma once
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "synchrolab/automaton.hpp"

namespace synchrolab {

// One representative per conjugacy class of transformations of [n],
// each the lexicographically smallest table of its class, in table order.
std::vector<Automaton> enumerate_unary(int n);

// Structural key of a functional graph, constant exactly on conjugacy
// classes (cycle lengths with canonically rotated tree encodings).
std::string functional_graph_key(const Transformation& t);

// All one-letter extensions of `a`, one candidate letter per orbit of
// Aut(a) acting by conjugation. With dedupe_letters, extensions repeating
// an earlier output's canonical form under letter permutations are dropped.
// `prune` (may be null) drops a candidate when it returns true.
void extend_one_letter(const Automaton& a,
                       const std::function<bool(const Automaton&)>& prune,
                       bool dedupe_letters,
                       const std::function<void(const Automaton&)>& emit);

inline constexpr long long kNoUpperBound = std::numeric_limits<long long>::max();

// Upper bound on the reset length of every synchronizing extension of `a`
// (any number of added letters): compressible pairs stay compressible,
// their height only shrinks, Frankl-Pin sequences depend only on the pair
// set, and a one-cluster letter persists. kNoUpperBound when nothing applies.
long long extension_reset_ubound(const Automaton& a, long long franklpin_budget = 0);

struct ClassFilters {
  bool strongly_connected = false;
  bool irreducible = false;

  bool pass(const Automaton& a) const;
};

struct GenerationPlan {
  int n = 1;
  int k = 1;
  long long prune_threshold = 0;  // drop parents whose every extension resets below this
  ClassFilters filters;           // applied to the final stream only
  bool dedupe_letters = true;     // isomorphism includes letter permutations
  int chunk_size = 0;             // parents per final-stage chunk; 0 = auto
};

// Deterministic stream of final-arity automata: unary seeds extended one
// letter at a time, pruned parents dropped, the final stream filtered.
void run_plan(const GenerationPlan& plan, const std::function<void(const Automaton&)>& emit);

// Deterministic partition of the final stage for the parallel driver:
// parents of the last extension stage, already pruned, in stream order.
std::vector<Automaton> plan_parents(const GenerationPlan& plan);

// Expands one block of final-stage parents; candidates still need the
// cross-chunk canonical dedupe done by the consumer (canonical key paired
// with each candidate). For k = 1 plans parents are emitted directly.
struct GenCandidate {
  Automaton automaton;
  std::string canonical_key;
};
std::vector<GenCandidate> expand_final(const GenerationPlan& plan,
                                       const std::vector<Automaton>& parents, size_t begin,
                                       size_t end);

std::string canonical_key(const Automaton& a, bool permute_letters);

}  // namespace synchrolab
