#pragma once
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "synchrolab/automaton.hpp"

namespace synchrolab {

bool is_strongly_connected(const Automaton& a);

// Aperiodicity is decided by enumerating the transition semigroup; campaigns
// must be able to tell "false" from "gave up", so the result is three-valued.
enum class Tri { no, yes, unknown };

struct AperiodicityScan {
  Tri aperiodic = Tri::unknown;
  size_t semigroup_size = 0;  // elements enumerated (full size when decided yes)
  bool truncated = false;
};

AperiodicityScan aperiodicity_scan(const Automaton& a, size_t element_cap = 50'000'000);

inline bool is_aperiodic(const Automaton& a, size_t element_cap = 50'000'000) {
  AperiodicityScan s = aperiodicity_scan(a, element_cap);
  if (s.aperiodic == Tri::unknown)
    throw std::runtime_error("aperiodicity scan exceeded the element cap");
  return s.aperiodic == Tri::yes;
}

// No proper non-empty sub-alphabet synchronizes. Unary synchronizing
// automata pass vacuously. Throws if the automaton is not synchronizing.
bool is_irreducibly_synchronizing(const Automaton& a);

// Loop-free edges form a path on all n states with every edge doubled.
bool is_bidirectional_path(const Automaton& a);

bool is_permutation_automaton(const Automaton& a);

// Member of the closure of the Kari automaton under trivial extensions and
// disjoint unions with permutation automata: exactly one weak component
// whose reduced letter actions match K, permutations everywhere else.
bool is_kari_like(const Automaton& a);

}  // namespace synchrolab
