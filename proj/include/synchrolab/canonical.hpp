#pragma once
#include <vector>

#include "synchrolab/automaton.hpp"

namespace synchrolab {

// Relabels states: new state sigma[q] plays the role of old state q.
Automaton relabel(const Automaton& a, const std::vector<State>& sigma);

// One representative per isomorphism orbit. For n <= 8 this is the
// lexicographically minimal transition table over all state permutations
// (letter-major flattening, rows sorted when permute_letters); above that a
// partition-refinement ordering is used, which is still constant on orbits.
Automaton canonical_form(const Automaton& a, bool permute_letters);

bool isomorphic(const Automaton& a, const Automaton& b, bool permute_letters);

// All state permutations sigma with sigma(delta(q,x)) = delta(sigma(q),x).
std::vector<std::vector<State>> automorphisms(const Automaton& a);

}  // namespace synchrolab
