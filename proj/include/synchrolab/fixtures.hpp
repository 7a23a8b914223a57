#pragma once
#include <string>
#include <vector>

#include "synchrolab/automaton.hpp"

namespace synchrolab {

// Named automata used throughout the test campaigns. `n` is required only
// for the parametric series (cerny, aperiodic3).
Automaton fixture(const std::string& name, int n = -1);

std::vector<std::string> fixture_names();

}  // namespace synchrolab
