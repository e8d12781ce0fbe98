#pragma once

#include <cstdint>
#include <vector>

#include "omega/automata.hpp"

namespace omega {

/// Direct simulation preorder: row q has bit p set iff p simulates q.
/// Empty when the automaton has more than `max_states` states.
std::vector<std::vector<std::uint64_t>> direct_simulation(const BuchiAutomaton& aut, std::size_t max_states = 4096);

/// Backward direct simulation: p simulates q iff every run into q is matched
/// by a run into p; accepting and initial states are respected.
std::vector<std::vector<std::uint64_t>> backward_simulation(const BuchiAutomaton& aut, std::size_t max_states = 4096);

/// Delayed simulation preorder, same layout.  Quotienting by it preserves
/// the language; pruning by it does not.
std::vector<std::vector<std::uint64_t>> delayed_simulation(const BuchiAutomaton& aut, std::size_t max_states = 400);

/// Trims, then repeats until nothing changes: quotient by direct simulation
/// with pruning of transitions to strictly simulated siblings, quotient by
/// backward simulation, quotient by delayed simulation.  Language preserved.
BuchiAutomaton reduce(const BuchiAutomaton& aut);

}  // namespace omega
