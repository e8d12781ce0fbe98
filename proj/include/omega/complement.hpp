#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "omega/automata.hpp"
#include "omega/semigroup.hpp"

namespace omega {

/// True iff N * M = N, M * M = M and no state q1 has N(qI, q1) != 0 and
/// M(q1, q1) = *.
bool is_rejecting_pair(const BuchiAutomaton& aut, const TransitionMatrix& n, const TransitionMatrix& m);

/// State of the complement automaton.  Matrix components index
/// ComplementResult::semigroup.
struct ComplementState {
  enum class Kind : std::uint8_t { Init, Triple, Pair, Mono };
  Kind kind = Kind::Init;
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  std::uint32_t k = 0;
};

struct ComplementResult {
  BuchiAutomaton automaton;
  /// Semigroup generated by the letter matrices (generator i = letter i).
  MatrixSemigroup semigroup;
  /// Descriptor of every state of `automaton`.
  std::vector<ComplementState> states;

  /// e.g. "Triple(N=*1/01, M=*1/01, K=01/10)".
  std::string describe(State q) const;
  /// "state <i> = <descriptor>" lines, for serialisation comments.
  std::vector<std::string> comments() const;
};

/// Complement via rejecting pairs.  States that cannot reach an accepting
/// cycle are not materialised.  Throws CapExceeded past `cap` states.
ComplementResult complement_buchi_detailed(const BuchiAutomaton& aut, std::size_t cap = kDefaultCap);

BuchiAutomaton complement_buchi(const BuchiAutomaton& aut, std::size_t cap = kDefaultCap);

}  // namespace omega
