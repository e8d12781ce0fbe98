#pragma once

#include <vector>

#include "omega/automata.hpp"
#include "omega/semigroup.hpp"

namespace omega {

/// Image of a finite word in [Q]; the empty word maps to the identity.
TransitionMatrix word_image(const BuchiAutomaton& aut, const std::vector<Letter>& word);

/// Cut of a lasso into a prefix of type N followed by segments of type M,
/// with N * M = N and M * M = M.  Cuts sit at stem_len + i * period_len.
struct RamseyFactorisation {
  TransitionMatrix prefix_type;  // N
  TransitionMatrix loop_type;    // M
  std::size_t stem_len = 0;
  std::size_t period_len = 0;
};

/// M is the idempotent power h(v)^k of the period image, N = h(u) * M, and
/// segments have length k * |v| starting at |u|.
RamseyFactorisation ramsey_factorize_lasso(const BuchiAutomaton& aut, const LassoWord& w);

}  // namespace omega
