#pragma once

// Helpers shared by the unit tests and the acceptance binary.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "omega/automata.hpp"
#include "omega/semigroup.hpp"

namespace omega::testing {

/// Calls `visit` for every associative Cayley table on {0..n-1} (labelled,
/// not up to isomorphism).  Returns the number of tables visited.
std::size_t enumerate_semigroups(std::size_t n, const std::function<void(const FiniteSemigroup&)>& visit);

/// Twenty hand-written semigroups of size at most 8, with names.
std::vector<std::pair<std::string, FiniteSemigroup>> handcrafted_semigroups();

/// Checks s <=_L t and s R t implies s H t for all pairs.
bool check_le_lrh(const GreenData& g);

/// For every H-class: if it is closed somewhere, the returned identity makes
/// it a group (identity law and inverses).  When no identity is returned no
/// product of two class members stays in the class.
bool check_h_groups(const FiniteSemigroup& s);

/// Uniform random matrix of the given dimension.
TransitionMatrix random_matrix(std::mt19937_64& rng, std::size_t dim);

/// Random word over `k` letters of length in [0, max_len].
std::vector<Letter> random_word(std::mt19937_64& rng, std::size_t k, std::size_t max_len);

/// Accepting-path search on an infinite Q-dag given as a lasso of matrices:
/// a path from (init, 0) taking infinitely many * edges.
bool qdag_accepting_path(std::size_t dim, State init, const Lasso<TransitionMatrix>& w);

/// Vertices reachable at each position 0..positions-1 from (init, 0).
std::vector<std::vector<bool>> qdag_reachable(std::size_t dim, State init, const Lasso<TransitionMatrix>& w,
                                              std::size_t positions);

/// Random tree-shaped matrix (every column has at most one nonzero entry).
TransitionMatrix random_tree_shaped(std::mt19937_64& rng, std::size_t dim);

/// Random matrix with roughly `density` nonzero entries.
TransitionMatrix random_dag_letter(std::mt19937_64& rng, std::size_t dim, double density = 0.5);

struct CorpusSentence {
  std::string text;
  bool value;
};

/// Twenty closed formulas with hand-checked truth values over (N, <=).
const std::vector<CorpusSentence>& mso_corpus();

}  // namespace omega::testing
