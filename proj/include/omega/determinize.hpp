#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "omega/automata.hpp"
#include "omega/semigroup.hpp"

namespace omega {

// ---------------------------------------------------------------------------
// Q-schemes
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kNoId = static_cast<std::uint32_t>(-1);

/// Finite tree with Q-labelled nodes and identifier-tagged edges.  Node 0 is
/// the root; nodes are stored in canonical preorder with children sorted by
/// the smallest leaf label below them.  The edge of node i (i > 0) joins it
/// to its parent.
class QScheme {
 public:
  struct Node {
    State label = 0;
    std::uint32_t parent = kNoId;
    std::uint32_t id = kNoId;  // identifier of the edge to the parent
    bool accepting = false;    // mark of the edge to the parent
    std::vector<std::uint32_t> children;
  };

  QScheme() = default;
  QScheme(std::size_t state_count, std::vector<Node> nodes);

  std::size_t state_count() const noexcept { return state_count_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(std::uint32_t i) const { return nodes_.at(i); }

  /// Leaf labels in canonical order.
  std::vector<State> leaves() const;

  /// Shape, identifiers, marks and leaf labels.  Internal labels are ignored.
  friend bool operator==(const QScheme& a, const QScheme& b) { return a.key_ == b.key_; }
  std::size_t hash() const noexcept { return hash_; }

  /// Empty string if all invariants hold, else a description of the first
  /// violation: unique leaf labels, distinct identifiers in 0..2|Q|, root
  /// not a leaf, branching non-root internal nodes, at most 2|Q| nodes.
  std::string audit() const;

  /// Nested text form, e.g. "q0[0:q0]" or "q0[2*:q2[0:q2 4*:q3] 3:q4]".
  std::string to_string() const;
  /// Graphviz rendering.
  std::string to_dot(const std::string& name = "scheme") const;

  /// Builds a canonical scheme from an unordered tree given by parent links.
  /// `nodes[0]` must be the root; `children` fields are ignored.
  static QScheme canonical(std::size_t state_count, const std::vector<Node>& nodes);

 private:
  void finish();

  std::size_t state_count_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> key_;
  std::size_t hash_ = 0;
};

struct QSchemeHash {
  std::size_t operator()(const QScheme& s) const noexcept { return s.hash(); }
};

struct SchemeStepEvents {
  std::vector<std::uint32_t> deleted;    // sorted
  std::vector<std::uint32_t> refreshed;  // sorted
  friend bool operator==(const SchemeStepEvents&, const SchemeStepEvents&) = default;
};

/// Root and one leaf, both labelled `initial`, joined by edge 0 (non-accepting).
QScheme qscheme_initial(std::size_t state_count, State initial);

/// One transition on a tree-shaped letter.  Returns nothing when every branch
/// dies.  Throws ValidationError if `m` is not tree-shaped or has the wrong
/// dimension.
std::optional<std::pair<QScheme, SchemeStepEvents>> qscheme_step(const QScheme& s, const TransitionMatrix& m);

// ---------------------------------------------------------------------------
// Lazy machines
// ---------------------------------------------------------------------------

/// Deterministic transition-based Rabin machine over tree-shaped letters.
/// Pair i: E_i = steps deleting identifier i, F_i = steps refreshing it.
class QSchemeAutomaton {
 public:
  using State = QScheme;
  using Letter = TransitionMatrix;
  using StateHash = QSchemeHash;

  QSchemeAutomaton(std::size_t state_count, omega::State initial);

  State initial() const { return qscheme_initial(n_, q0_); }
  std::optional<MachineStep<State>> step(const State& s, const Letter& m) const;
  std::size_t pair_count() const { return 2 * n_ + 1; }
  bool state_based() const { return false; }
  Marks state_marks(const State&) const { return {}; }

 private:
  std::size_t n_;
  omega::State q0_;
};

/// Reads a word over the automaton's alphabet, keeps the set of reachable
/// states, and outputs M_a with the rows of unreachable states cleared.
class SubsetTransducer {
 public:
  using State = std::uint64_t;  // bit set of automaton states
  using InLetter = Letter;
  using OutLetter = TransitionMatrix;
  using StateHash = std::hash<std::uint64_t>;

  explicit SubsetTransducer(const BuchiAutomaton& aut);

  State initial() const { return State{1} << initial_; }
  std::pair<TransitionMatrix, State> step(State reach, Letter a) const;

 private:
  omega::State initial_;
  std::vector<TransitionMatrix> letters_;
};

/// Rank class of every state (0 is most preferred); kUnranked for states that
/// are not currently reachable.  Classes are dense and may be shared.
using RankingState = std::vector<std::uint32_t>;
inline constexpr std::uint32_t kUnranked = static_cast<std::uint32_t>(-1);

struct RankingHash {
  std::size_t operator()(const RankingState& r) const noexcept;
};

/// Keeps, for every reachable target, the incoming edge from the best-ranked
/// source (ties: * before 1, then the smaller source index).  Targets are
/// re-ranked by (source rank, * first); targets with equal keys share a class.
/// Sources outside the ranking are ignored.
class TreeShapingTransducer {
 public:
  using State = RankingState;
  using InLetter = TransitionMatrix;
  using OutLetter = TransitionMatrix;
  using StateHash = RankingHash;

  TreeShapingTransducer(std::size_t state_count, omega::State initial) : n_(state_count), q0_(initial) {}

  State initial() const;
  std::pair<TransitionMatrix, State> step(const State& ranking, const TransitionMatrix& m) const;

 private:
  std::size_t n_;
  omega::State q0_;
};

// ---------------------------------------------------------------------------
// Explicit automata
// ---------------------------------------------------------------------------

/// Every tree-shaped matrix of the given dimension, named by compact().
/// (2n+1)^n letters.
std::vector<TransitionMatrix> tree_shaped_letters(std::size_t state_count);

/// The Q-scheme automaton materialised over all tree-shaped letters.
Materialized<QScheme> qscheme_rabin_automaton(std::size_t state_count, State initial, std::size_t cap = kDefaultCap);

using DeterminizeState = std::pair<std::pair<QScheme, RankingState>, std::uint64_t>;

/// Deterministic transition-based Rabin automaton equivalent to `aut`: the
/// Q-scheme automaton composed with the tree-shaping and subset transducers.
/// Supports up to 31 states.
Materialized<DeterminizeState> determinize_detailed(const BuchiAutomaton& aut, std::size_t cap = kDefaultCap);

RabinAutomaton determinize(const BuchiAutomaton& aut, std::size_t cap = kDefaultCap);

/// One step of the pipeline on a concrete word.
struct TraceStep {
  std::size_t position = 0;
  Letter letter = 0;
  TransitionMatrix dag_letter;   // subset transducer output
  TransitionMatrix tree_letter;  // tree-shaping output
  QScheme scheme;                // scheme after the step
  SchemeStepEvents events;
};

/// Runs the pipeline along `w` for its stem plus `rounds` periods.  Stops early
/// if the run dies.
std::vector<TraceStep> determinize_trace(const BuchiAutomaton& aut, const LassoWord& w, std::size_t rounds = 2);

}  // namespace omega
