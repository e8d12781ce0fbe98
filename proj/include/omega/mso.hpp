#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omega/automata.hpp"

namespace omega::mso {

// ---------------------------------------------------------------------------
// Surface syntax
// ---------------------------------------------------------------------------

enum class Op : std::uint8_t {
  Le,       // x <= y
  In,       // x in X
  Sing,     // sing(X)
  MinLe,    // min(X) <= min(Y)
  Sub,      // sub(X, Y): X is a subset of Y
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Ex1,
  All1,
  Ex2,
  All2,
};

/// MSO formula over (N, <=).  Atoms use `a` and `b` as operands; quantifiers
/// bind `a` in `kids[0]`.
struct Formula {
  Op op = Op::Sing;
  std::string a;
  std::string b;
  std::vector<Formula> kids;

  friend bool operator==(const Formula&, const Formula&) = default;
};

Formula le(std::string x, std::string y);
Formula in(std::string x, std::string set);
Formula sing(std::string set);
Formula min_le(std::string x, std::string y);
Formula sub(std::string x, std::string y);
Formula truth(bool value);
Formula negation(Formula f);
Formula conj(Formula l, Formula r);
Formula disj(Formula l, Formula r);
Formula implies(Formula l, Formula r);
/// Left-nested; an empty list gives true (conj) or false (disj).
Formula conj(std::vector<Formula> fs);
Formula disj(std::vector<Formula> fs);
Formula ex1(std::string x, Formula f);
Formula all1(std::string x, Formula f);
Formula ex2(std::string x, Formula f);
Formula all2(std::string x, Formula f);

enum class VarKind : std::uint8_t { First, Second };

struct Variable {
  std::string name;
  VarKind kind;
  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Free variables in order of first occurrence.  Throws ValidationError when a
/// name is used both as a first-order and a second-order variable in one scope.
std::vector<Variable> free_variables(const Formula& f);

/// Concrete syntax:
///   f ::= ex1 x[, y...]. f | all1 ... | ex2 X. f | all2 X. f
///       | f -> f | f '|' f | f & f | !f | (f)
///       | x <= y | x >= y | x in X | sing(X) | sub(X, Y) | min(X) <= min(Y)
///       | true | false
/// `#` starts a comment.  Precedence: ! > & > | > ->; quantifiers extend to
/// the right.  Throws ParseError with a position.
Formula parse(std::string_view text);

/// Parses back to an equal formula.
std::string to_string(const Formula& f);

/// Negation normal form: implications expanded, negations only on atoms.
Formula nnf(const Formula& f);

/// Alternation depth of nnf(f): the largest number of alternating blocks of
/// and/forall and or/exists along a branch.  Quantifier-free subformulas count
/// as no block; a quantifier-free formula has depth 1.
std::size_t depth(const Formula& f);

// ---------------------------------------------------------------------------
// Core fragment
// ---------------------------------------------------------------------------

enum class Atom : std::uint8_t { Sing, MinLe, Sub };

struct Literal {
  Atom atom = Atom::Sing;
  bool negated = false;
  std::string x;
  std::string y;  // unused for Sing
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// psi ::= forall X. and_i phi_i | literal,  phi ::= exists X. or_i psi_i | literal.
/// Children of a Forall node are Exists nodes or literals and vice versa.
/// Blocks may be empty.  Only set variables occur.
struct CoreFormula {
  enum class Kind : std::uint8_t { Literal, Forall, Exists };
  Kind kind = Kind::Literal;
  Literal literal;
  std::vector<std::string> block;
  std::vector<CoreFormula> children;

  friend bool operator==(const CoreFormula&, const CoreFormula&) = default;
};

/// First-order variables become set variables relativised to sing; x <= y
/// becomes min(X) <= min(Y) and x in X becomes sub(X_x, X).  Bound variables
/// are renamed apart from each other and from the free ones.
CoreFormula normalize(const Formula& f);

/// Forall nodes print as a universal block over a conjunction, Exists nodes
/// as an existential block over a disjunction.  Empty conjunctions and
/// disjunctions become true and false.
Formula to_formula(const CoreFormula& f);

/// Free set variables in order of first occurrence.
std::vector<std::string> free_variables(const CoreFormula& f);

bool is_core_shaped(const CoreFormula& f);

// ---------------------------------------------------------------------------
// Automata constructions over valuation alphabets {0,1}^n
// ---------------------------------------------------------------------------

/// One track: initial state loops on 0, reads 1 into the accepting state,
/// which loops on 0.
BuchiAutomaton sing_automaton();
/// Tracks (X, Y): initial accepting state loops on 00 and moves on 10 and 11
/// to an accepting sink.
BuchiAutomaton min_automaton();
/// Tracks (X, Y): one accepting state looping on every letter except 10.
BuchiAutomaton sub_automaton();

/// The automaton of an atom over its own tracks, complemented if negated.
BuchiAutomaton atom_automaton(Atom atom, bool negated = false, std::size_t cap = kDefaultCap);

/// Weakening to `tracks` tracks: track i of `aut` reads track pi[i] of the
/// new alphabet.  A transition on b exists iff `aut` has it on pi(b).
BuchiAutomaton weaken(const BuchiAutomaton& aut, std::size_t tracks, const std::vector<std::size_t>& pi);

/// Fresh initial state copying the initial transitions of every component.
BuchiAutomaton union_automaton(const std::vector<BuchiAutomaton>& parts);

/// Product automaton for the intersection; a phase bit alternates between
/// waiting for accepting states of `a` and of `b`.
BuchiAutomaton intersect_automaton(const BuchiAutomaton& a, const BuchiAutomaton& b, std::size_t cap = kDefaultCap);

/// Existentially erases the last `m` tracks.
BuchiAutomaton project(const BuchiAutomaton& aut, std::size_t m);

/// A word beta over `m` tracks such that `aut` accepts alpha (x) beta, built
/// from an accepting run of project(aut, m) by picking the smallest letter at
/// every step.  Nothing if project(aut, m) rejects alpha.
std::optional<LassoWord> project_witness(const BuchiAutomaton& aut, std::size_t m, const LassoWord& alpha);

/// Track-wise pairing of valuations over n and m tracks.
LassoWord juxtapose(const LassoWord& w1, std::size_t n, const LassoWord& w2, std::size_t m);

/// Tracks [first, first + count) of a valuation over `tracks` tracks.
LassoWord select_tracks(const LassoWord& w, std::size_t tracks, std::size_t first, std::size_t count);

struct CompileOptions {
  std::size_t cap = kDefaultCap;
  /// Simulation-based reduction after every construction.
  bool reduce = true;
};

struct CompileStats {
  std::size_t complementations = 0;
  std::size_t largest_complement_input = 0;
  std::size_t largest_automaton = 0;
};

struct Compiled {
  BuchiAutomaton automaton;
  /// Variable read by each track, in track order.
  std::vector<std::string> tracks;
  CompileStats stats;
};

/// Automaton accepting exactly the valuations of free_variables(f) that
/// satisfy f.  Exists blocks: union then projection of all block tracks at
/// once.  Forall blocks: complement of the projected union of complements.
/// Nodes with an empty block are plain conjunctions or disjunctions: product
/// or union of the children, with negations pushed to the children.
Compiled compile(const CoreFormula& f, const CompileOptions& options = {});

/// Same, weakened to the given track order, which must cover the free
/// variables.
Compiled compile(const CoreFormula& f, const std::vector<std::string>& tracks, const CompileOptions& options = {});

struct Decision {
  bool value = false;
  Compiled compiled;
  /// For a true sentence whose core form starts with an existential block:
  /// the block variables and a valuation of them satisfying the body.
  std::vector<std::string> witness_variables;
  std::optional<LassoWord> witness;
};

/// Throws ValidationError if `f` has free variables.
Decision decide(const Formula& f, const CompileOptions& options = {});
bool decide_sentence(const Formula& f, const CompileOptions& options = {});

/// For every word over {0..k} the largest letter occurring infinitely often
/// exists, stated over a partition X_0..X_k of the positions.
Formula psi_k(std::size_t k);

}  // namespace omega::mso
