#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "omega/error.hpp"
#include "omega/semigroup.hpp"

namespace omega {

using Letter = std::uint32_t;
using State = std::uint32_t;
inline constexpr State kNoState = static_cast<State>(-1);

inline std::size_t hash_combine(std::size_t seed, std::size_t v) noexcept {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

/// Ordered list of distinct letter names.  Letters are referred to by index.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  /// The 2^n bit-vector letters of valuations over n tracks.  Letter names
  /// are n-character strings of 0/1, track 0 first; n = 0 gives the single
  /// letter "_".  Letter index has track 0 as most significant bit.
  static Alphabet valuations(std::size_t tracks);

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& name(Letter l) const { return symbols_.at(l); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  std::optional<Letter> find(std::string_view name) const;
  /// Throws ValidationError for an unknown name.
  Letter index(std::string_view name) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Letter> index_;
};

/// Ultimately periodic word stem . period^omega.
template <class L>
struct Lasso {
  std::vector<L> stem;
  std::vector<L> period;

  std::size_t length() const noexcept { return stem.size() + period.size(); }
  const L& at(std::size_t pos) const {
    return pos < stem.size() ? stem[pos] : period[(pos - stem.size()) % period.size()];
  }
  /// Position following `pos` in the finite presentation (wraps into the period).
  std::size_t next(std::size_t pos) const noexcept {
    return pos + 1 < length() ? pos + 1 : stem.size();
  }
  friend bool operator==(const Lasso& a, const Lasso& b) {
    return a.stem == b.stem && a.period == b.period;
  }
};

using LassoWord = Lasso<Letter>;

/// Same infinite word, presented with stem `extra_stem` letters longer and the
/// period repeated `period_factor` times.
template <class L>
Lasso<L> unroll(const Lasso<L>& w, std::size_t extra_stem, std::size_t period_factor = 1) {
  Lasso<L> out;
  const std::size_t stem_len = w.stem.size() + extra_stem;
  for (std::size_t i = 0; i < stem_len; ++i) out.stem.push_back(w.at(i));
  for (std::size_t i = 0; i < w.period.size() * period_factor; ++i) out.period.push_back(w.at(stem_len + i));
  return out;
}

// ---------------------------------------------------------------------------
// Büchi automata
// ---------------------------------------------------------------------------

struct Transition {
  State src;
  Letter letter;
  State dst;
  friend bool operator==(const Transition&, const Transition&) = default;
};

class BuchiAutomaton {
 public:
  BuchiAutomaton() = default;
  BuchiAutomaton(Alphabet alphabet, std::size_t states, State initial = 0);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t state_count() const noexcept { return accepting_.size(); }
  State initial() const noexcept { return initial_; }
  void set_initial(State q);

  State add_state(bool accepting = false);
  bool accepting(State q) const { return accepting_.at(q); }
  void set_accepting(State q, bool value = true);
  std::vector<State> accepting_states() const;

  /// Idempotent; throws ValidationError on out-of-range endpoints.
  void add_transition(State src, Letter a, State dst);
  bool has_transition(State src, Letter a, State dst) const;
  /// Sorted successor list.
  const std::vector<State>& successors(State q, Letter a) const { return succ_[q * alphabet_.size() + a]; }
  std::size_t transition_count() const noexcept { return transition_count_; }
  /// All transitions ordered by (src, letter, dst).
  std::vector<Transition> transitions() const;

  friend bool operator==(const BuchiAutomaton& a, const BuchiAutomaton& b) {
    return a.alphabet_ == b.alphabet_ && a.initial_ == b.initial_ && a.accepting_ == b.accepting_ &&
           a.succ_ == b.succ_;
  }

 private:
  Alphabet alphabet_;
  State initial_ = 0;
  std::vector<bool> accepting_;
  std::vector<std::vector<State>> succ_;
  std::size_t transition_count_ = 0;
};

/// M_a: entry (q,q') is 0 without a transition, * if q is accepting, 1 otherwise.
TransitionMatrix transition_matrix_of_letter(const BuchiAutomaton& aut, Letter a);

/// Checks every letter of `w` is below the alphabet size.
void validate_lasso(const LassoWord& w, const Alphabet& alphabet);

/// Product-graph cycle search over (state, lasso position).
bool buchi_accepts_lasso(const BuchiAutomaton& aut, const LassoWord& w);

/// A lasso accepted by `aut`, or nothing if the language is empty.
std::optional<LassoWord> buchi_emptiness(const BuchiAutomaton& aut);

/// Restriction to states that are reachable and can reach an accepting cycle.
/// The initial state is always kept.  Language preserved.
BuchiAutomaton trim(const BuchiAutomaton& aut);

// ---------------------------------------------------------------------------
// Deterministic machines with Rabin acceptance
// ---------------------------------------------------------------------------

/// Membership of one step (or one state) in the E and F sets of at most 64
/// Rabin pairs, as bit masks.
struct Marks {
  std::uint64_t e = 0;
  std::uint64_t f = 0;
  Marks& operator|=(const Marks& o) noexcept {
    e |= o.e;
    f |= o.f;
    return *this;
  }
  friend bool operator==(const Marks&, const Marks&) = default;
};

inline constexpr std::size_t kMaxPairs = 64;

/// Rabin condition on the set of marks seen infinitely often.
inline bool rabin_condition(const Marks& inf) noexcept { return (inf.f & ~inf.e) != 0; }

template <class S>
struct MachineStep {
  S next;
  Marks marks;
};

// A deterministic machine M provides
//   using State; using Letter; using StateHash;
//   State initial() const;
//   std::optional<MachineStep<State>> step(const State&, const Letter&) const;
//   std::size_t pair_count() const;
//   bool state_based() const;
//   Marks state_marks(const State&) const;     // used when state_based()
// For state-based machines step() reports the marks of the target state.
//
// A letter transducer T provides
//   using State; using InLetter; using OutLetter; using StateHash;
//   State initial() const;
//   std::pair<OutLetter, State> step(const State&, const InLetter&) const;

/// Runs a deterministic machine on a lasso; falling off a partial map rejects.
template <class M>
bool accepts_lasso(const M& m, const Lasso<typename M::Letter>& w) {
  using S = typename M::State;
  if (w.period.empty()) throw ValidationError("lasso period must be nonempty");
  S s = m.initial();
  for (const auto& a : w.stem) {
    auto st = m.step(s, a);
    if (!st) return false;
    s = std::move(st->next);
  }
  std::unordered_map<S, std::size_t, typename M::StateHash> seen;
  std::vector<Marks> round_marks;
  for (;;) {
    auto [it, fresh] = seen.try_emplace(s, round_marks.size());
    if (!fresh) {
      Marks inf;
      for (std::size_t r = it->second; r < round_marks.size(); ++r) inf |= round_marks[r];
      return rabin_condition(inf);
    }
    Marks acc;
    for (const auto& a : w.period) {
      auto st = m.step(s, a);
      if (!st) return false;
      acc |= st->marks;
      s = std::move(st->next);
    }
    round_marks.push_back(acc);
  }
}

/// Output of a letter transducer on a lasso, as a lasso.
template <class T>
Lasso<typename T::OutLetter> transducer_output(const T& t, const Lasso<typename T::InLetter>& w) {
  using S = typename T::State;
  if (w.period.empty()) throw ValidationError("lasso period must be nonempty");
  Lasso<typename T::OutLetter> out;
  S s = t.initial();
  for (const auto& a : w.stem) {
    auto [o, n] = t.step(s, a);
    out.stem.push_back(std::move(o));
    s = std::move(n);
  }
  std::unordered_map<S, std::size_t, typename T::StateHash> seen;
  std::vector<typename T::OutLetter> rounds;
  for (std::size_t round = 0;; ++round) {
    auto [it, fresh] = seen.try_emplace(s, round);
    if (!fresh) {
      const std::size_t cut = it->second * w.period.size();
      out.stem.insert(out.stem.end(), rounds.begin(), rounds.begin() + static_cast<std::ptrdiff_t>(cut));
      out.period.assign(rounds.begin() + static_cast<std::ptrdiff_t>(cut), rounds.end());
      return out;
    }
    for (const auto& a : w.period) {
      auto [o, n] = t.step(s, a);
      rounds.push_back(std::move(o));
      s = std::move(n);
    }
  }
}

struct PairHash {
  template <class A, class B, class HA = std::hash<A>, class HB = std::hash<B>>
  std::size_t operator()(const std::pair<A, B>& p) const noexcept {
    return hash_combine(HA{}(p.first), HB{}(p.second));
  }
};

/// The product A o T: reads T's input, feeds T's output to A.  Acceptance is
/// taken from A.
template <class A, class T>
class Composed {
 public:
  using State = std::pair<typename A::State, typename T::State>;
  using Letter = typename T::InLetter;
  struct StateHash {
    std::size_t operator()(const State& s) const noexcept {
      return hash_combine(typename A::StateHash{}(s.first), typename T::StateHash{}(s.second));
    }
  };

  Composed(A a, T t) : a_(std::move(a)), t_(std::move(t)) {}

  State initial() const { return {a_.initial(), t_.initial()}; }
  std::optional<MachineStep<State>> step(const State& s, const Letter& l) const {
    auto [out, tn] = t_.step(s.second, l);
    auto st = a_.step(s.first, out);
    if (!st) return std::nullopt;
    return MachineStep<State>{State{std::move(st->next), std::move(tn)}, st->marks};
  }
  std::size_t pair_count() const { return a_.pair_count(); }
  bool state_based() const { return a_.state_based(); }
  Marks state_marks(const State& s) const { return a_.state_marks(s.first); }

  const A& automaton() const noexcept { return a_; }
  const T& transducer() const noexcept { return t_; }

 private:
  A a_;
  T t_;
};

template <class A, class T>
Composed<A, T> compose(A a, T t) {
  return Composed<A, T>(std::move(a), std::move(t));
}

// ---------------------------------------------------------------------------
// Explicit Rabin automata
// ---------------------------------------------------------------------------

enum class AcceptanceBase { State, Transition };

/// E and F sets of one pair.  Entries are state indices, or transition slots
/// (src * |alphabet| + letter) for transition-based acceptance.
struct RabinPair {
  std::vector<std::uint32_t> e;
  std::vector<std::uint32_t> f;
  friend bool operator==(const RabinPair&, const RabinPair&) = default;
};

/// Deterministic, possibly partial, Rabin automaton with at most 64 pairs.
class RabinAutomaton {
 public:
  RabinAutomaton() = default;
  RabinAutomaton(Alphabet alphabet, std::size_t states, State initial, AcceptanceBase base);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t state_count() const noexcept { return states_; }
  State initial() const noexcept { return initial_; }
  AcceptanceBase base() const noexcept { return base_; }

  State add_state();
  /// Throws ValidationError if (src, a) already has a different successor.
  void set_transition(State src, Letter a, State dst);
  State next(State src, Letter a) const { return delta_[slot(src, a)]; }
  std::uint32_t slot(State src, Letter a) const noexcept {
    return static_cast<std::uint32_t>(src * alphabet_.size() + a);
  }
  std::size_t transition_count() const;

  std::size_t add_pair(RabinPair pair);
  const std::vector<RabinPair>& pairs() const noexcept { return pairs_; }
  /// Marks of a state (state-based) or a slot (transition-based).
  const Marks& marks(std::uint32_t index) const { return marks_[index]; }

  friend bool operator==(const RabinAutomaton& a, const RabinAutomaton& b);

 private:
  void validate_member(std::uint32_t index) const;

  Alphabet alphabet_;
  std::size_t states_ = 0;
  State initial_ = 0;
  AcceptanceBase base_ = AcceptanceBase::State;
  std::vector<State> delta_;
  std::vector<RabinPair> pairs_;
  std::vector<Marks> marks_;
};

/// Machine view of an explicit Rabin automaton.
class RabinView {
 public:
  using State = omega::State;
  using Letter = omega::Letter;
  using StateHash = std::hash<State>;

  explicit RabinView(const RabinAutomaton& a) : a_(&a) {}
  State initial() const { return a_->initial(); }
  std::optional<MachineStep<State>> step(State s, Letter l) const {
    const State n = a_->next(s, l);
    if (n == kNoState) return std::nullopt;
    const Marks& m = a_->base() == AcceptanceBase::State ? a_->marks(n) : a_->marks(a_->slot(s, l));
    return MachineStep<State>{n, m};
  }
  std::size_t pair_count() const { return a_->pairs().size(); }
  bool state_based() const { return a_->base() == AcceptanceBase::State; }
  Marks state_marks(State s) const { return a_->marks(s); }

 private:
  const RabinAutomaton* a_;
};

bool rabin_accepts_lasso(const RabinAutomaton& aut, const LassoWord& w);

template <class S>
struct Materialized {
  RabinAutomaton automaton;
  std::vector<S> states;
};

/// Explores the states of a lazy deterministic machine reachable over
/// `letters` and returns them as an explicit Rabin automaton over `alphabet`
/// (letter i of `alphabet` stands for letters[i]).
template <class M>
Materialized<typename M::State> materialize(const M& m, const Alphabet& alphabet,
                                            const std::vector<typename M::Letter>& letters,
                                            std::size_t cap = kDefaultCap,
                                            const std::string& construction = "materialize") {
  using S = typename M::State;
  if (letters.size() != alphabet.size()) throw ValidationError("materialize: letter table size mismatch");
  const std::size_t npairs = m.pair_count();
  if (npairs > kMaxPairs) throw ValidationError("more than 64 Rabin pairs are not supported");
  const bool state_based = m.state_based();

  Materialized<S> out;
  out.automaton = RabinAutomaton(alphabet, 0, 0, state_based ? AcceptanceBase::State : AcceptanceBase::Transition);
  std::unordered_map<S, State, typename M::StateHash> index;
  std::vector<Marks> marks;  // per state or per slot
  auto intern = [&](S s) -> State {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    if (out.states.size() >= cap) throw CapExceeded(construction, cap);
    const State id = out.automaton.add_state();
    index.emplace(s, id);
    if (state_based) marks.push_back(m.state_marks(s));
    out.states.push_back(std::move(s));
    return id;
  };
  intern(m.initial());
  for (State cur = 0; cur < out.states.size(); ++cur) {
    for (Letter a = 0; a < letters.size(); ++a) {
      auto st = m.step(out.states[cur], letters[a]);
      if (!st) continue;
      const State dst = intern(std::move(st->next));
      out.automaton.set_transition(cur, a, dst);
      if (!state_based) {
        const std::uint32_t slot = out.automaton.slot(cur, a);
        if (marks.size() <= slot) marks.resize(slot + 1);
        marks[slot] = st->marks;
      }
    }
  }
  for (std::size_t i = 0; i < npairs; ++i) {
    RabinPair p;
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint32_t x = 0; x < marks.size(); ++x) {
      if (marks[x].e & bit) p.e.push_back(x);
      if (marks[x].f & bit) p.f.push_back(x);
    }
    out.automaton.add_pair(std::move(p));
  }
  return out;
}

/// Equivalent automaton with state-based acceptance (product with the last
/// transition taken).
RabinAutomaton to_state_based(const RabinAutomaton& aut);

// ---------------------------------------------------------------------------
// Transducers
// ---------------------------------------------------------------------------

/// Deterministic letter-to-letter transducer with a total step map.
class Transducer {
 public:
  Transducer() = default;
  Transducer(Alphabet input, Alphabet output, std::size_t states, State initial = 0);

  static Transducer identity(const Alphabet& alphabet);

  const Alphabet& input() const noexcept { return input_; }
  const Alphabet& output() const noexcept { return output_; }
  std::size_t state_count() const noexcept { return states_; }
  State initial() const noexcept { return initial_; }

  void set_step(State src, Letter in, Letter out, State dst);
  /// Throws ValidationError if the map is not total.
  void validate() const;
  std::pair<Letter, State> step(State src, Letter in) const;

 private:
  Alphabet input_;
  Alphabet output_;
  std::size_t states_ = 0;
  State initial_ = 0;
  std::vector<std::pair<Letter, State>> table_;
};

/// Transducer-interface view of an explicit Transducer.
class TransducerView {
 public:
  using State = omega::State;
  using InLetter = Letter;
  using OutLetter = Letter;
  using StateHash = std::hash<State>;

  explicit TransducerView(const Transducer& t) : t_(&t) {}
  State initial() const { return t_->initial(); }
  std::pair<Letter, State> step(State s, Letter l) const { return t_->step(s, l); }

 private:
  const Transducer* t_;
};

LassoWord transducer_output_lasso(const Transducer& t, const LassoWord& w);

/// Product automaton over t's input alphabet accepting w iff aut accepts t(w).
RabinAutomaton compose_rabin_transducer(const RabinAutomaton& aut, const Transducer& t,
                                        std::size_t cap = kDefaultCap);

// ---------------------------------------------------------------------------
// Sampling and comparison
// ---------------------------------------------------------------------------

inline bool accepts(const BuchiAutomaton& a, const LassoWord& w) { return buchi_accepts_lasso(a, w); }
inline bool accepts(const RabinAutomaton& a, const LassoWord& w) { return rabin_accepts_lasso(a, w); }

/// Samples on which the two automata disagree.
template <class A1, class A2>
std::vector<LassoWord> lasso_equivalent_on_samples(const A1& a1, const A2& a2,
                                                   const std::vector<LassoWord>& samples) {
  if (!(a1.alphabet() == a2.alphabet())) throw ValidationError("automata have different alphabets");
  std::vector<LassoWord> out;
  for (const auto& w : samples) {
    if (accepts(a1, w) != accepts(a2, w)) out.push_back(w);
  }
  return out;
}

struct LassoShape {
  std::size_t max_stem = 4;
  std::size_t max_period = 4;
};

/// |u| uniform in [0, max_stem], |v| uniform in [1, max_period], letters uniform.
LassoWord random_lasso(std::mt19937_64& rng, std::size_t alphabet_size, LassoShape shape = {});

/// Each transition present with probability `density`, each state accepting
/// with probability 1/2, initial state 0.
BuchiAutomaton random_buchi(std::mt19937_64& rng, std::size_t states, const Alphabet& alphabet,
                            double density = 0.5);

Transducer random_transducer(std::mt19937_64& rng, std::size_t states, const Alphabet& input,
                             const Alphabet& output);

/// Total deterministic automaton with `pairs` random pairs.
RabinAutomaton random_rabin(std::mt19937_64& rng, std::size_t states, const Alphabet& alphabet,
                            std::size_t pairs, AcceptanceBase base);

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

using AnyAutomaton = std::variant<BuchiAutomaton, RabinAutomaton>;

AnyAutomaton parse_automaton(std::string_view text);
BuchiAutomaton parse_buchi(std::string_view text);
RabinAutomaton parse_rabin(std::string_view text);

/// `comments` are written as `# ...` lines after the header.
std::string to_text(const BuchiAutomaton& aut, const std::vector<std::string>& comments = {});
std::string to_text(const RabinAutomaton& aut, const std::vector<std::string>& comments = {});

/// "a b ; a": stem letters, ';', period letters.
LassoWord parse_lasso(std::string_view text, const Alphabet& alphabet);
std::string lasso_to_text(const LassoWord& w, const Alphabet& alphabet);

}  // namespace omega
