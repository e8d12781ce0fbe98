#include "omega/complement.hpp"

#include <unordered_map>

namespace omega {

namespace {

bool has_accepting_loop(const TransitionMatrix& n, const TransitionMatrix& m, State initial) {
  for (std::size_t q1 = 0; q1 < n.dim(); ++q1) {
    if (n.at(initial, q1) != Tri::Zero && m.at(q1, q1) == Tri::Star) return true;
  }
  return false;
}

struct StateKey {
  ComplementState s;
  friend bool operator==(const StateKey& a, const StateKey& b) {
    return a.s.kind == b.s.kind && a.s.n == b.s.n && a.s.m == b.s.m && a.s.k == b.s.k;
  }
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& key) const noexcept {
    std::size_t h = static_cast<std::size_t>(key.s.kind);
    h = hash_combine(h, key.s.n);
    h = hash_combine(h, key.s.m);
    return hash_combine(h, key.s.k);
  }
};

// reach[x] has bit y set iff y = x * w for some nonempty word w.
class RightReach {
 public:
  explicit RightReach(const MatrixSemigroup& sg) : words_((sg.size() + 63) / 64) {
    const std::size_t size = sg.size();
    if (size * words_ * sizeof(std::uint64_t) > kSemigroupByteBudget) {
      std::size_t limit = 1;
      while ((limit + 1) * ((limit + 64) / 64) * sizeof(std::uint64_t) <= kSemigroupByteBudget) limit *= 2;
      throw CapExceeded("complement reachability table", limit);
    }
    bits_.assign(size * words_, 0);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t x = 0; x < size; ++x) {
      std::uint64_t* row = &bits_[x * words_];
      stack.clear();
      for (std::size_t g = 0; g < sg.generator_count(); ++g) stack.push_back(sg.right(x, g));
      while (!stack.empty()) {
        const std::uint32_t y = stack.back();
        stack.pop_back();
        if (row[y / 64] >> (y % 64) & 1) continue;
        row[y / 64] |= std::uint64_t{1} << (y % 64);
        for (std::size_t g = 0; g < sg.generator_count(); ++g) stack.push_back(sg.right(y, g));
      }
    }
  }

  bool operator()(std::uint32_t from, std::uint32_t to) const noexcept {
    return bits_[from * words_ + to / 64] >> (to % 64) & 1;
  }

 private:
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace

bool is_rejecting_pair(const BuchiAutomaton& aut, const TransitionMatrix& n, const TransitionMatrix& m) {
  if (n.dim() != aut.state_count() || m.dim() != aut.state_count()) {
    throw ValidationError("is_rejecting_pair: matrix dimension differs from the state count");
  }
  if (!(mat_mul(n, m) == n) || !(mat_mul(m, m) == m)) return false;
  return !has_accepting_loop(n, m, aut.initial());
}

std::string ComplementResult::describe(State q) const {
  const ComplementState& s = states.at(q);
  auto mat = [this](std::uint32_t e) { return semigroup.element(e).compact(); };
  switch (s.kind) {
    case ComplementState::Kind::Init: return "Init";
    case ComplementState::Kind::Triple: return "Triple(N=" + mat(s.n) + ", M=" + mat(s.m) + ", K=" + mat(s.k) + ")";
    case ComplementState::Kind::Pair: return "Pair(M=" + mat(s.m) + ", K=" + mat(s.k) + ")";
    case ComplementState::Kind::Mono: return "Mono(M=" + mat(s.m) + ")";
  }
  return "?";
}

std::vector<std::string> ComplementResult::comments() const {
  std::vector<std::string> out;
  out.reserve(states.size());
  for (State q = 0; q < states.size(); ++q) out.push_back("state " + std::to_string(q) + " = " + describe(q));
  return out;
}

ComplementResult complement_buchi_detailed(const BuchiAutomaton& aut, std::size_t cap) {
  using Kind = ComplementState::Kind;
  if (aut.state_count() == 0) throw ValidationError("complement needs at least one state");
  const std::size_t letters = aut.alphabet().size();
  std::vector<TransitionMatrix> gens;
  for (Letter a = 0; a < letters; ++a) gens.push_back(transition_matrix_of_letter(aut, a));

  ComplementResult out{BuchiAutomaton(aut.alphabet(), 0), MatrixSemigroup(gens, cap), {}};
  const MatrixSemigroup& sg = out.semigroup;
  const RightReach reach(sg);

  // Rejecting pairs, restricted to the semigroup generated by the letters.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> rejecting;
  for (std::uint32_t m = 0; m < sg.size(); ++m) {
    if (sg.multiply(m, m) != m) continue;
    for (std::uint32_t n = 0; n < sg.size(); ++n) {
      if (sg.multiply(n, m) == n && !has_accepting_loop(sg.element(n), sg.element(m), aut.initial()))
        rejecting.emplace_back(n, m);
    }
  }

  std::unordered_map<StateKey, State, StateKeyHash> index;
  auto intern = [&](ComplementState s) -> State {
    auto [it, fresh] = index.try_emplace(StateKey{s}, static_cast<State>(out.states.size()));
    if (fresh) {
      if (out.states.size() >= cap) throw CapExceeded("complement", cap);
      out.automaton.add_state(s.kind == Kind::Mono);
      out.states.push_back(s);
    }
    return it->second;
  };

  intern(ComplementState{Kind::Init, 0, 0, 0});
  out.automaton.set_initial(0);
  for (State cur = 0; cur < out.states.size(); ++cur) {
    const ComplementState s = out.states[cur];
    for (Letter a = 0; a < letters; ++a) {
      const std::uint32_t ma = sg.generator(a);
      auto edge = [&](ComplementState t) { out.automaton.add_transition(cur, a, intern(t)); };
      switch (s.kind) {
        case Kind::Init:
          for (auto [n, m] : rejecting)
            if (reach(ma, n)) edge({Kind::Triple, n, m, ma});
          break;
        case Kind::Triple: {
          const std::uint32_t k = sg.right(s.k, a);
          if (reach(k, s.n)) edge({Kind::Triple, s.n, s.m, k});
          if (k == s.n) edge({Kind::Mono, 0, s.m, 0});
          break;
        }
        case Kind::Mono:
          if (reach(ma, s.m)) edge({Kind::Pair, 0, s.m, ma});
          if (ma == s.m) edge({Kind::Mono, 0, s.m, 0});
          break;
        case Kind::Pair: {
          const std::uint32_t k = sg.right(s.k, a);
          if (reach(k, s.m)) edge({Kind::Pair, 0, s.m, k});
          if (k == s.m) edge({Kind::Mono, 0, s.m, 0});
          break;
        }
      }
    }
  }
  return out;
}

BuchiAutomaton complement_buchi(const BuchiAutomaton& aut, std::size_t cap) {
  return complement_buchi_detailed(aut, cap).automaton;
}

}  // namespace omega
