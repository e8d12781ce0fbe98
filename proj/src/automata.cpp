#include "omega/automata.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <sstream>

#include "omega/graph.hpp"

namespace omega {

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ValidationError("alphabet must be nonempty");
  for (Letter i = 0; i < symbols_.size(); ++i) {
    const std::string& s = symbols_[i];
    if (s.empty() || s.find_first_of(" \t\r\n;#") != std::string::npos) {
      throw ValidationError("invalid letter name '" + s + "'");
    }
    if (!index_.emplace(s, i).second) throw ValidationError("duplicate letter '" + s + "'");
  }
}

Alphabet Alphabet::valuations(std::size_t tracks) {
  if (tracks == 0) return Alphabet({"_"});
  if (tracks > 20) throw ValidationError("too many tracks for a valuation alphabet");
  std::vector<std::string> names;
  for (std::size_t v = 0; v < (std::size_t{1} << tracks); ++v) {
    std::string s(tracks, '0');
    for (std::size_t t = 0; t < tracks; ++t) {
      if (v >> (tracks - 1 - t) & 1) s[t] = '1';
    }
    names.push_back(std::move(s));
  }
  return Alphabet(std::move(names));
}

std::optional<Letter> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Letter Alphabet::index(std::string_view name) const {
  auto l = find(name);
  if (!l) throw ValidationError("unknown letter '" + std::string(name) + "'");
  return *l;
}

// ---------------------------------------------------------------------------
// BuchiAutomaton

BuchiAutomaton::BuchiAutomaton(Alphabet alphabet, std::size_t states, State initial)
    : alphabet_(std::move(alphabet)), initial_(initial) {
  if (alphabet_.size() == 0) throw ValidationError("alphabet must be nonempty");
  accepting_.assign(states, false);
  succ_.resize(states * alphabet_.size());
  if (states > 0 && initial >= states) throw ValidationError("initial state out of range");
}

void BuchiAutomaton::set_initial(State q) {
  if (q >= state_count()) throw ValidationError("initial state out of range");
  initial_ = q;
}

State BuchiAutomaton::add_state(bool accepting) {
  accepting_.push_back(accepting);
  succ_.resize(accepting_.size() * alphabet_.size());
  return static_cast<State>(accepting_.size() - 1);
}

void BuchiAutomaton::set_accepting(State q, bool value) {
  if (q >= state_count()) throw ValidationError("accepting state out of range");
  accepting_[q] = value;
}

std::vector<State> BuchiAutomaton::accepting_states() const {
  std::vector<State> out;
  for (State q = 0; q < state_count(); ++q)
    if (accepting_[q]) out.push_back(q);
  return out;
}

void BuchiAutomaton::add_transition(State src, Letter a, State dst) {
  if (src >= state_count() || dst >= state_count()) throw ValidationError("transition endpoint out of range");
  if (a >= alphabet_.size()) throw ValidationError("transition letter out of range");
  auto& v = succ_[src * alphabet_.size() + a];
  auto it = std::lower_bound(v.begin(), v.end(), dst);
  if (it != v.end() && *it == dst) return;
  v.insert(it, dst);
  ++transition_count_;
}

bool BuchiAutomaton::has_transition(State src, Letter a, State dst) const {
  const auto& v = successors(src, a);
  return std::binary_search(v.begin(), v.end(), dst);
}

std::vector<Transition> BuchiAutomaton::transitions() const {
  std::vector<Transition> out;
  out.reserve(transition_count_);
  for (State q = 0; q < state_count(); ++q)
    for (Letter a = 0; a < alphabet_.size(); ++a)
      for (State d : successors(q, a)) out.push_back({q, a, d});
  return out;
}

TransitionMatrix transition_matrix_of_letter(const BuchiAutomaton& aut, Letter a) {
  if (a >= aut.alphabet().size()) throw ValidationError("unknown letter index " + std::to_string(a));
  TransitionMatrix m(aut.state_count());
  for (State q = 0; q < aut.state_count(); ++q) {
    const Tri t = aut.accepting(q) ? Tri::Star : Tri::One;
    for (State d : aut.successors(q, a)) m.set(q, d, t);
  }
  return m;
}

void validate_lasso(const LassoWord& w, const Alphabet& alphabet) {
  if (w.period.empty()) throw ValidationError("lasso period must be nonempty");
  auto bad = [&](Letter l) { return l >= alphabet.size(); };
  if (std::any_of(w.stem.begin(), w.stem.end(), bad) || std::any_of(w.period.begin(), w.period.end(), bad)) {
    throw ValidationError("lasso letter outside the alphabet");
  }
}

namespace {

bool nontrivial(const SccResult& scc, const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t v,
                const std::vector<std::uint32_t>& comp_size) {
  if (comp_size[scc.component[v]] > 1) return true;
  return std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
}

std::vector<std::uint32_t> component_sizes(const SccResult& scc) {
  std::vector<std::uint32_t> size(scc.count, 0);
  for (auto c : scc.component)
    if (c >= 0) ++size[c];
  return size;
}

}  // namespace

bool buchi_accepts_lasso(const BuchiAutomaton& aut, const LassoWord& w) {
  validate_lasso(w, aut.alphabet());
  const std::size_t n = aut.state_count();
  if (n == 0) return false;
  const std::size_t len = w.length();
  auto vid = [len](State q, std::size_t pos) { return static_cast<std::uint32_t>(q * len + pos); };
  std::vector<std::vector<std::uint32_t>> adj(n * len);
  for (State q = 0; q < n; ++q) {
    for (std::size_t pos = 0; pos < len; ++pos) {
      for (State d : aut.successors(q, w.at(pos))) adj[vid(q, pos)].push_back(vid(d, w.next(pos)));
    }
  }
  const SccResult scc = reachable_sccs(adj, vid(aut.initial(), 0));
  const auto sizes = component_sizes(scc);
  for (State q = 0; q < n; ++q) {
    if (!aut.accepting(q)) continue;
    for (std::size_t pos = 0; pos < len; ++pos) {
      const auto v = vid(q, pos);
      if (scc.component[v] >= 0 && nontrivial(scc, adj, v, sizes)) return true;
    }
  }
  return false;
}

namespace {

std::vector<std::vector<std::uint32_t>> state_graph(const BuchiAutomaton& aut) {
  std::vector<std::vector<std::uint32_t>> adj(aut.state_count());
  for (State q = 0; q < aut.state_count(); ++q) {
    for (Letter a = 0; a < aut.alphabet().size(); ++a)
      for (State d : aut.successors(q, a)) adj[q].push_back(d);
    std::sort(adj[q].begin(), adj[q].end());
    adj[q].erase(std::unique(adj[q].begin(), adj[q].end()), adj[q].end());
  }
  return adj;
}

struct BfsTree {
  std::vector<std::size_t> dist;
  std::vector<State> parent;
  std::vector<Letter> via;
};

// BFS from `src` using only states allowed by `allowed`.
template <class Allowed>
BfsTree bfs(const BuchiAutomaton& aut, State src, Allowed allowed) {
  const std::size_t n = aut.state_count();
  constexpr std::size_t inf = static_cast<std::size_t>(-1);
  BfsTree t{std::vector<std::size_t>(n, inf), std::vector<State>(n, kNoState), std::vector<Letter>(n, 0)};
  std::deque<State> queue{src};
  t.dist[src] = 0;
  while (!queue.empty()) {
    const State q = queue.front();
    queue.pop_front();
    for (Letter a = 0; a < aut.alphabet().size(); ++a) {
      for (State d : aut.successors(q, a)) {
        if (t.dist[d] != inf || !allowed(d)) continue;
        t.dist[d] = t.dist[q] + 1;
        t.parent[d] = q;
        t.via[d] = a;
        queue.push_back(d);
      }
    }
  }
  return t;
}

std::vector<Letter> path_to(const BfsTree& t, State target) {
  std::vector<Letter> out;
  for (State q = target; t.parent[q] != kNoState; q = t.parent[q]) out.push_back(t.via[q]);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

std::optional<LassoWord> buchi_emptiness(const BuchiAutomaton& aut) {
  const std::size_t n = aut.state_count();
  if (n == 0) return std::nullopt;
  const auto adj = state_graph(aut);
  const SccResult scc = reachable_sccs(adj, aut.initial());
  const auto sizes = component_sizes(scc);
  const BfsTree from_init = bfs(aut, aut.initial(), [](State) { return true; });

  State best = kNoState;
  for (State q = 0; q < n; ++q) {
    if (!aut.accepting(q) || scc.component[q] < 0 || !nontrivial(scc, adj, q, sizes)) continue;
    if (best == kNoState || from_init.dist[q] < from_init.dist[best]) best = q;
  }
  if (best == kNoState) return std::nullopt;

  LassoWord w;
  w.stem = path_to(from_init, best);
  // Shortest cycle through `best` inside its component.
  const auto comp = scc.component[best];
  std::optional<Letter> self;
  for (Letter a = 0; a < aut.alphabet().size() && !self; ++a)
    if (aut.has_transition(best, a, best)) self = a;
  if (self) {
    w.period = {*self};
    return w;
  }
  const BfsTree inside = bfs(aut, best, [&](State d) { return scc.component[d] == comp; });
  std::size_t best_len = static_cast<std::size_t>(-1);
  State closer = kNoState;
  Letter closing = 0;
  for (State q = 0; q < n; ++q) {
    if (scc.component[q] != comp || q == best) continue;
    for (Letter a = 0; a < aut.alphabet().size(); ++a) {
      if (aut.has_transition(q, a, best) && inside.dist[q] + 1 < best_len) {
        best_len = inside.dist[q] + 1;
        closer = q;
        closing = a;
      }
    }
  }
  w.period = path_to(inside, closer);
  w.period.push_back(closing);
  return w;
}

BuchiAutomaton trim(const BuchiAutomaton& aut) {
  const std::size_t n = aut.state_count();
  if (n == 0) return aut;
  const auto adj = state_graph(aut);
  const SccResult scc = reachable_sccs(adj, aut.initial());
  const auto sizes = component_sizes(scc);
  std::vector<std::vector<std::uint32_t>> radj(n);
  for (State q = 0; q < n; ++q)
    for (auto d : adj[q]) radj[d].push_back(q);

  std::vector<bool> keep(n, false);
  std::deque<State> queue;
  for (State q = 0; q < n; ++q) {
    if (aut.accepting(q) && scc.component[q] >= 0 && nontrivial(scc, adj, q, sizes)) {
      // every state of q's component lies on a cycle through q
      for (State p = 0; p < n; ++p) {
        if (scc.component[p] == scc.component[q] && !keep[p]) {
          keep[p] = true;
          queue.push_back(p);
        }
      }
    }
  }
  while (!queue.empty()) {
    const State q = queue.front();
    queue.pop_front();
    for (auto p : radj[q]) {
      if (!keep[p] && scc.component[p] >= 0) {
        keep[p] = true;
        queue.push_back(p);
      }
    }
  }
  keep[aut.initial()] = true;

  std::vector<State> rename(n, kNoState);
  BuchiAutomaton out(aut.alphabet(), 0);
  rename[aut.initial()] = out.add_state(aut.accepting(aut.initial()));
  for (State q = 0; q < n; ++q)
    if (keep[q] && rename[q] == kNoState) rename[q] = out.add_state(aut.accepting(q));
  out.set_initial(0);
  for (const auto& t : aut.transitions()) {
    if (keep[t.src] && keep[t.dst]) out.add_transition(rename[t.src], t.letter, rename[t.dst]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// RabinAutomaton

RabinAutomaton::RabinAutomaton(Alphabet alphabet, std::size_t states, State initial, AcceptanceBase base)
    : alphabet_(std::move(alphabet)), states_(states), initial_(initial), base_(base) {
  if (alphabet_.size() == 0) throw ValidationError("alphabet must be nonempty");
  if (states > 0 && initial >= states) throw ValidationError("initial state out of range");
  delta_.assign(states * alphabet_.size(), kNoState);
  marks_.resize(base == AcceptanceBase::State ? states : states * alphabet_.size());
}

State RabinAutomaton::add_state() {
  ++states_;
  delta_.resize(states_ * alphabet_.size(), kNoState);
  marks_.resize(base_ == AcceptanceBase::State ? states_ : states_ * alphabet_.size());
  return static_cast<State>(states_ - 1);
}

void RabinAutomaton::set_transition(State src, Letter a, State dst) {
  if (src >= states_ || dst >= states_) throw ValidationError("transition endpoint out of range");
  if (a >= alphabet_.size()) throw ValidationError("transition letter out of range");
  State& cell = delta_[slot(src, a)];
  if (cell != kNoState && cell != dst) throw ValidationError("Rabin automaton must be deterministic");
  cell = dst;
}

std::size_t RabinAutomaton::transition_count() const {
  return static_cast<std::size_t>(std::count_if(delta_.begin(), delta_.end(), [](State s) { return s != kNoState; }));
}

void RabinAutomaton::validate_member(std::uint32_t index) const {
  if (index >= marks_.size()) throw ValidationError("Rabin pair member out of range");
}

std::size_t RabinAutomaton::add_pair(RabinPair pair) {
  if (pairs_.size() >= kMaxPairs) throw ValidationError("more than 64 Rabin pairs are not supported");
  const std::uint64_t bit = std::uint64_t{1} << pairs_.size();
  for (auto& side : {&pair.e, &pair.f}) {
    std::sort(side->begin(), side->end());
    side->erase(std::unique(side->begin(), side->end()), side->end());
    for (auto x : *side) validate_member(x);
  }
  for (auto x : pair.e) marks_[x].e |= bit;
  for (auto x : pair.f) marks_[x].f |= bit;
  pairs_.push_back(std::move(pair));
  return pairs_.size() - 1;
}

bool operator==(const RabinAutomaton& a, const RabinAutomaton& b) {
  return a.alphabet_ == b.alphabet_ && a.states_ == b.states_ && a.initial_ == b.initial_ && a.base_ == b.base_ &&
         a.delta_ == b.delta_ && a.pairs_ == b.pairs_;
}

bool rabin_accepts_lasso(const RabinAutomaton& aut, const LassoWord& w) {
  validate_lasso(w, aut.alphabet());
  if (aut.state_count() == 0) return false;
  return accepts_lasso(RabinView(aut), w);
}

namespace {

// Product of a transition-based automaton with the last slot taken.
class LastSlotMachine {
 public:
  using State = std::uint64_t;  // (state << 32) | (slot + 1), slot 0 = none
  using Letter = omega::Letter;
  using StateHash = std::hash<State>;

  explicit LastSlotMachine(const RabinAutomaton& a) : a_(&a) {}
  State initial() const { return State{a_->initial()} << 32; }
  std::optional<MachineStep<State>> step(State s, Letter l) const {
    const omega::State q = static_cast<omega::State>(s >> 32);
    const omega::State n = a_->next(q, l);
    if (n == kNoState) return std::nullopt;
    const std::uint32_t slot = a_->slot(q, l);
    return MachineStep<State>{(State{n} << 32) | (slot + 1), a_->marks(slot)};
  }
  std::size_t pair_count() const { return a_->pairs().size(); }
  bool state_based() const { return true; }
  Marks state_marks(State s) const {
    const auto slot = static_cast<std::uint32_t>(s & 0xffffffffu);
    return slot == 0 ? Marks{} : a_->marks(slot - 1);
  }

 private:
  const RabinAutomaton* a_;
};

std::vector<Letter> all_letters(const Alphabet& a) {
  std::vector<Letter> out(a.size());
  for (Letter i = 0; i < a.size(); ++i) out[i] = i;
  return out;
}

}  // namespace

RabinAutomaton to_state_based(const RabinAutomaton& aut) {
  if (aut.base() == AcceptanceBase::State) return aut;
  if (aut.state_count() == 0) return RabinAutomaton(aut.alphabet(), 0, 0, AcceptanceBase::State);
  return materialize(LastSlotMachine(aut), aut.alphabet(), all_letters(aut.alphabet()), kDefaultCap,
                     "to_state_based")
      .automaton;
}

// ---------------------------------------------------------------------------
// Transducers

Transducer::Transducer(Alphabet input, Alphabet output, std::size_t states, State initial)
    : input_(std::move(input)), output_(std::move(output)), states_(states), initial_(initial) {
  if (states == 0) throw ValidationError("transducer needs at least one state");
  if (initial >= states) throw ValidationError("initial state out of range");
  table_.assign(states * input_.size(), {0, kNoState});
}

Transducer Transducer::identity(const Alphabet& alphabet) {
  Transducer t(alphabet, alphabet, 1, 0);
  for (Letter a = 0; a < alphabet.size(); ++a) t.set_step(0, a, a, 0);
  return t;
}

void Transducer::set_step(State src, Letter in, Letter out, State dst) {
  if (src >= states_ || dst >= states_) throw ValidationError("transducer state out of range");
  if (in >= input_.size() || out >= output_.size()) throw ValidationError("transducer letter out of range");
  table_[src * input_.size() + in] = {out, dst};
}

void Transducer::validate() const {
  for (const auto& [o, d] : table_)
    if (d == kNoState) throw ValidationError("transducer step map is not total");
}

std::pair<Letter, State> Transducer::step(State src, Letter in) const {
  const auto& cell = table_.at(src * input_.size() + in);
  if (cell.second == kNoState) throw ValidationError("transducer step undefined");
  return cell;
}

LassoWord transducer_output_lasso(const Transducer& t, const LassoWord& w) {
  validate_lasso(w, t.input());
  return transducer_output(TransducerView(t), w);
}

RabinAutomaton compose_rabin_transducer(const RabinAutomaton& aut, const Transducer& t, std::size_t cap) {
  if (!(aut.alphabet() == t.output())) throw ValidationError("automaton alphabet differs from transducer output");
  t.validate();
  if (aut.state_count() == 0) return RabinAutomaton(t.input(), 0, 0, aut.base());
  return materialize(compose(RabinView(aut), TransducerView(t)), t.input(), all_letters(t.input()), cap,
                     "compose_rabin_transducer")
      .automaton;
}

// ---------------------------------------------------------------------------
// Sampling

LassoWord random_lasso(std::mt19937_64& rng, std::size_t alphabet_size, LassoShape shape) {
  std::uniform_int_distribution<std::size_t> stem_len(0, shape.max_stem);
  std::uniform_int_distribution<std::size_t> period_len(1, std::max<std::size_t>(1, shape.max_period));
  std::uniform_int_distribution<Letter> letter(0, static_cast<Letter>(alphabet_size - 1));
  LassoWord w;
  w.stem.resize(stem_len(rng));
  w.period.resize(period_len(rng));
  for (auto& l : w.stem) l = letter(rng);
  for (auto& l : w.period) l = letter(rng);
  return w;
}

BuchiAutomaton random_buchi(std::mt19937_64& rng, std::size_t states, const Alphabet& alphabet, double density) {
  std::bernoulli_distribution edge(density), acc(0.5);
  BuchiAutomaton a(alphabet, states, 0);
  for (State q = 0; q < states; ++q) a.set_accepting(q, acc(rng));
  for (State q = 0; q < states; ++q)
    for (Letter l = 0; l < alphabet.size(); ++l)
      for (State d = 0; d < states; ++d)
        if (edge(rng)) a.add_transition(q, l, d);
  return a;
}

Transducer random_transducer(std::mt19937_64& rng, std::size_t states, const Alphabet& input,
                             const Alphabet& output) {
  std::uniform_int_distribution<State> st(0, static_cast<State>(states - 1));
  std::uniform_int_distribution<Letter> out(0, static_cast<Letter>(output.size() - 1));
  Transducer t(input, output, states, 0);
  for (State q = 0; q < states; ++q)
    for (Letter a = 0; a < input.size(); ++a) t.set_step(q, a, out(rng), st(rng));
  return t;
}

RabinAutomaton random_rabin(std::mt19937_64& rng, std::size_t states, const Alphabet& alphabet, std::size_t pairs,
                            AcceptanceBase base) {
  std::uniform_int_distribution<State> st(0, static_cast<State>(states - 1));
  std::bernoulli_distribution member(0.3);
  RabinAutomaton a(alphabet, states, 0, base);
  for (State q = 0; q < states; ++q)
    for (Letter l = 0; l < alphabet.size(); ++l) a.set_transition(q, l, st(rng));
  const std::size_t members = base == AcceptanceBase::State ? states : states * alphabet.size();
  for (std::size_t i = 0; i < pairs; ++i) {
    RabinPair p;
    for (std::uint32_t x = 0; x < members; ++x) {
      if (member(rng)) p.e.push_back(x);
      if (member(rng)) p.f.push_back(x);
    }
    a.add_pair(std::move(p));
  }
  return a;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::istringstream in{std::string(line)};
    Line l{number, {}};
    for (std::string tok; in >> tok;) l.tokens.push_back(std::move(tok));
    if (!l.tokens.empty()) out.push_back(std::move(l));
    start = end + 1;
  }
  return out;
}

std::uint32_t parse_index(const std::string& tok, std::size_t line) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw ParseError("expected a number, got '" + tok + "'", line);
  return v;
}

struct Parsed {
  bool rabin = false;
  AcceptanceBase base = AcceptanceBase::State;
  std::optional<Alphabet> alphabet;
  std::optional<std::size_t> states;
  std::optional<State> initial;
  std::vector<State> accepting;
  std::vector<std::pair<RabinPair, std::size_t>> pairs;
  std::vector<std::pair<Transition, std::size_t>> trans;
};

Parsed parse_common(std::string_view text) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError("empty automaton file", 1);
  Parsed p;
  const auto& head = lines.front();
  if (head.tokens[0] == "buchi" && head.tokens.size() == 1) {
    p.rabin = false;
  } else if (head.tokens[0] == "rabin" && head.tokens.size() == 2 &&
             (head.tokens[1] == "state" || head.tokens[1] == "trans")) {
    p.rabin = true;
    p.base = head.tokens[1] == "state" ? AcceptanceBase::State : AcceptanceBase::Transition;
  } else {
    throw ParseError("expected header 'buchi' or 'rabin state|trans'", head.number);
  }
  bool saw_accepting = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [num, tok] = lines[i];
    const std::string& kw = tok[0];
    if (kw == "alphabet") {
      if (p.alphabet) throw ParseError("duplicate alphabet line", num);
      try {
        p.alphabet = Alphabet(std::vector<std::string>(tok.begin() + 1, tok.end()));
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), num);
      }
    } else if (kw == "states") {
      if (tok.size() != 2) throw ParseError("expected 'states <n>'", num);
      if (p.states) throw ParseError("duplicate states line", num);
      p.states = parse_index(tok[1], num);
    } else if (kw == "initial") {
      if (tok.size() != 2) throw ParseError("expected 'initial <i>'", num);
      if (p.initial) throw ParseError("duplicate initial line", num);
      p.initial = parse_index(tok[1], num);
    } else if (kw == "accepting") {
      if (p.rabin) throw ParseError("'accepting' is not allowed in a Rabin automaton", num);
      if (saw_accepting) throw ParseError("duplicate accepting line", num);
      saw_accepting = true;
      for (std::size_t k = 1; k < tok.size(); ++k) p.accepting.push_back(parse_index(tok[k], num));
    } else if (kw == "pair") {
      if (!p.rabin) throw ParseError("'pair' is not allowed in a Buchi automaton", num);
      RabinPair pair;
      std::vector<std::uint32_t>* side = nullptr;
      bool saw_e = false, saw_f = false;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        std::string t = tok[k];
        if (t.rfind("E:", 0) == 0 || t.rfind("F:", 0) == 0) {
          bool is_e = t[0] == 'E';
          if ((is_e && saw_e) || (!is_e && saw_f)) throw ParseError("duplicate pair side", num);
          (is_e ? saw_e : saw_f) = true;
          side = is_e ? &pair.e : &pair.f;
          t = t.substr(2);
        } else if (!side) {
          throw ParseError("expected 'E:' or 'F:'", num);
        }
        std::size_t start = 0;
        while (start < t.size()) {
          std::size_t comma = t.find(',', start);
          if (comma == std::string::npos) comma = t.size();
          if (comma > start) side->push_back(parse_index(t.substr(start, comma - start), num));
          start = comma + 1;
        }
      }
      if (!saw_e || !saw_f) throw ParseError("pair needs both 'E:' and 'F:'", num);
      p.pairs.emplace_back(std::move(pair), num);
    } else if (kw == "trans") {
      if (tok.size() != 4) throw ParseError("expected 'trans <src> <letter> <dst>'", num);
      if (!p.alphabet) throw ParseError("'trans' before 'alphabet'", num);
      auto letter = p.alphabet->find(tok[2]);
      if (!letter) throw ParseError("unknown letter '" + tok[2] + "'", num);
      p.trans.emplace_back(Transition{parse_index(tok[1], num), *letter, parse_index(tok[3], num)}, num);
    } else {
      throw ParseError("unknown keyword '" + kw + "'", num);
    }
  }
  const std::size_t last = lines.back().number;
  if (!p.alphabet) throw ParseError("missing alphabet line", last);
  if (!p.states) throw ParseError("missing states line", last);
  if (!p.initial) throw ParseError("missing initial line", last);
  if (*p.states == 0) throw ParseError("automaton needs at least one state", last);
  if (*p.initial >= *p.states) throw ParseError("initial state out of range", last);
  return p;
}

BuchiAutomaton build_buchi(const Parsed& p) {
  BuchiAutomaton a(*p.alphabet, *p.states, *p.initial);
  for (State q : p.accepting) {
    if (q >= *p.states) throw ParseError("accepting state out of range", 0);
    a.set_accepting(q);
  }
  for (const auto& [t, num] : p.trans) {
    if (t.src >= *p.states || t.dst >= *p.states) throw ParseError("transition endpoint out of range", num);
    a.add_transition(t.src, t.letter, t.dst);
  }
  return a;
}

RabinAutomaton build_rabin(const Parsed& p) {
  RabinAutomaton a(*p.alphabet, *p.states, *p.initial, p.base);
  std::vector<std::uint32_t> ordinal_slot;
  for (const auto& [t, num] : p.trans) {
    if (t.src >= *p.states || t.dst >= *p.states) throw ParseError("transition endpoint out of range", num);
    try {
      a.set_transition(t.src, t.letter, t.dst);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), num);
    }
    ordinal_slot.push_back(a.slot(t.src, t.letter));
  }
  for (const auto& [pair, num] : p.pairs) {
    RabinPair mapped;
    for (auto [from, to] : {std::pair{&pair.e, &mapped.e}, std::pair{&pair.f, &mapped.f}}) {
      for (auto x : *from) {
        if (p.base == AcceptanceBase::State) {
          if (x >= *p.states) throw ParseError("pair state out of range", num);
          to->push_back(x);
        } else {
          if (x >= ordinal_slot.size()) throw ParseError("pair transition ordinal out of range", num);
          to->push_back(ordinal_slot[x]);
        }
      }
    }
    try {
      a.add_pair(std::move(mapped));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), num);
    }
  }
  return a;
}

void write_comments(std::ostringstream& out, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
}

void write_alphabet(std::ostringstream& out, const Alphabet& a) {
  out << "alphabet";
  for (const auto& s : a.symbols()) out << ' ' << s;
  out << '\n';
}

void write_list(std::ostringstream& out, const std::vector<std::uint32_t>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
}

}  // namespace

AnyAutomaton parse_automaton(std::string_view text) {
  Parsed p = parse_common(text);
  if (p.rabin) return build_rabin(p);
  return build_buchi(p);
}

BuchiAutomaton parse_buchi(std::string_view text) {
  Parsed p = parse_common(text);
  if (p.rabin) throw ParseError("expected a Buchi automaton", 1);
  return build_buchi(p);
}

RabinAutomaton parse_rabin(std::string_view text) {
  Parsed p = parse_common(text);
  if (!p.rabin) throw ParseError("expected a Rabin automaton", 1);
  return build_rabin(p);
}

std::string to_text(const BuchiAutomaton& aut, const std::vector<std::string>& comments) {
  std::ostringstream out;
  out << "buchi\n";
  write_comments(out, comments);
  write_alphabet(out, aut.alphabet());
  out << "states " << aut.state_count() << '\n';
  out << "initial " << aut.initial() << '\n';
  out << "accepting";
  for (State q : aut.accepting_states()) out << ' ' << q;
  out << '\n';
  for (const auto& t : aut.transitions())
    out << "trans " << t.src << ' ' << aut.alphabet().name(t.letter) << ' ' << t.dst << '\n';
  return out.str();
}

std::string to_text(const RabinAutomaton& aut, const std::vector<std::string>& comments) {
  std::ostringstream out;
  const bool by_state = aut.base() == AcceptanceBase::State;
  out << "rabin " << (by_state ? "state" : "trans") << '\n';
  write_comments(out, comments);
  write_alphabet(out, aut.alphabet());
  out << "states " << aut.state_count() << '\n';
  out << "initial " << aut.initial() << '\n';
  const std::size_t k = aut.alphabet().size();
  std::vector<std::uint32_t> slot_ordinal(aut.state_count() * k, 0);
  std::uint32_t ordinal = 0;
  for (State q = 0; q < aut.state_count(); ++q)
    for (Letter a = 0; a < k; ++a)
      if (aut.next(q, a) != kNoState) slot_ordinal[aut.slot(q, a)] = ordinal++;
  for (const auto& p : aut.pairs()) {
    auto conv = [&](const std::vector<std::uint32_t>& v) {
      if (by_state) return v;
      std::vector<std::uint32_t> o;
      for (auto x : v) o.push_back(slot_ordinal[x]);
      std::sort(o.begin(), o.end());
      return o;
    };
    out << "pair E:";
    write_list(out, conv(p.e));
    out << " F:";
    write_list(out, conv(p.f));
    out << '\n';
  }
  for (State q = 0; q < aut.state_count(); ++q)
    for (Letter a = 0; a < k; ++a)
      if (aut.next(q, a) != kNoState)
        out << "trans " << q << ' ' << aut.alphabet().name(a) << ' ' << aut.next(q, a) << '\n';
  return out.str();
}

LassoWord parse_lasso(std::string_view text, const Alphabet& alphabet) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) throw ParseError("lasso needs ';' between stem and period", 1);
  if (text.find(';', semi + 1) != std::string_view::npos) throw ParseError("lasso has more than one ';'", 1);
  auto read = [&](std::string_view part, std::size_t offset) {
    std::vector<Letter> out;
    std::size_t i = 0;
    while (i < part.size()) {
      while (i < part.size() && std::isspace(static_cast<unsigned char>(part[i]))) ++i;
      const std::size_t start = i;
      while (i < part.size() && !std::isspace(static_cast<unsigned char>(part[i]))) ++i;
      if (i == start) break;
      const auto name = part.substr(start, i - start);
      auto l = alphabet.find(name);
      if (!l) throw ParseError("unknown letter '" + std::string(name) + "'", 1, offset + start + 1);
      out.push_back(*l);
    }
    return out;
  };
  LassoWord w;
  w.stem = read(text.substr(0, semi), 0);
  w.period = read(text.substr(semi + 1), semi + 1);
  if (w.period.empty()) throw ParseError("lasso period must be nonempty", 1, semi + 1);
  return w;
}

std::string lasso_to_text(const LassoWord& w, const Alphabet& alphabet) {
  std::string out;
  for (auto l : w.stem) out += alphabet.name(l) + ' ';
  out += ';';
  for (auto l : w.period) out += ' ' + alphabet.name(l);
  return out;
}

}  // namespace omega
