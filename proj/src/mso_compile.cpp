#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <tuple>

#include "omega/complement.hpp"
#include "omega/mso.hpp"
#include "omega/simulation.hpp"

namespace omega::mso {

// ---------------------------------------------------------------------------
// Base automata

BuchiAutomaton sing_automaton() {
  BuchiAutomaton a(Alphabet::valuations(1), 2);
  a.set_accepting(1);
  a.add_transition(0, 0, 0);
  a.add_transition(0, 1, 1);
  a.add_transition(1, 0, 1);
  return a;
}

BuchiAutomaton min_automaton() {
  // Letter index: X is the high bit, Y the low bit.
  BuchiAutomaton a(Alphabet::valuations(2), 2);
  a.set_accepting(0);
  a.set_accepting(1);
  a.add_transition(0, 0b00, 0);
  a.add_transition(0, 0b10, 1);
  a.add_transition(0, 0b11, 1);
  for (Letter l = 0; l < 4; ++l) a.add_transition(1, l, 1);
  return a;
}

BuchiAutomaton sub_automaton() {
  BuchiAutomaton a(Alphabet::valuations(2), 1);
  a.set_accepting(0);
  for (Letter l : {0b00u, 0b01u, 0b11u}) a.add_transition(0, l, 0);
  return a;
}

BuchiAutomaton atom_automaton(Atom atom, bool negated, std::size_t cap) {
  BuchiAutomaton a = atom == Atom::Sing ? sing_automaton() : atom == Atom::MinLe ? min_automaton() : sub_automaton();
  return negated ? complement_buchi(a, cap) : a;
}

// ---------------------------------------------------------------------------
// Constructions

namespace {

std::size_t track_count(const Alphabet& alphabet) {
  std::size_t n = 0;
  while ((std::size_t{1} << n) < alphabet.size()) ++n;
  if ((std::size_t{1} << n) != alphabet.size() || !(Alphabet::valuations(n) == alphabet))
    throw ValidationError("automaton is not over a valuation alphabet");
  return n;
}

}  // namespace

BuchiAutomaton weaken(const BuchiAutomaton& aut, std::size_t tracks, const std::vector<std::size_t>& pi) {
  const std::size_t m = track_count(aut.alphabet());
  if (pi.size() != m) throw ValidationError("weaken: projection arity differs from the automaton's tracks");
  for (auto t : pi)
    if (t >= tracks) throw ValidationError("weaken: projection reads a missing track");
  if (tracks > 20) throw ValidationError("weaken: at most 20 tracks supported");
  BuchiAutomaton out(Alphabet::valuations(tracks), aut.state_count(), aut.initial());
  for (State q = 0; q < aut.state_count(); ++q) out.set_accepting(q, aut.accepting(q));
  const Letter letters = Letter{1} << tracks;
  for (Letter b = 0; b < letters; ++b) {
    Letter a = 0;
    for (std::size_t i = 0; i < m; ++i) a = a << 1 | (b >> (tracks - 1 - pi[i]) & 1);
    for (State q = 0; q < aut.state_count(); ++q)
      for (State d : aut.successors(q, a)) out.add_transition(q, b, d);
  }
  return out;
}

BuchiAutomaton union_automaton(const std::vector<BuchiAutomaton>& parts) {
  if (parts.empty()) throw ValidationError("union of no automata");
  const Alphabet& alphabet = parts.front().alphabet();
  BuchiAutomaton out(alphabet, 1);
  for (const auto& p : parts) {
    if (!(p.alphabet() == alphabet)) throw ValidationError("union: automata have different alphabets");
    if (p.state_count() == 0) continue;
    const auto offset = static_cast<State>(out.state_count());
    for (State q = 0; q < p.state_count(); ++q) out.add_state(p.accepting(q));
    for (const auto& t : p.transitions()) {
      out.add_transition(offset + t.src, t.letter, offset + t.dst);
      if (t.src == p.initial()) out.add_transition(0, t.letter, offset + t.dst);
    }
  }
  return out;
}

BuchiAutomaton intersect_automaton(const BuchiAutomaton& a, const BuchiAutomaton& b, std::size_t cap) {
  if (!(a.alphabet() == b.alphabet())) throw ValidationError("intersection: automata have different alphabets");
  BuchiAutomaton out(a.alphabet(), 0);
  if (a.state_count() == 0 || b.state_count() == 0) {
    out.add_state(false);
    return out;
  }
  // (p, q, phase): phase 0 waits for an accepting p, phase 1 for an accepting q.
  std::map<std::tuple<State, State, int>, State> index;
  std::vector<std::tuple<State, State, int>> states;
  auto intern = [&](State p, State q, int phase) {
    auto [it, fresh] = index.try_emplace({p, q, phase}, static_cast<State>(states.size()));
    if (fresh) {
      if (states.size() >= cap) throw CapExceeded("intersection", cap);
      states.emplace_back(p, q, phase);
      out.add_state(phase == 0 && a.accepting(p));
    }
    return it->second;
  };
  intern(a.initial(), b.initial(), 0);
  for (State cur = 0; cur < states.size(); ++cur) {
    const auto [p, q, phase] = states[cur];
    const int next = phase == 0 ? (a.accepting(p) ? 1 : 0) : (b.accepting(q) ? 0 : 1);
    for (Letter l = 0; l < a.alphabet().size(); ++l)
      for (State p2 : a.successors(p, l))
        for (State q2 : b.successors(q, l)) out.add_transition(cur, l, intern(p2, q2, next));
  }
  return out;
}

BuchiAutomaton project(const BuchiAutomaton& aut, std::size_t m) {
  const std::size_t total = track_count(aut.alphabet());
  if (m > total) throw ValidationError("project: more tracks erased than present");
  const std::size_t n = total - m;
  BuchiAutomaton out(Alphabet::valuations(n), aut.state_count(), aut.initial());
  for (State q = 0; q < aut.state_count(); ++q) out.set_accepting(q, aut.accepting(q));
  for (const auto& t : aut.transitions()) out.add_transition(t.src, t.letter >> m, t.dst);
  return out;
}

std::optional<LassoWord> project_witness(const BuchiAutomaton& aut, std::size_t m, const LassoWord& alpha) {
  const std::size_t total = track_count(aut.alphabet());
  if (m > total) throw ValidationError("project_witness: more tracks erased than present");
  const std::size_t n = total - m;
  validate_lasso(alpha, Alphabet::valuations(n));
  if (alpha.period.empty()) throw ValidationError("lasso period must be nonempty");

  const BuchiAutomaton ex = project(aut, m);
  const std::size_t len = alpha.length();
  const std::size_t states = ex.state_count();
  if (states == 0) return std::nullopt;
  auto id = [&](State q, std::size_t pos) { return q * len + pos; };
  auto succ = [&](std::size_t v) {
    std::vector<std::size_t> out;
    const State q = static_cast<State>(v / len);
    const std::size_t pos = v % len;
    for (State d : ex.successors(q, alpha.at(pos))) out.push_back(id(d, alpha.next(pos)));
    return out;
  };
  // Shortest paths from `from` (exclusive of the start unless reached again).
  auto bfs = [&](std::size_t from, std::size_t target, bool need_step) -> std::optional<std::vector<std::size_t>> {
    std::vector<std::size_t> parent(states * len, SIZE_MAX);
    std::deque<std::size_t> queue;
    if (!need_step) {
      if (from == target) return std::vector<std::size_t>{from};
      parent[from] = from;
    }
    queue.push_back(from);
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (auto w : succ(v)) {
        if (parent[w] != SIZE_MAX) continue;
        parent[w] = v;
        if (w == target) {
          std::vector<std::size_t> path{w};
          for (std::size_t x = v; x != from; x = parent[x]) path.push_back(x);
          path.push_back(from);
          std::reverse(path.begin(), path.end());
          return path;
        }
        queue.push_back(w);
      }
    }
    return std::nullopt;
  };

  const std::size_t start = id(ex.initial(), 0);
  std::vector<bool> reach(states * len, false);
  std::vector<std::size_t> order{start};
  reach[start] = true;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto w : succ(order[i]))
      if (!reach[w]) {
        reach[w] = true;
        order.push_back(w);
      }
  for (std::size_t v : order) {
    if (!ex.accepting(static_cast<State>(v / len))) continue;
    auto cycle = bfs(v, v, true);
    if (!cycle) continue;
    auto stem = bfs(start, v, false);
    // Run: stem nodes then cycle nodes; letter i joins node i and i + 1.
    std::vector<std::size_t> run = *stem;
    const std::size_t s = run.size() - 1;
    run.insert(run.end(), cycle->begin() + 1, cycle->end());
    std::vector<Letter> beta;
    for (std::size_t i = 0; i + 1 < run.size(); ++i) {
      const State q = static_cast<State>(run[i] / len), d = static_cast<State>(run[i + 1] / len);
      const Letter a = alpha.at(i);
      std::optional<Letter> pick;
      for (Letter b = 0; b < (Letter{1} << m) && !pick; ++b)
        if (aut.has_transition(q, a << m | b, d)) pick = b;
      beta.push_back(*pick);
    }
    LassoWord out;
    out.stem.assign(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(s));
    out.period.assign(beta.begin() + static_cast<std::ptrdiff_t>(s), beta.end());
    return out;
  }
  return std::nullopt;
}

LassoWord juxtapose(const LassoWord& w1, std::size_t n, const LassoWord& w2, std::size_t m) {
  validate_lasso(w1, Alphabet::valuations(n));
  validate_lasso(w2, Alphabet::valuations(m));
  if (w1.period.empty() || w2.period.empty()) throw ValidationError("lasso period must be nonempty");
  const std::size_t stem = std::max(w1.stem.size(), w2.stem.size());
  const std::size_t period = std::lcm(w1.period.size(), w2.period.size());
  LassoWord out;
  for (std::size_t i = 0; i < stem + period; ++i) {
    const Letter l = w1.at(i) << m | w2.at(i);
    (i < stem ? out.stem : out.period).push_back(l);
  }
  return out;
}

LassoWord select_tracks(const LassoWord& w, std::size_t tracks, std::size_t first, std::size_t count) {
  if (first + count > tracks) throw ValidationError("select_tracks: track range out of bounds");
  validate_lasso(w, Alphabet::valuations(tracks));
  const std::size_t shift = tracks - first - count;
  const Letter mask = (Letter{1} << count) - 1;
  LassoWord out;
  for (Letter l : w.stem) out.stem.push_back(l >> shift & mask);
  for (Letter l : w.period) out.period.push_back(l >> shift & mask);
  return out;
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

using Kind = CoreFormula::Kind;

BuchiAutomaton empty_language(std::size_t tracks) { return BuchiAutomaton(Alphabet::valuations(tracks), 1); }

BuchiAutomaton universal_language(std::size_t tracks) {
  BuchiAutomaton a(Alphabet::valuations(tracks), 1);
  a.set_accepting(0);
  for (Letter l = 0; l < a.alphabet().size(); ++l) a.add_transition(0, l, 0);
  return a;
}

class Compiler {
 public:
  explicit Compiler(const CompileOptions& options) : options_(options) {}

  CompileStats stats;

  // Automaton over the node's own free variables, in first-occurrence order.
  BuchiAutomaton build(const CoreFormula& f, bool negated = false) {
    if (f.kind == Kind::Literal) return literal(f.literal, negated);
    const auto vars = free_variables(f);
    if (f.block.empty()) return boolean(f, vars, negated);
    if (negated) return complement(build(f, false));
    std::vector<std::string> ctx = vars;
    ctx.insert(ctx.end(), f.block.begin(), f.block.end());
    const bool forall = f.kind == Kind::Forall;
    std::vector<BuchiAutomaton> parts;
    for (const auto& c : f.children) parts.push_back(lift(build(c, forall), free_variables(c), ctx));
    BuchiAutomaton u = parts.empty() ? empty_language(ctx.size()) : union_automaton(parts);
    BuchiAutomaton p = simplify(project(simplify(u), f.block.size()));
    return forall ? complement(p) : p;
  }

  // Nodes with an empty block are plain conjunctions and disjunctions;
  // negation goes to the children.
  BuchiAutomaton boolean(const CoreFormula& f, const std::vector<std::string>& vars, bool negated) {
    const bool product = (f.kind == Kind::Forall) != negated;
    std::vector<BuchiAutomaton> parts;
    for (const auto& c : f.children) parts.push_back(lift(build(c, negated), free_variables(c), vars));
    if (parts.empty()) return product ? universal_language(vars.size()) : empty_language(vars.size());
    if (!product) return simplify(union_automaton(parts));
    std::stable_sort(parts.begin(), parts.end(),
                     [](const BuchiAutomaton& x, const BuchiAutomaton& y) { return x.state_count() < y.state_count(); });
    BuchiAutomaton acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = simplify(intersect_automaton(acc, parts[i], options_.cap));
    return acc;
  }

  // Union of the children of an Exists node over (free variables, block).
  BuchiAutomaton exists_body(const CoreFormula& f) {
    std::vector<std::string> ctx = free_variables(f);
    ctx.insert(ctx.end(), f.block.begin(), f.block.end());
    std::vector<BuchiAutomaton> parts;
    for (const auto& c : f.children) parts.push_back(lift(build(c), free_variables(c), ctx));
    return parts.empty() ? empty_language(ctx.size()) : simplify(union_automaton(parts));
  }

  BuchiAutomaton lift(const BuchiAutomaton& a, const std::vector<std::string>& vars,
                      const std::vector<std::string>& ctx) {
    std::vector<std::size_t> pi;
    for (const auto& v : vars) {
      auto it = std::find(ctx.begin(), ctx.end(), v);
      if (it == ctx.end()) throw ValidationError("variable '" + v + "' is missing from the track list");
      pi.push_back(static_cast<std::size_t>(it - ctx.begin()));
    }
    if (pi.size() == ctx.size() && std::is_sorted(pi.begin(), pi.end())) return a;
    return weaken(a, ctx.size(), pi);
  }

  BuchiAutomaton simplify(const BuchiAutomaton& a) {
    BuchiAutomaton r = options_.reduce ? reduce(a) : a;
    stats.largest_automaton = std::max(stats.largest_automaton, r.state_count());
    return r;
  }

 private:
  BuchiAutomaton literal(const Literal& l, bool negated) {
    const bool neg = l.negated != negated;
    const auto key = std::make_pair(static_cast<int>(l.atom), neg);
    auto it = atoms_.find(key);
    if (it == atoms_.end()) {
      BuchiAutomaton base = atom_automaton(l.atom, false);
      if (neg) base = complement(base);
      it = atoms_.emplace(key, std::move(base)).first;
    }
    std::vector<std::string> args{l.x};
    if (l.atom != Atom::Sing) args.push_back(l.y);
    std::vector<std::string> vars;
    for (const auto& a : args)
      if (std::find(vars.begin(), vars.end(), a) == vars.end()) vars.push_back(a);
    std::vector<std::size_t> pi;
    for (const auto& a : args) pi.push_back(static_cast<std::size_t>(std::find(vars.begin(), vars.end(), a) - vars.begin()));
    if (pi.size() == vars.size()) return it->second;
    return weaken(it->second, vars.size(), pi);
  }

  BuchiAutomaton complement(const BuchiAutomaton& a) {
    ++stats.complementations;
    stats.largest_complement_input = std::max(stats.largest_complement_input, a.state_count());
    return simplify(complement_buchi(a, options_.cap));
  }

  CompileOptions options_;
  std::map<std::pair<int, bool>, BuchiAutomaton> atoms_;
};

}  // namespace

Compiled compile(const CoreFormula& f, const CompileOptions& options) {
  return compile(f, free_variables(f), options);
}

Compiled compile(const CoreFormula& f, const std::vector<std::string>& tracks, const CompileOptions& options) {
  if (!is_core_shaped(f)) throw ValidationError("compile: formula is not in the core fragment");
  Compiler c(options);
  BuchiAutomaton a = c.lift(c.build(f), free_variables(f), tracks);
  return Compiled{std::move(a), tracks, c.stats};
}

Decision decide(const Formula& f, const CompileOptions& options) {
  if (!free_variables(f).empty()) throw ValidationError("decide: formula has free variables");
  const CoreFormula g = normalize(f);
  Decision d;
  d.compiled = compile(g, {}, options);
  d.value = buchi_emptiness(d.compiled.automaton).has_value();
  if (d.value && g.kind == Kind::Exists && !g.block.empty()) {
    Compiler c(options);
    const BuchiAutomaton body = c.exists_body(g);
    d.witness_variables = g.block;
    d.witness = project_witness(body, g.block.size(), LassoWord{{}, {0}});
  }
  return d;
}

bool decide_sentence(const Formula& f, const CompileOptions& options) { return decide(f, options).value; }

// ---------------------------------------------------------------------------
// The partition formulas

Formula psi_k(std::size_t k) {
  auto X = [](std::size_t i) { return "X" + std::to_string(i); };
  std::vector<Formula> some, disjoint;
  for (std::size_t i = 0; i <= k; ++i) {
    some.push_back(in("x", X(i)));
    for (std::size_t j = i + 1; j <= k; ++j) disjoint.push_back(negation(conj(in("x", X(i)), in("x", X(j)))));
  }
  Formula cell = disjoint.empty() ? disj(some) : conj(disj(some), conj(disjoint));
  Formula partition = all1("x", std::move(cell));

  std::vector<Formula> options;
  for (std::size_t i = 0; i <= k; ++i) {
    Formula recurrent = all1("x", ex1("y", conj(le("x", "y"), in("y", X(i)))));
    std::vector<Formula> vanish;
    for (std::size_t j = i + 1; j <= k; ++j)
      vanish.push_back(ex1("x", all1("y", implies(le("x", "y"), negation(in("y", X(j)))))));
    options.push_back(vanish.empty() ? std::move(recurrent) : conj(std::move(recurrent), conj(vanish)));
  }
  Formula body = implies(std::move(partition), disj(options));
  for (std::size_t i = k + 1; i-- > 0;) body = all2(X(i), std::move(body));
  return body;
}

}  // namespace omega::mso
