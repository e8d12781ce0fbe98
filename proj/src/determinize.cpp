#include "omega/determinize.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace omega {

// ---------------------------------------------------------------------------
// QScheme

QScheme::QScheme(std::size_t state_count, std::vector<Node> nodes) : state_count_(state_count) {
  if (nodes.empty()) throw ValidationError("a Q-scheme needs a root");
  const std::size_t count = nodes.size();
  std::vector<std::vector<std::uint32_t>> kids(count);
  for (std::uint32_t i = 1; i < count; ++i) {
    if (nodes[i].parent >= count) throw ValidationError("Q-scheme parent index out of range");
    kids[nodes[i].parent].push_back(i);
  }
  // Smallest leaf label below every node; parents may follow children in
  // the input, so compute it recursively.
  std::vector<State> min_leaf(count, kNoState);
  std::function<State(std::uint32_t, std::size_t)> compute = [&](std::uint32_t v, std::size_t depth) -> State {
    if (depth > count) throw ValidationError("Q-scheme parent links contain a cycle");
    if (kids[v].empty()) return min_leaf[v] = nodes[v].label;
    State best = kNoState;
    for (auto c : kids[v]) best = std::min(best, compute(c, depth + 1));
    return min_leaf[v] = best;
  };
  compute(0, 0);
  for (auto& k : kids) {
    std::sort(k.begin(), k.end(), [&](auto a, auto b) {
      return min_leaf[a] != min_leaf[b] ? min_leaf[a] < min_leaf[b] : a < b;
    });
  }
  // Preorder renumbering.
  nodes_.reserve(count);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{0, kNoId}};  // (old index, new parent)
  while (!stack.empty()) {
    auto [old, parent] = stack.back();
    stack.pop_back();
    const auto idx = static_cast<std::uint32_t>(nodes_.size());
    Node n = nodes[old];
    n.parent = parent;
    n.children.clear();
    if (parent == kNoId) {
      n.id = kNoId;
      n.accepting = false;
    } else {
      nodes_[parent].children.push_back(idx);
    }
    nodes_.push_back(std::move(n));
    for (auto it = kids[old].rbegin(); it != kids[old].rend(); ++it) stack.emplace_back(*it, idx);
  }
  if (nodes_.size() != count) throw ValidationError("Q-scheme is not a tree");
  finish();
}

QScheme QScheme::canonical(std::size_t state_count, const std::vector<Node>& nodes) {
  return QScheme(state_count, nodes);
}

void QScheme::finish() {
  key_.clear();
  key_.push_back(static_cast<std::uint32_t>(state_count_));
  for (const auto& n : nodes_) {
    key_.push_back(static_cast<std::uint32_t>(n.children.size()));
    key_.push_back(n.id);
    key_.push_back(n.accepting ? 1 : 0);
    key_.push_back(n.children.empty() ? n.label : kNoState);
  }
  std::size_t h = 0;
  for (auto v : key_) h = hash_combine(h, v);
  hash_ = h;
}

std::vector<State> QScheme::leaves() const {
  std::vector<State> out;
  for (const auto& n : nodes_)
    if (n.children.empty()) out.push_back(n.label);
  return out;
}

std::string QScheme::audit() const {
  const std::size_t n = state_count_;
  if (nodes_.size() > 2 * n) return "more than 2|Q| nodes";
  if (nodes_.front().children.empty()) return "root is a leaf";
  std::vector<bool> leaf_seen(n, false), id_seen(2 * n + 1, false);
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    const Node& v = nodes_[i];
    if (v.label >= n) return "node label out of range";
    if (v.children.empty()) {
      if (leaf_seen[v.label]) return "leaf label " + std::to_string(v.label) + " repeated";
      leaf_seen[v.label] = true;
    } else if (i != 0 && v.children.size() < 2) {
      return "internal node " + std::to_string(i) + " has one child";
    }
    if (i == 0) continue;
    if (v.id == kNoId || v.id > 2 * n) return "edge identifier missing or out of range";
    if (id_seen[v.id]) return "identifier " + std::to_string(v.id) + " repeated";
    id_seen[v.id] = true;
  }
  return {};
}

std::string QScheme::to_string() const {
  std::function<std::string(std::uint32_t)> rec = [&](std::uint32_t v) {
    std::string s = "q" + std::to_string(nodes_[v].label);
    if (nodes_[v].children.empty()) return s;
    s += '[';
    bool first = true;
    for (auto c : nodes_[v].children) {
      if (!first) s += ' ';
      first = false;
      s += std::to_string(nodes_[c].id) + (nodes_[c].accepting ? "*" : "") + ":" + rec(c);
    }
    return s + ']';
  };
  return rec(0);
}

std::string QScheme::to_dot(const std::string& name) const {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    out << "  n" << i << " [label=\"q" << nodes_[i].label << "\"";
    if (nodes_[i].children.empty()) out << ", shape=doublecircle";
    out << "];\n";
  }
  for (std::uint32_t i = 1; i < nodes_.size(); ++i) {
    out << "  n" << nodes_[i].parent << " -> n" << i << " [label=\"" << nodes_[i].id << "\""
        << (nodes_[i].accepting ? ", style=bold" : ", style=dashed") << "];\n";
  }
  out << "}\n";
  return out.str();
}

QScheme qscheme_initial(std::size_t state_count, State initial) {
  if (state_count == 0) throw ValidationError("Q-scheme needs at least one state");
  if (initial >= state_count) throw ValidationError("initial state out of range");
  std::vector<QScheme::Node> nodes(2);
  nodes[0].label = initial;
  nodes[1].label = initial;
  nodes[1].parent = 0;
  nodes[1].id = 0;
  nodes[1].accepting = false;
  return QScheme(state_count, std::move(nodes));
}

std::optional<std::pair<QScheme, SchemeStepEvents>> qscheme_step(const QScheme& s, const TransitionMatrix& m) {
  using Node = QScheme::Node;
  const std::size_t n = s.state_count();
  if (m.dim() != n) throw ValidationError("letter dimension differs from the scheme's state count");
  if (!m.tree_shaped()) throw ValidationError("qscheme_step needs a tree-shaped letter");

  // Step 1: hang the letter's edges below the leaves.
  std::vector<Node> t = s.nodes();
  const std::size_t old = t.size();
  for (std::uint32_t i = 1; i < old; ++i) {
    if (!t[i].children.empty()) continue;
    for (State q = 0; q < n; ++q) {
      const Tri e = m.at(t[i].label, q);
      if (e == Tri::Zero) continue;
      Node c;
      c.label = q;
      c.parent = i;
      c.id = kNoId;
      c.accepting = e == Tri::Star;
      t[i].children.push_back(static_cast<std::uint32_t>(t.size()));
      t.push_back(std::move(c));
    }
  }

  SchemeStepEvents ev;
  // Step 2: drop branches that do not reach the new frontier.  Children
  // always have larger indices than their parents here.
  std::vector<bool> alive(t.size(), false);
  for (std::size_t i = t.size(); i-- > 0;) {
    if (i >= old) {
      alive[i] = true;
      continue;
    }
    for (auto c : t[i].children)
      if (alive[c]) alive[i] = true;
  }
  if (!alive[0]) return std::nullopt;
  for (std::uint32_t i = 1; i < t.size(); ++i)
    if (!alive[i] && t[i].id != kNoId) ev.deleted.push_back(t[i].id);
  for (auto& v : t) {
    std::vector<std::uint32_t> keep;
    for (auto c : v.children)
      if (alive[c]) keep.push_back(c);
    v.children = std::move(keep);
  }

  // Step 3: contract unary chains into their first edge.
  std::vector<Node> out;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> work{{0, kNoId}};  // (node in t, parent in out)
  while (!work.empty()) {
    auto [v, parent] = work.back();
    work.pop_back();
    Node head = t[v];
    std::uint32_t cur = v;
    if (parent != kNoId) {
      bool refreshed = false;
      while (t[cur].children.size() == 1) {
        const std::uint32_t next = t[cur].children.front();
        if (t[next].accepting) {
          head.accepting = true;
          refreshed = true;
        }
        if (t[next].id != kNoId) ev.deleted.push_back(t[next].id);
        cur = next;
      }
      if (refreshed && head.id != kNoId) ev.refreshed.push_back(head.id);
    }
    Node node;
    node.label = t[cur].label;
    node.parent = parent;
    node.id = head.id;
    node.accepting = head.accepting;
    const auto idx = static_cast<std::uint32_t>(out.size());
    out.push_back(std::move(node));
    for (auto c : t[cur].children) work.emplace_back(c, idx);
  }

  // Step 4: smallest unused identifiers, in canonical preorder.
  std::vector<Node> nodes = QScheme(n, std::move(out)).nodes();
  std::vector<bool> used(2 * n + 1, false);
  for (std::uint32_t i = 1; i < nodes.size(); ++i)
    if (nodes[i].id != kNoId) used[nodes[i].id] = true;
  std::uint32_t next_free = 0;
  for (std::uint32_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].id != kNoId) continue;
    while (next_free < used.size() && used[next_free]) ++next_free;
    if (next_free == used.size()) throw std::logic_error("Q-scheme identifier pool exhausted");
    nodes[i].id = next_free;
    used[next_free] = true;
  }

  for (auto* v : {&ev.deleted, &ev.refreshed}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  return std::make_pair(QScheme(n, std::move(nodes)), std::move(ev));
}

// ---------------------------------------------------------------------------
// Machines

QSchemeAutomaton::QSchemeAutomaton(std::size_t state_count, omega::State initial) : n_(state_count), q0_(initial) {
  if (2 * state_count + 1 > kMaxPairs) throw ValidationError("Q-scheme automaton supports at most 31 states");
  if (initial >= state_count) throw ValidationError("initial state out of range");
}

std::optional<MachineStep<QScheme>> QSchemeAutomaton::step(const QScheme& s, const TransitionMatrix& m) const {
  auto r = qscheme_step(s, m);
  if (!r) return std::nullopt;
  Marks marks;
  for (auto i : r->second.deleted) marks.e |= std::uint64_t{1} << i;
  for (auto i : r->second.refreshed) marks.f |= std::uint64_t{1} << i;
  return MachineStep<QScheme>{std::move(r->first), marks};
}

SubsetTransducer::SubsetTransducer(const BuchiAutomaton& aut) : initial_(aut.initial()) {
  if (aut.state_count() == 0 || aut.state_count() > 64) throw ValidationError("subset transducer needs 1..64 states");
  for (Letter a = 0; a < aut.alphabet().size(); ++a) letters_.push_back(transition_matrix_of_letter(aut, a));
}

std::pair<TransitionMatrix, SubsetTransducer::State> SubsetTransducer::step(State reach, Letter a) const {
  const TransitionMatrix& ma = letters_.at(a);
  TransitionMatrix out(ma.dim());
  State next = 0;
  for (omega::State q = 0; q < ma.dim(); ++q) {
    if (!(reach >> q & 1)) continue;
    for (omega::State d = 0; d < ma.dim(); ++d) {
      const Tri e = ma.at(q, d);
      if (e == Tri::Zero) continue;
      out.set(q, d, e);
      next |= State{1} << d;
    }
  }
  return {std::move(out), next};
}

std::size_t RankingHash::operator()(const RankingState& r) const noexcept {
  std::size_t h = r.size();
  for (auto q : r) h = hash_combine(h, q);
  return h;
}

RankingState TreeShapingTransducer::initial() const {
  RankingState r(n_, kUnranked);
  r.at(q0_) = 0;
  return r;
}

std::pair<TransitionMatrix, RankingState> TreeShapingTransducer::step(const RankingState& rank,
                                                                      const TransitionMatrix& m) const {
  if (m.dim() != n_ || rank.size() != n_) throw ValidationError("letter dimension differs from the state count");
  // Key of a selected edge: (source class, 0 for *, 1 for 1).
  std::vector<std::uint64_t> key(n_, ~std::uint64_t{0});
  TransitionMatrix out(n_);
  for (omega::State c = 0; c < n_; ++c) {
    omega::State best = kNoState;
    for (omega::State r = 0; r < n_; ++r) {
      const Tri e = m.at(r, c);
      if (e == Tri::Zero || rank[r] == kUnranked) continue;
      const std::uint64_t k = std::uint64_t{rank[r]} << 1 | (e == Tri::Star ? 0 : 1);
      if (k < key[c]) {
        key[c] = k;
        best = r;
      }
    }
    if (best != kNoState) out.set(best, c, m.at(best, c));
  }
  std::vector<std::uint64_t> classes;
  for (auto k : key)
    if (k != ~std::uint64_t{0}) classes.push_back(k);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  RankingState next(n_, kUnranked);
  for (omega::State c = 0; c < n_; ++c) {
    if (key[c] == ~std::uint64_t{0}) continue;
    next[c] = static_cast<std::uint32_t>(std::lower_bound(classes.begin(), classes.end(), key[c]) - classes.begin());
  }
  return {std::move(out), std::move(next)};
}

// ---------------------------------------------------------------------------
// Explicit automata

std::vector<TransitionMatrix> tree_shaped_letters(std::size_t state_count) {
  const std::size_t n = state_count;
  if (n == 0) throw ValidationError("need at least one state");
  const std::size_t radix = 2 * n + 1;  // per column: none, or (row, 1|*)
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > 10'000'000 / radix) throw ValidationError("too many tree-shaped letters to enumerate");
    total *= radix;
  }
  std::vector<TransitionMatrix> out;
  out.reserve(total);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t k = 0; k < total; ++k) {
    TransitionMatrix m(n);
    for (std::size_t c = 0; c < n; ++c) {
      if (digit[c] == 0) continue;
      const std::size_t row = (digit[c] - 1) / 2;
      m.set(row, c, (digit[c] - 1) % 2 == 0 ? Tri::One : Tri::Star);
    }
    out.push_back(std::move(m));
    for (std::size_t c = n; c-- > 0;) {
      if (++digit[c] < radix) break;
      digit[c] = 0;
    }
  }
  return out;
}

Materialized<QScheme> qscheme_rabin_automaton(std::size_t state_count, State initial, std::size_t cap) {
  const auto letters = tree_shaped_letters(state_count);
  std::vector<std::string> names;
  names.reserve(letters.size());
  for (const auto& m : letters) names.push_back(m.compact());
  return materialize(QSchemeAutomaton(state_count, initial), Alphabet(std::move(names)), letters, cap,
                     "qscheme_rabin_automaton");
}

Materialized<DeterminizeState> determinize_detailed(const BuchiAutomaton& aut, std::size_t cap) {
  const std::size_t n = aut.state_count();
  if (n == 0 || 2 * n + 1 > kMaxPairs) throw ValidationError("determinize supports 1..31 states");
  auto machine = compose(compose(QSchemeAutomaton(n, aut.initial()), TreeShapingTransducer(n, aut.initial())),
                         SubsetTransducer(aut));
  std::vector<Letter> letters(aut.alphabet().size());
  for (Letter a = 0; a < letters.size(); ++a) letters[a] = a;
  return materialize(machine, aut.alphabet(), letters, cap, "determinize");
}

RabinAutomaton determinize(const BuchiAutomaton& aut, std::size_t cap) {
  return determinize_detailed(aut, cap).automaton;
}

std::vector<TraceStep> determinize_trace(const BuchiAutomaton& aut, const LassoWord& w, std::size_t rounds) {
  validate_lasso(w, aut.alphabet());
  const std::size_t n = aut.state_count();
  const SubsetTransducer t1(aut);
  const TreeShapingTransducer t2(n, aut.initial());
  QScheme scheme = qscheme_initial(n, aut.initial());
  RankingState ranking = t2.initial();
  SubsetTransducer::State reach = t1.initial();
  std::vector<TraceStep> out;
  const std::size_t len = w.stem.size() + rounds * w.period.size();
  for (std::size_t pos = 0; pos < len; ++pos) {
    TraceStep st;
    st.position = pos;
    st.letter = w.at(pos);
    auto [dag, reach2] = t1.step(reach, st.letter);
    auto [tree, ranking2] = t2.step(ranking, dag);
    auto next = qscheme_step(scheme, tree);
    if (!next) break;
    reach = reach2;
    ranking = std::move(ranking2);
    scheme = next->first;
    st.dag_letter = std::move(dag);
    st.tree_letter = std::move(tree);
    st.scheme = std::move(next->first);
    st.events = std::move(next->second);
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace omega
