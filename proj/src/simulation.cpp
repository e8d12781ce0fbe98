#include "omega/simulation.hpp"

#include <algorithm>

namespace omega {

namespace {

using Bits = std::vector<std::uint64_t>;

bool test(const Bits& b, std::size_t i) { return b[i / 64] >> (i % 64) & 1; }
void set(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }
void clear(Bits& b, std::size_t i) { b[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

bool intersects(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return true;
  return false;
}

}  // namespace

std::vector<Bits> direct_simulation(const BuchiAutomaton& aut, std::size_t max_states) {
  const std::size_t n = aut.state_count();
  const std::size_t k = aut.alphabet().size();
  if (n == 0 || n > max_states) return {};
  const std::size_t words = (n + 63) / 64;

  std::vector<Bits> succ(n * k, Bits(words, 0));
  for (State q = 0; q < n; ++q)
    for (Letter a = 0; a < k; ++a)
      for (State d : aut.successors(q, a)) set(succ[q * k + a], d);

  std::vector<Bits> rel(n, Bits(words, 0));
  for (State q = 0; q < n; ++q)
    for (State p = 0; p < n; ++p)
      if (!aut.accepting(q) || aut.accepting(p)) set(rel[q], p);

  for (bool changed = true; changed;) {
    changed = false;
    for (State q = 0; q < n; ++q) {
      for (State p = 0; p < n; ++p) {
        if (p == q || !test(rel[q], p)) continue;
        bool ok = true;
        for (Letter a = 0; a < k && ok; ++a)
          for (State d : aut.successors(q, a))
            if (!intersects(rel[d], succ[p * k + a])) {
              ok = false;
              break;
            }
        if (!ok) {
          clear(rel[q], p);
          changed = true;
        }
      }
    }
  }
  return rel;
}

std::vector<Bits> backward_simulation(const BuchiAutomaton& aut, std::size_t max_states) {
  const std::size_t n = aut.state_count();
  const std::size_t k = aut.alphabet().size();
  if (n == 0 || n > max_states) return {};
  const std::size_t words = (n + 63) / 64;

  std::vector<Bits> pred(n * k, Bits(words, 0));
  std::vector<std::vector<State>> preds(n * k);
  for (const auto& t : aut.transitions()) {
    set(pred[t.dst * k + t.letter], t.src);
    preds[t.dst * k + t.letter].push_back(t.src);
  }

  std::vector<Bits> rel(n, Bits(words, 0));
  for (State q = 0; q < n; ++q)
    for (State p = 0; p < n; ++p)
      if ((!aut.accepting(q) || aut.accepting(p)) && (q != aut.initial() || p == aut.initial())) set(rel[q], p);

  for (bool changed = true; changed;) {
    changed = false;
    for (State q = 0; q < n; ++q) {
      for (State p = 0; p < n; ++p) {
        if (p == q || !test(rel[q], p)) continue;
        bool ok = true;
        for (Letter a = 0; a < k && ok; ++a)
          for (State d : preds[q * k + a])
            if (!intersects(rel[d], pred[p * k + a])) {
              ok = false;
              break;
            }
        if (!ok) {
          clear(rel[q], p);
          changed = true;
        }
      }
    }
  }
  return rel;
}

std::vector<Bits> delayed_simulation(const BuchiAutomaton& aut, std::size_t max_states) {
  const std::size_t n = aut.state_count();
  const std::size_t k = aut.alphabet().size();
  if (n == 0 || n > max_states) return {};
  // Position (q, p, pending) at index (q * n + p) * 2 + pending.  Duplicator
  // wins when pending is clear infinitely often.
  const std::size_t positions = n * n * 2;
  auto pos = [n](State q, State p, bool pending) { return (static_cast<std::size_t>(q) * n + p) * 2 + pending; };
  std::vector<std::vector<std::vector<State>>> succ(n, std::vector<std::vector<State>>(k));
  for (State q = 0; q < n; ++q)
    for (Letter a = 0; a < k; ++a) succ[q][a] = aut.successors(q, a);

  // Duplicator answers every spoiler move into `target`.
  auto cpre = [&](const std::vector<char>& target, State q, State p, bool pending) {
    for (Letter a = 0; a < k; ++a)
      for (State q2 : succ[q][a]) {
        bool answered = false;
        for (State p2 : succ[p][a]) {
          const bool next = !aut.accepting(p2) && (pending || aut.accepting(q2));
          if (target[pos(q2, p2, next)]) {
            answered = true;
            break;
          }
        }
        if (!answered) return false;
      }
    return true;
  };

  std::vector<char> z(positions, 1);
  for (;;) {
    std::vector<char> y(positions, 0);
    for (bool grew = true; grew;) {
      grew = false;
      for (State q = 0; q < n; ++q)
        for (State p = 0; p < n; ++p)
          for (int b = 0; b < 2; ++b) {
            const std::size_t i = pos(q, p, b);
            if (y[i] || !z[i]) continue;
            if ((b == 0 && cpre(z, q, p, false)) || cpre(y, q, p, b)) {
              y[i] = 1;
              grew = true;
            }
          }
    }
    if (y == z) break;
    z = std::move(y);
  }

  const std::size_t words = (n + 63) / 64;
  std::vector<Bits> rel(n, Bits(words, 0));
  for (State q = 0; q < n; ++q)
    for (State p = 0; p < n; ++p)
      if (z[pos(q, p, aut.accepting(q) && !aut.accepting(p))]) set(rel[q], p);
  return rel;
}

namespace {

// Quotient by mutual `rel`; the class of the initial state is 0.
BuchiAutomaton quotient(const BuchiAutomaton& aut, const std::vector<Bits>& rel, bool prune) {
  const std::size_t n = aut.state_count();
  const std::size_t k = aut.alphabet().size();
  auto le = [&](State q, State p) { return test(rel[q], p); };
  std::vector<State> cls(n, kNoState);
  std::vector<State> rep;
  auto assign = [&](State q) {
    if (cls[q] != kNoState) return;
    const auto c = static_cast<State>(rep.size());
    rep.push_back(q);
    for (State p = q; p < n; ++p)
      if (cls[p] == kNoState && le(q, p) && le(p, q)) cls[p] = c;
    cls[q] = c;
  };
  assign(aut.initial());
  for (State q = 0; q < n; ++q) assign(q);

  BuchiAutomaton out(aut.alphabet(), 0);
  for (State c = 0; c < rep.size(); ++c) {
    bool acc = false;
    for (State q = 0; q < n; ++q) acc = acc || (cls[q] == c && aut.accepting(q));
    out.add_state(acc);
  }
  out.set_initial(0);
  for (State c = 0; c < rep.size(); ++c) {
    for (Letter a = 0; a < k; ++a) {
      std::vector<State> targets;
      for (State q = 0; q < n; ++q) {
        if (cls[q] != c) continue;
        for (State d : aut.successors(q, a)) targets.push_back(rep[cls[d]]);
      }
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      for (State d : targets) {
        bool dominated = false;
        for (State e : targets)
          if (prune && e != d && le(d, e) && !le(e, d)) {
            dominated = true;
            break;
          }
        if (!dominated) out.add_transition(c, a, cls[d]);
      }
    }
  }
  return trim(out);
}

}  // namespace

BuchiAutomaton reduce(const BuchiAutomaton& input) {
  BuchiAutomaton aut = trim(input);
  for (;;) {
    const std::size_t states = aut.state_count(), transitions = aut.transition_count();
    if (const auto direct = direct_simulation(aut); !direct.empty()) aut = quotient(aut, direct, true);
    if (const auto backward = backward_simulation(aut); !backward.empty()) aut = quotient(aut, backward, false);
    if (const auto delayed = delayed_simulation(aut); !delayed.empty()) aut = quotient(aut, delayed, false);
    if (aut.state_count() == states && aut.transition_count() == transitions) return aut;
  }
}

}  // namespace omega
