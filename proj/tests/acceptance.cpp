// Acceptance suite: one PASS/FAIL line per criterion.  Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>

#include "omega/automata.hpp"
#include "omega/complement.hpp"
#include "omega/determinize.hpp"
#include "omega/mso.hpp"
#include "omega/ramsey.hpp"
#include "omega/semigroup.hpp"
#include "support.hpp"

using namespace omega;
using namespace omega::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const Alphabet kAB({"a", "b"});

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int number, const char* title, const std::function<Outcome()>& run) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  if (!o.pass) ++failures;
  std::printf("criterion %d %s: %s (%s; %.2f s)\n", number, o.pass ? "PASS" : "FAIL", title, o.detail.c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

Outcome complement_exclusivity() {
  std::mt19937_64 rng(1);
  std::size_t pairs = 0, bad = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < 500; ++i) {
    const auto a = random_buchi(rng, 1 + i % 3, kAB, 0.5);
    const auto c = complement_buchi(a);
    for (int k = 0; k < 5; ++k, ++pairs) {
      const auto w = random_lasso(rng, 2);
      if (buchi_accepts_lasso(a, w) == buchi_accepts_lasso(c, w)) ++bad;
    }
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 120, std::to_string(pairs) + " pairs, " + std::to_string(bad) + " failures"};
}

Outcome determinize_agreement() {
  std::mt19937_64 rng(2);
  std::size_t pairs = 0, bad = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < 500; ++i) {
    const auto a = random_buchi(rng, 1 + i % 3, kAB, 0.5);
    const auto d = determinize(a);
    for (int k = 0; k < 5; ++k, ++pairs) {
      const auto w = random_lasso(rng, 2);
      if (rabin_accepts_lasso(d, w) != buchi_accepts_lasso(a, w)) ++bad;
    }
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 300, std::to_string(pairs) + " pairs, " + std::to_string(bad) + " failures"};
}

Lasso<TransitionMatrix> random_tree_lasso(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_int_distribution<std::size_t> len(0, 4), plen(1, 4);
  Lasso<TransitionMatrix> w;
  for (std::size_t i = len(rng); i > 0; --i) w.stem.push_back(random_tree_shaped(rng, dim));
  for (std::size_t i = plen(rng); i > 0; --i) w.period.push_back(random_tree_shaped(rng, dim));
  return w;
}

Outcome qscheme_oracle() {
  std::mt19937_64 rng(3);
  // Explicit automata over all tree-shaped letters, with letters looked up by name.
  std::vector<Materialized<QScheme>> explicit_aut;
  for (std::size_t n = 1; n <= 3; ++n) explicit_aut.push_back(qscheme_rabin_automaton(n, 0));
  std::size_t bad = 0, accepted = 0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + i % 3;
    const auto w = random_tree_lasso(rng, n);
    const bool expected = qdag_accepting_path(n, 0, w);
    accepted += expected;
    const auto& ex = explicit_aut[n - 1].automaton;
    LassoWord letters;
    for (const auto& m : w.stem) letters.stem.push_back(ex.alphabet().index(m.compact()));
    for (const auto& m : w.period) letters.period.push_back(ex.alphabet().index(m.compact()));
    if (accepts_lasso(QSchemeAutomaton(n, 0), w) != expected || rabin_accepts_lasso(ex, letters) != expected) ++bad;
  }
  return {bad == 0, "500 lassos (" + std::to_string(accepted) + " accepting), " + std::to_string(bad) + " failures"};
}

Outcome mso_decision() {
  std::ostringstream detail;
  bool pass = true;
  for (std::size_t k = 0; k <= 1; ++k) {
    const auto t0 = Clock::now();
    const bool v = mso::decide_sentence(mso::psi_k(k));
    const double t = seconds_since(t0);
    pass = pass && v && t < 300;
    detail << "psi_" << k << "=" << (v ? "true" : "false") << " in " << t << " s, ";
  }
  for (std::size_t k = 2; k <= 3; ++k) {
    const auto t0 = Clock::now();
    detail << "psi_" << k << "=";
    try {
      detail << (mso::decide_sentence(mso::psi_k(k)) ? "true" : "false");
    } catch (const CapExceeded& e) {
      detail << "capped";
    }
    detail << " in " << seconds_since(t0) << " s, ";
  }
  std::size_t correct = 0, dual = 0;
  for (const auto& s : mso_corpus()) {
    const auto f = mso::parse(s.text);
    const bool v = mso::decide_sentence(f);
    correct += v == s.value;
    dual += mso::decide_sentence(mso::negation(f)) == !v;
  }
  const std::size_t total = mso_corpus().size();
  pass = pass && correct == total && dual == total;
  detail << "corpus " << correct << "/" << total << ", negations " << dual << "/" << total;
  return {pass, detail.str()};
}

Outcome semigroup_suite() {
  const auto t0 = Clock::now();
  std::size_t bad = 0;
  constexpr Tri Z = Tri::Zero, O = Tri::One, S = Tri::Star;
  const Tri all[3] = {Z, O, S};
  const Tri add[3][3] = {{Z, O, S}, {O, O, S}, {S, S, S}};
  const Tri mul[3][3] = {{Z, Z, Z}, {Z, O, S}, {Z, S, S}};
  std::size_t cells = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j, cells += 2) {
      bad += tri_add(all[i], all[j]) != add[i][j];
      bad += tri_mul(all[i], all[j]) != mul[i][j];
    }

  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t dim = 1 + i % 5;
    const auto a = random_matrix(rng, dim), b = random_matrix(rng, dim), c = random_matrix(rng, dim);
    bad += mat_mul(mat_mul(a, b), c) != mat_mul(a, mat_mul(b, c));
  }
  for (int i = 0; i < 500; ++i) {
    const auto aut = random_buchi(rng, 1 + i % 4, kAB);
    const auto u = random_word(rng, 2, 6), v = random_word(rng, 2, 6);
    auto uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    bad += word_image(aut, uv) != mat_mul(word_image(aut, u), word_image(aut, v));
  }

  auto check = [&](const FiniteSemigroup& s) {
    if (!check_le_lrh(green_relations(s)) || !check_h_groups(s)) ++bad;
  };
  std::size_t generated = 0;
  for (std::size_t n = 1; n <= 5; ++n) generated += enumerate_semigroups(n, check);
  const auto hand = handcrafted_semigroups();
  for (const auto& [name, s] : hand) check(s);

  const double t = seconds_since(t0);
  return {bad == 0 && t < 60, std::to_string(cells) + " table cells, 1000 triples, 500 splits, " +
                                  std::to_string(generated) + " generated + " + std::to_string(hand.size()) +
                                  " handcrafted semigroups, " + std::to_string(bad) + " failures"};
}

Outcome structural_invariants() {
  std::mt19937_64 rng(6);
  std::size_t bad = 0;
  std::size_t steps = 0;
  QScheme s;
  std::size_t n = 0;
  while (steps < 10000) {
    if (steps % 500 == 0 || s.nodes().empty()) {
      n = 1 + (steps / 500) % 6;
      s = qscheme_initial(n, 0);
    }
    auto r = qscheme_step(s, random_tree_shaped(rng, n));
    ++steps;
    if (!r) {
      s = qscheme_initial(n, 0);
      continue;
    }
    if (!r->first.audit().empty()) ++bad;
    s = std::move(r->first);
  }

  for (int i = 0; i < 500; ++i) {
    const std::size_t dim = 1 + i % 4;
    Lasso<TransitionMatrix> w;
    std::uniform_int_distribution<std::size_t> len(0, 4), plen(1, 4);
    for (std::size_t k = len(rng); k > 0; --k) w.stem.push_back(random_dag_letter(rng, dim, 0.4));
    for (std::size_t k = plen(rng); k > 0; --k) w.period.push_back(random_dag_letter(rng, dim, 0.4));
    const auto out = transducer_output(TreeShapingTransducer(dim, 0), w);
    for (std::size_t p = 0; p < out.length() + out.period.size(); ++p) bad += !out.at(p).tree_shaped();
    const std::size_t horizon = w.length() + 3 * w.period.size() + 4;
    bad += qdag_reachable(dim, 0, w, horizon) != qdag_reachable(dim, 0, out, horizon);
  }

  const Alphabet xyz({"x", "y", "z"});
  for (int i = 0; i < 300; ++i) {
    const auto base = i % 2 ? AcceptanceBase::State : AcceptanceBase::Transition;
    const auto aut = random_rabin(rng, 1 + i % 4, xyz, 1 + i % 3, base);
    const auto t = random_transducer(rng, 1 + i % 3, kAB, xyz);
    const auto w = random_lasso(rng, 2);
    bad += rabin_accepts_lasso(compose_rabin_transducer(aut, t), w) !=
           rabin_accepts_lasso(aut, transducer_output_lasso(t, w));
  }
  return {bad == 0, "10000 scheme steps, 500 tree-shaping lassos, 300 compositions, " + std::to_string(bad) +
                        " failures"};
}

Outcome emptiness_consistency() {
  std::mt19937_64 rng(7);
  std::size_t bad = 0, empty = 0;
  for (int i = 0; i < 500; ++i) {
    const auto a = random_buchi(rng, 1 + i % 5, kAB, 0.4);
    if (const auto w = buchi_emptiness(a)) {
      bad += !buchi_accepts_lasso(a, *w);
    } else {
      ++empty;
      for (int k = 0; k < 50; ++k) bad += buchi_accepts_lasso(a, random_lasso(rng, 2));
    }
  }
  return {bad == 0, "500 automata (" + std::to_string(empty) + " empty), " + std::to_string(bad) + " failures"};
}

}  // namespace

int main() {
  report(1, "complement exclusivity", complement_exclusivity);
  report(2, "determinisation agreement", determinize_agreement);
  report(3, "Q-scheme oracle equivalence", qscheme_oracle);
  report(4, "MSO decision", mso_decision);
  report(5, "semigroup suite", semigroup_suite);
  report(6, "structural invariants", structural_invariants);
  report(7, "emptiness self-consistency", emptiness_consistency);
  return failures;
}
