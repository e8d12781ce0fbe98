#include <doctest.h>

#include <random>

#include "omega/determinize.hpp"
#include "support.hpp"

using namespace omega;
using omega::testing::qdag_accepting_path;
using omega::testing::qdag_reachable;
using omega::testing::random_dag_letter;
using omega::testing::random_tree_shaped;

namespace {

const Alphabet kAB({"a", "b"});

QScheme::Node node(State label, std::uint32_t parent, std::uint32_t id, bool acc) {
  QScheme::Node n;
  n.label = label;
  n.parent = parent;
  n.id = id;
  n.accepting = acc;
  return n;
}

// Seven states.  Leaves carry states 1..5; internal labels are arbitrary.
QScheme running_example() {
  std::vector<QScheme::Node> nodes{
      node(0, kNoId, kNoId, false),
      node(0, 0, 2, true),   // A
      node(0, 0, 3, false),  // B
      node(1, 1, 9, false), node(2, 1, 6, true), node(3, 2, 5, false), node(4, 2, 7, false), node(5, 2, 1, true),
  };
  return QScheme::canonical(7, nodes);
}

TransitionMatrix running_letter() {
  TransitionMatrix m(7);
  m.set(0, 0, Tri::One);
  m.set(0, 1, Tri::Star);
  m.set(2, 2, Tri::One);
  m.set(2, 3, Tri::Star);
  m.set(4, 4, Tri::Star);
  m.set(5, 5, Tri::Star);
  m.set(5, 6, Tri::One);
  return m;
}

Lasso<TransitionMatrix> random_tree_lasso(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_int_distribution<std::size_t> len(0, 4), plen(1, 4);
  Lasso<TransitionMatrix> w;
  for (std::size_t i = len(rng); i > 0; --i) w.stem.push_back(random_tree_shaped(rng, dim));
  for (std::size_t i = plen(rng); i > 0; --i) w.period.push_back(random_tree_shaped(rng, dim));
  return w;
}

}  // namespace

TEST_CASE("Q-scheme running example") {
  const QScheme tau = running_example();
  CHECK(tau.audit() == "");
  CHECK(tau.to_string() == "q0[2*:q0[9:q1 6*:q2] 3:q0[5:q3 7:q4 1*:q5]]");

  const auto r = qscheme_step(tau, running_letter());
  REQUIRE(r.has_value());
  const auto& [next, ev] = *r;
  CHECK(ev.deleted == std::vector<std::uint32_t>{5, 6, 9});
  CHECK(ev.refreshed == std::vector<std::uint32_t>{2, 7});
  CHECK(next.audit() == "");
  CHECK(next.to_string() == "q0[2*:q2[0:q2 4*:q3] 3:q0[7*:q4 1*:q5[5*:q5 6:q6]]]");
  CHECK(next.leaves() == std::vector<State>{2, 3, 4, 5, 6});

  std::vector<std::uint32_t> ids;
  for (std::uint32_t i = 1; i < next.nodes().size(); ++i) ids.push_back(next.node(i).id);
  std::sort(ids.begin(), ids.end());
  CHECK(ids == std::vector<std::uint32_t>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("Q-scheme single state") {
  const QScheme init = qscheme_initial(1, 0);
  CHECK(init.to_string() == "q0[0:q0]");

  const auto star = qscheme_step(init, TransitionMatrix::parse("*"));
  REQUIRE(star);
  CHECK(star->first.to_string() == "q0[0*:q0]");
  CHECK(star->second.refreshed == std::vector<std::uint32_t>{0});
  CHECK(star->second.deleted.empty());

  const auto one = qscheme_step(init, TransitionMatrix::parse("1"));
  REQUIRE(one);
  CHECK(one->first == init);
  CHECK(one->second == SchemeStepEvents{});

  CHECK_FALSE(qscheme_step(init, TransitionMatrix::parse("0")).has_value());

  const QSchemeAutomaton a(1, 0);
  CHECK(accepts_lasso(a, Lasso<TransitionMatrix>{{}, {TransitionMatrix::parse("*")}}));
  CHECK_FALSE(accepts_lasso(a, Lasso<TransitionMatrix>{{}, {TransitionMatrix::parse("1")}}));
  CHECK(accepts_lasso(
      a, Lasso<TransitionMatrix>{{TransitionMatrix::parse("1")},
                                 {TransitionMatrix::parse("1"), TransitionMatrix::parse("*")}}));
}

TEST_CASE("Q-scheme rejects bad letters") {
  const QScheme init = qscheme_initial(2, 0);
  CHECK_THROWS_AS(qscheme_step(init, TransitionMatrix::parse("11/10")), ValidationError);
  CHECK_THROWS_AS(qscheme_step(init, TransitionMatrix::parse("1")), ValidationError);
  CHECK_THROWS_AS(qscheme_initial(2, 2), ValidationError);
}

TEST_CASE("Q-scheme canonical form ignores child order and internal labels") {
  std::vector<QScheme::Node> a{node(0, kNoId, kNoId, false), node(1, 0, 0, false), node(0, 0, 1, true)};
  std::vector<QScheme::Node> b{node(1, kNoId, kNoId, false), node(0, 0, 1, true), node(1, 0, 0, false)};
  const auto sa = QScheme::canonical(2, a), sb = QScheme::canonical(2, b);
  CHECK(sa == sb);
  CHECK(sa.hash() == sb.hash());
  CHECK(sa.to_dot().find("digraph") != std::string::npos);
}

TEST_CASE("Q-scheme invariants along random runs") {
  std::mt19937_64 rng(11);
  std::size_t steps = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    QScheme s = qscheme_initial(n, 0);
    for (int i = 0; i < 500; ++i) {
      auto r = qscheme_step(s, random_tree_shaped(rng, n));
      if (!r) {
        s = qscheme_initial(n, 0);
        continue;
      }
      const std::string problem = r->first.audit();
      REQUIRE_MESSAGE(problem.empty(), problem);
      for (auto id : r->second.refreshed)
        CHECK_FALSE(std::binary_search(r->second.deleted.begin(), r->second.deleted.end(), id));
      s = std::move(r->first);
      ++steps;
    }
  }
  CHECK(steps > 1500);
}

TEST_CASE("Q-scheme automaton agrees with the accepting-path oracle") {
  std::mt19937_64 rng(2024);
  int accepted = 0;
  for (int i = 0; i < 1500; ++i) {
    const std::size_t n = 1 + i % 4;
    const QSchemeAutomaton a(n, 0);
    const auto w = random_tree_lasso(rng, n);
    const bool expected = qdag_accepting_path(n, 0, w);
    REQUIRE(accepts_lasso(a, w) == expected);
    accepted += expected;
  }
  CHECK(accepted > 50);
}

TEST_CASE("subset transducer") {
  BuchiAutomaton aut(Alphabet({"a"}), 2);
  aut.set_accepting(1);
  aut.add_transition(0, 0, 0);
  aut.add_transition(0, 0, 1);
  const SubsetTransducer t(aut);
  auto [o1, s1] = t.step(t.initial(), 0);
  CHECK(o1.compact() == "11/00");
  CHECK(s1 == 3);
  auto [o2, s2] = t.step(s1, 0);
  CHECK(o2.compact() == "11/00");
  CHECK(s2 == 3);

  // Rows of unreachable states are cleared.
  aut.add_transition(1, 0, 0);
  const SubsetTransducer t2(aut);
  CHECK(t2.step(t2.initial(), 0).first.compact() == "11/00");
  CHECK(t2.step(3, 0).first.compact() == "11/*0");
}

TEST_CASE("tree-shaping transducer") {
  const TreeShapingTransducer t(2, 0);
  const std::uint32_t U = kUnranked;
  CHECK(t.initial() == RankingState{0, U});
  auto [o1, r1] = t.step(t.initial(), TransitionMatrix::parse("11/00"));
  CHECK(o1.compact() == "11/00");
  CHECK(r1 == RankingState{0, 0});

  // Star edges rank first.
  auto [o2, r2] = t.step(RankingState{0, U}, TransitionMatrix::parse("1*/00"));
  CHECK(o2.compact() == "1*/00");
  CHECK(r2 == RankingState{1, 0});

  // Better-ranked sources win over stars.
  auto [o3, r3] = t.step(RankingState{1, 0}, TransitionMatrix::parse("**/11"));
  CHECK(o3.compact() == "00/11");
  CHECK(r3 == RankingState{0, 0});

  // Within a class a star wins; equal keys fall back to the smaller source.
  auto [o4, r4] = t.step(RankingState{0, 0}, TransitionMatrix::parse("11/*1"));
  CHECK(o4.compact() == "01/*0");
  CHECK(r4 == RankingState{0, 1});
  CHECK(t.step(RankingState{0, 0}, TransitionMatrix::parse("11/11")).first.compact() == "11/00");

  // Unranked sources are ignored.
  auto [o5, r5] = t.step(RankingState{0, U}, TransitionMatrix::parse("10/*1"));
  CHECK(o5.compact() == "10/00");
  CHECK(r5 == RankingState{0, U});

  // Tree-shaped input passes through unchanged.
  std::mt19937_64 rng(4);
  RankingState r = TreeShapingTransducer(4, 0).initial();
  for (int i = 0; i < 50; ++i) {
    const auto m = random_tree_shaped(rng, 4);
    auto [o, nr] = TreeShapingTransducer(4, 0).step(r, m);
    TransitionMatrix expected(4);
    for (State p = 0; p < 4; ++p)
      for (State q = 0; q < 4; ++q)
        if (r[p] != kUnranked) expected.set(p, q, m.at(p, q));
    CHECK(o == expected);
    r = std::move(nr);
    if (std::all_of(r.begin(), r.end(), [](auto x) { return x == kUnranked; })) r = TreeShapingTransducer(4, 0).initial();
  }
}

TEST_CASE("index tie-breaks would lose accepting paths") {
  // 0 loops on 1 and reaches 2; 2 is accepting and loops.  Ranking 0 above 2
  // by index would always route 2 through 0.
  const TreeShapingTransducer t(3, 0);
  const auto m0 = TransitionMatrix::parse("111/000/000");
  const auto m = TransitionMatrix::parse("111/*00/***");
  const Lasso<TransitionMatrix> w{{m0}, {m}};
  REQUIRE(qdag_accepting_path(3, 0, w));
  CHECK(qdag_accepting_path(3, 0, transducer_output(t, w)));
}

TEST_CASE("tree-shaping preserves reachability and accepting paths") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 600; ++i) {
    const std::size_t n = 1 + i % 4;
    Lasso<TransitionMatrix> w;
    std::uniform_int_distribution<std::size_t> len(0, 3), plen(1, 3);
    for (std::size_t k = len(rng); k > 0; --k) w.stem.push_back(random_dag_letter(rng, n, 0.4));
    for (std::size_t k = plen(rng); k > 0; --k) w.period.push_back(random_dag_letter(rng, n, 0.4));
    const TreeShapingTransducer t(n, 0);
    const auto out = transducer_output(t, w);
    for (std::size_t p = 0; p < out.length() + 2 * out.period.size(); ++p) REQUIRE(out.at(p).tree_shaped());
    const std::size_t horizon = w.length() + 3 * w.period.size() + 4;
    CHECK(qdag_reachable(n, 0, w, horizon) == qdag_reachable(n, 0, out, horizon));
    REQUIRE(qdag_accepting_path(n, 0, w) == qdag_accepting_path(n, 0, out));
  }
}

TEST_CASE("tree-shaped letter enumeration") {
  CHECK(tree_shaped_letters(1).size() == 3);
  CHECK(tree_shaped_letters(2).size() == 25);
  for (const auto& m : tree_shaped_letters(3)) CHECK(m.tree_shaped());
  const auto q = qscheme_rabin_automaton(2, 0);
  CHECK(q.automaton.alphabet().size() == 25);
  CHECK(q.automaton.pairs().size() == 5);
  for (const auto& s : q.states) CHECK(s.audit() == "");
}

TEST_CASE("determinize agrees with the Buchi automaton") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto aut = random_buchi(rng, 1 + i % 3, kAB);
    const auto det = determinize_detailed(aut);
    CHECK(det.automaton.base() == AcceptanceBase::Transition);
    CHECK(det.automaton.pairs().size() == 2 * aut.state_count() + 1);
    for (int k = 0; k < 10; ++k) {
      const auto w = random_lasso(rng, 2);
      REQUIRE(rabin_accepts_lasso(det.automaton, w) == buchi_accepts_lasso(aut, w));
    }
  }
}

TEST_CASE("pipeline composition matches the Q-dag oracle") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const auto aut = random_buchi(rng, 1 + i % 4, kAB);
    const SubsetTransducer t1(aut);
    const TreeShapingTransducer t2(aut.state_count(), aut.initial());
    const auto w = random_lasso(rng, 2);
    const auto dag = transducer_output(t1, w);
    const auto tree = transducer_output(t2, dag);
    const bool expected = buchi_accepts_lasso(aut, w);
    REQUIRE(qdag_accepting_path(aut.state_count(), aut.initial(), dag) == expected);
    REQUIRE(qdag_accepting_path(aut.state_count(), aut.initial(), tree) == expected);
    REQUIRE(accepts_lasso(QSchemeAutomaton(aut.state_count(), aut.initial()), tree) == expected);
  }
}

TEST_CASE("determinize trace and limits") {
  BuchiAutomaton aut(kAB, 2);
  aut.set_accepting(1);
  aut.add_transition(0, 0, 0);
  aut.add_transition(0, 1, 0);
  aut.add_transition(0, 0, 1);
  aut.add_transition(1, 0, 1);
  const auto w = parse_lasso("b ; a", kAB);
  const auto trace = determinize_trace(aut, w, 3);
  REQUIRE(trace.size() == 4);
  for (const auto& st : trace) {
    CHECK(st.tree_letter.tree_shaped());
    CHECK(st.scheme.audit() == "");
  }
  CHECK(trace.back().events.refreshed.size() > 0);

  CHECK_THROWS_AS(determinize(aut, 1), CapExceeded);
  CHECK_THROWS_AS(determinize(BuchiAutomaton(kAB, 32)), ValidationError);
}
