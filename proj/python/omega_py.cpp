#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "omega/automata.hpp"
#include "omega/complement.hpp"
#include "omega/determinize.hpp"
#include "omega/mso.hpp"
#include "omega/ramsey.hpp"
#include "omega/semigroup.hpp"

namespace py = pybind11;
using namespace omega;

PYBIND11_MODULE(_omega, m) {
  m.doc() = "Büchi complementation, determinisation and MSO decision";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());
  m.attr("DEFAULT_CAP") = kDefaultCap;

  py::class_<Alphabet>(m, "Alphabet")
      .def(py::init<std::vector<std::string>>())
      .def_static("valuations", &Alphabet::valuations)
      .def_property_readonly("symbols", &Alphabet::symbols)
      .def("index", &Alphabet::index)
      .def("__len__", &Alphabet::size)
      .def("__eq__", [](const Alphabet& a, const Alphabet& b) { return a == b; });

  py::class_<LassoWord>(m, "Lasso")
      .def(py::init([](std::vector<Letter> stem, std::vector<Letter> period) {
             if (period.empty()) throw ValidationError("lasso period must be nonempty");
             return LassoWord{std::move(stem), std::move(period)};
           }),
           py::arg("stem"), py::arg("period"))
      .def_readonly("stem", &LassoWord::stem)
      .def_readonly("period", &LassoWord::period)
      .def("__eq__", [](const LassoWord& a, const LassoWord& b) { return a == b; })
      .def("__repr__", [](const LassoWord& w) {
        return "Lasso(" + py::repr(py::cast(w.stem)).cast<std::string>() + ", " +
               py::repr(py::cast(w.period)).cast<std::string>() + ")";
      });

  m.def("parse_lasso", &parse_lasso, py::arg("text"), py::arg("alphabet"));
  m.def("lasso_to_text", &lasso_to_text, py::arg("word"), py::arg("alphabet"));

  py::class_<TransitionMatrix>(m, "TransitionMatrix")
      .def_static("parse", &TransitionMatrix::parse)
      .def_static("identity", &TransitionMatrix::identity)
      .def_property_readonly("dim", &TransitionMatrix::dim)
      .def("compact", &TransitionMatrix::compact)
      .def("tree_shaped", &TransitionMatrix::tree_shaped)
      .def("__mul__", [](const TransitionMatrix& a, const TransitionMatrix& b) { return mat_mul(a, b); })
      .def("__eq__", [](const TransitionMatrix& a, const TransitionMatrix& b) { return a == b; })
      .def("__hash__", &TransitionMatrix::hash)
      .def("__str__", &TransitionMatrix::compact)
      .def("__repr__", [](const TransitionMatrix& x) { return "TransitionMatrix('" + x.compact() + "')"; });

  py::class_<BuchiAutomaton>(m, "BuchiAutomaton")
      .def(py::init<Alphabet, std::size_t, State>(), py::arg("alphabet"), py::arg("states"), py::arg("initial") = 0)
      .def_static("parse", &parse_buchi)
      .def_property_readonly("alphabet", &BuchiAutomaton::alphabet)
      .def_property_readonly("state_count", &BuchiAutomaton::state_count)
      .def_property_readonly("initial", &BuchiAutomaton::initial)
      .def("accepting", &BuchiAutomaton::accepting)
      .def("set_accepting", &BuchiAutomaton::set_accepting, py::arg("state"), py::arg("value") = true)
      .def("add_state", &BuchiAutomaton::add_state, py::arg("accepting") = false)
      .def("add_transition", &BuchiAutomaton::add_transition)
      .def("transitions",
           [](const BuchiAutomaton& a) {
             std::vector<std::tuple<State, Letter, State>> out;
             for (const auto& t : a.transitions()) out.emplace_back(t.src, t.letter, t.dst);
             return out;
           })
      .def("accepts", &buchi_accepts_lasso)
      .def("to_text", [](const BuchiAutomaton& a) { return to_text(a); })
      .def("__eq__", [](const BuchiAutomaton& a, const BuchiAutomaton& b) { return a == b; });

  py::class_<RabinAutomaton>(m, "RabinAutomaton")
      .def_static("parse", &parse_rabin)
      .def_property_readonly("alphabet", &RabinAutomaton::alphabet)
      .def_property_readonly("state_count", &RabinAutomaton::state_count)
      .def_property_readonly("pair_count", [](const RabinAutomaton& a) { return a.pairs().size(); })
      .def("accepts", &rabin_accepts_lasso)
      .def("to_text", [](const RabinAutomaton& a) { return to_text(a); })
      .def("__eq__", [](const RabinAutomaton& a, const RabinAutomaton& b) { return a == b; });

  m.def("complement", &complement_buchi, py::arg("automaton"), py::arg("cap") = kDefaultCap);
  m.def(
      "complement_detailed",
      [](const BuchiAutomaton& a, std::size_t cap) {
        auto r = complement_buchi_detailed(a, cap);
        return py::make_tuple(r.automaton, r.comments());
      },
      py::arg("automaton"), py::arg("cap") = kDefaultCap,
      "Complement automaton and one descriptor line per state.");
  m.def("determinize", &determinize, py::arg("automaton"), py::arg("cap") = kDefaultCap);
  m.def("emptiness", &buchi_emptiness, "An accepted lasso, or None.");
  m.def("trim", &trim);
  m.def("transition_matrix", &transition_matrix_of_letter);
  m.def(
      "ramsey_factorize",
      [](const BuchiAutomaton& a, const LassoWord& w) {
        const auto f = ramsey_factorize_lasso(a, w);
        return py::make_tuple(f.prefix_type, f.loop_type, f.stem_len, f.period_len);
      },
      "(N, M, stem_len, period_len)");
  m.def("semigroup_size", [](const BuchiAutomaton& a, std::size_t cap) {
    std::vector<TransitionMatrix> gens;
    for (Letter l = 0; l < a.alphabet().size(); ++l) gens.push_back(transition_matrix_of_letter(a, l));
    return MatrixSemigroup(std::move(gens), cap).size();
  }, py::arg("automaton"), py::arg("cap") = kDefaultCap);

  m.def(
      "random_buchi",
      [](std::uint64_t seed, std::size_t states, const Alphabet& alphabet, double density) {
        std::mt19937_64 rng(seed);
        return random_buchi(rng, states, alphabet, density);
      },
      py::arg("seed"), py::arg("states"), py::arg("alphabet"), py::arg("density") = 0.5);
  m.def(
      "random_lassos",
      [](std::uint64_t seed, std::size_t count, std::size_t alphabet_size, std::size_t max_stem,
         std::size_t max_period) {
        std::mt19937_64 rng(seed);
        std::vector<LassoWord> out;
        for (std::size_t i = 0; i < count; ++i)
          out.push_back(random_lasso(rng, alphabet_size, LassoShape{max_stem, max_period}));
        return out;
      },
      py::arg("seed"), py::arg("count"), py::arg("alphabet_size"), py::arg("max_stem") = 4,
      py::arg("max_period") = 4);

  auto mso = m.def_submodule("mso", "Monadic second-order logic over (N, <=)");
  py::class_<mso::Formula>(mso, "Formula")
      .def("__str__", [](const mso::Formula& f) { return mso::to_string(f); })
      .def("__repr__", [](const mso::Formula& f) { return "Formula('" + mso::to_string(f) + "')"; })
      .def("__eq__", [](const mso::Formula& a, const mso::Formula& b) { return a == b; })
      .def("__invert__", [](const mso::Formula& f) { return mso::negation(f); });
  mso.def("parse", &mso::parse);
  mso.def("psi", &mso::psi_k, py::arg("k"));
  mso.def("depth", &mso::depth);
  mso.def("free_variables", [](const mso::Formula& f) {
    std::vector<std::string> out;
    for (const auto& v : mso::free_variables(f)) out.push_back(v.name);
    return out;
  });
  mso.def(
      "compile",
      [](const mso::Formula& f, std::size_t cap) {
        mso::CompileOptions o;
        o.cap = cap;
        auto c = mso::compile(mso::normalize(f), o);
        return py::make_tuple(c.automaton, c.tracks);
      },
      py::arg("formula"), py::arg("cap") = kDefaultCap, "(automaton, track variables)");
  mso.def(
      "decide",
      [](const mso::Formula& f, std::size_t cap) {
        mso::CompileOptions o;
        o.cap = cap;
        return mso::decide_sentence(f, o);
      },
      py::arg("sentence"), py::arg("cap") = kDefaultCap);
}
