// omega: command-line front end for the automata library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <new>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "omega/automata.hpp"
#include "omega/complement.hpp"
#include "omega/determinize.hpp"
#include "omega/mso.hpp"
#include "omega/ramsey.hpp"

namespace {

using namespace omega;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

const Alphabet& alphabet_of(const AnyAutomaton& a) {
  return std::visit([](const auto& x) -> const Alphabet& { return x.alphabet(); }, a);
}

bool any_accepts(const AnyAutomaton& a, const LassoWord& w) {
  return std::visit([&](const auto& x) { return accepts(x, w); }, a);
}

mso::CompileOptions compile_options(std::size_t cap) {
  mso::CompileOptions o;
  o.cap = cap;
  return o;
}

std::vector<std::string> track_comments(const std::vector<std::string>& tracks) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tracks.size(); ++i) out.push_back("track " + std::to_string(i) + " = " + tracks[i]);
  return out;
}

struct Options {
  std::size_t cap = kDefaultCap;
  std::string output;
  std::string aut;
  std::string aut2;
  std::string lasso;
  std::string formula;
  bool witness = false;
  bool automaton = false;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::size_t max_stem = 4;
  std::size_t max_period = 4;
  std::size_t rounds = 2;
};

int cmd_decide(const Options& o) {
  const auto f = mso::parse(read_file(o.formula));
  const auto d = mso::decide(f, compile_options(o.cap));
  std::cout << (d.value ? "true" : "false") << '\n';
  if (o.witness && d.witness) {
    const auto alphabet = Alphabet::valuations(d.witness_variables.size());
    std::cout << "witness";
    for (const auto& v : d.witness_variables) std::cout << ' ' << v;
    std::cout << ": " << lasso_to_text(*d.witness, alphabet) << '\n';
  }
  if (o.automaton) write_output(o.output, to_text(d.compiled.automaton, track_comments(d.compiled.tracks)));
  return 0;
}

int cmd_compile(const Options& o) {
  const auto core = mso::normalize(mso::parse(read_file(o.formula)));
  const auto c = mso::compile(core, compile_options(o.cap));
  write_output(o.output, to_text(c.automaton, track_comments(c.tracks)));
  return 0;
}

int cmd_complement(const Options& o) {
  const auto r = complement_buchi_detailed(parse_buchi(read_file(o.aut)), o.cap);
  write_output(o.output, to_text(r.automaton, r.comments()));
  return 0;
}

int cmd_determinize(const Options& o) {
  const auto r = determinize(parse_buchi(read_file(o.aut)), o.cap);
  std::vector<std::string> comments;
  for (std::size_t i = 0; i < r.pairs().size(); ++i)
    comments.push_back("pair " + std::to_string(i) + " = identifier " + std::to_string(i));
  write_output(o.output, to_text(r, comments));
  return 0;
}

int cmd_empty(const Options& o) {
  const auto a = parse_buchi(read_file(o.aut));
  if (const auto w = buchi_emptiness(a)) std::cout << lasso_to_text(*w, a.alphabet()) << '\n';
  else std::cout << "EMPTY\n";
  return 0;
}

int cmd_member(const Options& o) {
  const auto a = parse_automaton(read_file(o.aut));
  const auto w = parse_lasso(o.lasso, alphabet_of(a));
  std::cout << (any_accepts(a, w) ? "ACCEPT" : "REJECT") << '\n';
  return 0;
}

int cmd_equiv(const Options& o) {
  const auto a1 = parse_automaton(read_file(o.aut));
  const auto a2 = parse_automaton(read_file(o.aut2));
  const Alphabet& alphabet = alphabet_of(a1);
  if (!(alphabet == alphabet_of(a2))) throw ValidationError("automata have different alphabets");
  if (o.max_period == 0) throw ValidationError("--max-period must be at least 1");
  std::mt19937_64 rng(o.seed);
  std::vector<LassoWord> samples;
  samples.reserve(o.samples);
  for (std::size_t i = 0; i < o.samples; ++i)
    samples.push_back(random_lasso(rng, alphabet.size(), LassoShape{o.max_stem, o.max_period}));
  const auto diff = std::visit(
      [&](const auto& x, const auto& y) { return lasso_equivalent_on_samples(x, y, samples); }, a1, a2);
  for (const auto& w : diff) std::cout << lasso_to_text(w, alphabet) << '\n';
  std::cout << diff.size() << " disagreements\n";
  return 0;
}

int cmd_factorize(const Options& o) {
  const auto a = parse_buchi(read_file(o.aut));
  const auto f = ramsey_factorize_lasso(a, parse_lasso(o.lasso, a.alphabet()));
  std::cout << '(' << f.prefix_type.compact() << ", " << f.loop_type.compact() << ", " << f.stem_len << ", "
            << f.period_len << ")\n";
  return 0;
}

int cmd_trace(const Options& o) {
  const auto a = parse_buchi(read_file(o.aut));
  const auto w = parse_lasso(o.lasso, a.alphabet());
  std::ostringstream out;
  out << qscheme_initial(a.state_count(), a.initial()).to_dot("initial");
  for (const auto& step : determinize_trace(a, w, o.rounds)) {
    out << "// position " << step.position << " letter " << a.alphabet().name(step.letter) << " dag "
        << step.dag_letter.compact() << " tree " << step.tree_letter.compact() << " deleted";
    for (auto id : step.events.deleted) out << ' ' << id;
    out << " refreshed";
    for (auto id : step.events.refreshed) out << ' ' << id;
    out << '\n' << step.scheme.to_dot("step_" + std::to_string(step.position));
  }
  write_output(o.output, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Büchi complementation, determinisation and MSO decision"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--cap", o.cap, "State budget for constructions")
      ->envname("OMEGA_CAP")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", o.output, "Output file (default stdout)"); };
  auto add_aut = [&](CLI::App* sub) {
    sub->add_option("automaton", o.aut, "Automaton file")->required()->check(CLI::ExistingFile);
  };
  auto add_lasso = [&](CLI::App* sub) {
    sub->add_option("lasso", o.lasso, "Lasso word: stem letters ; period letters")->required();
  };

  std::vector<std::pair<CLI::App*, int (*)(const Options&)>> commands;

  auto* decide = app.add_subcommand("decide", "Decide an MSO sentence");
  decide->add_option("formula", o.formula, "Formula file")->required()->check(CLI::ExistingFile);
  decide->add_flag("--witness", o.witness, "Print a witness valuation of the leading existential block");
  decide->add_flag("--automaton", o.automaton, "Write the compiled automaton");
  add_output(decide);
  commands.emplace_back(decide, cmd_decide);

  auto* compile = app.add_subcommand("compile", "Compile an MSO formula to a Büchi automaton");
  compile->add_option("formula", o.formula, "Formula file")->required()->check(CLI::ExistingFile);
  add_output(compile);
  commands.emplace_back(compile, cmd_compile);

  auto* complement = app.add_subcommand("complement", "Complement a Büchi automaton");
  add_aut(complement);
  add_output(complement);
  commands.emplace_back(complement, cmd_complement);

  auto* determinize = app.add_subcommand("determinize", "Determinise a Büchi automaton into a Rabin automaton");
  add_aut(determinize);
  add_output(determinize);
  commands.emplace_back(determinize, cmd_determinize);

  auto* empty = app.add_subcommand("empty", "Emptiness check with witness lasso");
  add_aut(empty);
  commands.emplace_back(empty, cmd_empty);

  auto* member = app.add_subcommand("member", "Lasso membership");
  add_aut(member);
  add_lasso(member);
  commands.emplace_back(member, cmd_member);

  auto* equiv = app.add_subcommand("equiv", "Compare two automata on random lassos");
  equiv->add_option("a1", o.aut, "First automaton")->required()->check(CLI::ExistingFile);
  equiv->add_option("a2", o.aut2, "Second automaton")->required()->check(CLI::ExistingFile);
  equiv->add_option("--samples", o.samples, "Number of lassos")->capture_default_str();
  equiv->add_option("--seed", o.seed, "PRNG seed")->capture_default_str();
  equiv->add_option("--max-stem", o.max_stem, "Largest stem length")->capture_default_str();
  equiv->add_option("--max-period", o.max_period, "Largest period length")->capture_default_str();
  commands.emplace_back(equiv, cmd_equiv);

  auto* factorize = app.add_subcommand("factorize", "Ramsey factorisation of a lasso");
  add_aut(factorize);
  add_lasso(factorize);
  commands.emplace_back(factorize, cmd_factorize);

  auto* trace = app.add_subcommand("trace", "DOT snapshots of the Q-scheme along a lasso");
  add_aut(trace);
  add_lasso(trace);
  trace->add_option("--rounds", o.rounds, "Periods to unroll")->capture_default_str();
  add_output(trace);
  commands.emplace_back(trace, cmd_trace);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    for (const auto& [sub, run] : commands)
      if (sub->parsed()) return run(o);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
