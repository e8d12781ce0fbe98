#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "omega/mso.hpp"

namespace omega::mso {

// ---------------------------------------------------------------------------
// Builders

namespace {

Formula atom(Op op, std::string a, std::string b = {}) {
  Formula f;
  f.op = op;
  f.a = std::move(a);
  f.b = std::move(b);
  return f;
}

Formula node(Op op, std::vector<Formula> kids, std::string var = {}) {
  Formula f;
  f.op = op;
  f.a = std::move(var);
  f.kids = std::move(kids);
  return f;
}

bool is_atom(Op op) { return op <= Op::False; }
bool is_quantifier(Op op) { return op >= Op::Ex1; }
bool binds_first_order(Op op) { return op == Op::Ex1 || op == Op::All1; }

}  // namespace

Formula le(std::string x, std::string y) { return atom(Op::Le, std::move(x), std::move(y)); }
Formula in(std::string x, std::string set) { return atom(Op::In, std::move(x), std::move(set)); }
Formula sing(std::string set) { return atom(Op::Sing, std::move(set)); }
Formula min_le(std::string x, std::string y) { return atom(Op::MinLe, std::move(x), std::move(y)); }
Formula sub(std::string x, std::string y) { return atom(Op::Sub, std::move(x), std::move(y)); }
Formula truth(bool value) { return atom(value ? Op::True : Op::False, {}); }
Formula negation(Formula f) { return node(Op::Not, {std::move(f)}); }
Formula conj(Formula l, Formula r) { return node(Op::And, {std::move(l), std::move(r)}); }
Formula disj(Formula l, Formula r) { return node(Op::Or, {std::move(l), std::move(r)}); }
Formula implies(Formula l, Formula r) { return node(Op::Implies, {std::move(l), std::move(r)}); }

Formula conj(std::vector<Formula> fs) {
  if (fs.empty()) return truth(true);
  Formula out = std::move(fs.front());
  for (std::size_t i = 1; i < fs.size(); ++i) out = conj(std::move(out), std::move(fs[i]));
  return out;
}

Formula disj(std::vector<Formula> fs) {
  if (fs.empty()) return truth(false);
  Formula out = std::move(fs.front());
  for (std::size_t i = 1; i < fs.size(); ++i) out = disj(std::move(out), std::move(fs[i]));
  return out;
}

Formula ex1(std::string x, Formula f) { return node(Op::Ex1, {std::move(f)}, std::move(x)); }
Formula all1(std::string x, Formula f) { return node(Op::All1, {std::move(f)}, std::move(x)); }
Formula ex2(std::string x, Formula f) { return node(Op::Ex2, {std::move(f)}, std::move(x)); }
Formula all2(std::string x, Formula f) { return node(Op::All2, {std::move(f)}, std::move(x)); }

// ---------------------------------------------------------------------------
// Variables

namespace {

std::vector<std::pair<std::string, VarKind>> atom_operands(const Formula& f) {
  switch (f.op) {
    case Op::Le: return {{f.a, VarKind::First}, {f.b, VarKind::First}};
    case Op::In: return {{f.a, VarKind::First}, {f.b, VarKind::Second}};
    case Op::Sing: return {{f.a, VarKind::Second}};
    case Op::MinLe:
    case Op::Sub: return {{f.a, VarKind::Second}, {f.b, VarKind::Second}};
    default: return {};
  }
}

const char* kind_name(VarKind k) { return k == VarKind::First ? "first-order" : "second-order"; }

void collect_free(const Formula& f, std::map<std::string, VarKind>& bound, std::vector<Variable>& out) {
  if (is_atom(f.op)) {
    for (const auto& [name, kind] : atom_operands(f)) {
      auto b = bound.find(name);
      if (b != bound.end()) {
        if (b->second != kind)
          throw ValidationError("variable '" + name + "' is bound as " + kind_name(b->second) + " but used as " +
                                kind_name(kind));
        continue;
      }
      auto it = std::find_if(out.begin(), out.end(), [&](const Variable& v) { return v.name == name; });
      if (it == out.end()) {
        out.push_back({name, kind});
      } else if (it->kind != kind) {
        throw ValidationError("free variable '" + name + "' is used as both first-order and second-order");
      }
    }
    return;
  }
  if (is_quantifier(f.op)) {
    const VarKind kind = binds_first_order(f.op) ? VarKind::First : VarKind::Second;
    auto saved = bound.find(f.a) == bound.end() ? std::nullopt : std::optional<VarKind>(bound[f.a]);
    bound[f.a] = kind;
    collect_free(f.kids[0], bound, out);
    if (saved) {
      bound[f.a] = *saved;
    } else {
      bound.erase(f.a);
    }
    return;
  }
  for (const auto& k : f.kids) collect_free(k, bound, out);
}

}  // namespace

std::vector<Variable> free_variables(const Formula& f) {
  std::map<std::string, VarKind> bound;
  std::vector<Variable> out;
  collect_free(f, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  enum Kind { Ident, Sym, End } kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      out.push_back({Token::Ident, std::string(s.substr(i, j - i)), line, col});
      advance(j - i);
      continue;
    }
    for (std::string_view sym : {"<=", ">=", "->", "!", "&", "|", "(", ")", ",", "."}) {
      if (s.substr(i, sym.size()) == sym) {
        out.push_back({Token::Sym, std::string(sym), line, col});
        advance(sym.size());
        goto next;
      }
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  next:;
  }
  out.push_back({Token::End, "", line, col});
  return out;
}

const std::set<std::string> kKeywords{"ex1", "all1", "ex2", "all2", "in", "sing", "min", "sub", "true", "false"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse_all() {
    Formula f = formula();
    if (peek().kind != Token::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(std::string_view s) const { return peek().kind != Token::End && peek().text == s; }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(t.kind == Token::End ? msg + " at end of input" : msg, t.line, t.col);
  }
  void expect(std::string_view s) {
    if (!at(s)) fail("expected '" + std::string(s) + "'");
    ++pos_;
  }
  std::string variable() {
    const Token& t = peek();
    if (t.kind != Token::Ident || kKeywords.count(t.text)) fail("expected a variable");
    ++pos_;
    return t.text;
  }

  Formula formula() {
    if (at("ex1") || at("all1") || at("ex2") || at("all2")) return quantified();
    Formula l = disjunction();
    if (at("->")) {
      ++pos_;
      return implies(std::move(l), formula());
    }
    return l;
  }

  Formula quantified() {
    const std::string q = peek().text;
    ++pos_;
    std::vector<std::string> vars{variable()};
    while (at(",")) {
      ++pos_;
      vars.push_back(variable());
    }
    expect(".");
    Formula body = formula();
    const Op op = q == "ex1" ? Op::Ex1 : q == "all1" ? Op::All1 : q == "ex2" ? Op::Ex2 : Op::All2;
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = node(op, {std::move(body)}, *it);
    return body;
  }

  Formula disjunction() {
    Formula l = conjunction();
    while (at("|")) {
      ++pos_;
      l = disj(std::move(l), conjunction());
    }
    return l;
  }

  Formula conjunction() {
    Formula l = unary();
    while (at("&")) {
      ++pos_;
      l = conj(std::move(l), unary());
    }
    return l;
  }

  Formula unary() {
    if (at("!")) {
      ++pos_;
      return negation(unary());
    }
    return primary();
  }

  Formula primary() {
    if (at("(")) {
      ++pos_;
      Formula f = formula();
      expect(")");
      return f;
    }
    if (at("ex1") || at("all1") || at("ex2") || at("all2")) return quantified();
    if (at("true") || at("false")) {
      const bool v = peek().text == "true";
      ++pos_;
      return truth(v);
    }
    if (at("sing")) {
      ++pos_;
      expect("(");
      std::string x = variable();
      expect(")");
      return sing(std::move(x));
    }
    if (at("sub")) {
      ++pos_;
      expect("(");
      std::string x = variable();
      expect(",");
      std::string y = variable();
      expect(")");
      return sub(std::move(x), std::move(y));
    }
    if (at("min")) {
      ++pos_;
      expect("(");
      std::string x = variable();
      expect(")");
      expect("<=");
      expect("min");
      expect("(");
      std::string y = variable();
      expect(")");
      return min_le(std::move(x), std::move(y));
    }
    std::string x = variable();
    if (at("<=")) {
      ++pos_;
      return le(std::move(x), variable());
    }
    if (at(">=")) {
      ++pos_;
      return le(variable(), std::move(x));
    }
    if (at("in")) {
      ++pos_;
      return in(std::move(x), variable());
    }
    fail("expected '<=', '>=' or 'in'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(lex(text)).parse_all(); }

// ---------------------------------------------------------------------------
// Printer

namespace {

int precedence(Op op) {
  if (is_quantifier(op)) return 0;
  switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Not: return 4;
    default: return 5;
  }
}

void print(const Formula& f, int context, std::string& out) {
  const int p = precedence(f.op);
  const bool paren = p < context;
  if (paren) out += '(';
  switch (f.op) {
    case Op::Le: out += f.a + " <= " + f.b; break;
    case Op::In: out += f.a + " in " + f.b; break;
    case Op::Sing: out += "sing(" + f.a + ")"; break;
    case Op::MinLe: out += "min(" + f.a + ") <= min(" + f.b + ")"; break;
    case Op::Sub: out += "sub(" + f.a + ", " + f.b + ")"; break;
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Not:
      out += '!';
      print(f.kids[0], 4, out);
      break;
    case Op::And:
      print(f.kids[0], 3, out);
      out += " & ";
      print(f.kids[1], 4, out);
      break;
    case Op::Or:
      print(f.kids[0], 2, out);
      out += " | ";
      print(f.kids[1], 3, out);
      break;
    case Op::Implies:
      print(f.kids[0], 2, out);
      out += " -> ";
      print(f.kids[1], 1, out);
      break;
    case Op::Ex1: out += "ex1 "; break;
    case Op::All1: out += "all1 "; break;
    case Op::Ex2: out += "ex2 "; break;
    case Op::All2: out += "all2 "; break;
  }
  if (is_quantifier(f.op)) {
    out += f.a + ". ";
    print(f.kids[0], 0, out);
  }
  if (paren) out += ')';
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Negation normal form and depth

namespace {

Formula nnf_rec(const Formula& f, bool neg) {
  switch (f.op) {
    case Op::True:
    case Op::False: return truth((f.op == Op::True) != neg);
    case Op::Not: return nnf_rec(f.kids[0], !neg);
    case Op::And:
    case Op::Or: {
      const bool is_and = (f.op == Op::And) != neg;
      return node(is_and ? Op::And : Op::Or, {nnf_rec(f.kids[0], neg), nnf_rec(f.kids[1], neg)});
    }
    case Op::Implies:
      return neg ? conj(nnf_rec(f.kids[0], false), nnf_rec(f.kids[1], true))
                 : disj(nnf_rec(f.kids[0], true), nnf_rec(f.kids[1], false));
    case Op::Ex1: return node(neg ? Op::All1 : Op::Ex1, {nnf_rec(f.kids[0], neg)}, f.a);
    case Op::All1: return node(neg ? Op::Ex1 : Op::All1, {nnf_rec(f.kids[0], neg)}, f.a);
    case Op::Ex2: return node(neg ? Op::All2 : Op::Ex2, {nnf_rec(f.kids[0], neg)}, f.a);
    case Op::All2: return node(neg ? Op::Ex2 : Op::All2, {nnf_rec(f.kids[0], neg)}, f.a);
    default: return neg ? negation(f) : f;
  }
}

bool quantifier_free(const Formula& f) {
  if (is_quantifier(f.op)) return false;
  return std::all_of(f.kids.begin(), f.kids.end(), quantifier_free);
}

bool universal_type(Op op) { return op == Op::And || op == Op::All1 || op == Op::All2; }

// Blocks along the deepest branch of a formula in negation normal form that
// contains a quantifier.
std::size_t blocks(const Formula& f) {
  std::size_t best = 1;
  for (const auto& k : f.kids) {
    if (quantifier_free(k)) continue;
    best = std::max(best, blocks(k) + (universal_type(k.op) != universal_type(f.op) ? 1 : 0));
  }
  return best;
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_rec(f, false); }

std::size_t depth(const Formula& f) {
  const Formula g = nnf(f);
  return quantifier_free(g) ? 1 : blocks(g);
}

// ---------------------------------------------------------------------------
// Core fragment

namespace {

using Kind = CoreFormula::Kind;

CoreFormula core_literal(Atom a, bool negated, std::string x, std::string y = {}) {
  CoreFormula c;
  c.kind = Kind::Literal;
  c.literal = Literal{a, negated, std::move(x), std::move(y)};
  return c;
}

CoreFormula block_node(Kind kind, std::vector<std::string> block, std::vector<CoreFormula> children) {
  CoreFormula c;
  c.kind = kind;
  c.block = std::move(block);
  c.children = std::move(children);
  return c;
}

// Joins parts under a node of the given kind, absorbing parts of the same kind.
CoreFormula join(Kind kind, std::vector<CoreFormula> parts) {
  CoreFormula out = block_node(kind, {}, {});
  for (auto& p : parts) {
    if (p.kind == kind) {
      out.block.insert(out.block.end(), p.block.begin(), p.block.end());
      for (auto& c : p.children) out.children.push_back(std::move(c));
    } else {
      out.children.push_back(std::move(p));
    }
  }
  return out;
}

CoreFormula bind(Kind kind, const std::string& var, CoreFormula body) {
  if (body.kind != kind) body = block_node(kind, {}, {std::move(body)});
  body.block.insert(body.block.begin(), var);
  return body;
}

// lit & node (kind = Forall) or lit | node (kind = Exists), pushed below the
// opposite quantifier blocks.
CoreFormula attach(Kind kind, const CoreFormula& lit, CoreFormula n) {
  if (n.kind == kind) {
    n.children.insert(n.children.begin(), lit);
    return n;
  }
  if (n.kind == Kind::Literal) return block_node(kind, {}, {lit, std::move(n)});
  for (auto& c : n.children) c = attach(kind, lit, std::move(c));
  return n;
}

class Normalizer {
 public:
  explicit Normalizer(const Formula& f) {
    for (const auto& v : free_variables(f)) used_.insert(v.name);
  }

  CoreFormula run(const Formula& f) { return core(f, {}); }

 private:
  using Env = std::map<std::string, std::string>;

  std::string fresh(const std::string& base) {
    std::string name = base;
    for (std::size_t k = 1; used_.count(name); ++k) name = base + "_" + std::to_string(k);
    used_.insert(name);
    return name;
  }

  static std::string lookup(const Env& env, const std::string& v) {
    auto it = env.find(v);
    return it == env.end() ? v : it->second;
  }

  CoreFormula literal(const Formula& f, const Env& env, bool negated) {
    const std::string a = lookup(env, f.a), b = lookup(env, f.b);
    switch (f.op) {
      case Op::Le:
      case Op::MinLe: return core_literal(Atom::MinLe, negated, a, b);
      case Op::In:
      case Op::Sub: return core_literal(Atom::Sub, negated, a, b);
      case Op::Sing: return core_literal(Atom::Sing, negated, a);
      default: throw std::logic_error("not an atom");
    }
  }

  CoreFormula core(const Formula& f, const Env& env) {
    switch (f.op) {
      case Op::True: return block_node(Kind::Forall, {}, {});
      case Op::False: return block_node(Kind::Exists, {}, {});
      case Op::Not: return literal(f.kids[0], env, true);
      case Op::And: return join(Kind::Forall, {core(f.kids[0], env), core(f.kids[1], env)});
      case Op::Or: return join(Kind::Exists, {core(f.kids[0], env), core(f.kids[1], env)});
      case Op::Ex1:
      case Op::All1:
      case Op::Ex2:
      case Op::All2: {
        const std::string name = fresh(f.a);
        Env inner = env;
        inner[f.a] = name;
        CoreFormula body = core(f.kids[0], inner);
        const bool exists = f.op == Op::Ex1 || f.op == Op::Ex2;
        const Kind kind = exists ? Kind::Exists : Kind::Forall;
        if (binds_first_order(f.op)) {
          body = attach(exists ? Kind::Forall : Kind::Exists, core_literal(Atom::Sing, !exists, name),
                        std::move(body));
        }
        return bind(kind, name, std::move(body));
      }
      case Op::Implies: throw std::logic_error("implication after nnf");
      default: return literal(f, env, false);
    }
  }

  std::set<std::string> used_;
};

Formula literal_formula(const Literal& l) {
  Formula a = l.atom == Atom::Sing ? sing(l.x) : l.atom == Atom::MinLe ? min_le(l.x, l.y) : sub(l.x, l.y);
  return l.negated ? negation(std::move(a)) : a;
}

void collect_core_free(const CoreFormula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
  auto note = [&](const std::string& v) {
    if (std::find(bound.begin(), bound.end(), v) == bound.end() && std::find(out.begin(), out.end(), v) == out.end())
      out.push_back(v);
  };
  if (f.kind == Kind::Literal) {
    note(f.literal.x);
    if (f.literal.atom != Atom::Sing) note(f.literal.y);
    return;
  }
  const std::size_t mark = bound.size();
  bound.insert(bound.end(), f.block.begin(), f.block.end());
  for (const auto& c : f.children) collect_core_free(c, bound, out);
  bound.resize(mark);
}

}  // namespace

CoreFormula normalize(const Formula& f) {
  const Formula g = nnf(f);
  return Normalizer(g).run(g);
}

Formula to_formula(const CoreFormula& f) {
  if (f.kind == Kind::Literal) return literal_formula(f.literal);
  std::vector<Formula> parts;
  for (const auto& c : f.children) parts.push_back(to_formula(c));
  const bool forall = f.kind == Kind::Forall;
  Formula body = forall ? conj(std::move(parts)) : disj(std::move(parts));
  for (auto it = f.block.rbegin(); it != f.block.rend(); ++it)
    body = forall ? all2(*it, std::move(body)) : ex2(*it, std::move(body));
  return body;
}

std::vector<std::string> free_variables(const CoreFormula& f) {
  std::vector<std::string> bound, out;
  collect_core_free(f, bound, out);
  return out;
}

bool is_core_shaped(const CoreFormula& f) {
  if (f.kind == Kind::Literal) return true;
  for (const auto& c : f.children) {
    if (c.kind == f.kind || !is_core_shaped(c)) return false;
  }
  return true;
}

}  // namespace omega::mso
