#include "support.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "omega/graph.hpp"

namespace omega::testing {

namespace {

constexpr std::uint32_t kUnset = static_cast<std::uint32_t>(-1);

// Every triple whose four products are already defined must associate.
bool consistent(const std::vector<std::uint32_t>& t, std::size_t n) {
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const auto xy = t[x * n + y];
      if (xy == kUnset) continue;
      for (std::size_t z = 0; z < n; ++z) {
        const auto yz = t[y * n + z];
        if (yz == kUnset) continue;
        const auto l = t[xy * n + z];
        const auto r = t[x * n + yz];
        if (l != kUnset && r != kUnset && l != r) return false;
      }
    }
  }
  return true;
}

void fill(std::vector<std::uint32_t>& t, std::size_t n, std::size_t cell, std::size_t& count,
          const std::function<void(const FiniteSemigroup&)>& visit) {
  if (cell == n * n) {
    ++count;
    visit(FiniteSemigroup(n, t));
    return;
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    t[cell] = v;
    if (consistent(t, n)) fill(t, n, cell + 1, count, visit);
  }
  t[cell] = kUnset;
}

FiniteSemigroup cyclic_group(std::size_t n) {
  return FiniteSemigroup::from_function(n, [n](auto a, auto b) { return static_cast<std::uint32_t>((a + b) % n); });
}

FiniteSemigroup mult_mod(std::size_t n) {
  return FiniteSemigroup::from_function(n, [n](auto a, auto b) { return static_cast<std::uint32_t>((a * b) % n); });
}

// Full transformation monoid on a set of size k, element = function table.
FiniteSemigroup transformation_monoid(std::size_t k) {
  std::vector<std::vector<std::uint32_t>> maps;
  std::vector<std::uint32_t> f(k, 0);
  for (;;) {
    maps.push_back(f);
    std::size_t i = 0;
    while (i < k && ++f[i] == k) f[i++] = 0;
    if (i == k) break;
  }
  auto index = [&](const std::vector<std::uint32_t>& g) {
    return static_cast<std::uint32_t>(std::find(maps.begin(), maps.end(), g) - maps.begin());
  };
  return FiniteSemigroup::from_function(maps.size(), [&](auto a, auto b) {
    std::vector<std::uint32_t> c(k);
    for (std::size_t x = 0; x < k; ++x) c[x] = maps[b][maps[a][x]];  // apply a then b
    return index(c);
  });
}

// Symmetric group S3 as permutations of {0,1,2}.
FiniteSemigroup symmetric_group_3() {
  std::vector<std::array<std::uint32_t, 3>> perms;
  std::array<std::uint32_t, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return FiniteSemigroup::from_function(6, [&](auto a, auto b) {
    std::array<std::uint32_t, 3> c{};
    for (std::size_t x = 0; x < 3; ++x) c[x] = perms[b][perms[a][x]];
    return static_cast<std::uint32_t>(std::find(perms.begin(), perms.end(), c) - perms.begin());
  });
}

}  // namespace

std::size_t enumerate_semigroups(std::size_t n, const std::function<void(const FiniteSemigroup&)>& visit) {
  std::vector<std::uint32_t> t(n * n, kUnset);
  std::size_t count = 0;
  fill(t, n, 0, count, visit);
  return count;
}

std::vector<std::pair<std::string, FiniteSemigroup>> handcrafted_semigroups() {
  using E = FiniteSemigroup::Element;
  std::vector<std::pair<std::string, FiniteSemigroup>> out;
  out.emplace_back("trivial", cyclic_group(1));
  out.emplace_back("Z2", cyclic_group(2));
  out.emplace_back("Z3", cyclic_group(3));
  out.emplace_back("Z4", cyclic_group(4));
  out.emplace_back("Z7", cyclic_group(7));
  out.emplace_back("Z2xZ2", FiniteSemigroup::from_function(4, [](E a, E b) { return a ^ b; }));
  out.emplace_back("S3", symmetric_group_3());
  // Z3 with an adjoined zero (element 3).
  out.emplace_back("Z3+0", FiniteSemigroup::from_function(4, [](E a, E b) -> E { return a == 3 || b == 3 ? 3 : (a + b) % 3; }));
  out.emplace_back("left-zero-3", FiniteSemigroup::from_function(3, [](E a, E) { return a; }));
  out.emplace_back("right-zero-4", FiniteSemigroup::from_function(4, [](E, E b) { return b; }));
  out.emplace_back("max-8", FiniteSemigroup::from_function(8, [](E a, E b) { return std::max(a, b); }));
  out.emplace_back("min-8", FiniteSemigroup::from_function(8, [](E a, E b) { return std::min(a, b); }));
  out.emplace_back("null-4", FiniteSemigroup::from_function(4, [](E, E) { return E{0}; }));
  // Rectangular band I x J with (i,j)(k,l) = (i,l).
  out.emplace_back("rect-2x3", FiniteSemigroup::from_function(6, [](E a, E b) { return (a / 3) * 3 + b % 3; }));
  // Brandt semigroup B2: 0 and matrix units e_ij, e_ij e_jk = e_ik.
  out.emplace_back("B2", FiniteSemigroup::from_function(5, [](E a, E b) -> E {
                     if (a == 0 || b == 0) return 0;
                     const E i = (a - 1) / 2, j = (a - 1) % 2, k = (b - 1) / 2, l = (b - 1) % 2;
                     return j == k ? 1 + i * 2 + l : 0;
                   }));
  out.emplace_back("T2", transformation_monoid(2));
  out.emplace_back("mult-mod-6", mult_mod(6));
  out.emplace_back("mult-mod-8", mult_mod(8));
  // Monogenic a, a^2, a^3, a^4 with a^5 = a^3 (index 3, period 2).
  out.emplace_back("monogenic-3-2", FiniteSemigroup::from_function(4, [](E a, E b) -> E {
                     std::size_t e = (a + 1) + (b + 1);
                     while (e > 4) e -= 2;
                     return static_cast<E>(e - 1);
                   }));
  // Z2 x ({0,1,2}, max).
  out.emplace_back("Z2xmax3", FiniteSemigroup::from_function(6, [](E a, E b) -> E {
                     return ((a / 3 + b / 3) % 2) * 3 + std::max(a % 3, b % 3);
                   }));
  return out;
}

bool check_le_lrh(const GreenData& g) {
  const std::size_t n = g.semigroup.size();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      const bool r_equiv = g.r_le(s, t) && g.r_le(t, s);
      if (g.l_le(s, t) && r_equiv && !(g.h_le(s, t) && g.h_le(t, s))) return false;
    }
  }
  return true;
}

bool check_h_groups(const FiniteSemigroup& s) {
  const GreenData g = green_relations(s);
  for (const auto& h : g.h_classes) {
    auto in = [&h](FiniteSemigroup::Element x) { return std::find(h.begin(), h.end(), x) != h.end(); };
    bool closed_somewhere = false;
    for (auto a : h)
      for (auto b : h)
        if (in(s.mul(a, b))) closed_somewhere = true;
    const auto e = h_class_group_identity(s, h);
    if (closed_somewhere != e.has_value()) return false;
    if (!e) continue;
    for (auto x : h) {
      if (s.mul(*e, x) != x || s.mul(x, *e) != x) return false;
      bool has_inverse = false;
      for (auto y : h)
        if (s.mul(x, y) == *e && s.mul(y, x) == *e) has_inverse = true;
      if (!has_inverse) return false;
      for (auto y : h)
        if (!in(s.mul(x, y))) return false;
    }
  }
  return true;
}

TransitionMatrix random_matrix(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_int_distribution<int> d(0, 2);
  TransitionMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m.set(i, j, static_cast<Tri>(d(rng)));
  return m;
}

std::vector<Letter> random_word(std::mt19937_64& rng, std::size_t k, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<Letter> l(0, static_cast<Letter>(k - 1));
  std::vector<Letter> w(len(rng));
  for (auto& x : w) x = l(rng);
  return w;
}

bool qdag_accepting_path(std::size_t dim, State init, const Lasso<TransitionMatrix>& w) {
  // Vertices (q, pos); an edge is starred iff its matrix entry is *.  A starred
  // edge inside a strongly connected component lies on a cycle.
  const std::size_t len = w.length();
  std::vector<std::vector<std::uint32_t>> adj(dim * len);
  for (std::size_t pos = 0; pos < len; ++pos)
    for (std::size_t q = 0; q < dim; ++q)
      for (std::size_t r = 0; r < dim; ++r)
        if (w.at(pos).at(q, r) != Tri::Zero) adj[q * len + pos].push_back(static_cast<std::uint32_t>(r * len + w.next(pos)));
  const SccResult scc = reachable_sccs(adj, static_cast<std::uint32_t>(init * len));
  for (std::size_t pos = 0; pos < len; ++pos)
    for (std::size_t q = 0; q < dim; ++q)
      for (std::size_t r = 0; r < dim; ++r) {
        if (w.at(pos).at(q, r) != Tri::Star) continue;
        const auto a = scc.component[q * len + pos];
        const auto b = scc.component[r * len + w.next(pos)];
        if (a >= 0 && a == b) return true;
      }
  return false;
}

std::vector<std::vector<bool>> qdag_reachable(std::size_t dim, State init, const Lasso<TransitionMatrix>& w,
                                              std::size_t positions) {
  std::vector<std::vector<bool>> out;
  std::vector<bool> cur(dim, false);
  cur[init] = true;
  for (std::size_t pos = 0; pos < positions; ++pos) {
    out.push_back(cur);
    std::vector<bool> next(dim, false);
    for (std::size_t q = 0; q < dim; ++q)
      if (cur[q])
        for (std::size_t r = 0; r < dim; ++r)
          if (w.at(pos).at(q, r) != Tri::Zero) next[r] = true;
    cur = std::move(next);
  }
  return out;
}

TransitionMatrix random_tree_shaped(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_int_distribution<std::size_t> src(0, dim);  // dim = no incoming edge
  std::uniform_int_distribution<int> kind(1, 2);
  TransitionMatrix m(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    const std::size_t r = src(rng);
    if (r < dim) m.set(r, c, static_cast<Tri>(kind(rng)));
  }
  return m;
}

TransitionMatrix random_dag_letter(std::mt19937_64& rng, std::size_t dim, double density) {
  std::bernoulli_distribution edge(density), star(0.5);
  TransitionMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (edge(rng)) m.set(i, j, star(rng) ? Tri::Star : Tri::One);
  return m;
}

const std::vector<CorpusSentence>& mso_corpus() {
  static const std::vector<CorpusSentence> corpus{
      {"ex2 X. sing(X)", true},
      {"all2 X. sing(X)", false},
      {"true", true},
      {"false", false},
      {"ex1 x. x <= x", true},
      {"all1 x. ex1 y. x <= y & !(y <= x)", true},
      {"ex1 x. all1 y. y <= x", false},
      {"ex1 x. all1 y. x <= y", true},
      {"all1 x, y. x <= y | y <= x", true},
      {"ex1 x, y. !(x <= y) & !(y <= x)", false},
      {"ex2 X. all1 x. x in X", true},
      {"ex2 X. ex1 x. x in X & !(x in X)", false},
      {"all2 X. sub(X, X)", true},
      {"all2 X, Y. sub(X, Y)", false},
      {"all2 X, Y. min(X) <= min(Y) | min(Y) <= min(X)", true},
      {"ex2 X, Y. !(min(X) <= min(Y)) & !(min(Y) <= min(X))", false},
      {"all2 X. sing(X) -> ex1 x. x in X", true},
      {"ex2 X. sing(X) & all1 x. !(x in X)", false},
      {"all2 X. (ex1 x. x in X) -> ex1 x. x in X & all1 y. y in X -> x <= y", true},
      {"all2 X. (ex1 x. x in X) -> ex1 x. x in X & all1 y. y in X -> y <= x", false},
  };
  return corpus;
}

}  // namespace omega::testing
