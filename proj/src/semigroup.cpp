#include "omega/semigroup.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <random>

namespace omega {

char tri_char(Tri t) noexcept {
  switch (t) {
    case Tri::Zero: return '0';
    case Tri::One: return '1';
    case Tri::Star: return '*';
  }
  return '?';
}

std::optional<Tri> tri_from_char(char c) noexcept {
  switch (c) {
    case '0': return Tri::Zero;
    case '1': return Tri::One;
    case '*': return Tri::Star;
    default: return std::nullopt;
  }
}

TransitionMatrix::TransitionMatrix(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ValidationError("transition matrix dimension must be at least 1");
  nonzero_.assign(dim * words(), 0);
  star_.assign(dim * words(), 0);
}

TransitionMatrix TransitionMatrix::identity(std::size_t dim) {
  TransitionMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.set(i, i, Tri::One);
  return m;
}

TransitionMatrix TransitionMatrix::from_rows(const std::vector<std::vector<Tri>>& rows) {
  TransitionMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ValidationError("transition matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

TransitionMatrix TransitionMatrix::parse(std::string_view text) {
  std::vector<std::vector<Tri>> rows(1);
  for (char c : text) {
    if (c == '/' || c == '\n') {
      rows.emplace_back();
      continue;
    }
    if (c == ' ' || c == '\r') continue;
    auto t = tri_from_char(c);
    if (!t) throw ValidationError(std::string("bad matrix character '") + c + "'");
    rows.back().push_back(*t);
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  if (rows.empty()) throw ValidationError("empty transition matrix");
  return from_rows(rows);
}

Tri TransitionMatrix::at(std::size_t row, std::size_t col) const noexcept {
  const std::size_t w = row * words() + col / 64;
  const std::uint64_t bit = std::uint64_t{1} << (col % 64);
  if (star_[w] & bit) return Tri::Star;
  if (nonzero_[w] & bit) return Tri::One;
  return Tri::Zero;
}

void TransitionMatrix::set(std::size_t row, std::size_t col, Tri value) noexcept {
  const std::size_t w = row * words() + col / 64;
  const std::uint64_t bit = std::uint64_t{1} << (col % 64);
  nonzero_[w] &= ~bit;
  star_[w] &= ~bit;
  if (value != Tri::Zero) nonzero_[w] |= bit;
  if (value == Tri::Star) star_[w] |= bit;
}

bool TransitionMatrix::tree_shaped() const noexcept {
  const std::size_t nw = words();
  std::vector<std::uint64_t> seen(nw, 0);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t w = 0; w < nw; ++w) {
      const std::uint64_t row = nonzero_[i * nw + w];
      if (seen[w] & row) return false;
      seen[w] |= row;
    }
  }
  return true;
}

bool TransitionMatrix::is_zero() const noexcept {
  return std::all_of(nonzero_.begin(), nonzero_.end(), [](std::uint64_t w) { return w == 0; });
}

std::string TransitionMatrix::render() const {
  std::string out;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (i) out += '\n';
    for (std::size_t j = 0; j < dim_; ++j) out += tri_char(at(i, j));
  }
  return out;
}

std::string TransitionMatrix::compact() const {
  std::string out = render();
  std::replace(out.begin(), out.end(), '\n', '/');
  return out;
}

std::size_t TransitionMatrix::hash() const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ dim_;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (auto w : nonzero_) mix(w);
  for (auto w : star_) mix(w);
  return static_cast<std::size_t>(h);
}

TransitionMatrix mat_mul(const TransitionMatrix& m, const TransitionMatrix& n) {
  if (m.dim_ != n.dim_) {
    throw ValidationError("mat_mul: dimension mismatch (" + std::to_string(m.dim_) + " vs " +
                          std::to_string(n.dim_) + ")");
  }
  TransitionMatrix r(m.dim_);
  const std::size_t nw = m.words();
  for (std::size_t i = 0; i < m.dim_; ++i) {
    std::uint64_t* rnz = &r.nonzero_[i * nw];
    std::uint64_t* rst = &r.star_[i * nw];
    for (std::size_t k = 0; k < m.dim_; ++k) {
      const Tri left = m.at(i, k);
      if (left == Tri::Zero) continue;
      const std::uint64_t* nnz = &n.nonzero_[k * nw];
      const std::uint64_t* nst = &n.star_[k * nw];
      for (std::size_t w = 0; w < nw; ++w) {
        rnz[w] |= nnz[w];
        rst[w] |= left == Tri::Star ? nnz[w] : nst[w];
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

FiniteSemigroup::FiniteSemigroup(std::size_t size, std::vector<Element> table)
    : size_(size), table_(std::move(table)) {
  if (size == 0) throw ValidationError("semigroup must be nonempty");
  if (table_.size() != size * size) throw ValidationError("Cayley table has wrong size");
  for (auto e : table_) {
    if (e >= size) throw ValidationError("Cayley table entry out of range");
  }
}

FiniteSemigroup FiniteSemigroup::from_function(std::size_t size,
                                               const std::function<Element(Element, Element)>& op) {
  std::vector<Element> table(size * size);
  for (Element a = 0; a < size; ++a)
    for (Element b = 0; b < size; ++b) table[a * size + b] = op(a, b);
  return FiniteSemigroup(size, std::move(table));
}

bool FiniteSemigroup::is_associative(std::size_t samples, std::uint64_t seed) const {
  auto check = [this](Element a, Element b, Element c) {
    return mul(mul(a, b), c) == mul(a, mul(b, c));
  };
  if (size_ <= 32) {
    for (Element a = 0; a < size_; ++a)
      for (Element b = 0; b < size_; ++b)
        for (Element c = 0; c < size_; ++c)
          if (!check(a, b, c)) return false;
    return true;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Element> pick(0, static_cast<Element>(size_ - 1));
  for (std::size_t i = 0; i < samples; ++i) {
    if (!check(pick(rng), pick(rng), pick(rng))) return false;
  }
  return true;
}

FiniteSemigroup::Element idempotent_power(const FiniteSemigroup& s, FiniteSemigroup::Element x) {
  return idempotent_power_of(x, [&s](auto a, auto b) { return s.mul(a, b); }).first;
}

GreenData green_relations(const FiniteSemigroup& s) {
  const std::size_t n = s.size();
  GreenData g;
  g.semigroup = s;
  g.leq_r.assign(n * n, false);
  g.leq_l.assign(n * n, false);
  g.leq_h.assign(n * n, false);
  for (std::size_t t = 0; t < n; ++t) {
    g.leq_r[t * n + t] = true;
    g.leq_l[t * n + t] = true;
    for (std::size_t a = 0; a < n; ++a) {
      // t*a <=_R t and a*t <=_L t
      g.leq_r[s.mul(t, a) * n + t] = true;
      g.leq_l[s.mul(a, t) * n + t] = true;
    }
  }
  for (std::size_t i = 0; i < n * n; ++i) g.leq_h[i] = g.leq_r[i] && g.leq_l[i];

  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  g.h_class_of.assign(n, unset);
  for (std::size_t s0 = 0; s0 < n; ++s0) {
    if (g.h_class_of[s0] != unset) continue;
    const std::size_t cls = g.h_classes.size();
    g.h_classes.emplace_back();
    for (std::size_t t = s0; t < n; ++t) {
      if (g.h_class_of[t] == unset && g.h_le(s0, t) && g.h_le(t, s0)) {
        g.h_class_of[t] = cls;
        g.h_classes.back().push_back(static_cast<FiniteSemigroup::Element>(t));
      }
    }
  }
  return g;
}

std::optional<FiniteSemigroup::Element> h_class_group_identity(
    const FiniteSemigroup& s, const std::vector<FiniteSemigroup::Element>& h_class) {
  if (h_class.empty()) throw ValidationError("empty H-class");
  const GreenData g = green_relations(s);
  std::vector<FiniteSemigroup::Element> sorted = h_class;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.back() >= s.size()) throw ValidationError("H-class element out of range");
  if (g.h_classes[g.h_class_of[sorted.front()]] != sorted) {
    throw ValidationError("element set is not an H-class");
  }

  auto in_class = [&sorted](FiniteSemigroup::Element x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
  };
  bool closed_somewhere = false;
  for (auto a : sorted) {
    for (auto b : sorted) {
      if (in_class(s.mul(a, b))) {
        closed_somewhere = true;
        break;
      }
    }
    if (closed_somewhere) break;
  }
  if (!closed_somewhere) return std::nullopt;
  // A group H-class contains exactly one idempotent, its identity.
  for (auto e : sorted) {
    if (s.is_idempotent(e)) return e;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

MatrixSemigroup::MatrixSemigroup(std::vector<TransitionMatrix> generators, std::size_t cap)
    : generators_(std::move(generators)) {
  if (generators_.empty()) throw ValidationError("matrix semigroup needs at least one generator");
  const std::size_t k = generators_.size();
  const std::size_t dim = generators_.front().dim();
  const std::size_t matrix_bytes = 2 * dim * ((dim + 63) / 64) * sizeof(std::uint64_t);
  const std::size_t limit = std::min(cap, std::max<std::size_t>(1, kSemigroupByteBudget / matrix_bytes));
  std::deque<Element> queue;
  // Element i is word(parent_[i]) followed by generator last_[i].
  auto intern = [&](const TransitionMatrix& m, Element parent, std::size_t g) -> Element {
    auto [it, inserted] = index_.try_emplace(m, static_cast<Element>(elements_.size()));
    if (inserted) {
      if (elements_.size() >= limit)
        throw CapExceeded(limit < cap ? "transition semigroup (matrix storage)" : "transition semigroup", limit);
      elements_.push_back(m);
      parent_.push_back(parent);
      last_.push_back(static_cast<std::uint32_t>(g));
      right_.resize(elements_.size() * k, 0);
      queue.push_back(it->second);
    }
    return it->second;
  };
  for (std::size_t g = 0; g < k; ++g) generator_index_.push_back(intern(generators_[g], kNoParent, g));
  while (!queue.empty()) {
    const Element e = queue.front();
    queue.pop_front();
    for (std::size_t g = 0; g < k; ++g) {
      TransitionMatrix prod = mat_mul(elements_[e], generators_[g]);
      const Element r = intern(prod, e, g);
      right_[e * k + g] = r;
    }
  }
}

std::vector<std::uint32_t> MatrixSemigroup::word(Element e) const {
  std::vector<std::uint32_t> out;
  for (Element x = e; x != kNoParent; x = parent_[x]) out.push_back(last_[x]);
  std::reverse(out.begin(), out.end());
  return out;
}

MatrixSemigroup::Element MatrixSemigroup::multiply(Element a, Element b) const {
  // Letters of b, last first.
  std::array<std::uint32_t, 64> small;
  std::vector<std::uint32_t> large;
  std::size_t len = 0;
  for (Element x = b; x != kNoParent; x = parent_[x]) {
    if (len == small.size()) large.assign(small.begin(), small.end());
    if (len >= small.size())
      large.push_back(last_[x]);
    else
      small[len] = last_[x];
    ++len;
  }
  const std::uint32_t* letters = len > small.size() ? large.data() : small.data();
  Element r = a;
  for (std::size_t i = len; i-- > 0;) r = right(r, letters[i]);
  return r;
}

std::optional<MatrixSemigroup::Element> MatrixSemigroup::find(const TransitionMatrix& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FiniteSemigroup MatrixSemigroup::cayley() const {
  const std::size_t n = elements_.size();
  std::vector<FiniteSemigroup::Element> table(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      auto idx = find(mat_mul(elements_[a], elements_[b]));
      table[a * n + b] = *idx;  // closed: products of nonempty words
    }
  }
  return FiniteSemigroup(n, std::move(table));
}

}  // namespace omega
