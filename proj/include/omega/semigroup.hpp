#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "omega/error.hpp"

namespace omega {

// ---------------------------------------------------------------------------
// The scalar semiring {0, 1, *}.
//
// 0 means "no run", 1 "a run that never sees an accepting state", * "a run
// through an accepting state".  Addition picks the better run, multiplication
// concatenates runs.
// ---------------------------------------------------------------------------

enum class Tri : std::uint8_t { Zero = 0, One = 1, Star = 2 };

constexpr Tri tri_add(Tri a, Tri b) noexcept { return a < b ? b : a; }

constexpr Tri tri_mul(Tri a, Tri b) noexcept {
  if (a == Tri::Zero || b == Tri::Zero) return Tri::Zero;
  return a < b ? b : a;
}

char tri_char(Tri t) noexcept;
std::optional<Tri> tri_from_char(char c) noexcept;

/// A |Q| x |Q| matrix over {0, 1, *}.
///
/// Rows are stored as two bit vectors: `nonzero` (entry is 1 or *) and `star`
/// (entry is *), so products reduce to word-wide ORs.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  /// All-zero matrix.  `dim` must be at least 1.
  explicit TransitionMatrix(std::size_t dim);

  static TransitionMatrix identity(std::size_t dim);
  /// Parses the compact rendering: rows of 0/1/* separated by '/'.
  static TransitionMatrix parse(std::string_view text);
  static TransitionMatrix from_rows(const std::vector<std::vector<Tri>>& rows);

  std::size_t dim() const noexcept { return dim_; }
  Tri at(std::size_t row, std::size_t col) const noexcept;
  void set(std::size_t row, std::size_t col, Tri value) noexcept;

  /// True iff every column has at most one non-zero entry.
  bool tree_shaped() const noexcept;
  bool is_zero() const noexcept;

  /// One row per line, e.g. "*1\n01".
  std::string render() const;
  /// Single-token form, e.g. "*1/01".  Used as letter name for [Q].
  std::string compact() const;

  std::size_t hash() const noexcept;

  friend bool operator==(const TransitionMatrix& a, const TransitionMatrix& b) noexcept {
    return a.dim_ == b.dim_ && a.nonzero_ == b.nonzero_ && a.star_ == b.star_;
  }

  friend TransitionMatrix mat_mul(const TransitionMatrix& m, const TransitionMatrix& n);

 private:
  std::size_t words() const noexcept { return (dim_ + 63) / 64; }

  std::size_t dim_ = 0;
  std::vector<std::uint64_t> nonzero_;
  std::vector<std::uint64_t> star_;
};

/// Matrix product over (tri_add, tri_mul).  Throws ValidationError on a
/// dimension mismatch.
TransitionMatrix mat_mul(const TransitionMatrix& m, const TransitionMatrix& n);

inline TransitionMatrix identity_matrix(std::size_t dim) { return TransitionMatrix::identity(dim); }

struct TransitionMatrixHash {
  std::size_t operator()(const TransitionMatrix& m) const noexcept { return m.hash(); }
};

// ---------------------------------------------------------------------------
// Finite semigroups given by a Cayley table.
// ---------------------------------------------------------------------------

class FiniteSemigroup {
 public:
  using Element = std::uint32_t;

  FiniteSemigroup() = default;
  /// `table[a * size + b]` is the index of a*b.  Validates range; associativity
  /// is checked by `is_associative`.
  FiniteSemigroup(std::size_t size, std::vector<Element> table);

  static FiniteSemigroup from_function(std::size_t size,
                                       const std::function<Element(Element, Element)>& op);

  std::size_t size() const noexcept { return size_; }
  Element mul(Element a, Element b) const noexcept { return table_[a * size_ + b]; }
  const std::vector<Element>& table() const noexcept { return table_; }

  /// Exhaustive for size <= 32, otherwise checks `samples` random triples.
  bool is_associative(std::size_t samples = 100000, std::uint64_t seed = 1) const;
  bool is_idempotent(Element e) const noexcept { return mul(e, e) == e; }

 private:
  std::size_t size_ = 0;
  std::vector<Element> table_;
};

/// Returns s^k for the least k >= 1 making it idempotent.  Works for any
/// associative `mul`; powers are walked until they cycle.
template <class T, class Mul, class Eq = std::equal_to<T>>
std::pair<T, std::size_t> idempotent_power_of(const T& s, Mul mul, Eq eq = {}) {
  // powers[i] = s^(i+1)
  std::vector<T> powers{s};
  for (;;) {
    T next = mul(powers.back(), s);
    for (std::size_t i = 0; i < powers.size(); ++i) {
      if (!eq(powers[i], next)) continue;
      // s^(i+1) = s^(n+1): index i+1, period n-i.
      const std::size_t index = i + 1;
      const std::size_t period = powers.size() - i;
      std::size_t k = period;
      while (k < index) k += period;
      return {powers[k - 1], k};
    }
    powers.push_back(std::move(next));
  }
}

FiniteSemigroup::Element idempotent_power(const FiniteSemigroup& s, FiniteSemigroup::Element x);

struct GreenData {
  FiniteSemigroup semigroup;
  // size x size row-major; entry [s * size + t] means s <= t.
  std::vector<bool> leq_r;
  std::vector<bool> leq_l;
  std::vector<bool> leq_h;
  std::vector<std::vector<FiniteSemigroup::Element>> h_classes;
  // h_class_of[s] indexes h_classes.
  std::vector<std::size_t> h_class_of;

  bool r_le(std::size_t s, std::size_t t) const { return leq_r[s * semigroup.size() + t]; }
  bool l_le(std::size_t s, std::size_t t) const { return leq_l[s * semigroup.size() + t]; }
  bool h_le(std::size_t s, std::size_t t) const { return leq_h[s * semigroup.size() + t]; }
};

GreenData green_relations(const FiniteSemigroup& s);

/// If some a, b in `h_class` have a*b in `h_class`, returns the identity of
/// the group (h_class, *).  Throws ValidationError if `h_class` is not an
/// H-class of `s`.
std::optional<FiniteSemigroup::Element> h_class_group_identity(
    const FiniteSemigroup& s, const std::vector<FiniteSemigroup::Element>& h_class);

/// Subsemigroup of [Q] generated by a set of matrices, closed under right
/// multiplication by the generators.  Element i corresponds to some nonempty
/// word over the generators; `right(i, g)` is the index of element(i) * gen(g).
class MatrixSemigroup {
 public:
  using Element = std::uint32_t;

  /// Throws CapExceeded if the closure exceeds `cap` elements or its matrices
  /// would take more than kSemigroupByteBudget bytes.
  MatrixSemigroup(std::vector<TransitionMatrix> generators, std::size_t cap = kDefaultCap);

  std::size_t size() const noexcept { return elements_.size(); }
  std::size_t generator_count() const noexcept { return generators_.size(); }
  const TransitionMatrix& element(Element e) const { return elements_[e]; }
  const std::vector<TransitionMatrix>& elements() const noexcept { return elements_; }
  Element generator(std::size_t g) const { return generator_index_[g]; }
  Element right(Element e, std::size_t g) const { return right_[e * generators_.size() + g]; }
  std::optional<Element> find(const TransitionMatrix& m) const;

  /// Generator indices of the word that produced `e` (shortest, BFS order).
  std::vector<std::uint32_t> word(Element e) const;
  /// element(a) * element(b), by right multiplication along word(b).
  Element multiply(Element a, Element b) const;

  /// Full Cayley table.  Costs size^2 matrix products.
  FiniteSemigroup cayley() const;

 private:
  std::vector<TransitionMatrix> generators_;
  std::vector<Element> generator_index_;
  std::vector<TransitionMatrix> elements_;
  static constexpr Element kNoParent = static_cast<Element>(-1);
  std::vector<Element> right_;
  std::vector<Element> parent_;
  std::vector<std::uint32_t> last_;
  std::unordered_map<TransitionMatrix, Element, TransitionMatrixHash> index_;
};

}  // namespace omega
