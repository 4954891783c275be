// Catalog groups with normal-form elements.
#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "kleppner/numeric.hpp"

namespace kleppner {

/// Three-valued truth for predicates that may be undecided.
enum class Tri { False, True, Unknown };

inline Tri tri(bool b) { return b ? Tri::True : Tri::False; }
Tri tri_and(Tri a, Tri b);
Tri tri_or(Tri a, Tri b);
std::string to_string(Tri t);

/// Normal form of a group element. Which payload is meaningful depends on the
/// kind: a table index, an integer vector, a reduced word (letters +-(i+1)),
/// or a pair for direct products.
class Element {
public:
  enum class Kind : std::uint8_t { Index, Vector, Word, Pair };

  Element() : kind_(Kind::Index), data_{0} {}

  static Element index(std::int64_t i);
  static Element vector(std::vector<std::int64_t> v);
  static Element word(std::vector<std::int64_t> letters);  // must already be reduced
  static Element pair(Element a, Element b);

  Kind kind() const { return kind_; }
  std::int64_t idx() const { return data_.at(0); }
  const std::vector<std::int64_t>& coords() const { return data_; }
  const std::vector<std::int64_t>& letters() const { return data_; }
  const Element& first() const { return parts_->first; }
  const Element& second() const { return parts_->second; }

  friend bool operator==(const Element& a, const Element& b);
  /// Shortlex on normal forms: kind, then length, then lexicographic.
  friend std::strong_ordering operator<=>(const Element& a, const Element& b);

private:
  Kind kind_;
  std::vector<std::int64_t> data_;
  std::shared_ptr<const std::pair<Element, Element>> parts_;
};

/// Multiplication table of a finite group plus optional display data.
struct FiniteTable {
  std::string name;
  std::size_t order = 0;
  std::vector<std::int32_t> mul;  // row-major order x order
  std::vector<std::int32_t> inv;
  std::int32_t identity = 0;
  std::vector<std::string> labels;
  /// Cyclic coordinates when the table is a product of cyclic groups.
  std::vector<std::int64_t> moduli;
  std::vector<std::vector<std::int64_t>> coords;

  std::int32_t product(std::int32_t a, std::int32_t b) const {
    return mul[static_cast<std::size_t>(a) * order + static_cast<std::size_t>(b)];
  }
};

class Group;
using GroupPtr = std::shared_ptr<const Group>;

class GroupError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class Group : public std::enable_shared_from_this<Group> {
public:
  enum class Kind { FiniteTable, FreeAbelian, Heisenberg, Free, DirectProduct };

  /// Validates the group axioms (associativity exhaustively up to order 64).
  static GroupPtr finite_table(FiniteTable table);
  /// "Z_n", "Z_m x Z_n", "D_n", "Q8", "S_n" (n <= 5).
  static GroupPtr builtin(std::string_view name);
  static GroupPtr free_abelian(int rank);
  static GroupPtr heisenberg();
  static GroupPtr free(int rank);
  static GroupPtr direct_product(GroupPtr a, GroupPtr b);

  Kind kind() const { return kind_; }
  std::string name() const;

  Element identity() const;
  Element mul(const Element& a, const Element& b) const;
  Element inv(const Element& a) const;
  /// h g h^-1
  Element conj(const Element& h, const Element& g) const;
  Element pow(const Element& g, std::int64_t k) const;
  bool commutes(const Element& a, const Element& b) const { return mul(a, b) == mul(b, a); }
  bool is_identity(const Element& g) const { return g == identity(); }

  /// Throws GroupError if g is not a well-formed element of this group.
  void check(const Element& g) const;
  bool is_element(const Element& g) const;

  bool is_finite() const;
  std::optional<std::int64_t> order() const;
  /// All elements in increasing order; finite groups only.
  std::vector<Element> elements() const;
  std::vector<Element> generators() const;
  bool is_abelian() const;
  bool is_trivial() const;

  /// Product of a uniformly random number (0..max_len) of random generators
  /// and inverses; uniform over the elements for finite groups.
  Element random_element(std::mt19937_64& rng, int max_len = 8) const;

  std::string format(const Element& g) const;
  Element parse(std::string_view text) const;

  // Variant data.
  const FiniteTable& table() const;
  int rank() const { return rank_; }
  const GroupPtr& factor(int i) const { return i == 0 ? left_ : right_; }

  /// Catalog facts for the whole group.
  Tri is_prime() const;
  Tri is_fc_hypercentral() const;
  Tri is_cstar_simple() const;

private:
  Group(Kind k) : kind_(k) {}

  Kind kind_;
  int rank_ = 0;
  std::shared_ptr<const FiniteTable> table_;
  GroupPtr left_, right_;
};

/// Free-group word utilities (letters are +-(i+1)).
std::vector<std::int64_t> free_reduce(const std::vector<std::int64_t>& letters);

/// g = u p^k u^-1 with p cyclically reduced and not a proper power, k >= 1.
struct FreeRoot {
  std::vector<std::int64_t> conjugator;
  std::vector<std::int64_t> primitive;
  std::int64_t exponent = 0;
};
/// Requires a nontrivial reduced word.
FreeRoot free_root(const std::vector<std::int64_t>& reduced);
/// Exponent sum of letter `gen` (0-based) in a word.
std::int64_t exponent_sum(const std::vector<std::int64_t>& letters, int gen);

}  // namespace kleppner
