// Described subgroups of catalog groups and the conjugacy/centralizer kernel.
#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kleppner/group.hpp"
#include "kleppner/linalg.hpp"

namespace kleppner {

/// Finite, infinite or undecided group index.
struct SubgroupIndex {
  enum class Kind { Finite, Infinite, Unknown };
  Kind kind = Kind::Unknown;
  Integer value = 0;

  static SubgroupIndex finite(Integer v) { return {Kind::Finite, std::move(v)}; }
  static SubgroupIndex infinite() { return {Kind::Infinite, 0}; }
  static SubgroupIndex unknown() { return {Kind::Unknown, 0}; }
  bool is_finite() const { return kind == Kind::Finite; }
  std::string str() const;
};

/// Folded graph of a finitely generated subgroup of a free group.
class StallingsGraph {
public:
  StallingsGraph(int rank, const std::vector<std::vector<std::int64_t>>& words);

  std::size_t vertices() const { return out_.size(); }
  std::size_t edges() const;
  /// Rank of the subgroup as a free group.
  std::size_t subgroup_rank() const { return edges() + 1 - vertices(); }
  /// Every vertex has an outgoing edge for every letter.
  bool complete() const;
  /// Vertex reached by reading a reduced word from v, if defined.
  std::optional<std::size_t> read(std::size_t v, const std::vector<std::int64_t>& word) const;
  bool accepts(const std::vector<std::int64_t>& word) const;
  /// Free basis read off a spanning tree.
  std::vector<std::vector<std::int64_t>> basis() const;
  /// The graph is isomorphic to itself re-rooted at every vertex.
  bool vertex_transitive() const;

private:
  std::size_t slot(std::int64_t letter) const {
    return static_cast<std::size_t>(letter > 0 ? letter - 1 : rank_ - letter - 1);
  }

  int rank_;
  std::vector<std::vector<std::int64_t>> out_;  // out_[v][slot] = target or -1
};

class Subgroup;
using SubgroupPtr = std::shared_ptr<const Subgroup>;

class Subgroup {
public:
  enum class Kind {
    Full,
    Trivial,
    Finite,             // explicit element list (finite parents)
    Lattice,            // sublattice of a free abelian parent
    HeisenbergAbelian,  // abelian subgroup of Heisenberg, lattice in chart coordinates
    Heisenberg,         // nonabelian subgroup of Heisenberg
    Product,            // A x B in a direct product
    FreeGenerated,      // finitely generated subgroup of a free group
    Generated           // generator list without a membership procedure
  };

  static SubgroupPtr full(GroupPtr g);
  static SubgroupPtr trivial(GroupPtr g);
  /// Explicit list; must be closed under products and inverses.
  static SubgroupPtr finite(GroupPtr g, std::vector<Element> elements);
  /// Columns generate the sublattice.
  static SubgroupPtr lattice(GroupPtr g, const IntMatrix& columns);
  /// {(c1,c2,c3) : d_i | c_i}; d_i = 0 fixes the coordinate to 0.
  static SubgroupPtr heisenberg_box(GroupPtr g, std::int64_t d1, std::int64_t d2, std::int64_t d3);
  static SubgroupPtr product(GroupPtr g, SubgroupPtr a, SubgroupPtr b);
  /// Subgroup generated by a list; normalized to the most specific kind.
  static SubgroupPtr generated(GroupPtr g, std::vector<Element> gens);
  /// Free abelian and Heisenberg: the listed coordinates (0-based) fixed to 0.
  /// Direct product: the listed factors (0 or 1) replaced by the trivial group.
  static SubgroupPtr coordinate(GroupPtr g, const std::vector<int>& zero);

  const GroupPtr& parent() const { return parent_; }
  Kind kind() const { return kind_; }

  Tri contains(const Element& g) const;
  std::vector<Element> generators() const;
  Tri is_finite() const;
  /// All elements, when the subgroup is finite.
  std::optional<std::vector<Element>> elements() const;
  SubgroupIndex index() const;
  Tri is_normal() const;
  Tri is_abelian() const;
  bool is_trivial() const;
  bool is_full() const;

  /// Catalog facts for the subgroup viewed as a group.
  Tri is_prime() const;
  Tri is_fc_hypercentral() const;
  Tri is_cstar_simple() const;

  /// Basis when the subgroup is free abelian (so every element is a unique
  /// product of powers of the basis).
  std::optional<std::vector<Element>> free_abelian_basis() const;
  /// Element with the given coordinates in free_abelian_basis().
  Element from_basis_coords(const std::vector<Element>& basis, const IntVector& c) const;

  std::string describe() const;

  // Variant data.
  const SubgroupPtr& factor(int i) const { return i == 0 ? left_ : right_; }
  const StallingsGraph& graph() const { return *graph_; }
  std::optional<std::array<std::int64_t, 3>> as_box() const;

private:
  explicit Subgroup(GroupPtr g, Kind k) : parent_(std::move(g)), kind_(k) {}
  static SubgroupPtr heisenberg_from(GroupPtr g, const std::vector<Element>& gens);

  // Heisenberg (nonabelian): membership through the projection lattice.
  std::optional<Element> heis_lift(const Element& g) const;

  GroupPtr parent_;
  Kind kind_;
  std::vector<Element> elements_;  // Finite: sorted elements
  std::vector<Element> gens_;      // generators (all kinds that store them)
  HermiteForm hnf_;                // Lattice: in Z^n; HeisenbergAbelian: chart lattice; Heisenberg: projection
  std::vector<Element> lifts_;     // Heisenberg: lifts of the projection basis
  Integer center_step_ = 0;        // Heisenberg: generator of the central part
  SubgroupPtr left_, right_;
  std::shared_ptr<const StallingsGraph> graph_;
};

/// Chart coordinates on Heisenberg: injective, additive on commuting pairs.
IntVector heisenberg_chart(const Element& g);
Element heisenberg_unchart(const IntVector& v);

Tri subgroup_equal(const Subgroup& a, const Subgroup& b);
/// a is contained in b.
Tri subgroup_le(const Subgroup& a, const Subgroup& b);
/// Intersection when the catalog supports it.
std::optional<SubgroupPtr> intersect(const SubgroupPtr& a, const SubgroupPtr& b);

// ---------------------------------------------------------------------------
// Conjugacy

/// Orbit of g under conjugation by H.
struct Classification {
  enum class Kind { Finite, Infinite, Unknown };
  Kind kind = Kind::Unknown;
  std::vector<Element> elements;  // Finite: sorted orbit
  std::string certificate;        // Infinite: rule tag; Unknown: reason

  static Classification finite(std::vector<Element> elems);
  static Classification infinite(std::string tag) { return {Kind::Infinite, {}, std::move(tag)}; }
  static Classification unknown(std::string why) { return {Kind::Unknown, {}, std::move(why)}; }
};

struct SearchCaps {
  std::size_t max_visited = 10000;
  int max_depth = 24;
};

/// Caps used when none are passed explicitly; per thread.
const SearchCaps& default_search_caps();

/// Overrides default_search_caps() for its lifetime.
class ScopedSearchCaps {
public:
  explicit ScopedSearchCaps(SearchCaps caps);
  ~ScopedSearchCaps();
  ScopedSearchCaps(const ScopedSearchCaps&) = delete;
  ScopedSearchCaps& operator=(const ScopedSearchCaps&) = delete;

private:
  SearchCaps saved_;
};

Classification h_conjugacy_class(const Element& g, const Subgroup& h, const SearchCaps& caps = default_search_caps());

/// Generators of C_H(g), or nullopt when the catalog cannot produce them.
std::optional<std::vector<Element>> centralizer_generators(const Subgroup& h, const Element& g);

/// C_G(H) inside the parent group.
std::optional<SubgroupPtr> centralizer_of_subgroup(const SubgroupPtr& h);

/// Whether every finite H-class in the parent is a singleton, i.e. FC_G(H) = C_G(H).
Tri fc_equals_centralizer(const Subgroup& h);

}  // namespace kleppner
