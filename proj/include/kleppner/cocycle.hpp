// Two-cocycles on catalog groups, the twist function tilde, and validation.
#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kleppner/group.hpp"
#include "kleppner/phase.hpp"
#include "kleppner/subgroup.hpp"

namespace kleppner {

class CocycleError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A map beta: G -> T with beta(e) = 0, used for similarity transforms.
class Beta {
public:
  enum class Kind { Zero, Table, Quadratic, Hashed };

  static Beta zero() { return Beta(Kind::Zero); }
  /// Finitely supported; elements not listed map to 0.
  static Beta table(std::vector<std::pair<Element, Phase>> values);
  /// Vector groups: sum_{j<=k} quad[j][k] x_j x_k + sum_j lin[j] x_j.
  static Beta quadratic(std::vector<std::vector<Exponent>> quad, std::vector<Exponent> lin);
  /// Pseudo-random rational values k/denominator keyed by the element's normal form.
  static Beta hashed(std::uint64_t seed, std::int64_t denominator);

  Kind kind() const { return kind_; }
  Phase operator()(const Group& g, const Element& x) const;
  std::string describe() const;

private:
  explicit Beta(Kind k) : kind_(k) {}

  Kind kind_;
  std::vector<std::pair<Element, Phase>> table_;
  std::vector<std::vector<Exponent>> quad_;
  std::vector<Exponent> lin_;
  std::uint64_t seed_ = 0;
  std::int64_t denominator_ = 1;
};

/// An intrinsic copy of a subgroup: a catalog group K and an injective
/// homomorphism K -> parent onto the subgroup.
struct Realization {
  GroupPtr group;
  SubgroupPtr image;
  std::function<Element(const Element&)> embed;
};

std::optional<Realization> realize(const SubgroupPtr& h);

class Cocycle;
using CocyclePtr = std::shared_ptr<const Cocycle>;

class Cocycle {
public:
  enum class Kind {
    Trivial,
    Bicharacter,
    HeisenbergGammaTheta,
    F2Z2,
    FiniteTablePhase,
    Product,
    Restriction,
    Similarity,
    Pullback  // restriction transported to an intrinsic copy of the subgroup
  };

  static CocyclePtr trivial(GroupPtr g);
  /// sigma(x,y) = sum_{j,k} x_j B_jk y_k on FreeAbelian(n).
  static CocyclePtr bicharacter(GroupPtr g, std::vector<std::vector<Exponent>> b);
  /// sigma(x,y) = (theta/2)(x1 y2 - x2 y1) on Z^2.
  static CocyclePtr rotation(GroupPtr g, const Exponent& theta);
  /// sigma(x,y) = (1/2) Theta . (x cross y) on Z^3.
  static CocyclePtr triple_product(GroupPtr g, const std::vector<Exponent>& theta);
  static CocyclePtr heisenberg(GroupPtr g, Exponent gamma, Exponent theta);
  /// G = F_2 x Z_2; value 1/2 when the first argument has Z_2 part 1 and the
  /// j-th word statistic of the second argument's free part is odd.
  static CocyclePtr f2z2(GroupPtr g, int j);
  /// Row-major order x order table of rational phases.
  static CocyclePtr finite_table(GroupPtr g, std::vector<Phase> table);
  static CocyclePtr product(GroupPtr g, CocyclePtr a, CocyclePtr b);
  /// Same group, evaluation restricted to the subgroup.
  static CocyclePtr restriction(CocyclePtr base, SubgroupPtr h);
  static CocyclePtr similarity(CocyclePtr base, Beta beta);
  /// sigma composed with the embedding, as a cocycle on r.group.
  static CocyclePtr pullback(CocyclePtr base, const Realization& r);

  const GroupPtr& group() const { return group_; }
  Kind kind() const { return kind_; }
  BasisPtr basis() const;
  std::string describe() const;

  Phase eval(const Element& g, const Element& h) const;
  /// sigma(h,g) - sigma(hgh^-1, h)
  Phase tilde(const Element& h, const Element& g) const;

  /// Subgroup on which eval is defined (Restriction), else the whole group.
  SubgroupPtr domain() const;
  /// Random element of the domain.
  Element sample(std::mt19937_64& rng, int max_len = 8) const;

  /// True when every value is rational (always for finite-table cocycles).
  bool is_rational() const;
  /// Row-major table of values on a finite group.
  std::vector<Phase> tabulate() const;

  // Variant data.
  const CocyclePtr& base() const { return base_; }
  const SubgroupPtr& subgroup() const { return subgroup_; }
  const Beta& beta() const { return beta_; }
  int f2z2_index() const { return j_; }
  const std::vector<std::vector<Exponent>>& matrix() const { return matrix_; }
  const Exponent& gamma() const { return gamma_; }
  const Exponent& theta() const { return theta_; }

private:
  Cocycle(GroupPtr g, Kind k) : group_(std::move(g)), kind_(k) {}

  GroupPtr group_;
  Kind kind_;
  std::vector<std::vector<Exponent>> matrix_;  // Bicharacter
  Exponent gamma_, theta_;                     // Heisenberg
  int j_ = 0;                                  // F2Z2
  std::vector<Phase> table_;                   // FiniteTablePhase
  CocyclePtr base_, right_;                    // Product (base_ = left), Restriction, Similarity, Pullback
  SubgroupPtr subgroup_;                       // Restriction
  Beta beta_ = Beta::zero();                   // Similarity
  std::function<Element(const Element&)> embed_;  // Pullback
};

/// Exponent sums of a, of b, and of both in a word of F_2.
std::array<std::int64_t, 3> word_statistics(const Element& word);

// ---------------------------------------------------------------------------
// Validation

struct Budget {
  std::size_t samples = 2000;
  int max_len = 8;
  std::uint64_t seed = 1;
  /// Finite groups up to this order are checked exhaustively.
  std::size_t exhaustive_order = 64;
};

struct CheckResult {
  bool ok = true;
  std::string identity;           // which identity failed
  std::vector<Element> witness;   // the failing tuple
  std::size_t checked = 0;

  static CheckResult pass(std::size_t n) { return {true, {}, {}, n}; }
};

/// Normalization and sigma(g,h) + sigma(gh,k) = sigma(g,hk) + sigma(h,k).
CheckResult validate_cocycle(const Cocycle& sigma, const Budget& budget = {});

/// The left/right product identities for tilde and their commuting special cases.
CheckResult check_tilde_identities(const Cocycle& sigma, const Budget& budget = {});

/// Requires beta(e) = 0.
CocyclePtr similarity_transform(const CocyclePtr& sigma, const Beta& beta);

/// Random normalized rational cocycle on a finite group: a bicharacter or a
/// {0,1/2}-valued cocycle, plus a random coboundary.
CocyclePtr random_finite_cocycle(const GroupPtr& g, std::mt19937_64& rng);

}  // namespace kleppner
